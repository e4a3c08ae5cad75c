//! Balancedly multi-splittable Hadamard matrices.
//!
//! A Hadamard matrix of order `q²` is balancedly multi-splittable (BMS) when
//! it has the block form `[𝟏 H₁ ⋯ H_{q+1}]` with blocks of width `q − 1` and,
//! for every choice of `q/2` blocks, the rows of their concatenation have
//! pairwise inner products `±q/2`. Such matrices exist exactly when an
//! OA₁(q², q+1, q, 2) and a Hadamard matrix of order `q` do; the same holds
//! for quaternary matrices over `{±1, ±i}`.
//!
//! This crate builds both directions of that equivalence:
//!
//! * [`construct::construct_bms`] turns an array and a Hadamard matrix into a
//!   BMS matrix;
//! * [`verify`] checks multi-splittability exhaustively, blockwise, or on
//!   sampled subsets, producing a [`verify::SplitCertificate`];
//! * [`extract::extract_oa`] recovers the array from a BMS matrix.
//!
//! Supporting modules provide bit-packed matrices ([`matrix`]), finite
//! fields ([`field`]), small Hadamard generators ([`hadamard`]), orthogonal
//! arrays ([`oa`]), text codecs ([`io`]) and the `bmsh` command line
//! ([`cli`]).

pub mod cli;
pub mod construct;
pub mod error;
pub mod extract;
pub mod field;
pub mod gauss;
pub mod hadamard;
pub mod io;
pub mod matrix;
pub mod oa;
pub mod report;
pub mod verify;

pub use construct::{construct_bms, BmsMatrix};
pub use error::{Error, Result};
pub use extract::extract_oa;
pub use field::FieldTable;
pub use gauss::GaussInt;
pub use matrix::{is_hadamard, QuatMatrix, SignMatrix, UnitMatrix};
pub use oa::{oa_from_field, verify_oa, OrthogonalArray, SymbolArray};
pub use verify::{verify_multi_splittable, Mode, SplitCertificate};
