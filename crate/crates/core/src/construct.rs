//! Forward construction: an OA₁(q², q+1, q, 2) and a (quaternary) Hadamard
//! matrix `K` of order `q` give the multi-splittable matrix
//! `D̃ = [𝟏 | Σᵢ Aᵢ ⊗ rᵢ]` of order `q²`, where `(1, rᵢ)` are the rows of the
//! normalized `K`.

use crate::error::{Error, Result};
use crate::gauss::GaussInt;
use crate::matrix::{
    is_hadamard, normalize_first_column, select_columns, GaussMatrix, MatrixKind, UnitMatrix,
};
use crate::oa::{indicator_decompose, verify_oa, OrthogonalArray};

/// A matrix of order `q²` in the block form `[𝟏 H₁ ⋯ H_{q+1}]`, every
/// `Hᵢ` of width `q − 1`.
///
/// Blocks are numbered from 1; block 0 is the all-ones column. Wrapping a
/// matrix only checks its dimensions, so mutated or foreign matrices can be
/// handed to the verifiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BmsMatrix<M> {
    q: usize,
    matrix: M,
}

impl<M: UnitMatrix> BmsMatrix<M> {
    pub fn new(q: usize, matrix: M) -> Result<Self> {
        let order = q
            .checked_mul(q)
            .ok_or(Error::DimensionOverflow(q, q))?;
        if q == 0 || matrix.n_rows() != order || matrix.n_cols() != order {
            return Err(Error::MalformedBlocks(format!(
                "a {}x{} matrix has no block form for q = {q}",
                matrix.n_rows(),
                matrix.n_cols()
            )));
        }
        Ok(Self { q, matrix })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn order(&self) -> usize {
        self.q * self.q
    }

    pub fn matrix(&self) -> &M {
        &self.matrix
    }

    pub fn into_matrix(self) -> M {
        self.matrix
    }

    pub fn num_blocks(&self) -> usize {
        self.q + 1
    }

    /// `(1, q−1, …, q−1)` with `q + 1` trailing entries.
    pub fn block_widths(&self) -> Vec<usize> {
        std::iter::once(1)
            .chain(std::iter::repeat_n(self.q - 1, self.q + 1))
            .collect()
    }

    /// Column range of block `i` (`0` is the all-ones column).
    pub fn block_range(&self, i: usize) -> std::ops::Range<usize> {
        assert!(i <= self.q + 1, "block {i} out of range");
        if i == 0 {
            0..1
        } else {
            let start = 1 + (i - 1) * (self.q - 1);
            start..start + self.q - 1
        }
    }

    /// Copy of block `Hᵢ`.
    pub fn block(&self, i: usize) -> M {
        let r = self.block_range(i);
        select_columns(&self.matrix, r.start, r.len())
    }

    /// `[𝟏 Hᵢ]`.
    pub fn extended_block(&self, i: usize) -> M {
        let r = self.block_range(i);
        let cols: Vec<usize> = std::iter::once(0).chain(r).collect();
        crate::matrix::gather_columns(&self.matrix, &cols)
    }

    pub fn first_column_is_ones(&self) -> bool {
        (0..self.order()).all(|r| self.matrix.exp(r, 0) == 0)
    }

    /// Multi-splittability is only defined for even `q`.
    pub fn supports_multi_split(&self) -> bool {
        self.q.is_multiple_of(2)
    }

    pub fn kind(&self) -> MatrixKind {
        M::KIND
    }
}

/// One row `(leading entry, rᵢ)` of a normalized Hadamard matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardRow<M> {
    pub lead: GaussInt,
    pub tail: M,
}

/// Splits a normalized Hadamard matrix of order `q` into rows `(1, rᵢ)` and
/// checks `rᵢrᵢ* = q − 1`, `rᵢrⱼ* = −1`.
pub fn split_hadamard_rows<M: UnitMatrix>(k: &M) -> Result<Vec<HadamardRow<M>>> {
    let q = k.n_rows();
    if !k.is_square() {
        return Err(Error::NotHadamard(format!("{}x{} is not square", q, k.n_cols())));
    }
    if let Some(r) = (0..q).find(|&r| k.exp(r, 0) != 0) {
        return Err(Error::NotNormalized(r));
    }
    let tails = select_columns(k, 1, q.saturating_sub(1));
    for i in 0..q {
        for j in 0..q {
            let want = if i == j { q as i64 - 1 } else { -1 };
            let got = tails.row_inner_unchecked(i, j);
            if got != GaussInt::real(want) {
                return Err(Error::NotHadamard(format!(
                    "r{} r{}* = {got}, expected {want}",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok((0..q)
        .map(|i| HadamardRow {
            lead: GaussInt::ONE,
            tail: crate::matrix::gather_rows(&tails, &[i]),
        })
        .collect())
}

fn check_inputs<M: UnitMatrix>(a: &OrthogonalArray, k: &M) -> Result<usize> {
    let p = a.params();
    let q = p.q;
    if p.n != q * q || p.k != q + 1 || p.t != 2 || p.lambda != 1 {
        return Err(Error::InvalidArray(format!(
            "need OA_1({}, {}, {q}, 2), got OA_{}({}, {}, {q}, {})",
            q * q,
            q + 1,
            p.lambda,
            p.n,
            p.k,
            p.t
        )));
    }
    if !verify_oa(a) {
        return Err(Error::InvalidArray("strength-2 counting property fails".into()));
    }
    if k.n_rows() != q || k.n_cols() != q {
        return Err(Error::OrderMismatch {
            array: q,
            hadamard: k.n_rows(),
        });
    }
    if M::KIND == MatrixKind::Sign && !(q <= 2 || q.is_multiple_of(4)) {
        return Err(Error::RealOrder(q));
    }
    if !is_hadamard(k) {
        return Err(Error::NotHadamard(format!("order-{q} input")));
    }
    Ok(q)
}

/// Builds `D̃ = [𝟏 | Σᵢ Aᵢ ⊗ rᵢ]`.
///
/// Row `u`, block `c`, sub-column `w` of `D` equals `rᵢ[w]` with `i = A[u, c]`.
/// For odd `q` the result is Hadamard but not multi-splittable; see
/// [`BmsMatrix::supports_multi_split`].
pub fn construct_bms<M: UnitMatrix>(a: &OrthogonalArray, k: &M) -> Result<BmsMatrix<M>> {
    let q = check_inputs(a, k)?;
    let kn = normalize_first_column(k);
    split_hadamard_rows(&kn)?;
    let arr = a.array();
    let width = q - 1;
    let d = M::try_from_fn(q * q, q * q, |u, col| {
        if col == 0 {
            return 0;
        }
        let (c, w) = ((col - 1) / width, (col - 1) % width);
        let symbol = arr.get(u, c) as usize;
        kn.exp(symbol - 1, 1 + w)
    })?;
    BmsMatrix::new(q, d)
}

/// The same matrix computed literally as `[𝟏 | Σᵢ Aᵢ ⊗ rᵢ]` with dense
/// Gaussian-integer Kronecker products. Slow; meant as a cross-check of
/// [`construct_bms`].
pub fn construct_dense<M: UnitMatrix>(a: &OrthogonalArray, k: &M) -> Result<GaussMatrix> {
    let q = check_inputs(a, k)?;
    let kn = normalize_first_column(k);
    let rows = split_hadamard_rows(&kn)?;
    let stack = indicator_decompose(a.array());
    let (n, kcols) = stack.dims();
    let mut d = GaussMatrix::zeros(n, kcols * (q - 1));
    for (i, row) in rows.iter().enumerate() {
        let ind = stack.indicator(i + 1);
        let ai = GaussMatrix::from_fn(n, kcols, |r, c| GaussInt::real(ind[r * kcols + c] as i64));
        d = d.add(&ai.kron(&row.tail.to_gauss())?)?;
    }
    GaussMatrix::ones(n, 1).hconcat(&d)
}
