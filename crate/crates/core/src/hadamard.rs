//! Generators for the small (quaternary) Hadamard matrices that feed the
//! construction.

use crate::error::{Error, Result};
use crate::field::FieldTable;
use crate::matrix::{is_hadamard, kron, QuatMatrix, SignMatrix, UnitMatrix};

/// Sylvester matrix of order `2^k`; entry `(r, c)` is `(−1)^{popcount(r & c)}`.
pub fn sylvester(k: u32) -> Result<SignMatrix> {
    if k > 16 {
        return Err(Error::SylvesterExponent(k));
    }
    let n = 1usize << k;
    SignMatrix::try_from_fn(n, n, |r, c| (((r & c).count_ones() & 1) as u8) << 1)
}

/// Paley type I Hadamard matrix of order `q + 1` for `q ≡ 3 (mod 4)`.
///
/// Index 0 is the point at infinity, index `1 + a` is field label `a`.
/// The matrix is `I + S` with `S = [[0, 𝟏ᵀ], [−𝟏, Q]]` and `Q[a][b] = χ(a − b)`.
pub fn paley_one(ft: &FieldTable) -> Result<SignMatrix> {
    let q = ft.order();
    if q % 4 != 3 {
        return Err(Error::PaleyOrder(q));
    }
    let residues = ft.quadratic_residues()?;
    SignMatrix::try_from_fn(q + 1, q + 1, |r, c| {
        let v: i8 = match (r, c) {
            _ if r == c => 1,
            (0, _) => 1,
            (_, 0) => -1,
            _ => ft.chi(&residues, ft.sub(r - 1, c - 1)),
        };
        if v < 0 {
            2
        } else {
            0
        }
    })
}

/// Views a real Hadamard matrix as a quaternary one (exponents 0 and 2).
pub fn quaternary_embed(m: &SignMatrix) -> QuatMatrix {
    m.to_quat()
}

/// Kronecker product of two quaternary Hadamard matrices.
pub fn quat_tensor(a: &QuatMatrix, b: &QuatMatrix) -> Result<QuatMatrix> {
    for (name, m) in [("left", a), ("right", b)] {
        if !is_hadamard(m) {
            return Err(Error::NotHadamard(format!("{name} factor")));
        }
    }
    kron(a, b)
}

/// The order-2 quaternary Hadamard matrix `[[1, i], [1, −i]]`.
pub fn quaternary_seed() -> QuatMatrix {
    QuatMatrix::from_exp_rows(&[[0, 1], [0, 3]]).expect("2x2")
}

/// A quaternary Hadamard matrix of order `2^k` (`k ≥ 1`) carrying `±i`
/// entries: `sylvester(k − 1) ⊗ [[1, i], [1, −i]]`. Its first column is
/// already all-ones, so normalization keeps the `±i` entries.
pub fn quaternary_tensor(k: u32) -> Result<QuatMatrix> {
    if k == 0 {
        return Err(Error::NotHadamard(
            "order-1 matrix cannot carry ±i entries".into(),
        ));
    }
    quat_tensor(&quaternary_embed(&sylvester(k - 1)?), &quaternary_seed())
}

/// Picks a real Hadamard matrix of order `n`: Sylvester for powers of two,
/// Paley type I when `n − 1` is a prime power `≡ 3 (mod 4)`.
pub fn real_hadamard(n: usize) -> Result<SignMatrix> {
    if n.is_power_of_two() {
        return sylvester(n.trailing_zeros());
    }
    if n >= 4 && n.is_multiple_of(4) {
        if let Ok(ft) = FieldTable::new(n - 1) {
            return paley_one(&ft);
        }
    }
    Err(Error::RealOrder(n))
}
