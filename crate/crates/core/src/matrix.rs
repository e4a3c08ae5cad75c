//! Bit-packed matrices over {±1} and over the fourth roots of unity.
//!
//! Every entry is stored as an exponent `e` of `i`, so `+1 ↦ 0`, `i ↦ 1`,
//! `-1 ↦ 2`, `-i ↦ 3`. [`SignMatrix`] keeps only the high bit (1 bit per
//! entry, set for −1), [`QuatMatrix`] keeps both bits as two bit planes.
//! Rows are padded to whole 64-bit words and the padding is always zero, so
//! row inner products reduce to popcounts over the packed words.
//!
//! All Gram matrices are taken over rows: `G = M·M*`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gauss::GaussInt;

const WORD_BITS: usize = 64;

fn words_for(n_cols: usize) -> usize {
    n_cols.div_ceil(WORD_BITS)
}

/// Whether a matrix is real (±1) or quaternary (±1, ±i).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    Sign,
    Quat,
}

/// Operations shared by [`SignMatrix`] and [`QuatMatrix`].
pub trait UnitMatrix: Clone + PartialEq + fmt::Debug + Send + Sync + Sized {
    const KIND: MatrixKind;

    fn n_rows(&self) -> usize;
    fn n_cols(&self) -> usize;

    /// Exponent `e` of the entry `i^e` at `(row, col)`.
    ///
    /// Panics when out of range.
    fn exp(&self, row: usize, col: usize) -> u8;

    /// Builds a matrix from an exponent function. Fails for a `SignMatrix`
    /// when any exponent is odd.
    fn try_from_fn<F>(n_rows: usize, n_cols: usize, f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> u8;

    /// `Σ_c M[i,c]·conj(M[j,c])` without bounds checks on `i`, `j`.
    fn row_inner_unchecked(&self, i: usize, j: usize) -> GaussInt;

    /// True when rows `i` and `j` are entrywise equal.
    fn rows_equal(&self, i: usize, j: usize) -> bool;

    /// Packed words of a row, usable as an exact equality key.
    fn row_key(&self, i: usize) -> Vec<u64>;

    fn is_square(&self) -> bool {
        self.n_rows() == self.n_cols()
    }

    fn entry(&self, row: usize, col: usize) -> GaussInt {
        GaussInt::unit(self.exp(row, col))
    }

    fn row_inner(&self, i: usize, j: usize) -> Result<GaussInt> {
        for index in [i, j] {
            if index >= self.n_rows() {
                return Err(Error::IndexOutOfRange {
                    index,
                    bound: self.n_rows(),
                });
            }
        }
        Ok(self.row_inner_unchecked(i, j))
    }

    fn to_gauss(&self) -> GaussMatrix {
        GaussMatrix::from_fn(self.n_rows(), self.n_cols(), |r, c| self.entry(r, c))
    }
}

/// A dense matrix over {+1, −1}, one bit per entry (bit set ↦ −1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    n_rows: usize,
    n_cols: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl SignMatrix {
    /// All-ones `n_rows × n_cols` matrix (`J`, or the column `𝟏` when `n_cols = 1`).
    pub fn ones(n_rows: usize, n_cols: usize) -> Self {
        let words_per_row = words_for(n_cols);
        Self {
            n_rows,
            n_cols,
            words_per_row,
            bits: vec![0; n_rows * words_per_row],
        }
    }

    /// Builds from `±1` entries given row by row.
    pub fn from_rows<R: AsRef<[i8]>>(rows: &[R]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::ones(n_rows, n_cols);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n_cols {
                return Err(Error::Shape(format!(
                    "row {r} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    1 => {}
                    -1 => m.set_negative(r, c),
                    _ => {
                        return Err(Error::Shape(format!(
                            "entry ({r}, {c}) = {v} is not ±1"
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    fn set_negative(&mut self, row: usize, col: usize) {
        self.bits[row * self.words_per_row + col / WORD_BITS] |= 1 << (col % WORD_BITS);
    }

    /// Returns a copy with the sign of one entry flipped.
    pub fn with_flipped(&self, row: usize, col: usize) -> Self {
        assert!(row < self.n_rows && col < self.n_cols);
        let mut out = self.clone();
        out.bits[row * self.words_per_row + col / WORD_BITS] ^= 1 << (col % WORD_BITS);
        out
    }

    /// Entry as `+1` or `-1`.
    pub fn sign(&self, row: usize, col: usize) -> i8 {
        if self.exp(row, col) == 0 {
            1
        } else {
            -1
        }
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    pub fn to_quat(&self) -> QuatMatrix {
        QuatMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            words_per_row: self.words_per_row,
            lo: vec![0; self.bits.len()],
            hi: self.bits.clone(),
        }
    }
}

impl UnitMatrix for SignMatrix {
    const KIND: MatrixKind = MatrixKind::Sign;

    fn n_rows(&self) -> usize {
        self.n_rows
    }

    fn n_cols(&self) -> usize {
        self.n_cols
    }

    fn exp(&self, row: usize, col: usize) -> u8 {
        assert!(row < self.n_rows && col < self.n_cols, "entry ({row}, {col}) out of range");
        let w = self.bits[row * self.words_per_row + col / WORD_BITS];
        (((w >> (col % WORD_BITS)) & 1) as u8) << 1
    }

    fn try_from_fn<F>(n_rows: usize, n_cols: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> u8,
    {
        let mut m = Self::ones(n_rows, n_cols);
        for r in 0..n_rows {
            for c in 0..n_cols {
                match f(r, c) & 3 {
                    0 => {}
                    2 => m.set_negative(r, c),
                    exp => return Err(Error::NotReal { row: r, col: c, exp }),
                }
            }
        }
        Ok(m)
    }

    fn row_inner_unchecked(&self, i: usize, j: usize) -> GaussInt {
        let diff: u32 = self
            .row_words(i)
            .iter()
            .zip(self.row_words(j))
            .map(|(a, b)| (a ^ b).count_ones())
            .sum();
        GaussInt::real(self.n_cols as i64 - 2 * diff as i64)
    }

    fn rows_equal(&self, i: usize, j: usize) -> bool {
        self.row_words(i) == self.row_words(j)
    }

    fn row_key(&self, i: usize) -> Vec<u64> {
        self.row_words(i).to_vec()
    }
}

impl fmt::Debug for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SignMatrix {}x{}", self.n_rows, self.n_cols)?;
        for r in 0..self.n_rows {
            let line: String = (0..self.n_cols)
                .map(|c| if self.exp(r, c) == 0 { '+' } else { '-' })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// A dense matrix over {1, i, −1, −i}, entries stored as 2-bit exponents of
/// `i` split over a low and a high bit plane.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuatMatrix {
    n_rows: usize,
    n_cols: usize,
    words_per_row: usize,
    lo: Vec<u64>,
    hi: Vec<u64>,
}

impl QuatMatrix {
    pub fn ones(n_rows: usize, n_cols: usize) -> Self {
        let words_per_row = words_for(n_cols);
        Self {
            n_rows,
            n_cols,
            words_per_row,
            lo: vec![0; n_rows * words_per_row],
            hi: vec![0; n_rows * words_per_row],
        }
    }

    /// Builds from exponent rows (`e` means `i^e`; values taken mod 4).
    pub fn from_exp_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        if let Some((r, row)) = rows.iter().enumerate().find(|(_, r)| r.as_ref().len() != n_cols) {
            return Err(Error::Shape(format!(
                "row {r} has {} entries, expected {n_cols}",
                row.as_ref().len()
            )));
        }
        Self::try_from_fn(rows.len(), n_cols, |r, c| rows[r].as_ref()[c])
    }

    fn set_exp(&mut self, row: usize, col: usize, e: u8) {
        let idx = row * self.words_per_row + col / WORD_BITS;
        let bit = 1u64 << (col % WORD_BITS);
        self.lo[idx] &= !bit;
        self.hi[idx] &= !bit;
        if e & 1 != 0 {
            self.lo[idx] |= bit;
        }
        if e & 2 != 0 {
            self.hi[idx] |= bit;
        }
    }

    /// Returns a copy with one entry multiplied by `i^delta`.
    pub fn with_rotated(&self, row: usize, col: usize, delta: u8) -> Self {
        let mut out = self.clone();
        let e = self.exp(row, col);
        out.set_exp(row, col, (e + delta) & 3);
        out
    }

    /// Converts to a [`SignMatrix`] when every exponent is 0 or 2.
    pub fn to_sign(&self) -> Result<SignMatrix> {
        if let Some(idx) = self.lo.iter().position(|&w| w != 0) {
            let row = idx / self.words_per_row.max(1);
            let col = (0..self.n_cols)
                .find(|&c| self.exp(row, c) & 1 != 0)
                .unwrap_or(0);
            return Err(Error::NotReal {
                row,
                col,
                exp: self.exp(row, col),
            });
        }
        Ok(SignMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            words_per_row: self.words_per_row,
            bits: self.hi.clone(),
        })
    }

    /// True when no entry is ±i.
    pub fn is_real(&self) -> bool {
        self.lo.iter().all(|&w| w == 0)
    }
}

impl UnitMatrix for QuatMatrix {
    const KIND: MatrixKind = MatrixKind::Quat;

    fn n_rows(&self) -> usize {
        self.n_rows
    }

    fn n_cols(&self) -> usize {
        self.n_cols
    }

    fn exp(&self, row: usize, col: usize) -> u8 {
        assert!(row < self.n_rows && col < self.n_cols, "entry ({row}, {col}) out of range");
        let idx = row * self.words_per_row + col / WORD_BITS;
        let shift = col % WORD_BITS;
        let lo = ((self.lo[idx] >> shift) & 1) as u8;
        let hi = ((self.hi[idx] >> shift) & 1) as u8;
        lo | (hi << 1)
    }

    fn try_from_fn<F>(n_rows: usize, n_cols: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> u8,
    {
        let mut m = Self::ones(n_rows, n_cols);
        for r in 0..n_rows {
            for c in 0..n_cols {
                let e = f(r, c) & 3;
                if e != 0 {
                    m.set_exp(r, c, e);
                }
            }
        }
        Ok(m)
    }

    fn row_inner_unchecked(&self, i: usize, j: usize) -> GaussInt {
        // Per entry the product is i^(a - b); count each difference mod 4.
        let w = self.words_per_row;
        let (mut n1, mut n2, mut n3) = (0i64, 0i64, 0i64);
        for k in 0..w {
            let (a0, a1) = (self.lo[i * w + k], self.hi[i * w + k]);
            let (b0, b1) = (self.lo[j * w + k], self.hi[j * w + k]);
            let d0 = a0 ^ b0;
            let borrow = !a0 & b0;
            let d1 = a1 ^ b1 ^ borrow;
            n1 += (d0 & !d1).count_ones() as i64;
            n2 += (!d0 & d1).count_ones() as i64;
            n3 += (d0 & d1).count_ones() as i64;
        }
        let n0 = self.n_cols as i64 - n1 - n2 - n3;
        GaussInt::new(n0 - n2, n1 - n3)
    }

    fn rows_equal(&self, i: usize, j: usize) -> bool {
        let w = self.words_per_row;
        self.lo[i * w..(i + 1) * w] == self.lo[j * w..(j + 1) * w]
            && self.hi[i * w..(i + 1) * w] == self.hi[j * w..(j + 1) * w]
    }

    fn row_key(&self, i: usize) -> Vec<u64> {
        let w = self.words_per_row;
        let mut key = self.lo[i * w..(i + 1) * w].to_vec();
        key.extend_from_slice(&self.hi[i * w..(i + 1) * w]);
        key
    }
}

impl fmt::Debug for QuatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QuatMatrix {}x{}", self.n_rows, self.n_cols)?;
        for r in 0..self.n_rows {
            let line: String = (0..self.n_cols)
                .map(|c| char::from(b'0' + self.exp(r, c)))
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Dense exact matrix over ℤ[i]. Used for Gram matrices, indicator
/// Kronecker sums and the algebraic identity checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussMatrix {
    n_rows: usize,
    n_cols: usize,
    data: Vec<GaussInt>,
}

/// Row Gram matrix `M·M*`.
pub type GramMatrix = GaussMatrix;

impl GaussMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            n_rows,
            n_cols,
            data: vec![GaussInt::ZERO; n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| GaussInt::real((r == c) as i64))
    }

    /// All-ones matrix `J`.
    pub fn ones(n_rows: usize, n_cols: usize) -> Self {
        Self::from_fn(n_rows, n_cols, |_, _| GaussInt::ONE)
    }

    pub fn from_fn<F: FnMut(usize, usize) -> GaussInt>(n_rows: usize, n_cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for r in 0..n_rows {
            for c in 0..n_cols {
                data.push(f(r, c));
            }
        }
        Self { n_rows, n_cols, data }
    }

    /// Integer matrix from row-major values.
    pub fn from_ints(n_rows: usize, n_cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), n_rows * n_cols);
        Self::from_fn(n_rows, n_cols, |r, c| GaussInt::real(values[r * n_cols + c]))
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn get(&self, r: usize, c: usize) -> GaussInt {
        self.data[r * self.n_cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussInt) {
        self.data[r * self.n_cols + c] = v;
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |r, c| self.get(c, r).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n_cols, self.n_rows, |r, c| self.get(c, r))
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.n_cols != rhs.n_rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        let mut out = Self::zeros(self.n_rows, rhs.n_cols);
        for r in 0..self.n_rows {
            for k in 0..self.n_cols {
                let a = self.get(r, k);
                if a == GaussInt::ZERO {
                    continue;
                }
                for c in 0..rhs.n_cols {
                    out.data[r * rhs.n_cols + c] += a * rhs.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, s: GaussInt) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(GaussInt, GaussInt) -> GaussInt) -> Result<Self> {
        if (self.n_rows, self.n_cols) != (rhs.n_rows, rhs.n_cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.n_rows, self.n_cols, rhs.n_rows, rhs.n_cols
            )));
        }
        Ok(Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kron(&self, rhs: &Self) -> Result<Self> {
        let n_rows = self
            .n_rows
            .checked_mul(rhs.n_rows)
            .ok_or(Error::DimensionOverflow(self.n_rows, rhs.n_rows))?;
        let n_cols = self
            .n_cols
            .checked_mul(rhs.n_cols)
            .ok_or(Error::DimensionOverflow(self.n_cols, rhs.n_cols))?;
        Ok(Self::from_fn(n_rows, n_cols, |r, c| {
            self.get(r / rhs.n_rows, c / rhs.n_cols) * rhs.get(r % rhs.n_rows, c % rhs.n_cols)
        }))
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hconcat(&self, rhs: &Self) -> Result<Self> {
        if self.n_rows != rhs.n_rows {
            return Err(Error::Shape(format!(
                "cannot concatenate {} rows with {} rows",
                self.n_rows, rhs.n_rows
            )));
        }
        let n_cols = self.n_cols + rhs.n_cols;
        Ok(Self::from_fn(self.n_rows, n_cols, |r, c| {
            if c < self.n_cols {
                self.get(r, c)
            } else {
                rhs.get(r, c - self.n_cols)
            }
        }))
    }

    pub fn is_hermitian(&self) -> bool {
        self.n_rows == self.n_cols
            && (0..self.n_rows).all(|r| (r..self.n_cols).all(|c| self.get(r, c) == self.get(c, r).conj()))
    }

    /// Distinct off-diagonal values, sorted.
    pub fn off_diagonal_values(&self) -> Vec<GaussInt> {
        let mut vals: Vec<GaussInt> = (0..self.n_rows)
            .flat_map(|r| (0..self.n_cols).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect();
        vals.sort_unstable();
        vals.dedup();
        vals
    }
}

/// `Σ_c M[i,c]·conj(M[j,c])`; errors when an index is out of range.
pub fn row_inner<M: UnitMatrix>(m: &M, i: usize, j: usize) -> Result<GaussInt> {
    m.row_inner(i, j)
}

/// Row Gram matrix `M·M*`.
pub fn gram_rows<M: UnitMatrix>(m: &M) -> GramMatrix {
    let n = m.n_rows();
    let mut g = GaussMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = m.row_inner_unchecked(i, j);
            g.set(i, j, v);
            g.set(j, i, v.conj());
        }
    }
    g
}

/// True iff `m` is square and `M·M* = n·I`.
pub fn is_hadamard<M: UnitMatrix>(m: &M) -> bool {
    m.is_square()
        && (0..m.n_rows()).all(|i| (i + 1..m.n_rows()).all(|j| m.row_inner_unchecked(i, j) == GaussInt::ZERO))
}

/// Kronecker product `a ⊗ b`, returned in the representation of `b`.
///
/// Fails with [`Error::NotReal`] when `b` is a `SignMatrix` and `a` carries
/// `±i` entries.
pub fn kron<A: UnitMatrix, B: UnitMatrix>(a: &A, b: &B) -> Result<B> {
    let n_rows = a
        .n_rows()
        .checked_mul(b.n_rows())
        .ok_or(Error::DimensionOverflow(a.n_rows(), b.n_rows()))?;
    let n_cols = a
        .n_cols()
        .checked_mul(b.n_cols())
        .ok_or(Error::DimensionOverflow(a.n_cols(), b.n_cols()))?;
    let (br, bc) = (b.n_rows(), b.n_cols());
    B::try_from_fn(n_rows, n_cols, |r, c| {
        a.exp(r / br, c / bc) + b.exp(r % br, c % bc)
    })
}

/// Multiplies each row by the inverse of its first entry so that the
/// first column becomes all-ones.
pub fn normalize_first_column<M: UnitMatrix>(m: &M) -> M {
    if m.n_cols() == 0 {
        return m.clone();
    }
    M::try_from_fn(m.n_rows(), m.n_cols(), |r, c| {
        (m.exp(r, c) + 4 - m.exp(r, 0)) & 3
    })
    .expect("row scaling by a real sign keeps a sign matrix real")
}

/// Copies out the columns `start..start + width`.
pub fn select_columns<M: UnitMatrix>(m: &M, start: usize, width: usize) -> M {
    assert!(start + width <= m.n_cols());
    M::try_from_fn(m.n_rows(), width, |r, c| m.exp(r, start + c)).expect("subset of a valid matrix")
}

/// Copies out an arbitrary ordered list of columns.
pub fn gather_columns<M: UnitMatrix>(m: &M, cols: &[usize]) -> M {
    M::try_from_fn(m.n_rows(), cols.len(), |r, c| m.exp(r, cols[c])).expect("subset of a valid matrix")
}

/// Copies out an ordered list of rows.
pub fn gather_rows<M: UnitMatrix>(m: &M, rows: &[usize]) -> M {
    M::try_from_fn(rows.len(), m.n_cols(), |r, c| m.exp(rows[r], c)).expect("subset of a valid matrix")
}

/// Splits `m` into consecutive column blocks of the given widths.
pub fn column_blocks<M: UnitMatrix>(m: &M, widths: &[usize]) -> Result<Vec<M>> {
    let sum: usize = widths.iter().sum();
    if sum != m.n_cols() {
        return Err(Error::WidthMismatch {
            sum,
            n_cols: m.n_cols(),
        });
    }
    let mut start = 0;
    Ok(widths
        .iter()
        .map(|&w| {
            let block = select_columns(m, start, w);
            start += w;
            block
        })
        .collect())
}

/// Horizontal concatenation of matrices with equal row counts.
pub fn hstack<M: UnitMatrix>(parts: &[&M]) -> Result<M> {
    let n_rows = parts.first().map_or(0, |p| p.n_rows());
    if let Some(p) = parts.iter().find(|p| p.n_rows() != n_rows) {
        return Err(Error::Shape(format!(
            "cannot stack {} rows with {n_rows} rows",
            p.n_rows()
        )));
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut n_cols = 0;
    for p in parts {
        offsets.push(n_cols);
        n_cols += p.n_cols();
    }
    let mut owner = Vec::with_capacity(n_cols);
    for (k, p) in parts.iter().enumerate() {
        owner.extend((0..p.n_cols()).map(|c| (k, c)));
    }
    M::try_from_fn(n_rows, n_cols, |r, c| {
        let (k, local) = owner[c];
        parts[k].exp(r, local)
    })
}
