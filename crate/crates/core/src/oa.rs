//! Orthogonal arrays over the symbols `1..=q`.
//!
//! [`SymbolArray`] is any `N × k` array over `{1..q}`; [`OrthogonalArray`]
//! adds the declared parameters `(N, k, q, t, λ)`. The distance, indicator
//! and bound machinery works on plain symbol arrays, because several of the
//! identities hold for arbitrary arrays.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldTable;

/// An `N × k` array over `{1..q}`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolArray {
    n_rows: usize,
    n_cols: usize,
    q: usize,
    data: Vec<u16>,
}

impl SymbolArray {
    pub fn new(n_rows: usize, n_cols: usize, q: usize, data: Vec<u16>) -> Result<Self> {
        if data.len() != n_rows * n_cols {
            return Err(Error::InvalidArray(format!(
                "{} entries for a {n_rows}x{n_cols} array",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|&s| s == 0 || s as usize > q) {
            return Err(Error::InvalidArray(format!(
                "entry ({}, {}) = {} outside 1..={q}",
                pos / n_cols.max(1),
                pos % n_cols.max(1),
                data[pos]
            )));
        }
        Ok(Self {
            n_rows,
            n_cols,
            q,
            data,
        })
    }

    pub fn from_rows<R: AsRef<[u16]>>(q: usize, rows: &[R]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * n_cols);
        for (i, r) in rows.iter().enumerate() {
            if r.as_ref().len() != n_cols {
                return Err(Error::InvalidArray(format!("row {i} has wrong length")));
            }
            data.extend_from_slice(r.as_ref());
        }
        Self::new(rows.len(), n_cols, q, data)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn get(&self, r: usize, c: usize) -> u16 {
        self.data[r * self.n_cols + c]
    }

    pub fn row(&self, r: usize) -> &[u16] {
        &self.data[r * self.n_cols..(r + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u16]> {
        self.data.chunks(self.n_cols.max(1)).take(self.n_rows)
    }

    /// Copy with one entry replaced.
    pub fn with_entry(&self, r: usize, c: usize, symbol: u16) -> Result<Self> {
        let mut data = self.data.clone();
        data[r * self.n_cols + c] = symbol;
        Self::new(self.n_rows, self.n_cols, self.q, data)
    }

    /// Copy with row `r` removed.
    pub fn without_row(&self, r: usize) -> Self {
        let mut data = self.data.clone();
        data.drain(r * self.n_cols..(r + 1) * self.n_cols);
        Self {
            n_rows: self.n_rows - 1,
            data,
            ..*self
        }
    }

    /// Columns reordered so that new column `j` is old column `perm[j]`.
    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n_cols);
        let data = (0..self.n_rows)
            .flat_map(|r| perm.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect();
        Self { data, ..*self }
    }

    /// Renames the symbols of each column in order of first appearance
    /// (first new symbol ↦ 1, next ↦ 2, …), keeping row order.
    pub fn canonical_relabel(&self) -> Self {
        let mut data = self.data.clone();
        for c in 0..self.n_cols {
            let mut map = vec![0u16; self.q + 1];
            let mut next = 1;
            for r in 0..self.n_rows {
                let s = self.get(r, c) as usize;
                if map[s] == 0 {
                    map[s] = next;
                    next += 1;
                }
                data[r * self.n_cols + c] = map[s];
            }
        }
        Self { data, ..*self }
    }
}

/// An array together with its declared parameters `OA_λ(N, k, q, t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrthogonalArray {
    array: SymbolArray,
    strength: usize,
    index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OaParams {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub t: usize,
    pub lambda: usize,
}

impl OrthogonalArray {
    /// Wraps an array with declared strength and index. Checks the shape
    /// relation `N = λ·qᵗ`, not the counting property (see [`verify_oa`]).
    pub fn new(array: SymbolArray, strength: usize, index: usize) -> Result<Self> {
        let expected = (array.q as u128)
            .checked_pow(strength as u32)
            .and_then(|v| v.checked_mul(index as u128));
        if expected != Some(array.n_rows as u128) {
            return Err(Error::InvalidArray(format!(
                "N = {} but λ·qᵗ = {index}·{}^{strength}",
                array.n_rows, array.q
            )));
        }
        if strength > array.n_cols {
            return Err(Error::InvalidArray(format!(
                "strength {strength} exceeds {} columns",
                array.n_cols
            )));
        }
        Ok(Self {
            array,
            strength,
            index,
        })
    }

    pub fn params(&self) -> OaParams {
        OaParams {
            n: self.array.n_rows,
            k: self.array.n_cols,
            q: self.array.q,
            t: self.strength,
            lambda: self.index,
        }
    }

    pub fn array(&self) -> &SymbolArray {
        &self.array
    }

    pub fn into_array(self) -> SymbolArray {
        self.array
    }

    pub fn q(&self) -> usize {
        self.array.q
    }

    pub fn canonical_relabel(&self) -> Self {
        Self {
            array: self.array.canonical_relabel(),
            ..*self
        }
    }
}

/// The classical OA₁(q², q+1, q, 2) of the Desarguesian plane: row `(a, b)`
/// holds `x·a + b` for each slope `x`, then `a` in the last column.
/// Rows are lexicographic in `(a, b)`, symbols are labels + 1.
pub fn oa_from_field(ft: &FieldTable) -> OrthogonalArray {
    let q = ft.order();
    let mut data = Vec::with_capacity(q * q * (q + 1));
    for a in 0..q {
        for b in 0..q {
            data.extend((0..q).map(|x| (ft.add(ft.mul(x, a), b) + 1) as u16));
            data.push((a + 1) as u16);
        }
    }
    let array = SymbolArray::new(q * q, q + 1, q, data).expect("labels lie in 0..q");
    OrthogonalArray::new(array, 2, 1).expect("q² rows")
}

fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) -> bool {
    if k > n {
        return true;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !f(&idx) {
            return false;
        }
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return true;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Exhaustive check that every `t` columns contain each `t`-tuple exactly
/// `λ` times.
pub fn verify_oa(oa: &OrthogonalArray) -> bool {
    let a = &oa.array;
    let (q, t) = (a.q, oa.strength);
    let Some(tuples) = q.checked_pow(t as u32) else {
        return false;
    };
    if a.n_rows != oa.index * tuples {
        return false;
    }
    let mut counts = vec![0usize; tuples];
    for_each_subset(a.n_cols, t, |cols| {
        counts.iter_mut().for_each(|c| *c = 0);
        for r in 0..a.n_rows {
            let code = cols
                .iter()
                .fold(0usize, |acc, &c| acc * q + (a.get(r, c) as usize - 1));
            counts[code] += 1;
        }
        counts.iter().all(|&c| c == oa.index)
    })
}

/// `A = Σ i·Aᵢ` with disjoint 0/1 matrices `Aᵢ`, one per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndicatorStack {
    n_rows: usize,
    n_cols: usize,
    /// `mats[i - 1]` is `Aᵢ`, row-major.
    mats: Vec<Vec<u8>>,
}

impl IndicatorStack {
    pub fn q(&self) -> usize {
        self.mats.len()
    }

    /// The 0/1 matrix for `symbol` (1-based), row-major.
    pub fn indicator(&self, symbol: usize) -> &[u8] {
        &self.mats[symbol - 1]
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    /// `Σ i·Aᵢ`.
    pub fn reconstruct(&self) -> Vec<u16> {
        let mut out = vec![0u16; self.n_rows * self.n_cols];
        for (i, m) in self.mats.iter().enumerate() {
            for (o, &b) in out.iter_mut().zip(m) {
                *o += (i as u16 + 1) * b as u16;
            }
        }
        out
    }

    /// `Σ Aᵢ`, which must be the all-ones matrix.
    pub fn support_sum(&self) -> Vec<u16> {
        let mut out = vec![0u16; self.n_rows * self.n_cols];
        for m in &self.mats {
            for (o, &b) in out.iter_mut().zip(m) {
                *o += b as u16;
            }
        }
        out
    }
}

pub fn indicator_decompose(a: &SymbolArray) -> IndicatorStack {
    let mats = (1..=a.q)
        .map(|s| a.data.iter().map(|&v| (v as usize == s) as u8).collect())
        .collect();
    IndicatorStack {
        n_rows: a.n_rows,
        n_cols: a.n_cols,
        mats,
    }
}

/// Pairwise Hamming distances between rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<u32>,
}

impl DistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j]
    }

    /// Histogram of off-diagonal distances over unordered pairs.
    pub fn histogram(&self) -> BTreeMap<u32, usize> {
        let mut h = BTreeMap::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                *h.entry(self.get(i, j)).or_insert(0) += 1;
            }
        }
        h
    }
}

fn hamming(a: &[u16], b: &[u16]) -> u32 {
    a.iter().zip(b).filter(|(x, y)| x != y).count() as u32
}

pub fn hamming_distance_matrix(a: &SymbolArray) -> DistanceMatrix {
    let n = a.n_rows;
    let mut data = vec![0u32; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = hamming(a.row(i), a.row(j));
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    DistanceMatrix { n, data }
}

/// Small dense integer matrix for the indicator identities.
#[derive(Debug, Clone, PartialEq, Eq)]
struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> i64) -> Self {
        let data = (0..rows * cols).map(|x| f(x / cols, x % cols)).collect();
        Self { rows, cols, data }
    }

    fn from_bits(rows: usize, cols: usize, bits: &[u8]) -> Self {
        Self {
            rows,
            cols,
            data: bits.iter().map(|&b| b as i64).collect(),
        }
    }

    fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.data[c * self.cols + r])
    }

    fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a == 0 {
                    continue;
                }
                let src = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    fn add_assign(&mut self, rhs: &Self) {
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// Outcome of the indicator-matrix identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    /// `Σ AᵢAᵢᵀ = k·J − D` (holds for any array).
    pub distance_identity: bool,
    /// `Σ AᵢAᵢᵀ = J + q·I` (needs an OA(q², q+1, q, 2)).
    pub same_symbol_identity: bool,
    /// `Σ_{i≠j} AᵢAⱼᵀ = q(J − I)`.
    pub cross_symbol_identity: bool,
}

impl LemmaReport {
    pub fn all(&self) -> bool {
        self.distance_identity && self.same_symbol_identity && self.cross_symbol_identity
    }
}

/// Evaluates the three indicator identities by explicit integer matrix
/// products. The last two are reported false when the shape is not
/// `q² × (q+1)`.
pub fn check_lemma_identities(a: &SymbolArray) -> LemmaReport {
    let (n, k, q) = (a.n_rows, a.n_cols, a.q);
    let stack = indicator_decompose(a);
    let mats: Vec<IntMatrix> = stack
        .mats
        .iter()
        .map(|m| IntMatrix::from_bits(n, k, m))
        .collect();
    let ones = IntMatrix::from_fn(n, k, |_, _| 1);

    let mut same = IntMatrix::zeros(n, n);
    let mut cross = IntMatrix::zeros(n, n);
    for ai in &mats {
        let ait = ai.transpose();
        same.add_assign(&ai.matmul(&ait));
        // Σ_{j≠i} Aⱼ = (all-ones) − Aᵢ
        let mut rest = ones.clone();
        for (r, &b) in rest.data.iter_mut().zip(&ai.data) {
            *r -= b;
        }
        cross.add_assign(&ai.matmul(&rest.transpose()));
    }

    let dist = hamming_distance_matrix(a);
    let expected_dist = IntMatrix::from_fn(n, n, |i, j| k as i64 - dist.get(i, j) as i64);
    let plane_shape = n == q * q && k == q + 1;
    let expected_same = IntMatrix::from_fn(n, n, |i, j| 1 + if i == j { q as i64 } else { 0 });
    let expected_cross = IntMatrix::from_fn(n, n, |i, j| if i == j { 0 } else { q as i64 });

    LemmaReport {
        distance_identity: same == expected_dist,
        same_symbol_identity: plane_shape && same == expected_same,
        cross_symbol_identity: plane_shape && cross == expected_cross,
    }
}

/// Hamming distances observed after restricting to a set of columns.
pub fn restricted_distances(a: &SymbolArray, cols: &[usize]) -> Result<BTreeSet<usize>> {
    let unique: BTreeSet<usize> = cols.iter().copied().collect();
    if unique.len() != cols.len() || cols.iter().any(|&c| c >= a.n_cols) {
        return Err(Error::InvalidArray(format!(
            "column subset {cols:?} invalid for {} columns",
            a.n_cols
        )));
    }
    let mut seen = BTreeSet::new();
    for i in 0..a.n_rows {
        for j in i + 1..a.n_rows {
            let d = cols.iter().filter(|&&c| a.get(i, c) != a.get(j, c)).count();
            seen.insert(d);
        }
    }
    Ok(seen)
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Rao's lower bound `Σ_{i=0}^{e} C(k, i)(q − 1)ⁱ` on the number of rows of
/// an orthogonal array of strength `2e`.
pub fn rao_bound(k: u64, q: u64, e: u64) -> u128 {
    (0..=e)
        .map(|i| binomial(k, i) * (q as u128 - 1).pow(i as u32))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquidistantReport {
    pub size: usize,
    pub length: usize,
    pub q: usize,
    /// Length is `q + 1`, so the `q²` bound applies.
    pub bound_applies: bool,
    pub equidistant: bool,
    /// The common distance, when equidistant.
    pub distance: Option<u32>,
    pub bound: usize,
    pub within_bound: bool,
    pub attains_bound: bool,
    pub is_oa: bool,
    /// `attains_bound == is_oa`.
    pub consistent: bool,
}

/// Checks whether the rows form an equidistant code of length `q + 1`, how
/// its size compares with `q²`, and cross-checks attainment against
/// [`verify_oa`].
pub fn equidistant_code_bound_check(a: &SymbolArray) -> EquidistantReport {
    let hist = hamming_distance_matrix(a).histogram();
    let distance = match (hist.len(), hist.keys().next()) {
        (1, Some(&d)) if d > 0 => Some(d),
        _ => None,
    };
    let equidistant = distance.is_some() || a.n_rows < 2;
    let bound = a.q * a.q;
    let bound_applies = a.n_cols == a.q + 1;
    let attains_bound = bound_applies && equidistant && a.n_rows == bound;
    let is_oa = OrthogonalArray::new(a.clone(), 2, 1)
        .map(|oa| oa.params().k == a.q + 1 && verify_oa(&oa))
        .unwrap_or(false);
    EquidistantReport {
        size: a.n_rows,
        length: a.n_cols,
        q: a.q,
        bound_applies,
        equidistant,
        distance,
        bound,
        within_bound: a.n_rows <= bound,
        attains_bound,
        is_oa,
        consistent: attains_bound == is_oa,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn oa(q: usize) -> OrthogonalArray {
        oa_from_field(&FieldTable::new(q).unwrap())
    }

    #[test]
    fn q2_rows() {
        let a = oa(2);
        let rows: BTreeSet<Vec<u16>> = a.array().rows().map(|r| r.to_vec()).collect();
        let expected: BTreeSet<Vec<u16>> =
            [[1, 1, 1], [1, 2, 2], [2, 1, 2], [2, 2, 1]].iter().map(|r| r.to_vec()).collect();
        assert_eq!(rows, expected);
        assert!(verify_oa(&a));
    }

    #[test]
    fn constructed_arrays_verify() {
        for q in [2, 3, 4, 5, 7, 8, 9, 16] {
            let a = oa(q);
            assert_eq!(a.params(), OaParams { n: q * q, k: q + 1, q, t: 2, lambda: 1 });
            assert!(verify_oa(&a), "q = {q}");
        }
    }

    #[test]
    fn all_ones_is_not_an_oa() {
        let a = SymbolArray::new(4, 3, 2, vec![1; 12]).unwrap();
        assert!(!verify_oa(&OrthogonalArray::new(a, 2, 1).unwrap()));
    }

    #[test]
    fn shape_relation_enforced() {
        let a = SymbolArray::new(5, 3, 2, vec![1; 15]).unwrap();
        assert!(OrthogonalArray::new(a, 2, 1).is_err());
        assert!(SymbolArray::new(1, 2, 2, vec![1, 3]).is_err());
        assert!(SymbolArray::new(1, 2, 2, vec![0, 1]).is_err());
    }

    #[test]
    fn every_single_mutation_breaks_small_oas() {
        for q in [2, 3, 4] {
            let a = oa(q);
            for r in 0..a.params().n {
                for c in 0..a.params().k {
                    let old = a.array().get(r, c);
                    for s in (1..=q as u16).filter(|&s| s != old) {
                        let m = OrthogonalArray::new(a.array().with_entry(r, c, s).unwrap(), 2, 1).unwrap();
                        assert!(!verify_oa(&m), "q={q} ({r},{c}) {old}->{s}");
                    }
                }
            }
        }
    }

    #[test]
    fn indicator_examples() {
        let a = SymbolArray::new(1, 1, 2, vec![1]).unwrap();
        let s = indicator_decompose(&a);
        assert_eq!(s.indicator(1), &[1]);
        assert_eq!(s.indicator(2), &[0]);

        let a8 = oa(8);
        let s8 = indicator_decompose(a8.array());
        assert_eq!(s8.reconstruct(), a8.array().data);
        assert!(s8.support_sum().iter().all(|&v| v == 1));
        // each column of each Aᵢ has exactly q ones
        for sym in 1..=8 {
            for c in 0..9 {
                let col_sum: u32 = (0..64).map(|r| s8.indicator(sym)[r * 9 + c] as u32).sum();
                assert_eq!(col_sum, 8);
            }
        }
    }

    #[test]
    fn distance_examples() {
        let dup = SymbolArray::from_rows(3, &[[1, 2, 3], [1, 2, 3]]).unwrap();
        assert_eq!(hamming_distance_matrix(&dup).get(0, 1), 0);
        let far = SymbolArray::from_rows(5, &[[1, 1, 1, 1, 1], [2, 3, 4, 5, 2]]).unwrap();
        let d = hamming_distance_matrix(&far);
        assert_eq!((d.get(0, 1), d.get(1, 0), d.get(0, 0)), (5, 5, 0));
    }

    #[test]
    fn lemma_identities_for_fields() {
        for q in [2, 3, 4, 5, 8] {
            assert!(check_lemma_identities(oa(q).array()).all(), "q = {q}");
        }
        let arbitrary = SymbolArray::from_rows(3, &[[1, 2, 3, 1], [1, 1, 1, 1], [3, 3, 2, 1]]).unwrap();
        let rep = check_lemma_identities(&arbitrary);
        assert!(rep.distance_identity);
        assert!(!rep.same_symbol_identity && !rep.cross_symbol_identity);
    }

    #[test]
    fn restricted_distance_sets() {
        let a = oa(4);
        for s in 1..=5 {
            for_each_subset(5, s, |cols| {
                let seen = restricted_distances(a.array(), cols).unwrap();
                assert!(seen.iter().all(|&d| d + 1 == s || d == s), "{cols:?} {seen:?}");
                true
            });
        }
        assert_eq!(
            restricted_distances(a.array(), &[0, 1, 2, 3, 4]).unwrap(),
            BTreeSet::from([4])
        );
        assert!(restricted_distances(a.array(), &[0, 0]).is_err());
        assert!(restricted_distances(a.array(), &[5]).is_err());
    }

    #[test]
    fn rao_examples() {
        assert_eq!(rao_bound(5, 4, 1), 16);
        assert_eq!(rao_bound(5, 4, 0), 1);
        assert_eq!(rao_bound(9, 8, 1), 64);
        assert_eq!(rao_bound(7, 2, 2), 1 + 7 + 21);
    }

    #[test]
    fn equidistant_reports() {
        let a = oa(4);
        let rep = equidistant_code_bound_check(a.array());
        assert!(rep.equidistant && rep.attains_bound && rep.is_oa && rep.consistent);
        assert_eq!(rep.distance, Some(4));

        let cut = a.array().without_row(7);
        let rep = equidistant_code_bound_check(&cut);
        assert!(rep.equidistant && !rep.attains_bound && !rep.is_oa && rep.consistent);
        assert_eq!(rep.size, 15);

        let mixed = SymbolArray::from_rows(2, &[[1, 1, 1], [1, 2, 2], [2, 2, 2]]).unwrap();
        let rep = equidistant_code_bound_check(&mixed);
        assert!(!rep.equidistant);
        assert_eq!(rep.distance, None);
    }

    #[test]
    fn relabel_examples() {
        let col = SymbolArray::from_rows(3, &[[3], [3], [1], [2]]).unwrap();
        assert_eq!(col.canonical_relabel().data, vec![1, 1, 2, 3]);
        let a = oa(4).into_array();
        assert_eq!(a.canonical_relabel(), a);
    }
}
