//! Balanced splittability and multi-splittability checks.
//!
//! Two independent routes decide multi-splittability of a [`BmsMatrix`]:
//!
//! * **exhaustive**: for every `q/2`-subset `T` of blocks, the row Gram of
//!   `[H_t : t ∈ T]` must be `(q/2)(q−1)·I + (q/2)·S` with `S` zero on the
//!   diagonal and of modulus one elsewhere;
//! * **blockwise**: every `HᵢHᵢ*` has off-diagonal entries in `{q−1, −1}` and
//!   each pair of rows agrees (`q − 1`) in exactly one block. Then every
//!   subset sum is `(q−1) − (q/2 − 1) = q/2` or `−q/2`.
//!
//! For matrices whose first column is all-ones and which are Hadamard, the
//! two verdicts coincide.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::construct::BmsMatrix;
use crate::error::{Error, Result};
use crate::gauss::GaussInt;
use crate::matrix::{gather_rows, gram_rows, hstack, is_hadamard, MatrixKind, UnitMatrix};

/// How [`verify_multi_splittable`] establishes the subset property.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Mode {
    Blockwise,
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockFailure {
    pub block: usize,
    pub rows: (usize, usize),
    pub value: GaussInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementFailure {
    pub rows: (usize, usize),
    /// Blocks whose Gram entry is `q − 1` for this pair.
    pub agreeing_blocks: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetFailure {
    pub subset: Vec<usize>,
    pub rows: (usize, usize),
    pub value: GaussInt,
}

/// Parameters of the seeded subset sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerInfo {
    pub seed: u64,
    pub multiplier: u64,
    pub increment: u64,
    pub distinct: bool,
}

/// Evidence for (or against) multi-splittability.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitCertificate {
    pub q: usize,
    pub mode: Mode,
    /// `α = q/2`, the modulus of every off-diagonal subset Gram entry.
    pub alpha: usize,
    /// Per block `H₁..H_{q+1}`; empty unless the blockwise route ran.
    pub block_gram_ok: Vec<bool>,
    pub block_failures: Vec<BlockFailure>,
    pub agreement_failures: Vec<AgreementFailure>,
    pub subsets_total: u128,
    pub subsets_checked: usize,
    pub subset_failures: Vec<SubsetFailure>,
    /// Rows of `B` (as `0`/`1` strings) for the first checked subset, where
    /// the subset split matrix is `S = J − I − 2B`.
    pub agreement_matrix_b: Option<Vec<String>>,
    pub sampler: Option<SamplerInfo>,
}

impl SplitCertificate {
    pub fn passed(&self) -> bool {
        self.block_gram_ok.iter().all(|&ok| ok)
            && self.block_failures.is_empty()
            && self.agreement_failures.is_empty()
            && self.subset_failures.is_empty()
    }
}

/// Result for a single subset of blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetResult {
    pub subset: Vec<usize>,
    pub pass: bool,
    /// Multiset of off-diagonal `S` entries (upper triangle).
    pub s_values: BTreeMap<String, usize>,
    pub failure: Option<SubsetFailure>,
    /// `B` with `S = J − I − 2B`, when `S` is real and the subset passed.
    #[serde(skip)]
    pub agreement_matrix_b: Option<Vec<Vec<u8>>>,
}

pub(crate) fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `k`-subsets of `1..=n` in colexicographic order.
pub fn colex_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| i + 1).collect());
        // advance the lowest index that can move without colliding
        let Some(pos) = (0..k).find(|&i| {
            let limit = if i + 1 < k { idx[i + 1] } else { n };
            idx[i] + 1 < limit
        }) else {
            return out;
        };
        idx[pos] += 1;
        for (j, v) in idx.iter_mut().enumerate().take(pos) {
            *v = j;
        }
    }
}

const LCG_MUL: u64 = 6364136223846793005;
const LCG_INC: u64 = 1442695040888963407;

/// Seeded linear congruential generator for subset sampling.
#[derive(Debug, Clone)]
pub struct SubsetSampler {
    state: u64,
}

impl SubsetSampler {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    fn next_u32(&mut self) -> u32 {
        self.state = self.state.wrapping_mul(LCG_MUL).wrapping_add(LCG_INC);
        (self.state >> 32) as u32
    }

    fn below(&mut self, n: usize) -> usize {
        ((self.next_u32() as u64 * n as u64) >> 32) as usize
    }

    /// A uniformly drawn sorted `k`-subset of `1..=n` (partial Fisher–Yates).
    pub fn subset(&mut self, n: usize, k: usize) -> Vec<usize> {
        let mut pool: Vec<usize> = (1..=n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        let mut s = pool[..k].to_vec();
        s.sort_unstable();
        s
    }

    /// `count` distinct subsets (fewer if there are not that many).
    pub fn distinct_subsets(&mut self, n: usize, k: usize, count: usize) -> Vec<Vec<usize>> {
        let total = binomial(n, k);
        let want = (count as u128).min(total) as usize;
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(want);
        while out.len() < want {
            let s = self.subset(n, k);
            if seen.insert(s.clone()) {
                out.push(s);
            }
        }
        out
    }
}

fn is_unit_multiple(v: GaussInt, modulus: i64, kind: MatrixKind) -> bool {
    match kind {
        MatrixKind::Sign => v == GaussInt::real(modulus) || v == GaussInt::real(-modulus),
        MatrixKind::Quat => v.as_scaled_unit().is_some_and(|(m, _)| m == modulus),
    }
}

/// Checks one `q/2`-subset `T` of blocks (1-based).
pub fn verify_subset_split<M: UnitMatrix>(b: &BmsMatrix<M>, subset: &[usize]) -> Result<SubsetResult> {
    subset_split(b, subset, true)
}

fn subset_split<M: UnitMatrix>(b: &BmsMatrix<M>, subset: &[usize], want_b: bool) -> Result<SubsetResult> {
    let q = b.q();
    if !q.is_multiple_of(2) {
        return Err(Error::OddOrder(q));
    }
    if subset.len() != q / 2 {
        return Err(Error::SubsetSize {
            got: subset.len(),
            expected: q / 2,
        });
    }
    let unique: BTreeSet<usize> = subset.iter().copied().collect();
    if unique.len() != subset.len() || subset.iter().any(|&i| i == 0 || i > q + 1) {
        return Err(Error::MalformedBlocks(format!("invalid block subset {subset:?}")));
    }
    let blocks: Vec<M> = subset.iter().map(|&i| b.block(i)).collect();
    let refs: Vec<&M> = blocks.iter().collect();
    let sub = hstack(&refs)?;

    let alpha = (q / 2) as i64;
    let diag = GaussInt::real(alpha * (q as i64 - 1));
    let n = b.order();
    let mut s_values: BTreeMap<GaussInt, usize> = BTreeMap::new();
    let mut failure = None;
    'scan: for u in 0..n {
        if sub.row_inner_unchecked(u, u) != diag {
            failure = Some(SubsetFailure {
                subset: subset.to_vec(),
                rows: (u, u),
                value: sub.row_inner_unchecked(u, u),
            });
            break;
        }
        for v in u + 1..n {
            let val = sub.row_inner_unchecked(u, v);
            if !is_unit_multiple(val, alpha, M::KIND) {
                failure = Some(SubsetFailure {
                    subset: subset.to_vec(),
                    rows: (u, v),
                    value: val,
                });
                break 'scan;
            }
            let s = GaussInt::new(val.re / alpha, val.im / alpha);
            *s_values.entry(s).or_insert(0) += 1;
        }
    }
    let pass = failure.is_none();
    let agreement_matrix_b = (pass && want_b && s_values.keys().all(|s| s.is_real())).then(|| {
        (0..n)
            .map(|u| {
                (0..n)
                    .map(|v| (u != v && sub.row_inner_unchecked(u, v).re < 0) as u8)
                    .collect()
            })
            .collect()
    });
    Ok(SubsetResult {
        subset: subset.to_vec(),
        pass,
        s_values: s_values.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        failure,
        agreement_matrix_b,
    })
}

/// Per-block Gram check plus the unique-agreement property.
pub fn verify_block_grams<M: UnitMatrix>(b: &BmsMatrix<M>) -> Result<SplitCertificate> {
    let q = b.q();
    if q < 2 {
        return Err(Error::MalformedBlocks(format!("q = {q} has empty blocks")));
    }
    let n = b.order();
    let agree = GaussInt::real(q as i64 - 1);
    let minus_one = GaussInt::real(-1);
    let blocks: Vec<M> = (1..=q + 1).map(|i| b.block(i)).collect();

    let per_row: Vec<(Vec<BlockFailure>, Vec<AgreementFailure>)> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut bf = Vec::new();
            let mut af = Vec::new();
            for v in u + 1..n {
                let mut agreeing = Vec::new();
                for (i, blk) in blocks.iter().enumerate() {
                    let val = blk.row_inner_unchecked(u, v);
                    if val == agree {
                        agreeing.push(i + 1);
                    } else if val != minus_one {
                        bf.push(BlockFailure {
                            block: i + 1,
                            rows: (u, v),
                            value: val,
                        });
                    }
                }
                if agreeing.len() != 1 {
                    af.push(AgreementFailure {
                        rows: (u, v),
                        agreeing_blocks: agreeing,
                    });
                }
            }
            (bf, af)
        })
        .collect();

    let mut block_failures = Vec::new();
    let mut agreement_failures = Vec::new();
    for (bf, af) in per_row {
        block_failures.extend(bf);
        agreement_failures.extend(af);
    }
    let mut block_gram_ok = vec![true; q + 1];
    for f in &block_failures {
        block_gram_ok[f.block - 1] = false;
    }
    Ok(SplitCertificate {
        q,
        mode: Mode::Blockwise,
        alpha: q / 2,
        block_gram_ok,
        block_failures,
        agreement_failures,
        subsets_total: binomial(q + 1, q / 2),
        subsets_checked: 0,
        subset_failures: Vec::new(),
        agreement_matrix_b: None,
        sampler: None,
    })
}

fn run_subsets<M: UnitMatrix>(b: &BmsMatrix<M>, subsets: &[Vec<usize>]) -> Result<(Vec<SubsetFailure>, Option<Vec<String>>)> {
    let results: Vec<SubsetResult> = subsets
        .par_iter()
        .enumerate()
        .map(|(k, s)| subset_split(b, s, k == 0))
        .collect::<Result<_>>()?;
    let first_b = results.first().and_then(|r| r.agreement_matrix_b.as_ref()).map(|rows| {
        rows.iter()
            .map(|r| r.iter().map(|&x| char::from(b'0' + x)).collect())
            .collect()
    });
    Ok((results.into_iter().filter_map(|r| r.failure).collect(), first_b))
}

/// Runs the chosen route without the Hadamard precondition, so mutated
/// matrices can be compared across modes.
pub fn split_certificate<M: UnitMatrix>(b: &BmsMatrix<M>, mode: Mode) -> Result<SplitCertificate> {
    let q = b.q();
    if !q.is_multiple_of(2) {
        return Err(Error::OddOrder(q));
    }
    let total = binomial(q + 1, q / 2);
    let mut cert = SplitCertificate {
        q,
        mode,
        alpha: q / 2,
        block_gram_ok: Vec::new(),
        block_failures: Vec::new(),
        agreement_failures: Vec::new(),
        subsets_total: total,
        subsets_checked: 0,
        subset_failures: Vec::new(),
        agreement_matrix_b: None,
        sampler: None,
    };
    let subsets = match mode {
        Mode::Blockwise => return verify_block_grams(b),
        Mode::Exhaustive => colex_subsets(q + 1, q / 2),
        Mode::Sampled { count, seed } => {
            cert.sampler = Some(SamplerInfo {
                seed,
                multiplier: LCG_MUL,
                increment: LCG_INC,
                distinct: true,
            });
            SubsetSampler::new(seed).distinct_subsets(q + 1, q / 2, count)
        }
    };
    let (failures, first_b) = run_subsets(b, &subsets)?;
    cert.subsets_checked = subsets.len();
    cert.subset_failures = failures;
    cert.agreement_matrix_b = first_b;
    Ok(cert)
}

/// Verifies balanced multi-splittability. Requires even `q` and a Hadamard
/// matrix.
pub fn verify_multi_splittable<M: UnitMatrix>(b: &BmsMatrix<M>, mode: Mode) -> Result<SplitCertificate> {
    if !b.q().is_multiple_of(2) {
        return Err(Error::OddOrder(b.q()));
    }
    if !is_hadamard(b.matrix()) {
        return Err(Error::NotHadamard(format!("order-{} input", b.order())));
    }
    split_certificate(b, mode)
}

/// Column-Gram analysis of a row submatrix of a Hadamard matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenericSplitReport {
    pub ell: usize,
    /// Distinct off-diagonal entries of `H₁*H₁`.
    pub values: Vec<GaussInt>,
    /// At most two values (real) or a single modulus with power-of-`i`
    /// phases (quaternary, `α = β` case).
    pub two_valued: bool,
    pub a: Option<GaussInt>,
    pub b: Option<GaussInt>,
    /// Common modulus `α` in the quaternary reading.
    pub alpha: Option<i64>,
    /// Classes of values under `v ~ εv ~ εv*`; the general quaternary
    /// definition allows two classes.
    pub value_classes: Vec<GaussInt>,
    /// Adjacency matrix `A` with `H₁*H₁ = ℓI + aA + b(J − A − I)`, rows as
    /// `0`/`1` strings.
    pub adjacency: Option<Vec<String>>,
}

impl GenericSplitReport {
    /// Real two-valued case with `b = −a`.
    pub fn is_balanced_pm(&self) -> bool {
        match (self.a, self.b) {
            (Some(a), Some(b)) => self.two_valued && a == -b,
            _ => false,
        }
    }

    pub fn general_quaternary(&self) -> bool {
        self.value_classes.len() <= 2
    }
}

fn value_class(v: GaussInt) -> GaussInt {
    (0..4u8)
        .flat_map(|e| [v * GaussInt::unit(e), v.conj() * GaussInt::unit(e)])
        .max()
        .expect("nonempty")
}

/// Balanced splittability with respect to the row submatrix `H₁ = H[rows, :]`.
pub fn verify_balanced_splittable<M: UnitMatrix>(h: &M, rows: &[usize]) -> Result<GenericSplitReport> {
    if !is_hadamard(h) {
        return Err(Error::NotHadamard(format!("{}x{} input", h.n_rows(), h.n_cols())));
    }
    if rows.is_empty() {
        return Err(Error::Shape("empty row subset".into()));
    }
    if let Some(&r) = rows.iter().find(|&&r| r >= h.n_rows()) {
        return Err(Error::IndexOutOfRange {
            index: r,
            bound: h.n_rows(),
        });
    }
    let h1 = gather_rows(h, rows);
    let t = M::try_from_fn(h1.n_cols(), h1.n_rows(), |r, c| h1.exp(c, r))?;
    // (H₁*H₁)[j,k] = Σ conj(H₁[r,j])·H₁[r,k], the conjugate of the row Gram of H₁ᵀ
    let g = gram_rows(&t).conj_transpose().transpose();
    let values = g.off_diagonal_values();

    let mut classes: Vec<GaussInt> = values.iter().map(|&v| value_class(v)).collect();
    classes.sort_unstable();
    classes.dedup();

    let (two_valued, a, b, alpha) = match M::KIND {
        MatrixKind::Sign => {
            let two = values.len() <= 2;
            let a = values.last().copied();
            let b = values.first().copied();
            (two, a.filter(|_| two), b.filter(|_| two), None)
        }
        MatrixKind::Quat => {
            let moduli: BTreeSet<i64> = values
                .iter()
                .map(|&v| match v.as_scaled_unit() {
                    Some((m, _)) => m,
                    None if v == GaussInt::ZERO => 0,
                    None => -1,
                })
                .collect();
            let alpha = match moduli.iter().next() {
                Some(&m) if moduli.len() == 1 && m >= 0 => Some(m),
                None => Some(0),
                _ => None,
            };
            let real_two = values.len() <= 2 && values.iter().all(|v| v.is_real());
            let (a, b) = if real_two {
                (values.last().copied(), values.first().copied())
            } else {
                (None, None)
            };
            (alpha.is_some(), a, b, alpha)
        }
    };

    let adjacency = a.filter(|_| two_valued).map(|a| {
        (0..g.n_rows())
            .map(|j| {
                (0..g.n_cols())
                    .map(|k| if j != k && g.get(j, k) == a { '1' } else { '0' })
                    .collect()
            })
            .collect()
    });

    Ok(GenericSplitReport {
        ell: rows.len(),
        values,
        two_valued,
        a,
        b,
        alpha,
        value_classes: classes,
        adjacency,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::construct_bms;
    use crate::field::FieldTable;
    use crate::hadamard::{quaternary_tensor, sylvester};
    use crate::matrix::{QuatMatrix, SignMatrix};
    use crate::oa::oa_from_field;

    fn bms(q: usize) -> BmsMatrix<SignMatrix> {
        let oa = oa_from_field(&FieldTable::new(q).unwrap());
        construct_bms(&oa, &sylvester(q.trailing_zeros()).unwrap()).unwrap()
    }

    #[test]
    fn colex_order() {
        let s = colex_subsets(4, 2);
        assert_eq!(s, vec![vec![1, 2], vec![1, 3], vec![2, 3], vec![1, 4], vec![2, 4], vec![3, 4]]);
        assert_eq!(colex_subsets(9, 4).len(), 126);
        assert_eq!(colex_subsets(3, 0), vec![Vec::<usize>::new()]);
        assert!(colex_subsets(2, 3).is_empty());
    }

    #[test]
    fn sampler_is_reproducible() {
        let a = SubsetSampler::new(7).distinct_subsets(17, 8, 50);
        let b = SubsetSampler::new(7).distinct_subsets(17, 8, 50);
        assert_eq!(a, b);
        assert_eq!(a.iter().collect::<BTreeSet<_>>().len(), 50);
        assert!(a.iter().all(|s| s.len() == 8 && s.windows(2).all(|w| w[0] < w[1])));
        assert_eq!(SubsetSampler::new(1).distinct_subsets(5, 2, 100).len(), 10);
    }

    #[test]
    fn q4_modes() {
        let b = bms(4);
        for mode in [Mode::Blockwise, Mode::Exhaustive, Mode::Sampled { count: 3, seed: 1 }] {
            let c = verify_multi_splittable(&b, mode).unwrap();
            assert!(c.passed(), "{mode:?}");
        }
        let c = verify_multi_splittable(&b, Mode::Exhaustive).unwrap();
        assert_eq!(c.subsets_checked, 10);
        let rows = c.agreement_matrix_b.unwrap();
        assert_eq!(rows.len(), 16);
    }

    #[test]
    fn subset_errors() {
        let b = bms(4);
        assert_eq!(
            verify_subset_split(&b, &[1]),
            Err(Error::SubsetSize { got: 1, expected: 2 })
        );
        assert!(verify_subset_split(&b, &[1, 1]).is_err());
        assert!(verify_subset_split(&b, &[0, 1]).is_err());
        let r = verify_subset_split(&b, &[2, 5]).unwrap();
        assert!(r.pass);
        assert_eq!(r.s_values.values().sum::<usize>(), 120);
    }

    #[test]
    fn located_failure_after_flip() {
        let b = bms(4);
        let bad = BmsMatrix::new(4, b.matrix().with_flipped(3, 8)).unwrap();
        let c = verify_block_grams(&bad).unwrap();
        assert!(!c.passed());
        assert_eq!(c.block_gram_ok, vec![true, true, false, true, true]);
        assert!(c.block_failures.iter().all(|f| f.block == 3 && (f.rows.0 == 3 || f.rows.1 == 3)));
        assert!(matches!(verify_multi_splittable(&bad, Mode::Blockwise), Err(Error::NotHadamard(_))));
        let e = split_certificate(&bad, Mode::Exhaustive).unwrap();
        assert!(!e.passed());
    }

    #[test]
    fn odd_q_rejected() {
        let m = SignMatrix::ones(9, 9);
        let b = BmsMatrix::new(3, m).unwrap();
        assert_eq!(verify_multi_splittable(&b, Mode::Exhaustive), Err(Error::OddOrder(3)));
    }

    #[test]
    fn quaternary_q2_and_q4() {
        for k in [1u32, 2] {
            let q = 1usize << k;
            let oa = oa_from_field(&FieldTable::new(q).unwrap());
            let h: QuatMatrix = quaternary_tensor(k).unwrap();
            let b = construct_bms(&oa, &h).unwrap();
            assert!(verify_multi_splittable(&b, Mode::Exhaustive).unwrap().passed());
            assert!(verify_multi_splittable(&b, Mode::Blockwise).unwrap().passed());
        }
    }

    #[test]
    fn generic_split_examples() {
        let h4 = sylvester(2).unwrap();
        // columns of the first two rows are (1,1),(1,-1),(1,1),(1,-1)
        let r = verify_balanced_splittable(&h4, &[0, 1]).unwrap();
        assert_eq!(r.values, vec![GaussInt::ZERO, GaussInt::real(2)]);
        assert!(r.two_valued);
        assert!(!r.is_balanced_pm());

        // three rows of H8: each column pattern occurs twice, giving 3, 1, -1
        let r = verify_balanced_splittable(&sylvester(3).unwrap(), &[0, 1, 2]).unwrap();
        assert_eq!(r.values, vec![GaussInt::real(-1), GaussInt::real(1), GaussInt::real(3)]);
        assert!(!r.two_valued);
        assert_eq!(r.adjacency, None);

        let r = verify_balanced_splittable(&h4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(r.values, vec![GaussInt::ZERO]);
        assert!(r.two_valued);
        assert_eq!((r.a, r.b), (Some(GaussInt::ZERO), Some(GaussInt::ZERO)));

        assert!(verify_balanced_splittable(&SignMatrix::ones(2, 2), &[0]).is_err());
    }
}
