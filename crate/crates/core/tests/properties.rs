//! Randomized properties across module boundaries.

use bms_hadamard::construct::construct_bms;
use bms_hadamard::extract::extract_oa;
use bms_hadamard::field::FieldTable;
use bms_hadamard::hadamard::{paley_one, sylvester};
use bms_hadamard::io::{encode_oa, parse_oa, MatrixFile};
use bms_hadamard::matrix::{gather_rows, QuatMatrix, SignMatrix, UnitMatrix};
use bms_hadamard::oa::{
    check_lemma_identities, equidistant_code_bound_check, oa_from_field, verify_oa, OrthogonalArray, SymbolArray,
};
use bms_hadamard::GaussInt;
use proptest::prelude::*;

fn scalar_inner<M: UnitMatrix>(m: &M, i: usize, j: usize) -> GaussInt {
    (0..m.n_cols())
        .map(|c| GaussInt::unit(m.exp(i, c)) * GaussInt::unit(m.exp(j, c)).conj())
        .sum()
}

fn sign_matrix() -> impl Strategy<Value = SignMatrix> {
    (1usize..=256, 1usize..=256, any::<u64>()).prop_map(|(r, c, seed)| {
        let mut s = seed | 1;
        SignMatrix::try_from_fn(r, c, |_, _| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            ((s & 1) as u8) * 2
        })
        .unwrap()
    })
}

fn quat_matrix() -> impl Strategy<Value = QuatMatrix> {
    (1usize..=64, 1usize..=256, any::<u64>()).prop_map(|(r, c, seed)| {
        let mut s = seed | 1;
        QuatMatrix::try_from_fn(r, c, |_, _| {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s & 3) as u8
        })
        .unwrap()
    })
}

fn symbol_array() -> impl Strategy<Value = SymbolArray> {
    (1usize..=32, 1usize..=32, 2usize..=8).prop_flat_map(|(n, k, q)| {
        proptest::collection::vec(1..=q as u16, n * k).prop_map(move |data| SymbolArray::new(n, k, q, data).unwrap())
    })
}

fn field_q() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 3, 4, 5, 7, 8, 9])
}

fn power_of_two_q() -> impl Strategy<Value = u32> {
    1u32..=3
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn sign_popcount_matches_scalar(m in sign_matrix(), picks in proptest::collection::vec((0usize..256, 0usize..256), 8)) {
        for (i, j) in picks {
            let (i, j) = (i % m.n_rows(), j % m.n_rows());
            prop_assert_eq!(m.row_inner(i, j).unwrap(), scalar_inner(&m, i, j));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn quat_popcount_matches_scalar(m in quat_matrix(), picks in proptest::collection::vec((0usize..64, 0usize..64), 8)) {
        for (i, j) in picks {
            let (i, j) = (i % m.n_rows(), j % m.n_rows());
            prop_assert_eq!(m.row_inner(i, j).unwrap(), scalar_inner(&m, i, j));
        }
    }

    #[test]
    fn distance_identity_holds_for_any_array(a in symbol_array()) {
        prop_assert!(check_lemma_identities(&a).distance_identity);
    }

    #[test]
    fn canonical_relabel_is_idempotent(a in symbol_array()) {
        let once = a.canonical_relabel();
        prop_assert_eq!(once.canonical_relabel(), once);
    }

    #[test]
    fn oa_codec_roundtrip(q in field_q(), perm_seed in any::<u64>()) {
        let oa = oa_from_field(&FieldTable::new(q).unwrap());
        let k = q + 1;
        let mut perm: Vec<usize> = (0..k).collect();
        let mut s = perm_seed;
        for i in (1..k).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let oa = OrthogonalArray::new(oa.array().permute_columns(&perm), 2, 1).unwrap();
        let text = encode_oa(&oa);
        let back = parse_oa(&text).unwrap();
        prop_assert_eq!(&back, &oa);
        prop_assert_eq!(encode_oa(&back), text);
    }

    #[test]
    fn matrix_codec_roundtrip(m in sign_matrix(), qm in quat_matrix()) {
        let n = m.n_rows().min(m.n_cols());
        let sq = SignMatrix::try_from_fn(n, n, |r, c| m.exp(r, c)).unwrap();
        let f = MatrixFile::Had(sq);
        prop_assert_eq!(MatrixFile::parse(&f.encode()).unwrap(), f);
        let n = qm.n_rows().min(qm.n_cols());
        let sq = QuatMatrix::try_from_fn(n, n, |r, c| qm.exp(r, c)).unwrap();
        let f = MatrixFile::QHad(sq);
        prop_assert_eq!(MatrixFile::parse(&f.encode()).unwrap(), f);
    }

    /// Renaming symbols by σ while moving row s of K to row σ(s) leaves the
    /// constructed matrix unchanged.
    #[test]
    fn construction_commutes_with_relabeling(k in power_of_two_q(), seed in any::<u64>()) {
        let q = 1usize << k;
        let oa = oa_from_field(&FieldTable::new(q).unwrap());
        let h = sylvester(k).unwrap();
        let mut sigma: Vec<usize> = (0..q).collect();
        let mut s = seed;
        for i in (1..q).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1);
            sigma.swap(i, (s >> 33) as usize % (i + 1));
        }
        let a = oa.array();
        let data = (0..a.n_rows())
            .flat_map(|r| (0..a.n_cols()).map(move |c| (r, c)))
            .map(|(r, c)| sigma[a.get(r, c) as usize - 1] as u16 + 1)
            .collect();
        let relabeled = OrthogonalArray::new(SymbolArray::new(a.n_rows(), a.n_cols(), q, data).unwrap(), 2, 1).unwrap();
        let mut inv = vec![0; q];
        for (s, &t) in sigma.iter().enumerate() {
            inv[t] = s;
        }
        let permuted = gather_rows(&h, &inv);
        prop_assert_eq!(
            construct_bms(&relabeled, &permuted).unwrap(),
            construct_bms(&oa, &h).unwrap()
        );
    }

    /// Mutating a single entry of a field array destroys both the OA
    /// property and attainment of the equidistant-code bound.
    #[test]
    fn bound_attainment_iff_oa(q in field_q(), r in any::<usize>(), c in any::<usize>(), d in 1u16..8) {
        let oa = oa_from_field(&FieldTable::new(q).unwrap());
        let a = oa.array();
        let rep = equidistant_code_bound_check(a);
        prop_assert!(rep.attains_bound && verify_oa(&oa));
        let (r, c) = (r % a.n_rows(), c % a.n_cols());
        let new = (a.get(r, c) - 1 + d % q as u16) % q as u16 + 1;
        let m = a.with_entry(r, c, new).unwrap();
        let rep = equidistant_code_bound_check(&m);
        prop_assert!(rep.consistent);
        prop_assert_eq!(rep.attains_bound, new == a.get(r, c));
    }
}

#[test]
fn extraction_does_not_depend_on_the_hadamard_factor() {
    let oa = oa_from_field(&FieldTable::new(8).unwrap());
    let syl = construct_bms(&oa, &sylvester(3).unwrap()).unwrap();
    let pal = construct_bms(&oa, &paley_one(&FieldTable::new(7).unwrap()).unwrap()).unwrap();
    assert_ne!(syl, pal);
    let a = extract_oa(&syl).unwrap().canonical_relabel();
    let b = extract_oa(&pal).unwrap().canonical_relabel();
    assert_eq!(a, b);
    assert_eq!(a, oa.canonical_relabel());
}
