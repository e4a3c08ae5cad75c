//! Orthogonal arrays from GF(q) and the counting identities they satisfy.

use bms_hadamard::field::FieldTable;
use bms_hadamard::io::encode_oa;
use bms_hadamard::oa::{
    check_lemma_identities, equidistant_code_bound_check, hamming_distance_matrix, indicator_decompose, oa_from_field,
    rao_bound, restricted_distances,
};
use bms_hadamard::verify_oa;

fn main() {
    let q = 5;
    let oa = oa_from_field(&FieldTable::new(q).unwrap());
    let p = oa.params();
    println!("OA_{}({}, {}, {}, {}), strength verified: {}", p.lambda, p.n, p.k, p.q, p.t, verify_oa(&oa));
    print!("{}", encode_oa(&oa));

    let stack = indicator_decompose(oa.array());
    println!("indicator stack: {} matrices of shape {:?}", stack.q(), stack.dims());
    assert_eq!(stack.reconstruct(), oa.array().rows().flatten().copied().collect::<Vec<_>>());

    println!("distance histogram: {:?}", hamming_distance_matrix(oa.array()).histogram());
    println!("identities: {:?}", check_lemma_identities(oa.array()));
    println!("distances on columns {{0, 1}}: {:?}", restricted_distances(oa.array(), &[0, 1]).unwrap());

    println!("Rao bound for k = {}, e = 1: {}", p.k, rao_bound(p.k as u64, q as u64, 1));
    let full = equidistant_code_bound_check(oa.array());
    let cut = equidistant_code_bound_check(&oa.array().without_row(0));
    println!("full array attains the code bound: {}", full.attains_bound);
    println!("after deleting one row: attains = {}, still equidistant = {}", cut.attains_bound, cut.equidistant);
}
