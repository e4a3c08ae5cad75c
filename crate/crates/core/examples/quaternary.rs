//! Quaternary (entries in {±1, ±i}) multi-splittable matrices.

use bms_hadamard::field::FieldTable;
use bms_hadamard::hadamard::{quaternary_seed, quaternary_tensor};
use bms_hadamard::io::MatrixFile;
use bms_hadamard::verify::{verify_subset_split, Mode};
use bms_hadamard::{construct_bms, extract_oa, is_hadamard, oa_from_field, verify_multi_splittable};

fn main() {
    // q = 2 with the seed [[1, i], [1, -i]]
    let oa2 = oa_from_field(&FieldTable::new(2).unwrap());
    let b2 = construct_bms(&oa2, &quaternary_seed()).unwrap();
    print!("{}", MatrixFile::QBms(b2.clone()).encode());
    println!("q = 2 exhaustive: {}", verify_multi_splittable(&b2, Mode::Exhaustive).unwrap().passed());

    let oa4 = oa_from_field(&FieldTable::new(4).unwrap());
    let b4 = construct_bms(&oa4, &quaternary_tensor(2).unwrap()).unwrap();
    println!("q = 4 Hadamard: {}, uses ±i: {}", is_hadamard(b4.matrix()), !b4.matrix().is_real());
    let r = verify_subset_split(&b4, &[1, 3]).unwrap();
    println!("blocks [1, 3]: S entries {:?}", r.s_values);
    println!("q = 4 exhaustive: {}", verify_multi_splittable(&b4, Mode::Exhaustive).unwrap().passed());

    let back = extract_oa(&b4).unwrap();
    println!("extracted array matches: {}", back.canonical_relabel() == oa4.canonical_relabel());
}
