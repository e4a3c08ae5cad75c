//! Recover the orthogonal array from a multi-splittable matrix, and see
//! how extraction fails on matrices without the block structure.

use bms_hadamard::construct::BmsMatrix;
use bms_hadamard::extract::{distinct_block_rows, equidistance_of_extracted};
use bms_hadamard::field::FieldTable;
use bms_hadamard::hadamard::{paley_one, sylvester};
use bms_hadamard::{construct_bms, extract_oa, oa_from_field};

fn main() {
    let q = 8;
    let oa = oa_from_field(&FieldTable::new(q).unwrap());
    // any normalized Hadamard factor of order q works; use Paley I from GF(7)
    let k = paley_one(&FieldTable::new(7).unwrap()).unwrap();
    let b = construct_bms(&oa, &k).unwrap();

    let (_, labels) = distinct_block_rows(&b, 1).unwrap();
    println!("block 1 row labels: {:?}", &labels[..16]);
    let back = extract_oa(&b).unwrap();
    println!("recovered OA parameters: {:?}", back.params());
    println!("equal up to relabeling: {}", back.canonical_relabel() == oa.canonical_relabel());
    let rep = equidistance_of_extracted(&b).unwrap();
    println!("code distance histogram {:?}, expected {}", rep.histogram, rep.expected_distance);

    // a Sylvester matrix viewed with the same block widths is Hadamard but
    // its blocks do not have q distinct rows
    let fake = BmsMatrix::new(q, sylvester(6).unwrap()).unwrap();
    match extract_oa(&fake) {
        Ok(_) => println!("unexpected success"),
        Err(e) => println!("Sylvester(64) as a BMS matrix: {e}"),
    }
}
