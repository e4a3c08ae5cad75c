//! Build a multi-splittable Hadamard matrix of order q² and certify it with
//! all three verification modes.
//!
//! Run with `cargo run --release --example construct_and_verify -- 8`.

use std::time::Instant;

use bms_hadamard::field::FieldTable;
use bms_hadamard::hadamard::sylvester;
use bms_hadamard::verify::{verify_subset_split, Mode};
use bms_hadamard::{construct_bms, is_hadamard, oa_from_field, verify_multi_splittable};

fn main() {
    let q: usize = std::env::args().nth(1).map_or(8, |s| s.parse().expect("q must be an integer"));
    assert!(q.is_power_of_two() && q >= 4, "this example uses Sylvester matrices, so q must be 4, 8, 16, ...");
    let oa = oa_from_field(&FieldTable::new(q).unwrap());
    let k = sylvester(q.trailing_zeros()).unwrap();
    let b = construct_bms(&oa, &k).unwrap();
    println!("order {}, block widths {:?}", b.order(), b.block_widths());
    println!("Hadamard: {}, first column all ones: {}", is_hadamard(b.matrix()), b.first_column_is_ones());

    let subset: Vec<usize> = (1..=q / 2).collect();
    let one = verify_subset_split(&b, &subset).unwrap();
    println!("blocks {subset:?}: pass = {}, S entries {:?}", one.pass, one.s_values);

    let mut modes = vec![Mode::Blockwise, Mode::Sampled { count: 200, seed: 1 }];
    if q <= 8 {
        modes.push(Mode::Exhaustive);
    }
    for mode in modes {
        let start = Instant::now();
        let cert = verify_multi_splittable(&b, mode).unwrap();
        println!(
            "{mode:?}: passed = {}, subsets {}/{}, {:?}",
            cert.passed(),
            cert.subsets_checked,
            cert.subsets_total,
            start.elapsed()
        );
    }
}
