//! Seeded sampling of block subsets for orders where exhaustive checking
//! is expensive, plus a JSON report.
//!
//! Run with `cargo run --release --example sampled_verification`.

use std::time::Instant;

use bms_hadamard::field::FieldTable;
use bms_hadamard::hadamard::sylvester;
use bms_hadamard::report::{InputRef, Report, Verdict, SCHEMA_VERSION};
use bms_hadamard::verify::{Mode, SubsetSampler};
use bms_hadamard::io::MatrixFile;
use bms_hadamard::{construct_bms, oa_from_field, verify_multi_splittable};

fn main() {
    let q = 16;
    let b = construct_bms(&oa_from_field(&FieldTable::new(q).unwrap()), &sylvester(4).unwrap()).unwrap();

    // the same seed always yields the same subsets
    let first: Vec<Vec<usize>> = SubsetSampler::new(42).distinct_subsets(q + 1, q / 2, 3);
    assert_eq!(first, SubsetSampler::new(42).distinct_subsets(q + 1, q / 2, 3));
    println!("first sampled subsets: {first:?}");

    let start = Instant::now();
    let mode = Mode::Sampled { count: 300, seed: 42 };
    let cert = verify_multi_splittable(&b, mode).unwrap();
    let report = Report {
        schema_version: SCHEMA_VERSION,
        command: "verify".into(),
        mode: "sampled".into(),
        inputs: vec![InputRef::new("<memory>", MatrixFile::Bms(b.clone()).encode().as_bytes())],
        verdict: if cert.passed() { Verdict::Pass } else { Verdict::Fail },
        certificate: serde_json::to_value(&cert).unwrap(),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    print!("{}", report.to_json());
}
