//! Finite-field arithmetic: tables for GF(q), quadratic characters, and the
//! refusal of non-prime-power orders.
//!
//! Run with `cargo run --example field_tables -- 9`.

use bms_hadamard::FieldTable;

fn main() {
    let q: usize = std::env::args().nth(1).map_or(9, |s| s.parse().expect("q must be an integer"));
    let ft = match FieldTable::new(q) {
        Ok(ft) => ft,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!(
        "GF({}) = GF({}^{}), modulus coefficients {:?}",
        ft.order(),
        ft.characteristic(),
        ft.degree(),
        ft.modulus()
    );
    assert!(ft.check_axioms(), "field axioms");

    println!("multiplication table:");
    for a in 0..q {
        let row: Vec<String> = (0..q).map(|b| format!("{:>3}", ft.mul(a, b))).collect();
        println!("  {}", row.join(""));
    }
    for a in 1..q {
        println!("  {a}^-1 = {}", ft.inv(a).unwrap());
    }
    match ft.quadratic_residues() {
        Ok(res) => println!("nonzero squares: {res:?}"),
        Err(e) => println!("no quadratic character: {e}"),
    }
    for bad in [6, 10] {
        println!("GF({bad}): {}", FieldTable::new(bad).unwrap_err());
    }
}
