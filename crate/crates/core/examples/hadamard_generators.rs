//! Sylvester, Paley I and quaternary Hadamard matrices.

use bms_hadamard::field::FieldTable;
use bms_hadamard::hadamard::{paley_one, quaternary_tensor, real_hadamard, sylvester};
use bms_hadamard::io::MatrixFile;
use bms_hadamard::matrix::gram_rows;
use bms_hadamard::{is_hadamard, UnitMatrix};

fn main() {
    let h8 = sylvester(3).unwrap();
    print!("{}", MatrixFile::Had(h8.clone()).encode());
    println!("Sylvester order 8 is Hadamard: {}", is_hadamard(&h8));

    // Paley I needs q ≡ 3 (mod 4); order q + 1
    let p12 = paley_one(&FieldTable::new(11).unwrap()).unwrap();
    println!("Paley I order {}: Hadamard = {}", p12.n_rows(), is_hadamard(&p12));

    let q4 = quaternary_tensor(2).unwrap();
    print!("{}", MatrixFile::QHad(q4.clone()).encode());
    let g = gram_rows(&q4);
    println!("H H* diagonal: {}, off-diagonal zero: {}", g.get(0, 0), g.off_diagonal_values().iter().all(|v| *v == bms_hadamard::GaussInt::ZERO));

    for n in [1, 2, 4, 12, 20, 32] {
        match real_hadamard(n) {
            Ok(h) => println!("order {n:>2}: ok ({} rows)", h.n_rows()),
            Err(e) => println!("order {n:>2}: {e}"),
        }
    }
}
