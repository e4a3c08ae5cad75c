//! The order-16 instance built from GF(4) and the order-4 Sylvester matrix,
//! printed block by block.

use bms_hadamard::construct::split_hadamard_rows;
use bms_hadamard::field::FieldTable;
use bms_hadamard::hadamard::sylvester;
use bms_hadamard::verify::{colex_subsets, verify_subset_split};
use bms_hadamard::{construct_bms, oa_from_field, UnitMatrix};

fn main() {
    let oa = oa_from_field(&FieldTable::new(4).unwrap());
    let k = sylvester(2).unwrap();
    for (i, row) in split_hadamard_rows(&k).unwrap().iter().enumerate() {
        let tail: String = (0..3).map(|c| if row.tail.exp(0, c) == 0 { '+' } else { '-' }).collect();
        println!("r{} = {tail}", i + 1);
    }
    let b = construct_bms(&oa, &k).unwrap();
    for r in 0..b.order() {
        let mut line = String::new();
        for blk in 0..b.num_blocks() {
            for c in b.block_range(blk) {
                line.push(if b.matrix().exp(r, c) == 0 { '+' } else { '-' });
            }
            line.push(' ');
        }
        let symbols: Vec<String> = oa.array().row(r).iter().map(|s| s.to_string()).collect();
        println!("{}  <- {}", line.trim_end(), symbols.join(" "));
    }
    for s in colex_subsets(5, 2) {
        let res = verify_subset_split(&b, &s).unwrap();
        println!("blocks {s:?}: pass = {}, S entries {:?}", res.pass, res.s_values);
    }
}
