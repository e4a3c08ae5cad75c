//! Reverse direction: read an OA₁(q², q+1, q, 2) off a multi-splittable
//! matrix. In each extended block `[𝟏 Hᵢ]` the rows take exactly `q`
//! distinct values forming a Hadamard matrix; the index of the distinct row
//! a row equals is its symbol in column `i`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::construct::BmsMatrix;
use crate::error::{Error, Result};
use crate::matrix::{gather_rows, is_hadamard, UnitMatrix};
use crate::oa::{hamming_distance_matrix, verify_oa, OrthogonalArray, SymbolArray};

/// Distinct rows of `[𝟏 Hᵢ]` (block `i`, 1-based) in order of first
/// occurrence, and the 1-based index of the distinct row each row equals.
pub fn distinct_block_rows<M: UnitMatrix>(b: &BmsMatrix<M>, block: usize) -> Result<(M, Vec<u16>)> {
    let q = b.q();
    if block == 0 || block > q + 1 {
        return Err(Error::MalformedBlocks(format!("no block {block} for q = {q}")));
    }
    let ext = b.extended_block(block);
    let mut first: Vec<usize> = Vec::new();
    let mut index: HashMap<Vec<u64>, u16> = HashMap::new();
    let mut symbols = Vec::with_capacity(b.order());
    for u in 0..b.order() {
        let next = first.len() as u16 + 1;
        let sym = *index.entry(ext.row_key(u)).or_insert_with(|| {
            first.push(u);
            next
        });
        symbols.push(sym);
    }
    if first.len() != q {
        return Err(Error::BlockRowCount {
            block,
            distinct: first.len(),
            expected: q,
        });
    }
    let k = gather_rows(&ext, &first);
    if !is_hadamard(&k) {
        return Err(Error::BlockNotHadamard(block));
    }
    let mut counts = vec![0usize; q + 1];
    for &s in &symbols {
        counts[s as usize] += 1;
    }
    if let Some(s) = (1..=q).find(|&s| counts[s] != q) {
        return Err(Error::MalformedBlocks(format!(
            "block {block}: symbol {s} occurs {} times, expected {q}",
            counts[s]
        )));
    }
    Ok((k, symbols))
}

/// Recovers the orthogonal array, keeping the row order of `b`.
pub fn extract_oa<M: UnitMatrix>(b: &BmsMatrix<M>) -> Result<OrthogonalArray> {
    let q = b.q();
    let columns: Vec<Vec<u16>> = (1..=q + 1)
        .into_par_iter()
        .map(|i| distinct_block_rows(b, i).map(|(_, s)| s))
        .collect::<Result<_>>()?;
    let n = b.order();
    let data = (0..n)
        .flat_map(|u| columns.iter().map(move |col| col[u]))
        .collect();
    let array = SymbolArray::new(n, q + 1, q, data)?;
    let oa = OrthogonalArray::new(array, 2, 1)?;
    if !verify_oa(&oa) {
        return Err(Error::InvalidArray(
            "extracted array fails the strength-2 count".into(),
        ));
    }
    Ok(oa)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquidistanceReport {
    pub q: usize,
    pub size: usize,
    pub expected_distance: usize,
    /// Distance ↦ number of unordered row pairs.
    pub histogram: BTreeMap<u32, usize>,
    pub pass: bool,
}

/// Checks that the rows of `a` are a code of size `q²` with all pairwise
/// distances equal to `q`.
pub fn equidistance_report(a: &SymbolArray) -> EquidistanceReport {
    let q = a.q();
    let histogram = hamming_distance_matrix(a).histogram();
    let pass = a.n_rows() == q * q
        && histogram.len() == 1
        && histogram.contains_key(&(q as u32));
    EquidistanceReport {
        q,
        size: a.n_rows(),
        expected_distance: q,
        histogram,
        pass,
    }
}

/// Extracts the array from `b` and reports its distance distribution.
pub fn equidistance_of_extracted<M: UnitMatrix>(b: &BmsMatrix<M>) -> Result<EquidistanceReport> {
    Ok(equidistance_report(extract_oa(b)?.array()))
}
