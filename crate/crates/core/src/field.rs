//! Finite fields GF(pᵐ) as precomputed lookup tables.
//!
//! Elements are labeled `0..q`. For `m > 1` the label of a polynomial
//! `c₀ + c₁x + … + c_{m−1}x^{m−1}` is `Σ cᵢ pⁱ`, so label 0 is zero and label
//! 1 is one. The reduction polynomial is fixed per order so labels are stable.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Reduction polynomials for the orders used in fixtures, low coefficient
/// first without the leading 1.
const FIXED_POLYNOMIALS: &[(usize, &[u8])] = &[
    (4, &[1, 1]),       // x² + x + 1
    (8, &[1, 1, 0]),    // x³ + x + 1
    (9, &[1, 0]),       // x² + 1
    (16, &[1, 1, 0, 0]), // x⁴ + x + 1
];

pub const MAX_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTable {
    p: usize,
    m: u32,
    q: usize,
    /// Monic reduction polynomial, low coefficient first, leading 1 omitted.
    modulus: Vec<u8>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// Returns `(p, m)` with `q = pᵐ`, or `None` when `q` is not a prime power.
pub fn prime_power(q: usize) -> Option<(usize, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn poly_mod_is_zero(num: &[u8], den: &[u8], p: usize) -> bool {
    // `den` is monic with its leading coefficient stored last.
    let mut r: Vec<usize> = num.iter().map(|&c| c as usize).collect();
    let d = den.len() - 1;
    while r.len() > d {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - d;
        if lead != 0 {
            for (k, &c) in den.iter().enumerate() {
                r[shift + k] = (r[shift + k] + p * p - lead * c as usize % p) % p;
            }
        }
        r.pop();
    }
    r.iter().all(|&c| c == 0)
}

fn digits(mut v: usize, p: usize, len: usize) -> Vec<u8> {
    (0..len)
        .map(|_| {
            let d = (v % p) as u8;
            v /= p;
            d
        })
        .collect()
}

/// Brute-force irreducibility: no monic factor of degree `1..=m/2` divides it.
fn is_irreducible(lower: &[u8], p: usize) -> bool {
    let m = lower.len();
    let mut full = lower.to_vec();
    full.push(1);
    for deg in 1..=m / 2 {
        for code in 0..p.pow(deg as u32) {
            let mut factor = digits(code, p, deg);
            factor.push(1);
            if poly_mod_is_zero(&full, &factor, p) {
                return false;
            }
        }
    }
    true
}

/// Lowest monic irreducible polynomial of degree `m` over GF(p), ordered by
/// the label of its lower coefficients.
pub(crate) fn search_irreducible(p: usize, m: u32) -> Vec<u8> {
    (0..p.pow(m))
        .map(|code| digits(code, p, m as usize))
        .find(|lower| is_irreducible(lower, p))
        .expect("an irreducible polynomial exists for every degree")
}

impl FieldTable {
    /// Builds GF(q) for a prime power `q ≤ 256`.
    pub fn new(q: usize) -> Result<Self> {
        if !(2..=MAX_ORDER).contains(&q) {
            return match prime_power(q) {
                None if q < 2 || q <= MAX_ORDER => Err(Error::NotPrimePower(q)),
                _ => Err(Error::FieldOrderOutOfRange(q)),
            };
        }
        let (p, m) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        let modulus = if m == 1 {
            Vec::new()
        } else {
            FIXED_POLYNOMIALS
                .iter()
                .find(|(order, _)| *order == q)
                .map(|(_, poly)| poly.to_vec())
                .unwrap_or_else(|| search_irreducible(p, m))
        };

        let md = m as usize;
        let to_vec = |label: usize| digits(label, p, md);
        let to_label = |v: &[usize]| v.iter().rev().fold(0, |acc, &d| acc * p + d);

        let mut add = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        for a in 0..q {
            let av = to_vec(a);
            for b in 0..q {
                let bv = to_vec(b);
                let sum: Vec<usize> = av.iter().zip(&bv).map(|(&x, &y)| (x as usize + y as usize) % p).collect();
                add[a * q + b] = to_label(&sum) as u8;

                let mut prod = vec![0usize; 2 * md - 1];
                for (i, &x) in av.iter().enumerate() {
                    for (j, &y) in bv.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x as usize * y as usize) % p;
                    }
                }
                // x^m ≡ −(c₀ + … + c_{m−1}x^{m−1})
                for top in (md..prod.len()).rev() {
                    let lead = prod[top];
                    if lead == 0 {
                        continue;
                    }
                    prod[top] = 0;
                    for (k, &c) in modulus.iter().enumerate() {
                        let t = top - md + k;
                        prod[t] = (prod[t] + p * p - lead * c as usize % p) % p;
                    }
                }
                mul[a * q + b] = to_label(&prod[..md]) as u8;
            }
        }

        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u8)
            .collect();
        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = (1..q)
                .find(|&b| mul[a * q + b] == 1)
                .ok_or_else(|| Error::Shape(format!("GF({q}): element {a} has no inverse")))?
                as u8;
        }

        Ok(Self {
            p,
            m,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> usize {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Lower coefficients of the reduction polynomial (empty for prime fields).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: usize) -> Option<usize> {
        (a != 0).then(|| self.inv[a] as usize)
    }

    /// The `(q−1)/2` nonzero squares. Only defined for odd `q`.
    pub fn quadratic_residues(&self) -> Result<BTreeSet<usize>> {
        if self.p == 2 {
            return Err(Error::EvenCharacteristic(self.q));
        }
        Ok((1..self.q).map(|x| self.mul(x, x)).collect())
    }

    /// Quadratic character: 0 at zero, +1 on squares, −1 elsewhere.
    pub fn chi(&self, residues: &BTreeSet<usize>, a: usize) -> i8 {
        if a == 0 {
            0
        } else if residues.contains(&a) {
            1
        } else {
            -1
        }
    }

    /// Exhaustive check of the field axioms. Cost is `O(q³)`.
    pub fn check_axioms(&self) -> bool {
        let q = self.q;
        let elems = 0..q;
        for a in elems.clone() {
            if self.add(a, 0) != a || self.mul(a, 1) != a || self.add(a, self.neg(a)) != 0 {
                return false;
            }
            if a != 0 && self.mul(a, self.inv[a] as usize) != 1 {
                return false;
            }
            for b in elems.clone() {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
                for c in elems.clone() {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                        || self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c))
                    {
                        return false;
                    }
                }
            }
        }
        // the nonzero elements must contain a generator
        (1..q).any(|g| {
            let mut x = g;
            let mut ord = 1;
            while x != 1 {
                x = self.mul(x, g);
                ord += 1;
            }
            ord == q - 1
        })
    }
}
