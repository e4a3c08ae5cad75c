//! Exact Gaussian integers, the value type of quaternary inner products.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An element `re + im·i` of ℤ[i].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: i64) -> Self {
        Self { re, im: 0 }
    }

    /// `i^e` for any exponent, reduced mod 4.
    pub const fn unit(e: u8) -> Self {
        match e & 3 {
            0 => Self::new(1, 0),
            1 => Self::new(0, 1),
            2 => Self::new(-1, 0),
            _ => Self::new(0, -1),
        }
    }

    pub const fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    /// Squared modulus `re² + im²`.
    pub const fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub const fn is_real(self) -> bool {
        self.im == 0
    }

    /// If `self = m · i^e` with `m > 0`, returns `(m, e)`.
    pub fn as_scaled_unit(self) -> Option<(i64, u8)> {
        match (self.re, self.im) {
            (r, 0) if r > 0 => Some((r, 0)),
            (0, m) if m > 0 => Some((m, 1)),
            (r, 0) if r < 0 => Some((-r, 2)),
            (0, m) if m < 0 => Some((-m, 3)),
            _ => None,
        }
    }
}

impl From<i64> for GaussInt {
    fn from(re: i64) -> Self {
        Self::real(re)
    }
}

impl Add for GaussInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl AddAssign for GaussInt {
    fn add_assign(&mut self, rhs: Self) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl Sub for GaussInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Neg for GaussInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Mul for GaussInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl std::iter::Sum for GaussInt {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, m) => write!(f, "{m}i"),
            (r, m) if m < 0 => write!(f, "{r}-{}i", -m),
            (r, m) => write!(f, "{r}+{m}i"),
        }
    }
}
