//! Exact arithmetic in the ring of Eisenstein integers Z[ω], ω = e^{2πi/3}.
//!
//! Every correlation value of a 3-phase array is a sum of powers of ω, so
//! it lives in Z[ω]. Elements are stored as `p + qω` and products are
//! reduced with ω² = −1 − ω.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// The element `p + qω` of Z[ω].
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EisensteinInt {
    pub p: i64,
    pub q: i64,
}

impl EisensteinInt {
    pub const ZERO: EisensteinInt = EisensteinInt { p: 0, q: 0 };
    pub const ONE: EisensteinInt = EisensteinInt { p: 1, q: 0 };
    pub const OMEGA: EisensteinInt = EisensteinInt { p: 0, q: 1 };
    pub const OMEGA2: EisensteinInt = EisensteinInt { p: -1, q: -1 };

    pub const fn new(p: i64, q: i64) -> Self {
        EisensteinInt { p, q }
    }

    pub const fn from_int(n: i64) -> Self {
        EisensteinInt { p: n, q: 0 }
    }

    /// ω^e for any integer exponent.
    pub const fn root(e: i64) -> Self {
        match e.rem_euclid(3) {
            0 => Self::ONE,
            1 => Self::OMEGA,
            _ => Self::OMEGA2,
        }
    }

    /// Complex conjugate. Uses ω̄ = ω² = −1 − ω.
    pub const fn conj(self) -> Self {
        EisensteinInt { p: self.p - self.q, q: -self.q }
    }

    /// |p + qω|² = p² + q² − pq.
    pub const fn norm_squared(self) -> i64 {
        self.p * self.p + self.q * self.q - self.p * self.q
    }

    pub const fn is_zero(self) -> bool {
        self.p == 0 && self.q == 0
    }

    /// Multiply by ω^e.
    pub const fn rotate(self, e: i64) -> Self {
        match e.rem_euclid(3) {
            0 => self,
            // (p + qω)ω = pω + qω² = −q + (p − q)ω
            1 => EisensteinInt { p: -self.q, q: self.p - self.q },
            // (p + qω)ω² = pω² + q = (q − p) − pω
            _ => EisensteinInt { p: self.q - self.p, q: -self.p },
        }
    }

    /// Floating-point value as (re, im).
    pub fn to_complex(self) -> (f64, f64) {
        let half_sqrt3 = 3f64.sqrt() / 2.0;
        (self.p as f64 - 0.5 * self.q as f64, half_sqrt3 * self.q as f64)
    }
}

impl Add for EisensteinInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        EisensteinInt { p: self.p + rhs.p, q: self.q + rhs.q }
    }
}

impl AddAssign for EisensteinInt {
    fn add_assign(&mut self, rhs: Self) {
        self.p += rhs.p;
        self.q += rhs.q;
    }
}

impl Sub for EisensteinInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        EisensteinInt { p: self.p - rhs.p, q: self.q - rhs.q }
    }
}

impl SubAssign for EisensteinInt {
    fn sub_assign(&mut self, rhs: Self) {
        self.p -= rhs.p;
        self.q -= rhs.q;
    }
}

impl Neg for EisensteinInt {
    type Output = Self;
    fn neg(self) -> Self {
        EisensteinInt { p: -self.p, q: -self.q }
    }
}

impl Mul for EisensteinInt {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // (a + bω)(c + dω) = ac + (ad + bc)ω + bdω², ω² = −1 − ω
        let (a, b, c, d) = (self.p, self.q, rhs.p, rhs.q);
        EisensteinInt { p: a * c - b * d, q: a * d + b * c - b * d }
    }
}

impl Mul<i64> for EisensteinInt {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        EisensteinInt { p: self.p * rhs, q: self.q * rhs }
    }
}

impl Sum for EisensteinInt {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for EisensteinInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.p, self.q) {
            (p, 0) => write!(f, "{p}"),
            (0, 1) => write!(f, "ω"),
            (0, -1) => write!(f, "-ω"),
            (0, q) => write!(f, "{q}ω"),
            (p, q) if q < 0 => write!(f, "{p}-{}ω", -q),
            (p, q) => write!(f, "{p}+{q}ω"),
        }
    }
}
