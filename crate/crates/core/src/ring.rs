//! Minimal commutative-ring abstraction shared by the exact matrix routines.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `Some(q)` with `q * divisor == self`, or `None` when no such `q` exists.
    fn exact_div(&self, divisor: &Self) -> Option<Self>;
}

/// Rings with a gcd, defined up to units.
pub trait GcdDomain: Ring {
    fn gcd(&self, other: &Self) -> Self;
    /// Unit-normal representative (nonnegative integer, positive leading coefficient).
    fn normalize(&self) -> Self;
    fn is_unit(&self) -> bool;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn exact_div(&self, divisor: &Self) -> Option<Self> {
        if Zero::is_zero(divisor) {
            return None;
        }
        let (q, r) = self.div_rem(divisor);
        Zero::is_zero(&r).then_some(q)
    }
}

impl GcdDomain for BigInt {
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn normalize(&self) -> Self {
        self.abs()
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
}
