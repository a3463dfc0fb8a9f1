//! Minimal ring abstraction used by the generic polynomial and series code.
//!
//! Elements carry their own context (the prime `p`, or the finite field they
//! live in), so constants are produced from an existing element with
//! `zero_like` / `one_like` instead of associated functions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt::Debug;

pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    /// Exact division by a nonzero rational integer, `None` if the quotient
    /// does not exist in the ring.
    fn div_int(&self, n: i64) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }

    fn scale_int(&self, n: i64) -> Self {
        self.mul_ref(&self.from_int_like(n))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }
}

/// Rings with exact division: `a.div_exact(b)` is `Some(c)` iff `a = b*c`.
pub trait IntegralDomain: Ring {
    fn div_exact(&self, rhs: &Self) -> Option<Self>;
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigInt::from(n)
    }
    fn div_int(&self, n: i64) -> Option<Self> {
        let n = BigInt::from(n);
        let (q, r) = self.div_rem(&n);
        Zero::is_zero(&r).then_some(q)
    }
}

impl IntegralDomain for BigInt {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        if Zero::is_zero(rhs) {
            return None;
        }
        let (q, r) = self.div_rem(rhs);
        Zero::is_zero(&r).then_some(q)
    }
}

impl Ring for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn from_int_like(&self, n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
    fn div_int(&self, n: i64) -> Option<Self> {
        (n != 0).then(|| self / BigRational::from_integer(BigInt::from(n)))
    }
}

impl IntegralDomain for BigRational {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        (!Zero::is_zero(rhs)).then(|| self / rhs)
    }
}

/// Convert an integral rational to a `BigInt`.
pub fn rational_to_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}
