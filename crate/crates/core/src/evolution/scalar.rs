use std::fmt::Debug;

use num_traits::{One, Zero};

use crate::ratpoly::{Poly2, RatFn2, Rational};

/// Exact field the evolution engine runs over: symbolic rational
/// functions, or their values at a fixed point.
pub trait Scalar: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn from_int(n: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// `None` when dividing by zero.
    fn div(&self, o: &Self) -> Option<Self>;
    fn is_zero(&self) -> bool;

    fn one() -> Self {
        Self::from_int(1)
    }

    fn neg(&self) -> Self {
        Self::zero().sub(self)
    }

    fn scale_int(&self, n: i64) -> Self {
        self.mul(&Self::from_int(n))
    }

    fn powu(&self, e: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_int(n: i64) -> Self {
        Rational::from_integer(n.into())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (!Zero::is_zero(o)).then(|| self / o)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn one() -> Self {
        One::one()
    }
}

impl Scalar for RatFn2 {
    fn zero() -> Self {
        RatFn2::zero()
    }
    fn from_int(n: i64) -> Self {
        RatFn2::from_poly(Poly2::from_int(n))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (!RatFn2::is_zero(o)).then(|| self / o)
    }
    fn is_zero(&self) -> bool {
        RatFn2::is_zero(self)
    }
    fn scale_int(&self, n: i64) -> Self {
        self.scale(&Rational::from_integer(n.into()))
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_int(n: i64) -> Self {
        n as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (*o != 0.0).then(|| self / o)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
}
