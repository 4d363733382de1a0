use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly2::{Poly2, Var};
use super::{Rational, RatPolyError};

/// Reduced quotient of two [`Poly2`] values.
///
/// The numerator and denominator are coprime and the denominator is monic
/// in graded-lex order, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFn2 {
    num: Poly2,
    den: Poly2,
}

impl RatFn2 {
    /// Divides out the gcd and makes the denominator monic.
    pub fn new(num: Poly2, den: Poly2) -> Result<Self, RatPolyError> {
        if den.is_zero() {
            return Err(RatPolyError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        Ok(Self::make_monic(num, den))
    }

    fn make_monic(num: Poly2, den: Poly2) -> Self {
        let lc = den.leading_coeff();
        if lc.is_one() {
            return Self { num, den };
        }
        let inv = lc.recip();
        Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        Self {
            num: Poly2::zero(),
            den: Poly2::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::one())
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self {
            num: p,
            den: Poly2::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    pub fn num(&self) -> &Poly2 {
        &self.num
    }

    pub fn den(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn recip(&self) -> Result<Self, RatPolyError> {
        if self.num.is_zero() {
            return Err(RatPolyError::ZeroDenominator);
        }
        Ok(Self::make_monic(self.den.clone(), self.num.clone()))
    }

    pub fn powi(&self, e: i32) -> Result<Self, RatPolyError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(Self::make_monic(base.num.pow(e), base.den.pow(e)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn swap(&self) -> Self {
        Self::make_monic(self.num.swap(), self.den.swap())
    }

    pub fn is_swap_symmetric(&self) -> bool {
        self.swap() == *self
    }

    /// `deg num − deg den` when both parts are homogeneous (`0` counts as
    /// homogeneous of any degree for the numerator).
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let dd = self.den.homogeneous_degree()? as i64;
        if self.num.is_zero() {
            return Some(0);
        }
        let dn = self.num.homogeneous_degree()? as i64;
        Some(dn - dd)
    }

    pub fn derivative(&self, v: Var) -> Self {
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        let d = &self.den * &self.den;
        Self::new(n, d).expect("nonzero denominator")
    }

    pub fn eval_exact(&self, a: &Rational, b: &Rational) -> Result<Rational, RatPolyError> {
        let d = self.den.eval(a, b);
        if d.is_zero() {
            return Err(RatPolyError::PoleAtPoint);
        }
        Ok(self.num.eval(a, b) / d)
    }

    pub fn eval_f64(&self, a: f64, b: f64) -> f64 {
        self.num.eval_f64(a, b) / self.den.eval_f64(a, b)
    }

    /// Text form `(num)/(den)`, or just the numerator when `den = 1`.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RatFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly2::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl From<Poly2> for RatFn2 {
    fn from(p: Poly2) -> Self {
        Self::from_poly(p)
    }
}

impl Add for &RatFn2 {
    type Output = RatFn2;
    fn add(self, rhs: &RatFn2) -> RatFn2 {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn2::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let g = self.den.gcd(&rhs.den);
        let bd = self.den.div_exact(&g).unwrap();
        let dd = rhs.den.div_exact(&g).unwrap();
        let num = &(&self.num * &dd) + &(&rhs.num * &bd);
        let den = &self.den * &dd;
        RatFn2::new(num, den).unwrap()
    }
}

impl Sub for &RatFn2 {
    type Output = RatFn2;
    fn sub(self, rhs: &RatFn2) -> RatFn2 {
        self + &(-rhs)
    }
}

impl Neg for &RatFn2 {
    type Output = RatFn2;
    fn neg(self) -> RatFn2 {
        RatFn2 {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFn2 {
    type Output = RatFn2;
    fn mul(self, rhs: &RatFn2) -> RatFn2 {
        if self.is_zero() || rhs.is_zero() {
            return RatFn2::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = rhs.den.div_exact(&g1).unwrap();
        let c = rhs.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        RatFn2::make_monic(&a * &c, &b * &d)
    }
}

impl Div for &RatFn2 {
    type Output = RatFn2;
    fn div(self, rhs: &RatFn2) -> RatFn2 {
        self * &rhs.recip().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn2 {
            type Output = RatFn2;
            fn $m(self, rhs: RatFn2) -> RatFn2 {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFn2 {
    type Output = RatFn2;
    fn neg(self) -> RatFn2 {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn row_one() -> RatFn2 {
        let d = &Poly2::l1() - &Poly2::l2();
        RatFn2::new(&Poly2::h() * &d.pow(2), Poly2::k()).unwrap()
    }

    #[test]
    fn cancels_common_factor() {
        let f = RatFn2::new(&Poly2::l1().pow(2) - &Poly2::l2().pow(2), Poly2::h()).unwrap();
        assert_eq!(f.num(), &(&Poly2::l1() - &Poly2::l2()));
        assert_eq!(f.den(), &Poly2::one());
    }

    #[test]
    fn cancels_constants() {
        let f = RatFn2::new(Poly2::k().scale_int(2), Poly2::from_int(2)).unwrap();
        assert_eq!(f, RatFn2::from_poly(Poly2::k()));
    }

    #[test]
    fn reduced_input_unchanged() {
        let f = row_one();
        let d = &Poly2::l1() - &Poly2::l2();
        assert_eq!(f.num(), &(&Poly2::h() * &d.pow(2)));
        assert_eq!(f.den(), &Poly2::k());
    }

    #[test]
    fn zero_denominator() {
        assert_eq!(
            RatFn2::new(Poly2::one(), Poly2::zero()),
            Err(RatPolyError::ZeroDenominator)
        );
    }

    #[test]
    fn evaluation() {
        let f = row_one();
        assert_eq!(f.eval_exact(&q(1, 1), &q(1, 1)), Ok(q(0, 1)));
        assert_eq!(f.eval_exact(&q(2, 1), &q(1, 1)), Ok(q(3, 2)));
        let g = RatFn2::new(Poly2::one(), &Poly2::l1() - &Poly2::l2()).unwrap();
        assert_eq!(g.eval_exact(&q(1, 1), &q(1, 1)), Err(RatPolyError::PoleAtPoint));
    }

    #[test]
    fn field_ops() {
        let f = row_one();
        let g = RatFn2::new(Poly2::h(), Poly2::q()).unwrap();
        let s = &f + &g;
        let back = &s - &g;
        assert_eq!(back, f);
        let p = &f * &g;
        assert_eq!(&p / &g, f);
    }
}
