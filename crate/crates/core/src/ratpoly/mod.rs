//! Exact bivariate polynomials and rational functions in the principal
//! curvatures `λ₁, λ₂`, together with the symmetric `H`/`|A|²` basis.

mod gcd;
mod hq;
mod poly2;
mod ratfn;
mod univariate;

pub use hq::{from_hq_poly, substitute_hq, to_hq_basis, to_hq_poly, HQExpansion};
pub use poly2::{rational_to_f64, Monomial, Poly2, Var};
pub use ratfn::RatFn2;
pub use univariate::UniPoly;

pub use poly2::fmt_rational as format_rational;

/// Arbitrary-precision rational used for every coefficient.
pub type Rational = num_rational::BigRational;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RatPolyError {
    #[error("polynomial is not swap-symmetric")]
    NotSymmetric,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("denominator is zero")]
    ZeroDenominator,
    #[error("denominator vanishes at the evaluation point")]
    PoleAtPoint,
}

/// Parses `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => {
            if let Some((ip, fp)) = s.split_once('.') {
                let neg = ip.starts_with('-');
                let ip_digits = ip.trim_start_matches(['-', '+']);
                let digits = format!("{ip_digits}{fp}");
                let n: BigInt = if digits.is_empty() {
                    return None;
                } else {
                    digits.parse().ok()?
                };
                let d = num_traits::pow(BigInt::from(10), fp.len());
                let r = Rational::new(n, d);
                Some(if neg { -r } else { r })
            } else {
                Some(Rational::from_integer(s.parse().ok()?))
            }
        }
    }
}

/// Exact rational value of a finite `f64`.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}
