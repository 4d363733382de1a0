use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::evolution::Velocity;
use crate::ratpoly::{RatFn2, Rational};
use crate::sturm::RationalText;

use super::FlowError;

/// Constants attached to a velocity and its monotone quantity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantsRow {
    pub c_h: RationalText,
    pub c_1: RationalText,
    pub c_alpha: RationalText,
    pub c_d: RationalText,
    pub exponent: RationalText,
}

impl ConstantsRow {
    pub fn values(&self) -> [&Rational; 5] {
        [&self.c_h.0, &self.c_1.0, &self.c_alpha.0, &self.c_d.0, &self.exponent.0]
    }
}

/// `c_h`, `F(1,1)`, `c_α = c_h`, `c_d = ½(2 − d_n + d_d)` and
/// `(1 − c_d)/(1 + c_h)`, with `d_n`, `d_d` the degrees of numerator and
/// denominator of `w` in lowest terms.
pub fn constants_for(v: &Velocity, w: &RatFn2) -> Result<ConstantsRow, FlowError> {
    let ch = v.homogeneity().ok_or(FlowError::NotHomogeneous)?;
    w.homogeneous_degree().ok_or(FlowError::NotHomogeneous)?;
    let one = Rational::one();
    let c1 = v.f.eval_exact(&one, &one).map_err(|_| FlowError::NotHomogeneous)?;
    let dn = w.num().total_degree().unwrap_or(0) as i64;
    let dd = w.den().total_degree().unwrap_or(0) as i64;
    let c_h = Rational::from_integer(ch.into());
    let c_d = Rational::new((2 - dn + dd).into(), 2.into());
    let exponent = (&one - &c_d) / (&one + &c_h);
    Ok(ConstantsRow {
        c_h: RationalText(c_h.clone()),
        c_1: RationalText(c1),
        c_alpha: RationalText(c_h),
        c_d: RationalText(c_d),
        exponent: RationalText(exponent),
    })
}
