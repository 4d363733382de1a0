use crate::ratpoly::{substitute_hq, to_hq_poly, Poly2, RatFn2, Rational, Var};

use super::scalar::Scalar;
use super::EvolutionError;

/// A symmetric quantity `w = P(H, Q)/R(H, Q)` with the `(H, Q)`
/// derivatives of numerator and denominator up to second order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quantity {
    pub w: RatFn2,
    /// `[P, P_H, P_Q, P_HH, P_HQ, P_QQ]` as polynomials in `(H, Q)`.
    num: [Poly2; 6],
    den: [Poly2; 6],
}

/// First and second `(H, Q)` derivatives of a scalar function of the
/// power sums, evaluated over some field.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantityJet<S> {
    pub h: S,
    pub q: S,
    pub hh: S,
    pub hq: S,
    pub qq: S,
}

fn derivatives(p: &Poly2) -> [Poly2; 6] {
    let ph = p.derivative(Var::L1);
    let pq = p.derivative(Var::L2);
    let phh = ph.derivative(Var::L1);
    let phq = ph.derivative(Var::L2);
    let pqq = pq.derivative(Var::L2);
    [p.clone(), ph, pq, phh, phq, pqq]
}

impl Quantity {
    pub fn new(w: &RatFn2) -> Result<Self, EvolutionError> {
        if w.is_zero() {
            return Err(EvolutionError::DegenerateQuantity);
        }
        let p = to_hq_poly(w.num()).map_err(|_| EvolutionError::NotSymmetric)?;
        let r = to_hq_poly(w.den()).map_err(|_| EvolutionError::NotSymmetric)?;
        Ok(Self {
            w: w.clone(),
            num: derivatives(&p),
            den: derivatives(&r),
        })
    }

    fn values_symbolic(&self) -> ([RatFn2; 6], [RatFn2; 6]) {
        let sub = |ps: &[Poly2; 6]| ps.clone().map(|p| RatFn2::from_poly(substitute_hq(&p)));
        (sub(&self.num), sub(&self.den))
    }

    fn values_at(&self, h: &Rational, q: &Rational) -> ([Rational; 6], [Rational; 6]) {
        let ev = |ps: &[Poly2; 6]| ps.clone().map(|p| p.eval(h, q));
        (ev(&self.num), ev(&self.den))
    }

    fn values_f64(&self, h: f64, q: f64) -> ([f64; 6], [f64; 6]) {
        let ev = |ps: &[Poly2; 6]| ps.clone().map(|p| p.eval_f64(h, q));
        (ev(&self.num), ev(&self.den))
    }

    /// Derivatives of `log w` as rational functions of `(λ₁, λ₂)`.
    pub fn log_jet(&self) -> QuantityJet<RatFn2> {
        let (n, d) = self.values_symbolic();
        log_combine(&n, &d).expect("w is nonzero")
    }

    /// Derivatives of `w` itself as rational functions of `(λ₁, λ₂)`.
    pub fn plain_jet(&self) -> QuantityJet<RatFn2> {
        let (n, d) = self.values_symbolic();
        plain_combine(&n, &d).expect("nonzero denominator")
    }

    pub fn log_jet_at(&self, a: &Rational, b: &Rational) -> Option<QuantityJet<Rational>> {
        let h = a + b;
        let q = a * a + b * b;
        let (n, d) = self.values_at(&h, &q);
        log_combine(&n, &d)
    }

    pub fn plain_jet_at(&self, a: &Rational, b: &Rational) -> Option<QuantityJet<Rational>> {
        let h = a + b;
        let q = a * a + b * b;
        let (n, d) = self.values_at(&h, &q);
        plain_combine(&n, &d)
    }

    pub fn log_jet_f64(&self, a: f64, b: f64) -> Option<QuantityJet<f64>> {
        let (n, d) = self.values_f64(a + b, a * a + b * b);
        log_combine(&n, &d)
    }
}

/// `log P − log R` differentiated twice in `(H, Q)`.
fn log_combine<S: Scalar>(n: &[S; 6], d: &[S; 6]) -> Option<QuantityJet<S>> {
    let part = |v: &[S; 6]| -> Option<QuantityJet<S>> {
        let gh = v[1].div(&v[0])?;
        let gq = v[2].div(&v[0])?;
        Some(QuantityJet {
            hh: v[3].div(&v[0])?.sub(&gh.mul(&gh)),
            hq: v[4].div(&v[0])?.sub(&gh.mul(&gq)),
            qq: v[5].div(&v[0])?.sub(&gq.mul(&gq)),
            h: gh,
            q: gq,
        })
    };
    let a = part(n)?;
    let b = if d[1].is_zero() && d[2].is_zero() {
        QuantityJet {
            h: S::zero(),
            q: S::zero(),
            hh: S::zero(),
            hq: S::zero(),
            qq: S::zero(),
        }
    } else {
        part(d)?
    };
    Some(QuantityJet {
        h: a.h.sub(&b.h),
        q: a.q.sub(&b.q),
        hh: a.hh.sub(&b.hh),
        hq: a.hq.sub(&b.hq),
        qq: a.qq.sub(&b.qq),
    })
}

/// `P · R⁻¹` differentiated twice in `(H, Q)`.
fn plain_combine<S: Scalar>(n: &[S; 6], d: &[S; 6]) -> Option<QuantityJet<S>> {
    let rinv = S::one().div(&d[0])?;
    let r2 = rinv.mul(&rinv);
    let r3 = r2.mul(&rinv);
    // v = 1/R and its derivatives.
    let vh = d[1].mul(&r2).neg();
    let vq = d[2].mul(&r2).neg();
    let vhh = d[3].mul(&r2).neg().add(&d[1].mul(&d[1]).mul(&r3).scale_int(2));
    let vhq = d[4].mul(&r2).neg().add(&d[1].mul(&d[2]).mul(&r3).scale_int(2));
    let vqq = d[5].mul(&r2).neg().add(&d[2].mul(&d[2]).mul(&r3).scale_int(2));
    let p = &n[0];
    Some(QuantityJet {
        h: n[1].mul(&rinv).add(&p.mul(&vh)),
        q: n[2].mul(&rinv).add(&p.mul(&vq)),
        hh: n[3]
            .mul(&rinv)
            .add(&n[1].mul(&vh).scale_int(2))
            .add(&p.mul(&vhh)),
        hq: n[4]
            .mul(&rinv)
            .add(&n[1].mul(&vq))
            .add(&n[2].mul(&vh))
            .add(&p.mul(&vhq)),
        qq: n[5]
            .mul(&rinv)
            .add(&n[2].mul(&vq).scale_int(2))
            .add(&p.mul(&vqq)),
    })
}
