use crate::ratpoly::{Poly2, RatFn2, Rational, Var};

use super::scalar::Scalar;
use super::EvolutionError;

/// Normal velocity `F(λ₁, λ₂)` with its first and second derivatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Velocity {
    pub f: RatFn2,
    /// `(F¹, F²) = (∂F/∂λ₁, ∂F/∂λ₂)`.
    pub gradient: (RatFn2, RatFn2),
    /// `[[F₁₁, F₁₂], [F₁₂, F₂₂]]`.
    pub hessian_diag: [[RatFn2; 2]; 2],
    /// `(F¹ − F²)/(λ₁ − λ₂)`, free of a pole on the diagonal.
    pub hessian_off: RatFn2,
}

/// Values of a velocity and its derivatives over some [`Scalar`] field.
#[derive(Clone, Debug, PartialEq)]
pub struct VelocityJet<S> {
    pub l1: S,
    pub l2: S,
    pub f: S,
    pub f1: S,
    pub f2: S,
    pub f11: S,
    pub f12: S,
    pub f22: S,
    pub off: S,
}

pub fn velocity_from_expr(f: &RatFn2) -> Result<Velocity, EvolutionError> {
    if !f.is_swap_symmetric() {
        return Err(EvolutionError::NotSymmetric);
    }
    let f1 = f.derivative(Var::L1);
    let f2 = f.derivative(Var::L2);
    let f11 = f1.derivative(Var::L1);
    let f12 = f1.derivative(Var::L2);
    let f22 = f2.derivative(Var::L2);
    let diff = &f1 - &f2;
    let delta = &Poly2::l1() - &Poly2::l2();
    let off_num = diff
        .num()
        .div_exact(&delta)
        .ok_or(EvolutionError::DiagonalPole)?;
    let off = RatFn2::new(off_num, diff.den().clone()).expect("nonzero denominator");
    if off.den().div_exact(&delta).is_some() {
        return Err(EvolutionError::DiagonalPole);
    }
    Ok(Velocity {
        f: f.clone(),
        gradient: (f1, f2),
        hessian_diag: [[f11, f12.clone()], [f12, f22]],
        hessian_off: off,
    })
}

impl Velocity {
    pub fn jet(&self) -> VelocityJet<RatFn2> {
        VelocityJet {
            l1: RatFn2::from_poly(Poly2::l1()),
            l2: RatFn2::from_poly(Poly2::l2()),
            f: self.f.clone(),
            f1: self.gradient.0.clone(),
            f2: self.gradient.1.clone(),
            f11: self.hessian_diag[0][0].clone(),
            f12: self.hessian_diag[0][1].clone(),
            f22: self.hessian_diag[1][1].clone(),
            off: self.hessian_off.clone(),
        }
    }

    pub fn jet_at(&self, a: &Rational, b: &Rational) -> Result<VelocityJet<Rational>, EvolutionError> {
        let e = |g: &RatFn2| g.eval_exact(a, b).map_err(|_| EvolutionError::PoleAtPoint);
        Ok(VelocityJet {
            l1: a.clone(),
            l2: b.clone(),
            f: e(&self.f)?,
            f1: e(&self.gradient.0)?,
            f2: e(&self.gradient.1)?,
            f11: e(&self.hessian_diag[0][0])?,
            f12: e(&self.hessian_diag[0][1])?,
            f22: e(&self.hessian_diag[1][1])?,
            off: e(&self.hessian_off)?,
        })
    }

    /// Floating-point jet for the simulator.
    pub fn jet_f64(&self, a: f64, b: f64) -> VelocityJet<f64> {
        VelocityJet {
            l1: a,
            l2: b,
            f: self.f.eval_f64(a, b),
            f1: self.gradient.0.eval_f64(a, b),
            f2: self.gradient.1.eval_f64(a, b),
            f11: self.hessian_diag[0][0].eval_f64(a, b),
            f12: self.hessian_diag[0][1].eval_f64(a, b),
            f22: self.hessian_diag[1][1].eval_f64(a, b),
            off: self.hessian_off.eval_f64(a, b),
        }
    }

    /// Homogeneity degree `c_h` of `F`, if `F` is homogeneous.
    pub fn homogeneity(&self) -> Option<i64> {
        self.f.homogeneous_degree()
    }
}

impl<S: Scalar> VelocityJet<S> {
    pub fn f_k(&self, k: usize) -> &S {
        if k == 0 {
            &self.f1
        } else {
            &self.f2
        }
    }

    pub fn lambda(&self, k: usize) -> &S {
        if k == 0 {
            &self.l1
        } else {
            &self.l2
        }
    }
}
