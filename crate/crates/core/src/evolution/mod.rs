//! Evolution equations of curvature quantities under `∂X/∂t = −Fν`,
//! their reduction at critical points, and exact sign certification.

mod certify;
mod concavity;
mod engine;
mod quantity;
mod scalar;
mod velocity;

pub use certify::{
    certify_monotone, certify_ratfn_sign, CoefficientCert, FactorCert, MonotoneVerdict,
    MonotonicityCertificate, RatFnSign, Witness, REFUTATION_NOTE,
};
pub use concavity::{dual_concavity_certificate, dual_function, ConcavityCertificate};
pub use engine::{
    critical_jet, evolve_hq_jet, evolve_power_sum_jet, grad_var, gradient_coefficients,
    hessian_form, metric_pair, power_sum_grad, CriticalForm, EvolutionExpr, Grad, GradQuadForm,
    QuadForm,
};
pub use quantity::{Quantity, QuantityJet};
pub use scalar::Scalar;
pub use velocity::{velocity_from_expr, Velocity, VelocityJet};

use crate::ratpoly::{RatFn2, Rational};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvolutionError {
    #[error("expression is not symmetric in the principal curvatures")]
    NotSymmetric,
    #[error("(F1 - F2)/(l1 - l2) has a pole on the diagonal")]
    DiagonalPole,
    #[error("quantity is identically zero")]
    DegenerateQuantity,
    #[error("critical-point condition does not determine h22;1 (coefficient vanishes)")]
    DegenerateGradient,
    #[error("gradient form couples (h11;1, h22;1) with (h11;2, h22;2)")]
    CrossTermResidual,
    #[error("expression has a pole at the evaluation point")]
    PoleAtPoint,
    #[error("expression is not homogeneous")]
    NotHomogeneous,
    #[error("sign of the mixed second-derivative coefficient is indefinite")]
    ReductionFailure,
}

/// `L B_α` as an exact rational-function expression.
pub fn evolve_power_sum(v: &Velocity, alpha: u32) -> Result<EvolutionExpr<RatFn2>, EvolutionError> {
    let (reaction, form) = evolve_power_sum_jet(&v.jet(), alpha);
    Ok(EvolutionExpr {
        reaction,
        grad: form.into_blocks()?,
    })
}

/// `L w`, or `L log w` when `log_scale` is set.
pub fn evolve_quantity(
    v: &Velocity,
    w: &RatFn2,
    log_scale: bool,
) -> Result<EvolutionExpr<RatFn2>, EvolutionError> {
    let q = Quantity::new(w)?;
    let jet = if log_scale { q.log_jet() } else { q.plain_jet() };
    let (reaction, form) = evolve_hq_jet(&v.jet(), &jet);
    Ok(EvolutionExpr {
        reaction,
        grad: form.into_blocks()?,
    })
}

/// `a1` with `h₂₂;₁ = a1 · h₁₁;₁` wherever `∇w = 0`.
pub fn critical_point_ratio(w: &RatFn2) -> Result<RatFn2, EvolutionError> {
    let q = Quantity::new(w)?;
    let jet = q.log_jet();
    let l1 = RatFn2::from_poly(crate::ratpoly::Poly2::l1());
    let l2 = RatFn2::from_poly(crate::ratpoly::Poly2::l2());
    let (c1, c2) = gradient_coefficients(&l1, &l2, &jet);
    if c2.is_zero() {
        return Err(EvolutionError::DegenerateGradient);
    }
    Ok(&(-&c1) / &c2)
}

/// Reaction and diagonal gradient coefficients of `L log w` at a critical
/// point of `w`.
pub fn critical_form(v: &Velocity, w: &RatFn2) -> Result<CriticalForm<RatFn2>, EvolutionError> {
    let q = Quantity::new(w)?;
    critical_jet(&v.jet(), &q.log_jet())
}

/// [`critical_form`] evaluated exactly at `(λ₁, λ₂) = (a, b)`.
pub fn critical_form_at(
    v: &Velocity,
    q: &Quantity,
    a: &Rational,
    b: &Rational,
) -> Result<CriticalForm<Rational>, EvolutionError> {
    let vj = v.jet_at(a, b)?;
    let qj = q.log_jet_at(a, b).ok_or(EvolutionError::PoleAtPoint)?;
    critical_jet(&vj, &qj)
}
