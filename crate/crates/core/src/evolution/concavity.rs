use serde::{Deserialize, Serialize};

use crate::ratpoly::{Monomial, Poly2, RatFn2, Rational};
use crate::sturm::Verdict;

use super::certify::{certify_ratfn_sign, CoefficientCert};
use super::{velocity_from_expr, EvolutionError, Velocity};

/// Exact record that the dual function is (or is not) `α`-concave.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConcavityCertificate {
    pub velocity: String,
    pub alpha: String,
    pub dual: String,
    /// Trace of `Hess Φ − ((α−1)/(αΦ)) ∇Φ ∇Φᵀ`, required `≤ 0`.
    pub trace_cert: CoefficientCert,
    /// Its determinant, required `≥ 0`.
    pub det_cert: CoefficientCert,
    /// `(Φ₁ − Φ₂)/(κ₁ − κ₂)`, the `η₁₂²` coefficient, required `≤ 0`.
    pub off_cert: CoefficientCert,
    pub holds: bool,
}

fn invert_poly(p: &Poly2, a: u32, b: u32) -> Poly2 {
    let mut out = Poly2::zero();
    for (m, c) in p.terms() {
        out.add_term(Monomial::new(a - m.i, b - m.j), c.clone());
    }
    out
}

/// `Φ(κ₁, κ₂) = −F(1/κ₁, 1/κ₂)`, written in the same two variables.
pub fn dual_function(f: &RatFn2) -> RatFn2 {
    let a = f.num().degree_in(crate::ratpoly::Var::L1).unwrap_or(0)
        .max(f.den().degree_in(crate::ratpoly::Var::L1).unwrap_or(0));
    let b = f.num().degree_in(crate::ratpoly::Var::L2).unwrap_or(0)
        .max(f.den().degree_in(crate::ratpoly::Var::L2).unwrap_or(0));
    let n = invert_poly(f.num(), a, b);
    let d = invert_poly(f.den(), a, b);
    RatFn2::new(-&n, d).expect("nonzero denominator")
}

/// Certifies `Φ^{ij,kl}ηη ≤ ((α−1)/(αΦ))(Φ^{ij}η_{ij})²` for all symmetric
/// `η` on the whole positive cone, diagonal included.
pub fn dual_concavity_certificate(
    v: &Velocity,
    alpha: &Rational,
) -> Result<ConcavityCertificate, EvolutionError> {
    let phi = dual_function(&v.f);
    let d = velocity_from_expr(&phi)?;
    let one = Rational::from_integer(1.into());
    let k = RatFn2::constant((alpha - &one) / alpha);
    let coef = &k / &phi;
    let (p1, p2) = (&d.gradient.0, &d.gradient.1);
    let h = &d.hessian_diag;
    let m11 = &h[0][0] - &(&coef * &(p1 * p1));
    let m12 = &h[0][1] - &(&coef * &(p1 * p2));
    let m22 = &h[1][1] - &(&coef * &(p2 * p2));
    let trace = &m11 + &m22;
    let det = &(&m11 * &m22) - &(&m12 * &m12);
    let trace_cert = certify_ratfn_sign(&trace, false)?;
    let det_cert = certify_ratfn_sign(&det, false)?;
    let off_cert = certify_ratfn_sign(&d.hessian_off, false)?;
    if off_cert.sign() == Some(Verdict::Indefinite) {
        return Err(EvolutionError::ReductionFailure);
    }
    let holds = trace_cert.is_nonpositive() && det_cert.is_nonnegative() && off_cert.is_nonpositive();
    Ok(ConcavityCertificate {
        velocity: v.f.to_text(),
        alpha: crate::ratpoly::format_rational(alpha),
        dual: phi.to_text(),
        trace_cert,
        det_cert,
        off_cert,
        holds,
    })
}
