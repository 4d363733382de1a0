//! The operator `L = d/dt − F^{kl}∇_k∇_l` applied to power sums and to
//! functions of `H = B₁` and `Q = B₂`, in an eigenframe of `h_{ij}`.
//!
//! Curvature gradients are totally symmetric, leaving four components:
//! `D₁ = h₁₁;₁`, `D₂ = h₂₂;₁ = h₁₂;₂`, `D₃ = h₁₁;₂ = h₁₂;₁`, `D₄ = h₂₂;₂`.

use super::quantity::QuantityJet;
use super::scalar::Scalar;
use super::velocity::VelocityJet;
use super::EvolutionError;

/// Index in `0..4` of `h_{ij;k}` (indices `0, 1`) among `D₁..D₄`.
pub fn grad_var(i: usize, j: usize, k: usize) -> usize {
    match i + j + k {
        0 => 0,
        1 => 2,
        2 => 1,
        _ => 3,
    }
}

/// Symmetric quadratic form in `D₁..D₄`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadForm<S> {
    pub m: [[S; 4]; 4],
}

impl<S: Scalar> QuadForm<S> {
    pub fn zero() -> Self {
        Self {
            m: std::array::from_fn(|_| std::array::from_fn(|_| S::zero())),
        }
    }

    /// Adds `c · D_a · D_b`.
    pub fn add_product(&mut self, a: usize, b: usize, c: &S) {
        if c.is_zero() {
            return;
        }
        if a == b {
            self.m[a][a] = self.m[a][a].add(c);
        } else {
            let half = c.div(&S::from_int(2)).expect("two is invertible");
            self.m[a][b] = self.m[a][b].add(&half);
            self.m[b][a] = self.m[b][a].add(&half);
        }
    }

    pub fn add_scaled(&mut self, other: &QuadForm<S>, c: &S) {
        if c.is_zero() {
            return;
        }
        for a in 0..4 {
            for b in 0..4 {
                if !other.m[a][b].is_zero() {
                    self.m[a][b] = self.m[a][b].add(&other.m[a][b].mul(c));
                }
            }
        }
    }

    /// Value at concrete gradient components.
    pub fn eval(&self, d: &[S; 4]) -> S {
        let mut acc = S::zero();
        for a in 0..4 {
            for b in 0..4 {
                if !self.m[a][b].is_zero() {
                    acc = acc.add(&self.m[a][b].mul(&d[a]).mul(&d[b]));
                }
            }
        }
        acc
    }

    pub fn into_blocks(self) -> Result<GradQuadForm<S>, EvolutionError> {
        for a in 0..2 {
            for b in 2..4 {
                if !self.m[a][b].is_zero() {
                    return Err(EvolutionError::CrossTermResidual);
                }
            }
        }
        let [r0, r1, r2, r3] = self.m;
        let [a00, a01, _, _] = r0;
        let [a10, a11, _, _] = r1;
        let [_, _, b22, b23] = r2;
        let [_, _, b32, b33] = r3;
        Ok(GradQuadForm {
            block_a: [[a00, a01], [a10, a11]],
            block_b: [[b22, b23], [b32, b33]],
        })
    }
}

/// Block-diagonal gradient form: `block_a` over `(D₁, D₂)`, `block_b`
/// over `(D₃, D₄)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradQuadForm<S> {
    pub block_a: [[S; 2]; 2],
    pub block_b: [[S; 2]; 2],
}

impl<S: Scalar> GradQuadForm<S> {
    pub fn is_zero(&self) -> bool {
        self.block_a.iter().chain(&self.block_b).flatten().all(S::is_zero)
    }
}

/// Operator applied to a quantity: gradient-free reaction plus a
/// quadratic form in curvature gradients.
#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionExpr<S> {
    pub reaction: S,
    pub grad: GradQuadForm<S>,
}

/// Covariant derivative `X_{;k}` expressed linearly in the gradient
/// components: `k1` over `(D₁, D₂)`, `k2` over `(D₃, D₄)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Grad<S> {
    pub k1: [S; 2],
    pub k2: [S; 2],
}

/// `(B_β)_{;k} = β(λ₁^{β−1}h₁₁;k + λ₂^{β−1}h₂₂;k)`.
pub fn power_sum_grad<S: Scalar>(l1: &S, l2: &S, beta: u32) -> Grad<S> {
    let c1 = l1.powu(beta - 1).scale_int(beta as i64);
    let c2 = l2.powu(beta - 1).scale_int(beta as i64);
    Grad {
        k1: [c1.clone(), c2.clone()],
        k2: [c1, c2],
    }
}

/// `F(∇X, ∇Y) = Σ_k F^{kk} X_{;k} Y_{;k}`.
pub fn metric_pair<S: Scalar>(v: &VelocityJet<S>, x: &Grad<S>, y: &Grad<S>) -> QuadForm<S> {
    let mut q = QuadForm::zero();
    for a in 0..2 {
        for b in 0..2 {
            let c = x.k1[a].mul(&y.k1[b]).mul(&v.f1);
            q.add_product(a, b, &c);
            let c = x.k2[a].mul(&y.k2[b]).mul(&v.f2);
            q.add_product(2 + a, 2 + b, &c);
        }
    }
    q
}

/// Spectral second derivative `F^{kl,rs}η_{kl}η_{rs}` with `η = h_{··;p}`.
pub fn hessian_form<S: Scalar>(v: &VelocityJet<S>, p: usize) -> QuadForm<S> {
    let e11 = grad_var(0, 0, p);
    let e22 = grad_var(1, 1, p);
    let e12 = grad_var(0, 1, p);
    let mut q = QuadForm::zero();
    q.add_product(e11, e11, &v.f11);
    q.add_product(e11, e22, &v.f12.scale_int(2));
    q.add_product(e22, e22, &v.f22);
    q.add_product(e12, e12, &v.off.scale_int(2));
    q
}

/// `L B_α` in the full four-term form.
pub fn evolve_power_sum_jet<S: Scalar>(v: &VelocityJet<S>, alpha: u32) -> (S, QuadForm<S>) {
    assert!(alpha >= 1, "power sums start at B₁");
    let lam = [&v.l1, &v.l2];
    let b = |k: u32| lam[0].powu(k).add(&lam[1].powu(k));
    let flam2 = v.f1.mul(&v.l1.mul(&v.l1)).add(&v.f2.mul(&v.l2.mul(&v.l2)));
    let flam = v.f1.mul(&v.l1).add(&v.f2.mul(&v.l2));
    let a = alpha as i64;
    let reaction = flam2
        .mul(&b(alpha))
        .add(&v.f.sub(&flam).mul(&b(alpha + 1)))
        .scale_int(a);
    let mut q = QuadForm::zero();
    if alpha >= 2 {
        for i in 0..2 {
            for j in 0..2 {
                let mut s = S::zero();
                for r in 0..=alpha - 2 {
                    s = s.add(&lam[i].powu(alpha - 2 - r).mul(&lam[j].powu(r)));
                }
                for k in 0..2 {
                    let c = s.mul(v.f_k(k)).scale_int(-a);
                    let d = grad_var(i, j, k);
                    q.add_product(d, d, &c);
                }
            }
        }
    }
    for (p, l) in lam.iter().enumerate() {
        let w = l.powu(alpha - 1).scale_int(a);
        q.add_scaled(&hessian_form(v, p), &w);
    }
    (reaction, q)
}

/// `L Ψ(H, Q)` by the second-order chain rule over `H = B₁`, `Q = B₂`.
pub fn evolve_hq_jet<S: Scalar>(v: &VelocityJet<S>, psi: &QuantityJet<S>) -> (S, QuadForm<S>) {
    let (rh, qh) = evolve_power_sum_jet(v, 1);
    let (rq, qq) = evolve_power_sum_jet(v, 2);
    let gh = power_sum_grad(&v.l1, &v.l2, 1);
    let gq = power_sum_grad(&v.l1, &v.l2, 2);
    let reaction = psi.h.mul(&rh).add(&psi.q.mul(&rq));
    let mut form = QuadForm::zero();
    form.add_scaled(&qh, &psi.h);
    form.add_scaled(&qq, &psi.q);
    form.add_scaled(&metric_pair(v, &gh, &gh), &psi.hh.neg());
    form.add_scaled(&metric_pair(v, &gh, &gq), &psi.hq.scale_int(-2));
    form.add_scaled(&metric_pair(v, &gq, &gq), &psi.qq.neg());
    (reaction, form)
}

/// Reduced form at a spatial critical point of `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalForm<S> {
    pub reaction: S,
    /// `h₂₂;₁ = a1 · h₁₁;₁`.
    pub a1: S,
    /// `h₁₁;₂ = a2 · h₂₂;₂`; equals `a1` with the arguments swapped.
    pub a2: S,
    /// Coefficient of `h₁₁;₁²`.
    pub c1: S,
    /// Coefficient of `h₂₂;₂²`.
    pub c2: S,
}

/// Coefficients `(c₁, c₂)` of `(log w)_{;1} = c₁h₁₁;₁ + c₂h₂₂;₁`.
pub fn gradient_coefficients<S: Scalar>(v_l1: &S, v_l2: &S, psi: &QuantityJet<S>) -> (S, S) {
    let c1 = psi.h.add(&psi.q.mul(v_l1).scale_int(2));
    let c2 = psi.h.add(&psi.q.mul(v_l2).scale_int(2));
    (c1, c2)
}

/// Critical-point reduction of `L log w`, given the `log w` jet.
pub fn critical_jet<S: Scalar>(
    v: &VelocityJet<S>,
    psi: &QuantityJet<S>,
) -> Result<CriticalForm<S>, EvolutionError> {
    let (g1, g2) = gradient_coefficients(&v.l1, &v.l2, psi);
    let a1 = g1.neg().div(&g2).ok_or(EvolutionError::DegenerateGradient)?;
    let a2 = g2.neg().div(&g1).ok_or(EvolutionError::DegenerateGradient)?;
    let (reaction, form) = evolve_hq_jet(v, psi);
    let g = form.into_blocks()?;
    let a = &g.block_a;
    let b = &g.block_b;
    let c1 = a[0][0]
        .add(&a[0][1].mul(&a1).scale_int(2))
        .add(&a[1][1].mul(&a1).mul(&a1));
    let c2 = b[1][1]
        .add(&b[0][1].mul(&a2).scale_int(2))
        .add(&b[0][0].mul(&a2).mul(&a2));
    Ok(CriticalForm {
        reaction,
        a1,
        a2,
        c1,
        c2,
    })
}
