//! Bivariate gcd via subresultant pseudo-remainder sequences over `Q[λ₂][λ₁]`,
//! with a univariate shortcut for homogeneous inputs.

use super::poly2::Poly2;
use super::univariate::UniPoly;

type Rec = Vec<UniPoly>;

/// Normalized gcd: primitive with positive leading coefficient, `1` for
/// coprime inputs, `0` only if both inputs are zero.
pub fn gcd(a: &Poly2, b: &Poly2) -> Poly2 {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Poly2::one();
    }
    if a.is_homogeneous() && b.is_homogeneous() {
        return gcd_homogeneous(a, b);
    }
    gcd_subresultant(a, b)
}

/// Gcd of two homogeneous polynomials through `p(x, 1)`.
pub fn gcd_homogeneous(a: &Poly2, b: &Poly2) -> Poly2 {
    let (ai, aj) = a.monomial_valuation();
    let (bi, bj) = b.monomial_valuation();
    let a_core = a.unshift(ai, aj);
    let b_core = b.unshift(bi, bj);
    let g = a_core.restrict_l2_one().gcd(&b_core.restrict_l2_one());
    let d = g.degree().unwrap_or(0) as u32;
    Poly2::homogenize(&g, d)
        .shift(ai.min(bi), aj.min(bj))
        .primitive()
}

/// General gcd by the subresultant PRS on the recursive representation.
pub fn gcd_subresultant(a: &Poly2, b: &Poly2) -> Poly2 {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let ra = a.to_recursive();
    let rb = b.to_recursive();
    let ca = rec_content(&ra);
    let cb = rec_content(&rb);
    let d = ca.gcd(&cb);
    let mut pa = rec_div_scalar(&ra, &ca);
    let mut pb = rec_div_scalar(&rb, &cb);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    let mut g = UniPoly::one();
    let mut h = UniPoly::one();
    let result_pp = loop {
        if pb.len() == 1 {
            break vec![UniPoly::one()];
        }
        let delta = (pa.len() - pb.len()) as u32;
        let r = prem(&pa, &pb);
        if r.is_empty() {
            break rec_div_scalar(&pb, &rec_content(&pb));
        }
        if r.len() == 1 {
            break vec![UniPoly::one()];
        }
        let divisor = &g * &h.pow(delta);
        pa = pb;
        pb = r
            .iter()
            .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
            .collect();
        g = pa.last().unwrap().clone();
        if delta > 0 {
            h = g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant h update is exact");
        }
    };
    let dd: Rec = result_pp.iter().map(|c| &d * c).collect();
    Poly2::from_recursive(&dd).primitive()
}

fn rec_content(p: &Rec) -> UniPoly {
    p.iter()
        .fold(UniPoly::zero(), |acc, c| if c.is_zero() { acc } else { acc.gcd(c) })
}

fn rec_div_scalar(p: &Rec, c: &UniPoly) -> Rec {
    p.iter()
        .map(|v| v.div_exact(c).expect("content divides"))
        .collect()
}

fn rec_trim(mut p: Rec) -> Rec {
    while p.last().is_some_and(UniPoly::is_zero) {
        p.pop();
    }
    p
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b` in `λ₁`.
fn prem(a: &Rec, b: &Rec) -> Rec {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    let mut e = (a.len() - b.len() + 1) as u32;
    while !r.is_empty() && r.len() > db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        let shift = dr - db;
        let mut next: Rec = r.iter().map(|c| &lb * c).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = &next[k + shift] - &(&lr * bc);
        }
        r = rec_trim(next);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e);
        r = r.iter().map(|c| &f * c).collect();
    }
    r
}

/// Exact division by repeated leading-term cancellation; `None` when the
/// divisor does not divide.
pub fn div_exact(a: &Poly2, b: &Poly2) -> Option<Poly2> {
    assert!(!b.is_zero(), "division by zero polynomial");
    let (bm, bc) = b.leading().map(|(m, c)| (*m, c.clone()))?;
    let bc_inv = bc.recip();
    let mut r = a.clone();
    let mut q = Poly2::zero();
    while let Some((rm, rc)) = r.leading().map(|(m, c)| (*m, c.clone())) {
        if rm.i < bm.i || rm.j < bm.j {
            return None;
        }
        let t = Poly2::monomial(rc * &bc_inv, rm.i - bm.i, rm.j - bm.j);
        r = &r - &(&t * b);
        q = &q + &t;
    }
    Some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::Rational;

    fn l1() -> Poly2 {
        Poly2::l1()
    }
    fn l2() -> Poly2 {
        Poly2::l2()
    }

    #[test]
    fn homogeneous_common_factor() {
        let a = &(&l1() + &l2()) * &(&l1() - &l2());
        let b = &(&l1() + &l2()) * &(&l1() * &l2());
        assert_eq!(gcd(&a, &b), &l1() + &l2());
    }

    #[test]
    fn non_homogeneous_common_factor() {
        let f = &(&l1() * &l2()) + &Poly2::one();
        let a = &f * &(&l1() + &l2().pow(2));
        let b = &f * &(&l1().pow(2) - &Poly2::from_int(3));
        assert_eq!(gcd(&a, &b), f);
    }

    #[test]
    fn coprime() {
        let a = &l1() + &Poly2::one();
        let b = &l2() + &Poly2::from_int(2);
        assert_eq!(gcd(&a, &b), Poly2::one());
    }

    #[test]
    fn routes_agree_on_homogeneous() {
        let d = &l1() - &l2();
        let a = &(&d.pow(2) * &Poly2::k()) * &Poly2::q();
        let b = &(&d * &Poly2::h()) * &l2().pow(3);
        let g1 = gcd_homogeneous(&a, &b);
        let g2 = gcd_subresultant(&a, &b);
        assert_eq!(g1, g2);
        assert_eq!(g1, &d * &l2());
    }

    #[test]
    fn exact_division() {
        let a = &l1().pow(2) - &l2().pow(2);
        let b = &l1() + &l2();
        assert_eq!(div_exact(&a, &b), Some(&l1() - &l2()));
        assert_eq!(div_exact(&a, &(&l1() + &Poly2::one())), None);
        let c = a.scale(&Rational::new(3.into(), 7.into()));
        assert!(div_exact(&c, &b).is_some());
    }
}
