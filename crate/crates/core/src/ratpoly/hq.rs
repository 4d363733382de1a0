//! Symmetric polynomials in the basis `H^a Q^b`, `H = λ₁+λ₂`, `Q = λ₁²+λ₂²`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::poly2::{Monomial, Poly2};
use super::{Rational, RatPolyError};

/// `Σ c_{ab} H^a Q^b` over the pairs with `a + 2b = degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HQExpansion {
    pub degree: u32,
    pub coeffs: BTreeMap<(u32, u32), Rational>,
}

impl HQExpansion {
    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.coeffs
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Expands back into `(λ₁, λ₂)`.
    pub fn expand(&self) -> Poly2 {
        substitute_hq(&self.as_hq_poly())
    }

    /// The expansion as a polynomial whose variables stand for `(H, Q)`.
    pub fn as_hq_poly(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for ((a, b), c) in &self.coeffs {
            p.add_term(Monomial::new(*a, *b), c.clone());
        }
        p
    }
}

/// Unique `H`/`Q` coordinates of a symmetric homogeneous polynomial.
pub fn to_hq_basis(p: &Poly2) -> Result<HQExpansion, RatPolyError> {
    let d = p.homogeneous_degree().ok_or(RatPolyError::NotHomogeneous)?;
    if !p.is_swap_symmetric() {
        return Err(RatPolyError::NotSymmetric);
    }
    let n = (d / 2 + 1) as usize;
    let h = Poly2::h();
    let q = Poly2::q();
    // Column b holds the coefficients of λ₁^i λ₂^(d−i), i ≤ d/2, in H^(d−2b) Q^b.
    let mut m: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n + 1]; n];
    for b in 0..n {
        let basis = &h.pow(d - 2 * b as u32) * &q.pow(b as u32);
        for (i, row) in m.iter_mut().enumerate() {
            row[b] = basis.coeff(i as u32, d - i as u32);
        }
    }
    for (i, row) in m.iter_mut().enumerate() {
        row[n] = p.coeff(i as u32, d - i as u32);
    }
    let sol = solve(m).expect("H^a Q^b is a basis");
    let mut coeffs = BTreeMap::new();
    for (b, c) in sol.into_iter().enumerate() {
        if !c.is_zero() {
            coeffs.insert((d - 2 * b as u32, b as u32), c);
        }
    }
    let e = HQExpansion { degree: d, coeffs };
    debug_assert_eq!(&e.expand(), p);
    Ok(e)
}

/// Converts an arbitrary symmetric polynomial into a polynomial in `(H, Q)`,
/// one homogeneous component at a time.
pub fn to_hq_poly(p: &Poly2) -> Result<Poly2, RatPolyError> {
    if !p.is_swap_symmetric() {
        return Err(RatPolyError::NotSymmetric);
    }
    let mut out = Poly2::zero();
    for (_, part) in p.homogeneous_parts() {
        out = &out + &to_hq_basis(&part)?.as_hq_poly();
    }
    Ok(out)
}

/// Alias of [`substitute_hq`] kept for symmetry with [`to_hq_poly`].
pub fn from_hq_poly(p: &Poly2) -> Poly2 {
    substitute_hq(p)
}

/// Replaces the variables of `p(H, Q)` by `H = λ₁+λ₂` and `Q = λ₁²+λ₂²`.
pub fn substitute_hq(p: &Poly2) -> Poly2 {
    p.compose(&Poly2::h(), &Poly2::q())
}

/// Gauss-Jordan elimination on an augmented `n × (n+1)` matrix.
fn solve(mut m: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            let pivot_row = m[col].clone();
            for (v, pv) in m[r].iter_mut().zip(pivot_row.iter()) {
                *v -= &f * pv;
            }
        }
    }
    debug_assert!(m.iter().enumerate().all(|(i, row)| row[i].is_one()));
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn squared_difference() {
        let d = (&Poly2::l1() - &Poly2::l2()).pow(2);
        let e = to_hq_basis(&d).unwrap();
        assert_eq!(e.coeff(0, 1), q(2, 1));
        assert_eq!(e.coeff(2, 0), q(-1, 1));
        assert_eq!(e.coeffs.len(), 2);
    }

    #[test]
    fn gauss_curvature() {
        let e = to_hq_basis(&Poly2::k()).unwrap();
        assert_eq!(e.coeff(2, 0), q(1, 2));
        assert_eq!(e.coeff(0, 1), q(-1, 2));
    }

    #[test]
    fn cubic_power_sum() {
        // B₃ = H³ − 3HK, with K = (H² − Q)/2.
        let e = to_hq_basis(&Poly2::power_sum(3)).unwrap();
        assert_eq!(e.coeff(1, 1), q(3, 2));
        assert_eq!(e.coeff(3, 0), q(-1, 2));
    }

    #[test]
    fn errors() {
        assert_eq!(
            to_hq_basis(&Poly2::from_terms([(1, 2, 1)])),
            Err(RatPolyError::NotSymmetric)
        );
        assert_eq!(
            to_hq_basis(&Poly2::from_terms([(1, 1, 0), (1, 0, 1), (1, 0, 0)])),
            Err(RatPolyError::NotHomogeneous)
        );
    }

    #[test]
    fn mixed_degree_round_trip() {
        let p = &Poly2::power_sum(3) + &Poly2::k().scale_int(5);
        let hq = to_hq_poly(&p).unwrap();
        assert_eq!(substitute_hq(&hq), p);
    }
}
