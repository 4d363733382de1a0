use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::univariate::UniPoly;
use super::{Rational, RatPolyError};

/// Exponent pair `(i, j)` of the monomial `λ₁^i λ₂^j`.
///
/// Ordered graded-lexicographically with λ₁ > λ₂: total degree first, then
/// the λ₁ exponent. The canonical (printing) order is descending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const fn new(i: u32, j: u32) -> Self {
        Self { i, j }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.i.cmp(&other.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Which principal curvature a derivative is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    L1,
    L2,
}

/// Exact bivariate polynomial in `(λ₁, λ₂)` with rational coefficients.
///
/// The same type doubles as a polynomial in `(H, Q)` inside the power-sum
/// chain rule; the variable meaning is then fixed by the caller.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(Rational::from_integer(c.into()))
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::new(i, j), c);
        }
        Self { terms }
    }

    /// `λ₁`
    pub fn l1() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    /// `λ₂`
    pub fn l2() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    /// Mean curvature `H = λ₁ + λ₂`.
    pub fn h() -> Self {
        Self::power_sum(1)
    }

    /// `|A|² = λ₁² + λ₂²`.
    pub fn q() -> Self {
        Self::power_sum(2)
    }

    /// Gauss curvature `K = λ₁λ₂`.
    pub fn k() -> Self {
        Self::monomial(Rational::one(), 1, 1)
    }

    /// Power sum `B_k = λ₁^k + λ₂^k`.
    pub fn power_sum(k: u32) -> Self {
        let mut p = Self::monomial(Rational::one(), k, 0);
        p.add_term(Monomial::new(0, k), Rational::one());
        p
    }

    /// Builds a polynomial from `(coefficient, i, j)` triples; repeated
    /// exponents accumulate.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, u32, u32)>,
    {
        let mut p = Self::zero();
        for (c, i, j) in terms {
            p.add_term(Monomial::new(i, j), Rational::from_integer(c.into()));
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Terms in canonical (descending graded-lex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| match v {
                Var::L1 => m.i,
                Var::L2 => m.j,
            })
            .max()
    }

    /// Common total degree if every term has it; `None` for the zero
    /// polynomial and for mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = it.next()?.degree();
        it.all(|m| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_degree().is_some()
    }

    /// `p(λ₂, λ₁)`.
    pub fn swap(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.j, m.i), c.clone()))
                .collect(),
        }
    }

    pub fn is_swap_symmetric(&self) -> bool {
        self.terms
            .iter()
            .all(|(m, c)| self.terms.get(&Monomial::new(m.j, m.i)) == Some(c))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (*m, v * c))
                .collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&Rational::from_integer(c.into()))
    }

    /// Multiplies by `λ₁^a λ₂^b`.
    pub fn shift(&self, a: u32, b: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.i + a, m.j + b), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            match v {
                Var::L1 if m.i > 0 => out.add_term(
                    Monomial::new(m.i - 1, m.j),
                    c * Rational::from_integer(m.i.into()),
                ),
                Var::L2 if m.j > 0 => out.add_term(
                    Monomial::new(m.i, m.j - 1),
                    c * Rational::from_integer(m.j.into()),
                ),
                _ => {}
            }
        }
        out
    }

    pub fn eval(&self, a: &Rational, b: &Rational) -> Rational {
        let di = self.degree_in(Var::L1).unwrap_or(0) as usize;
        let dj = self.degree_in(Var::L2).unwrap_or(0) as usize;
        let pa = powers(a, di);
        let pb = powers(b, dj);
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (m, c)| {
                acc + c * &pa[m.i as usize] * &pb[m.j as usize]
            })
    }

    pub fn eval_f64(&self, a: f64, b: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| rational_to_f64(c) * a.powi(m.i as i32) * b.powi(m.j as i32))
            .sum()
    }

    /// Substitutes polynomials for both variables: `p(x(λ), y(λ))`.
    pub fn compose(&self, x: &Poly2, y: &Poly2) -> Poly2 {
        let di = self.degree_in(Var::L1).unwrap_or(0) as usize;
        let dj = self.degree_in(Var::L2).unwrap_or(0) as usize;
        let mut px = vec![Poly2::one()];
        for k in 0..di {
            let next = &px[k] * x;
            px.push(next);
        }
        let mut py = vec![Poly2::one()];
        for k in 0..dj {
            let next = &py[k] * y;
            py.push(next);
        }
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let t = (&px[m.i as usize] * &py[m.j as usize]).scale(c);
            out = &out + &t;
        }
        out
    }

    /// `q(x) = p(x, 1)`; for homogeneous `p` of degree `d` the sign of `p`
    /// on `λ₁, λ₂ > 0` equals the sign of `q` at `λ₁/λ₂`.
    pub fn dehomogenize(&self) -> Result<UniPoly, RatPolyError> {
        self.homogeneous_degree()
            .ok_or(RatPolyError::NotHomogeneous)?;
        Ok(self.restrict_l2_one())
    }

    /// `p(x, 1)` without the homogeneity precondition.
    pub fn restrict_l2_one(&self) -> UniPoly {
        let deg = self.degree_in(Var::L1).unwrap_or(0) as usize;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (m, c) in &self.terms {
            coeffs[m.i as usize] += c;
        }
        UniPoly::new(coeffs)
    }

    /// Inverse of [`Poly2::dehomogenize`]: `λ₂^d q(λ₁/λ₂)`.
    pub fn homogenize(q: &UniPoly, d: u32) -> Poly2 {
        let mut p = Poly2::zero();
        for (i, c) in q.coeffs().iter().enumerate() {
            let i = i as u32;
            assert!(i <= d, "homogenization degree below polynomial degree");
            p.add_term(Monomial::new(i, d - i), c.clone());
        }
        p
    }

    /// Positive rational `c` and primitive integer polynomial `p/c` whose
    /// leading coefficient is positive.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        let c = Rational::new(num, den);
        if self.leading_coeff().is_negative() {
            -c
        } else {
            c
        }
    }

    pub fn primitive(&self) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        let c = self.content();
        self.scale(&c.recip())
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Poly2 {
        if self.is_zero() {
            return Poly2::zero();
        }
        self.scale(&self.leading_coeff().recip())
    }

    /// Splits into homogeneous components, ascending by degree.
    pub fn homogeneous_parts(&self) -> Vec<(u32, Poly2)> {
        let mut parts: BTreeMap<u32, Poly2> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.degree())
                .or_default()
                .add_term(*m, c.clone());
        }
        parts.into_iter().collect()
    }

    /// Largest `k` with `λ₁^k | p` and largest `l` with `λ₂^l | p`.
    pub fn monomial_valuation(&self) -> (u32, u32) {
        let i = self.terms.keys().map(|m| m.i).min().unwrap_or(0);
        let j = self.terms.keys().map(|m| m.j).min().unwrap_or(0);
        (i, j)
    }

    /// Divides by `λ₁^a λ₂^b`; caller guarantees divisibility.
    pub fn unshift(&self, a: u32, b: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (Monomial::new(m.i - a, m.j - b), c.clone()))
                .collect(),
        }
    }

    /// Canonical text: `c*l1^i*l2^j` terms in descending graded-lex order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Recursive view as a polynomial in λ₁ with coefficients in `Q[λ₂]`.
    pub(crate) fn to_recursive(&self) -> Vec<UniPoly> {
        let deg = self.degree_in(Var::L1).unwrap_or(0) as usize;
        let mut rows: Vec<Vec<Rational>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let row = &mut rows[m.i as usize];
            if row.len() <= m.j as usize {
                row.resize(m.j as usize + 1, Rational::zero());
            }
            row[m.j as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    pub(crate) fn from_recursive(rows: &[UniPoly]) -> Self {
        let mut p = Poly2::zero();
        for (i, row) in rows.iter().enumerate() {
            for (j, c) in row.coeffs().iter().enumerate() {
                p.add_term(Monomial::new(i as u32, j as u32), c.clone());
            }
        }
        p
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn div_exact(&self, other: &Poly2) -> Option<Poly2> {
        super::gcd::div_exact(self, other)
    }

    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        super::gcd::gcd(self, other)
    }
}

pub(crate) fn powers(x: &Rational, n: usize) -> Vec<Rational> {
    let mut v = Vec::with_capacity(n + 1);
    v.push(Rational::one());
    for k in 0..n {
        let next = &v[k] * x;
        v.push(next);
    }
    v
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| {
        // Ratio of huge integers: shift both to a representable range.
        let n = r.numer();
        let d = r.denom();
        let shift = n.bits().max(d.bits()).saturating_sub(900) as usize;
        let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{}", fmt_rational(&mag))?;
            for (name, e) in [("l1", m.i), ("l2", m.j)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    _ => write!(f, "*{name}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Add for Poly2 {
    type Output = Poly2;
    fn add(self, rhs: Poly2) -> Poly2 {
        &self + &rhs
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Sub for Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: Poly2) -> Poly2 {
        &self - &rhs
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(Monomial::new(ma.i + mb.i, ma.j + mb.j), ca * cb);
            }
        }
        out
    }
}

impl Mul for Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: Poly2) -> Poly2 {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn difference_of_squares() {
        let l1 = Poly2::l1();
        let l2 = Poly2::l2();
        let p = &(&l1 + &l2) * &(&l1 - &l2);
        assert_eq!(p, Poly2::from_terms([(1, 2, 0), (-1, 0, 2)]));
    }

    #[test]
    fn power_rule() {
        let p = Poly2::from_terms([(1, 2, 1)]);
        assert_eq!(p.derivative(Var::L1), Poly2::from_terms([(2, 1, 1)]));
    }

    #[test]
    fn expansion_of_row_one_numerator() {
        let l1 = Poly2::l1();
        let l2 = Poly2::l2();
        let p = &(&l1 + &l2) * &(&l1 - &l2).pow(2);
        assert_eq!(
            p,
            Poly2::from_terms([(1, 3, 0), (-1, 2, 1), (-1, 1, 2), (1, 0, 3)])
        );
    }

    #[test]
    fn symmetry_examples() {
        assert!(Poly2::q().is_swap_symmetric());
        assert!(!Poly2::from_terms([(1, 2, 1)]).is_swap_symmetric());
        assert!(Poly2::from_terms([(3, 2, 0), (2, 1, 1), (3, 0, 2)]).is_swap_symmetric());
    }

    #[test]
    fn homogeneous_degree_examples() {
        let p = Poly2::from_terms([(1, 3, 0), (-1, 2, 1), (-1, 1, 2), (1, 0, 3)]);
        assert_eq!(p.homogeneous_degree(), Some(3));
        assert_eq!(Poly2::from_terms([(1, 1, 0), (1, 0, 2)]).homogeneous_degree(), None);
        assert_eq!(Poly2::zero().homogeneous_degree(), None);
        let a4 = Poly2::from_terms([(1, 4, 0), (2, 3, 1), (4, 2, 2), (2, 1, 3), (1, 0, 4)]);
        let d = &Poly2::l1() - &Poly2::l2();
        assert_eq!((&a4 * &d.pow(2)).homogeneous_degree(), Some(6));
    }

    #[test]
    fn dehomogenize_examples() {
        let p = Poly2::from_terms([(1, 2, 0), (-1, 0, 2)]);
        let u = p.dehomogenize().unwrap();
        assert_eq!(u.coeffs(), &[q(-1, 1), q(0, 1), q(1, 1)]);
        let c = Poly2::from_terms([
            (5, 8, 0),
            (-4, 7, 1),
            (46, 6, 2),
            (48, 5, 3),
            (72, 4, 4),
            (44, 3, 5),
            (34, 2, 6),
            (8, 1, 7),
            (3, 0, 8),
        ]);
        let u = c.dehomogenize().unwrap();
        let expect: Vec<Rational> = [3, 8, 34, 44, 72, 48, 46, -4, 5]
            .iter()
            .map(|&v| q(v, 1))
            .collect();
        assert_eq!(u.coeffs(), expect.as_slice());
        assert_eq!(Poly2::zero().dehomogenize(), Err(RatPolyError::NotHomogeneous));
    }

    #[test]
    fn canonical_text() {
        let p = Poly2::from_terms([(1, 0, 2), (-3, 1, 1), (1, 2, 0)]).scale(&q(1, 2));
        assert_eq!(p.to_text(), "1/2*l1^2 - 3/2*l1*l2 + 1/2*l2^2");
        assert_eq!(Poly2::from_int(-4).to_text(), "-4");
    }

    #[test]
    fn eval_row_one_numerator() {
        let p = Poly2::from_terms([(1, 3, 0), (-1, 2, 1), (-1, 1, 2), (1, 0, 3)]);
        assert_eq!(p.eval(&q(2, 1), &q(1, 1)), q(3, 1));
    }
}
