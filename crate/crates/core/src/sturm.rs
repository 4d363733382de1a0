//! Sturm chains, exact real-root counting and sign certificates on `(0, ∞)`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ratpoly::{format_rational, parse_rational, Rational, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SturmError {
    #[error("the zero polynomial has no Sturm chain")]
    ZeroPolynomial,
    #[error("interval is empty")]
    EmptyInterval,
}

/// A rational number or one of the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtRational {
    pub fn zero() -> Self {
        Self::Finite(Rational::zero())
    }

    pub fn int(n: i64) -> Self {
        Self::Finite(Rational::from_integer(n.into()))
    }

    fn rank(&self) -> i8 {
        match self {
            Self::NegInf => -1,
            Self::Finite(_) => 0,
            Self::PosInf => 1,
        }
    }

    pub fn less_than(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a < b,
            _ => self.rank() < other.rank(),
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NegInf => write!(f, "-inf"),
            Self::PosInf => write!(f, "inf"),
            Self::Finite(r) => write!(f, "{}", format_rational(r)),
        }
    }
}

impl std::str::FromStr for ExtRational {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "-inf" => Ok(Self::NegInf),
            "inf" | "+inf" => Ok(Self::PosInf),
            _ => parse_rational(s)
                .map(Self::Finite)
                .ok_or_else(|| format!("not a rational: {s}")),
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact rational serialized as `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalText(pub Rational);

impl Serialize for RationalText {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalText {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s)
            .map(RationalText)
            .ok_or_else(|| serde::de::Error::custom(format!("not a rational: {s}")))
    }
}

/// `[p, p′, −rem, …]`, ending at a constant multiple of `gcd(p, p′)`.
///
/// Elements past the second are scaled by positive constants to keep
/// their coefficients small; sign variations are unaffected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SturmChain {
    pub polys: Vec<UniPoly>,
}

impl SturmChain {
    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    /// Sign changes in the chain at `x`, ignoring zeros.
    pub fn sign_variations(&self, x: &ExtRational) -> usize {
        let signs = self.polys.iter().map(|p| match x {
            ExtRational::NegInf => p.sign_at_neg_inf(),
            ExtRational::PosInf => p.sign_at_pos_inf(),
            ExtRational::Finite(v) => p.sign_at(v),
        });
        let mut last = 0i8;
        let mut count = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }
}

pub fn sturm_sequence(p: &UniPoly) -> Result<SturmChain, SturmError> {
    if p.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    let mut polys = vec![p.clone()];
    let dp = p.derivative();
    if dp.is_zero() {
        return Ok(SturmChain { polys });
    }
    polys.push(dp);
    loop {
        let n = polys.len();
        let r = polys[n - 2].rem(&polys[n - 1]);
        if r.is_zero() {
            break;
        }
        polys.push((-&r).positive_primitive());
    }
    Ok(SturmChain { polys })
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_real_roots(p: &UniPoly, a: &ExtRational, b: &ExtRational) -> Result<usize, SturmError> {
    if p.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    if !a.less_than(b) {
        return Err(SturmError::EmptyInterval);
    }
    let sf = p.squarefree_part();
    let chain = sturm_sequence(&sf)?;
    Ok(count_with_chain(&chain, a, b))
}

fn count_with_chain(chain: &SturmChain, a: &ExtRational, b: &ExtRational) -> usize {
    let va = chain.sign_variations(a);
    let vb = chain.sign_variations(b);
    va.saturating_sub(vb)
}

/// Disjoint intervals `(lo, hi]` inside `(0, ∞)`, each holding exactly one
/// distinct root of `p`, in increasing order.
pub fn isolate_positive_roots(p: &UniPoly) -> Result<Vec<(Rational, Rational)>, SturmError> {
    if p.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    let sf = p.squarefree_part();
    let chain = sturm_sequence(&sf)?;
    let bound = sf.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(Rational::zero(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_with_chain(
            &chain,
            &ExtRational::Finite(lo.clone()),
            &ExtRational::Finite(hi.clone()),
        );
        match n {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    StrictlyPositive,
    Nonnegative,
    StrictlyNegative,
    Nonpositive,
    Indefinite,
}

impl Verdict {
    pub fn is_nonpositive(self) -> bool {
        matches!(self, Self::StrictlyNegative | Self::Nonpositive)
    }

    pub fn is_nonnegative(self) -> bool {
        matches!(self, Self::StrictlyPositive | Self::Nonnegative)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Self::StrictlyPositive | Self::StrictlyNegative)
    }

    /// Verdict for `−p`.
    pub fn negate(self) -> Self {
        match self {
            Self::StrictlyPositive => Self::StrictlyNegative,
            Self::Nonnegative => Self::Nonpositive,
            Self::StrictlyNegative => Self::StrictlyPositive,
            Self::Nonpositive => Self::Nonnegative,
            Self::Indefinite => Self::Indefinite,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::StrictlyPositive => "strictly-positive",
            Self::Nonnegative => "nonnegative",
            Self::StrictlyNegative => "strictly-negative",
            Self::Nonpositive => "nonpositive",
            Self::Indefinite => "indefinite",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePoint {
    pub point: RationalText,
    pub sign: i8,
}

/// Replayable record of a sign claim for a polynomial on `(0, ∞)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SignCertificate {
    pub polynomial: String,
    pub strict: bool,
    pub interval: (ExtRational, ExtRational),
    pub root_count_interior: usize,
    /// Distinct roots of odd multiplicity in the interval, when computed.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub odd_root_count: Option<usize>,
    /// Signs of the polynomial at `0⁺` and `+∞`.
    pub endpoint_signs: (i8, i8),
    pub sample_sign: SamplePoint,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<(ExtRational, ExtRational)>,
}

/// Certifies the sign of `p` on `(0, ∞)`.
///
/// A strict verdict is returned whenever `p` has no positive root. With
/// `strict = false`, roots of even multiplicity only are permitted and give
/// a weak verdict. Anything else is `Indefinite` with an isolating interval
/// of an offending root.
pub fn certify_sign_on_positive_axis(p: &UniPoly, strict: bool) -> Result<SignCertificate, SturmError> {
    if p.is_zero() {
        return Err(SturmError::ZeroPolynomial);
    }
    let zero = ExtRational::zero();
    let inf = ExtRational::PosInf;
    let roots = count_real_roots(p, &zero, &inf)?;
    let sample = sample_point(p);
    let sample_sign = p.sign_at(&sample);
    let endpoint_signs = (p.sign_at_zero_plus(), p.sign_at_pos_inf());
    let mut odd_root_count = None;
    let mut witness = None;
    let verdict = if roots == 0 {
        if sample_sign > 0 {
            Verdict::StrictlyPositive
        } else {
            Verdict::StrictlyNegative
        }
    } else {
        let odd = odd_part(p);
        let odd_roots = if odd.degree().unwrap_or(0) == 0 {
            0
        } else {
            count_real_roots(&odd, &zero, &inf)?
        };
        if !strict {
            odd_root_count = Some(odd_roots);
        }
        if !strict && odd_roots == 0 {
            if sample_sign > 0 {
                Verdict::Nonnegative
            } else {
                Verdict::Nonpositive
            }
        } else {
            let target = if odd_roots > 0 { odd } else { p.clone() };
            let iv = isolate_positive_roots(&target)?;
            let (lo, hi) = iv.into_iter().next().expect("a positive root exists");
            witness = Some((ExtRational::Finite(lo), ExtRational::Finite(hi)));
            Verdict::Indefinite
        }
    };
    Ok(SignCertificate {
        polynomial: p.to_text(),
        strict,
        interval: (zero, inf),
        root_count_interior: roots,
        odd_root_count,
        endpoint_signs,
        sample_sign: SamplePoint {
            point: RationalText(sample),
            sign: sample_sign,
        },
        verdict,
        witness,
    })
}

/// Product of the squarefree factors of odd multiplicity.
fn odd_part(p: &UniPoly) -> UniPoly {
    p.squarefree_decomposition()
        .into_iter()
        .filter(|(_, m)| m % 2 == 1)
        .fold(UniPoly::one(), |acc, (f, _)| &acc * &f)
}

/// A positive rational where `p` does not vanish: the first of
/// `1, 2, 1/2, 3, 1/3, …` that is not a root.
fn sample_point(p: &UniPoly) -> Rational {
    let mut k: i64 = 1;
    loop {
        let up = Rational::from_integer(k.into());
        if !p.eval(&up).is_zero() {
            return up;
        }
        let down = Rational::new(1.into(), (k + 1).into());
        if !p.eval(&down).is_zero() {
            return down;
        }
        k += 1;
    }
}

/// Parses the `c*x^k` text produced by [`UniPoly::to_text`].
pub fn parse_unipoly(text: &str) -> Option<UniPoly> {
    let text = text.trim();
    if text == "0" {
        return Some(UniPoly::zero());
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut rest = text;
    let mut sign = Rational::one();
    if let Some(r) = rest.strip_prefix('-') {
        sign = -sign;
        rest = r;
    }
    loop {
        let (term, next) = match (rest.find(" + "), rest.find(" - ")) {
            (Some(a), Some(b)) if a < b => (&rest[..a], Some((&rest[a + 3..], 1))),
            (_, Some(b)) => (&rest[..b], Some((&rest[b + 3..], -1))),
            (Some(a), None) => (&rest[..a], Some((&rest[a + 3..], 1))),
            (None, None) => (rest, None),
        };
        let (c, k) = match term.split_once('*') {
            None => (parse_rational(term)?, 0usize),
            Some((c, var)) => {
                let k = match var {
                    "x" => 1,
                    _ => var.strip_prefix("x^")?.parse().ok()?,
                };
                (parse_rational(c)?, k)
            }
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] += c * &sign;
        match next {
            None => break,
            Some((r, s)) => {
                rest = r;
                sign = Rational::from_integer(s.into());
            }
        }
    }
    Some(UniPoly::new(coeffs))
}

/// Re-derives a certificate from its polynomial text and checks that every
/// recorded field matches.
pub fn verify(cert: &SignCertificate) -> Result<(), String> {
    let p = parse_unipoly(&cert.polynomial).ok_or("unparseable polynomial")?;
    if p.to_text() != cert.polynomial {
        return Err("polynomial text is not canonical".into());
    }
    let s = p.sign_at(&cert.sample_sign.point.0);
    if s != cert.sample_sign.sign || s == 0 || !cert.sample_sign.point.0.is_positive() {
        return Err("sample sign does not match".into());
    }
    if let Some((ExtRational::Finite(lo), ExtRational::Finite(hi))) = &cert.witness {
        let n = count_real_roots(&p, &ExtRational::Finite(lo.clone()), &ExtRational::Finite(hi.clone()))
            .map_err(|e| e.to_string())?;
        if n == 0 {
            return Err("witness interval holds no root".into());
        }
    }
    let fresh = certify_sign_on_positive_axis(&p, cert.strict).map_err(|e| e.to_string())?;
    if &fresh != cert {
        return Err(format!(
            "re-derived verdict {} differs from recorded {}",
            fresh.verdict, cert.verdict
        ));
    }
    Ok(())
}
