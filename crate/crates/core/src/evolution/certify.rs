use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::ratpoly::{Poly2, RatFn2, Rational, UniPoly};
use crate::sturm::{
    certify_sign_on_positive_axis, isolate_positive_roots, RationalText, SignCertificate, Verdict,
};

use super::{critical_form, EvolutionError, Velocity};

pub const REFUTATION_NOTE: &str = "a refuted verdict means this proof method fails (a reduced \
coefficient is positive somewhere); it does not by itself show that max w can increase";

/// Multiplicity of one trial factor split off a numerator or denominator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorCert {
    pub factor: String,
    pub multiplicity: u32,
    /// `positive`, `positive-off-diagonal` or `sign-change-on-diagonal`.
    pub sign: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RatFnSign {
    pub expression: String,
    pub numerator_factors: Vec<FactorCert>,
    pub denominator_factors: Vec<FactorCert>,
    /// Certificate for the numerator after trial factors are removed and
    /// `λ₂ = 1`, as a polynomial in `x = λ₁/λ₂`.
    pub numerator_cert: SignCertificate,
    pub denominator_cert: SignCertificate,
    pub sign: Verdict,
}

/// Sign claim for one reduced coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CoefficientCert {
    IdenticallyZero,
    Signed(RatFnSign),
}

impl CoefficientCert {
    pub fn is_nonpositive(&self) -> bool {
        match self {
            Self::IdenticallyZero => true,
            Self::Signed(s) => s.sign.is_nonpositive(),
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Self::IdenticallyZero => true,
            Self::Signed(s) => s.sign.is_nonnegative(),
        }
    }

    /// Whether the denominator was shown to keep one sign.
    pub fn denominator_signed(&self) -> bool {
        match self {
            Self::IdenticallyZero => true,
            Self::Signed(s) => s.denominator_cert.verdict.is_strict(),
        }
    }

    pub fn sign(&self) -> Option<Verdict> {
        match self {
            Self::IdenticallyZero => None,
            Self::Signed(s) => Some(s.sign),
        }
    }
}

/// Exact point `(λ₁, λ₂)` where a coefficient is positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub coefficient: String,
    pub l1: RationalText,
    pub l2: RationalText,
    pub value: RationalText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum MonotoneVerdict {
    CertifiedMonotone,
    Refuted { witness: Witness },
    Indefinite { reason: String },
}

impl MonotoneVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Self::CertifiedMonotone)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MonotonicityCertificate {
    pub velocity: String,
    pub quantity: String,
    pub reaction: String,
    pub a1: String,
    pub c1: String,
    pub reaction_cert: CoefficientCert,
    pub c1_cert: CoefficientCert,
    pub denominator_factor_certs: Vec<SignCertificate>,
    pub verdict: MonotoneVerdict,
    pub note: String,
}

fn strip_factor(p: &Poly2, f: &Poly2) -> (Poly2, u32) {
    let mut p = p.clone();
    let mut k = 0;
    while let Some(q) = p.div_exact(f) {
        p = q;
        k += 1;
    }
    (p, k)
}

/// Splits off `λ₁`, `λ₂`, `λ₁+λ₂` and, when `split_diagonal` is set,
/// `λ₁−λ₂`. Returns the residual and the factor list.
fn trial_factor(p: &Poly2, split_diagonal: bool) -> (Poly2, Vec<FactorCert>, bool) {
    let mut out = Vec::new();
    let (i, j) = p.monomial_valuation();
    let mut r = p.unshift(i, j);
    let push = |out: &mut Vec<FactorCert>, name: &str, k: u32, sign: &str| {
        if k > 0 {
            out.push(FactorCert {
                factor: name.to_string(),
                multiplicity: k,
                sign: sign.to_string(),
            });
        }
    };
    push(&mut out, "l1", i, "positive");
    push(&mut out, "l2", j, "positive");
    let (r2, k) = strip_factor(&r, &Poly2::h());
    r = r2;
    push(&mut out, "l1 + l2", k, "positive");
    let mut flips = false;
    if split_diagonal {
        let (r3, k) = strip_factor(&r, &(&Poly2::l1() - &Poly2::l2()));
        r = r3;
        flips = k % 2 == 1;
        let sign = if flips {
            "sign-change-on-diagonal"
        } else {
            "positive-off-diagonal"
        };
        push(&mut out, "l1 - l2", k, sign);
    }
    (r, out, flips)
}

fn dehom(p: &Poly2) -> Result<UniPoly, EvolutionError> {
    p.dehomogenize().map_err(|_| EvolutionError::NotHomogeneous)
}

/// Sign of a homogeneous rational function on the open positive cone,
/// off the diagonal when `exclude_diagonal` is set.
pub fn certify_ratfn_sign(f: &RatFn2, exclude_diagonal: bool) -> Result<CoefficientCert, EvolutionError> {
    if f.is_zero() {
        return Ok(CoefficientCert::IdenticallyZero);
    }
    let (nr, nf, nflip) = trial_factor(f.num(), exclude_diagonal);
    let (dr, df, dflip) = trial_factor(f.den(), exclude_diagonal);
    let nu = dehom(&nr)?;
    let du = dehom(&dr)?;
    let numerator_cert = certify_sign_on_positive_axis(&nu, false).expect("nonzero numerator");
    let denominator_cert = certify_sign_on_positive_axis(&du, true).expect("nonzero denominator");
    let sign = if nflip != dflip || !denominator_cert.verdict.is_strict() {
        Verdict::Indefinite
    } else if denominator_cert.verdict == Verdict::StrictlyPositive {
        numerator_cert.verdict
    } else {
        numerator_cert.verdict.negate()
    };
    Ok(CoefficientCert::Signed(RatFnSign {
        expression: f.to_text(),
        numerator_factors: nf,
        denominator_factors: df,
        numerator_cert,
        denominator_cert,
        sign,
    }))
}

/// An exact point `(x, 1)` with `f(x, 1) > 0`, searched between the
/// positive roots of numerator and denominator.
pub fn positive_point(f: &RatFn2) -> Option<(Rational, Rational)> {
    let nu = f.num().restrict_l2_one();
    let du = f.den().restrict_l2_one();
    let prod = &nu * &du;
    let mut pts: Vec<Rational> = Vec::new();
    let two = Rational::from_integer(2.into());
    if let Ok(iv) = isolate_positive_roots(&prod) {
        for (k, (lo, hi)) in iv.iter().enumerate() {
            pts.push(hi.clone());
            pts.push((lo + hi) / &two);
            if lo.is_positive() {
                pts.push(lo.clone());
            } else {
                pts.push(hi / &two);
            }
            if let Some((nlo, _)) = iv.get(k + 1) {
                pts.push((hi + nlo) / &two);
            }
        }
        if let Some((_, hi)) = iv.last() {
            pts.push(hi * &two);
        }
    }
    for k in -40..=40 {
        let e = Rational::from_integer(2.into());
        let p = if k >= 0 {
            num_traits::pow(e, k as usize)
        } else {
            num_traits::pow(e, (-k) as usize).recip()
        };
        pts.push(p.clone() * Rational::new(5.into(), 4.into()));
        pts.push(p);
    }
    let one = Rational::one();
    pts.into_iter()
        .filter(|x| x.is_positive())
        .find(|x| {
            f.eval_exact(x, &one)
                .map(|v| v.is_positive())
                .unwrap_or(false)
        })
        .map(|x| (x, one.clone()))
}

fn witness_for(name: &str, f: &RatFn2) -> Option<Witness> {
    let (a, b) = positive_point(f)?;
    let value = f.eval_exact(&a, &b).ok()?;
    Some(Witness {
        coefficient: name.to_string(),
        l1: RationalText(a),
        l2: RationalText(b),
        value: RationalText(value),
    })
}

/// Certifies `L log w ≤ 0` at critical points of `w` by exact signs of the
/// reaction and of the `h₁₁;₁²` coefficient on the open cone off the
/// diagonal. The `h₂₂;₂²` coefficient is its mirror image.
pub fn certify_monotone(v: &Velocity, w: &RatFn2) -> Result<MonotonicityCertificate, EvolutionError> {
    let cf = critical_form(v, w)?;
    let reaction_cert = certify_ratfn_sign(&cf.reaction, true)?;
    let c1_cert = certify_ratfn_sign(&cf.c1, true)?;
    let mut denominator_factor_certs = Vec::new();
    for c in [&reaction_cert, &c1_cert] {
        if let CoefficientCert::Signed(s) = c {
            denominator_factor_certs.push(s.denominator_cert.clone());
        }
    }
    let verdict = if reaction_cert.is_nonpositive() && c1_cert.is_nonpositive() {
        MonotoneVerdict::CertifiedMonotone
    } else if !reaction_cert.denominator_signed() || !c1_cert.denominator_signed() {
        MonotoneVerdict::Indefinite {
            reason: "a denominator factor changes sign on the positive cone".into(),
        }
    } else {
        let wit = (!reaction_cert.is_nonpositive())
            .then(|| witness_for("reaction", &cf.reaction))
            .flatten()
            .or_else(|| {
                (!c1_cert.is_nonpositive())
                    .then(|| witness_for("c1", &cf.c1))
                    .flatten()
            });
        match wit {
            Some(witness) => MonotoneVerdict::Refuted { witness },
            None => MonotoneVerdict::Indefinite {
                reason: "sign not established and no positive point found".into(),
            },
        }
    };
    Ok(MonotonicityCertificate {
        velocity: v.f.to_text(),
        quantity: w.to_text(),
        reaction: cf.reaction.to_text(),
        a1: cf.a1.to_text(),
        c1: cf.c1.to_text(),
        reaction_cert,
        c1_cert,
        denominator_factor_certs,
        verdict,
        note: REFUTATION_NOTE.to_string(),
    })
}
