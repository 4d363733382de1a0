//! Randomized screening of candidate quantities `w = p₁/p₂`, followed by
//! exact certification of the survivors.

use std::collections::{BTreeMap, HashSet};
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::evolution::{certify_monotone, critical_jet, MonotonicityCertificate, Quantity, Velocity};
use crate::ratpoly::{Monomial, Poly2, RatFn2, Rational, Var};
use crate::sturm::RationalText;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SieveError {
    #[error("candidate space is empty: {0}")]
    EmptySpace(String),
    #[error("could not build worker pool: {0}")]
    ThreadPool(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateSpace {
    pub max_numerator_degree: u32,
    pub max_denominator_degree: u32,
    pub coefficient_set: Vec<i64>,
    pub enforce_diff_squared_factor: bool,
    pub seed: u64,
    pub samples_per_step: usize,
}

impl CandidateSpace {
    pub fn new(max_num: u32, max_den: u32, coefficients: &[i64]) -> Self {
        Self {
            max_numerator_degree: max_num,
            max_denominator_degree: max_den,
            coefficient_set: coefficients.to_vec(),
            enforce_diff_squared_factor: true,
            seed: 0,
            samples_per_step: 1000,
        }
    }

    pub fn validate(&self) -> Result<(), SieveError> {
        if self.max_numerator_degree <= self.max_denominator_degree {
            return Err(SieveError::EmptySpace(
                "numerator degree bound must exceed denominator degree bound".into(),
            ));
        }
        if self.enforce_diff_squared_factor && self.max_numerator_degree < 2 {
            return Err(SieveError::EmptySpace(
                "numerator must have degree at least 2 to carry (l1-l2)^2".into(),
            ));
        }
        if self.coefficient_set.iter().all(|c| *c == 0) {
            return Err(SieveError::EmptySpace("no nonzero coefficients".into()));
        }
        if self.samples_per_step == 0 {
            return Err(SieveError::EmptySpace("samples per step must be positive".into()));
        }
        Ok(())
    }
}

/// Monomial symmetric basis `m_{(a,b)}`, `a ≥ b`, `a + b = d`.
fn symmetric_basis(d: u32) -> Vec<Poly2> {
    (0..=d / 2)
        .map(|b| {
            let a = d - b;
            let mut p = Poly2::monomial(Rational::one(), a, b);
            if a != b {
                p.add_term(Monomial::new(b, a), Rational::one());
            }
            p
        })
        .collect()
}

/// All nonzero combinations of the basis with coefficients from
/// `{0} ∪ coeffs`, in lexicographic order of the coefficient vectors.
fn combinations(d: u32, coeffs: &[i64]) -> Vec<Poly2> {
    let basis = symmetric_basis(d);
    let mut values: Vec<i64> = std::iter::once(0).chain(coeffs.iter().copied()).collect();
    values.sort_unstable();
    values.dedup();
    let mut out = Vec::new();
    let mut idx = vec![0usize; basis.len()];
    loop {
        let mut p = Poly2::zero();
        for (b, &i) in basis.iter().zip(&idx) {
            if values[i] != 0 {
                p = &p + &b.scale_int(values[i]);
            }
        }
        if !p.is_zero() {
            out.push(p);
        }
        let mut k = basis.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < values.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Identifies candidates that differ by a positive constant factor.
fn dedupe_key(w: &RatFn2) -> String {
    let c = w.num().leading_coeff().abs();
    w.scale(&c.recip()).to_text()
}

/// Deterministic enumeration of candidates, duplicates removed.
pub fn generate_candidates(space: &CandidateSpace) -> Result<Vec<RatFn2>, SieveError> {
    space.validate()?;
    let lead = if space.enforce_diff_squared_factor {
        (&Poly2::l1() - &Poly2::l2()).pow(2)
    } else {
        Poly2::one()
    };
    let shift = if space.enforce_diff_squared_factor { 2 } else { 0 };
    let dens: Vec<Poly2> = (0..=space.max_denominator_degree)
        .flat_map(|d| combinations(d, &space.coefficient_set))
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for dn in shift..=space.max_numerator_degree {
        for q in combinations(dn - shift, &space.coefficient_set) {
            let num = &lead * &q;
            for den in &dens {
                let w = RatFn2::new(num.clone(), den.clone()).expect("nonzero denominator");
                if seen.insert(dedupe_key(&w)) {
                    out.push(w);
                }
            }
        }
    }
    Ok(out)
}

pub const STEPS: [&str; 6] = ["1a", "1b", "2", "3", "4a", "4b"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepWitness {
    pub l1: RationalText,
    pub l2: RationalText,
    pub value: RationalText,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum StepVerdict {
    Pass,
    Fail {
        #[serde(skip_serializing_if = "Option::is_none", default)]
        witness: Option<StepWitness>,
        reason: String,
    },
    Skipped,
}

impl StepVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Self::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateReport {
    pub index: usize,
    pub candidate: String,
    pub step_verdicts: BTreeMap<String, StepVerdict>,
    /// Last step that passed, or `"none"`.
    pub last_step_passed: String,
    pub survivor: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<MonotonicityCertificate>,
}

impl CandidateReport {
    pub fn is_certified(&self) -> bool {
        self.certificate
            .as_ref()
            .is_some_and(|c| c.verdict.is_certified())
    }
}

/// Wall-clock counters per step; kept apart from reports so that reports
/// stay byte-identical across runs.
#[derive(Clone, Debug, Default)]
pub struct SieveStats {
    pub tests: BTreeMap<&'static str, u64>,
    pub time: BTreeMap<&'static str, Duration>,
}

impl SieveStats {
    fn record(&mut self, step: &'static str, tests: u64, time: Duration) {
        *self.tests.entry(step).or_default() += tests;
        *self.time.entry(step).or_default() += time;
    }

    fn merge(mut self, other: SieveStats) -> SieveStats {
        for (k, v) in other.tests {
            *self.tests.entry(k).or_default() += v;
        }
        for (k, v) in other.time {
            *self.time.entry(k).or_default() += v;
        }
        self
    }

    /// Tests per second for each step.
    pub fn throughput(&self) -> BTreeMap<&'static str, f64> {
        self.tests
            .iter()
            .map(|(k, n)| {
                let t = self.time.get(k).map(Duration::as_secs_f64).unwrap_or(0.0);
                (*k, if t > 0.0 { *n as f64 / t } else { f64::INFINITY })
            })
            .collect()
    }
}

/// Sub-seed for candidate `index`, independent of scheduling.
pub fn candidate_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Slice samples: exponents `k` with `λ₁/λ₂ = 2^(k/8)`, `|k| ≤ 80`.
fn draw_exponents(rng: &mut ChaCha8Rng, n: usize) -> Vec<i32> {
    (0..n).map(|_| rng.gen_range(-80..=80)).collect()
}

/// `2^(k/8)`: exact when `8 | k`, otherwise the closest continued-fraction
/// convergent with denominator below 10⁴, which keeps exact evaluation cheap.
fn ratio_value(k: i32) -> Rational {
    if k % 8 == 0 {
        let p = Rational::from_integer(num_bigint::BigInt::from(1u64 << k.unsigned_abs() / 8));
        return if k >= 0 { p } else { p.recip() };
    }
    if k < 0 {
        return ratio_value(-k).recip();
    }
    let x = 2f64.powf(k as f64 / 8.0);
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut r = x;
    loop {
        let a = r.floor() as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > 10_000 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a as f64;
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    Rational::new(h1.into(), k1.into())
}

/// Sample-wise check: `eval` returns `Ok(None)` to accept a sample,
/// `Ok(Some(value))` for a violation and `Err` for an evaluation error.
fn scan<F>(points: &[(Rational, Rational)], mut eval: F) -> StepVerdict
where
    F: FnMut(&Rational, &Rational) -> Result<Option<Rational>, String>,
{
    for (a, b) in points {
        match eval(a, b) {
            Ok(None) => {}
            Ok(Some(v)) => {
                return StepVerdict::Fail {
                    witness: Some(StepWitness {
                        l1: RationalText(a.clone()),
                        l2: RationalText(b.clone()),
                        value: RationalText(v),
                    }),
                    reason: "sign violation".into(),
                }
            }
            Err(e) => {
                return StepVerdict::Fail {
                    witness: None,
                    reason: e,
                }
            }
        }
    }
    StepVerdict::Pass
}

/// Points in draw order with repeats removed; screening stops at the first
/// violation, so repeats never change a verdict.
fn unique_points(ks: &[i32], f: impl Fn(&Rational) -> (Rational, Rational)) -> Vec<(Rational, Rational)> {
    let mut seen = HashSet::new();
    ks.iter()
        .filter(|k| seen.insert(**k))
        .map(|k| f(&ratio_value(*k)))
        .collect()
}

/// Runs steps 1a through 4b on one candidate.
pub fn screen_candidate(
    v: &Velocity,
    w: &RatFn2,
    rng: &mut ChaCha8Rng,
    samples: usize,
    stats: &mut SieveStats,
) -> BTreeMap<String, StepVerdict> {
    let mut verdicts = BTreeMap::new();
    let mut failed = false;
    let one = Rational::one();
    let p1 = w.num().clone();
    let p2 = w.den().clone();
    let quantity = Quantity::new(w);
    let w_d2 = w.derivative(Var::L2);
    let steps: [(&'static str, Box<dyn Fn(&mut ChaCha8Rng) -> (StepVerdict, u64)>); 6] = [
        (
            "1a",
            Box::new(|rng| {
                let ks = draw_exponents(rng, samples);
                let mut pts = unique_points(&ks, |x| (x.clone(), one.clone()));
                pts.insert(0, (one.clone(), one.clone()));
                let n = pts.len() as u64;
                let r = scan(&pts, |a, b| {
                    let u = p1.eval(a, b);
                    if u.is_negative() {
                        return Ok(Some(u));
                    }
                    let d = p2.eval(a, b);
                    Ok(d.is_negative().then_some(d))
                });
                (r, n)
            }),
        ),
        (
            "1b",
            Box::new(|rng| {
                let ks = draw_exponents(rng, samples);
                let pts = unique_points(&ks, |x| (x.clone(), x.clone()));
                let n = pts.len() as u64;
                let r = scan(&pts, |a, b| {
                    let u = p1.eval(a, b);
                    Ok((!u.is_zero()).then_some(u))
                });
                (r, n)
            }),
        ),
        (
            "2",
            Box::new(|_| {
                let dn = p1.total_degree().unwrap_or(0);
                let dd = p2.total_degree().unwrap_or(0);
                let r = if dn > dd {
                    StepVerdict::Pass
                } else {
                    StepVerdict::Fail {
                        witness: None,
                        reason: format!("numerator degree {dn} does not exceed denominator degree {dd}"),
                    }
                };
                (r, 1)
            }),
        ),
        (
            "3",
            Box::new(|rng| {
                let ks = draw_exponents(rng, samples);
                let pts = unique_points(&ks, |x| (one.clone(), x.clone()));
                let n = pts.len() as u64;
                let eighth = Rational::new(1.into(), 8.into());
                let r = scan(&pts, |a, b| {
                    if b == &one {
                        return Ok(None);
                    }
                    let d = w_d2.eval_exact(a, b).map_err(|e| e.to_string())?;
                    let far = (b - &one).abs() >= eighth;
                    let bad = if b < &one {
                        d.is_positive() || (far && d.is_zero())
                    } else {
                        d.is_negative() || (far && d.is_zero())
                    };
                    Ok(bad.then_some(d))
                });
                (r, n)
            }),
        ),
        (
            "4a",
            Box::new(|rng| {
                let Ok(q) = &quantity else {
                    return (fail_reason("quantity is identically zero"), 0);
                };
                let ks = draw_exponents(rng, samples);
                let pts = unique_points(&ks, |x| (x.clone(), one.clone()));
                let n = pts.len() as u64;
                let r = scan(&pts, |a, b| {
                    if a == b {
                        return Ok(None);
                    }
                    let Some(cf) = critical_at(v, q, a, b)? else {
                        return Ok(None);
                    };
                    Ok(cf.0.is_positive().then_some(cf.0))
                });
                (r, n)
            }),
        ),
        (
            "4b",
            Box::new(|rng| {
                let Ok(q) = &quantity else {
                    return (fail_reason("quantity is identically zero"), 0);
                };
                let ks = draw_exponents(rng, samples);
                let pts = unique_points(&ks, |x| (x.clone(), one.clone()));
                let n = pts.len() as u64;
                let r = scan(&pts, |a, b| {
                    if a == b {
                        return Ok(None);
                    }
                    let Some((_, c1, c2)) = critical_at(v, q, a, b)? else {
                        return Ok(None);
                    };
                    if c1.is_positive() {
                        return Ok(Some(c1));
                    }
                    Ok(c2.is_positive().then_some(c2))
                });
                (r, n)
            }),
        ),
    ];
    for (name, run) in steps.iter() {
        if failed {
            verdicts.insert(name.to_string(), StepVerdict::Skipped);
            continue;
        }
        let t = Instant::now();
        let (verdict, n) = run(rng);
        stats.record(name, n, t.elapsed());
        failed = !verdict.is_pass();
        verdicts.insert(name.to_string(), verdict);
    }
    verdicts
}

fn fail_reason(s: &str) -> StepVerdict {
    StepVerdict::Fail {
        witness: None,
        reason: s.to_string(),
    }
}

/// `(reaction, c1, c2)` at a point; `None` where the extremal condition
/// does not determine the dependent gradient components.
fn critical_at(
    v: &Velocity,
    q: &Quantity,
    a: &Rational,
    b: &Rational,
) -> Result<Option<(Rational, Rational, Rational)>, String> {
    let vj = v.jet_at(a, b).map_err(|e| e.to_string())?;
    let Some(qj) = q.log_jet_at(a, b) else {
        return Err("quantity has a pole or zero at a sample point".into());
    };
    match critical_jet(&vj, &qj) {
        Ok(cf) => Ok(Some((cf.reaction, cf.c1, cf.c2))),
        Err(crate::evolution::EvolutionError::DegenerateGradient) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Clone, Debug)]
pub struct SieveRun {
    pub reports: Vec<CandidateReport>,
    pub stats: SieveStats,
}

impl SieveRun {
    /// Number of candidates that passed each step.
    pub fn pass_counts(&self) -> BTreeMap<String, usize> {
        let mut out: BTreeMap<String, usize> = STEPS.iter().map(|s| (s.to_string(), 0)).collect();
        for r in &self.reports {
            for (k, v) in &r.step_verdicts {
                if v.is_pass() {
                    *out.get_mut(k).unwrap() += 1;
                }
            }
        }
        out
    }

    pub fn survivors(&self) -> impl Iterator<Item = &CandidateReport> {
        self.reports.iter().filter(|r| r.survivor)
    }
}

fn screen_indexed(
    v: &Velocity,
    space: &CandidateSpace,
    certify: bool,
    index: usize,
    w: &RatFn2,
) -> (CandidateReport, SieveStats) {
    let mut stats = SieveStats::default();
    let mut rng = ChaCha8Rng::seed_from_u64(candidate_seed(space.seed, index));
    let verdicts = screen_candidate(v, w, &mut rng, space.samples_per_step, &mut stats);
    let survivor = verdicts.values().all(StepVerdict::is_pass);
    let last = STEPS
        .iter()
        .take_while(|s| verdicts[**s].is_pass())
        .last()
        .map(|s| s.to_string())
        .unwrap_or_else(|| "none".into());
    let certificate = if survivor && certify {
        let t = Instant::now();
        let c = certify_monotone(v, w).ok();
        stats.record("certify", 1, t.elapsed());
        c
    } else {
        None
    };
    (
        CandidateReport {
            index,
            candidate: w.to_text(),
            step_verdicts: verdicts,
            last_step_passed: last,
            survivor,
            certificate,
        },
        stats,
    )
}

/// Screens every candidate of `space` in parallel (at most `threads`
/// workers when given) and optionally certifies the survivors exactly.
pub fn run_sieve(
    v: &Velocity,
    space: &CandidateSpace,
    certify_survivors: bool,
    threads: Option<usize>,
) -> Result<SieveRun, SieveError> {
    let candidates = generate_candidates(space)?;
    let work = || {
        candidates
            .par_iter()
            .enumerate()
            .map(|(i, w)| screen_indexed(v, space, certify_survivors, i, w))
            .collect::<Vec<_>>()
    };
    let results = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| SieveError::ThreadPool(e.to_string()))?
            .install(work),
        None => work(),
    };
    let mut stats = SieveStats::default();
    let mut reports = Vec::with_capacity(results.len());
    for (r, s) in results {
        reports.push(r);
        stats = stats.merge(s);
    }
    Ok(SieveRun { reports, stats })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(symmetric_basis(0).len(), 1);
        assert_eq!(symmetric_basis(2).len(), 2);
        assert_eq!(symmetric_basis(5).len(), 3);
        assert_eq!(symmetric_basis(2)[0], Poly2::q());
    }

    #[test]
    fn combination_count() {
        // Two basis elements, four values each, minus the zero vector.
        assert_eq!(combinations(2, &[1, 2, 3]).len(), 15);
    }

    #[test]
    fn empty_space() {
        let s = CandidateSpace::new(2, 2, &[1]);
        assert!(matches!(generate_candidates(&s), Err(SieveError::EmptySpace(_))));
    }

    #[test]
    fn sample_ratios() {
        assert_eq!(ratio_value(80), Rational::from_integer(1024.into()));
        assert_eq!(ratio_value(-8), Rational::new(1.into(), 2.into()));
        for k in -80..=80 {
            let x = crate::ratpoly::rational_to_f64(&ratio_value(k));
            assert!((x / 2f64.powf(k as f64 / 8.0) - 1.0).abs() < 1e-6, "{k}");
        }
        let distinct: HashSet<_> = (-80..=80).map(ratio_value).collect();
        assert_eq!(distinct.len(), 161);
    }

    #[test]
    fn seeds_differ_by_index() {
        assert_ne!(candidate_seed(1, 0), candidate_seed(1, 1));
        assert_eq!(candidate_seed(7, 3), candidate_seed(7, 3));
    }
}
