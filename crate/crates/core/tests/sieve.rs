use curvsieve_core::catalog::{default_known_pairs, diff_squared, squared_norm_plus, squared_norm_quantity};
use curvsieve_core::evolution::{critical_form_at, velocity_from_expr, Quantity};
use num_traits::Signed;
use rand::Rng;
use curvsieve_core::ratpoly::{Poly2, RatFn2, Rational};
use curvsieve_core::sieve::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn q_velocity() -> curvsieve_core::evolution::Velocity {
    velocity_from_expr(&RatFn2::from_poly(Poly2::q())).unwrap()
}

fn screen(v: &curvsieve_core::evolution::Velocity, w: &RatFn2, seed: u64) -> std::collections::BTreeMap<String, StepVerdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    screen_candidate(v, w, &mut rng, 1000, &mut SieveStats::default())
}

#[test]
fn row_one_passes_every_step() {
    let r = screen(&q_velocity(), &squared_norm_quantity(), 1);
    assert!(r.values().all(StepVerdict::is_pass), "{r:?}");
}

#[test]
fn equal_degrees_fail_step_two() {
    let w = RatFn2::new(diff_squared(), Poly2::k()).unwrap();
    let r = screen(&q_velocity(), &w, 1);
    assert!(r["1a"].is_pass() && r["1b"].is_pass());
    assert!(matches!(r["2"], StepVerdict::Fail { .. }));
    for s in ["3", "4a", "4b"] {
        assert_eq!(r[s], StepVerdict::Skipped);
    }
}

#[test]
fn beta_six_fails_step_4b_at_large_ratio() {
    let v = velocity_from_expr(&squared_norm_plus(&Rational::from_integer(6.into()))).unwrap();
    let r = screen(&v, &squared_norm_quantity(), 1);
    for s in ["1a", "1b", "2", "3", "4a"] {
        assert!(r[s].is_pass(), "{s}: {:?}", r[s]);
    }
    let StepVerdict::Fail { witness: Some(w), .. } = &r["4b"] else {
        panic!("{:?}", r["4b"]);
    };
    let ratio = &w.l1.0 / &w.l2.0;
    let big = Rational::from_integer(256.into());
    assert!(ratio >= big || ratio <= big.recip(), "{ratio}");
    assert!(w.value.0 > Rational::from_integer(0.into()));
}

#[test]
fn known_pairs_pass_screening_on_several_seeds() {
    for p in default_known_pairs() {
        let v = velocity_from_expr(&p.velocity).unwrap();
        for seed in [0, 1, 2] {
            let r = screen(&v, &p.quantity, seed);
            assert!(r.values().all(StepVerdict::is_pass), "{} seed {seed}: {r:?}", p.name);
        }
    }
}

#[test]
fn stream_contains_expected_rows() {
    let s = CandidateSpace::new(3, 2, &[1]);
    let c: Vec<String> = generate_candidates(&s).unwrap().iter().map(|w| w.to_text()).collect();
    assert!(c.contains(&squared_norm_quantity().to_text()));
    let s = CandidateSpace::new(4, 2, &[1, 2, 3]);
    let e3 = Poly2::from_terms([(3, 2, 0), (2, 1, 1), (3, 0, 2)]);
    let w = RatFn2::new(&e3 * &diff_squared(), Poly2::k()).unwrap();
    assert!(generate_candidates(&s).unwrap().contains(&w));
}

#[test]
fn sieve_k_velocity_polynomial_candidates() {
    let v = velocity_from_expr(&RatFn2::from_poly(Poly2::k())).unwrap();
    let run = run_sieve(&v, &CandidateSpace::new(2, 0, &[1]), true, None).unwrap();
    let d2 = RatFn2::from_poly(diff_squared()).to_text();
    assert!(run.reports.iter().any(|r| r.candidate == d2 && r.is_certified()));
}

#[test]
fn cubic_power_sum_sieve() {
    let v = velocity_from_expr(&RatFn2::from_poly(Poly2::power_sum(3))).unwrap();
    let mut space = CandidateSpace::new(4, 2, &[1, 2, 3]);
    space.samples_per_step = 300;
    let run = run_sieve(&v, &space, true, None).unwrap();
    let e3 = Poly2::from_terms([(3, 2, 0), (2, 1, 1), (3, 0, 2)]);
    let good = RatFn2::new(&e3 * &diff_squared(), Poly2::k()).unwrap().to_text();
    let bad = RatFn2::new(&Poly2::h().pow(2) * &diff_squared(), Poly2::k()).unwrap().to_text();
    let find = |t: &str| run.reports.iter().find(|r| r.candidate == t).unwrap();
    assert!(find(&good).is_certified());
    assert!(!find(&bad).survivor);

    let candidates = generate_candidates(&space).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for r in run.reports.iter().filter(|r| r.is_certified()) {
        let q = Quantity::new(&candidates[r.index]).unwrap();
        let mut checked = 0;
        while checked < 10_000 {
            let a = Rational::new(rng.gen_range(1..=4000i64).into(), rng.gen_range(1..=100i64).into());
            let b = Rational::from_integer(1.into());
            if a == b {
                continue;
            }
            let Ok(cf) = critical_form_at(&v, &q, &a, &b) else { continue };
            assert!(!cf.reaction.is_positive() && !cf.c1.is_positive(), "{} at {a}", r.candidate);
            checked += 1;
        }
    }
}

#[test]
fn reports_are_deterministic_and_thread_independent() {
    let space = CandidateSpace::new(3, 1, &[1, 2]);
    let v = q_velocity();
    let a = run_sieve(&v, &space, false, Some(1)).unwrap();
    let b = run_sieve(&v, &space, false, Some(4)).unwrap();
    assert_eq!(
        serde_json::to_string(&a.reports).unwrap(),
        serde_json::to_string(&b.reports).unwrap()
    );
    let counts = a.pass_counts();
    let seq: Vec<usize> = STEPS.iter().map(|s| counts[*s]).collect();
    assert!(seq.windows(2).all(|w| w[0] >= w[1]), "{seq:?}");
}
