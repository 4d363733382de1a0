use curvsieve_core::ratpoly::{rational_from_f64, Rational, UniPoly};
use curvsieve_core::sturm::{
    certify_sign_on_positive_axis, count_real_roots, sturm_sequence, verify, ExtRational, Verdict,
};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Roots with multiplicities, plus root-free quadratic factors `x² + c`.
#[derive(Clone, Debug)]
struct Factored {
    sign: i64,
    roots: Vec<(Rational, u32)>,
    quadratics: Vec<Rational>,
}

impl Factored {
    fn poly(&self) -> UniPoly {
        let mut p = UniPoly::from_ints(&[self.sign]);
        for (r, m) in &self.roots {
            let lin = UniPoly::new(vec![-r.clone(), Rational::from_integer(1.into())]);
            p = &p * &lin.pow(*m);
        }
        for c in &self.quadratics {
            let q = UniPoly::new(vec![c.clone(), Rational::zero(), Rational::from_integer(1.into())]);
            p = &p * &q;
        }
        p
    }

    fn distinct_roots(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.roots.iter().map(|(r, _)| r.clone()).collect();
        v.sort();
        v.dedup();
        v
    }
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=8).prop_map(|(n, d)| rat(n, d))
}

fn factored() -> impl Strategy<Value = Factored> {
    (
        prop::sample::select(vec![-3i64, -1, 1, 2]),
        prop::collection::vec((small_rational(), 1u32..=3), 0..5),
        prop::collection::vec((1i64..=20, 1i64..=5).prop_map(|(n, d)| rat(n, d)), 0..3),
    )
        .prop_map(|(sign, roots, quadratics)| Factored {
            sign,
            roots,
            quadratics,
        })
}

fn log_spaced_points() -> Vec<Rational> {
    (0..1000)
        .map(|k| rational_from_f64(10f64.powf(-4.0 + 8.0 * k as f64 / 999.0)))
        .collect()
}

proptest! {
    #[test]
    fn root_count_matches_known_roots(f in factored(), a in small_rational(), b in small_rational()) {
        prop_assume!(f.sign != 0 && a < b);
        let p = f.poly();
        let n = count_real_roots(&p, &ExtRational::Finite(a.clone()), &ExtRational::Finite(b.clone())).unwrap();
        let expected = f.distinct_roots().iter().filter(|r| **r > a && **r <= b).count();
        prop_assert_eq!(n, expected);
        let all = count_real_roots(&p, &ExtRational::NegInf, &ExtRational::PosInf).unwrap();
        prop_assert_eq!(all, f.distinct_roots().len());
    }

    #[test]
    fn sign_variations_do_not_increase(f in factored(), mut xs in prop::collection::vec(small_rational(), 2..12)) {
        let p = f.poly().squarefree_part();
        let chain = sturm_sequence(&p).unwrap();
        xs.sort();
        let mut points = vec![ExtRational::NegInf];
        points.extend(xs.into_iter().map(ExtRational::Finite));
        points.push(ExtRational::PosInf);
        let v: Vec<usize> = points.iter().map(|x| chain.sign_variations(x)).collect();
        for w in v.windows(2) {
            prop_assert!(w[1] <= w[0], "{:?}", v);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdict_agrees_with_sampling(f in factored(), strict in any::<bool>()) {
        let p = f.poly();
        let cert = certify_sign_on_positive_axis(&p, strict).unwrap();
        prop_assert!(verify(&cert).is_ok());
        let signs: Vec<i8> = log_spaced_points().iter().map(|x| p.sign_at(x)).collect();
        match cert.verdict {
            Verdict::StrictlyPositive => prop_assert!(signs.iter().all(|s| *s > 0)),
            Verdict::StrictlyNegative => prop_assert!(signs.iter().all(|s| *s < 0)),
            Verdict::Nonnegative => prop_assert!(signs.iter().all(|s| *s >= 0)),
            Verdict::Nonpositive => prop_assert!(signs.iter().all(|s| *s <= 0)),
            Verdict::Indefinite => {
                let positive_roots = f.distinct_roots().into_iter().filter(|r| r.is_positive()).count();
                prop_assert!(positive_roots > 0);
            }
        }
    }
}

#[test]
fn double_root_is_weak_not_strict() {
    let p = UniPoly::from_ints(&[1, -2, 1]);
    assert_eq!(certify_sign_on_positive_axis(&p, false).unwrap().verdict, Verdict::Nonnegative);
    assert_eq!(certify_sign_on_positive_axis(&p, true).unwrap().verdict, Verdict::Indefinite);
}
