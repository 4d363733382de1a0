use curvsieve_core::ratpoly::{to_hq_basis, Poly2, RatFn2, Rational, Var};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn poly() -> impl Strategy<Value = Poly2> {
    prop::collection::vec((-9i64..=9, 0u32..5, 0u32..5), 0..6).prop_map(Poly2::from_terms)
}

fn homogeneous(d: u32) -> impl Strategy<Value = Poly2> {
    prop::collection::vec(-9i64..=9, (d + 1) as usize).prop_map(move |cs| {
        Poly2::from_terms(cs.into_iter().enumerate().map(|(i, c)| (c, i as u32, d - i as u32)))
    })
}

fn symmetric_homogeneous() -> impl Strategy<Value = Poly2> {
    (0u32..=12).prop_flat_map(|d| {
        prop::collection::vec(-9i64..=9, (d / 2 + 1) as usize).prop_map(move |cs| {
            let mut terms = Vec::new();
            for (i, c) in cs.into_iter().enumerate() {
                let i = i as u32;
                terms.push((c, i, d - i));
                if 2 * i != d {
                    terms.push((c, d - i, i));
                }
            }
            Poly2::from_terms(terms)
        })
    })
}

fn positive_rational() -> impl Strategy<Value = Rational> {
    (1i64..200, 1i64..200).prop_map(|(n, d)| rat(n, d))
}

fn powi(t: &Rational, e: i64) -> Rational {
    let mut r = Rational::one();
    for _ in 0..e.unsigned_abs() {
        r *= t;
    }
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn product_rule(a in poly(), b in poly()) {
        for v in [Var::L1, Var::L2] {
            let lhs = (&a * &b).derivative(v);
            let rhs = &(&a * &b.derivative(v)) + &(&b * &a.derivative(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hq_round_trip(p in symmetric_homogeneous()) {
        prop_assume!(!p.is_zero());
        let e = to_hq_basis(&p).unwrap();
        prop_assert_eq!(e.expand(), p);
    }

    #[test]
    fn homogeneous_scaling(n in (0u32..6).prop_flat_map(homogeneous),
                           d in (0u32..6).prop_flat_map(homogeneous),
                           a in positive_rational(), b in positive_rational(),
                           t in positive_rational()) {
        prop_assume!(!n.is_zero() && !d.is_zero());
        let f = RatFn2::new(n, d).unwrap();
        let deg = f.homogeneous_degree().unwrap();
        let Ok(base) = f.eval_exact(&a, &b) else { return Ok(()); };
        let scaled = f.eval_exact(&(&t * &a), &(&t * &b)).unwrap();
        prop_assert_eq!(scaled, powi(&t, deg) * base);
    }

    #[test]
    fn dehomogenized_sign(p in (0u32..8).prop_flat_map(homogeneous),
                          a in positive_rational(), b in positive_rational()) {
        prop_assume!(!p.is_zero());
        let q = p.dehomogenize().unwrap();
        let lhs = p.eval(&a, &b).signum();
        let rhs = q.eval(&(&a / &b)).signum();
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn hq_of_cubic_power_sum_by_expansion() {
    let e = to_hq_basis(&Poly2::power_sum(3)).unwrap();
    let oracle = &Poly2::h().pow(3).scale(&rat(-1, 2)) + &(&Poly2::h() * &Poly2::q()).scale(&rat(3, 2));
    assert_eq!(e.expand(), oracle);
    assert_eq!(e.coeff(3, 0), rat(-1, 2));
    assert_eq!(e.coeff(1, 1), rat(3, 2));
    assert!(e.coeff(0, 0).is_zero());
}
