//! Known velocity/quantity pairs for which `max w` is non-increasing.

use crate::ratpoly::{Poly2, RatFn2, Rational};

fn l1() -> Poly2 {
    Poly2::l1()
}

fn l2() -> Poly2 {
    Poly2::l2()
}

/// `(λ₁ − λ₂)²`.
pub fn diff_squared() -> Poly2 {
    (&l1() - &l2()).pow(2)
}

fn ratio(num: Poly2, den: Poly2) -> RatFn2 {
    RatFn2::new(num, den).expect("nonzero denominator")
}

/// One velocity with its monotone quantity.
#[derive(Clone, Debug)]
pub struct KnownPair {
    pub name: String,
    pub velocity: RatFn2,
    pub quantity: RatFn2,
}

pub fn squared_norm_quantity() -> RatFn2 {
    ratio(&Poly2::h() * &diff_squared(), Poly2::k())
}

/// `|A|² + βH²`.
pub fn squared_norm_plus(beta: &Rational) -> RatFn2 {
    RatFn2::from_poly(&Poly2::q() + &Poly2::h().pow(2).scale(beta))
}

/// `Q²(λ₁−λ₂)²/(4K²)`, the quantity with the improved decay rate.
pub fn improved_quantity() -> RatFn2 {
    ratio(
        &Poly2::q().pow(2) * &diff_squared(),
        Poly2::k().pow(2).scale_int(4),
    )
}

pub fn power_sum_quantity(alpha: u32) -> RatFn2 {
    assert!(alpha >= 2);
    let b = if alpha == 2 {
        Poly2::from_int(2)
    } else {
        Poly2::power_sum(alpha - 2)
    };
    ratio(&(&b * &Poly2::h()) * &diff_squared(), Poly2::k())
}

/// The ten rows, with the parameter families expanded at the given values.
pub fn known_pairs(betas: &[i64], alphas: &[u32]) -> Vec<KnownPair> {
    let h = Poly2::h();
    let k = Poly2::k();
    let q = Poly2::q();
    let d2 = diff_squared();
    let p = |s: &str, f: RatFn2, w: RatFn2| KnownPair {
        name: s.to_string(),
        velocity: f,
        quantity: w,
    };
    let e3 = Poly2::from_terms([(1, 2, 0), (1, 1, 1), (1, 0, 2)]);
    let e3m = Poly2::from_terms([(1, 2, 0), (-1, 1, 1), (1, 0, 2)]);
    let mut out = vec![
        p("Q", RatFn2::from_poly(q.clone()), squared_norm_quantity()),
        p("K", RatFn2::from_poly(k.clone()), RatFn2::from_poly(d2.clone())),
        p(
            "H^2",
            RatFn2::from_poly(h.pow(2)),
            ratio(&h.pow(3) * &d2, &q * &k),
        ),
        p(
            "H^3",
            RatFn2::from_poly(h.pow(3)),
            ratio(&(&e3 * &h.pow(2)) * &d2, &e3m * &k),
        ),
        p(
            "H^4",
            RatFn2::from_poly(h.pow(4)),
            ratio(&(&e3 * &h.pow(6)) * &d2, k.pow(2)),
        ),
    ];
    for &b in betas {
        out.push(p(
            &format!("Q+{b}*H^2"),
            squared_norm_plus(&Rational::from_integer(b.into())),
            squared_norm_quantity(),
        ));
    }
    out.push(p(
        "B(3)",
        RatFn2::from_poly(Poly2::power_sum(3)),
        ratio(
            &Poly2::from_terms([(3, 2, 0), (2, 1, 1), (3, 0, 2)]) * &d2,
            k.clone(),
        ),
    ));
    for &a in alphas {
        out.push(p(
            &format!("B({a})"),
            RatFn2::from_poly(Poly2::power_sum(a)),
            power_sum_quantity(a),
        ));
    }
    out.push(p(
        "H*Q",
        RatFn2::from_poly(&h * &q),
        ratio(&h.pow(2) * &d2, k.clone()),
    ));
    out.push(p(
        "Q^2",
        RatFn2::from_poly(q.pow(2)),
        ratio(
            &Poly2::from_terms([(1, 4, 0), (2, 3, 1), (4, 2, 2), (2, 1, 3), (1, 0, 4)]) * &d2,
            &h * &k,
        ),
    ));
    out
}

/// Default expansion: `β ∈ {0..5}`, `α ∈ {2, 4, 5, 6}`.
pub fn default_known_pairs() -> Vec<KnownPair> {
    known_pairs(&[0, 1, 2, 3, 4, 5], &[2, 4, 5, 6])
}
