use curvsieve_core::catalog::{squared_norm_plus, squared_norm_quantity};
use curvsieve_core::evolution::{velocity_from_expr, Velocity};
use curvsieve_core::flowsim::*;
use curvsieve_core::ratpoly::{rational_to_f64, Poly2, RatFn2, Rational};
use num_traits::One;

fn vel(f: RatFn2) -> Velocity {
    velocity_from_expr(&f).unwrap()
}

fn table_two_velocities() -> Vec<(String, Velocity)> {
    let h = Poly2::h();
    let mut out = vec![
        ("H^2".to_string(), vel(RatFn2::from_poly(h.pow(2)))),
        ("H^3".to_string(), vel(RatFn2::from_poly(h.pow(3)))),
        ("H^4".to_string(), vel(RatFn2::from_poly(h.pow(4)))),
        ("H*Q".to_string(), vel(RatFn2::from_poly(&h * &Poly2::q()))),
        ("Q^2".to_string(), vel(RatFn2::from_poly(Poly2::q().pow(2)))),
    ];
    for a in 2..=6 {
        out.push((format!("B({a})"), vel(RatFn2::from_poly(Poly2::power_sum(a)))));
    }
    for b in 0..=5 {
        out.push((format!("Q+{b}H^2"), vel(squared_norm_plus(&Rational::from_integer(b.into())))));
    }
    out
}

#[test]
fn sphere_radius_matches_closed_form() {
    let opts = FlowOptions::default();
    for (name, v) in table_two_velocities() {
        let one = Rational::one();
        let c1 = rational_to_f64(&v.f.eval_exact(&one, &one).unwrap());
        let ch = v.homogeneity().unwrap() as f64;
        let t_ext = sphere_lifespan(c1, ch, 1.0);
        let stop = Stop::Time(0.9 * t_ext);
        let run = run_flow(&Profile::Sphere { r: 1.0 }, &v, None, stop, &opts).unwrap();
        let err = run
            .rows
            .iter()
            .map(|r| (r.inner_radius / sphere_radius(c1, ch, t_ext, r.t) - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-6, "{name}: {err}");
    }
}

#[test]
fn sphere_extinction_time_fit() {
    let v = vel(RatFn2::from_poly(Poly2::q()));
    let run = run_flow(&Profile::Sphere { r: 1.0 }, &v, None, Stop::InnerRadius(0.1), &FlowOptions::default()).unwrap();
    let t = run.estimated_t.unwrap();
    assert!((t * 6.0 - 1.0).abs() < 1e-6, "{t}");
}

#[test]
fn initial_speed_is_c1() {
    for (f, c1) in [(Poly2::q(), 2.0), (Poly2::h().pow(3), 8.0)] {
        let v = vel(RatFn2::from_poly(f));
        let s = init_state(&Profile::Sphere { r: 1.0 }, 16, &v).unwrap();
        let dt = 1e-7;
        let n = advance(&s, &v, dt).unwrap();
        let ds = (n.modes[0] - s.modes[0]) / dt;
        assert!((ds + c1).abs() < 1e-5, "{ds}");
    }
}

#[test]
fn zero_velocity_keeps_state() {
    let v = vel(RatFn2::zero());
    let s = init_state(&Profile::Perturbed { r: 1.0, l: 2, amplitude: 0.1 }, 16, &v).unwrap();
    let n = advance(&s, &v, 0.01).unwrap();
    assert_eq!(n.modes, s.modes);
}

#[test]
fn ellipsoid_equator_curvatures() {
    let v = vel(RatFn2::from_poly(Poly2::q()));
    let (a, c) = (1.5, 0.8);
    let s = init_state(&Profile::Oblate { a, c }, 64, &v).unwrap();
    let (l1, l2) = curvature_profile(&s, &v).unwrap();
    let e = l1.len() - 1;
    assert!((l1[e] - a / (c * c)).abs() < 1e-9, "{}", l1[e]);
    assert!((l2[e] - 1.0 / a).abs() < 1e-9);
    // Poles: both curvatures equal c/a².
    assert!((l1[0] - c / (a * a)).abs() < 1e-9);
    assert!((l2[0] - c / (a * a)).abs() < 1e-9);
}

#[test]
fn small_perturbation_curvatures_are_close_to_one() {
    let v = vel(RatFn2::from_poly(Poly2::q()));
    for eps in [1e-2, 1e-3, 1e-4] {
        let s = init_state(&Profile::Perturbed { r: 1.0, l: 2, amplitude: eps }, 32, &v).unwrap();
        let (l1, l2) = curvature_profile(&s, &v).unwrap();
        let dev = l1.iter().chain(&l2).map(|x| (x - 1.0).abs()).fold(0.0, f64::max);
        assert!(dev < 10.0 * eps && dev > 0.1 * eps, "{eps}: {dev}");
    }
}

#[test]
fn perturbed_flow_monotone_quantities() {
    let v = vel(RatFn2::from_poly(Poly2::q()));
    let w = squared_norm_quantity();
    let p = Profile::Perturbed { r: 1.0, l: 2, amplitude: 0.05 };
    let opts = FlowOptions { grid_size: 32, ..FlowOptions::default() };
    let run = run_flow(&p, &v, Some(&w), Stop::InnerRadius(0.05), &opts).unwrap();
    let rows = &run.rows;
    assert!(rows[0].max_w > 0.0);
    let mut worst_w = 0.0f64;
    let mut worst_l = 0.0f64;
    for k in 1..rows.len() {
        worst_w = worst_w.max(rows[k].max_w - rows[k - 1].max_w);
        worst_l = worst_l.max(rows[k - 1].min_lambda - rows[k].min_lambda);
    }
    println!("steps {} T {:?} worst dw {worst_w:e} worst dl {worst_l:e}", rows.len(), run.estimated_t);
    assert!(worst_w <= 1e-8);
    assert!(worst_l <= 1e-8);
    assert!(rows.last().unwrap().pinch_ratio < rows[0].pinch_ratio);
    let t_ext = run.estimated_t.unwrap();
    let late: Vec<f64> = rows.iter().filter(|r| r.t >= 0.5 * t_ext).map(|r| r.pinch_ratio).collect();
    assert!(late.windows(2).all(|p| p[1] <= p[0] + 1e-8));
    for r in rows {
        assert!(r.inner_radius <= r.outer_radius && r.pinch_ratio >= 1.0);
    }
}

#[test]
fn linearized_decay_rates() {
    let opts = FlowOptions { grid_size: 32, ..FlowOptions::default() };
    let r2 = run_rescaled(2, 1e-3, 1.0, &opts).unwrap();
    let r4 = run_rescaled(4, 1e-3, 1.0, &opts).unwrap();
    println!("{} {}", r2.exponent, r4.exponent);
    assert!((r2.exponent - 6.0).abs() < 0.6);
    assert!((r4.exponent - 34.0).abs() < 3.4);
    assert!(rescaled_sphere_drift(0.5, &opts).unwrap() < 1e-10);
}

#[test]
fn grid_refinement_changes_max_w_little() {
    let v = vel(RatFn2::from_poly(Poly2::q()));
    let w = squared_norm_quantity();
    let p = Profile::Perturbed { r: 1.0, l: 2, amplitude: 0.05 };
    let run = |m| {
        let opts = FlowOptions { grid_size: m, ..FlowOptions::default() };
        run_flow(&p, &v, Some(&w), Stop::Time(0.1), &opts).unwrap()
    };
    let a = run(24);
    let b = run(48);
    assert!((a.rows.last().unwrap().t - b.rows.last().unwrap().t).abs() < 1e-15);
    let d = (a.rows.last().unwrap().max_w - b.rows.last().unwrap().max_w).abs();
    assert!(d < 1e-6, "{d}");
    assert!((a.rows[0].max_w - b.rows[0].max_w).abs() < 1e-12);
}

#[test]
fn radii_bracket_sphere_radius() {
    let v = vel(RatFn2::from_poly(Poly2::q()));
    let p = Profile::Oblate { a: 1.2, c: 0.9 };
    let opts = FlowOptions { grid_size: 32, ..FlowOptions::default() };
    let run = run_flow(&p, &v, None, Stop::InnerRadius(0.02), &opts).unwrap();
    // The extinction time is fitted, so the bracket holds up to the fit error.
    let t_ext = run.estimated_t.unwrap();
    for r in run.rows.iter().filter(|r| r.t <= 0.9 * t_ext) {
        let rho = sphere_radius(2.0, 2.0, t_ext, r.t);
        assert!(r.inner_radius <= rho * (1.0 + 1e-6) && rho <= r.outer_radius * (1.0 + 1e-6), "{r:?} {rho}");
    }
    let csv = rows_to_csv(&run.rows);
    assert!(csv.starts_with(CSV_HEADER));
    assert_eq!(csv.lines().count(), run.rows.len() + 1);
}

