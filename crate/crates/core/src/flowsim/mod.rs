//! Axisymmetric convex surfaces moved by `∂s/∂t = −F(λ₁, λ₂)` on their
//! support function, with diagnostics along the run.
//!
//! Shapes are symmetric about the equator, so `s(θ)` is an even cosine
//! series in `2θ` and the Steiner point stays at the origin.

mod constants;
pub mod spectral;

pub use constants::{constants_for, ConstantsRow};

use serde::{Deserialize, Serialize};

use crate::evolution::Velocity;
use crate::ratpoly::{rational_to_f64, Poly2, RatFn2};
use spectral::{legendre, legendre_coefficient, Grid};

pub const DEFAULT_CFL: f64 = 0.2;
/// Real-axis stability limit of classical RK4.
const RK4_LIMIT: f64 = 2.78;
const MAX_HALVINGS: u32 = 12;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum FlowError {
    #[error("initial shape is not strictly convex")]
    NotConvex,
    #[error("convexity lost at t = {time}")]
    ConvexityLost { time: f64, last_state: Box<FlowState> },
    #[error("time step {dt} exceeds the stability bound {bound}")]
    StepTooLarge { dt: f64, bound: f64 },
    #[error("expression is not homogeneous")]
    NotHomogeneous,
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("step limit reached at t = {0}")]
    StepLimit(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Sphere { r: f64 },
    /// `s = r(1 + amplitude·P_l(cosθ))`.
    Perturbed { r: f64, l: u32, amplitude: f64 },
    /// Ellipsoid of revolution with equatorial semi-axis `a` and polar
    /// semi-axis `c`.
    Oblate { a: f64, c: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FlowState {
    pub time: f64,
    pub modes: Vec<f64>,
    pub grid_size: usize,
    pub velocity_tag: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeriesRow {
    pub t: f64,
    pub max_w: f64,
    pub min_lambda: f64,
    pub max_lambda: f64,
    pub pinch_ratio: f64,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub max_f: f64,
}

pub const CSV_HEADER: &str = "t,max_w,min_lambda,max_lambda,pinch_ratio,inner_radius,outer_radius,max_F";

pub fn rows_to_csv(rows: &[SeriesRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}\n",
            r.t, r.max_w, r.min_lambda, r.max_lambda, r.pinch_ratio, r.inner_radius, r.outer_radius, r.max_f
        ));
    }
    out
}

/// Rational function compiled to floating-point monomial lists.
#[derive(Clone, Debug)]
struct F64Fn {
    num: Vec<(f64, i32, i32)>,
    den: Vec<(f64, i32, i32)>,
}

impl F64Fn {
    fn new(f: &RatFn2) -> Self {
        let c = |p: &Poly2| {
            p.terms()
                .map(|(m, c)| (rational_to_f64(c), m.i as i32, m.j as i32))
                .collect()
        };
        Self {
            num: c(f.num()),
            den: c(f.den()),
        }
    }

    fn eval(&self, a: f64, b: f64) -> f64 {
        let e = |t: &[(f64, i32, i32)]| t.iter().map(|(c, i, j)| c * a.powi(*i) * b.powi(*j)).sum::<f64>();
        e(&self.num) / e(&self.den)
    }
}

/// Grid and compiled velocity shared by all steps of a run.
#[derive(Clone, Debug)]
pub struct Flow {
    grid: Grid,
    f: F64Fn,
    f1: F64Fn,
    f2: F64Fn,
    tag: String,
    /// Adds `+2s`, the rescaling term.
    rescaled: bool,
}

/// Grid samples of curvature-dependent quantities.
struct Sample {
    s: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl Flow {
    pub fn new(v: &Velocity, grid_size: usize) -> Self {
        Self {
            grid: Grid::new(grid_size),
            f: F64Fn::new(&v.f),
            f1: F64Fn::new(&v.gradient.0),
            f2: F64Fn::new(&v.gradient.1),
            tag: v.f.to_text(),
            rescaled: false,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn init(&self, profile: &Profile) -> Result<FlowState, FlowError> {
        let th = &self.grid.theta;
        let vals: Vec<f64> = match *profile {
            Profile::Sphere { r } => vec![r; self.grid.m],
            Profile::Perturbed { r, l, amplitude } => {
                if l < 2 || l % 2 == 1 {
                    return Err(FlowError::InvalidProfile("l must be even and at least 2".into()));
                }
                th.iter().map(|t| r * (1.0 + amplitude * legendre(l, t.cos()))).collect()
            }
            Profile::Oblate { a, c } => {
                if a <= 0.0 || c <= 0.0 {
                    return Err(FlowError::InvalidProfile("semi-axes must be positive".into()));
                }
                th.iter()
                    .map(|t| (a * a * t.sin().powi(2) + c * c * t.cos().powi(2)).sqrt())
                    .collect()
            }
        };
        let state = FlowState {
            time: 0.0,
            modes: self.grid.analyze(&vals),
            grid_size: self.grid.m,
            velocity_tag: self.tag.clone(),
        };
        self.sample(&state.modes).ok_or(FlowError::NotConvex)?;
        Ok(state)
    }

    fn sample(&self, modes: &[f64]) -> Option<Sample> {
        let (s, r1, r2) = self.grid.radii(modes);
        if s.iter().chain(&r1).chain(&r2).any(|x| !(*x > 0.0)) {
            return None;
        }
        Some(Sample {
            s,
            l1: r1.iter().map(|r| 1.0 / r).collect(),
            l2: r2.iter().map(|r| 1.0 / r).collect(),
        })
    }

    /// `(λ₁, λ₂)` on the grid: meridional and parallel curvatures.
    pub fn curvatures(&self, state: &FlowState) -> Result<(Vec<f64>, Vec<f64>), FlowError> {
        let s = self.sample(&state.modes).ok_or_else(|| self.lost(state))?;
        Ok((s.l1, s.l2))
    }

    fn lost(&self, state: &FlowState) -> FlowError {
        FlowError::ConvexityLost {
            time: state.time,
            last_state: Box::new(state.clone()),
        }
    }

    fn rhs(&self, modes: &[f64]) -> Option<Vec<f64>> {
        let s = self.sample(modes)?;
        let vals: Vec<f64> = (0..self.grid.m)
            .map(|j| {
                let f = -self.f.eval(s.l1[j], s.l2[j]);
                if self.rescaled {
                    f + 2.0 * s.s[j]
                } else {
                    f
                }
            })
            .collect();
        Some(self.grid.analyze(&vals))
    }

    /// `max Σᵢ Fⁱλᵢ²`, the diffusion scale of the linearized equation.
    fn diffusion_scale(&self, modes: &[f64]) -> Option<f64> {
        let s = self.sample(modes)?;
        Some(
            (0..self.grid.m)
                .map(|j| {
                    let (a, b) = (s.l1[j], s.l2[j]);
                    self.f1.eval(a, b).abs() * a * a + self.f2.eval(a, b).abs() * b * b
                })
                .fold(0.0, f64::max),
        )
    }

    /// `CFL · Δθ² / max Σᵢ Fⁱλᵢ²`.
    pub fn stable_dt(&self, state: &FlowState, cfl: f64) -> Result<f64, FlowError> {
        let d = self.diffusion_scale(&state.modes).ok_or_else(|| self.lost(state))?;
        let h = self.grid.spacing();
        Ok(if d > 0.0 { cfl * h * h / d } else { f64::INFINITY })
    }

    fn rk4(&self, modes: &[f64], dt: f64) -> Option<Vec<f64>> {
        let axpy = |x: &[f64], k: &[f64], c: f64| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + c * b).collect() };
        let k1 = self.rhs(modes)?;
        let k2 = self.rhs(&axpy(modes, &k1, dt / 2.0))?;
        let k3 = self.rhs(&axpy(modes, &k2, dt / 2.0))?;
        let k4 = self.rhs(&axpy(modes, &k3, dt))?;
        let next: Vec<f64> = (0..modes.len())
            .map(|i| modes[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        self.sample(&next)?;
        Some(next)
    }

    /// One RK4 step of size `dt`.
    pub fn advance(&self, state: &FlowState, dt: f64) -> Result<FlowState, FlowError> {
        let bound = self.stable_dt(state, RK4_LIMIT / (std::f64::consts::PI * std::f64::consts::PI))?;
        if !(dt > 0.0) || dt > bound {
            return Err(FlowError::StepTooLarge { dt, bound });
        }
        let modes = self.rk4(&state.modes, dt).ok_or_else(|| self.lost(state))?;
        Ok(FlowState {
            time: state.time + dt,
            modes,
            grid_size: state.grid_size,
            velocity_tag: state.velocity_tag.clone(),
        })
    }

    /// Step at the CFL size, halving on loss of convexity.
    fn adaptive_step(&self, state: &FlowState, cfl: f64, cap: f64) -> Result<FlowState, FlowError> {
        let mut dt = self.stable_dt(state, cfl)?.min(cap);
        for _ in 0..=MAX_HALVINGS {
            if let Some(modes) = self.rk4(&state.modes, dt) {
                return Ok(FlowState {
                    time: state.time + dt,
                    modes,
                    grid_size: state.grid_size,
                    velocity_tag: state.velocity_tag.clone(),
                });
            }
            dt /= 2.0;
        }
        Err(self.lost(state))
    }

    pub fn diagnostics(&self, state: &FlowState, w: Option<&RatFn2>) -> Result<SeriesRow, FlowError> {
        let s = self.sample(&state.modes).ok_or_else(|| self.lost(state))?;
        let wf = w.map(F64Fn::new);
        let m = self.grid.m;
        let mut row = SeriesRow {
            t: state.time,
            max_w: f64::NEG_INFINITY,
            min_lambda: f64::INFINITY,
            max_lambda: 0.0,
            pinch_ratio: 1.0,
            inner_radius: f64::INFINITY,
            outer_radius: 0.0,
            max_f: f64::NEG_INFINITY,
        };
        for j in 0..m {
            let (a, b) = (s.l1[j], s.l2[j]);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            row.min_lambda = row.min_lambda.min(lo);
            row.max_lambda = row.max_lambda.max(hi);
            row.pinch_ratio = row.pinch_ratio.max(hi / lo);
            row.inner_radius = row.inner_radius.min(s.s[j]);
            row.outer_radius = row.outer_radius.max(s.s[j]);
            row.max_f = row.max_f.max(self.f.eval(a, b));
            let wv = wf.as_ref().map_or(0.0, |wf| wf.eval(a, b));
            row.max_w = row.max_w.max(wv);
        }
        Ok(row)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum Stop {
    InnerRadius(f64),
    Time(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FlowOptions {
    pub grid_size: usize,
    pub cfl: f64,
    pub max_steps: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            grid_size: 64,
            cfl: DEFAULT_CFL,
            max_steps: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FlowMetadata {
    pub velocity: String,
    pub quantity: Option<String>,
    pub profile: Profile,
    pub grid: usize,
    pub cfl: f64,
    /// The simulator is deterministic; kept for a uniform report layout.
    pub seed: Option<u64>,
    pub estimated_t: Option<f64>,
    pub steps: usize,
    pub recentering: String,
}

#[derive(Clone, Debug)]
pub struct FlowRun {
    pub rows: Vec<SeriesRow>,
    pub estimated_t: Option<f64>,
    pub final_state: FlowState,
    pub metadata: FlowMetadata,
}

pub const RECENTERING: &str = "steiner point; fixed at the origin by equatorial symmetry";

/// Homogeneity of a velocity as a float, for radius scalings.
fn homogeneity(v: &Velocity) -> Result<f64, FlowError> {
    v.homogeneity().map(|d| d as f64).ok_or(FlowError::NotHomogeneous)
}

/// Least-squares fit of `innerRadius^{1+c_h}` against `t` over the last
/// quartile of the recorded steps. Returns the zero crossing.
pub fn estimate_extinction_time(rows: &[SeriesRow], c_h: f64) -> Option<f64> {
    let start = rows.len() - rows.len() / 4;
    let pts: Vec<(f64, f64)> = rows[start..]
        .iter()
        .map(|r| (r.t, r.inner_radius.powf(1.0 + c_h)))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    if sxx == 0.0 || sxy == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    Some(mt - my / slope)
}

pub fn init_state(profile: &Profile, grid_size: usize, v: &Velocity) -> Result<FlowState, FlowError> {
    Flow::new(v, grid_size).init(profile)
}

pub fn curvature_profile(state: &FlowState, v: &Velocity) -> Result<(Vec<f64>, Vec<f64>), FlowError> {
    Flow::new(v, state.grid_size).curvatures(state)
}

pub fn advance(state: &FlowState, v: &Velocity, dt: f64) -> Result<FlowState, FlowError> {
    Flow::new(v, state.grid_size).advance(state, dt)
}

/// Evolves `profile` under `v` until `stop`, recording one row per step.
pub fn run_flow(
    profile: &Profile,
    v: &Velocity,
    w: Option<&RatFn2>,
    stop: Stop,
    opts: &FlowOptions,
) -> Result<FlowRun, FlowError> {
    let c_h = homogeneity(v)?;
    let flow = Flow::new(v, opts.grid_size);
    let mut state = flow.init(profile)?;
    let mut rows = vec![flow.diagnostics(&state, w)?];
    let mut steps = 0;
    loop {
        let last = rows.last().unwrap();
        let cap = match stop {
            Stop::InnerRadius(r) if last.inner_radius <= r => break,
            Stop::Time(t) if state.time >= t * (1.0 - 1e-15) => break,
            Stop::Time(t) => t - state.time,
            Stop::InnerRadius(_) => f64::INFINITY,
        };
        if steps >= opts.max_steps {
            return Err(FlowError::StepLimit(state.time));
        }
        state = flow.adaptive_step(&state, opts.cfl, cap)?;
        rows.push(flow.diagnostics(&state, w)?);
        steps += 1;
    }
    let estimated_t = match stop {
        Stop::InnerRadius(_) => estimate_extinction_time(&rows, c_h),
        Stop::Time(_) => None,
    };
    Ok(FlowRun {
        metadata: FlowMetadata {
            velocity: v.f.to_text(),
            quantity: w.map(RatFn2::to_text),
            profile: profile.clone(),
            grid: opts.grid_size,
            cfl: opts.cfl,
            seed: None,
            estimated_t,
            steps,
            recentering: RECENTERING.into(),
        },
        rows,
        estimated_t,
        final_state: state,
    })
}

/// Radius `(c₁(1+c_h)(T−t))^{1/(1+c_h)}` of a shrinking sphere.
pub fn sphere_radius(c1: f64, c_h: f64, t_ext: f64, t: f64) -> f64 {
    (c1 * (1.0 + c_h) * (t_ext - t)).powf(1.0 / (1.0 + c_h))
}

/// Extinction time `r₀^{1+c_h}/(c₁(1+c_h))` of a sphere of radius `r₀`.
pub fn sphere_lifespan(c1: f64, c_h: f64, r0: f64) -> f64 {
    r0.powf(1.0 + c_h) / (c1 * (1.0 + c_h))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RescaledRun {
    pub l: u32,
    pub amplitude: f64,
    /// `(τ, coefficient of P_l)` at every step of the fit window.
    pub series: Vec<(f64, f64)>,
    /// Decay rate `μ` in `coefficient ∝ e^{−μτ}`.
    pub exponent: f64,
}

/// Evolves `s̃ = 1 + amplitude·P_l(cosθ)` under `∂s̃/∂τ = −|A|² + 2s̃` and
/// fits the exponential decay rate of the `P_l` coefficient. The run ends
/// once the coefficient has fallen by `e³`, or at `max_tau`.
pub fn run_rescaled(l: u32, amplitude: f64, max_tau: f64, opts: &FlowOptions) -> Result<RescaledRun, FlowError> {
    let v = crate::evolution::velocity_from_expr(&RatFn2::from_poly(Poly2::q())).expect("|A|^2 is a valid velocity");
    let mut flow = Flow::new(&v, opts.grid_size);
    flow.rescaled = true;
    let profile = if amplitude == 0.0 {
        Profile::Sphere { r: 1.0 }
    } else {
        Profile::Perturbed { r: 1.0, l, amplitude }
    };
    let mut state = flow.init(&profile)?;
    let c0 = legendre_coefficient(&state.modes, l);
    let mut series = vec![(0.0, c0)];
    let mut steps = 0;
    while state.time < max_tau && series.last().unwrap().1.abs() > c0.abs() * (-3f64).exp() {
        if steps >= opts.max_steps {
            return Err(FlowError::StepLimit(state.time));
        }
        state = flow.adaptive_step(&state, opts.cfl, max_tau - state.time)?;
        series.push((state.time, legendre_coefficient(&state.modes, l)));
        steps += 1;
    }
    let pts: Vec<(f64, f64)> = series
        .iter()
        .filter(|(_, c)| *c != 0.0)
        .map(|(t, c)| (*t, c.abs().ln()))
        .collect();
    let exponent = if pts.len() < 2 {
        0.0
    } else {
        let n = pts.len() as f64;
        let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
        -sxy / sxx
    };
    Ok(RescaledRun {
        l,
        amplitude,
        series,
        exponent,
    })
}

/// Final state of the rescaled flow from a sphere, for fixed-point checks.
pub fn rescaled_sphere_drift(tau: f64, opts: &FlowOptions) -> Result<f64, FlowError> {
    let v = crate::evolution::velocity_from_expr(&RatFn2::from_poly(Poly2::q())).expect("|A|^2 is a valid velocity");
    let mut flow = Flow::new(&v, opts.grid_size);
    flow.rescaled = true;
    let mut state = flow.init(&Profile::Sphere { r: 1.0 })?;
    while state.time < tau {
        state = flow.adaptive_step(&state, opts.cfl, tau - state.time)?;
    }
    Ok(flow
        .grid
        .synthesize(&state.modes)
        .iter()
        .map(|s| (s - 1.0).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::velocity_from_expr;

    fn vel(p: Poly2) -> Velocity {
        velocity_from_expr(&RatFn2::from_poly(p)).unwrap()
    }

    #[test]
    fn sphere_curvatures() {
        let v = vel(Poly2::q());
        let s = init_state(&Profile::Sphere { r: 2.0 }, 16, &v).unwrap();
        let (a, b) = curvature_profile(&s, &v).unwrap();
        assert!(a.iter().chain(&b).all(|x| (x - 0.5).abs() < 1e-11));
    }

    #[test]
    fn oblate_degenerate_is_sphere() {
        let v = vel(Poly2::q());
        let a = init_state(&Profile::Oblate { a: 1.0, c: 1.0 }, 16, &v).unwrap();
        let b = init_state(&Profile::Sphere { r: 1.0 }, 16, &v).unwrap();
        for (x, y) in a.modes.iter().zip(&b.modes) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn odd_harmonic_rejected() {
        let v = vel(Poly2::q());
        let p = Profile::Perturbed { r: 1.0, l: 3, amplitude: 0.01 };
        assert!(matches!(init_state(&p, 16, &v), Err(FlowError::InvalidProfile(_))));
    }

    #[test]
    fn oversized_step_rejected() {
        let v = vel(Poly2::q());
        let s = init_state(&Profile::Sphere { r: 1.0 }, 32, &v).unwrap();
        assert!(matches!(advance(&s, &v, 1.0), Err(FlowError::StepTooLarge { .. })));
    }

    #[test]
    fn extinction_fit_on_exact_data() {
        let rows: Vec<SeriesRow> = (0..100)
            .map(|k| {
                let t = k as f64 * 0.0015;
                let r = sphere_radius(2.0, 2.0, 1.0 / 6.0, t);
                SeriesRow {
                    t,
                    max_w: 0.0,
                    min_lambda: 1.0 / r,
                    max_lambda: 1.0 / r,
                    pinch_ratio: 1.0,
                    inner_radius: r,
                    outer_radius: r,
                    max_f: 2.0 / (r * r),
                }
            })
            .collect();
        let t = estimate_extinction_time(&rows, 2.0).unwrap();
        assert!((t - 1.0 / 6.0).abs() < 1e-12);
    }
}
