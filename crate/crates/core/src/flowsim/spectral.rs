//! Even cosine series `s(θ) = Σ a_k cos 2kθ` sampled at
//! `θ_j = jπ/(2(M−1))`, `j = 0..M`, covering a pole to the equator.

use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct Grid {
    pub m: usize,
    pub theta: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
}

impl Grid {
    pub fn new(m: usize) -> Self {
        assert!(m >= 3, "grid needs at least three points");
        let n = m - 1;
        let theta = (0..m).map(|j| j as f64 * PI / (2 * n) as f64).collect();
        let mut cos = vec![0.0; m * m];
        let mut sin = vec![0.0; m * m];
        for j in 0..m {
            for k in 0..m {
                // 2kθ_j = π·(jk mod 2N)/N, reduced for accuracy.
                let r = (j * k) % (2 * n);
                let phi = PI * r as f64 / n as f64;
                cos[j * m + k] = phi.cos();
                sin[j * m + k] = if r == 0 || r == n { 0.0 } else { phi.sin() };
            }
        }
        Self { m, theta, cos, sin }
    }

    pub fn spacing(&self) -> f64 {
        PI / (2 * (self.m - 1)) as f64
    }

    /// Grid values of the series.
    pub fn synthesize(&self, modes: &[f64]) -> Vec<f64> {
        (0..self.m)
            .map(|j| {
                let row = &self.cos[j * self.m..(j + 1) * self.m];
                row.iter().zip(modes).map(|(c, a)| c * a).sum()
            })
            .collect()
    }

    /// `(s, s′, s″)` on the grid.
    pub fn derivatives(&self, modes: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let m = self.m;
        let mut s = vec![0.0; m];
        let mut d1 = vec![0.0; m];
        let mut d2 = vec![0.0; m];
        for j in 0..m {
            let c = &self.cos[j * m..(j + 1) * m];
            let sn = &self.sin[j * m..(j + 1) * m];
            for (k, a) in modes.iter().enumerate() {
                let kk = 2.0 * k as f64;
                s[j] += a * c[k];
                d1[j] -= kk * a * sn[k];
                d2[j] -= kk * kk * a * c[k];
            }
        }
        (s, d1, d2)
    }

    /// Coefficients interpolating the grid values (inverse DCT-I).
    pub fn analyze(&self, values: &[f64]) -> Vec<f64> {
        let m = self.m;
        let n = (m - 1) as f64;
        let w = |j: usize| if j == 0 || j == m - 1 { 0.5 } else { 1.0 };
        (0..m)
            .map(|k| {
                let acc: f64 = (0..m).map(|j| w(j) * values[j] * self.cos[j * m + k]).sum();
                2.0 / n * w(k) * acc
            })
            .collect()
    }

    /// Principal radii `(r₁, r₂) = (s″ + s, s′cotθ + s)` on the grid.
    pub fn radii(&self, modes: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let (s, d1, d2) = self.derivatives(modes);
        let r1: Vec<f64> = s.iter().zip(&d2).map(|(a, b)| a + b).collect();
        let r2 = (0..self.m)
            .map(|j| {
                if j == 0 {
                    r1[0]
                } else if j == self.m - 1 {
                    s[j]
                } else {
                    let t = self.theta[j];
                    d1[j] * t.cos() / t.sin() + s[j]
                }
            })
            .collect();
        (s, r1, r2)
    }
}

/// Value of the series at an arbitrary angle.
pub fn eval_series(modes: &[f64], theta: f64) -> f64 {
    modes
        .iter()
        .enumerate()
        .map(|(k, a)| a * (2.0 * k as f64 * theta).cos())
        .sum()
}

/// Legendre polynomial `P_l(x)` by the three-term recurrence.
pub fn legendre(l: u32, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if l == 0 {
        return p0;
    }
    for n in 1..l {
        let n = n as f64;
        let p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|i| {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let p = legendre(n as u32, x);
                let pm = legendre(n as u32 - 1, x);
                dp = n as f64 * (x * p - pm) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            (x, 2.0 / ((1.0 - x * x) * dp * dp))
        })
        .collect()
}

/// Coefficient of `P_l(cosθ)` in the axisymmetric function given by `modes`.
pub fn legendre_coefficient(modes: &[f64], l: u32) -> f64 {
    let acc: f64 = gauss_legendre(64)
        .iter()
        .map(|(x, w)| w * eval_series(modes, x.acos()) * legendre(l, *x))
        .sum();
    (2 * l + 1) as f64 / 2.0 * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dct_round_trip() {
        let g = Grid::new(17);
        let modes: Vec<f64> = (0..17).map(|k| 1.0 / (1.0 + k as f64).powi(3)).collect();
        let back = g.analyze(&g.synthesize(&modes));
        for (a, b) in modes.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn derivatives_of_cos2() {
        let g = Grid::new(9);
        let (_, d1, d2) = g.derivatives(&[0.0, 1.0]);
        for (j, t) in g.theta.iter().enumerate() {
            assert!((d1[j] + 2.0 * (2.0 * t).sin()).abs() < 1e-13);
            assert!((d2[j] + 4.0 * (2.0 * t).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn quadrature_integrates_polynomials() {
        let q = gauss_legendre(10);
        let int: f64 = q.iter().map(|(x, w)| w * x.powi(6)).sum();
        assert!((int - 2.0 / 7.0).abs() < 1e-14);
        let w: f64 = q.iter().map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn legendre_projection() {
        let g = Grid::new(16);
        let vals: Vec<f64> = g.theta.iter().map(|t| 1.0 + 0.3 * legendre(4, t.cos())).collect();
        let modes = g.analyze(&vals);
        assert!((legendre_coefficient(&modes, 4) - 0.3).abs() < 1e-12);
        assert!((legendre_coefficient(&modes, 0) - 1.0).abs() < 1e-12);
        assert!(legendre_coefficient(&modes, 2).abs() < 1e-12);
    }
}
