//! Floating-point cross-checks: closed-form densities, quadrature moments
//! and the Cauchy transform as a moment series.
//!
//! This is the only module that works in `f64`. Densities with square-root
//! edges are tabulated in the chart `x = c + R sin θ`, `θ` uniform on
//! `[−π/2, π/2]`. In that chart the integrand picks up the Jacobian
//! `R cos θ = √((x−a)(b−x))`, which cancels the edge behaviour, and
//! composite Simpson converges quickly.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::series::MomentSeq;

/// Semicircle of variance `σ²` (argument is `σ`).
pub fn semicircle_density(x: f64, sigma: f64) -> f64 {
    let r2 = 4.0 * sigma * sigma;
    if x * x >= r2 {
        return 0.0;
    }
    (r2 - x * x).sqrt() / (2.0 * PI * sigma * sigma)
}

/// Support `(α(1−√λ)², α(1+√λ)²)` of the absolutely continuous part.
pub fn mp_support(lambda: f64, alpha: f64) -> (f64, f64) {
    let s = lambda.sqrt();
    (alpha * (1.0 - s).powi(2), alpha * (1.0 + s).powi(2))
}

/// Absolutely continuous part of the free Poisson law with rate `λ` and
/// jump size `α > 0`.
pub fn mp_density(x: f64, lambda: f64, alpha: f64) -> f64 {
    let (a, b) = mp_support(lambda, alpha);
    if x <= a || x >= b || x <= 0.0 {
        return 0.0;
    }
    let d = 4.0 * lambda * alpha * alpha - (x - alpha * (1.0 + lambda)).powi(2);
    if d <= 0.0 {
        return 0.0;
    }
    d.sqrt() / (2.0 * PI * alpha * x)
}

/// Mass of the atom at zero, `max(0, 1−λ)`.
pub fn mp_atom(lambda: f64) -> f64 {
    (1.0 - lambda).max(0.0)
}

/// `Σ_{j=0}^{terms} m_j / z^{j+1}` with `m₀ = 1`.
pub fn cauchy_series_eval(ms: &MomentSeq, z: Complex64, terms: usize) -> Result<Complex64> {
    if terms > ms.order() {
        return Err(Error::Truncation {
            needed: terms,
            order: ms.order(),
        });
    }
    let w = z.inv();
    let mut pw = w;
    let mut acc = pw;
    for j in 1..=terms {
        pw *= w;
        acc += pw * to_f64(&ms.m(j)?);
    }
    Ok(acc)
}

/// Closed-form Cauchy transform of the semicircle of variance `σ²`, on the
/// branch that behaves like `1/z` at infinity.
pub fn semicircle_cauchy(z: Complex64, sigma: f64) -> Complex64 {
    let s2 = sigma * sigma;
    let r = 2.0 * sigma;
    let root = (z - r).sqrt() * (z + r).sqrt();
    (z - root) / (2.0 * s2)
}

/// Parametrization `x = center + radius·sin θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcsineChart {
    pub center: f64,
    pub radius: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityTable {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// `(location, mass)`.
    pub atom: Option<(f64, f64)>,
    /// Set when the grid is uniform in `θ` rather than in `x`.
    pub chart: Option<ArcsineChart>,
    /// Density with respect to `θ`, `f(x)·R cos θ`, on chart grids. Kept
    /// separately because it stays finite where `f` has an integrable pole.
    pub angular: Vec<f64>,
}

impl DensityTable {
    /// Tabulates `f` on `[a, b]` through the arcsine chart with `points`
    /// nodes (rounded up to an odd count for Simpson).
    pub fn from_chart<F: Fn(f64) -> f64>(a: f64, b: f64, points: usize, f: F) -> Self {
        let radius = 0.5 * (b - a);
        Self::from_chart_with(a, b, points, &f, |x, cos| f(x) * radius * cos)
    }

    /// As [`from_chart`](Self::from_chart), with the `θ`-density supplied
    /// directly as `g(x, cos θ)`.
    pub fn from_chart_with<F, G>(a: f64, b: f64, points: usize, f: F, g: G) -> Self
    where
        F: Fn(f64) -> f64,
        G: Fn(f64, f64) -> f64,
    {
        let points = odd_at_least(points);
        let chart = ArcsineChart {
            center: 0.5 * (a + b),
            radius: 0.5 * (b - a),
        };
        let h = PI / (points - 1) as f64;
        let thetas: Vec<f64> = (0..points).map(|i| -0.5 * PI + i as f64 * h).collect();
        let grid: Vec<f64> = thetas.iter().map(|t| chart.center + chart.radius * t.sin()).collect();
        let values = grid.iter().map(|&x| f(x).max(0.0)).collect();
        let angular = grid
            .iter()
            .zip(&thetas)
            .map(|(&x, t)| g(x, t.cos().max(0.0)).max(0.0))
            .collect();
        DensityTable {
            grid,
            values,
            atom: None,
            chart: Some(chart),
            angular,
        }
    }

    /// Uniform grid on `[a, b]`.
    pub fn uniform<F: Fn(f64) -> f64>(a: f64, b: f64, points: usize, f: F) -> Self {
        let points = odd_at_least(points);
        let h = (b - a) / (points - 1) as f64;
        let grid: Vec<f64> = (0..points).map(|i| a + i as f64 * h).collect();
        let values = grid.iter().map(|&x| f(x).max(0.0)).collect();
        DensityTable {
            grid,
            values,
            atom: None,
            chart: None,
            angular: Vec::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,f\n");
        for (x, f) in self.grid.iter().zip(&self.values) {
            let _ = writeln!(out, "{x},{f}");
        }
        if let Some((loc, mass)) = self.atom {
            let _ = writeln!(out, "# atom,{loc},{mass}");
        }
        out
    }
}

fn odd_at_least(points: usize) -> usize {
    let p = points.max(3);
    if p.is_multiple_of(2) {
        p + 1
    } else {
        p
    }
}

pub fn semicircle_table(sigma: f64, points: usize) -> DensityTable {
    DensityTable::from_chart(-2.0 * sigma, 2.0 * sigma, points, |x| semicircle_density(x, sigma))
}

pub fn mp_table(lambda: f64, alpha: f64, points: usize) -> DensityTable {
    let (a, b) = mp_support(lambda, alpha);
    // f·R cos θ = (x−a)(b−x)/(2παx); at λ = 1 the edge a = 0 cancels
    let angular = |x: f64, _cos: f64| {
        let num = if a == 0.0 { b - x } else { (x - a) * (b - x) / x };
        num / (2.0 * PI * alpha)
    };
    let mut t = DensityTable::from_chart_with(a, b, points, |x| mp_density(x, lambda, alpha), angular);
    let atom = mp_atom(lambda);
    if atom > 0.0 {
        t.atom = Some((0.0, atom));
    }
    t
}

fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len();
    if n < 3 {
        return 0.0;
    }
    let mut s = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// `∫ xᵏ dμ` for the tabulated measure, atom included.
pub fn density_moment_check(table: &DensityTable, k: u32) -> f64 {
    let n = table.grid.len();
    let continuous = match table.chart {
        Some(_) => {
            let h = PI / (n - 1) as f64;
            let integrand: Vec<f64> = table
                .grid
                .iter()
                .zip(&table.angular)
                .map(|(x, g)| x.powi(k as i32) * g)
                .collect();
            simpson(&integrand, h)
        }
        None => {
            let h = (table.grid[n - 1] - table.grid[0]) / (n - 1) as f64;
            let integrand: Vec<f64> = table
                .grid
                .iter()
                .zip(&table.values)
                .map(|(x, f)| x.powi(k as i32) * f)
                .collect();
            simpson(&integrand, h)
        }
    };
    let atom = table.atom.map(|(loc, mass)| loc.powi(k as i32) * mass).unwrap_or(0.0);
    continuous + atom
}
