//! Numerical Stieltjes inversion: density reconstruction from boundary
//! values of the Cauchy transform, with an epsilon schedule and Richardson
//! (Neville) extrapolation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::SeriesT;
use crate::laws::cauchy::{cauchy_closed, cauchy_series};
use crate::laws::{VariableKind, VariableSpec};

/// Geometric default schedule `1e-2 .. 1e-6`.
pub fn default_eps_schedule() -> Vec<f64> {
    vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
}

/// One reconstructed density value.
#[derive(Clone, Copy, Debug)]
pub struct DensityPoint {
    pub x: f64,
    pub density: f64,
    pub converged: bool,
}

/// Uniform grid specification `x_min:x_max:n`.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.x_min];
        }
        let step = (self.x_max - self.x_min) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.x_min + step * i as f64).collect()
    }
}

/// Neville extrapolation of `(eps_i, f_i)` samples to `eps = 0`; returns the
/// extrapolated value and the difference between the last two tableau
/// levels as a convergence width.
fn neville_to_zero(eps: &[f64], f: &[f64]) -> (f64, f64) {
    let n = eps.len();
    let mut t = f.to_vec();
    let mut previous = t[0];
    for m in 1..n {
        for i in 0..(n - m) {
            t[i] = (eps[i] * t[i + 1] - eps[i + m] * t[i]) / (eps[i] - eps[i + m]);
        }
        previous = if m + 1 < n { t[0] } else { previous };
    }
    (t[0], (t[0] - previous).abs())
}

/// Evaluator for `G` along the vertical line above a grid point.
enum Transform<'a> {
    Closed(&'a VariableSpec),
    /// For the four-way interpolant: integrate the closed-form `G'` down a
    /// vertical contour from an anchor where the moment series converges.
    Integrated {
        spec: &'a VariableSpec,
        g_series: SeriesT,
        t: f64,
    },
}

const ANCHOR_HEIGHT: f64 = 8.0;
const CONTOUR_INTERVALS: usize = 2048;

impl Transform<'_> {
    fn new<'a>(spec: &'a VariableSpec) -> Result<Transform<'a>> {
        match spec.kind {
            VariableKind::M3 | VariableKind::N3 => Err(Error::NoClosedForm(
                "density reconstruction for M3/N3 (use the Monte Carlo histogram)",
            )),
            VariableKind::Vt => {
                let gprime = cauchy_series(VariableKind::Vt, 44)?;
                Ok(Transform::Integrated {
                    spec,
                    g_series: gprime.xi_antiderivative()?,
                    t: spec.t_f64()?,
                })
            }
            _ => Ok(Transform::Closed(spec)),
        }
    }

    /// `G(x + i eps_j)` for every epsilon in the (descending) schedule.
    fn values_above(&self, x: f64, eps: &[f64]) -> Result<Vec<Complex64>> {
        match self {
            Transform::Closed(spec) => eps
                .iter()
                .map(|&e| cauchy_closed(spec, Complex64::new(x, e)))
                .collect(),
            Transform::Integrated { spec, g_series, t } => {
                // single pass down the contour, capturing G at each epsilon
                let anchor = Complex64::new(x, ANCHOR_HEIGHT);
                let mut g = g_series.eval_complex(1.0 / anchor, *t);
                let mut out = Vec::with_capacity(eps.len());
                let mut y_hi = ANCHOR_HEIGHT;
                for &e in eps {
                    g -= contour_integral(spec, x, e, y_hi)?;
                    out.push(g);
                    y_hi = e;
                }
                Ok(out)
            }
        }
    }
}

/// `integral of G'(x + i y) i dy` for `y` from `y_lo` to `y_hi`, composite
/// Simpson on a log-spaced grid.
fn contour_integral(spec: &VariableSpec, x: f64, y_lo: f64, y_hi: f64) -> Result<Complex64> {
    debug_assert!(y_lo < y_hi);
    let ratio = y_hi / y_lo;
    let n = CONTOUR_INTERVALS;
    let gp = |y: f64| cauchy_closed(spec, Complex64::new(x, y));
    let mut acc = Complex64::new(0.0, 0.0);
    let mut y0 = y_lo;
    let mut f0 = gp(y0)?;
    for j in 1..=n {
        let y1 = y_lo * ratio.powf(j as f64 / n as f64);
        let ym = 0.5 * (y0 + y1);
        let f1 = gp(y1)?;
        let fm = gp(ym)?;
        acc += (f0 + 4.0 * fm + f1) * ((y1 - y0) / 6.0);
        y0 = y1;
        f0 = f1;
    }
    Ok(acc * Complex64::new(0.0, 1.0))
}

/// Reconstructs the density on a grid inside the support by extrapolating
/// `-Im G(x + i eps)/pi` over the epsilon schedule. Non-convergent points
/// (for instance at atoms) are flagged, never silently accepted.
pub fn stieltjes_density(
    spec: &VariableSpec,
    grid: &GridSpec,
    eps: &[f64],
) -> Result<Vec<DensityPoint>> {
    if eps.len() < 2 {
        return Err(Error::InvalidArgument(
            "epsilon schedule needs at least two values".into(),
        ));
    }
    let mut eps_sorted = eps.to_vec();
    eps_sorted.sort_by(|a, b| b.partial_cmp(a).expect("finite epsilon"));
    let transform = Transform::new(spec)?;
    let mut out = Vec::with_capacity(grid.n);
    for x in grid.points() {
        let g = transform.values_above(x, &eps_sorted)?;
        let f: Vec<f64> = g.iter().map(|v| -v.im / std::f64::consts::PI).collect();
        let (density, width) = neville_to_zero(&eps_sorted, &f);
        let scale = density.abs().max(1.0);
        out.push(DensityPoint {
            x,
            density,
            converged: width <= 1e-5 * scale,
        });
    }
    Ok(out)
}

/// Mass of the atom at zero: the limit of `xi G(xi)` for `xi = i eps`according
/// to the smallest scheduled epsilon, with the previous level as a
/// convergence check.
pub fn atom_mass_at_zero(spec: &VariableSpec) -> Result<(f64, bool)> {
    let eps = [1e-6, 1e-7];
    let transform = Transform::new(spec)?;
    let mut values = Vec::new();
    for &e in &eps {
        let g = match &transform {
            Transform::Closed(s) => cauchy_closed(s, Complex64::new(0.0, e))?,
            Transform::Integrated { .. } => {
                transform.values_above(0.0, &[e])?[0]
            }
        };
        values.push((Complex64::new(0.0, e) * g).re);
    }
    let converged = (values[1] - values[0]).abs() < 1e-5;
    Ok((values[1], converged))
}
