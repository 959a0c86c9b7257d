//! The weight `phi`, sup-norms, moduli of smoothness and their exponents.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_unit, domain, Error, Result};
use crate::function::FunctionSpec;
use crate::operators::uniform;

/// `sqrt(x (1 - x))`.
pub fn phi(x: f64) -> Result<f64> {
    check_unit("x", x)?;
    Ok((x * (1.0 - x)).sqrt())
}

/// Uniform grid plus golden-section refinement around the largest samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    /// Golden-section rounds around each of the three best samples.
    pub refine: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { points: 2001, refine: 40 }
    }
}

impl GridSpec {
    pub fn new(points: usize, refine: usize) -> Result<Self> {
        let g = Self { points, refine };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 11 {
            return Err(domain(format!("grid needs at least 11 points, got {}", self.points)));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        uniform(0.0, 1.0, self.points)
    }
}

/// Maximum of `g` over the samples `xs`, then refined by golden-section search
/// between the neighbours of the three largest local maxima. Returns the
/// maximum and where it was attained. `g` may return NaN, which is reported.
pub fn refined_max<G: Fn(f64) -> f64>(g: G, xs: &[f64], refine: usize) -> (f64, f64) {
    let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    if let Some(i) = vals.iter().position(|v| v.is_nan()) {
        return (f64::NAN, xs[i]);
    }
    let mut best = (f64::NEG_INFINITY, f64::NAN);
    let mut peaks = Vec::new();
    for (i, &v) in vals.iter().enumerate() {
        if v > best.0 {
            best = (v, xs[i]);
        }
        let left = if i > 0 { vals[i - 1] } else { f64::NEG_INFINITY };
        let right = vals.get(i + 1).copied().unwrap_or(f64::NEG_INFINITY);
        if v.is_finite() && v >= left && v >= right {
            peaks.push(i);
        }
    }
    if refine == 0 || xs.len() < 3 {
        return best;
    }
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    for &i in peaks.iter().take(3) {
        let lo = xs[i.saturating_sub(1)];
        let hi = xs[(i + 1).min(xs.len() - 1)];
        let (v, x) = golden_max(&g, lo, hi, refine);
        if v > best.0 {
            best = (v, x);
        }
    }
    best
}

fn golden_max<G: Fn(f64) -> f64>(g: &G, mut a: f64, mut b: f64, rounds: usize) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut best = if gc >= gd { (gc, c) } else { (gd, d) };
    for _ in 0..rounds {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
        for (v, x) in [(gc, c), (gd, d)] {
            if v > best.0 {
                best = (v, x);
            }
        }
    }
    best
}

/// `max |f|` on `[0, 1]` (a lower bound that is sharp for unimodal peaks).
pub fn sup_norm(f: &FunctionSpec, grid: &GridSpec) -> f64 {
    refined_max(|x| f.eval(x).abs(), &grid.xs(), grid.refine).0
}

/// Parameters of one Ditzian-Totik modulus evaluation.
#[derive(Debug, Clone)]
pub struct ModulusQuery<'a> {
    pub f: &'a FunctionSpec,
    pub lambda: f64,
    pub t: f64,
    pub grid: GridSpec,
}

/// Number of step sizes sampled in `(0, t]`.
pub const STEP_COUNT: usize = 64;

/// Step sizes `t 2^(-j/6)`, `j = 0..64`, starting at `t` itself.
pub fn step_sizes(t: f64) -> Vec<f64> {
    (0..STEP_COUNT).map(|j| t * (-(j as f64) / 6.0).exp2()).collect()
}

/// `sup_{0 < h <= t} sup_x |f(x + h phi^lambda(x)/2) - f(x - h phi^lambda(x)/2)|`
/// over the `x` for which both arguments lie in `[0, 1]`.
pub fn dt_modulus(q: &ModulusQuery) -> Result<f64> {
    q.grid.validate()?;
    check_unit("lambda", q.lambda)?;
    if !(q.t > 0.0 && q.t <= 1.0) {
        return Err(domain(format!("modulus step t = {} must lie in (0, 1]", q.t)));
    }
    let xs = q.grid.xs();
    let (f, lambda) = (q.f, q.lambda);
    let best = step_sizes(q.t)
        .par_iter()
        .map(|&h| {
            let diff = |x: f64| {
                let half = 0.5 * h * weight(x, lambda);
                let (u, v) = (x - half, x + half);
                if u < 0.0 || v > 1.0 {
                    f64::NEG_INFINITY
                } else {
                    (f.eval(v) - f.eval(u)).abs()
                }
            };
            refined_max(diff, &xs, q.grid.refine).0
        })
        .reduce(|| f64::NEG_INFINITY, nan_max);
    Ok(best.max(0.0))
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// `phi(x)^lambda` with `phi^0 = 1` everywhere, including the endpoints.
pub(crate) fn weight(x: f64, lambda: f64) -> f64 {
    if lambda == 0.0 {
        1.0
    } else {
        (x * (1.0 - x)).max(0.0).sqrt().powf(lambda)
    }
}

/// `omega(f; delta) = sup_{|u - v| <= delta} |f(u) - f(v)|`.
pub fn classical_modulus(f: &FunctionSpec, delta: f64, grid: &GridSpec) -> Result<f64> {
    dt_modulus(&ModulusQuery { f, lambda: 0.0, t: delta, grid: *grid })
}

/// Least-squares line through `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn log_log_fit(xs: &[f64], ys: &[f64]) -> Result<LogLogFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFit(format!("need >= 2 paired points, got {}", xs.len())));
    }
    if let Some(bad) = xs.iter().chain(ys).find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::DegenerateFit(format!("non-positive value {bad} on a log scale")));
    }
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / m, ly.iter().sum::<f64>() / m);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae are equal".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LogLogFit { slope, intercept: my - slope * mx, r2 })
}

/// Moduli at each `t` and the fitted exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusReport {
    pub anchor: String,
    pub f: String,
    pub lambda: f64,
    pub rows: Vec<(f64, f64)>,
    pub gamma_hat: f64,
    pub r2: f64,
}

/// Exponent `gamma` in `omega_{phi^lambda}(f; t) ~ t^gamma`.
pub fn modulus_exponent(f: &FunctionSpec, lambda: f64, ts: &[f64], grid: &GridSpec) -> Result<ModulusReport> {
    if ts.len() < 2 {
        return Err(domain("need at least two step sizes"));
    }
    let (lo, hi) = ts.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &t| (a.min(t), b.max(t)));
    if hi / lo < 100.0 {
        return Err(domain(format!("step sizes span {:.2} decades, need 2", (hi / lo).log10())));
    }
    let omegas = ts
        .iter()
        .map(|&t| dt_modulus(&ModulusQuery { f, lambda, t, grid: *grid }))
        .collect::<Result<Vec<_>>>()?;
    if omegas.iter().all(|&w| w == 0.0) {
        return Err(Error::DegenerateFit(format!("modulus of {f} vanishes at every step")));
    }
    let fit = log_log_fit(ts, &omegas)?;
    Ok(ModulusReport {
        anchor: "Theorem 5".into(),
        f: f.label().to_string(),
        lambda,
        rows: ts.iter().copied().zip(omegas).collect(),
        gamma_hat: fit.slope,
        r2: fit.r2,
    })
}

/// `2^-3, 2^-4, ..., 2^-12`.
pub fn default_steps() -> Vec<f64> {
    (3..=12).map(|e| (-(e as f64)).exp2()).collect()
}
