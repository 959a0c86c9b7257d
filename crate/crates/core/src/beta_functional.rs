//! Beta function, Beta moments and the Beta-smoothing functional.
//!
//! The smoothing functional of degree `d` at index `k` is
//!
//! ```text
//! F_{d,k}(f) = E[ f(beta * t + (1 - beta) * k/d) ],   t ~ Beta(d k, d (d - k))
//! ```
//!
//! The operator of degree `n` uses `d = n - 1`. At `k = d` the second shape is
//! zero and the distribution degenerates to a point mass at `t = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{check_unit, domain, Error, Result};
use crate::function::{FunctionSpec, Polynomial};
use crate::quadrature::GaussLegendre;
use crate::special::ln_beta_unchecked;

/// Log-density drop (relative to the mode) beyond which the tails are ignored.
const TAIL_CUT: f64 = 46.0;
/// Geometric grading toward singular breakpoints.
const GRADE_RATIO: f64 = 0.2;
const GRADE_LEVELS: usize = 22;
/// Largest acceptable quadrature error estimate.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

/// `ln B(p, q)`.
pub fn log_beta(p: f64, q: f64) -> Result<f64> {
    if !(p > 0.0 && q > 0.0 && p.is_finite() && q.is_finite()) {
        return Err(domain(format!("log_beta needs positive finite arguments, got ({p}, {q})")));
    }
    Ok(ln_beta_unchecked(p, q))
}

/// `E[t^j]` for `t ~ Beta(a, b)`; `b = 0` is the point mass at 1.
pub fn beta_moment(a: f64, b: f64, j: u32) -> Result<f64> {
    if !(a > 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
        return Err(domain(format!("beta_moment needs a > 0, b >= 0, got ({a}, {b})")));
    }
    Ok((0..j).map(|i| (a + i as f64) / (a + b + i as f64)).product())
}

/// Central moments `E[(t - mean)^r]`, `r = 0..=upto`, from the Pearson recurrence
/// `m_{r+1} = r / (a + b + r) * (mean (1 - mean) m_{r-1} + (1 - 2 mean) m_r)`.
pub fn beta_central_moments(a: f64, b: f64, upto: usize) -> Vec<f64> {
    let s = a + b;
    let mean = if b == 0.0 { 1.0 } else { a / s };
    let mut m = vec![0.0; upto + 1];
    m[0] = 1.0;
    for r in 1..upto {
        let rf = r as f64;
        m[r + 1] = rf / (s + rf) * (mean * (1.0 - mean) * m[r - 1] + (1.0 - 2.0 * mean) * m[r]);
    }
    m
}

/// Shapes, mixing weight and anchor of one smoothing functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParams {
    pub a: f64,
    pub b: f64,
    pub beta: f64,
    pub anchor: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64, beta: f64, anchor: f64) -> Result<Self> {
        if !(a > 0.0 && b >= 0.0 && a.is_finite() && b.is_finite()) {
            return Err(domain(format!("Beta shapes must satisfy a > 0, b >= 0, got ({a}, {b})")));
        }
        check_unit("beta", beta)?;
        check_unit("anchor", anchor)?;
        Ok(Self { a, b, beta, anchor })
    }

    /// Parameters of `F_{d,k}`: shapes `(d k, d (d - k))`, anchor `k / d`.
    pub fn for_degree(degree: usize, k: usize, beta: f64) -> Result<Self> {
        if k == 0 || k > degree {
            return Err(domain(format!("functional index k = {k} outside [1, {degree}]")));
        }
        let d = degree as f64;
        let kf = k as f64;
        Self::new(d * kf, d * (d - kf), beta, kf / d)
    }

    pub fn is_point_mass(&self) -> bool {
        self.b == 0.0
    }

    pub fn mean(&self) -> f64 {
        if self.is_point_mass() {
            1.0
        } else {
            self.a / (self.a + self.b)
        }
    }

    pub fn std_dev(&self) -> f64 {
        let s = self.a + self.b;
        (self.a * self.b / (s * s * (s + 1.0))).sqrt()
    }

    /// Image of `t` under `t -> beta t + (1 - beta) anchor`.
    pub fn argument(&self, t: f64) -> f64 {
        (self.beta * t + (1.0 - self.beta) * self.anchor).clamp(0.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Closed form for polynomial integrands, windowed Gauss otherwise.
    ExactPoly,
    WindowedGauss,
    FullComposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub strategy: Strategy,
    /// Gauss-Legendre nodes per panel.
    pub nodes: usize,
    /// Panels across the integration window before error-estimation halving.
    pub panels: usize,
    /// Half-width of the window in standard deviations.
    pub window_sigmas: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { strategy: Strategy::ExactPoly, nodes: 16, panels: 12, window_sigmas: 12.0 }
    }
}

impl QuadratureSpec {
    pub fn with_strategy(strategy: Strategy) -> Self {
        Self { strategy, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 4 {
            return Err(domain(format!("quadrature needs >= 4 nodes per panel, got {}", self.nodes)));
        }
        if self.panels == 0 {
            return Err(domain("quadrature needs at least one panel"));
        }
        if !(self.window_sigmas > 0.0 && self.window_sigmas.is_finite()) {
            return Err(domain("window_sigmas must be positive"));
        }
        Ok(())
    }
}

/// A value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    fn exact(value: f64) -> Self {
        Self { value, error: 0.0 }
    }
}

/// Reusable evaluator of Beta expectations for one quadrature configuration.
#[derive(Debug, Clone)]
pub struct BetaIntegrator {
    spec: QuadratureSpec,
    rule: GaussLegendre,
}

impl BetaIntegrator {
    pub fn new(spec: QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        Ok(Self { spec, rule: GaussLegendre::new(spec.nodes) })
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// `E[f(beta t + (1 - beta) anchor)]` with an error estimate.
    pub fn expectation(&self, params: &BetaParams, f: &FunctionSpec) -> Result<Estimate> {
        if params.is_point_mass() {
            return Ok(Estimate::exact(f.eval(params.argument(1.0))));
        }
        if params.beta == 0.0 {
            return Ok(Estimate::exact(f.eval(params.anchor)));
        }
        let est = match (self.spec.strategy, f.as_polynomial()) {
            (Strategy::ExactPoly, Some(p)) => return Ok(Estimate::exact(exact_poly(params, p))),
            (Strategy::FullComposite, _) => self.composite(params, f, 0.0, 1.0)?,
            _ => {
                let (lo, hi) = self.window(params)?;
                self.composite(params, f, lo, hi)?
            }
        };
        if !(est.value.is_finite() && est.error <= QUADRATURE_TOLERANCE) {
            return Err(Error::QuadratureFailure {
                estimate: est.error,
                tolerance: QUADRATURE_TOLERANCE,
            });
        }
        Ok(est)
    }

    /// Integration window: the `window_sigmas` band around the mean, widened
    /// to wherever the log-density is within `TAIL_CUT` of its peak.
    fn window(&self, params: &BetaParams) -> Result<(f64, f64)> {
        let density = LogDensity::new(params)?;
        let (m, sd) = (params.mean(), params.std_dev());
        let w = self.spec.window_sigmas;
        let (mut lo, mut hi) = ((m - w * sd).max(0.0), (m + w * sd).min(1.0));
        if density.left_vanishes() {
            lo = lo.min(bisect(|t| density.eval(t) + TAIL_CUT, 0.0, density.mode));
        } else {
            lo = 0.0;
        }
        if density.right_vanishes() {
            hi = hi.max(bisect(|t| -(density.eval(t) + TAIL_CUT), density.mode, 1.0));
        } else {
            hi = 1.0;
        }
        Ok((lo, hi))
    }

    fn composite(&self, params: &BetaParams, f: &FunctionSpec, lo: f64, hi: f64) -> Result<Estimate> {
        let density = LogDensity::new(params)?;
        let intervals = self.intervals(params, f, lo, hi);
        let coarse = self.sum_over(&density, params, f, &intervals, false);
        let fine = self.sum_over(&density, params, f, &intervals, true);
        Ok(Estimate { value: fine, error: (fine - coarse).abs() })
    }

    fn intervals(&self, params: &BetaParams, f: &FunctionSpec, lo: f64, hi: f64) -> Vec<(f64, f64)> {
        let width = hi - lo;
        let panels = self.spec.panels;
        let mut inner = Vec::new();
        let mut singular = Vec::new();
        for bp in f.breakpoints() {
            // s = beta t + (1 - beta) anchor hits the breakpoint at t*
            let t = (bp.at - (1.0 - params.beta) * params.anchor) / params.beta;
            if t > lo && t < hi {
                inner.push(t);
                if bp.singular {
                    singular.push(t);
                }
            }
        }
        // a panel cut just short of a breakpoint would leave a long panel whose
        // integrand is nearly singular at its end, so such cuts are dropped
        let keep_out = 0.5 * width / panels as f64;
        let mut cuts: Vec<f64> = (1..panels)
            .map(|i| lo + width * i as f64 / panels as f64)
            .filter(|c| inner.iter().all(|t| (c - t).abs() > keep_out))
            .collect();
        cuts.push(lo);
        cuts.push(hi);
        cuts.extend(&inner);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let mut out = Vec::with_capacity(cuts.len() + 2 * GRADE_LEVELS * singular.len());
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if singular.contains(&a) {
                grade(&mut out, a, b);
            } else if singular.contains(&b) {
                grade(&mut out, b, a);
            } else {
                out.push((a, b));
            }
        }
        out
    }

    fn sum_over(
        &self,
        density: &LogDensity,
        params: &BetaParams,
        f: &FunctionSpec,
        intervals: &[(f64, f64)],
        halve: bool,
    ) -> f64 {
        let (mut num, mut mass) = (0.0, 0.0);
        let mut panel = |a: f64, b: f64| {
            for (t, w) in self.rule.mapped(a, b) {
                let d = w * density.eval(t).exp();
                if d > 0.0 {
                    num += d * f.eval(params.argument(t));
                    mass += d;
                }
            }
        };
        for &(a, b) in intervals {
            if halve {
                let mid = 0.5 * (a + b);
                panel(a, mid);
                panel(mid, b);
            } else {
                panel(a, b);
            }
        }
        num / mass
    }
}

/// Sub-intervals of `[s, e]` (either orientation) shrinking geometrically
/// toward `s`.
fn grade(out: &mut Vec<(f64, f64)>, s: f64, e: f64) {
    let len = e - s;
    let mut outer = e;
    for level in 1..=GRADE_LEVELS {
        let inner = s + len * GRADE_RATIO.powi(level as i32);
        out.push(ordered(inner, outer));
        outer = inner;
    }
    out.push(ordered(s, outer));
}

fn ordered(a: f64, b: f64) -> (f64, f64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Root of an increasing function on `[lo, hi]` by bisection.
fn bisect<F: Fn(f64) -> f64>(g: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Unnormalized log-density, zero at the mode.
struct LogDensity {
    a1: f64,
    b1: f64,
    mode: f64,
}

impl LogDensity {
    fn new(p: &BetaParams) -> Result<Self> {
        if p.a < 1.0 || p.b < 1.0 {
            return Err(domain(format!(
                "quadrature needs Beta shapes >= 1, got ({}, {})",
                p.a, p.b
            )));
        }
        let (a1, b1) = (p.a - 1.0, p.b - 1.0);
        let mode = if a1 > 0.0 && b1 > 0.0 {
            a1 / (a1 + b1)
        } else if a1 > 0.0 {
            1.0
        } else if b1 > 0.0 {
            0.0
        } else {
            0.5
        };
        Ok(Self { a1, b1, mode })
    }

    fn left_vanishes(&self) -> bool {
        self.a1 > 0.0
    }

    fn right_vanishes(&self) -> bool {
        self.b1 > 0.0
    }

    fn eval(&self, t: f64) -> f64 {
        let mut v = 0.0;
        if self.a1 > 0.0 {
            v += self.a1 * (t / self.mode).ln();
        }
        if self.b1 > 0.0 {
            v += self.b1 * ((1.0 - t) / (1.0 - self.mode)).ln();
        }
        v
    }
}

/// Polynomial expectation: re-center the polynomial at the mean of the
/// argument, whose deviation is `beta (t - mean)`, and contract with central moments.
fn exact_poly(params: &BetaParams, p: &Polynomial) -> f64 {
    let mean_t = params.mean();
    let center = params.beta * mean_t + (1.0 - params.beta) * params.anchor;
    let d = p.shifted(center);
    let central = beta_central_moments(params.a, params.b, d.len() - 1);
    let mut scale = 1.0;
    let mut total = 0.0;
    for (i, c) in d.iter().enumerate() {
        total += c * scale * central[i];
        if i + 1 < d.len() {
            scale *= params.beta;
        }
    }
    total
}

/// Expectation under an explicit configuration.
pub fn smoothing_functional(params: &BetaParams, f: &FunctionSpec, quad: &QuadratureSpec) -> Result<Estimate> {
    BetaIntegrator::new(*quad)?.expectation(params, f)
}

fn check_functional_index(n: usize, k: usize) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("operator degree n = {n} must be >= 2")));
    }
    if k == 0 || k >= n {
        return Err(domain(format!("functional index k = {k} outside [1, {}]", n - 1)));
    }
    Ok(())
}

/// `F_{n-1,k}^(beta)(f)`; `k = n - 1` returns `f(1)`.
pub fn f_functional(n: usize, k: usize, beta: f64, f: &FunctionSpec, quad: &QuadratureSpec) -> Result<f64> {
    check_functional_index(n, k)?;
    let params = BetaParams::for_degree(n - 1, k, beta)?;
    Ok(smoothing_functional(&params, f, quad)?.value)
}

/// Closed forms of `F_{n-1,k}^(beta)(t^j)` for `j = 0, 1, 2`.
pub fn f_functional_moment(n: usize, k: usize, beta: f64, j: u32) -> Result<f64> {
    check_functional_index(n, k)?;
    check_unit("beta", beta)?;
    let m = (n - 1) as f64;
    let r = k as f64 / m;
    match j {
        0 => Ok(1.0),
        1 => Ok(r),
        2 => {
            let c = beta * beta / (m * m + 1.0);
            Ok(c * r + (1.0 - c) * r * r)
        }
        _ => Err(domain(format!("closed-form moment only for j <= 2, got {j}"))),
    }
}
