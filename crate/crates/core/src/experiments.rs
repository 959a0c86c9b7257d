//! Convergence rates, explicit error bounds, derivative bounds and the
//! equivalence between approximation rate and smoothness.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beta_functional::QuadratureSpec;
use crate::error::{check_unit, domain, Error, Result};
use crate::function::FunctionSpec;
use crate::operators::{self, uniform, Operator, OperatorConfig, Variant};
use crate::report::{CheckReport, Location, Worst, BOUND_SLACK};
use crate::smoothness::{
    classical_modulus, dt_modulus, log_log_fit, modulus_exponent, refined_max, sup_norm, weight,
    GridSpec, ModulusQuery, ModulusReport,
};

/// Smallest degrees left out of rate fits.
pub const FIT_SKIP: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub n: usize,
    pub sup_error: f64,
}

/// `sup_x |L_n f - f|` against `n`, with a log-log slope.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub anchor: String,
    pub config: OperatorConfig,
    pub f: String,
    pub rows: Vec<RateRow>,
    /// `None` when fewer than three usable rows remain or an error is zero.
    pub slope: Option<f64>,
    pub r2: Option<f64>,
}

impl RateReport {
    /// Fits the log-log slope, leaving out the `FIT_SKIP` smallest degrees
    /// while at least three rows remain.
    pub fn refit(&mut self) {
        let rows = if self.rows.len() >= FIT_SKIP + 3 {
            &self.rows[FIT_SKIP..]
        } else {
            &self.rows[self.rows.len().saturating_sub(3)..]
        };
        let ns: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
        let es: Vec<f64> = rows.iter().map(|r| r.sup_error).collect();
        match (rows.len() >= 3).then(|| log_log_fit(&ns, &es)) {
            Some(Ok(fit)) => {
                self.slope = Some(fit.slope);
                self.r2 = Some(fit.r2);
            }
            _ => {
                self.slope = None;
                self.r2 = None;
            }
        }
    }
}

/// Uniform error of one prepared operator, refined around its peaks.
fn sup_error(op: &Operator, f: &FunctionSpec, grid: &GridSpec) -> (f64, f64) {
    let xs = grid.xs();
    refined_max(|x| op.eval(x).map_or(f64::NAN, |v| (v - f.eval(x)).abs()), &xs, grid.refine)
}

pub fn convergence_table(
    template: &OperatorConfig,
    f: &FunctionSpec,
    ns: &[usize],
    grid: &GridSpec,
) -> Result<RateReport> {
    grid.validate()?;
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("degrees must be strictly increasing"));
    }
    let quad = QuadratureSpec::default();
    let rows = ns
        .iter()
        .map(|&n| {
            let op = Operator::new(template.with_n(n)?, f, &quad)?;
            Ok(RateRow { n, sup_error: sup_error(&op, f, grid).0 })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut report = RateReport {
        anchor: "Theorem 5".into(),
        config: *template,
        f: f.label().to_string(),
        rows,
        slope: None,
        r2: None,
    };
    report.refit();
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    L7a,
    L7b,
    L8,
    L9,
    T2Ratio,
    T3,
}

impl BoundKind {
    pub fn anchor(self) -> &'static str {
        match self {
            BoundKind::L7a => "Lemma 7(1)",
            BoundKind::L7b => "Lemma 7(2)",
            BoundKind::L8 => "Lemma 8",
            BoundKind::L9 => "Lemma 9",
            BoundKind::T2Ratio => "Theorem 2",
            BoundKind::T3 => "Theorem 3",
        }
    }

    fn title(self) -> &'static str {
        match self {
            BoundKind::L7a => "central second moment uniform bound",
            BoundKind::L7b => "central second moment interior bound",
            BoundKind::L8 => "weighted derivative bound by sup norm",
            BoundKind::L9 => "weighted derivative bound by derivative",
            BoundKind::T2Ratio => "pointwise estimate ratio boundedness",
            BoundKind::T3 => "explicit C1 error bound",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.anchor())
    }
}

/// Worst ratio of a left-hand side to its claimed bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub max_ratio: f64,
    pub argmax_location: Option<Location>,
    pub pass: bool,
    pub evaluations: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl BoundReport {
    pub fn from_worst(kind: BoundKind, worst: Worst) -> Self {
        let max_ratio = worst.max();
        Self {
            kind,
            max_ratio,
            argmax_location: worst.location,
            pass: max_ratio <= BOUND_SLACK,
            evaluations: worst.count,
            notes: Vec::new(),
        }
    }

    pub fn to_check(&self) -> CheckReport {
        CheckReport {
            name: self.kind.title().into(),
            anchor: self.kind.anchor().into(),
            pass: self.pass,
            gating: true,
            worst: self.max_ratio,
            limit: BOUND_SLACK,
            location: self.argmax_location,
            evaluations: self.evaluations,
            notes: self.notes.clone(),
        }
    }
}

/// `lhs / rhs`, treating a zero bound as met when `lhs` is at rounding level
/// (constants are reproduced only up to a few ulps).
fn ratio(lhs: f64, rhs: f64) -> f64 {
    if rhs == 0.0 && lhs.abs() <= 1e-13 {
        0.0
    } else {
        lhs / rhs
    }
}

/// Explicit bound for `C^1` functions:
/// `sqrt(s/n) (||f'|| + omega(f'; 1/sqrt n) (1 + sqrt s))`, `s = (14 + beta^2) alpha / 4`.
pub fn theorem3_worst(config: &OperatorConfig, f: &FunctionSpec, grid: &GridSpec) -> Result<Worst> {
    let d = match f.derivative() {
        Some(d) if f.is_c1() => d,
        _ => return Err(Error::NotC1(f.label().to_string())),
    };
    let n = config.n as f64;
    let s = (14.0 + config.beta * config.beta) * config.alpha / 4.0;
    let rhs = (s / n).sqrt()
        * (sup_norm(d, grid) + classical_modulus(d, 1.0 / n.sqrt(), grid)? * (1.0 + s.sqrt()));
    let op = Operator::new(*config, f, &QuadratureSpec::default())?;
    let (lhs, x) = sup_error(&op, f, grid);
    let mut w = Worst::new();
    w.offer(ratio(lhs, rhs), config.location().x(x));
    Ok(w)
}

pub fn theorem3_check(config: &OperatorConfig, f: &FunctionSpec, grid: &GridSpec) -> Result<BoundReport> {
    Ok(BoundReport::from_worst(BoundKind::T3, theorem3_worst(config, f, grid)?))
}

/// Theorem 3 over every combination of parameters and functions.
pub fn theorem3_sweep(
    ns: &[usize],
    alphas: &[f64],
    betas: &[f64],
    fs: &[FunctionSpec],
    grid: &GridSpec,
) -> Result<BoundReport> {
    let mut cases = Vec::new();
    for &n in ns {
        for &a in alphas {
            for &b in betas {
                for f in fs {
                    cases.push((OperatorConfig::generalized(n, a, b)?, f));
                }
            }
        }
    }
    let parts = cases
        .par_iter()
        .map(|(c, f)| theorem3_worst(c, f, grid))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport::from_worst(BoundKind::T3, parts.into_iter().fold(Worst::new(), Worst::merge)))
}

/// `R(n) = sup_x |L_n f - f| / omega_{phi^lambda}(f; phi^(1-lambda)(x)/sqrt n)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioScan {
    pub config: OperatorConfig,
    pub f: String,
    pub lambda: f64,
    pub rows: Vec<(usize, f64)>,
    pub bound: BoundReport,
}

/// Steps per octave in the modulus table used by the ratio scan.
const MODULUS_TABLE_DENSITY: f64 = 4.0;

pub fn theorem2_ratio_scan(
    template: &OperatorConfig,
    f: &FunctionSpec,
    lambda: f64,
    ns: &[usize],
    grid: &GridSpec,
) -> Result<RatioScan> {
    check_unit("lambda", lambda)?;
    grid.validate()?;
    let quad = QuadratureSpec::default();
    let xs = grid.xs();
    let rows = ns
        .iter()
        .map(|&n| {
            let config = template.with_n(n)?;
            let op = Operator::new(config, f, &quad)?;
            let nf = n as f64;
            let inside: Vec<f64> =
                xs.iter().copied().filter(|&x| (x * (1.0 - x)).sqrt() >= 1.0 / nf).collect();
            let step = |x: f64| (weight(x, 1.0 - lambda) / nf.sqrt()).min(1.0);
            let (lo, hi) = inside
                .iter()
                .fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(step(x)), b.max(step(x))));
            let table = ModulusTable::new(f, lambda, lo, hi, grid)?;
            let mut worst = Worst::new();
            for &x in &inside {
                let lhs = (op.eval(x)? - f.eval(x)).abs();
                worst.offer(ratio(lhs, table.at_most(step(x))), config.location().x(x).lambda(lambda));
            }
            Ok((n, worst))
        })
        .collect::<Result<Vec<_>>>()?;
    let curve: Vec<(usize, f64)> = rows.iter().map(|(n, w)| (*n, w.max())).collect();
    let mut sorted: Vec<f64> = curve.iter().map(|r| r.1).collect();
    sorted.sort_by(f64::total_cmp);
    let median = match sorted.len() {
        0 => 0.0,
        m if m % 2 == 1 => sorted[m / 2],
        m => 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]),
    };
    let mut w = Worst::new();
    if let Some((n, worst)) = rows.iter().max_by(|a, b| a.1.max().total_cmp(&b.1.max())) {
        let at = worst.location.unwrap_or_else(|| Location::at_n(*n));
        w.offer(ratio(worst.max(), 10.0 * median), at);
    }
    let mut bound = BoundReport::from_worst(BoundKind::T2Ratio, w);
    bound.notes.push(format!("R(n): {curve:?}"));
    Ok(RatioScan { config: *template, f: f.label().to_string(), lambda, rows: curve, bound })
}

/// Modulus values on a geometric table of steps; lookups round the step down
/// so the tabulated modulus never exceeds the true one.
struct ModulusTable {
    steps: Vec<f64>,
    values: Vec<f64>,
}

impl ModulusTable {
    fn new(f: &FunctionSpec, lambda: f64, lo: f64, hi: f64, grid: &GridSpec) -> Result<Self> {
        if !(lo > 0.0 && lo <= hi) {
            return Ok(Self { steps: Vec::new(), values: Vec::new() });
        }
        let octaves = (hi / lo).log2();
        let count = (octaves * MODULUS_TABLE_DENSITY).ceil() as usize + 1;
        let steps: Vec<f64> = (0..count)
            .map(|i| (lo * (i as f64 / MODULUS_TABLE_DENSITY).exp2()).min(hi))
            .collect();
        let values = steps
            .par_iter()
            .map(|&t| dt_modulus(&ModulusQuery { f, lambda, t, grid: *grid }))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { steps, values })
    }

    fn at_most(&self, t: f64) -> f64 {
        let i = self.steps.partition_point(|&s| s <= t * (1.0 + 1e-12));
        if i == 0 {
            0.0
        } else {
            self.values[i - 1]
        }
    }
}

/// Fitted rate exponent against fitted modulus exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub anchor: String,
    pub f: String,
    pub lambda: f64,
    pub rate_exponent: f64,
    pub modulus_exponent: f64,
    pub gap: f64,
    pub pass: bool,
    pub rate: RateReport,
    pub modulus: ModulusReport,
}

/// Largest accepted `|2 r - g|`.
pub const EQUIVALENCE_TOLERANCE: f64 = 0.15;

pub fn equivalence_check(
    f: &FunctionSpec,
    lambda: f64,
    alpha: f64,
    beta: f64,
    ns: &[usize],
    ts: &[f64],
    grid: &GridSpec,
) -> Result<EquivalenceReport> {
    let config = OperatorConfig::generalized(ns.first().copied().unwrap_or(2), alpha, beta)?;
    let rate = convergence_table(&config, f, ns, grid)?;
    let slope = rate
        .slope
        .ok_or_else(|| Error::DegenerateFit(format!("no convergence rate for {f}")))?;
    let modulus = modulus_exponent(f, lambda, ts, grid)?;
    let r = -slope;
    let gap = (2.0 * r - modulus.gamma_hat).abs();
    Ok(EquivalenceReport {
        anchor: "Theorem 5".into(),
        f: f.label().to_string(),
        lambda,
        rate_exponent: r,
        modulus_exponent: modulus.gamma_hat,
        gap,
        pass: gap <= EQUIVALENCE_TOLERANCE,
        rate,
        modulus,
    })
}

impl EquivalenceReport {
    pub fn to_check(&self) -> CheckReport {
        CheckReport {
            name: format!("rate and smoothness exponents agree for {}", self.f),
            anchor: self.anchor.clone(),
            pass: self.pass,
            gating: true,
            worst: self.gap,
            limit: EQUIVALENCE_TOLERANCE,
            location: Some(Location::default().lambda(self.lambda)),
            evaluations: self.rate.rows.len() + self.modulus.rows.len(),
            notes: vec![format!(
                "rate exponent {:.4}, modulus exponent {:.4}",
                self.rate_exponent, self.modulus_exponent
            )],
        }
    }
}

impl RateReport {
    /// Passes when the fitted slope lies within `tol` of `expected`.
    pub fn slope_check(&self, expected: f64, tol: f64) -> CheckReport {
        let gap = self.slope.map_or(f64::INFINITY, |s| (s - expected).abs());
        CheckReport {
            name: format!("convergence slope for {}", self.f),
            anchor: self.anchor.clone(),
            pass: gap <= tol,
            gating: true,
            worst: gap,
            limit: tol,
            location: Some(Location::default().alpha(self.config.alpha).beta(self.config.beta)),
            evaluations: self.rows.len(),
            notes: vec![format!("slope {:?}, expected {expected}", self.slope)],
        }
    }
}

/// Sample points for the derivative bounds: `points` values on
/// `[1/n, 1 - 1/n]` plus `1/(2n)` and `1 - 1/(2n)`.
fn derivative_points(n: usize, points: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut xs = uniform(1.0 / nf, 1.0 - 1.0 / nf, points);
    xs.push(0.5 / nf);
    xs.push(1.0 - 0.5 / nf);
    xs
}

/// `phi^lambda |L'| / (15 alpha phi^(lambda-1) sqrt(n) ||f||)` over every case.
pub fn lemma8_suite(
    template: &OperatorConfig,
    fs: &[FunctionSpec],
    lambdas: &[f64],
    ns: &[usize],
    alphas: &[f64],
    points: usize,
    grid: &GridSpec,
) -> Result<BoundReport> {
    for &l in lambdas {
        check_unit("lambda", l)?;
    }
    let norms: Vec<f64> = fs.iter().map(|f| sup_norm(f, grid)).collect();
    let mut cases = Vec::new();
    for &n in ns {
        for &a in alphas {
            for i in 0..fs.len() {
                cases.push((n, a, i));
            }
        }
    }
    let quad = QuadratureSpec::default();
    let parts = cases
        .par_iter()
        .map(|&(n, alpha, i)| {
            let config = OperatorConfig::new(template.variant, n, alpha, template.beta)?;
            let op = Operator::new(config, &fs[i], &quad)?;
            let mut w = Worst::new();
            let scale = 15.0 * alpha * (n as f64).sqrt() * norms[i];
            for x in derivative_points(n, points) {
                let d = op.eval_deriv(x)?.abs();
                for &l in lambdas {
                    let lhs = weight(x, l) * d;
                    let rhs = scale * weight(x, 1.0).powf(l - 1.0);
                    w.offer(ratio(lhs, rhs), config.location().x(x).lambda(l));
                }
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport::from_worst(BoundKind::L8, parts.into_iter().fold(Worst::new(), Worst::merge)))
}

/// `phi^lambda |L'| / (104 alpha ||phi^lambda f'||)` over every case.
pub fn lemma9_suite(
    template: &OperatorConfig,
    fs: &[FunctionSpec],
    lambdas: &[f64],
    ns: &[usize],
    alphas: &[f64],
    points: usize,
    grid: &GridSpec,
) -> Result<BoundReport> {
    for f in fs {
        if !f.is_w_lambda_member() || f.derivative().is_none() {
            return Err(Error::NotWLambda(f.label().to_string()));
        }
    }
    let xs_norm = grid.xs();
    let mut weighted_norms = Vec::new();
    for f in fs {
        let d = f.derivative().expect("checked above");
        let per_lambda: Vec<f64> = lambdas
            .iter()
            .map(|&l| refined_max(|x| weight(x, l) * d.eval(x).abs(), &xs_norm, grid.refine).0)
            .collect();
        weighted_norms.push(per_lambda);
    }
    let mut cases = Vec::new();
    for &n in ns {
        for &a in alphas {
            for i in 0..fs.len() {
                cases.push((n, a, i));
            }
        }
    }
    let quad = QuadratureSpec::default();
    let xs = uniform(0.0, 1.0, points);
    let parts = cases
        .par_iter()
        .map(|&(n, alpha, i)| {
            let config = OperatorConfig::new(template.variant, n, alpha, template.beta)?;
            let op = Operator::new(config, &fs[i], &quad)?;
            let mut w = Worst::new();
            for &x in &xs {
                let d = op.eval_deriv(x)?.abs();
                for (li, &l) in lambdas.iter().enumerate() {
                    let rhs = 104.0 * alpha * weighted_norms[i][li];
                    w.offer(ratio(weight(x, l) * d, rhs), config.location().x(x).lambda(l));
                }
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport::from_worst(BoundKind::L9, parts.into_iter().fold(Worst::new(), Worst::merge)))
}

/// `E_{n-1,beta}((t - x)^2; x) <= 2 phi^2(x) / (n - 1)` as a worst ratio over
/// interior grid points. Informational: the inequality is asserted without proof.
pub fn beta_bernstein_moment_check(ns: &[usize], betas: &[f64], points: usize) -> Result<CheckReport> {
    let mut cases = Vec::new();
    for &n in ns {
        if n < 3 {
            return Err(domain(format!("n = {n} must be >= 3")));
        }
        for &b in betas {
            cases.push(OperatorConfig::new(Variant::BetaBernstein, n - 1, 1.0, b)?);
        }
    }
    let xs = uniform(0.0, 1.0, points);
    let parts = cases
        .par_iter()
        .map(|c| {
            let mut w = Worst::new();
            let m = c.n as f64;
            for &x in &xs[1..xs.len() - 1] {
                let moment = operators::central_second_moment(c, x)?;
                let at = Location::at_n(c.n + 1).x(x).beta(c.beta);
                w.offer(moment / (2.0 * x * (1.0 - x) / m), at);
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = parts.into_iter().fold(Worst::new(), Worst::merge);
    Ok(CheckReport::at_most(
        "beta-bernstein central second moment",
        "auxiliary second-moment bound",
        worst,
        BOUND_SLACK,
    )
    .informational())
}

/// Analytic derivative against a central difference with step `1e-5`,
/// accepted when `|a - d| <= tol * max(1, |d|)`.
pub fn derivative_consistency(
    configs: &[OperatorConfig],
    fs: &[FunctionSpec],
    xs: &[f64],
    tol: f64,
) -> Result<CheckReport> {
    const H: f64 = 1e-5;
    let mut cases = Vec::new();
    for c in configs {
        for f in fs {
            cases.push((c, f));
        }
    }
    let quad = QuadratureSpec::default();
    let parts = cases
        .par_iter()
        .map(|(c, f)| {
            let op = Operator::new(**c, f, &quad)?;
            let mut w = Worst::new();
            for &x in xs {
                if !(x - H >= 0.0 && x + H <= 1.0) {
                    return Err(domain(format!("x = {x} too close to the boundary")));
                }
                let a = op.eval_deriv(x)?;
                let d = (op.eval(x + H)? - op.eval(x - H)?) / (2.0 * H);
                w.offer((a - d).abs() / d.abs().max(1.0), c.location().x(x));
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = parts.into_iter().fold(Worst::new(), Worst::merge);
    Ok(CheckReport::at_most("derivative matches central difference", "derivative formula", worst, tol))
}

/// `count` deterministic interior points from the golden-ratio sequence,
/// mapped into `[0.01, 0.99]`.
pub fn weyl_points(count: usize) -> Vec<f64> {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    (1..=count).map(|i| 0.01 + 0.98 * (i as f64 * g).fract()).collect()
}

/// Geometric list `a, 2a, 4a, ...` up to `b`.
pub fn doubling(a: usize, b: usize) -> Vec<usize> {
    std::iter::successors(Some(a), |&n| n.checked_mul(2)).take_while(|&n| n <= b).collect()
}

/// Built-in functions used by the derivative suites.
pub fn registry() -> Vec<FunctionSpec> {
    vec![
        FunctionSpec::abs_half(),
        FunctionSpec::holder(0.5).expect("valid exponent"),
        FunctionSpec::sin_pi(),
        FunctionSpec::exp_x(),
        FunctionSpec::monomial(2),
        FunctionSpec::poly(&[0.0, 1.0, -1.0]),
    ]
}

/// Which group of checks `verify` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemmas,
    Derivatives,
    Theorems,
    Rates,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "lemmas" => Suite::Lemmas,
            "derivatives" => Suite::Derivatives,
            "theorems" => Suite::Theorems,
            "rates" => Suite::Rates,
            "all" => Suite::All,
            _ => {
                return Err(Error::Parse {
                    token: s.to_string(),
                    reason: "expected lemmas | derivatives | theorems | rates | all".into(),
                })
            }
        })
    }
}

/// Lemma 1 to 7 checks with their standard parameter sweeps.
pub fn lemma_checks() -> Result<Vec<CheckReport>> {
    let grid101 = uniform(0.0, 1.0, 101);
    let grid201 = uniform(0.0, 1.0, 201);
    let mut out = vec![operators::lemma1_check(40, &[0.0, 0.25, 0.5, 1.0], &QuadratureSpec::default())?];
    let ns: Vec<usize> = (2..=50).collect();
    out.push(operators::lemma2_check(&ns, &[0.0, 0.5, 1.0], &grid101)?);
    out.extend(operators::lemma3_checks(200, &grid101)?);
    let korovkin_ns = doubling(16, 4096);
    for alpha in [1.0, 2.0] {
        out.extend(operators::lemma4_limits(alpha, &grid201, &korovkin_ns)?.checks());
    }
    out.push(operators::lemma5_check(&ns, &[1.0, 1.5, 2.0, 3.0, 5.0], &grid201)?);
    let template = OperatorConfig::generalized(2, 2.0, 0.5)?;
    out.extend(operators::lemma6_korovkin(&template, &korovkin_ns, &grid201)?.checks());
    out.extend(operators::lemma7_sweep(&ns, &[1.0, 2.0, 3.0], &[0.0, 0.5, 1.0], 201)?);
    for f in [FunctionSpec::sin_pi(), FunctionSpec::abs_half()] {
        out.push(operators::beta_zero_reduction(16, 2.0, &f, &grid201)?);
    }
    let e_ns: Vec<usize> = (3..=50).collect();
    out.push(beta_bernstein_moment_check(&e_ns, &[0.0, 0.5, 1.0], 201)?);
    Ok(out)
}

/// Lemma 8 and 9 sweeps and the analytic derivative against finite differences.
pub fn derivative_checks(grid: &GridSpec) -> Result<Vec<CheckReport>> {
    let ns = doubling(4, 256);
    let lambdas = [0.0, 0.5, 1.0];
    let mut out = Vec::new();
    for beta in [0.0, 0.5, 1.0] {
        let template = OperatorConfig::generalized(2, 1.0, beta)?;
        let l8 = lemma8_suite(&template, &registry(), &lambdas, &ns, &[1.0, 2.0, 3.0], 201, grid)?;
        out.push(l8.to_check());
        let w_fs: Vec<FunctionSpec> = registry().into_iter().filter(|f| f.is_w_lambda_member()).collect();
        let l9 = lemma9_suite(&template, &w_fs, &lambdas, &ns, &[1.0, 2.0, 3.0], 201, grid)?;
        out.push(l9.to_check());
    }
    out.push(derivative_consistency_default()?);
    Ok(out)
}

/// 500 evaluations: ten operator configurations, two functions, 25 points each.
pub fn derivative_consistency_default() -> Result<CheckReport> {
    let configs = [
        OperatorConfig::generalized(4, 1.0, 0.0)?,
        OperatorConfig::generalized(7, 2.0, 0.5)?,
        OperatorConfig::generalized(16, 3.0, 1.0)?,
        OperatorConfig::generalized(33, 1.5, 0.25)?,
        OperatorConfig::generalized(64, 2.0, 1.0)?,
        OperatorConfig::generalized(128, 1.0, 0.5)?,
        OperatorConfig::new(Variant::BernsteinBezier, 5, 2.0, 0.0)?,
        OperatorConfig::new(Variant::BernsteinBezier, 20, 1.0, 0.0)?,
        OperatorConfig::new(Variant::BernsteinBezier, 50, 4.0, 0.0)?,
        OperatorConfig::new(Variant::BernsteinBezier, 200, 2.5, 0.0)?,
    ];
    let xs = weyl_points(25);
    let fs = [FunctionSpec::sin_pi(), FunctionSpec::exp_x()];
    derivative_consistency(&configs, &fs, &xs, 1e-4)
}

/// Theorem 3 sweep and Theorem 2 ratio scans.
pub fn theorem_checks(grid: &GridSpec) -> Result<Vec<CheckReport>> {
    let fs = [FunctionSpec::monomial(2), FunctionSpec::sin_pi()];
    let mut out = vec![theorem3_sweep(&doubling(4, 256), &[1.0, 2.0], &[0.0, 1.0], &fs, grid)?.to_check()];
    let template = OperatorConfig::generalized(2, 1.0, 0.5)?;
    let ns = doubling(16, 4096);
    for (f, lambda) in [(FunctionSpec::abs_half(), 1.0), (FunctionSpec::monomial(2), 0.0)] {
        out.push(theorem2_ratio_scan(&template, &f, lambda, &ns, grid)?.bound.to_check());
    }
    Ok(out)
}

/// Slopes for the two Holder functions and their agreement with the moduli.
pub fn rate_checks(grid: &GridSpec) -> Result<Vec<CheckReport>> {
    let ns = doubling(16, 8192);
    let ts = crate::smoothness::default_steps();
    let mut out = Vec::new();
    for gamma in [1.0, 0.5] {
        let f = FunctionSpec::holder(gamma)?;
        let eq = equivalence_check(&f, 1.0, 1.0, 0.5, &ns, &ts, grid)?;
        out.push(eq.rate.slope_check(-gamma / 2.0, 0.1));
        out.push(eq.to_check());
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, grid: &GridSpec) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Lemmas | Suite::All) {
        out.extend(lemma_checks()?);
    }
    if matches!(suite, Suite::Derivatives | Suite::All) {
        out.extend(derivative_checks(grid)?);
    }
    if matches!(suite, Suite::Theorems | Suite::All) {
        out.extend(theorem_checks(grid)?);
    }
    if matches!(suite, Suite::Rates | Suite::All) {
        out.extend(rate_checks(grid)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_function_has_no_error() {
        let c = OperatorConfig::generalized(2, 2.0, 0.5).unwrap();
        let r = convergence_table(&c, &FunctionSpec::constant(3.0), &[4, 8, 16, 32], &GridSpec::new(101, 5).unwrap())
            .unwrap();
        assert!(r.rows.iter().all(|row| row.sup_error <= 1e-12));
        assert!(r.slope.is_none() || r.rows.iter().any(|row| row.sup_error > 0.0));
    }

    #[test]
    fn smooth_function_rate_is_first_order() {
        let c = OperatorConfig::generalized(2, 1.0, 0.0).unwrap();
        let ns = doubling(16, 1024);
        let r = convergence_table(&c, &FunctionSpec::monomial(2), &ns, &GridSpec::new(401, 20).unwrap()).unwrap();
        let s = r.slope.unwrap();
        assert!((-1.15..=-0.85).contains(&s), "slope {s}");
    }

    #[test]
    fn theorem3_small_case() {
        let c = OperatorConfig::generalized(16, 1.0, 0.0).unwrap();
        let g = GridSpec::new(401, 20).unwrap();
        let r = theorem3_check(&c, &FunctionSpec::monomial(2), &g).unwrap();
        assert!(r.pass && r.max_ratio < 1.0, "{r:?}");
        let zero = theorem3_check(&c, &FunctionSpec::constant(1.0), &g).unwrap();
        assert_eq!(zero.max_ratio, 0.0);
        let h = FunctionSpec::holder(0.5).unwrap();
        assert!(matches!(theorem3_check(&c, &h, &g), Err(Error::NotC1(_))));
        assert!(matches!(theorem3_check(&c, &FunctionSpec::abs_half(), &g), Err(Error::NotC1(_))));
    }

    #[test]
    fn lemma8_and_9_small_cases() {
        let t = OperatorConfig::generalized(2, 1.0, 0.5).unwrap();
        let g = GridSpec::new(401, 20).unwrap();
        let r8 = lemma8_suite(&t, &[FunctionSpec::abs_half()], &[0.5], &[32], &[2.0], 101, &g).unwrap();
        assert!(r8.pass, "{r8:?}");
        let c = lemma8_suite(&t, &[FunctionSpec::constant(2.0)], &[0.0], &[8], &[1.0], 51, &g).unwrap();
        assert!(c.max_ratio <= 1e-12);
        let r9 = lemma9_suite(&t, &[FunctionSpec::monomial(2)], &[1.0], &[64], &[1.0], 101, &g).unwrap();
        assert!(r9.pass, "{r9:?}");
        let h = FunctionSpec::holder(0.5).unwrap();
        assert!(matches!(lemma9_suite(&t, &[h], &[1.0], &[8], &[1.0], 11, &g), Err(Error::NotWLambda(_))));
    }

    #[test]
    fn helpers() {
        assert_eq!(doubling(16, 100), vec![16, 32, 64]);
        let w = weyl_points(500);
        assert!(w.iter().all(|&x| (0.01..=0.99).contains(&x)));
        let mut s = w.clone();
        s.sort_by(f64::total_cmp);
        s.dedup();
        assert_eq!(s.len(), 500);
        assert_eq!("rates".parse::<Suite>().unwrap(), Suite::Rates);
        assert!("fast".parse::<Suite>().is_err());
    }
}
