//! The four positive linear operators and checks of their moment identities.
//!
//! Every operator has the form `sum_k c_k w_k(x)` where the weights `w_k` are
//! either the binomial basis or the generalized basis `Q^(alpha)`, and the
//! coefficients `c_k` are node samples or Beta-smoothed samples of `f`:
//!
//! | variant            | coefficients                          | weights |
//! |--------------------|---------------------------------------|---------|
//! | `Bernstein`        | `f(k/n)`                              | `p`     |
//! | `BernsteinBezier`  | `f(k/n)`                              | `Q`     |
//! | `BetaBernstein`    | `f(0), F_{n,k}(f), f(1)`              | `p`     |
//! | `Generalized`      | `f(0), F_{n-1,k}(f), f(1)`            | `Q`     |

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{binom_row, bezier_row, check_alpha, q_deriv_row, q_row};
use crate::beta_functional::{
    f_functional_moment, BetaIntegrator, BetaParams, QuadratureSpec,
};
use crate::error::{check_unit, domain, Error, Result};
use crate::function::FunctionSpec;
use crate::report::{CheckReport, Location, Worst, BOUND_SLACK};
use crate::smoothness::phi;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Bernstein,
    BernsteinBezier,
    BetaBernstein,
    Generalized,
}

impl Variant {
    pub const ALL: [Variant; 4] =
        [Variant::Bernstein, Variant::BernsteinBezier, Variant::BetaBernstein, Variant::Generalized];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Bernstein => "bernstein",
            Variant::BernsteinBezier => "bernstein-bezier",
            Variant::BetaBernstein => "beta-bernstein",
            Variant::Generalized => "generalized",
        }
    }

    fn uses_alpha(self) -> bool {
        matches!(self, Variant::BernsteinBezier | Variant::Generalized)
    }

    fn uses_beta(self) -> bool {
        matches!(self, Variant::BetaBernstein | Variant::Generalized)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| Error::Parse {
            token: s.to_string(),
            reason: "expected bernstein | bernstein-bezier | beta-bernstein | generalized".into(),
        })
    }
}

/// Operator variant with its parameters. Parameters a variant ignores are
/// stored as `alpha = 1`, `beta = 0` so equal operators compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorConfig {
    pub variant: Variant,
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl OperatorConfig {
    pub fn new(variant: Variant, n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(domain(format!("operator degree n = {n} must be >= 2")));
        }
        let alpha = if variant.uses_alpha() {
            check_alpha(alpha)?;
            alpha
        } else {
            1.0
        };
        let beta = if variant.uses_beta() {
            check_unit("beta", beta)?;
            beta
        } else {
            0.0
        };
        Ok(Self { variant, n, alpha, beta })
    }

    pub fn bernstein(n: usize) -> Result<Self> {
        Self::new(Variant::Bernstein, n, 1.0, 0.0)
    }

    pub fn generalized(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        Self::new(Variant::Generalized, n, alpha, beta)
    }

    /// Same variant and parameters at another degree.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(self.variant, n, self.alpha, self.beta)
    }

    fn q_weights(&self) -> bool {
        self.variant.uses_alpha()
    }

    pub fn location(&self) -> Location {
        Location::at_n(self.n).alpha(self.alpha).beta(self.beta)
    }
}

/// An operator applied to one function, with its coefficients computed once.
#[derive(Debug, Clone)]
pub struct Operator {
    config: OperatorConfig,
    coeffs: Vec<f64>,
}

impl Operator {
    pub fn new(config: OperatorConfig, f: &FunctionSpec, quad: &QuadratureSpec) -> Result<Self> {
        let n = config.n;
        let nf = n as f64;
        let coeffs = match config.variant {
            Variant::Bernstein | Variant::BernsteinBezier => {
                (0..=n).map(|k| f.eval(k as f64 / nf)).collect()
            }
            Variant::BetaBernstein => smoothed_coefficients(n, n, config.beta, f, quad)?,
            Variant::Generalized => smoothed_coefficients(n, n - 1, config.beta, f, quad)?,
        };
        Ok(Self { config, coeffs })
    }

    /// Operator with explicitly supplied coefficients (length `n + 1`).
    pub fn from_coefficients(config: OperatorConfig, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != config.n + 1 {
            return Err(domain(format!(
                "expected {} coefficients, got {}",
                config.n + 1,
                coeffs.len()
            )));
        }
        Ok(Self { config, coeffs })
    }

    pub fn config(&self) -> &OperatorConfig {
        &self.config
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        check_unit("x", x)?;
        let c = &self.config;
        let w = if c.q_weights() { q_row(c.n, c.alpha, x) } else { binom_row(c.n, x) };
        Ok(dot(&self.coeffs, &w))
    }

    /// First derivative in `x`; only for the operators built on `Q^(alpha)`.
    pub fn eval_deriv(&self, x: f64) -> Result<f64> {
        check_unit("x", x)?;
        let c = &self.config;
        if !c.q_weights() {
            return Err(Error::Unsupported(format!(
                "derivative of the {} operator",
                c.variant
            )));
        }
        Ok(dot(&self.coeffs, &q_deriv_row(c.n, c.alpha, x)))
    }
}

fn dot(c: &[f64], w: &[f64]) -> f64 {
    c.iter().zip(w).filter(|(_, w)| **w != 0.0).map(|(c, w)| c * w).sum()
}

/// `f(0), F_{d,1}(f), ..., F_{d,n-1}(f), f(1)`.
fn smoothed_coefficients(
    n: usize,
    degree: usize,
    beta: f64,
    f: &FunctionSpec,
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    let integrator = BetaIntegrator::new(*quad)?;
    let inner: Vec<f64> = (1..n)
        .into_par_iter()
        .map(|k| {
            let params = BetaParams::for_degree(degree, k, beta)?;
            Ok(integrator.expectation(&params, f)?.value)
        })
        .collect::<Result<_>>()?;
    let mut c = Vec::with_capacity(n + 1);
    c.push(f.eval(0.0));
    c.extend(inner);
    c.push(f.eval(1.0));
    Ok(c)
}

/// `config` applied to `f` at `x` with the default quadrature.
pub fn apply(config: &OperatorConfig, f: &FunctionSpec, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    Operator::new(*config, f, &QuadratureSpec::default())?.eval(x)
}

pub fn apply_deriv(config: &OperatorConfig, f: &FunctionSpec, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    if !config.q_weights() {
        return Err(Error::Unsupported(format!("derivative of the {} operator", config.variant)));
    }
    Operator::new(*config, f, &QuadratureSpec::default())?.eval_deriv(x)
}

/// Closed-form `L(t^j; x)` for the Bernstein operator and for the generalized
/// operator with `alpha = 1`.
pub fn moment_closed_form(config: &OperatorConfig, j: u32, x: f64) -> Result<f64> {
    check_unit("x", x)?;
    let nf = config.n as f64;
    match (config.variant, j) {
        (_, 0) if config.variant == Variant::Bernstein || is_alpha_one(config) => Ok(1.0),
        (Variant::Bernstein, 1) => Ok(x),
        (Variant::Bernstein, 2) => Ok(x * x + x * (1.0 - x) / nf),
        (Variant::Generalized, 1) if is_alpha_one(config) => {
            Ok(x + (x - x.powf(nf)) / (nf - 1.0))
        }
        (Variant::Generalized, 2) if is_alpha_one(config) => {
            let m = nf - 1.0;
            let m2 = m * m;
            let c = config.beta * config.beta / (m2 + 1.0);
            let phi2 = x * (1.0 - x);
            let xn = x.powf(nf);
            Ok(nf * nf / m2 * x * x + (nf / m2 + c * nf / m) * phi2 - c * nf / m2 * x
                + (c * nf / m2 - (2.0 * nf - 1.0) / m2) * xn)
        }
        _ => Err(Error::Unsupported(format!(
            "closed-form moment j = {j} for {} with alpha = {}",
            config.variant, config.alpha
        ))),
    }
}

/// Closed-form moment next to the direct sum it should equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub anchor: String,
    pub config: OperatorConfig,
    pub x: f64,
    pub j: u32,
    pub closed_form: f64,
    pub direct_sum: f64,
    pub abs_gap: f64,
}

pub fn moment_report(config: &OperatorConfig, j: u32, x: f64) -> Result<MomentReport> {
    let closed_form = moment_closed_form(config, j, x)?;
    let direct_sum = apply(config, &FunctionSpec::monomial(j as usize), x)?;
    let anchor = if config.variant == Variant::Bernstein { "Remark 3" } else { "Lemma 2" };
    Ok(MomentReport {
        anchor: anchor.into(),
        config: *config,
        x,
        j,
        closed_form,
        direct_sum,
        abs_gap: (closed_form - direct_sum).abs(),
    })
}

fn is_alpha_one(config: &OperatorConfig) -> bool {
    config.variant == Variant::Generalized && config.alpha == 1.0
}

/// `L((t - x)^2; x)` by direct summation.
pub fn central_second_moment(config: &OperatorConfig, x: f64) -> Result<f64> {
    apply(config, &FunctionSpec::centered_square(x), x)
}

/// Direct sums of the Bezier basis and the closed forms they are compared with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Sums {
    /// `1/(n-1) sum_{k=1}^{n-1} J_{n,k}(x)`.
    pub s1: f64,
    /// `(n x - x^n)/(n-1)`.
    pub s1_closed: f64,
    /// `1/(n-1)^2 sum_{k=1}^{n-1} k J_{n,k}(x)`.
    pub s2_direct: f64,
    /// `n x^2 / (2 (n-1))` as printed.
    pub s2: f64,
    /// `[(n^2 x^2 + n x (2 - x))/2 - n x^n] / (n-1)^2`.
    pub s2_corrected: f64,
}

pub fn lemma3_sums(n: usize, x: f64) -> Result<Lemma3Sums> {
    if n < 2 {
        return Err(domain(format!("n = {n} must be >= 2")));
    }
    check_unit("x", x)?;
    let j = bezier_row(&binom_row(n, x));
    let nf = n as f64;
    let m = nf - 1.0;
    let (mut a, mut b) = (0.0, 0.0);
    for (k, v) in j.iter().enumerate().take(n).skip(1) {
        a += v;
        b += k as f64 * v;
    }
    let xn = x.powf(nf);
    Ok(Lemma3Sums {
        s1: a / m,
        s1_closed: (nf * x - xn) / m,
        s2_direct: b / (m * m),
        s2: nf * x * x / (2.0 * m),
        s2_corrected: ((nf * nf * x * x + nf * x * (2.0 - x)) / 2.0 - nf * xn) / (m * m),
    })
}

/// Per-degree deviations of the two normalized `J^alpha` sums from their limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Row {
    pub n: usize,
    /// `sup_x |1/(n-1) sum J^alpha - x|`
    pub sum1_gap: f64,
    /// `sup_x |1/(n-1)^2 sum k J^alpha - x^2/2|`
    pub sum2_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Report {
    pub alpha: f64,
    pub rows: Vec<Lemma4Row>,
}

pub fn lemma4_limits(alpha: f64, xs: &[f64], ns: &[usize]) -> Result<Lemma4Report> {
    check_alpha(alpha)?;
    for &x in xs {
        check_unit("x", x)?;
    }
    let rows = ns
        .par_iter()
        .map(|&n| {
            if n < 2 {
                return Err(domain(format!("n = {n} must be >= 2")));
            }
            let m = (n - 1) as f64;
            let (mut g1, mut g2) = (0.0f64, 0.0f64);
            for &x in xs {
                let j = bezier_row(&binom_row(n, x));
                let (mut a, mut b) = (0.0, 0.0);
                for (k, v) in j.iter().enumerate().take(n).skip(1) {
                    let p = v.powf(alpha);
                    a += p;
                    b += k as f64 * p;
                }
                g1 = g1.max((a / m - x).abs());
                g2 = g2.max((b / (m * m) - x * x / 2.0).abs());
            }
            Ok(Lemma4Row { n, sum1_gap: g1, sum2_gap: g2 })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Lemma4Report { alpha, rows })
}

/// Largest increase from one entry to the next, as a ratio; a sequence that
/// decreases within `slack` gives at most `1 + slack`.
fn worst_growth(values: &[f64]) -> f64 {
    values
        .windows(2)
        .map(|w| if w[0] == 0.0 { if w[1] == 0.0 { 0.0 } else { f64::INFINITY } } else { w[1] / w[0] })
        .fold(0.0, f64::max)
}

impl Lemma4Report {
    pub fn checks(&self) -> Vec<CheckReport> {
        let mut out = Vec::new();
        for (label, pick) in [
            ("sum of J^alpha", (|r: &Lemma4Row| r.sum1_gap) as fn(&Lemma4Row) -> f64),
            ("sum of k J^alpha", |r: &Lemma4Row| r.sum2_gap),
        ] {
            let gaps: Vec<f64> = self.rows.iter().map(pick).collect();
            let mut w = Worst::new();
            w.offer(worst_growth(&gaps), Location::default().alpha(self.alpha));
            let anchor = if label.starts_with("sum of k") { "Lemma 4(2)" } else { "Lemma 4(1)" };
            out.push(
                CheckReport::at_most(&format!("{label} gaps decrease"), anchor, w, 1.05)
                    .note(format!("gaps by n: {:?}", gaps)),
            );
            if let Some(last) = self.rows.last().filter(|r| r.n >= 4096) {
                let mut w = Worst::new();
                w.offer(pick(last), Location::at_n(last.n).alpha(self.alpha));
                out.push(CheckReport::at_most(&format!("{label} limit"), anchor, w, 0.01));
            }
        }
        out
    }
}

/// `Q_{n,k}^(alpha) <= alpha p_{n,k}` as a ratio, over all `n`, `alpha`, `x`.
pub fn lemma5_check(ns: &[usize], alphas: &[f64], xs: &[f64]) -> Result<CheckReport> {
    for &a in alphas {
        check_alpha(a)?;
    }
    let cases: Vec<(usize, f64)> = ns.iter().flat_map(|&n| alphas.iter().map(move |&a| (n, a))).collect();
    let worst = cases
        .par_iter()
        .map(|&(n, alpha)| {
            let mut w = Worst::new();
            for &x in xs {
                let p = binom_row(n, x);
                let q = q_row(n, alpha, x);
                for k in 0..=n {
                    let at = Location::at_n(n).k(k).x(x).alpha(alpha);
                    let bound = alpha * p[k];
                    let ratio = if q[k] < 0.0 {
                        f64::INFINITY
                    } else if bound > 1e-290 {
                        q[k] / bound
                    } else if q[k] <= 1e-12 {
                        0.0
                    } else {
                        f64::INFINITY
                    };
                    w.offer(ratio, at);
                }
            }
            w
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Worst::new(), Worst::merge);
    Ok(CheckReport::at_most("generalized basis domination", "Lemma 5", worst, BOUND_SLACK))
}

/// Closed-form moments of the smoothing functional against direct evaluation.
pub fn lemma1_check(n_max: usize, betas: &[f64], quad: &QuadratureSpec) -> Result<CheckReport> {
    let integrator = BetaIntegrator::new(*quad)?;
    let monomials: Vec<FunctionSpec> = (0..3).map(FunctionSpec::monomial).collect();
    let cases: Vec<(usize, usize, f64)> = (2..=n_max)
        .flat_map(|n| (1..n).flat_map(move |k| betas.iter().map(move |&b| (n, k, b))))
        .collect();
    let worst = cases
        .par_iter()
        .map(|&(n, k, beta)| {
            let mut w = Worst::new();
            let params = BetaParams::for_degree(n - 1, k, beta)?;
            for (j, f) in monomials.iter().enumerate() {
                let direct = integrator.expectation(&params, f)?.value;
                let closed = f_functional_moment(n, k, beta, j as u32)?;
                w.offer((direct - closed).abs(), Location::at_n(n).k(k).j(j as u32).beta(beta));
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Worst::new(), Worst::merge);
    Ok(CheckReport::at_most("smoothing functional moments", "Lemma 1", worst, 1e-10))
}

/// Closed-form monomial moments of the `alpha = 1` generalized operator
/// against direct summation.
pub fn lemma2_check(ns: &[usize], betas: &[f64], xs: &[f64]) -> Result<CheckReport> {
    let quad = QuadratureSpec::default();
    let cases: Vec<(usize, f64, u32)> = ns
        .iter()
        .flat_map(|&n| betas.iter().flat_map(move |&b| (0..3).map(move |j| (n, b, j))))
        .collect();
    let rows = cases
        .par_iter()
        .map(|&(n, beta, j)| {
            let config = OperatorConfig::generalized(n, 1.0, beta)?;
            let op = Operator::new(config, &FunctionSpec::monomial(j as usize), &quad)?;
            let mut w = Worst::new();
            for &x in xs {
                let gap = (op.eval(x)? - moment_closed_form(&config, j, x)?).abs();
                w.offer(gap, config.location().x(x).j(j));
            }
            Ok(w)
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = rows.into_iter().fold(Worst::new(), Worst::merge);
    let mut report = CheckReport::at_most("operator monomial moments", "Lemma 2", worst, 1e-10);
    if let (false, Some(at)) = (report.pass, report.location) {
        let (n, beta, j) = (at.n.unwrap_or(2), at.beta.unwrap_or(0.0), at.j.unwrap_or(0));
        let config = OperatorConfig::generalized(n, 1.0, beta)?;
        let op = Operator::new(config, &FunctionSpec::monomial(j as usize), &quad)?;
        let residual: Vec<String> = [0.0, 0.25, 0.5, 0.75, 1.0]
            .iter()
            .map(|&x| Ok(format!("{x}: {:.3e}", moment_closed_form(&config, j, x)? - op.eval(x)?)))
            .collect::<Result<_>>()?;
        report = report.note(format!(
            "residual closed form minus direct sum at n = {n}, beta = {beta}, j = {j}: {}",
            residual.join(", ")
        ));
    }
    Ok(report)
}

/// Lemma 3 checks over `2 <= n <= n_max` and the grid `xs`.
pub fn lemma3_checks(n_max: usize, xs: &[f64]) -> Result<Vec<CheckReport>> {
    let per_n = (2..=n_max)
        .into_par_iter()
        .map(|n| {
            let (mut first, mut corrected) = (Worst::new(), Worst::new());
            for &x in xs {
                let s = lemma3_sums(n, x)?;
                let at = Location::at_n(n).x(x);
                first.offer((s.s1 - s.s1_closed).abs(), at);
                corrected.offer((s.s2_direct - s.s2_corrected).abs(), at);
            }
            Ok((first, corrected))
        })
        .collect::<Result<Vec<_>>>()?;
    let (first, corrected) = per_n
        .into_iter()
        .fold((Worst::new(), Worst::new()), |(a, b), (c, d)| (a.merge(c), b.merge(d)));

    let small = lemma3_sums(2, 0.5)?;
    let printed_gap = (small.s2_direct - small.s2).abs();
    let printed = CheckReport {
        name: "weighted sum printed form is not exact".into(),
        anchor: "Lemma 3(2)".into(),
        pass: printed_gap > 1e-10,
        gating: true,
        worst: printed_gap,
        limit: 1e-10,
        location: Some(Location::at_n(2).x(0.5)),
        evaluations: 1,
        notes: vec![format!(
            "direct sum {} vs printed value {} at n = 2, x = 0.5",
            small.s2_direct, small.s2
        )],
    };

    let n_ratio = 200;
    let big = lemma3_sums(n_ratio, 0.5)?;
    let ratio = big.s2_corrected / big.s2;
    let mut w = Worst::new();
    w.offer((ratio - 1.0).abs(), Location::at_n(n_ratio).x(0.5));
    // the exact ratio at x = 1/2 is (n + 3)/(n - 1), about 1.0201 at n = 200
    let convergence = CheckReport::at_most("weighted sum ratio to printed form", "Lemma 3(2)", w, 0.02)
        .note(format!("corrected / printed = {ratio:.6} at n = {n_ratio}, x = 0.5"))
        .informational();

    Ok(vec![
        CheckReport::at_most("bezier sum closed form", "Lemma 3(1)", first, 1e-10),
        CheckReport::at_most("weighted bezier sum corrected identity", "Lemma 3(2)", corrected, 1e-10),
        printed,
        convergence,
    ])
}

/// `sup_x |L(t^j) - x^j|` for `j = 0, 1, 2` at each degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KorovkinRow {
    pub n: usize,
    pub gaps: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KorovkinReport {
    pub config: OperatorConfig,
    pub rows: Vec<KorovkinRow>,
}

pub fn lemma6_korovkin(template: &OperatorConfig, ns: &[usize], xs: &[f64]) -> Result<KorovkinReport> {
    let quad = QuadratureSpec::default();
    let rows = ns
        .par_iter()
        .map(|&n| {
            let config = template.with_n(n)?;
            let mut gaps = [0.0f64; 3];
            for (j, gap) in gaps.iter_mut().enumerate() {
                let op = Operator::new(config, &FunctionSpec::monomial(j), &quad)?;
                for &x in xs {
                    let d = (op.eval(x)? - x.powi(j as i32)).abs();
                    if d.is_nan() || d > *gap {
                        *gap = d;
                    }
                }
            }
            Ok(KorovkinRow { n, gaps })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KorovkinReport { config: *template, rows })
}

impl KorovkinReport {
    pub fn checks(&self) -> Vec<CheckReport> {
        let c = &self.config;
        let base = Location::default().alpha(c.alpha).beta(c.beta);
        let mut exact = Worst::new();
        for r in &self.rows {
            exact.offer(r.gaps[0], Location { n: Some(r.n), j: Some(0), ..base });
        }
        let mut out = vec![CheckReport::at_most("constants reproduced", "Lemma 6(1)", exact, 1e-12)];
        for j in 1..3u32 {
            let gaps: Vec<f64> = self.rows.iter().map(|r| r.gaps[j as usize]).collect();
            let anchor = format!("Lemma 6({})", j + 1);
            let mut w = Worst::new();
            w.offer(worst_growth(&gaps), Location { j: Some(j), ..base });
            out.push(
                CheckReport::at_most(&format!("t^{j} gaps decrease"), &anchor, w, 1.05)
                    .note(format!("gaps by n: {gaps:?}")),
            );
            if let Some(last) = self.rows.last().filter(|r| r.n >= 4096) {
                let mut w = Worst::new();
                w.offer(last.gaps[j as usize], Location { n: Some(last.n), j: Some(j), ..base });
                out.push(CheckReport::at_most(&format!("t^{j} gap at largest n"), &anchor, w, 0.02));
            }
        }
        out
    }
}

/// Uniform grid of `points` values on `[a, b]`.
pub fn uniform(a: f64, b: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![a];
    }
    let step = (b - a) / (points - 1) as f64;
    let mut xs: Vec<f64> = (0..points).map(|i| a + step * i as f64).collect();
    xs[points - 1] = b;
    xs
}

/// The two central-moment bounds: `alpha (14 + beta^2) / (4 (n-1))` on
/// `[0, 1]` and `3 phi^2 / (n-1)` on `[1/n, 1 - 1/n]`, as worst ratios.
pub fn lemma7_worst(config: &OperatorConfig, points: usize) -> Result<(Worst, Worst)> {
    let n = config.n as f64;
    let quad = QuadratureSpec::default();
    let full_bound = config.alpha * (14.0 + config.beta * config.beta) / (4.0 * (n - 1.0));
    let moment = |x: f64| -> Result<f64> {
        Operator::new(*config, &FunctionSpec::centered_square(x), &quad)?.eval(x)
    };
    let mut full = Worst::new();
    for x in uniform(0.0, 1.0, points) {
        full.offer(moment(x)? / full_bound, config.location().x(x));
    }
    let mut interior = Worst::new();
    for x in uniform(1.0 / n, 1.0 - 1.0 / n, points) {
        let bound = 3.0 * phi(x)?.powi(2) / (n - 1.0);
        interior.offer(moment(x)? / bound, config.location().x(x));
    }
    Ok((full, interior))
}

pub fn lemma7_check(config: &OperatorConfig, points: usize) -> Result<[CheckReport; 2]> {
    let (a, b) = lemma7_worst(config, points)?;
    Ok(lemma7_reports(a, b))
}

fn lemma7_reports(full: Worst, interior: Worst) -> [CheckReport; 2] {
    [
        CheckReport::at_most("central second moment uniform bound", "Lemma 7(1)", full, BOUND_SLACK),
        CheckReport::at_most("central second moment interior bound", "Lemma 7(2)", interior, BOUND_SLACK),
    ]
}

/// Lemma 7 over every combination of the given parameters.
pub fn lemma7_sweep(ns: &[usize], alphas: &[f64], betas: &[f64], points: usize) -> Result<[CheckReport; 2]> {
    let mut configs = Vec::new();
    for &n in ns {
        for &a in alphas {
            for &b in betas {
                configs.push(OperatorConfig::generalized(n, a, b)?);
            }
        }
    }
    let parts = configs
        .par_iter()
        .map(|c| lemma7_worst(c, points))
        .collect::<Result<Vec<_>>>()?;
    let (full, interior) = parts
        .into_iter()
        .fold((Worst::new(), Worst::new()), |(a, b), (c, d)| (a.merge(c), b.merge(d)));
    Ok(lemma7_reports(full, interior))
}

/// With `beta = 0` the generalized operator samples `f(k/(n-1))`. Checks that
/// it equals the `Q`-weighted operator on those nodes, and reports its
/// distance from the one on nodes `k/n`.
pub fn beta_zero_reduction(n: usize, alpha: f64, f: &FunctionSpec, xs: &[f64]) -> Result<CheckReport> {
    let quad = QuadratureSpec::default();
    let general = Operator::new(OperatorConfig::generalized(n, alpha, 0.0)?, f, &quad)?;
    let bezier_config = OperatorConfig::new(Variant::BernsteinBezier, n, alpha, 0.0)?;
    let on_k_over_n = Operator::new(bezier_config, f, &quad)?;
    let m = (n - 1) as f64;
    let mut nodes: Vec<f64> = (0..n).map(|k| f.eval(k as f64 / m)).collect();
    nodes.push(f.eval(1.0));
    let on_k_over_n_minus_1 = Operator::from_coefficients(bezier_config, nodes)?;
    let mut same = Worst::new();
    let mut other = 0.0f64;
    for &x in xs {
        let g = general.eval(x)?;
        same.offer((g - on_k_over_n_minus_1.eval(x)?).abs(), Location::at_n(n).x(x).alpha(alpha));
        other = other.max((g - on_k_over_n.eval(x)?).abs());
    }
    Ok(CheckReport::at_most(&format!("beta = 0 reduces to bezier operator for {f}"), "beta = 0 reduction", same, 1e-12).note(
        format!("sup distance to the nodes k/n operator for {f}: {other:.6e}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, a: f64, b: f64) -> OperatorConfig {
        OperatorConfig::generalized(n, a, b).unwrap()
    }

    #[test]
    fn config_normalizes_ignored_parameters() {
        let a = OperatorConfig::new(Variant::Bernstein, 5, 3.0, 0.7).unwrap();
        assert_eq!(a, OperatorConfig::bernstein(5).unwrap());
        assert!(OperatorConfig::new(Variant::Generalized, 1, 1.0, 0.0).is_err());
        assert!(OperatorConfig::new(Variant::Generalized, 4, 0.9, 0.0).is_err());
        assert!(OperatorConfig::new(Variant::BetaBernstein, 4, 0.5, 1.5).is_err());
        assert_eq!("beta-bernstein".parse::<Variant>().unwrap(), Variant::BetaBernstein);
        assert!("bezier".parse::<Variant>().is_err());
    }

    #[test]
    fn apply_examples() {
        let f = FunctionSpec::sin_pi();
        assert_eq!(apply(&g(7, 2.5, 0.3), &f, 0.0).unwrap(), f.eval(0.0));
        let t = FunctionSpec::monomial(1);
        for beta in [0.0, 0.4, 1.0] {
            assert!((apply(&g(3, 1.0, beta), &t, 0.5).unwrap() - 0.6875).abs() < 1e-15);
        }
        let b = OperatorConfig::bernstein(10).unwrap();
        assert!((apply(&b, &t, 0.37).unwrap() - 0.37).abs() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let c = FunctionSpec::constant(2.5);
        for x in [0.0, 0.3, 1.0] {
            assert!(apply_deriv(&g(6, 2.0, 0.5), &c, x).unwrap().abs() < 1e-12);
        }
        let t = FunctionSpec::monomial(1);
        assert!((apply_deriv(&g(3, 1.0, 0.0), &t, 0.5).unwrap() - 1.125).abs() < 1e-14);
        let bb = OperatorConfig::new(Variant::BernsteinBezier, 2, 1.0, 0.0).unwrap();
        assert!((apply_deriv(&bb, &t, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let b = OperatorConfig::bernstein(4).unwrap();
        assert!(matches!(apply_deriv(&b, &t, 0.5), Err(Error::Unsupported(_))));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(moment_closed_form(&g(9, 1.0, 0.2), 0, 0.42).unwrap(), 1.0);
        assert!((moment_closed_form(&g(3, 1.0, 0.2), 1, 0.5).unwrap() - 0.6875).abs() < 1e-15);
        let b = OperatorConfig::bernstein(4).unwrap();
        assert!((moment_closed_form(&b, 2, 0.5).unwrap() - 0.3125).abs() < 1e-15);
        assert!(moment_closed_form(&g(5, 2.0, 0.2), 1, 0.5).is_err());
        assert!(moment_closed_form(&b, 3, 0.5).is_err());
    }

    #[test]
    fn central_moment_examples() {
        let b = OperatorConfig::bernstein(20).unwrap();
        assert!((central_second_moment(&b, 0.5).unwrap() - 0.0125).abs() < 1e-15);
        assert_eq!(central_second_moment(&g(8, 2.0, 0.5), 0.0).unwrap(), 0.0);
        let c = g(10, 1.0, 0.0);
        let x = 0.5;
        let assembled = moment_closed_form(&c, 2, x).unwrap()
            - 2.0 * x * moment_closed_form(&c, 1, x).unwrap()
            + x * x;
        assert!((central_second_moment(&c, x).unwrap() - assembled).abs() < 1e-10);
    }

    #[test]
    fn lemma3_examples() {
        let s = lemma3_sums(2, 0.5).unwrap();
        assert!((s.s1 - 0.75).abs() < 1e-15);
        assert!((s.s1_closed - 0.75).abs() < 1e-15);
        assert!((s.s2_direct - 0.75).abs() < 1e-15);
        assert!((s.s2_corrected - 0.75).abs() < 1e-15);
        assert!((s.s2 - 0.25).abs() < 1e-15);
        let z = lemma3_sums(9, 0.0).unwrap();
        assert_eq!((z.s1, z.s2, z.s2_corrected), (0.0, 0.0, 0.0));
    }

    #[test]
    fn lemma4_examples() {
        let xs = uniform(0.0, 1.0, 51);
        let r = lemma4_limits(1.0, &xs, &[16, 64, 256]).unwrap();
        for row in &r.rows {
            // gap to x is |x - x^n|/(n-1) <= 1/(n-1)
            assert!(row.sum1_gap <= 1.0 / (row.n - 1) as f64 + 1e-15);
        }
        let z = lemma4_limits(2.5, &[0.0], &[8]).unwrap();
        assert_eq!(z.rows[0].sum1_gap, 0.0);
        assert_eq!(z.rows[0].sum2_gap, 0.0);
    }

    #[test]
    fn lemma7_small_case_passes() {
        let [a, b] = lemma7_check(&g(10, 1.0, 0.0), 201).unwrap();
        assert!(a.pass && b.pass, "{a:?} {b:?}");
        assert!(a.worst <= 1.0);
    }

    #[test]
    fn beta_zero_reduction_is_exact() {
        let xs = uniform(0.0, 1.0, 41);
        let r = beta_zero_reduction(9, 2.0, &FunctionSpec::sin_pi(), &xs).unwrap();
        assert!(r.pass, "{r:?}");
        assert!(r.notes[0].contains("k/n"));
    }

    #[test]
    fn beta_bernstein_reproduces_linear_functions() {
        let c = OperatorConfig::new(Variant::BetaBernstein, 12, 1.0, 0.6).unwrap();
        let f = FunctionSpec::poly(&[0.2, -0.7]);
        for x in [0.0, 0.31, 0.8, 1.0] {
            assert!((apply(&c, &f, x).unwrap() - f.eval(x)).abs() < 1e-14);
        }
    }
}
