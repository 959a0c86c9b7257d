//! Command-line front end.
//!
//! Exit status: 0 on success, 1 when a gating check fails, 2 on usage or I/O
//! errors. All files are written after the computation has finished.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::experiments::{self, Suite};
use crate::function::FunctionSpec;
use crate::operators::{self, Operator, OperatorConfig, Variant};
use crate::plot::loglog_svg;
use crate::report::{CheckReport, Envelope};
use crate::smoothness::{default_steps, modulus_exponent, GridSpec};
use crate::beta_functional::QuadratureSpec;

#[derive(Debug, Parser)]
#[command(name = "bbops", version, about = "Generalized Bernstein-Bezier operators and their numerical checks")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an operator (or its derivative) applied to a function
    Eval {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        n: usize,
        #[arg(long = "fn", value_parser = parse_function)]
        f: FunctionSpec,
        /// Evaluation points, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        /// Evaluate the first derivative instead
        #[arg(long)]
        deriv: bool,
        #[command(flatten)]
        out: Outputs,
    },
    /// Closed-form monomial moments against direct summation
    Moments {
        #[command(flatten)]
        op: OpArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.25, 0.5, 0.75, 1.0])]
        x: Vec<f64>,
        /// Largest accepted gap
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: Outputs,
    },
    /// Uniform error against n and the fitted log-log slope
    Rate {
        #[command(flatten)]
        op: OpArgs,
        /// Degrees: a:b:x2, a:b:+d or a comma list
        #[arg(long, value_parser = parse_n_list)]
        n: NList,
        #[arg(long = "fn", value_parser = parse_function)]
        f: FunctionSpec,
        #[arg(long, value_parser = parse_grid, default_value = "2001:40")]
        grid: GridSpec,
        /// Expected slope; when given the fit is checked against it
        #[arg(long, allow_negative_numbers = true)]
        expect: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        tol: f64,
        #[command(flatten)]
        out: Outputs,
    },
    /// Ditzian-Totik moduli over a list of steps and their fitted exponent
    Modulus {
        #[arg(long = "fn", value_parser = parse_function)]
        f: FunctionSpec,
        #[arg(long, default_value_t = 0.0)]
        lambda: f64,
        /// Steps, comma separated (default 2^-3 .. 2^-12)
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, value_parser = parse_grid, default_value = "2001:40")]
        grid: GridSpec,
        #[command(flatten)]
        out: Outputs,
    },
    /// Run a suite of identity and inequality checks
    Verify {
        #[arg(long, value_parser = parse_suite, default_value = "all")]
        suite: Suite,
        #[arg(long, value_parser = parse_grid, default_value = "2001:40")]
        grid: GridSpec,
        #[command(flatten)]
        out: Outputs,
    },
    /// Compare the convergence exponent with the modulus exponent
    Equiv {
        #[arg(long = "fn", value_parser = parse_function)]
        f: FunctionSpec,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        #[arg(long, value_parser = parse_n_list, default_value = "16:8192:x2")]
        n: NList,
        #[arg(long, value_delimiter = ',')]
        t: Vec<f64>,
        #[arg(long, value_parser = parse_grid, default_value = "2001:40")]
        grid: GridSpec,
        /// Largest accepted |2 r - g|
        #[arg(long, default_value_t = experiments::EQUIVALENCE_TOLERANCE)]
        tol: f64,
        #[command(flatten)]
        out: Outputs,
    },
}

#[derive(Debug, Args)]
struct OpArgs {
    /// bernstein | bernstein-bezier | beta-bernstein | generalized
    #[arg(long, value_parser = parse_variant, default_value = "generalized")]
    op: Variant,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

impl OpArgs {
    fn config(&self, n: usize) -> Result<OperatorConfig> {
        OperatorConfig::new(self.op, n, self.alpha, self.beta)
    }
}

#[derive(Debug, Args)]
struct Outputs {
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

/// A parsed list of degrees.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NList(pub Vec<usize>);

fn parse_function(s: &str) -> std::result::Result<FunctionSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `points` or `points:refine`.
fn parse_grid(s: &str) -> std::result::Result<GridSpec, String> {
    let bad = |why: &str| format!("cannot parse grid `{s}`: {why}");
    let (p, r) = s.split_once(':').unwrap_or((s, "40"));
    let points = p.trim().parse().map_err(|_| bad("points must be an integer"))?;
    let refine = r.trim().parse().map_err(|_| bad("refine must be an integer"))?;
    GridSpec::new(points, refine).map_err(|e| bad(&e.to_string()))
}

/// `a:b:x2` (geometric), `a:b:+d` (arithmetic) or `n1,n2,...`.
pub fn parse_n_list(s: &str) -> std::result::Result<NList, String> {
    let bad = |why: &str| format!("cannot parse n-list `{s}`: {why}");
    let int = |t: &str| t.trim().parse::<usize>().map_err(|_| bad(&format!("`{t}` is not an integer")));
    let ns = match s.split(':').collect::<Vec<_>>().as_slice() {
        [a, b, step] => {
            let (a, b) = (int(a)?, int(b)?);
            if a > b {
                return Err(bad("start exceeds end"));
            }
            if let Some(r) = step.strip_prefix('x') {
                let r = int(r)?;
                if r < 2 {
                    return Err(bad("ratio must be at least 2"));
                }
                std::iter::successors(Some(a), |&n| n.checked_mul(r)).take_while(|&n| n <= b).collect()
            } else if let Some(d) = step.strip_prefix('+') {
                let d = int(d)?;
                if d == 0 {
                    return Err(bad("increment must be positive"));
                }
                (a..=b).step_by(d).collect()
            } else {
                return Err(bad("step must be xR or +D"));
            }
        }
        [single] => single.split(',').map(int).collect::<std::result::Result<Vec<_>, _>>()?,
        _ => return Err(bad("expected a:b:xR, a:b:+D or a comma list")),
    };
    if ns.is_empty() {
        return Err(bad("empty list"));
    }
    if ns.iter().any(|&n| n < 2) {
        return Err(bad("every degree must be at least 2"));
    }
    if ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(bad("degrees must be strictly increasing"));
    }
    Ok(NList(ns))
}

/// Shortest decimal form with at most 14 fractional digits.
pub fn format_value(v: f64) -> String {
    let s = format!("{v:.14}");
    if !v.is_finite() || !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

/// Files to write once the run has finished.
#[derive(Default)]
struct Pending {
    files: Vec<(PathBuf, Vec<u8>)>,
}

impl Pending {
    fn json<R: Serialize>(&mut self, path: &Option<PathBuf>, command: &str, params: serde_json::Value, reports: Vec<R>) -> Result<()> {
        if let Some(p) = path {
            let doc = Envelope::new(command, params, reports);
            let bytes = serde_json::to_vec_pretty(&doc).map_err(|e| io_error(p, e))?;
            self.files.push((p.clone(), bytes));
        }
        Ok(())
    }

    fn csv<T: Serialize>(&mut self, path: &Option<PathBuf>, rows: &[T]) -> Result<()> {
        if let Some(p) = path {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| io_error(p, e))?;
            }
            let bytes = w.into_inner().map_err(|e| io_error(p, e))?;
            self.files.push((p.clone(), bytes));
        }
        Ok(())
    }

    fn svg(&mut self, path: &Option<PathBuf>, doc: impl FnOnce() -> String) {
        if let Some(p) = path {
            self.files.push((p.clone(), doc().into_bytes()));
        }
    }

    fn flush(self) -> Result<()> {
        for (path, bytes) in self.files {
            fs::write(&path, bytes).map_err(|e| io_error(&path, e))?;
        }
        Ok(())
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io(std::io::Error::other(format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct ValueRow {
    x: f64,
    value: f64,
}

#[derive(Serialize)]
struct EvalReport<'a> {
    anchor: &'static str,
    config: OperatorConfig,
    f: &'a str,
    derivative: bool,
    rows: &'a [ValueRow],
}

#[derive(Serialize)]
struct RateCsvRow {
    n: usize,
    sup_error: f64,
}

#[derive(Serialize)]
struct ModulusCsvRow {
    t: f64,
    omega: f64,
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    configure_threads();
    match execute(cli.command) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

/// Caps rayon's pool at `BBOPS_THREADS` when that is a positive integer.
fn configure_threads() {
    if let Some(n) = std::env::var("BBOPS_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        if n > 0 {
            // a pool may already exist when running inside tests
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

/// Returns whether every gating check passed.
fn execute(command: Command) -> Result<bool> {
    let mut pending = Pending::default();
    let ok = match command {
        Command::Eval { op, n, f, x, deriv, out } => {
            let config = op.config(n)?;
            let operator = Operator::new(config, &f, &QuadratureSpec::default())?;
            let rows = x
                .iter()
                .map(|&x| {
                    let value = if deriv { operator.eval_deriv(x)? } else { operator.eval(x)? };
                    Ok(ValueRow { x, value })
                })
                .collect::<Result<Vec<_>>>()?;
            for r in &rows {
                if rows.len() == 1 {
                    println!("{}", format_value(r.value));
                } else {
                    println!("{} {}", format_value(r.x), format_value(r.value));
                }
            }
            pending.csv(&out.csv, &rows)?;
            let params = json!({ "config": config, "fn": f.label(), "x": x, "deriv": deriv });
            let report = EvalReport {
                anchor: if deriv { "derivative formula" } else { "operator definition" },
                config,
                f: f.label(),
                derivative: deriv,
                rows: &rows,
            };
            pending.json(&out.json, "eval", params, vec![report])?;
            true
        }
        Command::Moments { op, n, x, tol, out } => {
            let config = op.config(n)?;
            let mut reports = Vec::new();
            for &xv in &x {
                for j in 0..3 {
                    reports.push(operators::moment_report(&config, j, xv)?);
                }
            }
            println!("x j closed_form direct_sum abs_gap");
            for r in &reports {
                println!("{} {} {} {} {:.3e}", format_value(r.x), r.j, format_value(r.closed_form), format_value(r.direct_sum), r.abs_gap);
            }
            let ok = reports.iter().all(|r| r.abs_gap <= tol);
            #[derive(Serialize)]
            struct Row {
                x: f64,
                j: u32,
                closed_form: f64,
                direct_sum: f64,
                abs_gap: f64,
            }
            let rows: Vec<Row> = reports
                .iter()
                .map(|r| Row { x: r.x, j: r.j, closed_form: r.closed_form, direct_sum: r.direct_sum, abs_gap: r.abs_gap })
                .collect();
            pending.csv(&out.csv, &rows)?;
            pending.json(&out.json, "moments", json!({ "config": config, "x": x, "tol": tol }), reports)?;
            ok
        }
        Command::Rate { op, n, f, grid, expect, tol, out } => {
            let template = op.config(n.0[0])?;
            let report = experiments::convergence_table(&template, &f, &n.0, &grid)?;
            println!("n sup_error");
            for r in &report.rows {
                println!("{} {:.6e}", r.n, r.sup_error);
            }
            match report.slope {
                Some(s) => println!("slope {s:.4} (r2 {:.4})", report.r2.unwrap_or(f64::NAN)),
                None => println!("slope undefined"),
            }
            let check = expect.map(|e| report.slope_check(e, tol));
            if let Some(c) = &check {
                println!("{}", c.summary_line());
            }
            let rows: Vec<RateCsvRow> = report.rows.iter().map(|r| RateCsvRow { n: r.n, sup_error: r.sup_error }).collect();
            pending.csv(&out.csv, &rows)?;
            pending.svg(&out.svg, || {
                let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.sup_error)).collect();
                loglog_svg(&format!("uniform error of {} for {}", template.variant, f.label()), "n", "sup error", &pts)
            });
            let params = json!({ "config": template, "fn": f.label(), "n": n.0, "grid": grid, "expect": expect, "tol": tol });
            let mut reports = vec![serde_json::to_value(&report).map_err(|e| Error::Unsupported(e.to_string()))?];
            if let Some(c) = &check {
                reports.push(serde_json::to_value(c).map_err(|e| Error::Unsupported(e.to_string()))?);
            }
            pending.json(&out.json, "rate", params, reports)?;
            check.is_none_or(|c| c.acceptable())
        }
        Command::Modulus { f, lambda, t, grid, out } => {
            let ts = if t.is_empty() { default_steps() } else { t };
            let report = modulus_exponent(&f, lambda, &ts, &grid)?;
            println!("t omega");
            for (t, w) in &report.rows {
                println!("{t:.6e} {w:.6e}");
            }
            println!("exponent {:.4} (r2 {:.4})", report.gamma_hat, report.r2);
            let rows: Vec<ModulusCsvRow> = report.rows.iter().map(|&(t, omega)| ModulusCsvRow { t, omega }).collect();
            pending.csv(&out.csv, &rows)?;
            pending.svg(&out.svg, || {
                loglog_svg(&format!("modulus of {} (lambda = {lambda})", f.label()), "t", "omega", &report.rows)
            });
            pending.json(&out.json, "modulus", json!({ "fn": f.label(), "lambda": lambda, "t": ts, "grid": grid }), vec![report])?;
            true
        }
        Command::Verify { suite, grid, out } => {
            let reports = experiments::run_suite(suite, &grid)?;
            for r in &reports {
                println!("{}", r.summary_line());
            }
            let failed = reports.iter().filter(|r| !r.acceptable()).count();
            println!("{} checks, {failed} failed", reports.len());
            write_check_csv(&mut pending, &out.csv, &reports)?;
            pending.json(&out.json, "verify", json!({ "suite": suite, "grid": grid }), reports)?;
            failed == 0
        }
        Command::Equiv { f, lambda, alpha, beta, n, t, grid, tol, out } => {
            let ts = if t.is_empty() { default_steps() } else { t };
            let mut report = experiments::equivalence_check(&f, lambda, alpha, beta, &n.0, &ts, &grid)?;
            report.pass = report.gap <= tol;
            println!(
                "rate exponent {:.4}, modulus exponent {:.4}, gap {:.4} (tolerance {tol})",
                report.rate_exponent, report.modulus_exponent, report.gap
            );
            let rows: Vec<RateCsvRow> =
                report.rate.rows.iter().map(|r| RateCsvRow { n: r.n, sup_error: r.sup_error }).collect();
            pending.csv(&out.csv, &rows)?;
            pending.svg(&out.svg, || {
                let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.sup_error)).collect();
                loglog_svg(&format!("uniform error for {}", f.label()), "n", "sup error", &pts)
            });
            let params = json!({ "fn": f.label(), "lambda": lambda, "alpha": alpha, "beta": beta, "n": n.0, "t": ts, "tol": tol });
            let pass = report.pass;
            pending.json(&out.json, "equiv", params, vec![report])?;
            pass
        }
    };
    pending.flush()?;
    Ok(ok)
}

fn write_check_csv(pending: &mut Pending, path: &Option<PathBuf>, reports: &[CheckReport]) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        name: &'a str,
        anchor: &'a str,
        pass: bool,
        gating: bool,
        worst: f64,
        limit: f64,
    }
    let rows: Vec<Row> = reports
        .iter()
        .map(|r| Row { name: &r.name, anchor: &r.anchor, pass: r.pass, gating: r.gating, worst: r.worst, limit: r.limit })
        .collect();
    pending.csv(path, &rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_list_grammar() {
        assert_eq!(parse_n_list("16:128:x2").unwrap().0, vec![16, 32, 64, 128]);
        assert_eq!(parse_n_list("2:10:+4").unwrap().0, vec![2, 6, 10]);
        assert_eq!(parse_n_list("4,9,20").unwrap().0, vec![4, 9, 20]);
        assert_eq!(parse_n_list("16:100:x3").unwrap().0, vec![16, 48]);
        for bad in ["", "1:8:x2", "8:4:x2", "4:8:x1", "4:8:+0", "4:8:*2", "a:8:x2", "8,4", "4:8"] {
            assert!(parse_n_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn grid_grammar() {
        assert_eq!(parse_grid("501").unwrap(), GridSpec { points: 501, refine: 40 });
        assert_eq!(parse_grid("101:0").unwrap(), GridSpec { points: 101, refine: 0 });
        assert!(parse_grid("5").is_err());
        assert!(parse_grid("x").is_err());
    }

    #[test]
    fn value_formatting() {
        assert_eq!(format_value(0.36999999999999994), "0.37");
        assert_eq!(format_value(0.37000000000000005), "0.37");
        assert_eq!(format_value(1.0), "1");
        assert_eq!(format_value(-0.0), "0");
        assert_eq!(format_value(0.6875), "0.6875");
        assert_eq!(format_value(-2.5e-4), "-0.00025");
    }
}
