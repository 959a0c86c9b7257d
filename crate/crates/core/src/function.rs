//! Continuous test functions on [0, 1] and their token grammar.
//!
//! ```text
//! poly:c0,c1,...   c0 + c1 t + c2 t^2 + ...
//! holder:g         |t - 1/2|^g,  0 < g <= 1
//! abs_half         |t - 1/2|
//! sin_pi           sin(pi t)
//! exp_x            exp(t)
//! csv:<path>       piecewise-linear interpolant of `x,value` rows
//! ```

use std::f64::consts::PI;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Polynomial in powers of `(t - center)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
    center: f64,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self::centered(coeffs, 0.0)
    }

    pub fn centered(mut coeffs: Vec<f64>, center: f64) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs, center }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, t: f64) -> f64 {
        let u = t - self.center;
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u + c)
    }

    pub fn derivative(&self) -> Polynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect();
        Polynomial::centered(coeffs, self.center)
    }

    /// Coefficients of the same polynomial in powers of `(t - new_center)`.
    pub fn shifted(&self, new_center: f64) -> Vec<f64> {
        // repeated synthetic division by (u - delta) with u = t - center
        let delta = new_center - self.center;
        let mut c = self.coeffs.clone();
        let d = c.len();
        for i in 0..d {
            for j in (i..d - 1).rev() {
                c[j] += delta * c[j + 1];
            }
        }
        c
    }
}

/// Piecewise-linear interpolant of ingested samples; the domain is exactly [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Sampled {
    path: String,
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Sampled {
    pub fn from_points(path: impl Into<String>, mut pts: Vec<(f64, f64)>) -> Result<Self> {
        let path = path.into();
        let fail = |reason: String| Error::Ingest { path: path.clone(), reason };
        if pts.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(fail("non-finite sample".into()));
        }
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        pts.dedup();
        if pts.len() < 2 {
            return Err(fail("need at least two distinct samples".into()));
        }
        if let Some(w) = pts.windows(2).find(|w| w[0].0 >= w[1].0) {
            return Err(fail(format!("x not strictly increasing at x = {}", w[1].0)));
        }
        if pts[0].0 != 0.0 || pts[pts.len() - 1].0 != 1.0 {
            return Err(fail(format!(
                "x-range [{}, {}] must have endpoints 0 and 1",
                pts[0].0,
                pts[pts.len() - 1].0
            )));
        }
        let (xs, ys) = pts.into_iter().unzip();
        Ok(Self { path, xs, ys })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let shown = path.display().to_string();
        let fail = |reason: String| Error::Ingest { path: shown.clone(), reason };
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| fail(e.to_string()))?;
        let mut pts = Vec::new();
        for (row, rec) in reader.records().enumerate() {
            let rec = rec.map_err(|e| fail(e.to_string()))?;
            if rec.len() != 2 {
                return Err(fail(format!("row {} has {} columns, expected 2", row + 1, rec.len())));
            }
            match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
                (Ok(x), Ok(y)) => pts.push((x, y)),
                // a non-numeric first row is a header
                _ if row == 0 => continue,
                _ => return Err(fail(format!("row {} is not numeric", row + 1))),
            }
        }
        Self::from_points(shown, pts)
    }

    pub fn path(&self) -> &str {
        &self.path
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let i = self.xs.partition_point(|&x| x <= t).clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (t - x0) / (x1 - x0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Poly(Polynomial),
    /// `|t - 1/2|^gamma`
    Holder(f64),
    AbsHalf,
    SinPi,
    ExpX,
    Sampled(Sampled),
    /// `pi cos(pi t)`
    CosPi,
    /// `sign(t - 1/2)`
    Step,
}

/// A point where a function is not smooth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub at: f64,
    /// The derivative is unbounded here, so quadrature panels are graded toward it.
    pub singular: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSpec {
    kind: Kind,
    derivative: Option<Box<FunctionSpec>>,
    w_lambda_member: bool,
    label: String,
}

impl FunctionSpec {
    fn build(kind: Kind, derivative: Option<FunctionSpec>, w_lambda: bool, label: String) -> Self {
        Self { kind, derivative: derivative.map(Box::new), w_lambda_member: w_lambda, label }
    }

    pub fn polynomial(p: Polynomial) -> Self {
        let label = if p.center() == 0.0 {
            format!("poly:{}", join(p.coeffs()))
        } else {
            format!("poly[t-{}]:{}", p.center(), join(p.coeffs()))
        };
        let d = p.derivative();
        let d_label = format!("d/dt {label}");
        let deriv = Self::build(Kind::Poly(d), None, true, d_label);
        Self::build(Kind::Poly(p), Some(deriv), true, label)
    }

    pub fn poly(coeffs: &[f64]) -> Self {
        Self::polynomial(Polynomial::new(coeffs.to_vec()))
    }

    pub fn constant(c: f64) -> Self {
        Self::poly(&[c])
    }

    /// `t^j`.
    pub fn monomial(j: usize) -> Self {
        let mut c = vec![0.0; j + 1];
        c[j] = 1.0;
        Self::poly(&c)
    }

    /// `(t - x)^2`.
    pub fn centered_square(x: f64) -> Self {
        Self::polynomial(Polynomial::centered(vec![0.0, 0.0, 1.0], x))
    }

    pub fn holder(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::Parse {
                token: format!("holder:{gamma}"),
                reason: "exponent must lie in (0, 1]".into(),
            });
        }
        let label = format!("holder:{gamma}");
        if gamma == 1.0 {
            let step = Self::build(Kind::Step, None, false, "sign(t-1/2)".into());
            return Ok(Self::build(Kind::Holder(1.0), Some(step), true, label));
        }
        Ok(Self::build(Kind::Holder(gamma), None, false, label))
    }

    pub fn abs_half() -> Self {
        let step = Self::build(Kind::Step, None, false, "sign(t-1/2)".into());
        Self::build(Kind::AbsHalf, Some(step), true, "abs_half".into())
    }

    pub fn sin_pi() -> Self {
        let d = Self::build(Kind::CosPi, None, true, "pi*cos(pi t)".into());
        Self::build(Kind::SinPi, Some(d), true, "sin_pi".into())
    }

    pub fn exp_x() -> Self {
        let d = Self::build(Kind::ExpX, None, true, "exp_x".into());
        Self::build(Kind::ExpX, Some(d), true, "exp_x".into())
    }

    pub fn sampled(s: Sampled) -> Self {
        let label = format!("csv:{}", s.path());
        Self::build(Kind::Sampled(s), None, false, label)
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn derivative(&self) -> Option<&FunctionSpec> {
        self.derivative.as_deref()
    }

    pub fn is_w_lambda_member(&self) -> bool {
        self.w_lambda_member
    }

    pub fn is_continuous(&self) -> bool {
        !matches!(self.kind, Kind::Step)
    }

    /// True when a derivative is registered and is itself continuous.
    pub fn is_c1(&self) -> bool {
        self.derivative().is_some_and(FunctionSpec::is_continuous)
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.kind {
            Kind::Poly(p) => Some(p),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.as_polynomial().map(Polynomial::degree)
    }

    pub fn eval(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Poly(p) => p.eval(t),
            Kind::Holder(g) => (t - 0.5).abs().powf(*g),
            Kind::AbsHalf => (t - 0.5).abs(),
            Kind::SinPi => (PI * t).sin(),
            Kind::ExpX => t.exp(),
            Kind::Sampled(s) => s.eval(t),
            Kind::CosPi => PI * (PI * t).cos(),
            Kind::Step => {
                if t > 0.5 {
                    1.0
                } else if t < 0.5 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn breakpoints(&self) -> Vec<Breakpoint> {
        match &self.kind {
            Kind::Holder(g) => vec![Breakpoint { at: 0.5, singular: *g < 1.0 }],
            Kind::AbsHalf | Kind::Step => vec![Breakpoint { at: 0.5, singular: false }],
            Kind::Sampled(s) => {
                let k = s.knots();
                k[1..k.len() - 1].iter().map(|&at| Breakpoint { at, singular: false }).collect()
            }
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn join(c: &[f64]) -> String {
    c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_real(token: &str, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse {
        token: token.to_string(),
        reason: format!("`{s}` is not a real number"),
    })?;
    if !v.is_finite() {
        return Err(Error::Parse { token: token.to_string(), reason: "value must be finite".into() });
    }
    Ok(v)
}

impl FromStr for FunctionSpec {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let token = token.trim();
        let (head, rest) = match token.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (token, None),
        };
        match (head, rest) {
            ("poly", Some(list)) => {
                let coeffs = list
                    .split(',')
                    .map(|s| parse_real(token, s))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Self::poly(&coeffs))
            }
            ("holder", Some(g)) => Self::holder(parse_real(token, g)?).map_err(|e| match e {
                Error::Parse { reason, .. } => Error::Parse { token: token.to_string(), reason },
                other => other,
            }),
            ("abs_half", None) => Ok(Self::abs_half()),
            ("sin_pi", None) => Ok(Self::sin_pi()),
            ("exp_x", None) => Ok(Self::exp_x()),
            ("csv", Some(path)) if !path.is_empty() => {
                Ok(Self::sampled(Sampled::read(Path::new(path))?))
            }
            _ => Err(Error::Parse {
                token: token.to_string(),
                reason: "expected poly:c0,c1,... | holder:g | abs_half | sin_pi | exp_x | csv:<path>"
                    .into(),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let f: FunctionSpec = "poly:0,0,1".parse().unwrap();
        assert_eq!(f.eval(0.3), 0.09);
        assert_eq!(f.degree(), Some(2));
        let h: FunctionSpec = "holder:0.5".parse().unwrap();
        assert!((h.eval(0.75) - 0.5).abs() < 1e-15);
        assert!(!h.is_w_lambda_member());
        assert!(h.derivative().is_none());
        assert!(matches!(
            "csv:missing.csv".parse::<FunctionSpec>(),
            Err(Error::Ingest { .. })
        ));
    }

    #[test]
    fn parse_errors_name_the_token() {
        for bad in ["poly:", "poly:1,x", "holder:0", "holder:1.5", "tan", "sin_pi:3", "csv:"] {
            match bad.parse::<FunctionSpec>() {
                Err(Error::Parse { token, .. }) => assert_eq!(token, bad),
                other => panic!("{bad}: {other:?}"),
            }
        }
    }

    #[test]
    fn registry_derivatives() {
        let s = FunctionSpec::sin_pi();
        assert!(s.is_c1());
        assert!((s.derivative().unwrap().eval(0.0) - PI).abs() < 1e-15);
        let a = FunctionSpec::abs_half();
        assert!(a.is_w_lambda_member());
        assert!(!a.is_c1());
        let p: FunctionSpec = "poly:0,1,-1".parse().unwrap();
        assert_eq!(p.derivative().unwrap().eval(0.25), 0.5);
    }

    #[test]
    fn taylor_shift() {
        let p = Polynomial::new(vec![1.0, -2.0, 0.5, 3.0]);
        let c = 0.37;
        let q = Polynomial::centered(p.shifted(c), c);
        for t in [0.0, 0.2, 0.9, 1.0] {
            assert!((p.eval(t) - q.eval(t)).abs() < 1e-14);
        }
    }

    #[test]
    fn sampled_interpolates_and_validates() {
        let s = Sampled::from_points("mem", vec![(1.0, 2.0), (0.0, 0.0), (0.5, 0.0), (0.5, 0.0)])
            .unwrap();
        assert_eq!(s.eval(0.25), 0.0);
        assert_eq!(s.eval(0.75), 1.0);
        assert_eq!(s.eval(1.0), 2.0);
        assert!(Sampled::from_points("mem", vec![(0.0, 0.0), (0.9, 1.0)]).is_err());
        assert!(Sampled::from_points("mem", vec![(0.0, 0.0), (0.5, 1.0), (0.5, 2.0), (1.0, 0.0)])
            .is_err());
    }
}
