//! Structured check results and the JSON envelope written by the CLI.

use serde::{Deserialize, Serialize};

/// Multiplicative slack allowed on inequality checks.
pub const BOUND_SLACK: f64 = 1.0 + 1e-9;

/// Where a check attained its worst value.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Location {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

impl Location {
    pub fn at_n(n: usize) -> Self {
        Self { n: Some(n), ..Self::default() }
    }

    pub fn x(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    pub fn k(mut self, k: usize) -> Self {
        self.k = Some(k);
        self
    }

    pub fn j(mut self, j: u32) -> Self {
        self.j = Some(j);
        self
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn lambda(mut self, lambda: f64) -> Self {
        self.lambda = Some(lambda);
        self
    }
}

/// Running maximum with the location that produced it. NaN always wins so
/// that a broken evaluation can never hide behind a finite maximum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Worst {
    pub value: f64,
    pub location: Option<Location>,
    pub count: usize,
}

impl Worst {
    pub fn new() -> Self {
        Self { value: f64::NEG_INFINITY, location: None, count: 0 }
    }

    pub fn offer(&mut self, value: f64, at: Location) {
        self.count += 1;
        if self.value.is_nan() {
            return;
        }
        if value.is_nan() || value > self.value {
            self.value = value;
            self.location = Some(at);
        }
    }

    pub fn merge(mut self, other: Worst) -> Worst {
        let count = self.count + other.count;
        if !self.value.is_nan() && (other.value.is_nan() || other.value > self.value) {
            self = other;
        }
        self.count = count;
        self
    }

    /// The maximum, or 0 when nothing was offered.
    pub fn max(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.value
        }
    }
}

/// Outcome of one numerical check of an identity or inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// The result being checked, e.g. "Lemma 7(2)".
    pub anchor: String,
    pub pass: bool,
    /// Non-gating checks are informational and never change the exit status.
    pub gating: bool,
    /// Largest observed gap or ratio.
    pub worst: f64,
    /// Threshold `worst` is compared with.
    pub limit: f64,
    pub location: Option<Location>,
    pub evaluations: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckReport {
    /// Passes when the observed maximum is at most `limit`.
    pub fn at_most(name: &str, anchor: &str, worst: Worst, limit: f64) -> Self {
        let value = worst.max();
        Self {
            name: name.to_string(),
            anchor: anchor.to_string(),
            pass: value <= limit,
            gating: true,
            worst: value,
            limit,
            location: worst.location,
            evaluations: worst.count,
            notes: Vec::new(),
        }
    }

    pub fn informational(mut self) -> Self {
        self.gating = false;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// True unless this is a failed gating check.
    pub fn acceptable(&self) -> bool {
        self.pass || !self.gating
    }

    pub fn summary_line(&self) -> String {
        let status = match (self.pass, self.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "NOTE",
        };
        format!(
            "{status} {:<44} {:<28} worst {:.6e} limit {:.6e}",
            self.name, self.anchor, self.worst, self.limit
        )
    }
}

/// Top-level JSON document written by every subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<R> {
    pub tool_version: String,
    pub command: String,
    pub params: serde_json::Value,
    pub reports: Vec<R>,
}

impl<R> Envelope<R> {
    pub fn new(command: &str, params: serde_json::Value, reports: Vec<R>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            params,
            reports,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worst_keeps_nan() {
        let mut w = Worst::new();
        w.offer(1.0, Location::at_n(2));
        w.offer(f64::NAN, Location::at_n(3));
        w.offer(5.0, Location::at_n(4));
        assert!(w.max().is_nan());
        assert_eq!(w.location.unwrap().n, Some(3));
        let r = CheckReport::at_most("x", "y", w, 1.0);
        assert!(!r.pass);
    }

    #[test]
    fn merge_counts_and_picks_larger() {
        let mut a = Worst::new();
        a.offer(1.0, Location::at_n(1));
        let mut b = Worst::new();
        b.offer(2.0, Location::at_n(2));
        b.offer(0.5, Location::at_n(3));
        let m = a.merge(b);
        assert_eq!(m.count, 3);
        assert_eq!(m.max(), 2.0);
        assert_eq!(Worst::new().max(), 0.0);
    }
}
