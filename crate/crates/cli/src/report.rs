use std::fmt::Write;

use serde::{Deserialize, Serialize};

use qjet_core::series::{Comparison, Inequality, Mismatch};

pub const ENGINE_VERSION: &str = concat!("qjet-core ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    Mismatch,
    InequalityHolds,
    Violation,
    /// Nothing was compared; the report carries a computed object.
    Computed,
}

impl Verdict {
    pub fn failed(self) -> bool {
        matches!(self, Verdict::Mismatch | Verdict::Violation)
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::Mismatch => "mismatch",
            Verdict::InequalityHolds => "inequality-holds",
            Verdict::Violation => "violation",
            Verdict::Computed => "computed",
        }
    }
}

/// Where two series first disagree. Coefficients are decimal strings so
/// that arbitrarily large integers survive JSON.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Location {
    pub qexp: String,
    pub charges: Vec<i64>,
    pub left: String,
    pub right: String,
}

impl From<&Mismatch> for Location {
    fn from(m: &Mismatch) -> Self {
        Location { qexp: m.qexp.to_string(), charges: m.charges.clone(), left: m.left.to_string(), right: m.right.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub label: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub location: Option<Location>,
}

impl Check {
    pub fn comparison(label: impl Into<String>, c: &Comparison) -> Self {
        let (verdict, location) = match c {
            Comparison::Equal => (Verdict::Equal, None),
            Comparison::Mismatch(m) => (Verdict::Mismatch, Some(m.into())),
        };
        Check { label: label.into(), verdict, location }
    }

    pub fn inequality(label: impl Into<String>, c: &Inequality) -> Self {
        let (verdict, location) = match c {
            Inequality::Holds => (Verdict::InequalityHolds, None),
            Inequality::Violation(m) => (Verdict::Violation, Some(m.into())),
        };
        Check { label: label.into(), verdict, location }
    }

    pub fn plain(label: impl Into<String>, verdict: Verdict) -> Self {
        Check { label: label.into(), verdict, location: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub presets: Vec<String>,
    /// Truncation parameters in command-line order.
    pub orders: Vec<Param>,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub details: Vec<String>,
    pub notes: Vec<String>,
    pub engine_version: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            presets: Vec::new(),
            orders: Vec::new(),
            verdict: Verdict::Computed,
            checks: Vec::new(),
            details: Vec::new(),
            notes: Vec::new(),
            engine_version: ENGINE_VERSION.to_string(),
            wall_time_ms: None,
        }
    }

    pub fn preset(mut self, name: impl Into<String>) -> Self {
        self.presets.push(name.into());
        self
    }

    pub fn order(mut self, name: &str, value: impl ToString) -> Self {
        self.orders.push(Param { name: name.to_string(), value: value.to_string() });
        self
    }

    pub fn note(mut self, text: &str) -> Self {
        self.notes.push(text.to_string());
        self
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Overall verdict: a failure wins, then an inequality, then equality.
    pub fn finish(mut self) -> Self {
        let kinds: Vec<Verdict> = self.checks.iter().map(|c| c.verdict).collect();
        self.verdict = [Verdict::Mismatch, Verdict::Violation, Verdict::InequalityHolds, Verdict::Equal]
            .into_iter()
            .find(|v| kinds.contains(v))
            .unwrap_or(Verdict::Computed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_human(&self) -> String {
        let mut s = String::new();
        let row = |s: &mut String, k: &str, v: &str| writeln!(s, "{k:<10} {v}").unwrap();
        row(&mut s, "command", &self.command);
        if !self.presets.is_empty() {
            row(&mut s, "presets", &self.presets.join(", "));
        }
        let orders: Vec<String> = self.orders.iter().map(|p| format!("{}={}", p.name, p.value)).collect();
        if !orders.is_empty() {
            row(&mut s, "orders", &orders.join(" "));
        }
        row(&mut s, "verdict", self.verdict.label());
        for c in &self.checks {
            let mut line = format!("  {:<17} {}", c.verdict.label(), c.label);
            if let Some(l) = &c.location {
                let charges = if l.charges.is_empty() { String::new() } else { format!(" charges {:?}", l.charges) };
                write!(line, " at q^{}{charges}: {} vs {}", l.qexp, l.left, l.right).unwrap();
            }
            writeln!(s, "{line}").unwrap();
        }
        for d in &self.details {
            writeln!(s, "  | {d}").unwrap();
        }
        for n in &self.notes {
            row(&mut s, "note", n);
        }
        row(&mut s, "engine", &self.engine_version);
        if let Some(ms) = self.wall_time_ms {
            row(&mut s, "wall time", &format!("{ms} ms"));
        }
        s
    }
}
