//! Check reports: deterministic `CHECK <name> PASS|FAIL <witness>` lines.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    /// Passed every check that fits in the enumeration depth, with no
    /// closed-form bound available to certify the rest.
    PassAtDepth,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        !matches!(self, Verdict::Fail)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::PassAtDepth => write!(f, "PASS-AT-DEPTH"),
            Verdict::Fail => write!(f, "FAIL"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub verdict: Verdict,
    pub witness: String,
}

/// A list of checks, rendered sorted lexicographically by name then witness
/// so identical inputs give byte-identical reports.
#[derive(Debug, Clone)]
pub struct Report {
    pub lines: Vec<CheckLine>,
    pub tol: f64,
}

impl Report {
    pub fn new(tol: f64) -> Self {
        Report { lines: Vec::new(), tol }
    }

    pub fn push(&mut self, name: &str, verdict: Verdict, witness: impl Into<String>) {
        self.lines.push(CheckLine {
            name: name.to_string(),
            verdict,
            witness: witness.into(),
        });
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
    }

    pub fn all_pass(&self) -> bool {
        self.lines.iter().all(|l| l.verdict.is_pass())
    }

    pub fn failures(&self) -> Vec<&CheckLine> {
        self.lines.iter().filter(|l| l.verdict == Verdict::Fail).collect()
    }

    pub fn render(&self) -> String {
        let mut lines = self.lines.clone();
        lines.sort_by(|a, b| (&a.name, &a.witness).cmp(&(&b.name, &b.witness)));
        let mut out = String::new();
        for l in lines {
            out.push_str(&format!("CHECK {} {} {}\n", l.name, l.verdict, l.witness));
        }
        out
    }
}
