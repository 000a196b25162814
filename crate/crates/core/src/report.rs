//! Check records shared by the verification suites and the CLI.

use std::fmt;

use serde::Serialize;

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// The hypotheses of the identity do not hold for the given input.
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inapplicable => "n/a",
        })
    }
}

/// One verified statement. `witness` names a window word on which the two
/// sides differ, or the reason a check could not be applied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub anchor: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, verdict: Verdict) -> Self {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            verdict,
            witness: None,
        }
    }

    pub fn from_bool(name: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::new(name, anchor, if ok { Verdict::Pass } else { Verdict::Fail })
    }

    pub fn with_witness(mut self, w: Option<String>) -> Self {
        self.witness = w;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} ({})", self.verdict, self.name, self.anchor)?;
        if let Some(w) = &self.witness {
            write!(f, " -- {w}")?;
        }
        Ok(())
    }
}

/// A titled list of checks.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub title: String,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(title: impl Into<String>, checks: Vec<CheckRecord>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            title: title.into(),
            checks,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        let passed = self.checks.iter().filter(|c| c.passed()).count();
        write!(f, "{passed}/{} passed", self.checks.len())
    }
}
