//! Versioned, deterministic check reports.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "dawk-report/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    /// The statement this check exercises, in words.
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, status: Status) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status,
            witness: None,
            detail: None,
        }
    }

    pub fn pass(id: impl Into<String>, anchor: impl Into<String>) -> Self {
        Self::new(id, anchor, Status::Pass)
    }

    pub fn from_bool(id: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::new(id, anchor, Status::from_bool(ok))
    }

    pub fn with_witness(mut self, w: serde_json::Value) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub unknown: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub summary: Summary,
    /// Wall-clock time; the only field allowed to differ between identical runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            suite: suite.into(),
            type_id: None,
            seed: None,
            checks: Vec::new(),
            summary: Summary::default(),
            timing_ms: None,
        }
    }

    pub fn for_type(mut self, type_id: &str) -> Self {
        self.type_id = Some(type_id.to_string());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, c: Check) {
        match c.status {
            Status::Pass => self.summary.pass += 1,
            Status::Fail => self.summary.fail += 1,
            Status::Unknown => self.summary.unknown += 1,
        }
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        for c in other.checks {
            self.push(c);
        }
    }

    /// Absorbs another report, prefixing its check ids.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.id = format!("{prefix}/{}", c.id);
            self.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0 && self.summary.unknown == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status != Status::Pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary_line(&self) -> String {
        format!(
            "{}{}: {} pass, {} fail, {} unknown",
            self.suite,
            self.type_id
                .as_deref()
                .map(|t| format!(" [{t}]"))
                .unwrap_or_default(),
            self.summary.pass,
            self.summary.fail,
            self.summary.unknown
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_json() {
        let mut r = Report::new("demo").for_type("A2~1").with_seed(1);
        r.push(Check::pass("a", "x"));
        r.push(Check::from_bool("b", "y", false).with_detail("nope"));
        assert!(!r.passed());
        assert_eq!(
            r.summary,
            Summary {
                pass: 1,
                fail: 1,
                unknown: 0
            }
        );
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
