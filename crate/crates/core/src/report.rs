//! Check records and suite reports.

use std::fmt;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// Where the expected value of a check comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// A statement of the theory being verified.
    Theorem,
    /// A value computed independently of the code under test.
    Oracle,
    /// A defining identity or a trivial consequence of one.
    Identity,
    /// A check that is expected to fail (negative control).
    Control,
}

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub id: String,
    pub status: Status,
    pub deviation: f64,
    pub tolerance: f64,
    pub basis: Basis,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    /// Passes iff `deviation ≤ tolerance` (NaN fails).
    pub fn measured(id: impl Into<String>, deviation: f64, tolerance: f64, basis: Basis) -> Self {
        // exact zeros converted from signed arithmetic may arrive as -0.0
        let deviation = if deviation == 0.0 { 0.0 } else { deviation };
        let status = if deviation <= tolerance { Status::Pass } else { Status::Fail };
        Record { id: id.into(), status, deviation, tolerance, basis, note: None }
    }

    /// An exact check: tolerance 0, deviation 0 on success.
    pub fn exact(id: impl Into<String>, ok: bool, basis: Basis) -> Self {
        Record {
            id: id.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            deviation: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            basis,
            note: None,
        }
    }

    /// Passes iff `deviation > threshold`.
    pub fn exceeds(id: impl Into<String>, deviation: f64, threshold: f64) -> Self {
        let status = if deviation > threshold { Status::Pass } else { Status::Fail };
        Record { id: id.into(), status, deviation, tolerance: threshold, basis: Basis::Control, note: None }
    }

    pub fn skip(id: impl Into<String>, note: impl Into<String>) -> Self {
        Record {
            id: id.into(),
            status: Status::Skip,
            deviation: 0.0,
            tolerance: 0.0,
            basis: Basis::Identity,
            note: Some(note.into()),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub status: Status,
    pub records: Vec<Record>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport { suite: suite.into(), status: Status::Pass, records: Vec::new() }
    }

    pub fn push(&mut self, r: Record) {
        if r.status == Status::Fail {
            self.status = Status::Fail;
        }
        self.records.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = Record>) {
        for r in rs {
            self.push(r);
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn count(&self, s: Status) -> usize {
        self.records.iter().filter(|r| r.status == s).count()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {:?} ({} pass, {} fail, {} skip)",
            self.suite,
            self.status,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skip)
        )?;
        for r in &self.records {
            let tag = match r.status {
                Status::Pass => "ok  ",
                Status::Fail => "FAIL",
                Status::Skip => "skip",
            };
            write!(f, "  {tag} {:<48} dev {:.3e} tol {:.1e}", r.id, r.deviation, r.tolerance)?;
            if let Some(n) = &r.note {
                write!(f, "  ({n})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Multiplier applied to every nonzero tolerance, read from `SPECGEO_TOL`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { scale: 1.0 }
    }
}

impl Tolerances {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var("SPECGEO_TOL") {
            Err(_) => Ok(Self::default()),
            Ok(s) => match s.trim().parse::<f64>() {
                Ok(v) if v.is_finite() && v > 0.0 => Ok(Tolerances { scale: v }),
                _ => Err(format!("SPECGEO_TOL must be a positive number, got {s:?}")),
            },
        }
    }

    pub fn of(&self, base: f64) -> f64 {
        base * self.scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_status_follows_records() {
        let mut s = SuiteReport::new("t");
        s.push(Record::measured("a", 1e-12, 1e-10, Basis::Theorem));
        s.push(Record::skip("b", "n/a"));
        assert!(s.passed());
        s.push(Record::measured("c", f64::NAN, 1e-10, Basis::Theorem));
        assert!(!s.passed());
        assert_eq!(s.failures().count(), 1);
    }
}
