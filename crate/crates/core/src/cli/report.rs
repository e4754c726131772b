use std::fmt;
use std::io;

use crate::jet::ResidualReport;

/// Formats a float with 17 significant digits, enough to round-trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    /// Recorded for information, not checked.
    Info,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        })
    }
}

/// Where a residual was measured: a sample index, a time or the whole batch.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub enum Location {
    Batch,
    Point(usize),
    Time(f64),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Batch => f.write_str("batch"),
            Location::Point(i) => write!(f, "point {i}"),
            Location::Time(t) => write!(f, "t={}", fmt_f64(*t)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub check: String,
    pub location: Location,
    pub residual: f64,
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    rows: Vec<ReportRow>,
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    /// Pass iff `residual ≤ tolerance` (NaN fails).
    pub fn bound(&mut self, check: impl Into<String>, location: Location, residual: f64, tolerance: f64) {
        let verdict = if residual <= tolerance { Verdict::Pass } else { Verdict::Fail };
        self.rows.push(ReportRow { check: check.into(), location, residual, tolerance: Some(tolerance), verdict });
    }

    /// Pass iff `residual > threshold`; for checks that are supposed to fail.
    pub fn exceeds(&mut self, check: impl Into<String>, location: Location, residual: f64, threshold: f64) {
        let verdict = if residual > threshold { Verdict::Pass } else { Verdict::Fail };
        self.rows.push(ReportRow { check: check.into(), location, residual, tolerance: Some(threshold), verdict });
    }

    pub fn info(&mut self, check: impl Into<String>, location: Location, value: f64) {
        self.rows.push(ReportRow {
            check: check.into(),
            location,
            residual: value,
            tolerance: None,
            verdict: Verdict::Info,
        });
    }

    /// One row for a whole zero-check batch: the entry closest to (or furthest
    /// past) its cancellation-aware bound, with that bound as the tolerance.
    pub fn residuals(&mut self, check: impl Into<String>, report: &ResidualReport) {
        let worst = report.entries.iter().max_by(|a, b| {
            let ra = a.value.abs() / report.tolerance.bound(a.scale);
            let rb = b.value.abs() / report.tolerance.bound(b.scale);
            ra.total_cmp(&rb)
        });
        match worst {
            Some(e) => self.bound(check, Location::Point(e.point), e.value.abs(), report.tolerance.bound(e.scale)),
            None => self.bound(check, Location::Batch, 0.0, report.tolerance.atol),
        }
    }

    pub fn fail(&mut self, check: impl Into<String>, location: Location) {
        self.rows.push(ReportRow {
            check: check.into(),
            location,
            residual: f64::NAN,
            tolerance: None,
            verdict: Verdict::Fail,
        });
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.verdict != Verdict::Fail)
    }

    /// Rows sorted by check name, then location.
    pub fn rows(&self) -> Vec<&ReportRow> {
        let mut rows: Vec<&ReportRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| {
            a.check.cmp(&b.check).then_with(|| a.location.partial_cmp(&b.location).unwrap_or(std::cmp::Ordering::Equal))
        });
        rows
    }

    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "location", "residual", "tolerance", "verdict"])?;
        for r in self.rows() {
            w.write_record([
                r.check.clone(),
                r.location.to_string(),
                fmt_f64(r.residual),
                r.tolerance.map(fmt_f64).unwrap_or_default(),
                r.verdict.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.rows();
        let width = rows.iter().map(|r| r.check.len()).max().unwrap_or(5).max(5);
        for r in rows {
            let tol = r.tolerance.map(|t| format!("{t:.3e}")).unwrap_or_else(|| "-".into());
            writeln!(
                f,
                "{:<4} {:<width$} {:<12} residual {:.3e} tol {}",
                r.verdict,
                r.check,
                r.location.to_string(),
                r.residual,
                tol
            )?;
        }
        Ok(())
    }
}
