use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One evaluated identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub suite: String,
    pub check: String,
    pub anchor: String,
    /// `None` when the check could not be evaluated.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub samples: usize,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportRecord {
    pub fn evaluated(
        suite: &str,
        check: &str,
        anchor: &str,
        residual: f64,
        tolerance: f64,
        samples: usize,
        seed: u64,
    ) -> Self {
        let mut rec = Self {
            suite: suite.to_string(),
            check: check.to_string(),
            anchor: anchor.to_string(),
            residual: Some(residual),
            tolerance,
            verdict: Verdict::Fail,
            samples,
            seed,
            error: None,
        };
        if !residual.is_finite() {
            rec.residual = None;
            rec.error = Some(format!("non-finite residual {residual}"));
        } else if residual <= tolerance {
            rec.verdict = Verdict::Pass;
        }
        rec
    }

    pub fn failed(
        suite: &str,
        check: &str,
        anchor: &str,
        tolerance: f64,
        samples: usize,
        seed: u64,
        error: String,
    ) -> Self {
        Self {
            suite: suite.to_string(),
            check: check.to_string(),
            anchor: anchor.to_string(),
            residual: None,
            tolerance,
            verdict: Verdict::Fail,
            samples,
            seed,
            error: Some(error),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Sorts by suite, then check name.
pub fn sort_records(records: &mut [ReportRecord]) {
    records.sort_by(|a, b| (&a.suite, &a.check).cmp(&(&b.suite, &b.check)));
}

/// One JSON object per line, each terminated by a newline.
pub fn to_jsonl(records: &[ReportRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("records serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_jsonl(text: &str) -> serde_json::Result<Vec<ReportRecord>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

fn fmt_residual(r: Option<f64>) -> String {
    match r {
        Some(v) => format!("{v:.3e}"),
        None => "-".to_string(),
    }
}

/// Fixed-width table with a totals line.
pub fn summary_table(records: &[ReportRecord]) -> String {
    let headers = ["suite", "check", "anchor", "residual", "tolerance", "verdict"];
    let rows: Vec<[String; 6]> = records
        .iter()
        .map(|r| {
            [
                r.suite.clone(),
                r.check.clone(),
                r.anchor.clone(),
                fmt_residual(r.residual),
                format!("{:.0e}", r.tolerance),
                match r.verdict {
                    Verdict::Pass => "pass".to_string(),
                    Verdict::Fail => "FAIL".to_string(),
                },
            ]
        })
        .collect();
    let mut widths = headers.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut parts = Vec::with_capacity(cells.len());
        for (cell, w) in cells.iter().zip(widths) {
            let pad = w - cell.chars().count();
            parts.push(format!("{cell}{}", " ".repeat(pad)));
        }
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(&headers.map(String::from));
    line(&widths.map(|w| "-".repeat(w)));
    for row in &rows {
        line(row);
    }
    let failed = records.iter().filter(|r| !r.passed()).count();
    let _ = writeln!(out, "{} checks, {} passed, {} failed", records.len(), records.len() - failed, failed);
    for r in records.iter().filter(|r| r.error.is_some()) {
        let _ = writeln!(out, "error in {}/{}: {}", r.suite, r.check, r.error.as_deref().unwrap_or(""));
    }
    out
}
