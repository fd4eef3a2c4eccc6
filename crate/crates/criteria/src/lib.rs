//! Acceptance criteria: each criterion is a set of suite reports rendered as one status line
//! plus one line per invariant row.

use nageo::report::{Check, Report};

/// Seed shared by every criterion run.
pub const SEED: u64 = 20_240_601;

/// Outcome of one criterion, with its printable lines.
pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    pub rows: Vec<Check>,
}

impl Criterion {
    pub fn new(id: usize, title: &'static str, reports: Vec<Report>) -> Self {
        Criterion { id, title, rows: reports.into_iter().flat_map(|r| r.rows).collect() }
    }

    pub fn passed(&self) -> bool {
        !self.rows.is_empty() && self.rows.iter().all(|c| c.passed)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out =
            vec![format!("criterion {} ({}): {}", self.id, self.title, if self.passed() { "PASS" } else { "FAIL" })];
        out.extend(self.rows.iter().map(row_line));
        out
    }

    /// Failing rows with their witnesses.
    pub fn failures(&self) -> String {
        self.rows
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{}: {}", c.name, c.witness.as_ref().map(|w| w.to_string()).unwrap_or_default()))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

fn row_line(c: &Check) -> String {
    let mut s = format!("  [{}] {} ({})", c.status(), c.name, c.tag.as_str());
    if let Some(d) = c.detail.as_object() {
        if let (Some(i), Some(f)) = (d.get("instances"), d.get("failed")) {
            s.push_str(&format!(" instances={i} failed={f}"));
        }
        if let Some(w) = d.get("worst_ratio_decimal") {
            s.push_str(&format!(" worst_ratio={w}"));
        }
    }
    s
}
