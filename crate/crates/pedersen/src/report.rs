//! Experiment reports: an aligned text table for people and one
//! whitespace-separated line per row for scripts.
//!
//! Line fields, in order: `experiment adversary successes total estimate
//! ci_low ci_high seed`. Exact results repeat the estimate in both interval
//! fields and print `-` for the seed.

use std::fmt::Write;

use pedersen_core::ExactProbability;

use crate::stats::Estimate;

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub experiment: String,
    pub adversary: String,
    pub successes: u64,
    pub total: u64,
    pub estimate: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: Option<u64>,
}

impl ReportRow {
    pub fn exact(experiment: &str, adversary: &str, p: &ExactProbability) -> Self {
        let v = p.as_f64();
        ReportRow {
            experiment: experiment.into(),
            adversary: adversary.into(),
            successes: p.successes(),
            total: p.total(),
            estimate: v,
            ci_low: v,
            ci_high: v,
            seed: None,
        }
    }

    pub fn estimated(experiment: &str, adversary: &str, e: &Estimate) -> Self {
        ReportRow {
            experiment: experiment.into(),
            adversary: adversary.into(),
            successes: e.successes,
            total: e.trials,
            estimate: e.point,
            ci_low: e.ci_low,
            ci_high: e.ci_high,
            seed: Some(e.seed),
        }
    }

    fn seed_field(&self) -> String {
        self.seed.map_or_else(|| "-".into(), |s| s.to_string())
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} {} {} {:.6} {:.6} {:.6} {}",
            self.experiment,
            self.adversary,
            self.successes,
            self.total,
            self.estimate,
            self.ci_low,
            self.ci_high,
            self.seed_field()
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Table,
    Lines,
}

pub fn render(rows: &[ReportRow], format: Format) -> String {
    match format {
        Format::Lines => rows.iter().map(|r| r.line() + "\n").collect(),
        Format::Table => render_table(rows),
    }
}

fn render_table(rows: &[ReportRow]) -> String {
    let header = ["experiment", "adversary", "probability", "estimate", "99% interval", "seed"];
    let body: Vec<[String; 6]> = rows
        .iter()
        .map(|r| {
            [
                r.experiment.clone(),
                r.adversary.clone(),
                format!("{}/{}", r.successes, r.total),
                format!("{:.6}", r.estimate),
                format!("[{:.6}, {:.6}]", r.ci_low, r.ci_high),
                r.seed_field(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push = |cells: &[&str]| {
        let parts: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        writeln!(out, "{}", parts.join("  ").trim_end()).unwrap();
    };
    push(&header);
    for row in &body {
        push(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_format() {
        let row = ReportRow::exact("hexp", "const0", &ExactProbability::new(121, 242));
        assert_eq!(row.line(), "hexp const0 121 242 0.500000 0.500000 0.500000 -");
    }

    #[test]
    fn estimate_line_format() {
        let e = Estimate::new(50000, 100000, 42);
        let row = ReportRow::estimated("hexp", "const0", &e);
        assert_eq!(row.line(), "hexp const0 50000 100000 0.500000 0.495922 0.504078 42");
    }

    #[test]
    fn table_has_header_and_rows() {
        let rows = [
            ReportRow::exact("hexp", "const0", &ExactProbability::new(121, 242)),
            ReportRow::exact("hinterm", "taperandom", &ExactProbability::new(242, 484)),
        ];
        let table = render(&rows, Format::Table);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("experiment  adversary"));
        assert!(lines[2].contains("242/484"));
        assert_eq!(render(&rows, Format::Lines).lines().count(), 2);
    }
}
