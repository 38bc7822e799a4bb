use std::fmt::Write;
use std::str::FromStr;

use super::EvalReport;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    /// Aligned, human-readable; metrics to 3 decimals.
    #[default]
    Table,
    /// `algorithm,metric,k,value`, one line per algorithm and metric.
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(ReportFormat::Table),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::BadParam(format!(
                "unknown report format `{other}` (expected table or csv)"
            ))),
        }
    }
}

pub fn render_report(report: &EvalReport, format: ReportFormat) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::EmptyReport);
    }
    let mut out = String::new();
    let k = report.k;
    match format {
        ReportFormat::Csv => {
            out.push_str("algorithm,metric,k,value\n");
            for row in &report.rows {
                let m = &row.metrics;
                for (name, value) in [
                    ("ndcg", m.ndcg),
                    ("precision", m.precision),
                    ("recall", m.recall),
                    ("f1", m.f1),
                ] {
                    writeln!(out, "{},{name},{k},{value:.6}", row.algorithm).unwrap();
                }
            }
        }
        ReportFormat::Table => {
            let name_width = report
                .rows
                .iter()
                .map(|r| r.algorithm.len())
                .max()
                .unwrap_or(0)
                .max("algorithm".len());
            let headers = [
                format!("nDCG@{k}"),
                format!("P@{k}"),
                format!("R@{k}"),
                format!("F1@{k}"),
            ];
            write!(out, "{:<name_width$}", "algorithm").unwrap();
            for h in &headers {
                write!(out, "  {h:>7}").unwrap();
            }
            writeln!(out, "  {:>7}  {:>10}", "posts", "time_ms").unwrap();
            for row in &report.rows {
                let m = &row.metrics;
                write!(out, "{:<name_width$}", row.algorithm).unwrap();
                for v in [m.ndcg, m.precision, m.recall, m.f1] {
                    write!(out, "  {v:>7.3}").unwrap();
                }
                writeln!(
                    out,
                    "  {:>7}  {:>10.1}",
                    row.n_test_posts,
                    row.wall_time.as_secs_f64() * 1e3
                )
                .unwrap();
            }
        }
    }
    Ok(out)
}
