//! Deterministic report emission (CSV and markdown) and the parser used to
//! read a previous CSV back as the reference of a win/loss comparison.
//!
//! CSV layout: one data row per problem under a fixed header, then a summary
//! block of `#`-prefixed lines so naive CSV readers only see the data rows.
//! UTF-8, LF line endings, fields never quoted.

use std::fmt::Write as _;

use crate::error::{Error, Result};

use super::ClassReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl ReportFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "md" | "markdown" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidArgument(format!(
                "unknown format `{other}` (expected csv or md)"
            ))),
        }
    }
}

pub fn emit_report(report: &ClassReport, format: ReportFormat) -> Vec<u8> {
    match format {
        ReportFormat::Csv => emit_csv(report),
        ReportFormat::Markdown => emit_markdown(report),
    }
}

fn emit_csv(report: &ClassReport) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("problem_id,algorithm,trials,intervals,solved,stop_reason\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.problem_id, r.algorithm, r.trials, r.intervals, r.solved, r.stop_reason
        );
    }
    let _ = writeln!(out, "# class,{}", report.class_label);
    let _ = writeln!(out, "# delta,{}", report.delta);
    let _ = writeln!(out, "# t_max,{}", report.t_max);
    let _ = writeln!(out, "# class_size,{}", report.rows.len());
    let _ = writeln!(out, "# solved_count,{}", report.solved_count());
    if let Some((s, t)) = report.worst_case() {
        let _ = writeln!(out, "# C1_worst_trials,{t}");
        let _ = writeln!(out, "# C1_problem,{}", report.rows[s].problem_id);
        let _ = writeln!(
            out,
            "# C2_intervals_at_worst,{}",
            report.intervals_at_worst().unwrap_or(0)
        );
    }
    let _ = writeln!(out, "# C3_avg_trials,{}", report.average_trials());
    if let Some(h) = report.half_class_trials() {
        let _ = writeln!(out, "# T50_trials,{h}");
    }
    if let Some(c) = report.comparison {
        let _ = writeln!(out, "# C4_reference_wins,{}", c.reference_wins);
        let _ = writeln!(out, "# C4_run_wins,{}", c.run_wins);
        let _ = writeln!(out, "# C4_ties,{}", c.ties);
    }
    out.into_bytes()
}

fn emit_markdown(report: &ClassReport) -> Vec<u8> {
    let mut out = String::new();
    out.push_str("| class | delta | algorithm | 50% | 100% | intervals | avg | solved |\n");
    out.push_str("|---|---|---|---|---|---|---|---|\n");
    let _ = writeln!(
        out,
        "| {} | {} | {} | {} | {} | {} | {:.2} | {}/{} |",
        report.class_label,
        report.delta,
        report.algorithm,
        report
            .half_class_trials()
            .map_or("-".to_string(), |h| h.to_string()),
        report
            .worst_case()
            .map_or("-".to_string(), |(_, t)| t.to_string()),
        report
            .intervals_at_worst()
            .map_or("-".to_string(), |m| m.to_string()),
        report.average_trials(),
        report.solved_count(),
        report.rows.len(),
    );
    if let Some(c) = report.comparison {
        out.push('\n');
        let _ = writeln!(
            out,
            "reference wins {} : {} run wins ({} ties)",
            c.reference_wins, c.run_wins, c.ties
        );
    }
    out.push('\n');
    out.push_str("| problem | trials | intervals | solved | stop |\n");
    out.push_str("|---|---|---|---|---|\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            r.problem_id, r.trials, r.intervals, r.solved, r.stop_reason
        );
    }
    out.into_bytes()
}

/// Read the per-problem `(problem_id, trials)` pairs back out of CSV report
/// bytes, for use as the reference side of a comparison.
pub fn parse_report_trials(bytes: &[u8]) -> Result<Vec<(String, u64)>> {
    let text = std::str::from_utf8(bytes)
        .map_err(|_| Error::MalformedReport("not valid UTF-8".into()))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::MalformedReport(format!(
                "line {} has {} fields, expected 6",
                i + 1,
                fields.len()
            )));
        }
        let trials: u64 = fields[2].parse().map_err(|_| {
            Error::MalformedReport(format!("line {}: bad trial count `{}`", i + 1, fields[2]))
        })?;
        rows.push((fields[0].to_string(), trials));
    }
    Ok(rows)
}
