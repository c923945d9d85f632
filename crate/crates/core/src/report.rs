//! Result emission: the CSV schema, the gains table, and plain-text plot
//! scripts.
//!
//! Output is fully deterministic: rows are sorted by sweep value and then
//! by variant label, floats use Rust's shortest round-trip decimal
//! formatting, and line endings are LF.  Re-emitting the same results
//! yields a byte-identical file.

use crate::error::{Result, SimError};
use crate::experiment::{GainRow, ScenarioResult, SweepResult, VariantSummary};
use std::path::Path;

/// Exact header of the results CSV.
pub const CSV_HEADER: &str = "sweep_var,sweep_value,scheme,crc,gh_battery,mean_ee_mbps_per_w,ci95_ee,mean_tput_mbps,ci95_tput,outage_frac,drops";

/// One emitted row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub sweep_var: String,
    pub sweep_value: f64,
    pub scheme: &'static str,
    pub crc: &'static str,
    pub gh_battery: &'static str,
    /// Variant label, used only for ordering.
    pub label: String,
    pub mean_ee_mbps_per_w: f64,
    pub ci95_ee: f64,
    pub mean_tput_mbps: f64,
    pub ci95_tput: f64,
    pub outage_frac: f64,
    pub drops: usize,
}

fn row_from_summary(sweep_var: &str, sweep_value: f64, s: &VariantSummary) -> CsvRow {
    let (scheme, crc, gh_battery) = s.variant.csv_fields();
    CsvRow {
        sweep_var: sweep_var.to_string(),
        sweep_value,
        scheme,
        crc,
        gh_battery,
        label: s.variant.label(),
        mean_ee_mbps_per_w: s.ee.mean,
        ci95_ee: s.ee.ci95,
        mean_tput_mbps: s.tput_mbps.mean,
        ci95_tput: s.tput_mbps.ci95,
        outage_frac: s.outage_frac,
        drops: s.drops_used,
    }
}

/// Cooperative-only counterpart: same schema, metrics restricted to the
/// measured cooperative groups.  Variants without grouped traffic (DT, or
/// drops with no groups) emit no row.
fn grouped_row_from_summary(sweep_var: &str, sweep_value: f64, s: &VariantSummary) -> Option<CsvRow> {
    let (ee, tput) = (s.grouped_ee.as_ref()?, s.grouped_tput_mbps.as_ref()?);
    let (scheme, crc, gh_battery) = s.variant.csv_fields();
    Some(CsvRow {
        sweep_var: sweep_var.to_string(),
        sweep_value,
        scheme,
        crc,
        gh_battery,
        label: s.variant.label(),
        mean_ee_mbps_per_w: ee.mean,
        ci95_ee: ee.ci95,
        mean_tput_mbps: tput.mean,
        ci95_tput: tput.ci95,
        outage_frac: s.grouped_outage_frac,
        drops: ee.n,
    })
}

/// Rows for a single scenario run (no swept variable).
pub fn rows_from_scenario(result: &ScenarioResult) -> Vec<CsvRow> {
    let mut rows: Vec<CsvRow> = result
        .summaries
        .iter()
        .map(|s| row_from_summary("none", 0.0, s))
        .collect();
    sort_rows(&mut rows);
    rows
}

/// Cooperative-only rows for a single scenario run.
pub fn grouped_rows_from_scenario(result: &ScenarioResult) -> Vec<CsvRow> {
    let mut rows: Vec<CsvRow> = result
        .summaries
        .iter()
        .filter_map(|s| grouped_row_from_summary("none", 0.0, s))
        .collect();
    sort_rows(&mut rows);
    rows
}

/// Rows for a sweep; failed points contribute no rows (their errors are
/// reported separately by the caller).
pub fn rows_from_sweep(sweep: &SweepResult) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for point in &sweep.points {
        if let Ok(result) = &point.result {
            for s in &result.summaries {
                rows.push(row_from_summary(sweep.var.as_str(), point.value, s));
            }
        }
    }
    sort_rows(&mut rows);
    rows
}

/// Cooperative-only rows for a sweep.
pub fn grouped_rows_from_sweep(sweep: &SweepResult) -> Vec<CsvRow> {
    let mut rows = Vec::new();
    for point in &sweep.points {
        if let Ok(result) = &point.result {
            for s in &result.summaries {
                if let Some(r) = grouped_row_from_summary(sweep.var.as_str(), point.value, s) {
                    rows.push(r);
                }
            }
        }
    }
    sort_rows(&mut rows);
    rows
}

fn sort_rows(rows: &mut [CsvRow]) {
    rows.sort_by(|a, b| {
        a.sweep_value
            .partial_cmp(&b.sweep_value)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.label.cmp(&b.label))
    });
}

/// Renders the results CSV (LF line endings, trailing newline).
pub fn render_csv(rows: &[CsvRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(SimError::invalid("rows", "nothing to emit"));
    }
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.sweep_var,
            r.sweep_value,
            r.scheme,
            r.crc,
            r.gh_battery,
            r.mean_ee_mbps_per_w,
            r.ci95_ee,
            r.mean_tput_mbps,
            r.ci95_tput,
            r.outage_frac,
            r.drops
        ));
    }
    Ok(out)
}

/// Writes the CSV; refuses to create a file for empty results.
pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let text = render_csv(rows)?;
    std::fs::write(path, text)
        .map_err(|e| SimError::Config(format!("cannot write {}: {e}", path.display())))
}

/// Exact header of the gains CSV (percent gains relative to DT).
pub const GAINS_HEADER: &str = "scheme,crc,gh_battery,ee_gain_pct,tput_gain_pct";

fn fmt_opt(v: Option<f64>) -> String {
    match v {
        Some(x) => format!("{x}"),
        None => "na".to_string(),
    }
}

/// Renders the gains table emitted by the comparison command.
pub fn render_gains_csv(rows: &[GainRow]) -> Result<String> {
    if rows.is_empty() {
        return Err(SimError::invalid("rows", "nothing to emit"));
    }
    let mut sorted: Vec<&GainRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.variant.label());
    let mut out = String::new();
    out.push_str(GAINS_HEADER);
    out.push('\n');
    for r in sorted {
        let (scheme, crc, gh) = r.variant.csv_fields();
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            scheme,
            crc,
            gh,
            fmt_opt(r.ee_gain_pct),
            fmt_opt(r.tput_gain_pct)
        ));
    }
    Ok(out)
}

/// Plain-text plot description for one metric of an emitted CSV, so any
/// plotting tool can reproduce the figures without a plotting dependency.
pub fn render_plot_script(csv_file: &str, sweep_var: &str, metric: &str, ci: &str) -> String {
    let mut s = String::new();
    s.push_str(&format!("# Plot description for {csv_file}\n"));
    s.push_str(&format!("data: {csv_file}\n"));
    if sweep_var == "none" {
        s.push_str("kind: grouped bars\n");
        s.push_str("category: scheme + crc + gh_battery (one bar per variant)\n");
    } else {
        s.push_str("kind: lines with error bars\n");
        s.push_str(&format!("x: sweep_value ({sweep_var} per km^2)\n"));
        s.push_str("series: one line per (scheme, crc, gh_battery)\n");
    }
    s.push_str(&format!("y: {metric}\n"));
    s.push_str(&format!("error: {ci}\n"));
    s
}
