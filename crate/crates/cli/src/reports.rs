//! Report files: CSV / JSON-lines writing, re-reading for evaluation, and
//! the derived table exports.
//!
//! Every complete output ends with a sentinel comment line; a file that was
//! cut short (crash, full disk) lacks it and is rejected when read back.
//! Lines starting with `#` are treated as comments in all formats.

use std::io::Write;
use std::path::Path;

use editwar_core::eval::{PrecisionAtK, ScatterRow, SweepRow};
use editwar_core::report::RevertMapRow;
use editwar_core::{ControversyReport, Indicator};

/// Last line of every complete output file.
pub const REPORT_SENTINEL: &str = "# end-of-report";

/// On-disk report layout. Chosen from the output path extension:
/// `.jsonl`/`.ndjson` mean JSON-lines, anything else CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Jsonl,
}

impl OutputFormat {
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") | Some("ndjson") => OutputFormat::Jsonl,
            _ => OutputFormat::Csv,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportIoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
    #[error("report file is incomplete: missing the trailing {REPORT_SENTINEL:?} line")]
    MissingSentinel,
}

/// The analyze/eval report schema, one column set for both commands.
pub const REPORT_HEADER: &str =
    "title,page_id,n_edits,n_editors,n_reverts,n_mutual_reverts,E,M_r,M_i,M,TC,controversial";
const SWEEP_HEADER: &str = "M_threshold,n,c,T,pct_c,C_estimate,short_sample";
const REVERT_MAP_HEADER: &str = "n_d,n_r,multiplicity,mutual_only";
const SCATTER_HEADER: &str = "title,TC,M";

/// Explicit header, then rows, then the sentinel. Empty exports still get
/// their header.
fn write_csv_rows<W: Write + ?Sized, T: serde::Serialize>(
    out: &mut W,
    header: &str,
    rows: &[T],
) -> Result<(), ReportIoError> {
    writeln!(out, "{header}")?;
    let mut writer = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(&mut *out);
    for row in rows {
        writer.serialize(row)?;
    }
    writer.flush()?;
    drop(writer);
    writeln!(out, "{REPORT_SENTINEL}")?;
    Ok(())
}

/// Write reports, ranked order preserved, sentinel terminated.
pub fn write_reports<W: Write + ?Sized>(
    out: &mut W,
    reports: &[ControversyReport],
    format: OutputFormat,
) -> Result<(), ReportIoError> {
    match format {
        OutputFormat::Csv => write_csv_rows(out, REPORT_HEADER, reports),
        OutputFormat::Jsonl => {
            for report in reports {
                let line = serde_json::to_string(report).map_err(|source| ReportIoError::Json {
                    line: 0,
                    source,
                })?;
                writeln!(out, "{line}")?;
            }
            writeln!(out, "{REPORT_SENTINEL}")?;
            Ok(())
        }
    }
}

/// Read reports back from either format (sniffed from the first data line).
/// Requires the sentinel: a truncated file must not silently evaluate.
pub fn read_reports(text: &str) -> Result<Vec<ControversyReport>, ReportIoError> {
    let last_content = text.lines().rev().find(|l| !l.trim().is_empty());
    if last_content.map(str::trim) != Some(REPORT_SENTINEL) {
        return Err(ReportIoError::MissingSentinel);
    }
    let data_lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| (i + 1, l))
        .collect();
    let Some((_, first)) = data_lines.first() else {
        return Ok(Vec::new());
    };

    if first.trim_start().starts_with('{') {
        let mut reports = Vec::with_capacity(data_lines.len());
        for (line, content) in data_lines {
            let report = serde_json::from_str(content)
                .map_err(|source| ReportIoError::Json { line, source })?;
            reports.push(report);
        }
        Ok(reports)
    } else {
        let headerful: String = data_lines
            .iter()
            .map(|(_, l)| *l)
            .collect::<Vec<_>>()
            .join("\n");
        let mut reader = csv::Reader::from_reader(headerful.as_bytes());
        let mut reports = Vec::new();
        for record in reader.deserialize() {
            reports.push(record?);
        }
        Ok(reports)
    }
}

/// The seven-indicator precision table: one row per indicator.
pub fn write_precision_table<W: Write + ?Sized>(
    out: &mut W,
    k: usize,
    rows: &[(Indicator, PrecisionAtK)],
) -> Result<(), ReportIoError> {
    writeln!(out, "indicator,k,hits,precision")?;
    for (indicator, precision) in rows {
        writeln!(
            out,
            "{},{},{},{}",
            indicator.name(),
            k,
            precision.hits,
            precision.precision
        )?;
    }
    writeln!(out, "{REPORT_SENTINEL}")?;
    Ok(())
}

/// The threshold-sweep table, seed echoed so runs can be reproduced.
pub fn write_sweep_table<W: Write + ?Sized>(
    out: &mut W,
    seed: u64,
    sample_size: usize,
    rows: &[SweepRow],
) -> Result<(), ReportIoError> {
    writeln!(out, "# seed={seed} sample_size={sample_size}")?;
    write_csv_rows(out, SWEEP_HEADER, rows)
}

/// Revert-map rows for one article.
pub fn write_revert_map<W: Write + ?Sized>(
    out: &mut W,
    rows: &[RevertMapRow],
) -> Result<(), ReportIoError> {
    write_csv_rows(out, REVERT_MAP_HEADER, rows)
}

/// Tag-count vs. M scatter rows.
pub fn write_scatter<W: Write + ?Sized>(out: &mut W, rows: &[ScatterRow]) -> Result<(), ReportIoError> {
    write_csv_rows(out, SCATTER_HEADER, rows)
}
