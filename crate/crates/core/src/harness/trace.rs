use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::superiorize::SweepTrace;

/// CSV header shared by every trace file.
pub const TRACE_COLUMNS: [&str; 6] = ["sweep", "objective", "neg_objective", "proximity", "rel_change", "ell_start"];

/// One parsed line of a trace CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub sweep: usize,
    pub objective: f64,
    /// Empty in the file when `<-c, x>` recording was switched off.
    pub neg_objective: Option<f64>,
    pub proximity: f64,
    pub rel_change: f64,
    pub ell_start: usize,
}

/// Writes `comments` as `# ` lines followed by the trace body.
///
/// Floats use Rust's shortest round-trip exponent form, so identical runs
/// give byte-identical bodies.
pub fn write_trace(
    path: &Path,
    comments: &[String],
    trace: &[SweepTrace],
    record_negated_objective: bool,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    for line in comments {
        writeln!(out, "# {line}")?;
    }
    writeln!(out, "{}", TRACE_COLUMNS.join(","))?;
    for t in trace {
        let neg = if record_negated_objective { format!("{:e}", -t.objective) } else { String::new() };
        writeln!(
            out,
            "{},{:e},{},{:e},{:e},{}",
            t.sweep, t.objective, neg, t.proximity, t.rel_change, t.ell_start
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a trace CSV, skipping `#` comments, and returns rows sorted by sweep.
pub fn read_trace(path: &Path) -> Result<Vec<TraceRow>> {
    let schema = |msg: String| Error::Schema { path: path.to_path_buf(), msg };
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;

    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| schema(format!("missing column `{name}`")))
    };
    let idx = [
        column("sweep")?,
        column("objective")?,
        column("neg_objective")?,
        column("proximity")?,
        column("rel_change")?,
        column("ell_start")?,
    ];

    let mut rows = Vec::new();
    for (n, record) in reader.records().enumerate() {
        let record = record?;
        let field = |k: usize| record.get(idx[k]).unwrap_or("").trim();
        let real = |k: usize| -> Result<f64> {
            field(k)
                .parse::<f64>()
                .map_err(|_| schema(format!("record {}: `{}` is not a number", n + 1, field(k))))
        };
        let count = |k: usize| -> Result<usize> {
            field(k)
                .parse::<usize>()
                .map_err(|_| schema(format!("record {}: `{}` is not a count", n + 1, field(k))))
        };
        rows.push(TraceRow {
            sweep: count(0)?,
            objective: real(1)?,
            neg_objective: if field(2).is_empty() { None } else { Some(real(2)?) },
            proximity: real(3)?,
            rel_change: real(4)?,
            ell_start: count(5)?,
        });
    }
    rows.sort_by_key(|r| r.sweep);
    Ok(rows)
}
