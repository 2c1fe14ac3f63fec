use std::io::Write;

use serde::Serialize;

use super::{Aggregates, ExperimentConfig, ExperimentResult, TrialFailure, TrialRecord};
use crate::error::Result;

/// Version string written into every summary.
pub const VERSION: &str = concat!("flaglab-v", env!("CARGO_PKG_VERSION"));

/// CSV header: `max_deg_i1 … max_deg_i{d−1}` follow `surviving`.
pub fn csv_header(d: usize) -> Vec<String> {
    let mut h: Vec<String> = ["stream", "f0", "f1", "f2", "f3", "f4", "betti_d_gf2", "betti_d_q", "cp_count", "cp_induced", "collapse_status", "surviving"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend((1..d).map(|i| format!("max_deg_i{i}")));
    h.push("torsion_max".into());
    h.push("wall_ms".into());
    h
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn csv_row(r: &TrialRecord, d: usize) -> Vec<String> {
    use crate::homology::Coefficients;
    let mut row = vec![r.stream.to_string()];
    row.extend((0..5).map(|k| r.f[k].to_string()));
    row.push(opt(r.betti_d(Coefficients::GF2, d)));
    row.push(opt(r.betti_d(Coefficients::Rational, d)));
    row.push(opt(r.cp_count));
    row.push(opt(r.cp_induced));
    row.push(opt(r.collapse_status));
    row.push(opt(r.surviving));
    row.extend(r.max_deg.iter().map(|v| v.to_string()));
    row.push(opt(r.torsion_max()));
    row.push(r.wall_ms.to_string());
    row
}

/// One row per successful trial, in stream order.
pub fn write_csv<W: Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(result.config.d))?;
    for r in &result.records {
        w.write_record(csv_row(r, result.config.d))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentSummary<'a> {
    pub version: &'static str,
    pub config: &'a ExperimentConfig,
    pub p: f64,
    pub aggregates: &'a Aggregates,
    pub failures: &'a [TrialFailure],
}

/// Config echo, version and aggregates, without the per-trial records.
pub fn write_summary_json<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    let summary = ExperimentSummary {
        version: VERSION,
        config: &result.config,
        p: result.p,
        aggregates: &result.aggregates,
        failures: &result.failures,
    };
    serde_json::to_writer_pretty(&mut out, &summary)?;
    writeln!(out)?;
    Ok(())
}

/// The summary plus every record.
pub fn write_json<W: Write>(result: &ExperimentResult, mut out: W) -> Result<()> {
    #[derive(Serialize)]
    struct Full<'a> {
        version: &'static str,
        #[serde(flatten)]
        result: &'a ExperimentResult,
    }
    serde_json::to_writer_pretty(&mut out, &Full { version: VERSION, result })?;
    writeln!(out)?;
    Ok(())
}
