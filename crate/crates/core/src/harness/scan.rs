use serde::Serialize;

use super::{run_experiment, ExperimentConfig};
use crate::collapse::CollapseStatus;
use crate::error::{Error, Result};
use crate::homology::Coefficients;
use crate::models::{cycle_probability, reference_constants, ProbabilitySpec};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub c: f64,
    pub p: f64,
    pub trials: usize,
    /// Trials that collapsed below d or down to disjoint ◇_d copies.
    pub frac_almost_collapsible: Option<f64>,
    pub mean_betti_d: Option<f64>,
    pub mean_cp: Option<f64>,
    /// Mean β_d / n^{(d+1)/2}.
    pub mean_betti_scaled: Option<f64>,
    /// Fraction of trials whose graph has a cycle (d = 1).
    pub cycle_fraction: Option<f64>,
    /// Limiting cycle probability at this c (d = 1, c < 1).
    pub cycle_prediction: Option<f64>,
    /// Tabulated constants this c sits next to.
    pub annotation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanResult {
    pub n: usize,
    pub d: usize,
    pub rows: Vec<ScanRow>,
}

/// Distance under which a grid point is annotated with a tabulated constant.
const ANNOTATION_TOLERANCE: f64 = 0.01;

fn annotate(d: usize, c: f64) -> Option<String> {
    let rc = reference_constants(d).ok()?;
    let root = |v: f64| v.powf(1.0 / d as f64);
    let marks = [
        (rc.gamma, "gamma_d"),
        (rc.c, "c_d"),
        (root(rc.gamma), "gamma_d^(1/d)"),
        (root(rc.c), "c_d^(1/d)"),
    ];
    let hits: Vec<String> = marks
        .iter()
        .filter(|(v, _)| (c - v).abs() <= ANNOTATION_TOLERANCE)
        .map(|(v, name)| format!("{name} ≈ {v:.3}"))
        .collect();
    (!hits.is_empty()).then(|| hits.join("; "))
}

/// One experiment per grid value, with `p = c·n^{−1/d}`.
pub fn threshold_scan(base: &ExperimentConfig, grid: &[f64]) -> Result<ScanResult> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("the c-grid must be non-empty and strictly increasing".into()));
    }
    let d = base.d;
    let mut rows = Vec::with_capacity(grid.len());
    for &c in grid {
        let cfg = ExperimentConfig { probability: ProbabilitySpec::C(c), ..base.clone() };
        let res = run_experiment(&cfg)?;
        let recs = &res.records;
        let frac = |hits: usize, of: usize| (of > 0).then(|| hits as f64 / of as f64);
        let with_status: Vec<CollapseStatus> = recs.iter().filter_map(|r| r.collapse_status).collect();
        let collapsible = with_status
            .iter()
            .filter(|s| matches!(s, CollapseStatus::CollapsedBelowD | CollapseStatus::AlmostCollapsed))
            .count();
        let betti: Vec<f64> = recs.iter().filter_map(|r| r.betti_d(Coefficients::Rational, d)).map(|b| b as f64).collect();
        let mean_betti_d = frac(0, betti.len()).map(|_| betti.iter().sum::<f64>() / betti.len() as f64);
        let scale = (cfg.n as f64).powf((d + 1) as f64 / 2.0);
        rows.push(ScanRow {
            c,
            p: res.p,
            trials: recs.len(),
            frac_almost_collapsible: frac(collapsible, with_status.len()),
            mean_betti_d,
            mean_cp: res.aggregates.cp_mean,
            mean_betti_scaled: mean_betti_d.map(|b| b / scale),
            cycle_fraction: (d == 1).then_some(res.aggregates.cycle_fraction),
            cycle_prediction: (d == 1 && c > 0.0 && c < 1.0).then(|| cycle_probability(c)),
            annotation: annotate(d, c),
        });
    }
    Ok(ScanResult { n: base.n, d, rows })
}
