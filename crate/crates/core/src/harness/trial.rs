use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use super::{ExperimentConfig, Model};
use crate::collapse::{almost_d_collapse, check_pi1_preconditions, count_crosspolytopes, CollapseStatus, PredicateReport, DEFAULT_VERTEX_BOUND};
use crate::complex::{clique_complex, DimCap, SimplicialComplex};
use crate::density::{max_face_degree, within_face_degree_bound};
use crate::error::{Error, Result};
use crate::homology::{betti_numbers, euler_identity_holds, homology_with_torsion, morse_inequality_check, Coefficients};
use crate::models::{sample_gnp, sample_linial_meshulam, ProbabilitySpec, RngSpec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldBetti {
    pub field: String,
    pub betti: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrialRecord {
    pub stream: u64,
    /// f-vector through the dimension cap, zero-padded.
    pub f: Vec<usize>,
    pub betti: Vec<FieldBetti>,
    pub cp_count: Option<usize>,
    pub cp_induced: Option<usize>,
    pub collapse_status: Option<CollapseStatus>,
    pub surviving: Option<usize>,
    /// `max_deg[i − 1]` is the largest number of i-faces on one (i−1)-face, `1 ≤ i < d`.
    pub max_deg: Vec<usize>,
    pub max_vertex_degree: usize,
    pub c_bounded: Option<bool>,
    /// `β₂ − (f₂ − f₁ − f₃)` for d = 2 runs.
    pub morse_slack: Option<i64>,
    pub has_cycle: bool,
    /// `(degree, torsion coefficients)` for each requested degree.
    #[serde(serialize_with = "crate::bigint_serde::by_degree")]
    pub torsion: Vec<(usize, Vec<BigInt>)>,
    pub pi1: Option<PredicateReport>,
    pub wall_ms: u64,
}

impl TrialRecord {
    pub fn betti_d(&self, field: Coefficients, d: usize) -> Option<usize> {
        let name = field.to_string();
        self.betti.iter().find(|b| b.field == name).and_then(|b| b.betti.get(d).copied())
    }

    pub fn torsion_max(&self) -> Option<&BigInt> {
        self.torsion.iter().flat_map(|(_, t)| t.iter()).max()
    }
}

/// Per-trial collapse seed, kept apart from the sampling stream.
fn collapse_seed(master_seed: u64, stream: u64) -> u64 {
    master_seed.rotate_left(17) ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn trial_error(stream: u64, e: Error) -> Error {
    Error::Trial { stream, source: Box::new(e) }
}

/// One trial; deterministic in `(cfg.master_seed, stream)`.
pub fn run_trial(cfg: &ExperimentConfig, stream: u64) -> Result<TrialRecord> {
    cfg.validate()?;
    run_valid_trial(cfg, stream).map_err(|e| trial_error(stream, e))
}

fn run_valid_trial(cfg: &ExperimentConfig, stream: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let obs = &cfg.observables;
    let (n, d, p) = (cfg.n, cfg.d, cfg.p()?);
    let cap = cfg.effective_dim_cap();
    let rng = RngSpec::new(cfg.master_seed, stream);

    let (graph, x) = match cfg.model {
        Model::Flag => {
            let g = sample_gnp(n, p, &rng)?;
            let x = clique_complex(&g, cfg.cap());
            (g, x)
        }
        Model::LinialMeshulam => {
            let x = sample_linial_meshulam(n, d, p, &rng)?;
            let x = if x.dim().is_some_and(|k| k > cap) { x.skeleton(cap) } else { x };
            (x.one_skeleton(), x)
        }
    };
    let truncated = x.face_count(cap) > 0;

    let mut f: Vec<usize> = (0..=cap).map(|k| x.face_count(k)).collect();
    f.resize(f.len().max(5), 0);

    let mut betti = Vec::new();
    for &coeff in &obs.betti_fields {
        betti.push(FieldBetti { field: coeff.to_string(), betti: betti_numbers(&x, coeff)? });
        // the top stored degree of a truncated complex is not the true homology
        // but the identity holds for the stored complex in every case
        if !euler_identity_holds(&x, coeff)? {
            return Err(Error::Invariant(format!("Euler identity fails over {coeff}")));
        }
    }

    let (cp_count, cp_induced) = if obs.census && cfg.model == Model::Flag {
        let (all, induced) = count_crosspolytopes(&graph, d);
        (Some(all), Some(induced))
    } else {
        (None, None)
    };

    let (collapse_status, surviving) = if obs.collapse {
        let full;
        let target = if truncated && cfg.model == Model::Flag {
            full = clique_complex(&graph, DimCap::Unbounded);
            &full
        } else {
            &x
        };
        let out = almost_d_collapse(target, d, collapse_seed(cfg.master_seed, stream));
        (Some(out.status), Some(out.surviving_crosspolytopes.len()))
    } else {
        (None, None)
    };

    if collapse_status == Some(CollapseStatus::AlmostCollapsed) {
        if let Some(b) = betti.iter().find(|b| b.field == Coefficients::Rational.to_string()) {
            if b.betti.get(d).copied() != surviving {
                return Err(Error::Invariant(format!(
                    "almost collapsed with {} surviving copies but β_{d}(Q) = {:?}",
                    surviving.unwrap_or(0),
                    b.betti.get(d)
                )));
            }
        }
    }

    let max_deg: Vec<usize> = (1..d).map(|i| max_face_degree(&x, i)).collect();
    let max_vertex_degree = graph.max_degree();
    let c_bounded = match (obs.c_bounded, cfg.probability) {
        (true, ProbabilitySpec::C(c)) => {
            let c = BigRational::from_float(c).ok_or_else(|| Error::Config(format!("c = {c} is not finite")))?;
            Some(max_deg.iter().enumerate().all(|(j, &deg)| within_face_degree_bound(deg, j + 1, d, n, &c)))
        }
        _ => None,
    };

    let morse_slack = if d == 2 && cap >= 3 && !obs.betti_fields.is_empty() {
        let m = morse_inequality_check(&x)?;
        if !m.holds() {
            return Err(Error::Invariant(format!("Morse inequality fails: β₂ = {} < {}", m.beta2, m.rhs())));
        }
        Some(m.slack())
    } else {
        None
    };

    let mut torsion = Vec::new();
    for &k in &obs.torsion_degrees {
        torsion.push((k, homology_with_torsion(&x, k)?.torsion));
    }

    let pi1 = obs.pi1.then(|| check_pi1_preconditions(&x, DEFAULT_VERTEX_BOUND));
    let wall_ms = if obs.timing { start.elapsed().as_millis() as u64 } else { 0 };

    Ok(TrialRecord {
        stream,
        f,
        betti,
        cp_count,
        cp_induced,
        collapse_status,
        surviving,
        max_deg,
        max_vertex_degree,
        c_bounded,
        morse_slack,
        has_cycle: graph.has_cycle(),
        torsion,
        pi1,
        wall_ms,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialFailure {
    pub stream: u64,
    pub message: String,
    pub invariant: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Aggregates {
    pub trials_ok: usize,
    pub trials_failed: usize,
    pub mean_f: Vec<f64>,
    /// Mean β_d per field.
    pub mean_betti_d: Vec<(String, f64)>,
    pub cp_mean: Option<f64>,
    pub cp_variance: Option<f64>,
    /// `cp_histogram[k]` trials had exactly k embedded copies.
    pub cp_histogram: Vec<u64>,
    pub status_counts: BTreeMap<String, usize>,
    pub cycle_fraction: f64,
    pub max_vertex_degree: usize,
    pub c_bounded_pass: Option<usize>,
    #[serde(serialize_with = "crate::bigint_serde::opt")]
    pub torsion_max: Option<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub p: f64,
    pub records: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
    pub aggregates: Aggregates,
}

impl ExperimentResult {
    pub fn has_invariant_violation(&self) -> bool {
        self.failures.iter().any(|f| f.invariant)
    }
}

/// Runs every trial on a pool of `cfg.workers` threads; records come back in
/// stream order, so the result does not depend on the worker count.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let outcomes: Vec<Result<TrialRecord>> =
        pool.install(|| (0..cfg.trials).into_par_iter().map(|s| run_valid_trial(cfg, s).map_err(|e| trial_error(s, e))).collect());

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (stream, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => failures.push(TrialFailure { stream: stream as u64, invariant: e.is_invariant(), message: e.to_string() }),
        }
    }
    let aggregates = aggregate(cfg, &records, failures.len());
    Ok(ExperimentResult { config: cfg.clone(), p: cfg.p()?, records, failures, aggregates })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn aggregate(cfg: &ExperimentConfig, records: &[TrialRecord], failed: usize) -> Aggregates {
    let width = records.first().map_or(0, |r| r.f.len());
    let mean_f = (0..width).map(|k| mean(records.iter().map(|r| r.f[k] as f64)).unwrap_or(0.0)).collect();
    let mean_betti_d = cfg
        .observables
        .betti_fields
        .iter()
        .filter_map(|&coeff| {
            mean(records.iter().filter_map(|r| r.betti_d(coeff, cfg.d)).map(|b| b as f64)).map(|m| (coeff.to_string(), m))
        })
        .collect();
    let counts: Vec<usize> = records.iter().filter_map(|r| r.cp_count).collect();
    let cp_mean = mean(counts.iter().map(|&c| c as f64));
    let cp_variance = cp_mean.filter(|_| counts.len() > 1).map(|m| {
        counts.iter().map(|&c| (c as f64 - m).powi(2)).sum::<f64>() / (counts.len() - 1) as f64
    });
    let mut cp_histogram = vec![0u64; counts.iter().max().map_or(0, |&m| m + 1)];
    for &c in &counts {
        cp_histogram[c] += 1;
    }
    let mut status_counts = BTreeMap::new();
    for status in records.iter().filter_map(|r| r.collapse_status) {
        *status_counts.entry(status.to_string()).or_insert(0) += 1;
    }
    let cycles = records.iter().filter(|r| r.has_cycle).count();
    let c_bounded_pass = cfg.observables.c_bounded.then(|| records.iter().filter(|r| r.c_bounded == Some(true)).count());
    Aggregates {
        trials_ok: records.len(),
        trials_failed: failed,
        mean_f,
        mean_betti_d,
        cp_mean,
        cp_variance,
        cp_histogram,
        status_counts,
        cycle_fraction: if records.is_empty() { 0.0 } else { cycles as f64 / records.len() as f64 },
        max_vertex_degree: records.iter().map(|r| r.max_vertex_degree).max().unwrap_or(0),
        c_bounded_pass,
        torsion_max: records.iter().filter_map(|r| r.torsion_max()).max().cloned(),
    }
}

/// Shared by the scan and torsion searches: the flag complex of one trial.
pub(crate) fn trial_complex(cfg: &ExperimentConfig, stream: u64) -> Result<SimplicialComplex> {
    let rng = RngSpec::new(cfg.master_seed, stream);
    let p = cfg.p()?;
    Ok(match cfg.model {
        Model::Flag => clique_complex(&sample_gnp(cfg.n, p, &rng)?, cfg.cap()),
        Model::LinialMeshulam => sample_linial_meshulam(cfg.n, cfg.d, p, &rng)?,
    })
}
