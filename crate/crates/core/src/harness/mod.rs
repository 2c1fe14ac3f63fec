//! Seeded Monte Carlo trials, aggregation and the statistics on top of them.

mod output;
mod scan;
mod stats;
mod torsion;
mod trial;

pub use output::{csv_header, write_csv, write_json, write_summary_json, ExperimentSummary, VERSION};
pub use scan::{threshold_scan, ScanResult, ScanRow};
pub use stats::{poisson_gof, GofBin, GofReport};
pub use torsion::{projective_plane, torsion_search, TorsionReport, TorsionTrial};
pub use trial::{run_experiment, run_trial, Aggregates, ExperimentResult, FieldBetti, TrialFailure, TrialRecord};

use serde::{Deserialize, Serialize};

use crate::complex::DimCap;
use crate::error::{Error, Result};
use crate::homology::Coefficients;
use crate::models::ProbabilitySpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Clique complex of G(n, p).
    Flag,
    /// Full (d−1)-skeleton plus independent d-faces.
    LinialMeshulam,
}

/// Which observables a trial computes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    /// Betti numbers through the reliable degrees, one vector per field.
    pub betti_fields: Vec<Coefficients>,
    /// Embedded and induced ◇_d counts in the 1-skeleton.
    pub census: bool,
    /// The almost-collapse pipeline.
    pub collapse: bool,
    /// Face-degree bound check; needs a `c` probability.
    pub c_bounded: bool,
    /// Free fundamental group preconditions.
    pub pi1: bool,
    /// Degrees whose integral torsion is computed.
    pub torsion_degrees: Vec<usize>,
    /// Record wall time per trial; off keeps result files reproducible.
    pub timing: bool,
}

impl Default for Observables {
    fn default() -> Self {
        Observables {
            betti_fields: vec![Coefficients::GF2, Coefficients::Rational],
            census: true,
            collapse: true,
            c_bounded: false,
            pi1: false,
            torsion_degrees: Vec::new(),
            timing: false,
        }
    }
}

impl Observables {
    /// Only the f-vector and face degrees.
    pub fn minimal() -> Self {
        Observables { betti_fields: Vec::new(), census: false, collapse: false, ..Observables::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: Model,
    pub n: usize,
    pub d: usize,
    pub probability: ProbabilitySpec,
    pub trials: u64,
    pub master_seed: u64,
    /// Highest face dimension materialized; `None` means `d + 2`.
    pub dim_cap: Option<usize>,
    pub observables: Observables,
    /// Worker threads; 0 lets the pool decide. Left out of result files,
    /// which must not depend on it.
    #[serde(skip_serializing, default)]
    pub workers: usize,
}

impl ExperimentConfig {
    pub fn new(n: usize, d: usize, probability: ProbabilitySpec, trials: u64, master_seed: u64) -> Self {
        ExperimentConfig {
            model: Model::Flag,
            n,
            d,
            probability,
            trials,
            master_seed,
            dim_cap: None,
            observables: Observables::default(),
            workers: 0,
        }
    }

    pub fn effective_dim_cap(&self) -> usize {
        self.dim_cap.unwrap_or(self.d + 2)
    }

    pub fn cap(&self) -> DimCap {
        DimCap::Bounded(self.effective_dim_cap())
    }

    pub fn p(&self) -> Result<f64> {
        self.probability.resolve(self.n, self.d)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.d == 0 {
            return Err(Error::Config("d must be at least 1".into()));
        }
        self.p()?;
        let cap = self.effective_dim_cap();
        if !self.observables.betti_fields.is_empty() && cap < self.d + 1 {
            return Err(Error::Config(format!("Betti numbers in degree {} need dim_cap ≥ {}", self.d, self.d + 1)));
        }
        if let Some(&k) = self.observables.torsion_degrees.iter().find(|&&k| k + 1 > cap || k == 0) {
            return Err(Error::Config(format!("torsion degree {k} needs 1 ≤ k ≤ dim_cap − 1")));
        }
        if self.observables.c_bounded && !matches!(self.probability, ProbabilitySpec::C(_)) {
            return Err(Error::Config("the c-bounded check needs a c probability".into()));
        }
        for coeff in &self.observables.betti_fields {
            crate::homology::betti_numbers(&crate::complex::SimplicialComplex::empty(0, DimCap::Unbounded), *coeff)?;
        }
        Ok(())
    }
}
