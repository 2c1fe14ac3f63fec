use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::trial::trial_complex;
use super::ExperimentConfig;
use crate::complex::{DimCap, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::homology::homology_with_torsion;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsionTrial {
    pub stream: u64,
    pub rank: usize,
    #[serde(serialize_with = "crate::bigint_serde::seq")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorsionReport {
    pub degree: usize,
    pub n: usize,
    pub p: f64,
    pub planted: bool,
    pub trials: Vec<TorsionTrial>,
    /// Largest torsion coefficient seen and the trial it came from.
    #[serde(serialize_with = "crate::bigint_serde::with_stream")]
    pub largest: Option<(BigInt, u64)>,
}

impl TorsionReport {
    pub fn trials_with_torsion(&self) -> usize {
        self.trials.iter().filter(|t| !t.torsion.is_empty()).count()
    }
}

/// The 6-vertex triangulation of the real projective plane.
pub fn projective_plane() -> SimplicialComplex {
    const FACETS: [[u32; 3]; 10] = [
        [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
        [1, 2, 4], [1, 3, 4], [1, 3, 5], [2, 3, 5], [2, 4, 5],
    ];
    SimplicialComplex::from_facets(6, FACETS.iter().map(|f| Face::from_sorted(f.to_vec())), DimCap::Unbounded)
        .expect("valid facets")
}

/// Torsion of H_k over the trials of `cfg`. With `plant`, a disjoint projective
/// plane is added to every trial complex, so every trial must report a 2 in H₁.
pub fn torsion_search(cfg: &ExperimentConfig, degree: usize, plant: bool) -> Result<TorsionReport> {
    cfg.validate()?;
    if degree == 0 || degree + 1 > cfg.effective_dim_cap() {
        return Err(Error::Config(format!("torsion degree {degree} needs 1 ≤ k ≤ dim_cap − 1")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let trials: Vec<TorsionTrial> = pool.install(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|stream| {
                let mut x = trial_complex(cfg, stream)?;
                if plant {
                    x = x.disjoint_union(&projective_plane());
                }
                let h = homology_with_torsion(&x, degree)?;
                Ok(TorsionTrial { stream, rank: h.rank, torsion: h.torsion })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let largest = trials
        .iter()
        .flat_map(|t| t.torsion.iter().map(move |v| (v.clone(), t.stream)))
        .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
    Ok(TorsionReport { degree, n: cfg.n, p: cfg.p()?, planted: plant, trials, largest })
}
