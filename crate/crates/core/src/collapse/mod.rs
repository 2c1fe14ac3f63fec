//! Elementary collapses, d-collapsibility and the almost-d-collapse pipeline.

mod crosspolytope;
mod exact;
mod greedy;
mod pi1;
mod pipeline;
mod work;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};

pub use crosspolytope::{count_crosspolytopes, detect_crosspolytopes, CrossPolytopeHit};
pub use exact::{is_d_collapsible_exact, Exactness, DEFAULT_BUDGET};
pub use greedy::{collapse_around_vertex, greedy_d_collapse, OrderPolicy};
pub use pi1::{check_pi1_preconditions, essentially_2sphere_free, DEFAULT_VERTEX_BOUND, DensityCondition, PredicateReport, SphereCheck};
pub use pipeline::almost_d_collapse;

/// One elementary collapse: `free_face` and its unique coface are removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CollapseStep {
    pub free_face: Face,
    pub coface: Face,
}

impl fmt::Display for CollapseStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.free_face, self.coface)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CollapseStatus {
    /// No face of dimension `≥ d` is left.
    CollapsedBelowD,
    /// Faces of dimension `≥ d` are left and no allowed collapse applies.
    Stuck,
    /// Dimension `≤ d`, and the d-faces left form disjoint cross-polytope boundaries.
    AlmostCollapsed,
    /// A local collapse succeeded but faces of dimension `≥ d` remain elsewhere.
    Partial,
}

impl fmt::Display for CollapseStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CollapseStatus::CollapsedBelowD => "collapsed_below_d",
            CollapseStatus::Stuck => "stuck",
            CollapseStatus::AlmostCollapsed => "almost_collapsed",
            CollapseStatus::Partial => "partial",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CollapseOutcome {
    pub steps: Vec<CollapseStep>,
    pub residual: SimplicialComplex,
    pub status: CollapseStatus,
    pub surviving_crosspolytopes: Vec<CrossPolytopeHit>,
    /// For a stuck pipeline run, the index of the first strongly connected
    /// component that could not be collapsed.
    pub stuck_component: Option<usize>,
}

impl CollapseOutcome {
    /// The steps in trace format, one `σ -> τ` per line.
    pub fn trace(&self) -> String {
        self.steps.iter().map(|s| format!("{s}\n")).collect()
    }
}

/// Applies `steps` to `x`, checking that each is an elementary collapse at the
/// moment it is applied, and returns the resulting complex.
pub fn replay(x: &SimplicialComplex, steps: &[CollapseStep]) -> Result<SimplicialComplex> {
    let lo = steps.iter().map(|s| s.free_face.dim()).min().unwrap_or(0);
    let mut wc = work::WorkComplex::from_complex(x, lo);
    for (i, step) in steps.iter().enumerate() {
        let illegal = |why: &str| Error::Invariant(format!("step {i} ({step}): {why}"));
        if step.coface.dim() != step.free_face.dim() + 1 || !step.free_face.is_subface_of(&step.coface) {
            return Err(illegal("not a facet/coface pair"));
        }
        let sigma = wc.id(&step.free_face).ok_or_else(|| illegal("free face not in the complex"))?;
        let tau = wc.id(&step.coface).ok_or_else(|| illegal("coface not in the complex"))?;
        if wc.free_coface(sigma) != Some(tau) {
            return Err(illegal("face is not free with that coface"));
        }
        wc.collapse(sigma, tau);
    }
    let removed: HashSet<Face> = wc.removed().cloned().collect();
    Ok(x.without_faces(&removed))
}

pub(crate) fn to_steps(wc: &work::WorkComplex, pairs: &[(work::Id, work::Id)]) -> Vec<CollapseStep> {
    pairs
        .iter()
        .map(|&(s, t)| CollapseStep { free_face: wc.face(s).clone(), coface: wc.face(t).clone() })
        .collect()
}

/// Parses a trace written by [`CollapseOutcome::trace`].
pub fn parse_trace(text: &str) -> Result<Vec<CollapseStep>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, line)| {
            let bad = |message: String| Error::Parse { line: i + 1, message };
            let (a, b) = line.split_once("->").ok_or_else(|| bad("expected `σ -> τ`".into()))?;
            let free_face: Face = a.trim().parse().map_err(|e: Error| bad(e.to_string()))?;
            let coface: Face = b.trim().parse().map_err(|e: Error| bad(e.to_string()))?;
            Ok(CollapseStep { free_face, coface })
        })
        .collect()
}
