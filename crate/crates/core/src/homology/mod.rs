//! Simplicial homology: Betti numbers over fields, integral torsion, Euler checks.

mod boundary;
mod rank;
mod snf;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::complex::{DimCap, SimplicialComplex};
use crate::error::{Error, Result};

pub use boundary::{boundary_matrix, BoundaryMatrix};
pub use rank::{rank_gf2, rank_mod_p, rank_rational, rank_rational_exact, RATIONAL_PRIMES};
pub use snf::{boundary_invariants, smith_decomposition, smith_normal_form, IntMatrix, SmithDecomposition};

/// Coefficient field for Betti numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficients {
    /// The prime field GF(p).
    Gf(u64),
    Rational,
}

impl Coefficients {
    pub const GF2: Coefficients = Coefficients::Gf(2);

    fn validate(self) -> Result<()> {
        match self {
            Coefficients::Gf(p) if !is_prime(p) || p >= 1 << 32 => {
                Err(Error::Config(format!("GF({p}) is not a supported prime field")))
            }
            _ => Ok(()),
        }
    }
}

impl std::fmt::Display for Coefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Coefficients::Gf(p) => write!(f, "GF({p})"),
            Coefficients::Rational => write!(f, "Q"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| p % i != 0)
}

/// Rank of ∂_k over the given field. ∂_1 is handled through connected components.
pub fn boundary_rank(x: &SimplicialComplex, k: usize, coeff: Coefficients) -> usize {
    match k {
        0 => 0,
        // labels that are not vertices are isolated in the 1-skeleton and cancel out
        1 => x.n() - x.one_skeleton().component_count(),
        _ => {
            let m = boundary_matrix(x, k);
            match coeff {
                Coefficients::Gf(p) => rank_mod_p(&m, p),
                Coefficients::Rational => rank_rational(&m),
            }
        }
    }
}

/// Highest degree whose Betti number is determined by the stored faces.
fn top_reliable_degree(x: &SimplicialComplex) -> Option<usize> {
    let dim = x.dim()?;
    match x.dim_cap() {
        DimCap::Unbounded => Some(dim),
        DimCap::Bounded(cap) => cap.checked_sub(1).map(|c| c.min(dim)),
    }
}

/// β_k for `k = 0..=top`, where `top` is the last degree the dimension cap
/// leaves well defined (β_k needs the (k+1)-faces).
pub fn betti_numbers(x: &SimplicialComplex, coeff: Coefficients) -> Result<Vec<usize>> {
    coeff.validate()?;
    let Some(top) = top_reliable_degree(x) else { return Ok(Vec::new()) };
    Ok(betti_through(x, top, coeff))
}

/// Betti numbers of the complex exactly as stored, through its top dimension.
/// In the top degree of a truncated complex this is the homology of the
/// truncation, not of the full flag complex.
pub fn betti_all(x: &SimplicialComplex, coeff: Coefficients) -> Result<Vec<usize>> {
    coeff.validate()?;
    Ok(x.dim().map_or_else(Vec::new, |dim| betti_through(x, dim, coeff)))
}

fn betti_through(x: &SimplicialComplex, top: usize, coeff: Coefficients) -> Vec<usize> {
    let ranks: Vec<usize> = (0..=top + 1).map(|k| boundary_rank(x, k, coeff)).collect();
    (0..=top)
        .map(|k| x.face_count(k) - ranks[k] - ranks[k + 1])
        .collect()
}

/// β_k alone.
pub fn betti(x: &SimplicialComplex, k: usize, coeff: Coefficients) -> Result<usize> {
    coeff.validate()?;
    require_degree(x, k)?;
    Ok(x.face_count(k) - boundary_rank(x, k, coeff) - boundary_rank(x, k + 1, coeff))
}

fn require_degree(x: &SimplicialComplex, k: usize) -> Result<()> {
    if let DimCap::Bounded(cap) = x.dim_cap() {
        if k + 1 > cap {
            return Err(Error::DegreeNotMaterialized { degree: k, needed: k + 1, cap });
        }
    }
    Ok(())
}

/// Integral homology in one degree: free rank and elementary divisors > 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralHomology {
    pub degree: usize,
    pub rank: usize,
    #[serde(serialize_with = "crate::bigint_serde::seq")]
    pub torsion: Vec<BigInt>,
}

pub fn homology_with_torsion(x: &SimplicialComplex, k: usize) -> Result<IntegralHomology> {
    require_degree(x, k)?;
    let rank_k = boundary_rank(x, k, Coefficients::Rational);
    let invariants = boundary_invariants(&boundary_matrix(x, k + 1));
    let rank_above = invariants.len();
    let torsion = invariants.into_iter().filter(|d| !d.is_one()).collect();
    Ok(IntegralHomology {
        degree: k,
        rank: x.face_count(k) - rank_k - rank_above,
        torsion,
    })
}

/// Betti numbers per field, optional torsion per degree, and the Euler characteristic.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub dim_cap: DimCap,
    pub betti: Vec<(Coefficients, Vec<usize>)>,
    /// Elementary divisors > 1 of H_k, indexed by k; empty unless requested.
    #[serde(serialize_with = "crate::bigint_serde::nested")]
    pub torsion: Vec<Vec<BigInt>>,
    pub euler: i64,
}

impl HomologyReport {
    pub fn betti_for(&self, coeff: Coefficients) -> Option<&[usize]> {
        self.betti.iter().find(|(c, _)| *c == coeff).map(|(_, b)| b.as_slice())
    }
}

pub fn homology_report(
    x: &SimplicialComplex,
    fields: &[Coefficients],
    with_torsion: bool,
) -> Result<HomologyReport> {
    let betti = fields
        .iter()
        .map(|&c| Ok((c, betti_numbers(x, c)?)))
        .collect::<Result<Vec<_>>>()?;
    let torsion = if with_torsion {
        match top_reliable_degree(x) {
            Some(top) => (0..=top)
                .map(|k| homology_with_torsion(x, k).map(|h| h.torsion))
                .collect::<Result<Vec<_>>>()?,
            None => Vec::new(),
        }
    } else {
        Vec::new()
    };
    Ok(HomologyReport {
        dim_cap: x.dim_cap(),
        betti,
        torsion,
        euler: x.euler_characteristic(),
    })
}

/// Σ(−1)^k f_k = Σ(−1)^k β_k over the stored complex.
pub fn euler_identity_holds(x: &SimplicialComplex, coeff: Coefficients) -> Result<bool> {
    let betti = betti_all(x, coeff)?;
    let alternating: i64 = betti
        .iter()
        .enumerate()
        .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    Ok(alternating == x.euler_characteristic())
}

/// Both sides of β₂ ≥ f₂ − f₁ − f₃ over the rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MorseReport {
    pub beta2: usize,
    pub f1: usize,
    pub f2: usize,
    pub f3: usize,
}

impl MorseReport {
    pub fn rhs(&self) -> i64 {
        self.f2 as i64 - self.f1 as i64 - self.f3 as i64
    }

    pub fn slack(&self) -> i64 {
        self.beta2 as i64 - self.rhs()
    }

    pub fn holds(&self) -> bool {
        self.slack() >= 0
    }
}

pub fn morse_inequality_check(x: &SimplicialComplex) -> Result<MorseReport> {
    let beta2 = if x.face_count(2) == 0 { 0 } else { betti(x, 2, Coefficients::Rational)? };
    Ok(MorseReport {
        beta2,
        f1: x.face_count(1),
        f2: x.face_count(2),
        f3: x.face_count(3),
    })
}
