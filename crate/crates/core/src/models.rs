//! Seeded samplers for G(n,p), X(n,p) and Y_d(n,p), plus reference constants.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::complex::{clique_complex, DimCap, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// A reproducible random stream: `master_seed` picks the key, `stream` the ChaCha stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub master_seed: u64,
    pub stream: u64,
}

impl RngSpec {
    pub fn new(master_seed: u64, stream: u64) -> Self {
        RngSpec { master_seed, stream }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// How the edge (or face) probability is given.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbabilitySpec {
    P(f64),
    /// `p = c·n^{−1/d}`
    C(f64),
    /// `p = n^{−α}`
    Alpha(f64),
}

impl ProbabilitySpec {
    pub fn resolve(self, n: usize, d: usize) -> Result<f64> {
        let n = n as f64;
        let p = match self {
            ProbabilitySpec::P(p) => p,
            ProbabilitySpec::C(c) => c * n.powf(-1.0 / d.max(1) as f64),
            ProbabilitySpec::Alpha(a) => n.powf(-a),
        };
        check_probability(p)?;
        Ok(p)
    }
}

impl std::fmt::Display for ProbabilitySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProbabilitySpec::P(p) => write!(f, "p={p}"),
            ProbabilitySpec::C(c) => write!(f, "c={c}"),
            ProbabilitySpec::Alpha(a) => write!(f, "alpha={a}"),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Probability(p))
    }
}

/// `C(n, k)` exactly, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i + 1) as u128;
    }
    Some(acc)
}

/// The k-subset of `0..n` with the given lexicographic rank.
fn unrank_subset(n: u64, k: u64, mut rank: u128, out: &mut Vec<Vertex>) {
    out.clear();
    let mut lo = 0u64;
    for slot in (1..=k).rev() {
        // subsets whose next element is below `a` number C(n−lo, slot) − C(n−a, slot)
        let total = binomial(n - lo, slot).unwrap();
        let (mut left, mut right) = (lo, n - slot);
        while left < right {
            let mid = (left + right).div_ceil(2);
            if total - binomial(n - mid, slot).unwrap() <= rank {
                left = mid;
            } else {
                right = mid - 1;
            }
        }
        rank -= total - binomial(n - left, slot).unwrap();
        out.push(left as Vertex);
        lo = left + 1;
    }
}

/// Includes each k-subset of `0..n` independently with probability `p`, visiting
/// subsets in lexicographic order and jumping between successes geometrically.
fn sample_subsets<R: Rng>(n: usize, k: usize, p: f64, rng: &mut R, mut emit: impl FnMut(&[Vertex])) {
    let Some(total) = binomial(n as u64, k as u64) else {
        panic!("C({n}, {k}) does not fit in 128 bits");
    };
    if p <= 0.0 || total == 0 {
        return;
    }
    let mut subset = Vec::with_capacity(k);
    if p >= 1.0 {
        for r in 0..total {
            unrank_subset(n as u64, k as u64, r, &mut subset);
            emit(&subset);
        }
        return;
    }
    let skip = Geometric::new(p).expect("probability checked");
    let (n, k) = (n as u64, k as u64);
    // ranks only grow, so the first element and the number of subsets
    // starting below it advance monotonically
    let (mut first, mut below) = (0u64, 0u128);
    let mut tail = Vec::with_capacity(k as usize);
    let mut rank: u128 = 0;
    loop {
        rank = rank.saturating_add(skip.sample(rng) as u128);
        if rank >= total {
            return;
        }
        loop {
            let block = binomial(n - first - 1, k - 1).unwrap();
            if rank < below + block {
                break;
            }
            below += block;
            first += 1;
        }
        unrank_subset(n - first - 1, k - 1, rank - below, &mut tail);
        subset.clear();
        subset.push(first as Vertex);
        subset.extend(tail.iter().map(|&v| v + first as Vertex + 1));
        emit(&subset);
        rank += 1;
    }
}

/// Erdős–Rényi G(n,p).
pub fn sample_gnp(n: usize, p: f64, rng: &RngSpec) -> Result<Graph> {
    check_probability(p)?;
    let mut r = rng.rng();
    let mut edges = Vec::new();
    sample_subsets(n, 2, p, &mut r, |s| edges.push((s[0], s[1])));
    Graph::from_edges(n, edges)
}

/// The flag complex X(n,p), truncated at `dim_cap`.
pub fn sample_flag_complex(n: usize, p: f64, dim_cap: DimCap, rng: &RngSpec) -> Result<SimplicialComplex> {
    Ok(clique_complex(&sample_gnp(n, p, rng)?, dim_cap))
}

/// Linial–Meshulam Y_d(n,p): the complete (d−1)-skeleton plus independent d-faces.
pub fn sample_linial_meshulam(n: usize, d: usize, p: f64, rng: &RngSpec) -> Result<SimplicialComplex> {
    if d == 0 {
        return Err(Error::Config("the Linial–Meshulam model needs d >= 1".into()));
    }
    check_probability(p)?;
    let mut faces: Vec<Vec<Face>> = Vec::with_capacity(d + 1);
    for k in 0..d {
        let mut stratum = Vec::new();
        sample_subsets(n, k + 1, 1.0, &mut rng.rng(), |s| stratum.push(Face::from_sorted(s.to_vec())));
        faces.push(stratum);
    }
    let mut top = Vec::new();
    sample_subsets(n, d + 1, p, &mut rng.rng(), |s| top.push(Face::from_sorted(s.to_vec())));
    faces.push(top);
    Ok(SimplicialComplex::from_sorted_strata(n, faces, DimCap::Unbounded))
}

/// Tabulated thresholds `(γ_d, c_d)` for `d = 2..=5`; approximate values.
const TABLE: [(usize, f64, f64); 4] = [(2, 2.455, 2.754), (3, 3.089, 3.907), (4, 3.509, 4.962), (5, 3.822, 5.984)];

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceConstants {
    pub d: usize,
    pub gamma: f64,
    pub c: f64,
    pub epsilon: f64,
}

impl ReferenceConstants {
    pub fn poisson_mean(&self, c: f64) -> f64 {
        poisson_mean(self.d, c)
    }
}

pub fn reference_constants(d: usize) -> Result<ReferenceConstants> {
    let &(_, gamma, c) = TABLE.iter().find(|row| row.0 == d).ok_or(Error::UntabulatedDimension(d))?;
    Ok(ReferenceConstants { d, gamma, c, epsilon: epsilon(d) })
}

/// `1/(2^{2d+1}·d)`.
pub fn epsilon(d: usize) -> f64 {
    1.0 / (2f64.powi(2 * d as i32 + 1) * d as f64)
}

/// `|Aut(◇_d)| = 2^{d+1}·(d+1)!`.
pub fn cross_polytope_automorphisms(d: usize) -> u64 {
    (1..=d as u64 + 1).product::<u64>() << (d + 1)
}

/// Edges of the ◇_d graph: `2d(d+1)`.
pub fn cross_polytope_edges(d: usize) -> usize {
    2 * d * (d + 1)
}

/// Limiting mean `c^{2d(d+1)} / (2^{d+1}(d+1)!)` of the ◇_d count at `p = c·n^{−1/d}`.
pub fn poisson_mean(d: usize, c: f64) -> f64 {
    c.powi(cross_polytope_edges(d) as i32) / cross_polytope_automorphisms(d) as f64
}

/// Finite-n expectation `(n)_{2d+2}·p^{2d(d+1)} / |Aut(◇_d)|` of the number of ◇_d copies in G(n,p).
pub fn expected_crosspolytopes(n: usize, d: usize, p: f64) -> f64 {
    let falling: f64 = (0..2 * d + 2).map(|i| n.saturating_sub(i) as f64).product();
    falling * p.powi(cross_polytope_edges(d) as i32) / cross_polytope_automorphisms(d) as f64
}

/// Limiting probability that G(n, c/n) contains a cycle, for `0 < c < 1`.
pub fn cycle_probability(c: f64) -> f64 {
    1.0 - (1.0 - c).sqrt() * (c / 2.0 + c * c / 4.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn extreme_probabilities() {
        let rng = RngSpec::new(7, 0);
        assert_eq!(sample_gnp(10, 0.0, &rng).unwrap().edge_count(), 0);
        assert_eq!(sample_gnp(10, 1.0, &rng).unwrap(), Graph::complete(10));
        assert!(matches!(sample_gnp(10, 1.5, &rng), Err(Error::Probability(_))));
        let x = sample_flag_complex(5, 1.0, DimCap::Bounded(4), &rng).unwrap();
        assert_eq!(x.f_vector(), vec![5, 10, 10, 5, 1]);
        let y = sample_flag_complex(7, 0.0, DimCap::Bounded(3), &rng).unwrap();
        assert_eq!(y.f_vector(), vec![7]);
    }

    #[test]
    fn unranking_matches_lexicographic_order() {
        for (n, k) in [(6u64, 2u64), (7, 3), (5, 5), (8, 1)] {
            let mut expected: Vec<Vec<Vertex>> = Vec::new();
            for mask in 0u32..1 << n {
                if mask.count_ones() as u64 == k {
                    expected.push((0..n as Vertex).filter(|v| mask >> v & 1 == 1).collect());
                }
            }
            expected.sort();
            let mut got = Vec::new();
            let mut s = Vec::new();
            for r in 0..binomial(n, k).unwrap() {
                unrank_subset(n, k, r, &mut s);
                got.push(s.clone());
            }
            assert_eq!(got, expected, "n={n} k={k}");
        }
    }

    #[test]
    fn determinism_and_streams() {
        let a = sample_gnp(200, 0.05, &RngSpec::new(1, 3)).unwrap();
        let b = sample_gnp(200, 0.05, &RngSpec::new(1, 3)).unwrap();
        let c = sample_gnp(200, 0.05, &RngSpec::new(1, 4)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn linial_meshulam() {
        let rng = RngSpec::new(11, 2);
        let g = sample_gnp(40, 0.1, &rng).unwrap();
        let y = sample_linial_meshulam(40, 1, 0.1, &rng).unwrap();
        assert_eq!(y.one_skeleton(), g);
        let full = sample_linial_meshulam(7, 2, 1.0, &rng).unwrap();
        assert_eq!(full.f_vector(), vec![7, 21, 35]);
        let bare = sample_linial_meshulam(50, 2, 0.0, &rng).unwrap();
        assert_eq!(bare.f_vector(), vec![50, 1225]);
    }

    #[test]
    fn constants() {
        let k = reference_constants(2).unwrap();
        assert_eq!((k.gamma, k.c), (2.455, 2.754));
        assert_eq!(k.epsilon, 1.0 / 64.0);
        assert!((poisson_mean(2, 1.0) - 1.0 / 48.0).abs() < 1e-15);
        assert_eq!(epsilon(3), 1.0 / 384.0);
        assert!(matches!(reference_constants(6), Err(Error::UntabulatedDimension(6))));
        assert_eq!(cross_polytope_automorphisms(2), 48);
        assert!((cycle_probability(0.5) - 0.0335).abs() < 1e-4);
        let p = ProbabilitySpec::C(1.0).resolve(1000, 2).unwrap();
        assert!((p - 0.031_622_776_6).abs() < 1e-9);
        assert!((expected_crosspolytopes(1000, 2, p) - 0.0206).abs() < 1e-3);
    }

    /// Brute-force automorphism count of the ◇_d graph over all vertex permutations.
    #[test]
    fn automorphism_counts() {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        for d in 1..=3 {
            let g = Graph::cross_polytope(d);
            let n = g.vertex_count();
            let count = permutations(n)
                .into_iter()
                .filter(|perm| g.edges().all(|(u, v)| g.has_edge(perm[u as usize] as Vertex, perm[v as usize] as Vertex)))
                .count();
            assert_eq!(count as u64, cross_polytope_automorphisms(d), "d = {d}");
        }
    }
}
