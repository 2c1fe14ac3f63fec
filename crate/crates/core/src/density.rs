//! Essential density, strict balance and face-degree bounds.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Pow, Signed, Zero};

use crate::complex::{Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};

/// Maximum subgraph density `ρ = max e(H')/v(H')` with a vertex set attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub rho: Rational64,
    pub witness: Vec<Vertex>,
    pub strictly_balanced: bool,
}

/// Dinic max-flow on integer capacities.
struct FlowNetwork {
    head: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

const INFINITE: i64 = i64::MAX / 4;

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork { head: vec![Vec::new(); nodes], to: Vec::new(), cap: Vec::new() }
    }

    fn add_edge(&mut self, u: usize, v: usize, c: i64) {
        self.head[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.head[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    fn levels(&self, s: usize) -> Vec<Option<u32>> {
        let mut level = vec![None; self.head.len()];
        level[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.head[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v].is_none() {
                    level[v] = Some(level[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, pushed: i64, level: &[Option<u32>], next: &mut [usize]) -> i64 {
        if u == t {
            return pushed;
        }
        while next[u] < self.head[u].len() {
            let e = self.head[u][next[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u].map(|l| l + 1) {
                let got = self.augment(v, t, pushed.min(self.cap[e]), level, next);
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            next[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            let level = self.levels(s);
            if level[t].is_none() {
                return total;
            }
            let mut next = vec![0; self.head.len()];
            loop {
                let f = self.augment(s, t, INFINITE, &level, &mut next);
                if f == 0 {
                    break;
                }
                total += f;
            }
        }
    }
}

/// Vertex set maximizing `b·e(S) − a·|S|` (the smallest such set), with its value.
fn densest_for(g: &Graph, a: i64, b: i64) -> (i64, Vec<Vertex>) {
    let n = g.vertex_count();
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    let m = edges.len();
    // source, sink, one node per edge, one per vertex
    let (s, t) = (0, 1);
    let mut net = FlowNetwork::new(2 + m + n);
    for (i, &(u, v)) in edges.iter().enumerate() {
        net.add_edge(s, 2 + i, b);
        net.add_edge(2 + i, 2 + m + u as usize, INFINITE);
        net.add_edge(2 + i, 2 + m + v as usize, INFINITE);
    }
    for v in 0..n {
        net.add_edge(2 + m + v, t, a);
    }
    let cut = net.max_flow(s, t);
    let reachable = net.levels(s);
    let set: Vec<Vertex> = (0..n)
        .filter(|&v| reachable[2 + m + v].is_some())
        .map(|v| v as Vertex)
        .collect();
    (b * m as i64 - cut, set)
}

fn induced_edges(g: &Graph, set: &[Vertex]) -> usize {
    let mut inside = vec![false; g.vertex_count()];
    for &v in set {
        inside[v as usize] = true;
    }
    set.iter()
        .map(|&u| g.neighbors(u).iter().filter(|&&w| w > u && inside[w as usize]).count())
        .sum()
}

/// Essential density by Dinkelbach iteration on max-flow closures; exact.
pub fn essential_density(g: &Graph) -> Result<DensityReport> {
    let (rho, witness) = max_density(g)?;
    let strictly_balanced = strictly_balanced_given(g, rho);
    Ok(DensityReport { rho, witness, strictly_balanced })
}

fn max_density(g: &Graph) -> Result<(Rational64, Vec<Vertex>)> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.edge_count() == 0 {
        return Ok((Rational64::zero(), vec![0]));
    }
    let mut rho = Rational64::new(g.edge_count() as i64, n as i64);
    let mut witness: Vec<Vertex> = (0..n as Vertex).collect();
    loop {
        let (value, set) = densest_for(g, *rho.numer(), *rho.denom());
        if value <= 0 {
            return Ok((rho, witness));
        }
        let next = Rational64::new(induced_edges(g, &set) as i64, set.len() as i64);
        debug_assert!(next > rho);
        rho = next;
        witness = set;
    }
}

fn strictly_balanced_given(g: &Graph, rho: Rational64) -> bool {
    let n = g.vertex_count();
    if Rational64::new(g.edge_count() as i64, n as i64) != rho {
        return false;
    }
    // every proper vertex subset sits inside some g − v
    (0..n as Vertex).all(|v| {
        let rest: Vec<Vertex> = (0..n as Vertex).filter(|&u| u != v).collect();
        rest.is_empty() || max_density(&g.induced(&rest)).is_ok_and(|(r, _)| r < rho)
    })
}

/// ρ(g) is attained by g itself and by no proper subgraph.
pub fn is_strictly_balanced(g: &Graph) -> bool {
    max_density(g).is_ok_and(|(rho, _)| strictly_balanced_given(g, rho))
}

/// `d + 1/(4 + 4d)`.
pub fn density_threshold(d: usize) -> Rational64 {
    let d = d as i64;
    Rational64::from_integer(d) + Rational64::new(1, 4 + 4 * d)
}

/// True iff ρ(g) < d + 1/(4+4d); vacuously true without vertices.
pub fn density_bound_audit(g: &Graph, d: usize) -> bool {
    match max_density(g) {
        Ok((rho, _)) => rho < density_threshold(d),
        Err(_) => true,
    }
}

/// Face-degree maxima against `cⁱ·n^{1−i/d}` for `1 ≤ i < d`.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CBoundedReport {
    pub d: usize,
    pub c: String,
    /// `(i, max degree of an (i−1)-face, bound)` for each `i`.
    pub maxima: Vec<(usize, usize, f64)>,
    pub pass: bool,
}

/// Largest number of i-faces containing a single (i−1)-face.
pub fn max_face_degree(x: &SimplicialComplex, i: usize) -> usize {
    if i == 0 {
        return 0;
    }
    if i == 1 {
        return x.one_skeleton().max_degree();
    }
    let mut counts: HashMap<Face, usize> = HashMap::new();
    for f in x.faces(i) {
        for facet in f.facets() {
            *counts.entry(facet).or_insert(0) += 1;
        }
    }
    counts.into_values().max().unwrap_or(0)
}

/// `deg ≤ cⁱ n^{1−i/d}` decided exactly as `deg^d ≤ c^{id} n^{d−i}`.
pub fn within_face_degree_bound(deg: usize, i: usize, d: usize, n: usize, c: &BigRational) -> bool {
    let lhs = BigRational::from_integer(BigInt::from(deg)).pow(d as i32);
    let rhs = c.pow((i * d) as i32) * BigRational::from_integer(BigInt::from(n)).pow((d - i) as i32);
    lhs <= rhs
}

pub fn c_bounded_check(x: &SimplicialComplex, d: usize, c: &BigRational) -> CBoundedReport {
    let n = x.n();
    let c_f64 = rational_to_f64(c);
    let maxima: Vec<(usize, usize, f64)> = (1..d)
        .map(|i| {
            let bound = c_f64.powi(i as i32) * (n as f64).powf(1.0 - i as f64 / d as f64);
            (i, max_face_degree(x, i), bound)
        })
        .collect();
    let pass = maxima.iter().all(|&(i, deg, _)| within_face_degree_bound(deg, i, d, n, c));
    CBoundedReport { d, c: c.to_string(), maxima, pass }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses `a/b`, an integer, or a finite decimal such as `1.25` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Config(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-BigInt::one(), rest),
        None => (BigInt::one(), s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty()) || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let r = BigRational::new(sign * digits, scale);
    debug_assert!(!r.is_negative() || s.starts_with('-'));
    Ok(r)
}
