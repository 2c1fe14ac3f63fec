//! Embedded copies of the cross-polytope graph `K_{2,…,2}`.

use serde::Serialize;

use crate::complex::Face;
use crate::graph::{intersect_sorted, Graph, Vertex};

/// One copy of the ◇_d graph, given by its `d + 1` antipodal pairs. Each pair is
/// stored as `(a, b)` with `a < b`, and pairs are sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CrossPolytopeHit {
    pub pairs: Vec<(Vertex, Vertex)>,
    /// True when no antipodal pair is an edge, i.e. the copy is an induced subgraph.
    pub induced: bool,
}

impl CrossPolytopeHit {
    pub fn d(&self) -> usize {
        self.pairs.len() - 1
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut v: Vec<Vertex> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        v.sort_unstable();
        v
    }

    /// The `2^{d+1}` d-faces: one vertex from each pair.
    pub fn facets(&self) -> Vec<Face> {
        let k = self.pairs.len();
        let mut out: Vec<Face> = (0u32..1 << k)
            .map(|mask| {
                let mut v: Vec<Vertex> = self
                    .pairs
                    .iter()
                    .enumerate()
                    .map(|(i, &(a, b))| if mask >> i & 1 == 0 { a } else { b })
                    .collect();
                v.sort_unstable();
                Face::from_sorted(v)
            })
            .collect();
        out.sort();
        out
    }
}

/// All copies of the ◇_d graph in `g`, one per antipodal pair partition, in
/// lexicographic order of the pairs. With `induced_only`, antipodes must be non-adjacent.
pub fn detect_crosspolytopes(g: &Graph, d: usize, induced_only: bool) -> Vec<CrossPolytopeHit> {
    let mut out = Vec::new();
    enumerate(g, d, induced_only, |pairs| {
        let induced = pairs.iter().all(|&(a, b)| !g.has_edge(a, b));
        out.push(CrossPolytopeHit { pairs: pairs.to_vec(), induced });
    });
    out
}

/// `(embedded, induced)` copy counts of the ◇_d graph.
pub fn count_crosspolytopes(g: &Graph, d: usize) -> (usize, usize) {
    let (mut all, mut induced) = (0, 0);
    enumerate(g, d, false, |pairs| {
        all += 1;
        if pairs.iter().all(|&(a, b)| !g.has_edge(a, b)) {
            induced += 1;
        }
    });
    (all, induced)
}

/// Pairs are chosen in order of their smaller vertex, and every later vertex
/// must be adjacent to both ends of every earlier pair and exceed its smaller
/// end. The first pair `(u, w)` is found by counting common neighbours above `u`.
fn enumerate(g: &Graph, d: usize, induced_only: bool, mut emit: impl FnMut(&[(Vertex, Vertex)])) {
    assert!(d >= 1, "cross-polytopes are defined for d >= 1");
    let n = g.vertex_count();
    if n < 2 * d + 2 {
        return;
    }
    let mut common = vec![0u32; n];
    let mut touched: Vec<Vertex> = Vec::new();
    let mut chosen: Vec<(Vertex, Vertex)> = Vec::with_capacity(d + 1);
    for u in 0..n as Vertex {
        for &x in g.neighbors(u).iter().filter(|&&x| x > u) {
            for &w in g.neighbors(x).iter().filter(|&&w| w > u) {
                if common[w as usize] == 0 {
                    touched.push(w);
                }
                common[w as usize] += 1;
            }
        }
        let mut seeds: Vec<Vertex> = touched
            .iter()
            .copied()
            .filter(|&w| common[w as usize] as usize >= 2 * d && !(induced_only && g.has_edge(u, w)))
            .collect();
        seeds.sort_unstable();
        for w in seeds {
            {
                let rest: Vec<Vertex> = intersect_sorted(g.neighbors(u), g.neighbors(w))
                    .into_iter()
                    .filter(|&x| x > u)
                    .collect();
                chosen.push((u, w));
                extend(g, &rest, d, induced_only, &mut chosen, &mut emit);
                chosen.pop();
            }
        }
        for &w in &touched {
            common[w as usize] = 0;
        }
        touched.clear();
    }
}

fn extend(
    g: &Graph,
    cands: &[Vertex],
    left: usize,
    induced_only: bool,
    chosen: &mut Vec<(Vertex, Vertex)>,
    emit: &mut impl FnMut(&[(Vertex, Vertex)]),
) {
    if left == 0 {
        emit(chosen);
        return;
    }
    for (i, &a) in cands.iter().enumerate() {
        if cands.len() - i < 2 * left {
            break;
        }
        let after_a = intersect_sorted(&cands[i + 1..], g.neighbors(a));
        for &b in &cands[i + 1..] {
            if induced_only && g.has_edge(a, b) {
                continue;
            }
            let next = intersect_sorted(&after_a, g.neighbors(b));
            if next.len() >= 2 * (left - 1) {
                chosen.push((a, b));
                extend(g, &next, left - 1, induced_only, chosen, emit);
                chosen.pop();
            }
        }
    }
}
