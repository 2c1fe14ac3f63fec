//! Greedy collapsing under a fixed or randomized order.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::exact::{exact_search, SearchResult};
use super::work::{Id, WorkComplex};
use super::{to_steps, CollapseOutcome, CollapseStatus, CollapseStep};
use crate::complex::{link, Face, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::Vertex;

/// Which free pair the greedy collapse takes next, among those of highest dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderPolicy {
    /// The pair whose coface is lexicographically smallest.
    Lex,
    /// Uniformly shuffled priorities; a stuck run is retried `retries` more times.
    Random { retries: usize },
}

impl Default for OrderPolicy {
    fn default() -> Self {
        OrderPolicy::Lex
    }
}

pub(crate) enum Order {
    Lex,
    Random(ChaCha8Rng),
}

impl Order {
    pub(crate) fn random(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Order::Random(rng)
    }

    fn key(&mut self, sigma: Id, tau: Id) -> u64 {
        match self {
            Order::Lex => (tau as u64) << 32 | sigma as u64,
            Order::Random(rng) => rng.next_u64(),
        }
    }
}

/// Collapses free pairs until none is left (or nothing of dimension `≥ stop_dim`
/// remains), never touching a protected face. Returns the pairs in order.
pub(crate) fn run_greedy(
    wc: &mut WorkComplex,
    stop_dim: usize,
    order: &mut Order,
    protected: Option<&[bool]>,
) -> Vec<(Id, Id)> {
    let blocked = |id: Id| protected.is_some_and(|p| p[id as usize]);
    let mut heap: BinaryHeap<(usize, Reverse<u64>, Id, Id)> = BinaryHeap::new();
    let consider = |wc: &WorkComplex, sigma: Id, order: &mut Order, heap: &mut BinaryHeap<_>| {
        if let Some(tau) = wc.free_coface(sigma) {
            if !blocked(sigma) && !blocked(tau) {
                heap.push((wc.dim(tau), Reverse(order.key(sigma, tau)), sigma, tau));
            }
        }
    };
    for id in 0..wc.len() as Id {
        if wc.up(id) == 1 {
            consider(wc, id, order, &mut heap);
        }
    }
    let mut pairs = Vec::new();
    while let Some((_, _, sigma, tau)) = heap.pop() {
        if wc.alive_at_least(stop_dim) == 0 {
            break;
        }
        if wc.free_coface(sigma) != Some(tau) {
            continue;
        }
        wc.collapse(sigma, tau);
        pairs.push((sigma, tau));
        let touched: Vec<Id> = wc.facets(tau).iter().chain(wc.facets(sigma)).copied().filter(|&f| f != sigma).collect();
        for f in touched {
            if !wc.is_alive(f) {
                continue;
            }
            match wc.up(f) {
                1 => consider(wc, f, order, &mut heap),
                0 => {
                    let below: Vec<Id> = wc.facets(f).to_vec();
                    for g in below {
                        if wc.up(g) == 1 {
                            consider(wc, g, order, &mut heap);
                        }
                    }
                }
                _ => {}
            }
        }
    }
    pairs
}

fn outcome_from(x: &SimplicialComplex, wc: &WorkComplex, pairs: &[(Id, Id)], d: usize) -> CollapseOutcome {
    let removed: HashSet<Face> = wc.removed().cloned().collect();
    let status = if wc.alive_at_least(d) == 0 { CollapseStatus::CollapsedBelowD } else { CollapseStatus::Stuck };
    CollapseOutcome {
        steps: to_steps(wc, pairs),
        residual: x.without_faces(&removed),
        status,
        surviving_crosspolytopes: Vec::new(),
        stuck_component: None,
    }
}

/// Collapses `x` greedily towards dimension below `d`, using free faces of
/// dimension `≥ d−1` only.
pub fn greedy_d_collapse(x: &SimplicialComplex, d: usize, policy: OrderPolicy, seed: u64) -> CollapseOutcome {
    assert!(d >= 1, "d-collapsibility needs d >= 1");
    let base = WorkComplex::from_complex(x, d - 1);
    let attempts = match policy {
        OrderPolicy::Lex => 1,
        OrderPolicy::Random { retries } => retries + 1,
    };
    let mut best: Option<(usize, WorkComplex, Vec<(Id, Id)>)> = None;
    for attempt in 0..attempts {
        let mut wc = base.clone();
        let mut order = match policy {
            OrderPolicy::Lex => Order::Lex,
            OrderPolicy::Random { .. } => Order::random(seed, attempt as u64),
        };
        let pairs = run_greedy(&mut wc, d, &mut order, None);
        let left = wc.alive_at_least(d);
        if best.as_ref().is_none_or(|(b, _, _)| left < *b) {
            best = Some((left, wc, pairs));
        }
        if left == 0 {
            break;
        }
    }
    let (_, wc, pairs) = best.expect("at least one attempt");
    outcome_from(x, &wc, &pairs, d)
}

/// Retries for the link collapse before falling back to exhaustive search.
const LINK_RETRIES: u64 = 8;
/// Links with at most this many faces are searched exhaustively when greedy fails.
const LINK_SEARCH_FACES: usize = 80;

/// A (d−1)-collapse of `wc` (faces of dimension `≥ d−2`), if one is found.
fn collapse_link(wc: &WorkComplex, d: usize, seed: u64) -> Option<Vec<(Id, Id)>> {
    for attempt in 0..=LINK_RETRIES {
        let mut trial = wc.clone();
        let mut order = if attempt == 0 { Order::Lex } else { Order::random(seed, attempt) };
        let pairs = run_greedy(&mut trial, d - 1, &mut order, None);
        if trial.alive_at_least(d - 1) == 0 {
            return Some(pairs);
        }
    }
    if wc.len() <= LINK_SEARCH_FACES {
        if let SearchResult::Found(pairs) = exact_search(&mut wc.clone(), d - 1, super::exact::DEFAULT_BUDGET) {
            return Some(pairs);
        }
    }
    None
}

/// Removes every face of dimension `≥ d` through `v` by lifting a
/// (d−1)-collapse of the link of `v`: each link step `(σ, τ)` becomes
/// `(σ ∪ {v}, τ ∪ {v})`.
pub fn collapse_around_vertex(x: &SimplicialComplex, v: Vertex, d: usize) -> Result<CollapseOutcome> {
    assert!(d >= 1, "d-collapsibility needs d >= 1");
    if v as usize >= x.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: x.n() });
    }
    let apex = Face::vertex(v);
    let involved = (d..=x.dim().unwrap_or(0)).any(|k| x.faces(k).iter().any(|f| f.contains_vertex(v)));
    let steps: Vec<CollapseStep> = if !x.contains(&apex) || !involved {
        Vec::new()
    } else {
        let lk = link(x, &apex)?;
        if d == 1 {
            // the only way out is a single edge whose far end is free in the link
            match (lk.dim(), lk.faces(0)) {
                (Some(0), [w]) => vec![CollapseStep { free_face: apex.clone(), coface: apex.with_vertex(w.vertices()[0]) }],
                _ => return Err(Error::LinkNotCollapsible(v)),
            }
        } else {
            let wc = WorkComplex::from_complex(&lk, d - 2);
            let pairs = collapse_link(&wc, d, v as u64).ok_or(Error::LinkNotCollapsible(v))?;
            to_steps(&wc, &pairs)
                .into_iter()
                .map(|s| CollapseStep { free_face: s.free_face.with_vertex(v), coface: s.coface.with_vertex(v) })
                .collect()
        }
    };
    let removed: HashSet<Face> = steps.iter().flat_map(|s| [s.free_face.clone(), s.coface.clone()]).collect();
    let residual = x.without_faces(&removed);
    let status = if (d..=residual.dim().unwrap_or(0)).all(|k| residual.face_count(k) == 0) {
        CollapseStatus::CollapsedBelowD
    } else {
        CollapseStatus::Partial
    };
    Ok(CollapseOutcome { steps, residual, status, surviving_crosspolytopes: Vec::new(), stuck_component: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::replay;
    use crate::complex::{clique_complex, DimCap};
    use crate::graph::Graph;

    fn flag(g: &Graph) -> SimplicialComplex {
        clique_complex(g, DimCap::Unbounded)
    }

    fn c4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap()
    }

    #[test]
    fn greedy_examples() {
        let tet = flag(&Graph::complete(4));
        let out = greedy_d_collapse(&tet, 2, OrderPolicy::Lex, 0);
        assert_eq!(out.status, CollapseStatus::CollapsedBelowD);
        assert_eq!(replay(&tet, &out.steps).unwrap(), out.residual);

        let cycle = flag(&c4());
        let out = greedy_d_collapse(&cycle, 1, OrderPolicy::Lex, 0);
        assert_eq!(out.status, CollapseStatus::Stuck);
        assert_eq!(out.residual, cycle);
        assert!(out.steps.is_empty());

        let oct = flag(&Graph::cross_polytope(2));
        let out = greedy_d_collapse(&oct, 2, OrderPolicy::Random { retries: 8 }, 5);
        assert_eq!(out.status, CollapseStatus::Stuck);
        assert_eq!(out.residual, oct);
    }

    #[test]
    fn lex_order_takes_the_smallest_coface() {
        let tet = flag(&Graph::complete(4));
        let out = greedy_d_collapse(&tet, 2, OrderPolicy::Lex, 0);
        assert_eq!(out.steps[0].coface, Face::new(vec![0, 1, 2, 3]).unwrap());
        assert_eq!(out.steps[0].free_face, Face::new(vec![0, 1, 2]).unwrap());
        assert_eq!(out.trace().lines().next(), Some("0 1 2 -> 0 1 2 3"));
    }

    #[test]
    fn around_a_vertex() {
        // cone over the octahedron with apex 6
        let mut edges: Vec<(u32, u32)> = Graph::cross_polytope(2).edges().collect();
        edges.extend((0..6).map(|v| (v, 6)));
        let cone = flag(&Graph::from_edges(7, edges).unwrap());
        let out = collapse_around_vertex(&cone, 0, 2).unwrap();
        assert_eq!(replay(&cone, &out.steps).unwrap(), out.residual);
        assert!((2..=3).all(|k| out.residual.faces(k).iter().all(|f| !f.contains_vertex(0))));
        assert_eq!(out.status, CollapseStatus::Partial);
        // faces away from 0 are untouched
        for k in 0..=3 {
            for f in cone.faces(k).iter().filter(|f| !f.contains_vertex(0)) {
                assert!(out.residual.contains(f));
            }
        }

        let oct = flag(&Graph::cross_polytope(2));
        assert!(matches!(collapse_around_vertex(&oct, 3, 2), Err(Error::LinkNotCollapsible(3))));

        let isolated = flag(&Graph::from_edges(5, [(0, 1), (0, 2), (1, 2)]).unwrap());
        let out = collapse_around_vertex(&isolated, 4, 2).unwrap();
        assert!(out.steps.is_empty());

        let path = flag(&Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap());
        let out = collapse_around_vertex(&path, 0, 1).unwrap();
        assert_eq!(out.trace(), "0 -> 0 1\n");
        assert!(matches!(collapse_around_vertex(&flag(&c4()), 0, 1), Err(Error::LinkNotCollapsible(0))));
    }
}
