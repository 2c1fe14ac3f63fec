//! Exhaustive search for d-collapsing sequences on small complexes.

use std::collections::HashSet;

use serde::Serialize;

use super::greedy::{run_greedy, Order};
use super::work::{Id, WorkComplex};
use super::{to_steps, CollapseStep};
use crate::complex::SimplicialComplex;

/// Default node limit for the exhaustive search.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Exactness {
    /// d-collapsible, with a collapsing sequence.
    Yes(Vec<CollapseStep>),
    No,
    BudgetExhausted,
}

impl Exactness {
    pub fn is_yes(&self) -> bool {
        matches!(self, Exactness::Yes(_))
    }
}

pub(crate) enum SearchResult {
    Found(Vec<(Id, Id)>),
    NotFound,
    Exhausted,
}

/// Exact d-collapsibility. A greedy pass answers most `yes` instances; the
/// rest are settled by depth-first search over collapse sequences with a memo
/// of dead-end states.
pub fn is_d_collapsible_exact(x: &SimplicialComplex, d: usize, budget: u64) -> Exactness {
    assert!(d >= 1, "d-collapsibility needs d >= 1");
    let base = WorkComplex::from_complex(x, d - 1);
    let mut wc = base.clone();
    let pairs = run_greedy(&mut wc, d, &mut Order::Lex, None);
    if wc.alive_at_least(d) == 0 {
        return Exactness::Yes(to_steps(&base, &pairs));
    }
    let mut wc = base.clone();
    match exact_search(&mut wc, d, budget) {
        SearchResult::Found(pairs) => Exactness::Yes(to_steps(&base, &pairs)),
        SearchResult::NotFound => Exactness::No,
        SearchResult::Exhausted => Exactness::BudgetExhausted,
    }
}

/// Collapses can be reordered so that their dimensions never increase, so it
/// is enough to branch over free pairs whose coface has the current top dimension.
pub(crate) fn exact_search(wc: &mut WorkComplex, d: usize, budget: u64) -> SearchResult {
    let mut dead: HashSet<Vec<u64>> = HashSet::new();
    let mut path = Vec::new();
    let mut nodes = 0u64;
    match dfs(wc, d, budget, &mut nodes, &mut dead, &mut path) {
        Some(true) => SearchResult::Found(path),
        Some(false) => SearchResult::NotFound,
        None => SearchResult::Exhausted,
    }
}

fn dfs(
    wc: &mut WorkComplex,
    d: usize,
    budget: u64,
    nodes: &mut u64,
    dead: &mut HashSet<Vec<u64>>,
    path: &mut Vec<(Id, Id)>,
) -> Option<bool> {
    if wc.alive_at_least(d) == 0 {
        return Some(true);
    }
    *nodes += 1;
    if *nodes > budget {
        return None;
    }
    let key = wc.state_key();
    if dead.contains(&key) {
        return Some(false);
    }
    let top = wc.top_alive_dim().expect("faces of dimension >= d remain");
    let moves: Vec<(Id, Id)> = wc
        .alive_of_dim(top)
        .flat_map(|tau| wc.facets(tau).iter().map(move |&sigma| (sigma, tau)))
        .filter(|&(sigma, tau)| wc.free_coface(sigma) == Some(tau))
        .collect();
    for (sigma, tau) in moves {
        wc.collapse(sigma, tau);
        path.push((sigma, tau));
        let found = dfs(wc, d, budget, nodes, dead, path);
        if found == Some(true) {
            return found;
        }
        path.pop();
        wc.restore(sigma, tau);
        found?;
    }
    dead.insert(key);
    Some(false)
}
