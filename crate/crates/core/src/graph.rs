//! Undirected simple graphs on dense vertex labels `0..n`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Undirected simple graph. Adjacency lists are kept sorted and duplicate-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    /// Builds a graph from arbitrary pairs. Duplicates (in either orientation) collapse.
    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in pairs {
            if u == v {
                return Err(Error::Loop(u));
            }
            for w in [u, v] {
                if w as usize >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut edge_count = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            edge_count += list.len();
        }
        Ok(Graph {
            adj,
            edge_count: edge_count / 2,
        })
    }

    /// Complete graph `K_n`.
    pub fn complete(n: usize) -> Self {
        let adj = (0..n as Vertex)
            .map(|v| (0..n as Vertex).filter(|&w| w != v).collect())
            .collect();
        Graph {
            adj,
            edge_count: n * n.saturating_sub(1) / 2,
        }
    }

    /// The 1-skeleton of the d-dimensional cross-polytope boundary: `K_{2,…,2}`
    /// with `d + 1` parts `{2i, 2i+1}`.
    pub fn cross_polytope(d: usize) -> Self {
        let n = 2 * d + 2;
        let adj = (0..n as Vertex)
            .map(|v| (0..n as Vertex).filter(|&w| w != v && w != (v ^ 1)).collect())
            .collect();
        Graph::from_sorted_adjacency(adj)
    }

    /// Builds from adjacency lists that are already sorted, symmetric and loop-free.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<Vertex>>) -> Self {
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Graph { adj, edge_count }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj
            .get(u as usize)
            .is_some_and(|list| list.binary_search(&v).is_ok())
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as Vertex;
            list.iter().filter(move |&&v| v > u).map(move |&v| (u, v))
        })
    }

    /// Induced subgraph on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[Vertex]) -> Graph {
        let mut position = vec![u32::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            position[v as usize] = i as u32;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<Vertex> = self
                    .neighbors(v)
                    .iter()
                    .filter_map(|&w| {
                        let p = position[w as usize];
                        (p != u32::MAX).then_some(p)
                    })
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Graph::from_sorted_adjacency(adj)
    }

    /// Same vertex set, keeping only the edges between members of `keep`.
    pub fn restrict_to(&self, keep: &[bool]) -> Graph {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(v, list)| {
                if !keep[v] {
                    return Vec::new();
                }
                list.iter().copied().filter(|&w| keep[w as usize]).collect()
            })
            .collect();
        Graph::from_sorted_adjacency(adj)
    }

    /// Number of connected components, isolated vertices included.
    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        for (u, v) in self.edges() {
            uf.union(u as usize, v as usize);
        }
        uf.set_count()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.component_count() == 1
    }

    /// True iff the graph contains a cycle (equivalently, is not a forest).
    pub fn has_cycle(&self) -> bool {
        self.edge_count + self.component_count() > self.vertex_count()
    }

    /// Sorted common neighbourhood of `u` and `v`.
    pub fn common_neighbors(&self, u: Vertex, v: Vertex) -> Vec<Vertex> {
        intersect_sorted(self.neighbors(u), self.neighbors(v))
    }

    /// Text format: `n m` on the first line, then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (lineno, header) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 0, message: "missing `n m` header".into() })?;
        let nums = parse_numbers(header, lineno)?;
        if nums.len() != 2 {
            return Err(Error::Parse { line: lineno + 1, message: "expected `n m`".into() });
        }
        let (n, m) = (nums[0] as usize, nums[1] as usize);
        let mut pairs = Vec::with_capacity(m);
        for (lineno, line) in lines {
            let nums = parse_numbers(line, lineno)?;
            if nums.len() != 2 {
                return Err(Error::Parse { line: lineno + 1, message: "expected `u v`".into() });
            }
            pairs.push((nums[0], nums[1]));
        }
        if pairs.len() != m {
            return Err(Error::Parse {
                line: 1,
                message: format!("header announces {m} edges, found {}", pairs.len()),
            });
        }
        Graph::from_edges(n, pairs)
    }
}

pub(crate) fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<Vertex>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<Vertex>().map_err(|e| Error::Parse {
                line: lineno + 1,
                message: format!("`{tok}`: {e}"),
            })
        })
        .collect()
}

pub(crate) fn intersect_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
    sets: usize,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            sets: n,
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.sets -= 1;
        true
    }

    pub fn set_count(&self) -> usize {
        self.sets
    }
}
