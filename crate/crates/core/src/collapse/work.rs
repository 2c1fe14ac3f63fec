//! Mutable face poset used while collapsing.

use std::collections::HashMap;

use crate::complex::{Face, SimplicialComplex};

pub(crate) type Id = u32;

/// The faces of dimension `≥ lo` of a complex, with facet/coface incidences and
/// a count of live cofaces per face. Faces of one dimension get consecutive ids
/// in lexicographic order, so comparing ids compares faces within a dimension.
#[derive(Clone, Debug)]
pub(crate) struct WorkComplex {
    lo: usize,
    faces: Vec<Face>,
    index: HashMap<Face, Id>,
    facets: Vec<Vec<Id>>,
    cofaces: Vec<Vec<Id>>,
    alive: Vec<bool>,
    up: Vec<u32>,
    /// live faces per dimension, offset by `lo`
    alive_count: Vec<usize>,
}

impl WorkComplex {
    /// `strata[i]` holds the faces of dimension `lo + i`, sorted.
    pub(crate) fn from_strata(lo: usize, strata: Vec<Vec<Face>>) -> Self {
        let total: usize = strata.iter().map(Vec::len).sum();
        let mut faces = Vec::with_capacity(total);
        let mut alive_count = Vec::with_capacity(strata.len());
        for stratum in strata {
            alive_count.push(stratum.len());
            faces.extend(stratum);
        }
        let index: HashMap<Face, Id> = faces.iter().enumerate().map(|(i, f)| (f.clone(), i as Id)).collect();
        let mut facets = vec![Vec::new(); faces.len()];
        let mut cofaces = vec![Vec::new(); faces.len()];
        for (i, f) in faces.iter().enumerate() {
            if f.dim() > lo {
                for facet in f.facets() {
                    if let Some(&j) = index.get(&facet) {
                        facets[i].push(j);
                        cofaces[j as usize].push(i as Id);
                    }
                }
            }
        }
        let up = cofaces.iter().map(|c| c.len() as u32).collect();
        WorkComplex {
            lo,
            alive: vec![true; faces.len()],
            faces,
            index,
            facets,
            cofaces,
            up,
            alive_count,
        }
    }

    /// All faces of `x` of dimension at least `lo`.
    pub(crate) fn from_complex(x: &SimplicialComplex, lo: usize) -> Self {
        let top = x.dim().unwrap_or(0);
        let strata = (lo..=top.max(lo)).map(|k| x.faces(k).to_vec()).collect();
        Self::from_strata(lo, strata)
    }

    pub(crate) fn len(&self) -> usize {
        self.faces.len()
    }

    pub(crate) fn face(&self, id: Id) -> &Face {
        &self.faces[id as usize]
    }

    pub(crate) fn id(&self, face: &Face) -> Option<Id> {
        self.index.get(face).copied()
    }

    pub(crate) fn dim(&self, id: Id) -> usize {
        self.faces[id as usize].dim()
    }

    pub(crate) fn is_alive(&self, id: Id) -> bool {
        self.alive[id as usize]
    }

    pub(crate) fn facets(&self, id: Id) -> &[Id] {
        &self.facets[id as usize]
    }

    pub(crate) fn cofaces(&self, id: Id) -> &[Id] {
        &self.cofaces[id as usize]
    }

    pub(crate) fn up(&self, id: Id) -> u32 {
        self.up[id as usize]
    }

    /// The unique live coface of `id` when `id` is free.
    pub(crate) fn free_coface(&self, id: Id) -> Option<Id> {
        if !self.alive[id as usize] || self.up[id as usize] != 1 {
            return None;
        }
        let tau = *self.cofaces[id as usize].iter().find(|&&c| self.alive[c as usize])?;
        (self.up[tau as usize] == 0).then_some(tau)
    }

    /// Removes a free pair. The caller has checked `free_coface(sigma) == Some(tau)`.
    pub(crate) fn collapse(&mut self, sigma: Id, tau: Id) {
        debug_assert_eq!(self.free_coface(sigma), Some(tau));
        self.set_alive(sigma, false);
        self.set_alive(tau, false);
    }

    /// Undoes [`collapse`](Self::collapse).
    pub(crate) fn restore(&mut self, sigma: Id, tau: Id) {
        self.set_alive(tau, true);
        self.set_alive(sigma, true);
    }

    fn set_alive(&mut self, id: Id, alive: bool) {
        debug_assert_ne!(self.alive[id as usize], alive);
        self.alive[id as usize] = alive;
        let k = self.faces[id as usize].dim() - self.lo;
        if alive {
            self.alive_count[k] += 1;
        } else {
            self.alive_count[k] -= 1;
        }
        for i in 0..self.facets[id as usize].len() {
            let f = self.facets[id as usize][i] as usize;
            if alive {
                self.up[f] += 1;
            } else {
                self.up[f] -= 1;
            }
        }
    }

    /// Number of live faces of dimension at least `k`.
    pub(crate) fn alive_at_least(&self, k: usize) -> usize {
        self.alive_count.iter().skip(k.saturating_sub(self.lo)).sum()
    }

    pub(crate) fn top_alive_dim(&self) -> Option<usize> {
        self.alive_count.iter().rposition(|&c| c > 0).map(|i| i + self.lo)
    }

    pub(crate) fn alive_ids(&self) -> impl Iterator<Item = Id> + '_ {
        (0..self.faces.len() as Id).filter(|&i| self.alive[i as usize])
    }

    pub(crate) fn alive_of_dim(&self, k: usize) -> impl Iterator<Item = Id> + '_ {
        self.alive_ids().filter(move |&i| self.faces[i as usize].dim() == k)
    }

    /// Faces removed so far.
    pub(crate) fn removed(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().zip(&self.alive).filter(|(_, &a)| !a).map(|(f, _)| f)
    }

    /// Bitset of live faces, used as a memo key.
    pub(crate) fn state_key(&self) -> Vec<u64> {
        let mut key = vec![0u64; self.faces.len().div_ceil(64)];
        for (i, &a) in self.alive.iter().enumerate() {
            if a {
                key[i / 64] |= 1 << (i % 64);
            }
        }
        key
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{clique_complex, DimCap};
    use crate::graph::Graph;

    #[test]
    fn incidences_and_freeness() {
        let x = clique_complex(&Graph::complete(4), DimCap::Bounded(3));
        let mut wc = WorkComplex::from_complex(&x, 1);
        assert_eq!(wc.len(), 6 + 4 + 1);
        let tet = wc.id(&Face::new(vec![0, 1, 2, 3]).unwrap()).unwrap();
        let tri = wc.id(&Face::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert_eq!(wc.facets(tet).len(), 4);
        assert_eq!(wc.free_coface(tri), Some(tet));
        let edge = wc.id(&Face::new(vec![0, 1]).unwrap()).unwrap();
        assert_eq!(wc.up(edge), 2);
        assert_eq!(wc.free_coface(edge), None);
        wc.collapse(tri, tet);
        assert_eq!(wc.up(edge), 1);
        assert_eq!(wc.top_alive_dim(), Some(2));
        assert_eq!(wc.alive_at_least(2), 3);
        wc.restore(tri, tet);
        assert_eq!(wc.up(edge), 2);
        assert_eq!(wc.alive_at_least(1), 11);
    }
}
