use std::fmt::Write as _;

use crate::complex::SimplicialComplex;

/// Simplicial boundary ∂_k with sorted-vertex orientation.
///
/// Rows are the (k−1)-faces and columns the k-faces, both in the complex's
/// lexicographic order. Each column stores `(row, ±1)` sorted by row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryMatrix {
    pub degree: usize,
    pub rows: usize,
    pub columns: Vec<Vec<(u32, i8)>>,
}

impl BoundaryMatrix {
    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.columns[col]
            .iter()
            .find(|&&(r, _)| r as usize == row)
            .map_or(0, |&(_, s)| s as i64)
    }

    /// `rows cols nnz` header, then `row col value` lines in column-major order.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {} {}", self.rows, self.cols(), self.nnz());
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, s) in col {
                let _ = writeln!(out, "{r} {c} {s}");
            }
        }
        out
    }

    /// True iff `self ∘ above` vanishes (`self` is ∂_k, `above` is ∂_{k+1}).
    pub fn composes_to_zero(&self, above: &BoundaryMatrix) -> bool {
        if above.rows != self.cols() {
            return false;
        }
        let mut acc: Vec<i64> = vec![0; self.rows];
        for col in &above.columns {
            let mut touched = Vec::new();
            for &(mid, s) in col {
                for &(r, t) in &self.columns[mid as usize] {
                    acc[r as usize] += (s as i64) * (t as i64);
                    touched.push(r as usize);
                }
            }
            for r in touched {
                if acc[r] != 0 {
                    return false;
                }
            }
        }
        true
    }
}

/// ∂_k of `x`. For `k = 0`, or when there are no k-faces, the matrix has no columns.
pub fn boundary_matrix(x: &SimplicialComplex, k: usize) -> BoundaryMatrix {
    if k == 0 {
        return BoundaryMatrix {
            degree: 0,
            rows: 0,
            columns: vec![Vec::new(); x.face_count(0)],
        };
    }
    let rows = x.face_count(k - 1);
    let columns = x
        .faces(k)
        .iter()
        .map(|f| {
            let mut col: Vec<(u32, i8)> = f
                .facets()
                .enumerate()
                .map(|(i, facet)| {
                    let row = x.index_of(&facet).expect("complex is downward closed");
                    (row as u32, if i % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            col.sort_unstable_by_key(|&(r, _)| r);
            col
        })
        .collect();
    BoundaryMatrix { degree: k, rows, columns }
}
