//! Smith normal form over the integers.
//!
//! Unit entries are eliminated first on a sparse representation (each one just
//! contributes an invariant factor 1); whatever is left is reduced densely with
//! arbitrary-precision entries, always pivoting on the smallest absolute value.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::boundary::BoundaryMatrix;

/// Dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn from_boundary(m: &BoundaryMatrix) -> Self {
        let mut out = IntMatrix::zeros(m.rows, m.cols());
        for (c, col) in m.columns.iter().enumerate() {
            for &(r, s) in col {
                out.data[r as usize * out.cols + c] = s as i64;
            }
        }
        out
    }
}

/// Sparse row-major integer matrix used for the unit-pivot phase.
struct SparseInt {
    rows: Vec<BTreeMap<u32, i64>>,
    col_rows: Vec<BTreeSet<u32>>,
}

impl SparseInt {
    fn new(rows: usize, cols: usize) -> Self {
        SparseInt {
            rows: vec![BTreeMap::new(); rows],
            col_rows: vec![BTreeSet::new(); cols],
        }
    }

    fn set(&mut self, r: usize, c: usize, v: i64) {
        if v != 0 {
            self.rows[r].insert(c as u32, v);
            self.col_rows[c].insert(r as u32);
        }
    }

    /// A unit entry whose row and column are as short as possible, if any.
    fn find_unit_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, (usize, usize))> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, &v) in row {
                if v.abs() == 1 {
                    let cost = (row.len() - 1) * (self.col_rows[c as usize].len() - 1);
                    if best.is_none_or(|(b, _)| cost < b) {
                        best = Some((cost, (r, c as usize)));
                        if cost == 0 {
                            return best.map(|(_, p)| p);
                        }
                    }
                }
            }
        }
        best.map(|(_, p)| p)
    }

    /// Eliminates the unit pivot at `(r, c)` and drops its row and column.
    /// Returns false (leaving the matrix untouched) if an entry would overflow.
    fn eliminate(&mut self, r: usize, c: usize) -> bool {
        let s = self.rows[r][&(c as u32)];
        let pivot_row: Vec<(u32, i64)> = self.rows[r].iter().map(|(&k, &v)| (k, v)).collect();
        let others: Vec<u32> = self.col_rows[c].iter().copied().filter(|&i| i as usize != r).collect();
        let mut updates: Vec<(u32, Vec<(u32, i64)>)> = Vec::with_capacity(others.len());
        for &i in &others {
            let factor = self.rows[i as usize][&(c as u32)] * s;
            let mut changes = Vec::with_capacity(pivot_row.len());
            for &(k, pv) in &pivot_row {
                let current = self.rows[i as usize].get(&k).copied().unwrap_or(0);
                let Some(delta) = factor.checked_mul(pv) else { return false };
                let Some(next) = current.checked_sub(delta) else { return false };
                if next.unsigned_abs() > (1u64 << 62) {
                    return false;
                }
                changes.push((k, next));
            }
            updates.push((i, changes));
        }
        for (i, changes) in updates {
            for (k, v) in changes {
                if v == 0 {
                    self.rows[i as usize].remove(&k);
                    self.col_rows[k as usize].remove(&i);
                } else {
                    self.rows[i as usize].insert(k, v);
                    self.col_rows[k as usize].insert(i);
                }
            }
        }
        let row = std::mem::take(&mut self.rows[r]);
        for k in row.keys() {
            self.col_rows[*k as usize].remove(&(r as u32));
        }
        true
    }

    fn into_dense_remainder(self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<usize> = (0..self.col_rows.len())
            .filter(|&c| !self.col_rows[c].is_empty())
            .collect();
        let position: BTreeMap<usize, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        self.rows
            .into_iter()
            .filter(|row| !row.is_empty())
            .map(|row| {
                let mut dense = vec![BigInt::zero(); live_cols.len()];
                for (c, v) in row {
                    dense[position[&(c as usize)]] = BigInt::from(v);
                }
                dense
            })
            .collect()
    }
}

/// Nonzero invariant factors `d₁ | d₂ | …` of `m`.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut sparse = SparseInt::new(m.rows, m.cols);
    for r in 0..m.rows {
        for c in 0..m.cols {
            sparse.set(r, c, m.get(r, c));
        }
    }
    invariants_of_sparse(sparse)
}

/// Invariant factors of a boundary matrix, without densifying it first.
pub fn boundary_invariants(m: &BoundaryMatrix) -> Vec<BigInt> {
    let mut sparse = SparseInt::new(m.rows, m.cols());
    for (c, col) in m.columns.iter().enumerate() {
        for &(r, s) in col {
            sparse.set(r as usize, c, s as i64);
        }
    }
    invariants_of_sparse(sparse)
}

fn invariants_of_sparse(mut sparse: SparseInt) -> Vec<BigInt> {
    let mut units = 0usize;
    while let Some((r, c)) = sparse.find_unit_pivot() {
        if !sparse.eliminate(r, c) {
            break;
        }
        units += 1;
    }
    let mut rest = sparse.into_dense_remainder();
    let mut invariants = vec![BigInt::one(); units];
    invariants.extend(dense_snf(&mut rest, None, None));
    invariants
}

type Dense = Vec<Vec<BigInt>>;

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// Reduces `a` in place to diagonal form and returns the nonzero diagonal,
/// normalized to be positive and sorted by divisibility. Row operations are
/// mirrored into `u` and column operations into `v`, so that `u · a₀ · v = a`.
fn dense_snf(a: &mut Dense, mut u: Option<&mut Dense>, mut v: Option<&mut Dense>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        swap_rows(a, u.as_deref_mut(), t, bi);
        swap_cols(a, v.as_deref_mut(), t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    row_axpy(a, u.as_deref_mut(), i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    col_axpy(a, v.as_deref_mut(), j, t, &q);
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // a remainder is now smaller than the pivot: move the smallest one up
                let mut pick: Option<(usize, usize)> = None;
                let mut consider = |i: usize, j: usize, a: &Dense| {
                    if !a[i][j].is_zero()
                        && pick.is_none_or(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                    {
                        pick = Some((i, j));
                    }
                };
                for i in t + 1..rows {
                    consider(i, t, a);
                }
                for j in t + 1..cols {
                    consider(t, j, a);
                }
                let (pi, pj) = pick.expect("a nonzero remainder exists");
                if a[pi][pj].abs() < a[t][t].abs() {
                    swap_rows(a, u.as_deref_mut(), t, pi);
                    swap_cols(a, v.as_deref_mut(), t, pj);
                }
                continue;
            }
            // divisibility of the trailing block by the pivot
            let mut offender = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[i][j].is_zero() && !a[i][j].is_multiple_of(&a[t][t]) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => row_axpy(a, u.as_deref_mut(), t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            if let Some(u) = u.as_deref_mut() {
                for x in u[t].iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        t += 1;
    }
    (0..t).map(|i| a[i][i].clone()).collect()
}

fn swap_rows(a: &mut Dense, u: Option<&mut Dense>, i: usize, j: usize) {
    if i != j {
        a.swap(i, j);
        if let Some(u) = u {
            u.swap(i, j);
        }
    }
}

fn swap_cols(a: &mut Dense, v: Option<&mut Dense>, i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }
}

/// `row_target -= q * row_source`.
fn row_axpy(a: &mut Dense, u: Option<&mut Dense>, target: usize, source: usize, q: &BigInt) {
    fn apply(m: &mut Dense, target: usize, source: usize, q: &BigInt) {
        let src = m[source].clone();
        for (x, s) in m[target].iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *x -= q * s;
            }
        }
    }
    apply(a, target, source, q);
    if let Some(u) = u {
        apply(u, target, source, q);
    }
}

/// `col_target -= q * col_source`.
fn col_axpy(a: &mut Dense, v: Option<&mut Dense>, target: usize, source: usize, q: &BigInt) {
    fn apply(m: &mut Dense, target: usize, source: usize, q: &BigInt) {
        for row in m.iter_mut() {
            if !row[source].is_zero() {
                let delta = q * &row[source];
                row[target] -= delta;
            }
        }
    }
    apply(a, target, source, q);
    if let Some(v) = v {
        apply(v, target, source, q);
    }
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: Vec<Vec<BigInt>>,
    pub d: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl SmithDecomposition {
    pub fn invariants(&self) -> Vec<BigInt> {
        (0..self.d.len().min(self.d.first().map_or(0, Vec::len)))
            .map(|i| self.d[i][i].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    /// Recomputes `U · M · V` and compares with `D`.
    pub fn certifies(&self, m: &IntMatrix) -> bool {
        let mm: Dense = (0..m.rows)
            .map(|r| (0..m.cols).map(|c| BigInt::from(m.get(r, c))).collect())
            .collect();
        let product = mat_mul(&mat_mul(&self.u, &mm, m.rows), &self.v, m.cols);
        product == self.d
    }
}

fn mat_mul(a: &Dense, b: &Dense, inner: usize) -> Dense {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = BigInt::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Dense reduction with transforms; meant for small matrices (certificates, tests).
pub fn smith_decomposition(m: &IntMatrix) -> SmithDecomposition {
    let mut d: Dense = (0..m.rows)
        .map(|r| (0..m.cols).map(|c| BigInt::from(m.get(r, c))).collect())
        .collect();
    let mut u = identity(m.rows);
    let mut v = identity(m.cols);
    dense_snf(&mut d, Some(&mut u), Some(&mut v));
    SmithDecomposition { u, d, v }
}
