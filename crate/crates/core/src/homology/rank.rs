//! Matrix ranks over GF(2), GF(p) and the rationals.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::boundary::BoundaryMatrix;

/// Large primes for the rational rank check.
pub const RATIONAL_PRIMES: [u64; 2] = [2_147_483_647, 1_000_000_007];

/// Rank over GF(2) by column reduction on sparse index columns.
pub fn rank_gf2(m: &BoundaryMatrix) -> usize {
    let mut pivot_col: HashMap<u32, usize> = HashMap::new();
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(m.cols());
    let mut rank = 0;
    let mut scratch = Vec::new();
    for col in &m.columns {
        let mut c: Vec<u32> = col.iter().map(|&(r, _)| r).collect();
        while let Some(&low) = c.last() {
            match pivot_col.get(&low) {
                Some(&other) => {
                    xor_into(&mut c, &reduced[other], &mut scratch);
                }
                None => {
                    pivot_col.insert(low, reduced.len());
                    rank += 1;
                    break;
                }
            }
        }
        reduced.push(c);
    }
    rank
}

fn xor_into(a: &mut Vec<u32>, b: &[u32], scratch: &mut Vec<u32>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&a[i..]);
    scratch.extend_from_slice(&b[j..]);
    std::mem::swap(a, scratch);
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Rank over GF(p) for a prime `p < 2^32`.
pub fn rank_mod_p(m: &BoundaryMatrix, p: u64) -> usize {
    assert!(p >= 2 && p < (1 << 32), "prime out of range");
    if p == 2 {
        return rank_gf2(m);
    }
    let mut pivot_col: HashMap<u32, usize> = HashMap::new();
    let mut reduced: Vec<Vec<(u32, u64)>> = Vec::with_capacity(m.cols());
    let mut rank = 0;
    for col in &m.columns {
        let mut c: Vec<(u32, u64)> = col
            .iter()
            .map(|&(r, s)| (r, if s > 0 { 1 } else { p - 1 }))
            .collect();
        while let Some(&(low, val)) = c.last() {
            match pivot_col.get(&low) {
                Some(&other) => {
                    let pivot = &reduced[other];
                    let (_, pval) = *pivot.last().unwrap();
                    // c -= (val / pval) * pivot
                    let factor = val * inv_mod(pval, p) % p;
                    c = axpy_mod(&c, pivot, p - factor, p);
                }
                None => {
                    pivot_col.insert(low, reduced.len());
                    rank += 1;
                    break;
                }
            }
        }
        reduced.push(c);
    }
    rank
}

/// `a + factor * b` over GF(p), dropping zeros.
fn axpy_mod(a: &[(u32, u64)], b: &[(u32, u64)], factor: u64, p: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, factor * b[j].1 % p));
            j += 1;
        } else {
            let v = (a[i].1 + factor * b[j].1) % p;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank over ℚ by sparse elimination with rational entries.
pub fn rank_rational_exact(m: &BoundaryMatrix) -> usize {
    let mut pivot_col: HashMap<u32, usize> = HashMap::new();
    let mut reduced: Vec<Vec<(u32, BigRational)>> = Vec::with_capacity(m.cols());
    let mut rank = 0;
    for col in &m.columns {
        let mut c: Vec<(u32, BigRational)> = col
            .iter()
            .map(|&(r, s)| (r, BigRational::from_integer(BigInt::from(s))))
            .collect();
        while let Some((low, val)) = c.last().cloned() {
            match pivot_col.get(&low) {
                Some(&other) => {
                    let pivot = &reduced[other];
                    let pval = &pivot.last().unwrap().1;
                    let factor = -(val / pval);
                    c = axpy_rational(&c, pivot, &factor);
                }
                None => {
                    pivot_col.insert(low, reduced.len());
                    rank += 1;
                    break;
                }
            }
        }
        reduced.push(c);
    }
    rank
}

fn axpy_rational(
    a: &[(u32, BigRational)],
    b: &[(u32, BigRational)],
    factor: &BigRational,
) -> Vec<(u32, BigRational)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, factor * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + factor * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Rank over ℚ: two large primes must agree, otherwise the exact computation decides.
pub fn rank_rational(m: &BoundaryMatrix) -> usize {
    let a = rank_mod_p(m, RATIONAL_PRIMES[0]);
    let b = rank_mod_p(m, RATIONAL_PRIMES[1]);
    if a == b {
        a
    } else {
        rank_rational_exact(m)
    }
}
