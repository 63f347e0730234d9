//! Reference computations written directly on population arrays, without
//! going through the library's channel code.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_populations(rng: &mut impl Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Bit of qubit `q` (qubit 0 = most significant) in basis index `k`.
pub fn bit(k: usize, q: usize, n: usize) -> usize {
    (k >> (n - 1 - q)) & 1
}

pub fn polarization(p: &[f64], q: usize) -> f64 {
    let n = p.len().trailing_zeros() as usize;
    p.iter()
        .enumerate()
        .map(|(k, &x)| if bit(k, q, n) == 0 { x } else { -x })
        .sum()
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Marginal over all qubits but `q`, by enumerating indices bit by bit.
pub fn marginal(p: &[f64], q: usize) -> Vec<f64> {
    let n = p.len().trailing_zeros() as usize;
    let mut out = vec![0.0; p.len() / 2];
    for (k, &x) in p.iter().enumerate() {
        let mut idx = 0;
        for i in (0..n).filter(|&i| i != q) {
            idx = (idx << 1) | bit(k, i, n);
        }
        out[idx] += x;
    }
    out
}

/// Bath refresh of qubit `q` as marginal times thermal factor.
pub fn refresh(p: &[f64], q: usize, eps: f64) -> Vec<f64> {
    let n = p.len().trailing_zeros() as usize;
    let m = marginal(p, q);
    let th = [(1.0 + eps) / 2.0, (1.0 - eps) / 2.0];
    (0..p.len())
        .map(|k| {
            let mut idx = 0;
            for i in (0..n).filter(|&i| i != q) {
                idx = (idx << 1) | bit(k, i, n);
            }
            m[idx] * th[bit(k, q, n)]
        })
        .collect()
}

pub fn sorted_desc(p: &[f64]) -> Vec<f64> {
    let mut v = p.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

/// Plain PPA iteration: refresh every qubit but 0, then sort; stops when a
/// round changes the populations by at most `tol` or after `cap` rounds.
pub fn ppa_fixed_point(n: usize, eps: f64, tol: f64, cap: usize) -> (Vec<f64>, usize) {
    let mut p = vec![1.0 / (1 << n) as f64; 1 << n];
    for round in 1..=cap {
        let mut next = p.clone();
        for q in 1..n {
            next = refresh(&next, q, eps);
        }
        next = sorted_desc(&next);
        let change = l1(&p, &next);
        p = next;
        if change <= tol {
            return (p, round);
        }
    }
    (p, cap)
}

/// Two-qubit cross-relaxation round on a raw array: equilibrate |00>, |11>
/// at `ratio`, then average across the second bit.
pub fn noe_round_2q(p: [f64; 4], ratio: f64) -> [f64; 4] {
    let s = p[0] + p[3];
    let a = s * ratio / (1.0 + ratio);
    let d = s / (1.0 + ratio);
    let hi = (a + p[1]) / 2.0;
    let lo = (p[2] + d) / 2.0;
    [hi, hi, lo, lo]
}

pub fn noe_fixed_point_2q(p0: [f64; 4], ratio: f64, tol: f64, cap: usize) -> ([f64; 4], usize) {
    let mut p = p0;
    for round in 1..=cap {
        let next = noe_round_2q(p, ratio);
        let change = l1(&p, &next);
        p = next;
        if change <= tol {
            return (p, round);
        }
    }
    (p, cap)
}

pub fn target_2q(p: [f64; 4]) -> f64 {
    p[0] + p[1] - p[2] - p[3]
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            a.swap(j, k - 1);
        }
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    heap(n, &mut a, &mut out);
    out
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

/// Target polarization after moving population k to perm[k].
pub fn permuted_target(p: &[f64], perm: &[usize]) -> f64 {
    let mut out = vec![0.0; p.len()];
    for (k, &t) in perm.iter().enumerate() {
        out[t] = p[k];
    }
    polarization(&out, 0)
}
