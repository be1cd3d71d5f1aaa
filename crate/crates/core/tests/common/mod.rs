#![allow(dead_code)]

use chm_core::catalog;
use chm_core::{build_dita, fourier_matrix, i_equivalent, EquivalenceTransform, LogHadamardMatrix};
use std::f64::consts::TAU;

use chm_core::RootOfUnitySum;
use rand::seq::IndexedRandom;
use rand::Rng;

pub fn scramble<R: Rng>(l: &LogHadamardMatrix, den: u64, rng: &mut R) -> LogHadamardMatrix {
    l.apply(&EquivalenceTransform::random(l.size(), den, rng)).unwrap()
}

/// A composite `build_dita(M, [N_1..N_k])` with outer size `k` and inner size
/// `n`, every factor a randomly dephased and permuted Fourier matrix.
pub fn random_dita<R: Rng>(k: usize, n: usize, rng: &mut R) -> LogHadamardMatrix {
    let m = scramble(&fourier_matrix(k), 12, rng);
    let ns: Vec<_> = (0..k).map(|_| scramble(&fourier_matrix(n), 12, rng)).collect();
    build_dita(&m, &ns).unwrap()
}

pub fn fixtures() -> Vec<(&'static str, LogHadamardMatrix)> {
    vec![
        ("S8", catalog::s8()),
        ("S12", catalog::s12()),
        ("S16", catalog::s16()),
        ("F6", fourier_matrix(6)),
        ("F8", fourier_matrix(8)),
        ("H8", catalog::h8()),
    ]
}

/// Every partition of `items` into blocks of `size`.
pub fn partitions(items: &[usize], size: usize) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let (first, rest) = (items[0], &items[1..]);
    let mut out = Vec::new();
    for mask in 0u32..(1 << rest.len()) {
        if mask.count_ones() as usize != size - 1 {
            continue;
        }
        let block: Vec<usize> =
            std::iter::once(first).chain((0..rest.len()).filter(|i| mask >> i & 1 == 1).map(|i| rest[i])).collect();
        let left: Vec<usize> = (0..rest.len()).filter(|i| mask >> i & 1 == 0).map(|i| rest[i]).collect();
        for mut tail in partitions(&left, size) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

pub fn oracle(l: &LogHadamardMatrix, n: usize, k: usize) -> bool {
    let all: Vec<usize> = (0..l.size()).collect();
    let col_parts = partitions(&all, n);
    let row_parts = partitions(&all, k);
    col_parts.iter().any(|sets| {
        row_parts.iter().any(|tuples| {
            tuples.iter().all(|t| {
                t.iter().all(|&a| t.iter().all(|&b| sets.iter().all(|s| i_equivalent(l, a, b, s).unwrap())))
            })
        })
    })
}

pub fn random_log<R: Rng>(size: usize, den: u64, rng: &mut R) -> LogHadamardMatrix {
    let rows: Vec<Vec<i64>> =
        (0..size).map(|_| (0..size).map(|_| rng.random_range(0..den as i64)).collect()).collect();
    LogHadamardMatrix::from_numerators(den, &rows).unwrap()
}


pub fn float_abs(s: &RootOfUnitySum) -> f64 {
    let q = s.order() as f64;
    let (mut re, mut im) = (0.0, 0.0);
    for (r, &c) in s.counts().iter().enumerate() {
        let (si, co) = (TAU * r as f64 / q).sin_cos();
        re += c as f64 * co;
        im += c as f64 * si;
    }
    re.hypot(im)
}

/// A sum of at most 16 roots of unity of order at most 72. With `vanishing`
/// it is a union of rotated regular polygons and so sums to zero.
pub fn random_sum<R: Rng>(vanishing: bool, rng: &mut R) -> RootOfUnitySum {
    let q = rng.random_range(2..=72u64);
    let mut counts = vec![0u64; q as usize];
    if vanishing {
        let mut budget = 16;
        while budget >= 2 {
            let divisors: Vec<u64> = (2..=q.min(budget)).filter(|d| q % d == 0).collect();
            let Some(&d) = divisors.choose(rng) else { break };
            let shift = rng.random_range(0..q);
            for t in 0..d {
                counts[((shift + t * (q / d)) % q) as usize] += 1;
            }
            budget -= d;
            if rng.random_bool(0.5) {
                break;
            }
        }
    } else {
        for _ in 0..rng.random_range(1..=16) {
            counts[rng.random_range(0..q) as usize] += 1;
        }
    }
    RootOfUnitySum::new(q, counts).unwrap()
}
