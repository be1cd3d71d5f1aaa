//! Exhaustive equivalence search between two log-Hadamard matrices.
//!
//! Both matrices are dephased with respect to a chosen anchor row and
//! column, after which only the permutations remain to be found. Rows are
//! matched by their sorted entry multiset; columns are tracked as classes of
//! identical partial column vectors, which must have matching sizes at every
//! step.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{EquivalenceTransform, LogHadamardMatrix};
use crate::phase::PhaseRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "witness", rename_all = "lowercase")]
pub enum EquivalenceOutcome {
    /// `apply_equivalence(b, t) == a` for the contained `t`.
    Equivalent(EquivalenceTransform),
    Inequivalent,
    /// The node budget ran out before the search space was covered.
    Exhausted,
}

fn sorted_row(row: &[PhaseRational]) -> Vec<PhaseRational> {
    let mut r = row.to_vec();
    r.sort_unstable();
    r
}

/// `B` dephased so that row `r0` and column `c0` become zero.
fn anchored(b: &LogHadamardMatrix, r0: usize, c0: usize) -> Vec<Vec<PhaseRational>> {
    let n = b.size();
    let corner = b.get(r0, c0);
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| b.get(i, j) - b.get(r0, j) - b.get(i, c0) + corner)
                .collect()
        })
        .collect()
}

struct Search<'a> {
    a: &'a [Vec<PhaseRational>],
    b: &'a [Vec<PhaseRational>],
    a_keys: &'a [Vec<PhaseRational>],
    b_keys: Vec<Vec<PhaseRational>>,
    sigma: Vec<usize>,
    used: Vec<bool>,
    nodes: u64,
    budget: u64,
}

enum Step {
    Found,
    NotFound,
    OutOfBudget,
}

impl Search<'_> {
    /// Joint refinement of column classes after matching `ra` with `rb`.
    /// Returns `None` if some class sizes no longer agree.
    fn refine(&self, ca: &[u32], cb: &[u32], ra: usize, rb: usize) -> Option<(Vec<u32>, Vec<u32>)> {
        let n = ca.len();
        let mut labels: HashMap<(u32, PhaseRational), u32> = HashMap::new();
        let mut sizes: Vec<i64> = Vec::new();
        let mut na = Vec::with_capacity(n);
        for j in 0..n {
            let next = labels.len() as u32;
            let l = *labels.entry((ca[j], self.a[ra][j])).or_insert(next);
            if l as usize == sizes.len() {
                sizes.push(0);
            }
            sizes[l as usize] += 1;
            na.push(l);
        }
        let mut nb = Vec::with_capacity(n);
        for j in 0..n {
            let l = *labels.get(&(cb[j], self.b[rb][j]))?;
            sizes[l as usize] -= 1;
            nb.push(l);
        }
        sizes.iter().all(|&s| s == 0).then_some((na, nb))
    }

    fn extend(&mut self, i: usize, ca: &[u32], cb: &[u32], out: &mut Option<(Vec<u32>, Vec<u32>)>) -> Step {
        let n = self.a.len();
        if i == n {
            *out = Some((ca.to_vec(), cb.to_vec()));
            return Step::Found;
        }
        for r in 0..n {
            if self.used[r] || self.b_keys[r] != self.a_keys[i] {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Step::OutOfBudget;
            }
            let Some((na, nb)) = self.refine(ca, cb, i, r) else {
                continue;
            };
            self.used[r] = true;
            self.sigma[i] = r;
            match self.extend(i + 1, &na, &nb, out) {
                Step::NotFound => {}
                other => return other,
            }
            self.used[r] = false;
        }
        Step::NotFound
    }
}

/// Searches for `t` with `apply_equivalence(b, t) == a`, visiting at most
/// `budget` row-assignment nodes.
pub fn brute_force_equivalent(
    a: &LogHadamardMatrix,
    b: &LogHadamardMatrix,
    budget: u64,
) -> Result<EquivalenceOutcome> {
    let n = a.size();
    if b.size() != n {
        return Err(Error::DimensionMismatch(format!(
            "cannot compare {n}x{n} with {}x{}",
            b.size(),
            b.size()
        )));
    }
    let ad = a.dephase().to_rows();
    let a_keys: Vec<_> = ad.iter().map(|r| sorted_row(r)).collect();
    let mut a_profile = a_keys.clone();
    a_profile.sort();

    let mut nodes = 0u64;
    for r0 in 0..n {
        for c0 in 0..n {
            let bd = anchored(b, r0, c0);
            let b_keys: Vec<_> = bd.iter().map(|r| sorted_row(r)).collect();
            let mut b_profile = b_keys.clone();
            b_profile.sort();
            if b_profile != a_profile {
                continue;
            }
            let mut search = Search {
                a: &ad,
                b: &bd,
                a_keys: &a_keys,
                b_keys,
                sigma: vec![0; n],
                used: vec![false; n],
                nodes,
                budget,
            };
            search.sigma[0] = r0;
            search.used[r0] = true;
            let zeros = vec![0u32; n];
            let mut classes = None;
            let step = search.extend(1, &zeros, &zeros, &mut classes);
            nodes = search.nodes;
            match step {
                Step::OutOfBudget => return Ok(EquivalenceOutcome::Exhausted),
                Step::NotFound => continue,
                Step::Found => {
                    let (ca, cb) = classes.expect("classes recorded on success");
                    let tau = match_columns(&ca, &cb, c0);
                    let t = witness(a, b, &search.sigma, &tau, r0, c0);
                    if b.apply(&t)? == *a {
                        return Ok(EquivalenceOutcome::Equivalent(t));
                    }
                    unreachable!("equivalence witness failed verification");
                }
            }
        }
    }
    Ok(EquivalenceOutcome::Inequivalent)
}

/// Pairs columns of equal class, sending column 0 to `c0`.
fn match_columns(ca: &[u32], cb: &[u32], c0: usize) -> Vec<usize> {
    let n = ca.len();
    let mut pool: HashMap<u32, Vec<usize>> = HashMap::new();
    for j in (0..n).rev() {
        if j != c0 {
            pool.entry(cb[j]).or_default().push(j);
        }
    }
    let mut tau = vec![0; n];
    tau[0] = c0;
    for j in 1..n {
        tau[j] = pool.get_mut(&ca[j]).and_then(Vec::pop).expect("column classes agree");
    }
    tau
}

fn witness(
    a: &LogHadamardMatrix,
    b: &LogHadamardMatrix,
    sigma: &[usize],
    tau: &[usize],
    r0: usize,
    c0: usize,
) -> EquivalenceTransform {
    let n = a.size();
    let shift = b.get(r0, c0) - a.get(0, 0);
    let row_phases = (0..n).map(|i| a.get(i, 0) - b.get(sigma[i], c0) + shift).collect();
    let col_phases = (0..n).map(|j| a.get(0, j) - b.get(r0, tau[j])).collect();
    EquivalenceTransform::new(row_phases, sigma.to_vec(), tau.to_vec(), col_phases)
        .expect("search produces bijections")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::constructions::build_dita;
    use crate::matrix::{fourier_matrix, haagerup_invariant};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identical_fourier() {
        let f4 = fourier_matrix(4);
        match brute_force_equivalent(&f4, &f4, 10_000).unwrap() {
            EquivalenceOutcome::Equivalent(t) => assert_eq!(f4.apply(&t).unwrap(), f4),
            other => panic!("expected equivalence, got {other:?}"),
        }
    }

    #[test]
    fn f4_not_equivalent_to_f2_tensor_f2() {
        let f2 = fourier_matrix(2);
        let k = build_dita(&f2, &[f2.clone(), f2.clone()]).unwrap();
        assert_ne!(haagerup_invariant(&k), haagerup_invariant(&fourier_matrix(4)));
        assert_eq!(
            brute_force_equivalent(&fourier_matrix(4), &k, 100_000).unwrap(),
            EquivalenceOutcome::Inequivalent
        );
    }

    #[test]
    fn planted_witness_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for base in [catalog::s8(), fourier_matrix(6), fourier_matrix(8)] {
            for _ in 0..5 {
                let t = EquivalenceTransform::random(base.size(), 8, &mut rng);
                let a = base.apply(&t).unwrap();
                match brute_force_equivalent(&a, &base, 1_000_000).unwrap() {
                    EquivalenceOutcome::Equivalent(w) => assert_eq!(base.apply(&w).unwrap(), a),
                    other => panic!("expected equivalence, got {other:?}"),
                }
            }
        }
    }

    #[test]
    fn tiny_budget_reports_exhaustion() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = EquivalenceTransform::random(8, 4, &mut rng);
        let a = fourier_matrix(8).apply(&t).unwrap();
        assert_eq!(
            brute_force_equivalent(&a, &fourier_matrix(8), 1).unwrap(),
            EquivalenceOutcome::Exhausted
        );
    }

    #[test]
    fn size_mismatch() {
        assert!(brute_force_equivalent(&fourier_matrix(2), &fourier_matrix(3), 10).is_err());
    }
}
