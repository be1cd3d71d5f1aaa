//! Row equivalences on index sets and the search for Dita block structure.
//!
//! A matrix of size `N = n k` has a `(k)-n` Dita structure when the columns
//! split into `k` sets of `n` indices and the rows split into `n` tuples of
//! `k` rows, such that any two rows of a tuple differ by a constant on each
//! index set. Every Dita-type matrix has such a structure, and the property
//! survives equivalence, so its absence rules Dita-type out. A found
//! structure is only a witness, not a proof of Dita-type.
//!
//! For a fixed column partition, "differs by a constant on every set" is an
//! equivalence relation on rows; tuples exist iff every class size is a
//! multiple of `k`. The search therefore only enumerates column partitions,
//! refining row classes block by block and pruning as soon as a class drops
//! below `k` rows.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::LogHadamardMatrix;
use crate::phase::PhaseRational;

/// Default node limit of [`DitaDetector`]; far above what the catalog fixtures need.
pub const DEFAULT_NODE_LIMIT: u64 = 50_000_000;

fn check_row(l: &LogHadamardMatrix, r: usize) -> Result<()> {
    if r >= l.size() {
        Err(Error::IndexOutOfRange {
            index: r,
            size: l.size(),
        })
    } else {
        Ok(())
    }
}

/// `row_a - row_b` is constant (mod 1) on `index_set`.
pub fn i_equivalent(l: &LogHadamardMatrix, row_a: usize, row_b: usize, index_set: &[usize]) -> Result<bool> {
    check_row(l, row_a)?;
    check_row(l, row_b)?;
    let (&first, rest) = index_set.split_first().ok_or(Error::EmptyIndexSet)?;
    for &c in index_set {
        check_row(l, c)?;
    }
    let d0 = l.get(row_a, first) - l.get(row_b, first);
    Ok(rest.iter().all(|&c| l.get(row_a, c) - l.get(row_b, c) == d0))
}

/// `d` disjoint `n`-sets on each of which every row of `rows` differs from
/// `rows[0]` by a constant. Columns are grouped by their difference vector
/// and each group is cut into consecutive chunks of `n`.
pub fn shared_equivalence(
    l: &LogHadamardMatrix,
    rows: &[usize],
    d: usize,
    n: usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    for &r in rows {
        check_row(l, r)?;
    }
    let Some((&anchor, others)) = rows.split_first() else {
        return Ok(None);
    };
    if n == 0 || d == 0 || d * n > l.size() {
        return Ok(None);
    }
    let mut groups: Vec<(Vec<PhaseRational>, Vec<usize>)> = Vec::new();
    let mut index: HashMap<Vec<PhaseRational>, usize> = HashMap::new();
    for c in 0..l.size() {
        let key: Vec<PhaseRational> = others.iter().map(|&r| l.get(anchor, c) - l.get(r, c)).collect();
        let slot = *index.entry(key.clone()).or_insert_with(|| {
            groups.push((key, Vec::new()));
            groups.len() - 1
        });
        groups[slot].1.push(c);
    }
    let sets: Vec<Vec<usize>> = groups
        .iter()
        .flat_map(|(_, cols)| cols.chunks_exact(n).map(<[usize]>::to_vec))
        .take(d)
        .collect();
    Ok((sets.len() == d).then_some(sets))
}

/// Witness index sets for `(d)-n`-equivalence of two rows, if any.
pub fn dn_equivalent(
    l: &LogHadamardMatrix,
    row_a: usize,
    row_b: usize,
    d: usize,
    n: usize,
) -> Result<Option<Vec<Vec<usize>>>> {
    shared_equivalence(l, &[row_a, row_b], d, n)
}

/// A witness of `(k)-n` Dita structure. Indices are zero-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DitaPattern {
    pub n: usize,
    pub k: usize,
    /// `k` column sets of size `n`.
    pub index_sets: Vec<Vec<usize>>,
    /// `n` row tuples of size `k`.
    pub row_tuples: Vec<Vec<usize>>,
}

fn is_partition(parts: &[Vec<usize>], count: usize, size: usize, total: usize) -> bool {
    let mut seen = vec![false; total];
    parts.len() == count
        && parts.iter().all(|p| {
            p.len() == size && p.iter().all(|&i| i < total && !std::mem::replace(&mut seen[i], true))
        })
        && seen.iter().all(|&s| s)
}

impl DitaPattern {
    /// Re-checks the witness against the definition, pair by pair.
    pub fn verify(&self, l: &LogHadamardMatrix) -> bool {
        let size = l.size();
        if self.n * self.k != size
            || !is_partition(&self.index_sets, self.k, self.n, size)
            || !is_partition(&self.row_tuples, self.n, self.k, size)
        {
            return false;
        }
        self.row_tuples.iter().all(|tuple| {
            tuple.iter().enumerate().all(|(x, &a)| {
                tuple[x + 1..].iter().all(|&b| {
                    self.index_sets
                        .iter()
                        .all(|set| i_equivalent(l, a, b, set).unwrap_or(false))
                })
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DitaSearch {
    Found(DitaPattern),
    NotFound,
    /// The node limit was reached before the search completed.
    Exhausted,
}

impl DitaSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, DitaSearch::Found(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            DitaSearch::Found(_) => "found",
            DitaSearch::NotFound => "none",
            DitaSearch::Exhausted => "exhausted",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DitaDetector {
    node_limit: u64,
}

impl Default for DitaDetector {
    fn default() -> Self {
        DitaDetector {
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

enum Step {
    Found,
    NotFound,
    OutOfBudget,
}

struct PartitionSearch<'a> {
    m: &'a [Vec<PhaseRational>],
    n: usize,
    k: usize,
    nodes: u64,
    limit: u64,
    blocks: Vec<Vec<usize>>,
    leaf_classes: Vec<u32>,
}

impl PartitionSearch<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes <= self.limit
    }

    /// Row classes after adding `block`, or `None` if a class falls below `k`.
    fn refine(&self, classes: &[u32], block: &[usize]) -> Option<Vec<u32>> {
        let first = block[0];
        let mut ids: HashMap<(u32, Vec<PhaseRational>), u32> = HashMap::new();
        let mut sizes: Vec<usize> = Vec::new();
        let out: Vec<u32> = self
            .m
            .iter()
            .zip(classes)
            .map(|(row, &cls)| {
                let key = block[1..].iter().map(|&c| row[c] - row[first]).collect();
                let next = ids.len() as u32;
                let id = *ids.entry((cls, key)).or_insert(next);
                if id as usize == sizes.len() {
                    sizes.push(0);
                }
                sizes[id as usize] += 1;
                id
            })
            .collect();
        sizes.iter().all(|&s| s >= self.k).then_some(out)
    }

    fn run(&mut self, remaining: &[usize], classes: &[u32]) -> Step {
        if remaining.is_empty() {
            let mut sizes: HashMap<u32, usize> = HashMap::new();
            for &c in classes {
                *sizes.entry(c).or_default() += 1;
            }
            if sizes.values().all(|s| s % self.k == 0) {
                self.leaf_classes = classes.to_vec();
                return Step::Found;
            }
            return Step::NotFound;
        }
        let first = remaining[0];
        let rest = &remaining[1..];
        let need = self.n - 1;
        let mut idx: Vec<usize> = (0..need).collect();
        loop {
            if !self.tick() {
                return Step::OutOfBudget;
            }
            let mut block = Vec::with_capacity(self.n);
            block.push(first);
            block.extend(idx.iter().map(|&i| rest[i]));
            if let Some(next) = self.refine(classes, &block) {
                let left: Vec<usize> = rest
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !idx.contains(i))
                    .map(|(_, &c)| c)
                    .collect();
                self.blocks.push(block);
                match self.run(&left, &next) {
                    Step::NotFound => {}
                    other => return other,
                }
                self.blocks.pop();
            }
            if !next_combination(&mut idx, rest.len()) {
                return Step::NotFound;
            }
        }
    }
}

/// Advances `idx` to the next `idx.len()`-subset of `0..m` in lexicographic order.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let r = idx.len();
    let Some(i) = (0..r).rev().find(|&i| idx[i] != i + m - r) else {
        return false;
    };
    idx[i] += 1;
    for j in i + 1..r {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

impl DitaDetector {
    pub fn with_node_limit(node_limit: u64) -> Self {
        DitaDetector { node_limit }
    }

    pub fn node_limit(&self) -> u64 {
        self.node_limit
    }

    /// Is there a `k x n` block of zeros through row 0 and column 0 of the
    /// dephased matrix `m`? Returns `None` when the node limit is hit.
    fn zero_block(&self, m: &[Vec<PhaseRational>], n: usize, k: usize, nodes: &mut u64) -> Option<bool> {
        let size = m.len();
        let zero_cols = |r: usize| -> u128 {
            (0..size)
                .filter(|&c| m[r][c].is_zero())
                .fold(0u128, |acc, c| acc | (1 << c))
        };
        let full = zero_cols(0);
        let candidates: Vec<u128> = (1..size)
            .map(zero_cols)
            .filter(|z| z.count_ones() as usize >= n)
            .collect();
        fn pick(cands: &[u128], need: usize, acc: u128, n: usize, nodes: &mut u64, limit: u64) -> Option<bool> {
            if need == 0 {
                return Some(true);
            }
            for (i, &z) in cands.iter().enumerate() {
                if cands.len() - i < need {
                    break;
                }
                *nodes += 1;
                if *nodes > limit {
                    return None;
                }
                let next = acc & z;
                if next.count_ones() as usize >= n && pick(&cands[i + 1..], need - 1, next, n, nodes, limit)? {
                    return Some(true);
                }
            }
            Some(false)
        }
        pick(&candidates, k - 1, full, n, nodes, self.node_limit)
    }

    /// Complete search for a `(k)-n` Dita structure in `l`.
    pub fn detect(&self, l: &LogHadamardMatrix, n: usize, k: usize) -> Result<DitaSearch> {
        let size = l.size();
        if n == 0 || k == 0 || n * k != size {
            return Err(Error::InvalidFactorization { size, n, k });
        }
        if size > 128 {
            return Err(Error::DimensionMismatch(format!(
                "Dita search supports at most 128x128 matrices, got {size}x{size}"
            )));
        }
        // row classes are invariant under diagonal phases, so work on the dephased form
        let m = l.dephase().to_rows();
        let mut nodes = 0;
        match self.zero_block(&m, n, k, &mut nodes) {
            None => return Ok(DitaSearch::Exhausted),
            Some(false) => return Ok(DitaSearch::NotFound),
            Some(true) => {}
        }
        let mut search = PartitionSearch {
            m: &m,
            n,
            k,
            nodes,
            limit: self.node_limit,
            blocks: Vec::with_capacity(k),
            leaf_classes: Vec::new(),
        };
        let columns: Vec<usize> = (0..size).collect();
        match search.run(&columns, &vec![0; size]) {
            Step::OutOfBudget => Ok(DitaSearch::Exhausted),
            Step::NotFound => Ok(DitaSearch::NotFound),
            Step::Found => {
                let mut by_class: Vec<(u32, Vec<usize>)> = Vec::new();
                for (r, &c) in search.leaf_classes.iter().enumerate() {
                    match by_class.iter_mut().find(|(id, _)| *id == c) {
                        Some((_, rows)) => rows.push(r),
                        None => by_class.push((c, vec![r])),
                    }
                }
                let mut row_tuples: Vec<Vec<usize>> = by_class
                    .iter()
                    .flat_map(|(_, rows)| rows.chunks_exact(k).map(<[usize]>::to_vec))
                    .collect();
                row_tuples.sort();
                let mut index_sets = search.blocks.clone();
                for set in &mut index_sets {
                    set.sort_unstable();
                }
                let pattern = DitaPattern {
                    n,
                    k,
                    index_sets,
                    row_tuples,
                };
                assert!(pattern.verify(l), "Dita witness failed verification");
                Ok(DitaSearch::Found(pattern))
            }
        }
    }

    pub fn is_dita_type(&self, l: &LogHadamardMatrix) -> DitaReport {
        let size = l.size();
        let factorizations: Vec<(usize, usize)> =
            (2..size).filter(|n| size.is_multiple_of(*n)).map(|n| (n, size / n)).collect();
        let transposed = l.transpose();
        let jobs: Vec<(bool, usize, usize)> = [false, true]
            .iter()
            .flat_map(|&t| factorizations.iter().map(move |&(n, k)| (t, n, k)))
            .collect();
        let results: Vec<(bool, FactorizationOutcome)> = jobs
            .par_iter()
            .map(|&(t, n, k)| {
                let target = if t { &transposed } else { l };
                let result = self.detect(target, n, k).expect("valid factorization");
                (t, FactorizationOutcome { n, k, result })
            })
            .collect();
        let (tr, direct): (Vec<_>, Vec<_>) = results.into_iter().partition(|(t, _)| *t);
        DitaReport {
            matrix: String::new(),
            factorizations: direct.into_iter().map(|(_, o)| o).collect(),
            transpose: tr.into_iter().map(|(_, o)| o).collect(),
        }
    }
}

pub fn detect_dita_pattern(l: &LogHadamardMatrix, n: usize, k: usize) -> Result<DitaSearch> {
    DitaDetector::default().detect(l, n, k)
}

/// Runs the detector for every `N = n k` with `n, k >= 2` on the matrix and
/// its transpose. Prime sizes give empty lists.
pub fn is_dita_type(l: &LogHadamardMatrix) -> DitaReport {
    DitaDetector::default().is_dita_type(l)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationOutcome {
    pub n: usize,
    pub k: usize,
    pub result: DitaSearch,
}

impl Serialize for FactorizationOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let found = match &self.result {
            DitaSearch::Found(p) => Some(p),
            _ => None,
        };
        let mut s = serializer.serialize_struct("FactorizationOutcome", 3 + found.is_some() as usize)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("k", &self.k)?;
        s.serialize_field("result", self.result.label())?;
        if let Some(p) = found {
            s.serialize_field("witness", p)?;
        }
        s.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DitaReport {
    pub matrix: String,
    pub factorizations: Vec<FactorizationOutcome>,
    pub transpose: Vec<FactorizationOutcome>,
}

impl DitaReport {
    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.matrix = name.into();
        self
    }

    fn outcomes(&self) -> impl Iterator<Item = &FactorizationOutcome> {
        self.factorizations.iter().chain(&self.transpose)
    }

    pub fn any_found(&self) -> bool {
        self.outcomes().any(|o| o.result.is_found())
    }

    pub fn any_exhausted(&self) -> bool {
        self.outcomes().any(|o| o.result == DitaSearch::Exhausted)
    }

    /// Every search completed without finding a structure.
    pub fn all_none(&self) -> bool {
        self.outcomes().all(|o| o.result == DitaSearch::NotFound)
    }

    pub fn find(&self, n: usize, k: usize, transposed: bool) -> Option<&DitaSearch> {
        let list = if transposed { &self.transpose } else { &self.factorizations };
        list.iter().find(|o| o.n == n && o.k == k).map(|o| &o.result)
    }
}

/// Row structure shared by every member of the known `F_12`-stemming families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OrbitEvidence {
    /// Two `(2)-6`-equivalent rows.
    Pair { rows: [usize; 2], index_sets: Vec<Vec<usize>> },
    /// Three rows, pairwise `(3)-4`-equivalent on common index sets.
    Triple { rows: [usize; 3], index_sets: Vec<Vec<usize>> },
}

/// The first row pair or triple whose presence keeps a 12x12 matrix
/// compatible with the `F_12` families, or `None`.
pub fn f12_orbit_evidence(l: &LogHadamardMatrix) -> Result<Option<OrbitEvidence>> {
    if l.size() != 12 {
        return Err(Error::DimensionMismatch(format!(
            "F12 orbit check needs a 12x12 matrix, got {}x{}",
            l.size(),
            l.size()
        )));
    }
    for a in 0..12 {
        for b in a + 1..12 {
            if let Some(index_sets) = dn_equivalent(l, a, b, 2, 6)? {
                return Ok(Some(OrbitEvidence::Pair { rows: [a, b], index_sets }));
            }
        }
    }
    for a in 0..12 {
        for b in a + 1..12 {
            for c in b + 1..12 {
                if let Some(index_sets) = shared_equivalence(l, &[a, b, c], 3, 4)? {
                    return Ok(Some(OrbitEvidence::Triple { rows: [a, b, c], index_sets }));
                }
            }
        }
    }
    Ok(None)
}

/// `true` iff no two rows are `(2)-6`-equivalent and no three rows are
/// pairwise `(3)-4`-equivalent on common index sets. Apply to the
/// transpose for the column version.
pub fn f12_orbit_exclusion_check(l: &LogHadamardMatrix) -> Result<bool> {
    Ok(f12_orbit_evidence(l)?.is_none())
}
