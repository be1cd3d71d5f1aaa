//! Spectral pairs in finite Abelian groups and the matrices they produce.
//!
//! Group elements are column vectors of phases (points of the torus),
//! characters are integer row vectors, and the pairing is the dot product
//! reduced mod 1.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{LogHadamardMatrix, PhaseMatrix};
use crate::phase::{PhaseRational, RootOfUnitySum};

/// `Z_{p1 q1} x Z_{p2 q2} x Z_{p3 q3}` with every `p_j, q_j >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    factors: [(u32, u32); 3],
}

impl GroupSpec {
    /// `G_1 = Z_4 x Z_4 x Z_4`, giving `S_8`.
    pub const G1: GroupSpec = GroupSpec {
        factors: [(2, 2), (2, 2), (2, 2)],
    };
    /// `G_2 = Z_4 x Z_4 x Z_9`, giving `S_12`.
    pub const G2: GroupSpec = GroupSpec {
        factors: [(2, 2), (2, 2), (3, 3)],
    };
    /// `G_3 = Z_4 x Z_8 x Z_8`, giving `S_16`.
    pub const G3: GroupSpec = GroupSpec {
        factors: [(2, 2), (4, 2), (2, 4)],
    };

    pub fn new(factors: [(u32, u32); 3]) -> Result<Self> {
        if factors.iter().any(|&(p, q)| p < 2 || q < 2) {
            return Err(Error::InvalidGroup(
                factors
                    .iter()
                    .map(|(p, q)| format!("{p}.{q}"))
                    .collect::<Vec<_>>()
                    .join(","),
            ));
        }
        Ok(GroupSpec { factors })
    }

    pub fn factors(&self) -> [(u32, u32); 3] {
        self.factors
    }

    /// `p1 p2 p3`, the size of the resulting matrix.
    pub fn matrix_size(&self) -> usize {
        self.factors.iter().map(|&(p, _)| p as usize).product()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [(p1, q1), (p2, q2), (p3, q3)] = self.factors;
        write!(f, "{p1}.{q1},{p2}.{q2},{p3}.{q3}")
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidGroup(s.to_string());
        let parts: Vec<&str> = s.trim().split(',').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut factors = [(0, 0); 3];
        for (slot, part) in factors.iter_mut().zip(parts) {
            let (p, q) = part.trim().split_once('.').ok_or_else(bad)?;
            *slot = (p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?);
        }
        GroupSpec::new(factors).map_err(|_| bad())
    }
}

/// A finite set of group elements, each a length-`dim` column vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<PhaseRational>>", into = "Vec<Vec<PhaseRational>>")]
pub struct ElementSet {
    dim: usize,
    elements: Vec<Vec<PhaseRational>>,
}

impl ElementSet {
    pub fn new(dim: usize, elements: Vec<Vec<PhaseRational>>) -> Result<Self> {
        check_vectors(dim, &elements)?;
        Ok(ElementSet { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Vec<PhaseRational>] {
        &self.elements
    }

    /// The elements as the columns of a `dim x len` matrix.
    pub fn as_matrix(&self) -> PhaseMatrix {
        PhaseMatrix::from_rows(
            (0..self.dim)
                .map(|d| self.elements.iter().map(|e| e[d]).collect())
                .collect(),
        )
        .expect("uniform element dimension")
    }
}

impl TryFrom<Vec<Vec<PhaseRational>>> for ElementSet {
    type Error = Error;

    fn try_from(elements: Vec<Vec<PhaseRational>>) -> Result<Self> {
        let dim = elements.first().map_or(0, Vec::len);
        ElementSet::new(dim, elements)
    }
}

impl From<ElementSet> for Vec<Vec<PhaseRational>> {
    fn from(s: ElementSet) -> Self {
        s.elements
    }
}

/// A finite set of characters, each a length-`dim` integer row vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct SpectrumSet {
    dim: usize,
    rows: Vec<Vec<i64>>,
}

impl SpectrumSet {
    pub fn new(dim: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        check_vectors(dim, &rows)?;
        Ok(SpectrumSet { dim, rows })
    }

    /// Builds a set from rows that may repeat, keeping first occurrences.
    pub fn collect(dim: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let rows: Vec<_> = rows.into_iter().filter(|r| seen.insert(r.clone())).collect();
        Self::new(dim, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }
}

impl TryFrom<Vec<Vec<i64>>> for SpectrumSet {
    type Error = Error;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        SpectrumSet::new(dim, rows)
    }
}

impl From<SpectrumSet> for Vec<Vec<i64>> {
    fn from(s: SpectrumSet) -> Self {
        s.rows
    }
}

fn check_vectors<T: Eq + std::hash::Hash + fmt::Debug>(dim: usize, vs: &[Vec<T>]) -> Result<()> {
    if let Some(v) = vs.iter().find(|v| v.len() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "vector {v:?} has length {}, expected {dim}",
            v.len()
        )));
    }
    let mut seen = HashSet::new();
    for v in vs {
        if !seen.insert(v) {
            return Err(Error::DuplicateElement(format!("{v:?}")));
        }
    }
    Ok(())
}

fn pairing(character: &[i64], element: &[PhaseRational]) -> PhaseRational {
    character.iter().zip(element).map(|(&h, &g)| g.mul_int(h)).sum()
}

/// `entry[i][k] = <S_i, T_k>` mod 1.
pub fn spectral_product(s: &SpectrumSet, t: &ElementSet) -> Result<PhaseMatrix> {
    if s.dim != t.dim {
        return Err(Error::DimensionMismatch(format!(
            "characters of dimension {} against elements of dimension {}",
            s.dim, t.dim
        )));
    }
    PhaseMatrix::from_rows(
        s.rows
            .iter()
            .map(|h| t.elements.iter().map(|g| pairing(h, g)).collect())
            .collect(),
    )
}

/// `sum_{a in T} e^{2 pi i <r, a>}`, the Fourier transform of the indicator of `T` at `r`.
pub fn character_sum(r: &[i64], t: &ElementSet) -> RootOfUnitySum {
    RootOfUnitySum::from_phases(t.elements.iter().map(|g| pairing(r, g)))
}

/// `S` is a spectrum of `T`: `|S| = |T|` and `S T` is log-Hadamard.
pub fn is_spectrum(s: &SpectrumSet, t: &ElementSet) -> Result<bool> {
    let product = spectral_product(s, t)?;
    if s.len() != t.len() || s.is_empty() {
        return Ok(false);
    }
    Ok(LogHadamardMatrix::try_from(product)?.is_hadamard())
}

/// The zero-set form of [`is_spectrum`]: `|S| = |T|` and the character sum of
/// `T` vanishes at every nonzero difference in `S - S`.
pub fn is_spectrum_by_zero_set(s: &SpectrumSet, t: &ElementSet) -> Result<bool> {
    if s.dim != t.dim {
        return Err(Error::DimensionMismatch(format!(
            "characters of dimension {} against elements of dimension {}",
            s.dim, t.dim
        )));
    }
    if s.len() != t.len() || s.is_empty() {
        return Ok(false);
    }
    for (i, a) in s.rows.iter().enumerate() {
        for b in &s.rows[i + 1..] {
            let r: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            if r.iter().all(|&x| x == 0) {
                continue;
            }
            if !character_sum(&r, t).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_dita_inputs(m: &LogHadamardMatrix, ns: &[LogHadamardMatrix]) -> Result<usize> {
    let k = m.size();
    if ns.len() != k {
        return Err(Error::DimensionMismatch(format!(
            "a {k}x{k} outer matrix needs {k} inner matrices, got {}",
            ns.len()
        )));
    }
    let n = ns[0].size();
    if let Some(bad) = ns.iter().find(|x| x.size() != n) {
        return Err(Error::DimensionMismatch(format!(
            "inner matrices must share a size: {n} vs {}",
            bad.size()
        )));
    }
    for x in std::iter::once(m).chain(ns) {
        if let Some((row_a, row_b)) = x.first_non_orthogonal_rows() {
            return Err(Error::NotHadamard { row_a, row_b });
        }
    }
    Ok(n)
}

/// Block `(i, j)` of the result is `log m_ij + log N_j`.
pub fn build_dita(m: &LogHadamardMatrix, ns: &[LogHadamardMatrix]) -> Result<LogHadamardMatrix> {
    let n = check_dita_inputs(m, ns)?;
    Ok(LogHadamardMatrix::from_fn(n * m.size(), |r, c| {
        let (i, a) = (r / n, r % n);
        let (j, b) = (c / n, c % n);
        m.get(i, j) + ns[j].get(a, b)
    }))
}

/// The spectral pair `(Gamma, Sigma)` in `T^{n+k}` whose product is
/// `build_dita(m, ns)`.
///
/// Element `(m, r)` of `Gamma` is column `r` of `log N_m` stacked over column
/// `m` of `log M`; character `(i, j)` of `Sigma` is `e_j + e_{n+i}`.
pub fn dita_as_spectral_pair(
    m: &LogHadamardMatrix,
    ns: &[LogHadamardMatrix],
) -> Result<(ElementSet, SpectrumSet)> {
    let n = check_dita_inputs(m, ns)?;
    let k = m.size();
    let dim = n + k;
    let gamma = ns
        .iter()
        .enumerate()
        .flat_map(|(blk, t)| {
            (0..n).map(move |r| {
                (0..n)
                    .map(|a| t.get(a, r))
                    .chain((0..k).map(|i| m.get(i, blk)))
                    .collect()
            })
        })
        .collect();
    let sigma = (0..k)
        .flat_map(|i| {
            (0..n).map(move |j| {
                let mut row = vec![0i64; dim];
                row[j] = 1;
                row[n + i] = 1;
                row
            })
        })
        .collect();
    Ok((ElementSet::new(dim, gamma)?, SpectrumSet::new(dim, sigma)?))
}

/// `A = {0, .., (p1-1)/(p1 q1)} x ...`, lexicographic.
pub fn szabo_base_set(g: &GroupSpec) -> ElementSet {
    let axes: Vec<Vec<PhaseRational>> = g
        .factors
        .iter()
        .map(|&(p, q)| (0..p).map(|a| PhaseRational::new(a as i64, (p * q) as u64)).collect())
        .collect();
    let elements = cartesian(&axes);
    ElementSet::new(3, elements).expect("distinct grid points")
}

fn progression(p: u32, q: u32, offset: i64) -> Vec<i64> {
    (0..p as i64).map(|a| a * q as i64 + offset).collect()
}

/// `S = {0, q1, .., (p1-1) q1} x ...`, lexicographic.
pub fn grid_spectrum(g: &GroupSpec) -> SpectrumSet {
    let axes: Vec<Vec<i64>> = g.factors.iter().map(|&(p, q)| progression(p, q, 0)).collect();
    SpectrumSet::new(3, cartesian(&axes)).expect("distinct grid points")
}

/// The grid spectrum with the three lines `L_1, L_2, L_3` replaced by their
/// `+1` shifts `L_1', L_2', L_3'`, sorted lexicographically.
pub fn szabo_modified_spectrum(g: &GroupSpec) -> SpectrumSet {
    let [(p1, q1), (p2, q2), (p3, q3)] = g.factors;
    let (q1, q2, q3) = (q1 as i64, q2 as i64, q3 as i64);
    let line = |axis: usize, values: Vec<i64>, fixed: [i64; 3]| -> Vec<Vec<i64>> {
        values
            .into_iter()
            .map(|v| {
                let mut e = fixed.to_vec();
                e[axis] = v;
                e
            })
            .collect()
    };
    let removed: HashSet<Vec<i64>> = [
        line(0, progression(p1, q1 as u32, 0), [0, q2, 0]),
        line(1, progression(p2, q2 as u32, 0), [0, 0, q3]),
        line(2, progression(p3, q3 as u32, 0), [q1, 0, 0]),
    ]
    .concat()
    .into_iter()
    .collect();
    let added = [
        line(0, progression(p1, q1 as u32, 1), [0, q2, 0]),
        line(1, progression(p2, q2 as u32, 1), [0, 0, q3]),
        line(2, progression(p3, q3 as u32, 1), [q1, 0, 0]),
    ]
    .concat();
    let mut rows: Vec<Vec<i64>> = grid_spectrum(g)
        .rows
        .into_iter()
        .filter(|r| !removed.contains(r))
        .chain(added)
        .collect();
    rows.sort();
    SpectrumSet::new(3, rows).expect("shifted lines stay disjoint from the grid")
}

/// `S' A` reduced mod 1, a log-Hadamard matrix of size `p1 p2 p3`.
pub fn szabo_matrix(g: &GroupSpec) -> LogHadamardMatrix {
    let product = spectral_product(&szabo_modified_spectrum(g), &szabo_base_set(g))
        .expect("both sets are three-dimensional");
    LogHadamardMatrix::try_from(product).expect("|S'| = |A| = p1 p2 p3")
}

fn cartesian<T: Clone>(axes: &[Vec<T>]) -> Vec<Vec<T>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}
