//! Log-Hadamard matrices, equivalence transforms and the Haagerup invariant.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::{PhaseRational, RootOfUnitySum};

/// A rectangular matrix of phases, e.g. the product of a character set and
/// an element set before it is known to be square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhaseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<PhaseRational>,
}

impl PhaseMatrix {
    pub fn from_rows(rows: Vec<Vec<PhaseRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch(format!(
                "ragged rows: expected {c} entries, found {}",
                bad.len()
            )));
        }
        Ok(PhaseMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> PhaseRational {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[PhaseRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }
}

/// An `N x N` matrix of phases; the additive form of a complex matrix with
/// unimodular entries. Orthogonality is not an invariant of the type, see
/// [`LogHadamardMatrix::is_hadamard`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogHadamardMatrix {
    size: usize,
    entries: Vec<PhaseRational>,
}

impl TryFrom<PhaseMatrix> for LogHadamardMatrix {
    type Error = Error;

    fn try_from(m: PhaseMatrix) -> Result<Self> {
        if m.rows != m.cols || m.rows == 0 {
            return Err(Error::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        Ok(LogHadamardMatrix {
            size: m.rows,
            entries: m.entries,
        })
    }
}

impl LogHadamardMatrix {
    pub fn from_rows(rows: Vec<Vec<PhaseRational>>) -> Result<Self> {
        PhaseMatrix::from_rows(rows)?.try_into()
    }

    /// Entries `num[i][j] / den`, reduced mod 1.
    pub fn from_numerators<R: AsRef<[i64]>>(den: u64, num: &[R]) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidPhase("denominator 0".into()));
        }
        Self::from_rows(
            num.iter()
                .map(|r| r.as_ref().iter().map(|&n| PhaseRational::new(n, den)).collect())
                .collect(),
        )
    }

    pub(crate) fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> PhaseRational) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(f(i, j));
            }
        }
        LogHadamardMatrix { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> PhaseRational {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[PhaseRational] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[PhaseRational]> {
        self.entries.chunks(self.size)
    }

    pub fn to_rows(&self) -> Vec<Vec<PhaseRational>> {
        self.rows().map(<[PhaseRational]>::to_vec).collect()
    }

    /// Copy with entry `(i, j)` replaced.
    pub fn with_entry(&self, i: usize, j: usize, value: PhaseRational) -> Self {
        let mut out = self.clone();
        out.entries[i * self.size + j] = value;
        out
    }

    /// Least common denominator of all entries (1 for the zero matrix).
    pub fn common_denominator(&self) -> u64 {
        self.entries.iter().fold(1, |l, p| l.lcm(&p.denominator()))
    }

    /// Numerators over [`LogHadamardMatrix::common_denominator`].
    pub fn numerators(&self) -> (u64, Vec<Vec<u64>>) {
        let den = self.common_denominator();
        let num = self
            .rows()
            .map(|r| r.iter().map(|p| p.scaled_numerator(den).unwrap()).collect())
            .collect();
        (den, num)
    }

    fn rows_orthogonal(&self, a: usize, b: usize) -> bool {
        let diffs = self
            .row(a)
            .iter()
            .zip(self.row(b))
            .map(|(&x, &y)| x - y);
        RootOfUnitySum::from_phases(diffs).is_zero()
    }

    /// First pair `(i, j)`, `i < j`, of rows that are not orthogonal.
    pub fn first_non_orthogonal_rows(&self) -> Option<(usize, usize)> {
        (0..self.size)
            .flat_map(|i| (i + 1..self.size).map(move |j| (i, j)))
            .find(|&(i, j)| !self.rows_orthogonal(i, j))
    }

    /// Exact check that every pair of distinct rows is orthogonal.
    pub fn is_hadamard(&self) -> bool {
        self.first_non_orthogonal_rows().is_none()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.size, |i, j| self.get(j, i))
    }

    /// The transform taking `self` to its dephased form.
    pub fn dephasing_transform(&self) -> EquivalenceTransform {
        let n = self.size;
        let corner = self.get(0, 0);
        EquivalenceTransform {
            row_phases: (0..n).map(|i| corner - self.get(i, 0)).collect(),
            row_perm: (0..n).collect(),
            col_perm: (0..n).collect(),
            col_phases: (0..n).map(|j| -self.get(0, j)).collect(),
        }
    }

    /// Subtracts row 0 from every row, then column 0 from every column.
    pub fn dephase(&self) -> Self {
        let corner = self.get(0, 0);
        Self::from_fn(self.size, |i, j| {
            self.get(i, j) - self.get(0, j) - self.get(i, 0) + corner
        })
    }

    pub fn is_dephased(&self) -> bool {
        self.row(0).iter().all(|p| p.is_zero()) && (0..self.size).all(|i| self.get(i, 0).is_zero())
    }

    /// `result[i][j] = row_phases[i] + self[row_perm[i]][col_perm[j]] + col_phases[j]`.
    pub fn apply(&self, t: &EquivalenceTransform) -> Result<Self> {
        if t.size() != self.size {
            return Err(Error::DimensionMismatch(format!(
                "transform of size {} applied to a {}x{} matrix",
                t.size(),
                self.size,
                self.size
            )));
        }
        Ok(Self::from_fn(self.size, |i, j| {
            t.row_phases[i] + self.get(t.row_perm[i], t.col_perm[j]) + t.col_phases[j]
        }))
    }

    pub fn to_f64_turns(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.iter().map(|p| p.to_f64()).collect()).collect()
    }
}

impl fmt::Debug for LogHadamardMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (den, num) = self.numerators();
        writeln!(f, "1/{den} [")?;
        for r in num {
            let cells: Vec<String> = r.iter().map(u64::to_string).collect();
            writeln!(f, "  {}", cells.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `F_N` in log form: `entries[j][k] = jk/N`.
pub fn fourier_matrix(n: usize) -> LogHadamardMatrix {
    assert!(n >= 1, "Fourier matrix needs N >= 1");
    LogHadamardMatrix::from_fn(n, |j, k| PhaseRational::new(((j * k) % n) as i64, n as u64))
}

pub fn is_hadamard(l: &LogHadamardMatrix) -> bool {
    l.is_hadamard()
}

pub fn transpose(l: &LogHadamardMatrix) -> LogHadamardMatrix {
    l.transpose()
}

pub fn dephase(l: &LogHadamardMatrix) -> LogHadamardMatrix {
    l.dephase()
}

pub fn apply_equivalence(l: &LogHadamardMatrix, t: &EquivalenceTransform) -> Result<LogHadamardMatrix> {
    l.apply(t)
}

/// `D_1 P_1 K P_2 D_2` in log form: diagonal phases and permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceTransform {
    row_phases: Vec<PhaseRational>,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    col_phases: Vec<PhaseRational>,
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&i| i < p.len() && !std::mem::replace(&mut seen[i], true))
}

impl EquivalenceTransform {
    pub fn new(
        row_phases: Vec<PhaseRational>,
        row_perm: Vec<usize>,
        col_perm: Vec<usize>,
        col_phases: Vec<PhaseRational>,
    ) -> Result<Self> {
        let n = row_perm.len();
        if row_phases.len() != n || col_perm.len() != n || col_phases.len() != n {
            return Err(Error::DimensionMismatch(
                "transform components must all have the same length".into(),
            ));
        }
        if !is_permutation(&row_perm) || !is_permutation(&col_perm) {
            return Err(Error::InvalidPermutation(n));
        }
        Ok(EquivalenceTransform {
            row_phases,
            row_perm,
            col_perm,
            col_phases,
        })
    }

    pub fn identity(n: usize) -> Self {
        EquivalenceTransform {
            row_phases: vec![PhaseRational::ZERO; n],
            row_perm: (0..n).collect(),
            col_perm: (0..n).collect(),
            col_phases: vec![PhaseRational::ZERO; n],
        }
    }

    /// Uniform permutations and phases with denominator `den`.
    pub fn random<R: Rng + ?Sized>(n: usize, den: u64, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let phase = |rng: &mut R| PhaseRational::new(rng.random_range(0..den) as i64, den);
        let row_phases = (0..n).map(|_| phase(rng)).collect();
        let col_phases = (0..n).map(|_| phase(rng)).collect();
        let mut row_perm: Vec<usize> = (0..n).collect();
        let mut col_perm: Vec<usize> = (0..n).collect();
        row_perm.shuffle(rng);
        col_perm.shuffle(rng);
        EquivalenceTransform {
            row_phases,
            row_perm,
            col_perm,
            col_phases,
        }
    }

    pub fn size(&self) -> usize {
        self.row_perm.len()
    }

    pub fn row_phases(&self) -> &[PhaseRational] {
        &self.row_phases
    }

    pub fn row_perm(&self) -> &[usize] {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &[usize] {
        &self.col_perm
    }

    pub fn col_phases(&self) -> &[PhaseRational] {
        &self.col_phases
    }
}

/// The multiset of `L[i][j] - L[k][j] + L[k][l] - L[i][l]` over all index
/// quadruples, as sorted `(phase, multiplicity)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HaagerupInvariant {
    size: usize,
    multiset: Vec<(PhaseRational, u64)>,
}

impl HaagerupInvariant {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn multiset(&self) -> &[(PhaseRational, u64)] {
        &self.multiset
    }

    /// Number of quadruples, `N^4`.
    pub fn total(&self) -> u64 {
        self.multiset.iter().map(|(_, c)| c).sum()
    }

    /// Set view: the distinct phases.
    pub fn distinct(&self) -> Vec<PhaseRational> {
        self.multiset.iter().map(|&(p, _)| p).collect()
    }

    pub fn multiplicity(&self, p: PhaseRational) -> u64 {
        self.multiset
            .binary_search_by(|(q, _)| q.cmp(&p))
            .map_or(0, |i| self.multiset[i].1)
    }
}

pub fn haagerup_invariant(l: &LogHadamardMatrix) -> HaagerupInvariant {
    let n = l.size();
    let mut counts: BTreeMap<PhaseRational, u64> = BTreeMap::new();
    for i in 0..n {
        for k in 0..n {
            // column-wise histogram of row_i - row_k; the quadruple term is a - b
            let mut hist: BTreeMap<PhaseRational, u64> = BTreeMap::new();
            for j in 0..n {
                *hist.entry(l.get(i, j) - l.get(k, j)).or_default() += 1;
            }
            for (&a, &ca) in &hist {
                for (&b, &cb) in &hist {
                    *counts.entry(a - b).or_default() += ca * cb;
                }
            }
        }
    }
    HaagerupInvariant {
        size: n,
        multiset: counts.into_iter().collect(),
    }
}
