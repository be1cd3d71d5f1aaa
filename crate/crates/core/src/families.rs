//! Affine parametric families `S ∘ EXP(iR)`.
//!
//! Parameters are fractions of a full turn on the exact path. Radian values
//! are handled only by the floating-point helpers.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::TAU;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LogHadamardMatrix;
use crate::phase::PhaseRational;

/// Largest denominator drawn by [`family_verify`].
pub const MAX_SAMPLE_DENOMINATOR: u64 = 64;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ExpressionJson", into = "ExpressionJson")]
pub struct AffineExpression {
    constant: PhaseRational,
    terms: BTreeMap<String, i64>,
}

#[derive(Serialize, Deserialize)]
struct ExpressionJson {
    #[serde(rename = "const", default)]
    constant: PhaseRational,
    #[serde(default)]
    terms: BTreeMap<String, i64>,
}

impl TryFrom<ExpressionJson> for AffineExpression {
    type Error = Error;

    fn try_from(e: ExpressionJson) -> Result<Self> {
        Ok(AffineExpression::new(e.constant, e.terms))
    }
}

impl From<AffineExpression> for ExpressionJson {
    fn from(e: AffineExpression) -> Self {
        ExpressionJson { constant: e.constant, terms: e.terms }
    }
}

impl AffineExpression {
    pub fn new(constant: PhaseRational, terms: BTreeMap<String, i64>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| *c != 0).collect();
        AffineExpression { constant, terms }
    }

    pub fn zero() -> Self {
        AffineExpression::default()
    }

    /// Builds `sum coefficient * name`, with no constant.
    pub fn linear<'a>(terms: impl IntoIterator<Item = (&'a str, i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (name, c) in terms {
            *map.entry(name.to_string()).or_insert(0) += c;
        }
        AffineExpression::new(PhaseRational::ZERO, map)
    }

    pub fn constant(&self) -> PhaseRational {
        self.constant
    }

    pub fn terms(&self) -> &BTreeMap<String, i64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    pub fn evaluate(&self, values: &BTreeMap<String, PhaseRational>) -> Result<PhaseRational> {
        let mut acc = self.constant;
        for (name, &c) in &self.terms {
            let v = values.get(name).ok_or_else(|| Error::MissingParameter(name.clone()))?;
            acc += v.mul_int(c);
        }
        Ok(acc)
    }

    /// Value in turns, reduced to [0, 1), for parameters given in radians.
    pub fn evaluate_radians(&self, values: &BTreeMap<String, f64>) -> Result<f64> {
        let mut acc = self.constant.to_f64();
        for (name, &c) in &self.terms {
            let v = values.get(name).ok_or_else(|| Error::MissingParameter(name.clone()))?;
            acc += c as f64 * v / TAU;
        }
        Ok(acc.rem_euclid(1.0))
    }
}

impl fmt::Display for AffineExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (name, &c) in &self.terms {
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            out.push_str(sign);
            if c.abs() != 1 {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(name);
        }
        if !self.constant.is_zero() || out.is_empty() {
            if !out.is_empty() {
                out.push('+');
            }
            out.push_str(&self.constant.to_string());
        }
        f.write_str(&out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct AffineFamily {
    base: LogHadamardMatrix,
    pattern: Vec<Vec<AffineExpression>>,
    params: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FamilyJson {
    base: LogHadamardMatrix,
    params: Vec<String>,
    pattern: Vec<Vec<AffineExpression>>,
}

impl TryFrom<FamilyJson> for AffineFamily {
    type Error = Error;

    fn try_from(f: FamilyJson) -> Result<Self> {
        AffineFamily::new(f.base, f.pattern, f.params)
    }
}

impl From<AffineFamily> for FamilyJson {
    fn from(f: AffineFamily) -> Self {
        FamilyJson { base: f.base, params: f.params, pattern: f.pattern }
    }
}

impl AffineFamily {
    pub fn new(base: LogHadamardMatrix, pattern: Vec<Vec<AffineExpression>>, params: Vec<String>) -> Result<Self> {
        let n = base.size();
        if pattern.len() != n || pattern.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!("pattern does not match the {n}x{n} base")));
        }
        let declared: BTreeSet<&str> = params.iter().map(String::as_str).collect();
        if declared.len() != params.len() {
            return Err(Error::Parse("parameter list has duplicates".into()));
        }
        for e in pattern.iter().flatten() {
            if let Some(name) = e.terms.keys().find(|k| !declared.contains(k.as_str())) {
                return Err(Error::UnknownParameter(name.clone()));
            }
        }
        Ok(AffineFamily { base, pattern, params })
    }

    pub fn base(&self) -> &LogHadamardMatrix {
        &self.base
    }

    pub fn pattern(&self) -> &[Vec<AffineExpression>] {
        &self.pattern
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    /// Parameters that actually occur in the pattern.
    pub fn used_params(&self) -> BTreeSet<&str> {
        self.pattern.iter().flatten().flat_map(|e| e.terms.keys().map(String::as_str)).collect()
    }

    pub fn with_pattern_entry(&self, i: usize, j: usize, e: AffineExpression) -> Result<Self> {
        let mut pattern = self.pattern.clone();
        pattern[i][j] = e;
        AffineFamily::new(self.base.clone(), pattern, self.params.clone())
    }

    pub fn zero_values(&self) -> BTreeMap<String, PhaseRational> {
        self.params.iter().map(|p| (p.clone(), PhaseRational::ZERO)).collect()
    }

    /// Complex entries `exp(2πi(base + R))` for parameters in radians.
    pub fn numeric_entries(&self, radians: &BTreeMap<String, f64>) -> Result<Vec<Vec<(f64, f64)>>> {
        let n = self.size();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let t = self.base.get(i, j).to_f64() + self.pattern[i][j].evaluate_radians(radians)?;
                        let (s, c) = (TAU * t).sin_cos();
                        Ok((c, s))
                    })
                    .collect()
            })
            .collect()
    }

    /// Floating-point orthogonality check for arbitrary real parameters.
    pub fn is_hadamard_numeric(&self, radians: &BTreeMap<String, f64>, tol: f64) -> Result<bool> {
        let h = self.numeric_entries(radians)?;
        let n = h.len();
        for a in 0..n {
            for b in a + 1..n {
                let (mut re, mut im) = (0.0, 0.0);
                for j in 0..n {
                    let (x, y) = h[a][j];
                    let (u, v) = h[b][j];
                    re += x * u + y * v;
                    im += y * u - x * v;
                }
                if re.hypot(im) > tol {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `base[i][j] + pattern[i][j](values)`. Extra names in `values` are ignored.
pub fn family_instantiate(f: &AffineFamily, values: &BTreeMap<String, PhaseRational>) -> Result<LogHadamardMatrix> {
    if let Some(p) = f.params.iter().find(|p| !values.contains_key(*p)) {
        return Err(Error::MissingParameter(p.clone()));
    }
    let n = f.size();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            row.push(f.base.get(i, j) + f.pattern[i][j].evaluate(values)?);
        }
        rows.push(row);
    }
    Ok(LogHadamardMatrix::from_fn(n, |i, j| rows[i][j]))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleResult {
    pub index: usize,
    pub values: BTreeMap<String, PhaseRational>,
    pub hadamard: bool,
    /// First non-orthogonal row pair, 0-based, on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_rows: Option<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub seed: u64,
    pub samples: Vec<SampleResult>,
    pub passed: usize,
    pub failed: usize,
}

impl FamilyReport {
    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }
}

/// Draws a common denominator `D <= 64` per sample, then each parameter as
/// `k/D` with `k` uniform in `0..D`.
pub fn sample_values<R: Rng + ?Sized>(f: &AffineFamily, rng: &mut R) -> BTreeMap<String, PhaseRational> {
    let d = rng.random_range(1..=MAX_SAMPLE_DENOMINATOR);
    f.params
        .iter()
        .map(|p| (p.clone(), PhaseRational::new(rng.random_range(0..d) as i64, d)))
        .collect()
}

pub fn family_verify(f: &AffineFamily, samples: usize, seed: u64) -> FamilyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<_> = (0..samples).map(|_| sample_values(f, &mut rng)).collect();
    let results: Vec<SampleResult> = draws
        .into_par_iter()
        .enumerate()
        .map(|(index, values)| {
            let m = family_instantiate(f, &values).expect("all parameters drawn");
            let failing_rows = m.first_non_orthogonal_rows();
            SampleResult { index, values, hadamard: failing_rows.is_none(), failing_rows }
        })
        .collect();
    let passed = results.iter().filter(|r| r.hadamard).count();
    FamilyReport { seed, failed: results.len() - passed, passed, samples: results }
}

pub const BUILTIN_FAMILIES: [&str; 3] = ["S8_4", "S12_5", "S16_11"];

pub(crate) fn builtin_family_source(name: &str) -> Option<&'static str> {
    match name {
        "S8_4" => Some(include_str!("../data/families/S8_4.json")),
        "S12_5" => Some(include_str!("../data/families/S12_5.json")),
        "S16_11" => Some(include_str!("../data/families/S16_11.json")),
        _ => None,
    }
}

pub fn builtin_family(name: &str) -> Result<AffineFamily> {
    let src = builtin_family_source(name).ok_or_else(|| Error::UnknownFamily(name.to_string()))?;
    Ok(serde_json::from_str(src)?)
}
