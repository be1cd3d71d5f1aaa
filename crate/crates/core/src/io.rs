//! Matrix file formats.
//!
//! Text: a header line `N Q`, then `N` lines of `N` integer numerators over
//! the common denominator `Q`, space separated. JSON:
//! `{"size": N, "den": Q, "num": [[...], ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::LogHadamardMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub size: usize,
    pub den: u64,
    pub num: Vec<Vec<i64>>,
}

impl From<&LogHadamardMatrix> for MatrixJson {
    fn from(l: &LogHadamardMatrix) -> Self {
        let (den, num) = l.numerators();
        MatrixJson {
            size: l.size(),
            den,
            num: num
                .into_iter()
                .map(|r| r.into_iter().map(|x| x as i64).collect())
                .collect(),
        }
    }
}

impl TryFrom<MatrixJson> for LogHadamardMatrix {
    type Error = Error;

    fn try_from(m: MatrixJson) -> Result<Self> {
        if m.num.len() != m.size || m.num.iter().any(|r| r.len() != m.size) {
            return Err(Error::Parse(format!("matrix JSON does not hold {0}x{0} numerators", m.size)));
        }
        LogHadamardMatrix::from_numerators(m.den, &m.num)
    }
}

impl Serialize for LogHadamardMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LogHadamardMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let m = MatrixJson::deserialize(deserializer)?;
        LogHadamardMatrix::try_from(m).map_err(serde::de::Error::custom)
    }
}

pub fn to_text(l: &LogHadamardMatrix) -> String {
    let (den, num) = l.numerators();
    let mut out = format!("{} {}\n", l.size(), den);
    for row in num {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_text(s: &str) -> Result<LogHadamardMatrix> {
    let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let [size, den] = head.as_slice() else {
        return Err(Error::Parse(format!("header `{header}` should be `N Q`")));
    };
    let size: usize = size.parse().map_err(|_| Error::Parse(format!("bad size `{size}`")))?;
    let den: u64 = den.parse().map_err(|_| Error::Parse(format!("bad denominator `{den}`")))?;
    let rows: Vec<Vec<i64>> = lines
        .map(|l| {
            l.split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad numerator `{t}`"))))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    if rows.len() != size || rows.iter().any(|r| r.len() != size) {
        return Err(Error::Parse(format!("expected {size} rows of {size} numerators")));
    }
    LogHadamardMatrix::from_numerators(den, &rows)
}

pub fn to_json(l: &LogHadamardMatrix) -> String {
    serde_json::to_string(&MatrixJson::from(l)).expect("matrix JSON serializes")
}

pub fn parse_json(s: &str) -> Result<LogHadamardMatrix> {
    let m: MatrixJson = serde_json::from_str(s)?;
    m.try_into()
}

/// JSON if the first non-blank character is `{`, text otherwise.
pub fn parse_auto(s: &str) -> Result<LogHadamardMatrix> {
    if s.trim_start().starts_with('{') {
        parse_json(s)
    } else {
        parse_text(s)
    }
}

pub fn read_matrix(path: impl AsRef<std::path::Path>) -> Result<LogHadamardMatrix> {
    parse_auto(&std::fs::read_to_string(path)?)
}
