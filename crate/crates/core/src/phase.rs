//! Exact phases (rationals modulo 1) and vanishing tests for sums of roots of unity.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cyclotomic;
use crate::error::{Error, Result};

/// A phase `num/den` in `[0, 1)`, standing for `e^{2 pi i num/den}`.
///
/// Always stored reduced, with zero as `0/1`, so structural equality is
/// value equality.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhaseRational {
    num: u64,
    den: u64,
}

impl PhaseRational {
    pub const ZERO: PhaseRational = PhaseRational { num: 0, den: 1 };
    pub const HALF: PhaseRational = PhaseRational { num: 1, den: 2 };

    /// Builds the fractional part of `num/den`.
    ///
    /// Panics if `den == 0`; use [`PhaseRational::try_new`] for untrusted input.
    pub fn new(num: i64, den: u64) -> Self {
        Self::try_new(num, den).expect("phase denominator must be positive")
    }

    pub fn try_new(num: i64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidPhase(format!("{num}/0")));
        }
        let r = (num as i128).rem_euclid(den as i128) as u64;
        Ok(Self::reduced(r, den))
    }

    fn reduced(num: u64, den: u64) -> Self {
        debug_assert!(num < den);
        if num == 0 {
            return Self::ZERO;
        }
        let g = num.gcd(&den);
        PhaseRational {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Numerator of this phase scaled to the denominator `den`.
    ///
    /// Returns `None` if `den` is not a multiple of the reduced denominator.
    pub fn scaled_numerator(self, den: u64) -> Option<u64> {
        if den == 0 || !den.is_multiple_of(self.den) {
            None
        } else {
            Some(self.num * (den / self.den))
        }
    }

    /// `k * self` reduced mod 1.
    pub fn mul_int(self, k: i64) -> Self {
        let prod = (self.num as i128 * k as i128).rem_euclid(self.den as i128) as u64;
        Self::reduced(prod, self.den)
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Default for PhaseRational {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for PhaseRational {
    type Output = PhaseRational;

    fn add(self, rhs: PhaseRational) -> PhaseRational {
        let l = self.den.lcm(&rhs.den);
        let a = self.num as u128 * (l / self.den) as u128;
        let b = rhs.num as u128 * (l / rhs.den) as u128;
        PhaseRational::reduced(((a + b) % l as u128) as u64, l)
    }
}

impl AddAssign for PhaseRational {
    fn add_assign(&mut self, rhs: PhaseRational) {
        *self = *self + rhs;
    }
}

impl Neg for PhaseRational {
    type Output = PhaseRational;

    fn neg(self) -> PhaseRational {
        if self.num == 0 {
            self
        } else {
            PhaseRational {
                num: self.den - self.num,
                den: self.den,
            }
        }
    }
}

impl Sub for PhaseRational {
    type Output = PhaseRational;

    fn sub(self, rhs: PhaseRational) -> PhaseRational {
        self + (-rhs)
    }
}

impl SubAssign for PhaseRational {
    fn sub_assign(&mut self, rhs: PhaseRational) {
        *self = *self - rhs;
    }
}

impl std::iter::Sum for PhaseRational {
    fn sum<I: Iterator<Item = PhaseRational>>(iter: I) -> Self {
        iter.fold(PhaseRational::ZERO, Add::add)
    }
}

impl Ord for PhaseRational {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for PhaseRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PhaseRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for PhaseRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for PhaseRational {
    type Err = Error;

    /// Accepts `num/den` (any integer numerator, reduced mod 1) or a bare integer.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPhase(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                PhaseRational::try_new(n, d).map_err(|_| bad())
            }
            None => {
                let n: i64 = t.parse().map_err(|_| bad())?;
                Ok(PhaseRational::new(n, 1))
            }
        }
    }
}

impl Serialize for PhaseRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PhaseRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn phase_add(a: PhaseRational, b: PhaseRational) -> PhaseRational {
    a + b
}

pub fn phase_neg(a: PhaseRational) -> PhaseRational {
    -a
}

/// A formal sum `sum_r counts[r] * e^{2 pi i r / order}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootOfUnitySum {
    order: u64,
    counts: Vec<u64>,
}

impl RootOfUnitySum {
    pub fn new(order: u64, counts: Vec<u64>) -> Result<Self> {
        if order == 0 || counts.len() as u64 != order {
            return Err(Error::DimensionMismatch(format!(
                "root-of-unity sum of order {order} needs {order} counts, got {}",
                counts.len()
            )));
        }
        Ok(RootOfUnitySum { order, counts })
    }

    /// Accumulates phases over their least common denominator.
    pub fn from_phases<I>(phases: I) -> Self
    where
        I: IntoIterator<Item = PhaseRational>,
    {
        let phases: Vec<PhaseRational> = phases.into_iter().collect();
        let order = phases.iter().fold(1u64, |l, p| l.lcm(&p.den));
        let mut counts = vec![0u64; order as usize];
        for p in &phases {
            counts[(p.num * (order / p.den)) as usize] += 1;
        }
        RootOfUnitySum { order, counts }
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn terms(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Exact test for `sum = 0`: the sum vanishes iff the `order`-th
    /// cyclotomic polynomial divides `sum_r counts[r] x^r`.
    pub fn is_zero(&self) -> bool {
        if self.counts.iter().all(|&c| c == 0) {
            return true;
        }
        if self.order == 1 {
            return false;
        }
        let phi = cyclotomic::cyclotomic_polynomial(self.order);
        cyclotomic::divides(&phi, &self.counts)
    }
}

pub fn sum_is_zero(s: &RootOfUnitySum) -> bool {
    s.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: i64, d: u64) -> PhaseRational {
        PhaseRational::new(n, d)
    }

    #[test]
    fn construction_normalizes() {
        assert_eq!(p(6, 8), p(3, 4));
        assert_eq!(p(-1, 4), p(3, 4));
        assert_eq!(p(5, 4), p(1, 4));
        assert_eq!(p(4, 4), PhaseRational::ZERO);
        assert_eq!(p(0, 7).denominator(), 1);
        assert!(PhaseRational::try_new(1, 0).is_err());
    }

    #[test]
    fn add_examples() {
        assert_eq!(p(1, 4) + p(3, 4), p(0, 1));
        assert_eq!(p(0, 1) + p(2, 7), p(2, 7));
        assert_eq!(p(5, 36) + p(33, 36), p(1, 18));
        assert_eq!(phase_add(p(1, 3), p(1, 2)), p(5, 6));
    }

    #[test]
    fn neg_examples() {
        assert_eq!(phase_neg(PhaseRational::ZERO), PhaseRational::ZERO);
        assert_eq!(phase_neg(p(1, 4)), p(3, 4));
        assert_eq!(p(1, 4) - p(1, 2), p(3, 4));
    }

    #[test]
    fn group_laws_exhaustive_small_denominators() {
        let all: Vec<PhaseRational> = (1..=12u64)
            .flat_map(|d| (0..d as i64).map(move |n| p(n, d)))
            .collect();
        for &a in &all {
            assert_eq!(a + PhaseRational::ZERO, a);
            assert_eq!(a + (-a), PhaseRational::ZERO);
            for &b in &all {
                assert_eq!(a + b, b + a);
            }
        }
        for &a in all.iter().step_by(3) {
            for &b in all.iter().step_by(2) {
                for &c in &all {
                    assert_eq!((a + b) + c, a + (b + c));
                }
            }
        }
    }

    #[test]
    fn mul_int_wraps() {
        assert_eq!(p(1, 4).mul_int(3), p(3, 4));
        assert_eq!(p(1, 4).mul_int(-1), p(3, 4));
        assert_eq!(p(1, 4).mul_int(8), PhaseRational::ZERO);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/4".parse::<PhaseRational>().unwrap(), p(3, 4));
        assert_eq!("-1/4".parse::<PhaseRational>().unwrap(), p(3, 4));
        assert_eq!("2".parse::<PhaseRational>().unwrap(), PhaseRational::ZERO);
        assert_eq!(p(0, 5).to_string(), "0/1");
        assert_eq!(p(6, 8).to_string(), "3/4");
        assert!("1/0".parse::<PhaseRational>().is_err());
        assert!("x".parse::<PhaseRational>().is_err());
        let json = serde_json::to_string(&p(3, 4)).unwrap();
        assert_eq!(json, "\"3/4\"");
        assert_eq!(serde_json::from_str::<PhaseRational>(&json).unwrap(), p(3, 4));
    }

    #[test]
    fn ordering_by_value() {
        assert!(p(1, 3) < p(1, 2));
        assert!(PhaseRational::ZERO < p(1, 100));
        assert!(p(5, 6) > p(3, 4));
    }

    #[test]
    fn sum_examples() {
        assert!(RootOfUnitySum::new(2, vec![1, 1]).unwrap().is_zero());
        assert!(!RootOfUnitySum::new(4, vec![1, 0, 0, 1]).unwrap().is_zero());
        assert!(!RootOfUnitySum::new(1, vec![3]).unwrap().is_zero());
        assert!(RootOfUnitySum::new(5, vec![0; 5]).unwrap().is_zero());
        assert!(RootOfUnitySum::new(3, vec![1, 1]).is_err());
        for q in 2..40 {
            let full = RootOfUnitySum::new(q, vec![1; q as usize]).unwrap();
            assert!(sum_is_zero(&full), "full sum of order {q}");
        }
    }

    #[test]
    fn from_phases_uses_least_common_denominator() {
        let s = RootOfUnitySum::from_phases([p(1, 4), p(1, 6), PhaseRational::ZERO]);
        assert_eq!(s.order(), 12);
        assert_eq!(s.terms(), 3);
        assert_eq!(s.counts()[3], 1);
        assert_eq!(s.counts()[2], 1);
        assert_eq!(s.counts()[0], 1);
        // 1 + w + w^2 for a cube root w, written over denominator 6
        let s = RootOfUnitySum::from_phases([p(0, 1), p(2, 6), p(4, 6)]);
        assert_eq!(s.order(), 3);
        assert!(s.is_zero());
    }
}
