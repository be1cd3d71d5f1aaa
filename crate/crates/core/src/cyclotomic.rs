//! Integer polynomial helpers for the exact root-of-unity test.
//!
//! Polynomials are coefficient vectors, lowest degree first.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Zero;

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<i64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<i64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn proper_divisors(q: u64) -> Vec<u64> {
    (1..q).filter(|d| q.is_multiple_of(*d)).collect()
}

/// Exact quotient of `num` by the monic polynomial `den`. Panics if the
/// division leaves a remainder.
fn exact_div_monic(num: &[i128], den: &[i64]) -> Vec<i128> {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    let qlen = num.len() - dd;
    let mut quot = vec![0i128; qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd];
        if c == 0 {
            continue;
        }
        quot[k] = c;
        for (i, &d) in den.iter().enumerate() {
            if d != 0 {
                rem[k + i] = rem[k + i]
                    .checked_sub(c.checked_mul(d as i128).expect("cyclotomic coefficient overflow"))
                    .expect("cyclotomic coefficient overflow");
            }
        }
    }
    assert!(rem[..dd].iter().all(|&c| c == 0), "inexact cyclotomic division");
    quot
}

/// The `q`-th cyclotomic polynomial, obtained by dividing `x^q - 1` by
/// `Phi_d` for every proper divisor `d` of `q`. Results are memoized.
pub fn cyclotomic_polynomial(q: u64) -> Arc<Vec<i64>> {
    assert!(q >= 1, "cyclotomic index must be positive");
    if let Some(p) = cache().lock().unwrap().get(&q) {
        return Arc::clone(p);
    }
    let mut poly = vec![0i128; q as usize + 1];
    poly[0] = -1;
    poly[q as usize] = 1;
    for d in proper_divisors(q) {
        let phi_d = cyclotomic_polynomial(d);
        poly = exact_div_monic(&poly, &phi_d);
    }
    let phi: Vec<i64> = poly
        .into_iter()
        .map(|c| i64::try_from(c).expect("cyclotomic coefficient exceeds i64"))
        .collect();
    let phi = Arc::new(phi);
    cache()
        .lock()
        .unwrap()
        .entry(q)
        .or_insert_with(|| Arc::clone(&phi));
    phi
}

/// Remainder test in `i128`; `None` if an intermediate value overflows.
fn divides_i128(phi: &[i64], counts: &[u64]) -> Option<bool> {
    let dd = phi.len() - 1;
    let mut rem: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
    let terms: Vec<(usize, i128)> = phi[..dd]
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| (i, c as i128))
        .collect();
    for top in (dd..rem.len()).rev() {
        let c = rem[top];
        if c == 0 {
            continue;
        }
        let shift = top - dd;
        for &(i, d) in &terms {
            rem[shift + i] = rem[shift + i].checked_sub(c.checked_mul(d)?)?;
        }
        rem[top] = 0;
    }
    Some(rem.iter().all(|&c| c == 0))
}

pub(crate) fn divides_bigint(phi: &[i64], counts: &[u64]) -> bool {
    let dd = phi.len() - 1;
    let mut rem: Vec<BigInt> = counts.iter().map(|&c| BigInt::from(c)).collect();
    for top in (dd..rem.len()).rev() {
        if rem[top].is_zero() {
            continue;
        }
        let c = std::mem::take(&mut rem[top]);
        let shift = top - dd;
        for (i, &d) in phi[..dd].iter().enumerate() {
            if d != 0 {
                rem[shift + i] -= &c * d;
            }
        }
    }
    rem.iter().all(Zero::is_zero)
}

/// Does the monic `phi` divide `sum_r counts[r] x^r`?
pub fn divides(phi: &[i64], counts: &[u64]) -> bool {
    if counts.len() < phi.len() {
        return counts.iter().all(|&c| c == 0);
    }
    divides_i128(phi, counts).unwrap_or_else(|| divides_bigint(phi, counts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(36), {
            let mut v = vec![0; 13];
            v[0] = 1;
            v[6] = -1;
            v[12] = 1;
            v
        });
    }

    #[test]
    fn degree_is_totient() {
        fn totient(n: u64) -> u64 {
            (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count() as u64
        }
        for q in 1..120 {
            assert_eq!(cyclotomic_polynomial(q).len() as u64 - 1, totient(q), "q = {q}");
        }
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        assert!(cyclotomic_polynomial(105).contains(&-2));
    }

    #[test]
    fn bigint_path_agrees() {
        let phi = cyclotomic_polynomial(12);
        let vanishing = [1, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0];
        let not = [1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0];
        assert!(divides(&phi, &vanishing));
        assert!(divides_bigint(&phi, &vanishing));
        assert!(!divides(&phi, &not));
        assert!(!divides_bigint(&phi, &not));
    }
}
