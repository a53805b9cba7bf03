use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::EisError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveModel {
    pub label: String,
    /// `[a1, a2, a3, a4, a6]`.
    pub a: [i64; 5],
    pub conductor: u64,
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n as usize + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n as usize {
        if sieve[i] {
            for j in (i * i..=n as usize).step_by(i) {
                sieve[j] = false;
            }
        }
        i += 1;
    }
    (0..=n as usize)
        .filter(|&i| sieve[i])
        .map(|i| i as u64)
        .collect()
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl CurveModel {
    /// Validates the model: nonzero discriminant, conductor matching the
    /// label's numeric prefix, and bad primes of the model equal to the
    /// primes of the conductor.
    pub fn new(label: &str, a: [i64; 5], conductor: u64) -> Result<Self, EisError> {
        let c = CurveModel {
            label: label.to_string(),
            a,
            conductor,
        };
        let bad = |msg: String| EisError::BadModel {
            label: label.to_string(),
            msg,
        };
        let disc = c.discriminant();
        if disc.is_zero() {
            return Err(EisError::Singular(label.to_string()));
        }
        let digits: String = label.chars().take_while(|ch| ch.is_ascii_digit()).collect();
        if digits.parse::<u64>().ok() != Some(conductor) {
            return Err(bad(format!("label does not match conductor {conductor}")));
        }
        for p in prime_factors(conductor) {
            if !(&disc % BigInt::from(p)).is_zero() {
                return Err(bad(format!(
                    "conductor prime {p} does not divide the discriminant"
                )));
            }
        }
        Ok(c)
    }

    /// `(b2, b4, b6, b8)`.
    fn b_invariants(&self) -> [BigInt; 4] {
        let [a1, a2, a3, a4, a6] = self.a.map(BigInt::from);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigInt {
        let [b2, b4, b6, b8] = self.b_invariants();
        -&b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6 + 9 * &b2 * &b4 * &b6
    }

    /// Number of projective points of the reduction mod `p`, including
    /// the singular point when the reduction is bad.
    pub fn count_points(&self, p: u64) -> u64 {
        let pi = p as i64;
        let [a1, a2, a3, a4, a6] = self.a.map(|x| x.rem_euclid(pi));
        let mut count = 1u64;
        if p == 2 {
            for x in 0..2 {
                for y in 0..2 {
                    let l = y * y + a1 * x * y + a3 * y;
                    let r = x * x * x + a2 * x * x + a4 * x + a6;
                    if (l - r).rem_euclid(2) == 0 {
                        count += 1;
                    }
                }
            }
            return count;
        }
        // Number of square roots of each residue.
        let mut roots = vec![0u64; p as usize];
        for y in 0..pi {
            roots[((y * y) % pi) as usize] += 1;
        }
        for x in 0..pi {
            let f = (((x * x % pi + a2 * x) % pi * x) % pi + a4 * x + a6) % pi;
            let b = (a1 * x + a3) % pi;
            // y² + b y = f  ⇔  (2y + b)² = b² + 4f.
            let d = (b * b + 4 * f) % pi;
            count += roots[d as usize];
        }
        count
    }

    pub fn is_bad(&self, p: u64) -> bool {
        self.conductor.is_multiple_of(p)
    }

    /// `a_p = p + 1 - #Ẽ(F_p)`, which for a model minimal at `p` gives
    /// 1, -1, 0 for split, non-split and additive reduction.
    pub fn ap(&self, p: u64) -> Result<i64, EisError> {
        let ap = p as i64 + 1 - self.count_points(p) as i64;
        let disc_p = (&self.discriminant() % BigInt::from(p)).is_zero();
        if (self.is_bad(p) || disc_p) && (!self.is_bad(p) || !(-1..=1).contains(&ap)) {
            return Err(EisError::ReductionType {
                p,
                label: self.label.clone(),
            });
        }
        Ok(ap)
    }

    /// `a_p` for all primes up to `bound`, in parallel.
    pub fn ap_table(&self, bound: u64) -> Result<BTreeMap<u64, i64>, EisError> {
        primes_up_to(bound)
            .par_iter()
            .map(|&p| self.ap(p).map(|a| (p, a)))
            .collect()
    }

    /// `a_0 .. a_nmax` of the attached newform (`a_0 = 0`).
    pub fn newform_coeffs(&self, nmax: usize) -> Result<Vec<i64>, EisError> {
        let table = self.ap_table(nmax as u64)?;
        Ok(multiplicative_extension(
            nmax,
            |p| table[&p],
            |p| {
                if self.is_bad(p) {
                    0
                } else {
                    p as i64
                }
            },
        ))
    }
}

/// Extends prime data to all `a_n`, `n ≤ nmax`, using
/// `a_{p^{k+1}} = a_p a_{p^k} - χ(p) p^{w-1} a_{p^{k-1}}` (the second
/// closure returns `χ(p) p^{w-1}`) and multiplicativity.
pub fn multiplicative_extension<F, G>(nmax: usize, ap: F, twist: G) -> Vec<i64>
where
    F: Fn(u64) -> i64,
    G: Fn(u64) -> i64,
{
    let mut a = vec![0i64; nmax + 1];
    if nmax == 0 {
        return a;
    }
    a[1] = 1;
    // Smallest prime factor sieve.
    let mut spf = vec![0usize; nmax + 1];
    for i in 2..=nmax {
        if spf[i] == 0 {
            for j in (i..=nmax).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i;
                }
            }
        }
    }
    for n in 2..=nmax {
        let p = spf[n];
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if m > 1 {
            a[n] = a[m] * a[n / m];
            continue;
        }
        let app = ap(p as u64);
        a[n] = if k == 1 {
            app
        } else {
            let prev = n / p;
            let prev2 = prev / p;
            app * a[prev] - twist(p as u64) * a[prev2]
        };
    }
    a
}

/// Parses curve data lines `label a1 a2 a3 a4 a6 conductor`.
pub fn parse_curves(text: &str) -> Result<BTreeMap<String, CurveModel>, EisError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: &str| EisError::CurveData {
            line: i + 1,
            msg: msg.to_string(),
        };
        let t: Vec<&str> = line.split_whitespace().collect();
        if t.len() != 7 {
            return Err(err("expected `label a1 a2 a3 a4 a6 conductor`"));
        }
        let a: Vec<i64> = t[1..6]
            .iter()
            .map(|x| x.parse())
            .collect::<Result<_, _>>()
            .map_err(|_| err("bad coefficient"))?;
        let n: u64 = t[6].parse().map_err(|_| err("bad conductor"))?;
        let c = CurveModel::new(t[0], a.try_into().expect("five"), n)?;
        out.insert(t[0].to_string(), c);
    }
    Ok(out)
}

/// `|a_p| ≤ 2√p` for every entry.
pub fn hasse_holds(table: &BTreeMap<u64, i64>) -> bool {
    table
        .iter()
        .all(|(p, a)| (a.abs() as f64) <= 2.0 * (*p as f64).sqrt() + 1e-9)
}
