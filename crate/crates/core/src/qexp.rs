//! Truncated q-expansions with exact rational coefficients and rational
//! exponents.
//!
//! A [`FracSeries`] lives on a lattice `(1/D)Z` of exponents. Coefficients
//! below the precision bound are exact; nothing is known above it ("window"
//! semantics). Every operation computes the tightest sound output window.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::QexpError;

/// Sentinel for "no truncation", stored in lattice units.
pub const INFINITE_PREC: i64 = i64::MAX / 4;

/// Working precision (in whole q-powers) used for level-15 computations.
pub const DEFAULT_PREC: i64 = 200;

/// The default exponent lattice denominator for level `n`: `lcm(12, 2n^2)`.
pub fn default_lattice(level: u32) -> i64 {
    let n = level as i64;
    12i64.lcm(&(2 * n * n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracSeries {
    level: u32,
    den: i64,
    terms: BTreeMap<i64, BigRational>,
    prec: i64,
}

fn add_prec(p: i64, v: i64) -> i64 {
    if p >= INFINITE_PREC {
        INFINITE_PREC
    } else {
        p + v
    }
}

impl FracSeries {
    /// `O(q^prec)` where `prec` is given as a rational exponent.
    pub fn zero(level: u32, den: i64, prec: Option<Rational64>) -> Result<Self, QexpError> {
        let prec = match prec {
            None => INFINITE_PREC,
            Some(p) => to_lattice(p, den)?,
        };
        Ok(FracSeries {
            level,
            den,
            terms: BTreeMap::new(),
            prec,
        })
    }

    /// The exact constant `1`.
    pub fn one(level: u32) -> Self {
        Self::constant(level, BigRational::one())
    }

    pub fn constant(level: u32, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(0, c);
        }
        FracSeries {
            level,
            den: default_lattice(level),
            terms,
            prec: INFINITE_PREC,
        }
    }

    /// The monomial `q^e` with infinite precision.
    pub fn pow_q(level: u32, e: Rational64) -> Result<Self, QexpError> {
        Self::monomial(level, default_lattice(level), BigRational::one(), e)
    }

    pub fn monomial(
        level: u32,
        den: i64,
        c: BigRational,
        e: Rational64,
    ) -> Result<Self, QexpError> {
        let k = to_lattice(e, den)?;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Ok(FracSeries {
            level,
            den,
            terms,
            prec: INFINITE_PREC,
        })
    }

    /// Builds a series from `(exponent numerator over den, coefficient)`
    /// pairs. Zero coefficients and terms at or above `prec` are dropped;
    /// repeated exponents are summed.
    pub fn from_lattice_terms<I>(level: u32, den: i64, terms: I, prec: i64) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let mut map: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (k, c) in terms {
            if k >= prec {
                continue;
            }
            *map.entry(k).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        FracSeries {
            level,
            den,
            terms: map,
            prec,
        }
    }

    /// Integer-exponent series `sum c_i q^i + O(q^prec)`.
    pub fn from_integer_coeffs<I>(level: u32, coeffs: I, prec: i64) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let den = default_lattice(level);
        let p = add_prec_mul(prec, den);
        Self::from_lattice_terms(level, den, coeffs.into_iter().map(|(e, c)| (e * den, c)), p)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn lattice_den(&self) -> i64 {
        self.den
    }

    /// Precision bound, `None` when the series is exact.
    pub fn prec(&self) -> Option<Rational64> {
        if self.prec >= INFINITE_PREC {
            None
        } else {
            Some(Rational64::new(self.prec, self.den))
        }
    }

    pub fn prec_lattice(&self) -> i64 {
        self.prec
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms as `(exponent, coefficient)`, in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Rational64, &BigRational)> + '_ {
        let d = self.den;
        self.terms
            .iter()
            .map(move |(k, c)| (Rational64::new(*k, d), c))
    }

    pub fn lattice_terms(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Coefficient of `q^e`; `None` if `e` is at or beyond the precision.
    pub fn coefficient(&self, e: Rational64) -> Option<BigRational> {
        let k = to_lattice(e, self.den).ok()?;
        if k >= self.prec {
            return None;
        }
        Some(
            self.terms
                .get(&k)
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero_to_prec(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent carrying a nonzero coefficient.
    pub fn valuation(&self) -> Result<Rational64, QexpError> {
        match self.terms.keys().next() {
            Some(k) => Ok(Rational64::new(*k, self.den)),
            None => Err(QexpError::ZeroToPrecision {
                prec: self
                    .prec()
                    .map(|p| p.to_string())
                    .unwrap_or_else(|| "inf".into()),
            }),
        }
    }

    pub fn leading_coefficient(&self) -> Option<&BigRational> {
        self.terms.values().next()
    }

    fn val_or_prec(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.prec)
    }

    /// Re-expresses the series on the finer lattice `(1/den)Z`.
    pub fn with_lattice(&self, den: i64) -> Result<Self, QexpError> {
        if den % self.den != 0 {
            return Err(QexpError::IncompatibleLattice {
                have: self.den,
                want: den,
            });
        }
        let f = den / self.den;
        Ok(FracSeries {
            level: self.level,
            den,
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
            prec: add_prec_mul(self.prec, f),
        })
    }

    fn align(&self, other: &Self) -> Result<(Self, Self), QexpError> {
        if self.level != other.level {
            return Err(QexpError::LevelMismatch(self.level, other.level));
        }
        if self.den == other.den {
            return Ok((self.clone(), other.clone()));
        }
        let den = self.den.lcm(&other.den);
        Ok((self.with_lattice(den)?, other.with_lattice(den)?))
    }

    /// Drops everything at or above `prec`.
    pub fn truncate(&self, prec: Rational64) -> Result<Self, QexpError> {
        let p = to_lattice(prec, self.den)?.min(self.prec);
        let mut s = self.clone();
        s.prec = p;
        s.terms.retain(|k, _| *k < p);
        Ok(s)
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = -c.clone();
        }
        s
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return FracSeries {
                level: self.level,
                den: self.den,
                terms: BTreeMap::new(),
                prec: self.prec,
            };
        }
        let mut s = self.clone();
        for v in s.terms.values_mut() {
            *v *= c;
        }
        s
    }

    pub fn add(&self, other: &Self) -> Result<Self, QexpError> {
        let (a, b) = self.align(other)?;
        let prec = a.prec.min(b.prec);
        let terms = a
            .terms
            .into_iter()
            .chain(b.terms)
            .filter(|(k, _)| *k < prec);
        Ok(Self::from_lattice_terms(a.level, a.den, terms, prec))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, QexpError> {
        self.add(&other.neg())
    }

    pub fn add_constant(&self, c: &BigRational) -> Result<Self, QexpError> {
        self.add(&Self::constant(self.level, c.clone()))
    }

    /// Product, truncated at `min(a.prec + val(b), b.prec + val(a))`.
    pub fn mul(&self, other: &Self) -> Result<Self, QexpError> {
        let (a, b) = self.align(other)?;
        let prec = add_prec(a.prec, b.val_or_prec()).min(add_prec(b.prec, a.val_or_prec()));
        let mut out: BTreeMap<i64, BigRational> = BTreeMap::new();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let k = ka + kb;
                if k >= prec {
                    break;
                }
                let e = out.entry(k).or_insert_with(BigRational::zero);
                *e += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(FracSeries {
            level: a.level,
            den: a.den,
            terms: out,
            prec,
        })
    }

    /// Multiplicative inverse. The relative precision is preserved; the
    /// leading exponent is negated.
    pub fn inv(&self) -> Result<Self, QexpError> {
        let (&v, lead) = self.terms.iter().next().ok_or(QexpError::ZeroSeries)?;
        if self.prec >= INFINITE_PREC {
            if self.terms.len() == 1 {
                let mut terms = BTreeMap::new();
                terms.insert(-v, lead.recip());
                return Ok(FracSeries {
                    level: self.level,
                    den: self.den,
                    terms,
                    prec: INFINITE_PREC,
                });
            }
            return Err(QexpError::InfinitePrecisionInverse);
        }
        let rel = self.prec - v;
        let step = self
            .terms
            .keys()
            .skip(1)
            .fold(0i64, |g, k| g.gcd(&(k - v)))
            .max(1);
        let n = ((rel + step - 1) / step) as usize;
        let tail: Vec<(usize, &BigRational)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(k, c)| (((k - v) / step) as usize, c))
            .filter(|(i, _)| *i < n)
            .collect();
        let inv_lead = lead.recip();
        let mut b: Vec<BigRational> = Vec::with_capacity(n);
        b.push(inv_lead.clone());
        for j in 1..n {
            let mut acc = BigRational::zero();
            for (i, h) in &tail {
                if *i > j {
                    break;
                }
                if !b[j - i].is_zero() {
                    acc += *h * &b[j - i];
                }
            }
            b.push(-(acc * &inv_lead));
        }
        let prec = self.prec - 2 * v;
        let terms = b
            .into_iter()
            .enumerate()
            .map(|(j, c)| (-v + j as i64 * step, c));
        Ok(Self::from_lattice_terms(self.level, self.den, terms, prec))
    }

    pub fn div(&self, other: &Self) -> Result<Self, QexpError> {
        self.mul(&other.inv()?)
    }

    /// Integer power; negative exponents go through [`FracSeries::inv`].
    pub fn powi(&self, n: i64) -> Result<Self, QexpError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = FracSeries {
            den: base.den,
            ..Self::one(self.level)
        };
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// True if all exponents are integers (and so is the precision, when finite).
    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(|k| k % self.den == 0)
    }

    /// Coefficients of `q^0 .. q^(n-1)` for an integral-exponent series.
    pub fn integer_coeffs(&self, n: usize) -> Result<Vec<BigRational>, QexpError> {
        if !self.has_integral_exponents() {
            return Err(QexpError::FractionalExponent);
        }
        let mut out = vec![BigRational::zero(); n];
        for (k, c) in &self.terms {
            let e = k / self.den;
            if e >= 0 && (e as usize) < n {
                out[e as usize] = c.clone();
            }
        }
        Ok(out)
    }

    /// Parses the textual form produced by `Display`.
    pub fn parse(level: u32, text: &str) -> Result<Self, QexpError> {
        let bad = || QexpError::Parse(text.to_string());
        let mut den: Option<i64> = None;
        let mut terms = Vec::new();
        let mut prec = None;
        for part in text.split(" + ") {
            let part = part.trim();
            if let Some(inner) = part
                .strip_prefix("O(q^(")
                .and_then(|s| s.strip_suffix("))"))
            {
                if inner == "inf" {
                    prec = Some(INFINITE_PREC);
                } else {
                    let (p, d) = parse_frac(inner).ok_or_else(bad)?;
                    check_den(&mut den, d).ok_or_else(bad)?;
                    prec = Some(p);
                }
                continue;
            }
            if part == "0" {
                continue;
            }
            let (c, e) = part.split_once("*q^(").ok_or_else(bad)?;
            let e = e.strip_suffix(')').ok_or_else(bad)?;
            let (p, d) = parse_frac(e).ok_or_else(bad)?;
            check_den(&mut den, d).ok_or_else(bad)?;
            let c: BigRational = c.parse().map_err(|_| bad())?;
            terms.push((p, c));
        }
        let den = den.unwrap_or_else(|| default_lattice(level));
        Ok(Self::from_lattice_terms(
            level,
            den,
            terms,
            prec.ok_or_else(bad)?,
        ))
    }
}

fn add_prec_mul(p: i64, f: i64) -> i64 {
    if p >= INFINITE_PREC {
        INFINITE_PREC
    } else {
        p * f
    }
}

fn parse_frac(s: &str) -> Option<(i64, i64)> {
    let (p, d) = s.split_once('/')?;
    Some((p.trim().parse().ok()?, d.trim().parse().ok()?))
}

fn check_den(den: &mut Option<i64>, d: i64) -> Option<()> {
    match den {
        Some(x) if *x != d => None,
        Some(_) => Some(()),
        None => {
            *den = Some(d);
            Some(())
        }
    }
}

/// Converts a rational exponent into lattice units.
pub fn to_lattice(e: Rational64, den: i64) -> Result<i64, QexpError> {
    if den % e.denom() != 0 {
        return Err(QexpError::IncompatibleDenominator {
            exponent: e.to_string(),
            lattice: den,
        });
    }
    Ok(e.numer() * (den / e.denom()))
}

impl fmt::Display for FracSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*q^({}/{})", c, k, self.den)?;
        }
        if !first {
            write!(f, " + ")?;
        }
        if self.prec >= INFINITE_PREC {
            write!(f, "O(q^(inf))")
        } else {
            write!(f, "O(q^({}/{}))", self.prec, self.den)
        }
    }
}

/// `B_2(t) = t^2 - t + 1/6` at a rational point.
pub fn bernoulli2(t: Rational64) -> Rational64 {
    t * t - t + Rational64::new(1, 6)
}

pub fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Integer coefficients as `i64`, failing on non-integral or huge values.
pub fn rational_to_i64(c: &BigRational) -> Option<i64> {
    if !c.is_integer() {
        return None;
    }
    let n = c.to_integer();
    if n.abs() > BigInt::from(i64::MAX) {
        return None;
    }
    i64::try_from(n).ok()
}
