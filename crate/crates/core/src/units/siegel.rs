use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::UnitsError;
use crate::qexp::{bernoulli2, default_lattice, to_lattice, FracSeries};

/// `min(x mod N, N - x mod N)`, the representative of `x` in `(Z/NZ)/±1`.
pub fn reduce_class(x: i64, level: u32) -> u32 {
    let n = level as i64;
    let r = x.rem_euclid(n);
    r.min(n - r) as u32
}

/// Leading exponent `N·B2(â/N)/2` of `g̃_a`.
pub fn siegel_leading_exponent(level: u32, a: i64) -> Rational64 {
    let n = level as i64;
    let ahat = a.rem_euclid(n);
    Rational64::from_integer(n) * bernoulli2(Rational64::new(ahat, n)) / 2
}

/// `q^{N B2(â/N)/2} · Π_{n ≡ ±a (N)} (1 - q^n)`, exact below `prec`.
pub fn siegel_fricke_qexp(level: u32, a: i64, prec: Rational64) -> Result<FracSeries, UnitsError> {
    let n = level as i64;
    if a.rem_euclid(n) == 0 {
        return Err(UnitsError::ZeroResidue(a, level));
    }
    let den = default_lattice(level);
    let e0 = siegel_leading_exponent(level, a);
    let e0l = to_lattice(e0, den)?;
    let precl = to_lattice(prec, den)?;
    // Relative integer exponents j with e0 + j < prec.
    let window = if precl <= e0l {
        0
    } else {
        ((precl - e0l + den - 1) / den) as usize
    };
    let mut coeffs = vec![BigInt::zero(); window.max(1)];
    coeffs[0] = BigInt::one();
    let ahat = a.rem_euclid(n);
    for r in [ahat, n - ahat] {
        let mut m = r;
        while (m as usize) < window {
            let m_us = m as usize;
            for j in (m_us..window).rev() {
                let t = coeffs[j - m_us].clone();
                coeffs[j] -= t;
            }
            m += n;
        }
    }
    let terms = coeffs
        .into_iter()
        .enumerate()
        .take(window)
        .map(|(j, c)| (e0l + j as i64 * den, BigRational::from_integer(c)));
    Ok(FracSeries::from_lattice_terms(level, den, terms, precl))
}

/// An element of `⟨U1⟩ ⊗ Q` in the Siegel basis `g_{0,a}`, `1 <= a <= N/2`,
/// with a sign marker for the leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitVector {
    level: u32,
    exps: BTreeMap<u32, BigRational>,
    sign: i8,
}

impl UnitVector {
    pub fn constant(level: u32) -> Self {
        UnitVector {
            level,
            exps: BTreeMap::new(),
            sign: 1,
        }
    }

    /// The basis element `g_{0,a}`.
    pub fn basis(level: u32, a: i64) -> Result<Self, UnitsError> {
        Self::from_ints(level, [(a, 1)], 1)
    }

    pub fn from_ints<I>(level: u32, pairs: I, sign: i8) -> Result<Self, UnitsError>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let mut v = Self::constant(level);
        v.sign = sign;
        for (a, e) in pairs {
            let c = reduce_class(a, level);
            if c == 0 {
                return Err(UnitsError::ZeroResidue(a, level));
            }
            v.add_at(c, &BigRational::from_integer(BigInt::from(e)));
        }
        Ok(v)
    }

    fn add_at(&mut self, a: u32, e: &BigRational) {
        let slot = self.exps.entry(a).or_insert_with(BigRational::zero);
        *slot += e;
        if slot.is_zero() {
            self.exps.remove(&a);
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn with_sign(mut self, sign: i8) -> Self {
        self.sign = sign;
        self
    }

    pub fn exponents(&self) -> &BTreeMap<u32, BigRational> {
        &self.exps
    }

    pub fn get(&self, a: u32) -> BigRational {
        self.exps.get(&a).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.exps.values().all(|e| e.is_integer())
    }

    /// Product of units (sum of exponent vectors).
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, e) in &other.exps {
            out.add_at(*a, e);
        }
        out.sign *= other.sign;
        out
    }

    pub fn inv(&self) -> Self {
        self.pow(&-BigRational::one())
    }

    pub fn pow(&self, k: &BigRational) -> Self {
        let exps = if k.is_zero() {
            BTreeMap::new()
        } else {
            self.exps.iter().map(|(a, e)| (*a, e * k)).collect()
        };
        let sign = if k.is_integer() && (k.to_integer() % 2u32).is_zero() {
            1
        } else {
            self.sign
        };
        UnitVector {
            level: self.level,
            exps,
            sign,
        }
    }

    /// Leading exponent of the Fricke-side expansion.
    pub fn fricke_valuation(&self) -> BigRational {
        self.exps
            .iter()
            .map(|(a, e)| {
                let v = siegel_leading_exponent(self.level, *a as i64);
                e * BigRational::new(BigInt::from(*v.numer()), BigInt::from(*v.denom()))
            })
            .fold(BigRational::zero(), |s, x| s + x)
    }

    /// `sign · Π g̃_a^{e_a}` on the Fricke side, exact below `prec`.
    pub fn fricke_qexp(&self, prec: Rational64) -> Result<FracSeries, UnitsError> {
        if !self.is_integral() {
            return Err(UnitsError::NonIntegralUnit);
        }
        // Each factor must be known a little further than `prec` because
        // the other factors shift the window by their valuations.
        let shift: Rational64 = self
            .exps
            .iter()
            .map(|(a, e)| {
                let v = siegel_leading_exponent(self.level, *a as i64);
                let k = e.to_integer();
                let k: i64 = k.abs().try_into().unwrap_or(i64::MAX);
                v.abs() * k * 2
            })
            .sum::<Rational64>()
            + Rational64::from_integer(2);
        let mut acc = FracSeries::one(self.level);
        for (a, e) in &self.exps {
            let g = siegel_fricke_qexp(self.level, *a as i64, prec + shift)?;
            let k: i64 = e
                .to_integer()
                .try_into()
                .map_err(|_| UnitsError::NonIntegralUnit)?;
            acc = acc.mul(&g.powi(k)?)?;
        }
        if self.sign < 0 {
            acc = acc.neg();
        }
        if acc.prec().is_some_and(|p| p > prec) {
            acc = acc.truncate(prec)?;
        }
        Ok(acc)
    }

    /// Parses the `a:exp` pair format; a leading `-` token flips the sign.
    pub fn parse(level: u32, text: &str) -> Result<Self, UnitsError> {
        let mut v = Self::constant(level);
        for tok in text.split_whitespace() {
            if tok == "-" {
                v.sign = -v.sign;
                continue;
            }
            if tok == "1" {
                continue;
            }
            let (a, e) = tok
                .split_once(':')
                .ok_or_else(|| UnitsError::Qexp(crate::error::QexpError::Parse(text.into())))?;
            let a: i64 = a
                .parse()
                .map_err(|_| UnitsError::Qexp(crate::error::QexpError::Parse(text.into())))?;
            let e: BigRational = e
                .parse()
                .map_err(|_| UnitsError::Qexp(crate::error::QexpError::Parse(text.into())))?;
            let c = reduce_class(a, level);
            if c == 0 {
                return Err(UnitsError::ZeroResidue(a, level));
            }
            v.add_at(c, &e);
        }
        Ok(v)
    }
}

impl fmt::Display for UnitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.sign < 0 {
            parts.push("-".to_string());
        }
        for (a, e) in &self.exps {
            parts.push(format!("{a}:{e}"));
        }
        if self.exps.is_empty() {
            parts.push("1".to_string());
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// Exponent vector of the cross-ratio unit `u1(a,b,c,d)`.
///
/// The ℘-difference `℘_a - ℘_c` factors as `g_{a+c} g_{a-c} / (g_a g_c)^2`
/// up to a constant, so the squared factors cancel in the cross-ratio.
pub fn u1_as_siegel(level: u32, params: [i64; 4]) -> Result<UnitVector, UnitsError> {
    let classes: Vec<u32> = params.iter().map(|x| reduce_class(*x, level)).collect();
    for i in 0..4 {
        for j in 0..i {
            if classes[i] == classes[j] {
                return Err(UnitsError::RepeatedParameters(params, level));
            }
        }
    }
    let [a, b, c, d] = params;
    let num = [
        (a + c, "a+c"),
        (a - c, "a-c"),
        (b + d, "b+d"),
        (b - d, "b-d"),
    ];
    let den = [
        (a + d, "a+d"),
        (a - d, "a-d"),
        (b + c, "b+c"),
        (b - c, "b-c"),
    ];
    let mut pairs = Vec::with_capacity(8);
    for (x, what) in num {
        if reduce_class(x, level) == 0 {
            return Err(UnitsError::DegenerateCrossRatio {
                what: what.into(),
                level,
            });
        }
        pairs.push((x, 1));
    }
    for (x, what) in den {
        if reduce_class(x, level) == 0 {
            return Err(UnitsError::DegenerateCrossRatio {
                what: what.into(),
                level,
            });
        }
        pairs.push((x, -1));
    }
    UnitVector::from_ints(level, pairs, 1)
}
