use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::EisError;
use crate::qexp::FracSeries;

/// The weight-1 Eisenstein series
/// `G_{a,b} = Σ_{(m,n) ≡ (a,b)} q^{mn/N} - Σ_{(m,n) ≡ -(a,b)} q^{mn/N}`, `m, n ≥ 1`,
/// for `a, b ≠ 0 mod N` (constant term zero).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinG {
    pub level: u32,
    pub a: i64,
    pub b: i64,
    pub series: FracSeries,
}

/// Expansion of `G_{a,b}` below `q^prec`, on the `q^{1/N}` lattice.
pub fn eisenstein_g(level: u32, a: i64, b: i64, prec: i64) -> Result<EisensteinG, EisError> {
    let n = level as i64;
    let (ra, rb) = (a.rem_euclid(n), b.rem_euclid(n));
    if ra == 0 || rb == 0 {
        return Err(EisError::ZeroIndex { a, b });
    }
    let bound = prec * n;
    let mut terms = Vec::new();
    for m in 1..bound {
        let rm = m % n;
        let plus = rm == ra;
        let minus = rm == (n - ra) % n;
        if !plus && !minus {
            continue;
        }
        for k in 1..=(bound - 1) / m {
            let rk = k % n;
            if plus && rk == rb {
                terms.push((m * k, BigRational::one()));
            }
            if minus && rk == (n - rb) % n {
                terms.push((m * k, -BigRational::one()));
            }
        }
    }
    Ok(EisensteinG {
        level,
        a,
        b,
        series: FracSeries::from_lattice_terms(level, n, terms, bound),
    })
}

/// `coeff · G_{x1,x2} · G_{y1,y2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinProduct {
    pub coeff: i64,
    pub x: (i64, i64),
    pub y: (i64, i64),
}

impl EisensteinProduct {
    /// `x1·x2 + y1·y2 ≡ 0 mod N`, which makes the product a power series in `q`.
    pub fn is_integral(&self, level: u32) -> bool {
        (self.x.0 * self.x.1 + self.y.0 * self.y.1).rem_euclid(level as i64) == 0
    }
}

impl fmt::Display for EisensteinProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}*G[{},{}]*G[{},{}]",
            self.coeff, self.x.0, self.x.1, self.y.0, self.y.1
        )
    }
}

/// A linear combination of Eisenstein products at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinCombination {
    pub level: u32,
    pub terms: Vec<EisensteinProduct>,
}

/// Smallest precision accepted by [`EisensteinCombination::assemble`].
pub const MIN_ASSEMBLY_PREC: i64 = 17;

impl EisensteinCombination {
    /// Parses `level N` followed by lines `coeff x1 x2 y1 y2`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, EisError> {
        let mut level = None;
        let mut terms = Vec::new();
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
            if t[0] == "level" {
                level = Some(
                    t.get(1)
                        .and_then(|x| x.parse().ok())
                        .ok_or_else(|| err("bad level"))?,
                );
                continue;
            }
            let v: Vec<i64> = t
                .iter()
                .map(|x| x.parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|_| err("expected five integers"))?;
            let [coeff, x1, x2, y1, y2] = v[..] else {
                return Err(err("expected five integers"));
            };
            terms.push(EisensteinProduct {
                coeff,
                x: (x1, x2),
                y: (y1, y2),
            });
        }
        let level = level.ok_or(EisError::CurveData {
            line: 0,
            msg: "missing `level` line".into(),
        })?;
        Ok(EisensteinCombination { level, terms })
    }

    pub fn scaled(&self, k: i64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= k;
        }
        out
    }

    /// The exact q-expansion below `q^prec`; every product must have
    /// integral exponents.
    pub fn assemble(&self, prec: i64) -> Result<FracSeries, EisError> {
        if prec < MIN_ASSEMBLY_PREC {
            return Err(EisError::PrecisionTooLow(prec, MIN_ASSEMBLY_PREC));
        }
        let mut acc: Option<FracSeries> = None;
        for t in &self.terms {
            let gx = eisenstein_g(self.level, t.x.0, t.x.1, prec)?;
            let gy = eisenstein_g(self.level, t.y.0, t.y.1, prec)?;
            let p = gx.series.mul(&gy.series)?;
            if !p.has_integral_exponents() {
                return Err(EisError::FractionalProduct(t.to_string()));
            }
            let p = p.scale(&BigRational::from_integer(t.coeff.into()));
            acc = Some(match acc {
                None => p,
                Some(a) => a.add(&p)?,
            });
        }
        Ok(acc.unwrap_or(FracSeries::zero(self.level, self.level as i64, None)?))
    }
}

/// `c` with `F = c·f`, certified by agreement of the coefficients of
/// `q^0 .. q^sturm` (`f[n]` is the coefficient of `q^n`).
pub fn identify_multiple(
    f_big: &FracSeries,
    f: &[BigRational],
    sturm: usize,
) -> Result<BigRational, EisError> {
    let n = sturm + 1;
    let lhs = f_big.integer_coeffs(n)?;
    let coeff = |i: usize| f.get(i).cloned().unwrap_or_else(BigRational::zero);
    let j = (0..n)
        .find(|&i| !coeff(i).is_zero())
        .ok_or(EisError::ZeroReference)?;
    let c = &lhs[j] / coeff(j);
    for (i, l) in lhs.iter().enumerate() {
        if *l != &c * coeff(i) {
            return Err(EisError::NotProportional {
                n: i,
                lhs: l.to_string(),
                rhs: coeff(i).to_string(),
                c: c.to_string(),
            });
        }
    }
    Ok(c)
}

/// Sturm bound `⌊k·index/12⌋` for weight `k` and a group of the given index
/// in SL2(Z).
pub fn sturm_bound(weight: u32, index: u64) -> usize {
    (weight as u64 * index / 12) as usize
}

/// `[SL2(Z) : ±Γ1(N)]`.
pub fn gamma1_index(level: u64) -> u64 {
    if level <= 2 {
        return if level == 2 { 3 } else { 1 };
    }
    let mut idx = level * level;
    let mut n = level;
    let mut p = 2;
    while n > 1 {
        if n.is_multiple_of(p) {
            idx = idx / (p * p) * (p * p - 1);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    idx / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn first_coefficient() {
        let g = eisenstein_g(15, 1, 1, 2).unwrap();
        let c = g.series.coefficient(Rational64::new(1, 15)).unwrap();
        assert_eq!(c, BigRational::one());
    }

    #[test]
    fn odd_symmetry() {
        let g = eisenstein_g(15, 2, 7, 6).unwrap();
        let h = eisenstein_g(15, -2, -7, 6).unwrap();
        assert_eq!(g.series, h.series.neg());
    }

    #[test]
    fn zero_index_rejected() {
        assert!(matches!(
            eisenstein_g(15, 0, 3, 5),
            Err(EisError::ZeroIndex { .. })
        ));
        assert!(matches!(
            eisenstein_g(15, 4, 15, 5),
            Err(EisError::ZeroIndex { .. })
        ));
    }

    #[test]
    fn integral_product() {
        let g = eisenstein_g(15, 1, 1, 20).unwrap();
        let h = eisenstein_g(15, 4, -4, 20).unwrap();
        assert!(g.series.mul(&h.series).unwrap().has_integral_exponents());
        let h2 = eisenstein_g(15, 4, -3, 20).unwrap();
        assert!(!g.series.mul(&h2.series).unwrap().has_integral_exponents());
    }

    #[test]
    fn brute_force_coefficients() {
        // Direct count over all (m, n) with mn = k.
        let g = eisenstein_g(15, 2, 4, 5).unwrap();
        for k in 1..75i64 {
            let mut c = 0i64;
            for m in 1..=k {
                if k % m != 0 {
                    continue;
                }
                let n = k / m;
                if m % 15 == 2 && n % 15 == 4 {
                    c += 1;
                }
                if m % 15 == 13 && n % 15 == 11 {
                    c -= 1;
                }
            }
            let got = g
                .series
                .coefficient(Rational64::new(k, 15))
                .unwrap_or_else(BigRational::zero);
            assert_eq!(got, BigRational::from_integer(c.into()), "k={k}");
        }
    }

    #[test]
    fn sturm_at_15() {
        assert_eq!(gamma1_index(15), 96);
        assert_eq!(sturm_bound(2, gamma1_index(15)), 16);
        assert_eq!(gamma1_index(7), 24);
    }
}
