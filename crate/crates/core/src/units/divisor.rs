use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Rational64;

use crate::error::UnitsError;
use crate::qexp::bernoulli2;
use crate::units::cusps::{cusp_label, enumerate_cusps, CuspTable};
use crate::units::siegel::{reduce_class, u1_as_siegel};

/// Orders of a modular unit at the Galois-orbit representatives `1/k`.
///
/// A unit defined over Q has the same order at every cusp of an orbit, so
/// the orbit representative carries the information for the whole orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitDivisor {
    pub level: u32,
    /// `k ↦ order at 1/k`, zero orders omitted.
    pub orders: BTreeMap<u32, i64>,
}

impl UnitDivisor {
    pub fn order_at(&self, k: u32) -> i64 {
        self.orders.get(&k).copied().unwrap_or(0)
    }

    /// Sum of orders over all cusps of X_1(N).
    pub fn degree(&self, table: &CuspTable) -> i64 {
        table
            .orbits
            .iter()
            .map(|o| self.order_at(o.k) * o.size() as i64)
            .sum()
    }

    pub fn neg(&self) -> Self {
        UnitDivisor {
            level: self.level,
            orders: self.orders.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }

    /// Lines `("1/k", order)` for the nonzero orders, ordered by `k`.
    pub fn to_lines(&self) -> Vec<String> {
        self.orders
            .iter()
            .map(|(k, v)| format!("(\"{}\", {})", cusp_label(*k), v))
            .collect()
    }
}

impl fmt::Display for UnitDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .orders
            .iter()
            .map(|(k, v)| format!("{}[{}]", v, cusp_label(*k)))
            .collect();
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

/// Leading q-exponent of `u1(a,b,c,d) | (1 0; k 1)`.
///
/// The slashed unit is `u((ka,a),(kb,b),(kc,c),(kd,d))`, a ratio of
/// full-level Siegel units `g_{(k x, x)}` whose leading exponent is
/// `B2({k x / N}) / 2`.
pub fn slashed_leading_exponent(level: u32, params: [i64; 4], k: u32) -> Rational64 {
    let n = level as i64;
    let [a, b, c, d] = params;
    let num = [a + c, a - c, b + d, b - d];
    let den = [a + d, a - d, b + c, b - c];
    let b2 = |x: i64| bernoulli2(Rational64::new((k as i64 * x).rem_euclid(n), n)) / 2;
    num.iter().map(|x| b2(*x)).sum::<Rational64>() - den.iter().map(|x| b2(*x)).sum::<Rational64>()
}

/// Divisor of `u1(a,b,c,d)` on X_1(N), with orders measured in the local
/// parameter `q^{gcd(k,N)/N}` at `1/k`.
pub fn divisor_u1(level: u32, params: [i64; 4]) -> Result<UnitDivisor, UnitsError> {
    u1_as_siegel(level, params)?;
    let n = level as i64;
    let mut orders = BTreeMap::new();
    for k in 0..=level / 2 {
        let width = n / (k as i64).gcd(&n);
        let ord = slashed_leading_exponent(level, params, k) * width;
        if !ord.is_integer() {
            return Err(UnitsError::NonIntegralOrder {
                cusp: cusp_label(k),
                value: ord.to_string(),
            });
        }
        if *ord.numer() != 0 {
            orders.insert(k, ord.to_integer());
        }
    }
    Ok(UnitDivisor { level, orders })
}

/// Canonical representative of a quadruple of classes, for reporting.
pub fn reduced_params(level: u32, params: [i64; 4]) -> [u32; 4] {
    params.map(|x| reduce_class(x, level))
}

/// Divisor check used by reports: degree zero over the full cusp set.
pub fn check_degree_zero(div: &UnitDivisor) -> bool {
    div.degree(&enumerate_cusps(div.level)) == 0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::oracle::slashed_u1;
    use num_complex::Complex64;
    use std::f64::consts::PI;

    /// Order at `1/k` read off from the decay rate of `|u(iT)|`.
    fn numeric_order(level: i64, p: [i64; 4], k: i64) -> f64 {
        let (t1, t2) = (25.0, 35.0);
        let l1 = slashed_u1(level, p, k, Complex64::new(0.0, t1)).norm().ln();
        let l2 = slashed_u1(level, p, k, Complex64::new(0.0, t2)).norm().ln();
        let ord_q = -(l2 - l1) / (2.0 * PI * (t2 - t1));
        ord_q * (level / k.gcd(&level)) as f64
    }

    #[test]
    fn printed_divisors() {
        let du = divisor_u1(15, [1, 2, 3, 7]).unwrap();
        assert_eq!(du.orders, BTreeMap::from([(2, -2), (7, 2)]));
        let dv = divisor_u1(15, [2, 4, 6, 1]).unwrap();
        assert_eq!(dv.orders, BTreeMap::from([(1, -2), (4, 2)]));
        assert_eq!(du.to_string(), "-2[1/2] + 2[1/7]");
        assert_eq!(dv.to_string(), "-2[0] + 2[1/4]");
        assert_eq!(du.to_lines(), vec!["(\"1/2\", -2)", "(\"1/7\", 2)"]);
    }

    #[test]
    fn degrees_vanish() {
        for level in [7u32, 11, 13, 15] {
            let table = enumerate_cusps(level);
            let h = (level / 2) as i64;
            for a in 0..=h {
                for b in a + 1..=h {
                    for c in b + 1..=h {
                        for d in c + 1..=h {
                            let div = divisor_u1(level, [a, b, c, d]).unwrap();
                            assert_eq!(div.degree(&table), 0, "{level} {a} {b} {c} {d}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orders_match_weierstrass_values() {
        let cases: [(u32, [i64; 4]); 5] = [
            (15, [1, 2, 3, 7]),
            (15, [2, 4, 6, 1]),
            (15, [0, 3, 5, 6]),
            (11, [1, 2, 3, 5]),
            (7, [0, 1, 2, 3]),
        ];
        for (level, p) in cases {
            let div = divisor_u1(level, p).unwrap();
            for k in 0..=level / 2 {
                let num = numeric_order(level as i64, p, k as i64);
                assert!(
                    (num - div.order_at(k) as f64).abs() < 0.05,
                    "N={level} {p:?} k={k}: numeric {num} vs {}",
                    div.order_at(k)
                );
            }
        }
    }
}
