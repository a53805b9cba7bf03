//! Cusps of X_1(N) as classes of bottom rows `(c, d)`, with `c` mod N and
//! `d` a unit mod gcd(c, N), up to an overall sign.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;

/// Canonical representative of a cusp class of Γ1(N).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspRep {
    pub c: u32,
    pub d: u32,
}

fn modn(x: i64, n: i64) -> i64 {
    x.rem_euclid(n)
}

impl CuspRep {
    /// The cusp `γ∞` for any `γ` in SL2(Z) with bottom row `(c, d)`.
    pub fn from_bottom_row(level: u32, c: i64, d: i64) -> CuspRep {
        let n = level as i64;
        let c0 = modn(c, n);
        let g = c0.gcd(&n);
        let a = (c0, modn(d, g));
        let b = (modn(-c, n), modn(-d, g));
        let (c, d) = a.min(b);
        CuspRep {
            c: c as u32,
            d: d as u32,
        }
    }

    /// Cusp width for Γ1(N): `N / gcd(c, N)`.
    pub fn width(&self, level: u32) -> u32 {
        level / self.c.gcd(&level)
    }
}

impl fmt::Display for CuspRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c, self.d)
    }
}

/// Galois orbit of cusps represented by `1/k = (1 0; k 1)∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CuspOrbit {
    pub k: u32,
    pub rep: CuspRep,
    pub members: Vec<CuspRep>,
    /// Width of every cusp in the orbit; the local parameter is `q^(1/width)`.
    pub width: u32,
}

impl CuspOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Label of the orbit representative: `oo` for `1/0`, `0` for `1/1`
    /// (which is Γ1(N)-equivalent to the cusp 0) and `1/k` otherwise.
    pub fn label(&self) -> String {
        cusp_label(self.k)
    }
}

pub fn cusp_label(k: u32) -> String {
    match k {
        0 => "oo".to_string(),
        1 => "0".to_string(),
        k => format!("1/{k}"),
    }
}

#[derive(Clone, Debug)]
pub struct CuspTable {
    pub level: u32,
    pub cusps: Vec<CuspRep>,
    pub orbits: Vec<CuspOrbit>,
}

impl CuspTable {
    pub fn orbit_of(&self, cusp: CuspRep) -> Option<&CuspOrbit> {
        self.orbits.iter().find(|o| o.members.contains(&cusp))
    }

    pub fn index_of(&self, cusp: CuspRep) -> Option<usize> {
        self.cusps.binary_search(&cusp).ok()
    }

    pub fn orbit_by_label(&self, label: &str) -> Option<&CuspOrbit> {
        self.orbits.iter().find(|o| o.label() == label)
    }
}

/// All cusps of X_1(N) and their Galois orbits.
///
/// The Galois action is `σ·(c, d) = (c, χ(σ) d)`; the orbits are represented
/// by `1/k` for `0 <= k <= N/2`.
pub fn enumerate_cusps(level: u32) -> CuspTable {
    let n = level as i64;
    let mut all = BTreeSet::new();
    for c in 0..n {
        let g = c.gcd(&n);
        for d in 0..g.max(1) {
            if d.gcd(&g) == 1 || g == 1 {
                all.insert(CuspRep::from_bottom_row(level, c, d));
            }
        }
    }
    let units: Vec<i64> = (1..=n).filter(|x| x.gcd(&n) == 1).collect();
    let orbits = (0..=level / 2)
        .map(|k| {
            let members: BTreeSet<CuspRep> = units
                .iter()
                .map(|&chi| CuspRep::from_bottom_row(level, k as i64, chi))
                .collect();
            let rep = CuspRep::from_bottom_row(level, k as i64, 1);
            CuspOrbit {
                k,
                rep,
                width: rep.width(level),
                members: members.into_iter().collect(),
            }
        })
        .collect();
    CuspTable {
        level,
        cusps: all.into_iter().collect(),
        orbits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_has_one_cusp() {
        let t = enumerate_cusps(1);
        assert_eq!(t.cusps.len(), 1);
        assert_eq!(t.orbits.len(), 1);
    }

    #[test]
    fn level_fifteen_orbits() {
        let t = enumerate_cusps(15);
        let ks: Vec<u32> = t.orbits.iter().map(|o| o.k).collect();
        assert_eq!(ks, (0..=7).collect::<Vec<_>>());
        // Direct count of (c, d) classes: (1/2) sum_{d | N} phi(d) phi(N/d) = 16.
        assert_eq!(t.cusps.len(), 16);
        let sizes: Vec<usize> = t.orbits.iter().map(|o| o.size()).collect();
        assert_eq!(sizes.iter().sum::<usize>(), 16);
        assert_eq!(sizes, vec![4, 1, 1, 2, 1, 4, 2, 1]);
    }

    #[test]
    fn orbits_partition_the_cusps() {
        for n in [5u32, 7, 11, 12, 13, 15, 20] {
            let t = enumerate_cusps(n);
            let mut seen = BTreeSet::new();
            for o in &t.orbits {
                for m in &o.members {
                    assert!(seen.insert(*m), "cusp {m} in two orbits at N={n}");
                }
            }
            assert_eq!(seen.len(), t.cusps.len());
        }
    }

    #[test]
    fn cusp_zero_is_one_over_one() {
        let zero = CuspRep::from_bottom_row(15, 1, 0);
        assert_eq!(zero, CuspRep::from_bottom_row(15, 1, 1));
        assert_eq!(zero.width(15), 15);
        assert_eq!(CuspRep::from_bottom_row(15, 0, 1).width(15), 1);
    }
}
