use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::units::UnitVector;

/// An element of `Q[U2] ⊗ ⟨U1⟩`: a finite sum of `c · {u}_2 ⊗ g_{0,a}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Symbol2 {
    level: u32,
    terms: BTreeMap<(UnitVector, u32), BigRational>,
}

impl Symbol2 {
    pub fn zero(level: u32) -> Self {
        Symbol2 {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&UnitVector, u32, &BigRational)> {
        self.terms.iter().map(|((u, a), c)| (u, *a, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Adds `c · {u}_2 ⊗ g_{0,a}`.
    pub fn add_basic(&mut self, c: &BigRational, u: &UnitVector, a: u32) {
        if c.is_zero() {
            return;
        }
        let key = (u.clone().with_sign(1), a);
        let e = self
            .terms
            .entry(key.clone())
            .or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// Adds `c · {u}_2 ⊗ g`, expanding `g` in the Siegel basis.
    pub fn add_term(&mut self, c: &BigRational, u: &UnitVector, g: &UnitVector) {
        for (a, e) in g.exponents() {
            self.add_basic(&(c * e), u, *a);
        }
    }

    /// The coboundary `{u}_2 ⊗ u`.
    pub fn coboundary(u: &UnitVector) -> Self {
        let mut s = Self::zero(u.level());
        s.add_term(&BigRational::from_integer(1.into()), u, u);
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((u, a), c) in &other.terms {
            out.add_basic(c, u, *a);
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero(self.level);
        for ((u, a), c) in &self.terms {
            out.add_basic(&(c * k), u, *a);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::from_integer(1.into())))
    }
}

impl fmt::Display for Symbol2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((u, a), c)| format!("{c}*{{{u}}}⊗g{a}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coordinates in `Λ^k ⟨U1⟩` over the basis of increasing index tuples.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Wedge<const K: usize> {
    pub coords: BTreeMap<[u32; K], BigRational>,
}

pub type Wedge2 = Wedge<2>;
pub type Wedge3 = Wedge<3>;

impl<const K: usize> Wedge<K> {
    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn add_scaled(&mut self, c: &BigRational, other: &Self) {
        for (k, v) in &other.coords {
            let e = self.coords.entry(*k).or_insert_with(BigRational::zero);
            *e += c * v;
            if e.is_zero() {
                self.coords.remove(k);
            }
        }
    }
}

impl<const K: usize> fmt::Display for Wedge<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|(idx, c)| {
                let g: Vec<String> = idx.iter().map(|i| format!("g{i}")).collect();
                format!("{c}*{}", g.join("∧"))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `x ∧ y` for unit vectors.
pub fn wedge2(x: &UnitVector, y: &UnitVector) -> Wedge2 {
    let mut w = Wedge2::default();
    for (i, xi) in x.exponents() {
        for (j, yj) in y.exponents() {
            if i == j {
                continue;
            }
            let (key, s) = if i < j { ([*i, *j], 1) } else { ([*j, *i], -1) };
            let v = xi * yj;
            let e = w.coords.entry(key).or_insert_with(BigRational::zero);
            if s > 0 {
                *e += v;
            } else {
                *e -= v;
            }
        }
    }
    w.coords.retain(|_, v| !v.is_zero());
    w
}

/// `w ∧ g_{0,a}` for `w ∈ Λ²`.
pub fn wedge_with_basis(w: &Wedge2, a: u32) -> Wedge3 {
    let mut out = Wedge3::default();
    for ([i, j], c) in &w.coords {
        if *i == a || *j == a {
            continue;
        }
        let mut idx = [*i, *j, a];
        // Sign of the permutation sorting (i, j, a) with i < j.
        let sign = if a < *i {
            1
        } else if a < *j {
            -1
        } else {
            1
        };
        idx.sort_unstable();
        let e = out.coords.entry(idx).or_insert_with(BigRational::zero);
        if sign > 0 {
            *e += c;
        } else {
            *e -= c;
        }
    }
    out.coords.retain(|_, v| !v.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uv(pairs: &[(i64, i64)]) -> UnitVector {
        UnitVector::from_ints(15, pairs.iter().copied(), 1).unwrap()
    }

    #[test]
    fn wedge_is_alternating() {
        let x = uv(&[(1, 2), (3, -1)]);
        let y = uv(&[(2, 1), (3, 5)]);
        let mut s = wedge2(&x, &y);
        s.add_scaled(&BigRational::from_integer(1.into()), &wedge2(&y, &x));
        assert!(s.is_zero());
        assert!(wedge2(&x, &x).is_zero());
    }

    #[test]
    fn wedge3_signs() {
        // g1∧g3∧g2 = -g1∧g2∧g3
        let w = wedge_with_basis(&wedge2(&uv(&[(1, 1)]), &uv(&[(3, 1)])), 2);
        assert_eq!(
            w.coords,
            BTreeMap::from([([1, 2, 3], BigRational::from_integer((-1).into()))])
        );
        let w = wedge_with_basis(&wedge2(&uv(&[(2, 1)]), &uv(&[(3, 1)])), 1);
        assert_eq!(
            w.coords,
            BTreeMap::from([([1, 2, 3], BigRational::from_integer(1.into()))])
        );
    }

    #[test]
    fn coboundary_has_expected_terms() {
        let u = uv(&[(2, 1), (4, 1), (1, -1), (7, -1)]);
        let s = Symbol2::coboundary(&u);
        assert_eq!(s.num_terms(), 4);
        assert!(s.sub(&s).is_zero());
    }
}
