//! The modular complexes `C_N(2)` and `C_N(3)` built from cross-ratio
//! units: the set U2, the relation space R2, coboundaries, the
//! differential `d2`, and decomposition of degree-2 cocycles.

pub mod data;
pub mod decompose;
pub mod symbol;

use std::collections::{BTreeMap, HashMap};

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::GoncharovError;
use crate::linalg::{Echelon, SparseRat};
use crate::qexp::FracSeries;
use crate::units::{u1_as_siegel, UnitVector};

pub use data::{CocycleFile, CocycleTerm};
pub use decompose::{decompose, Certificate, Decomposition, DEFAULT_CAP};
pub use symbol::{wedge2, wedge_with_basis, Symbol2, Wedge2, Wedge3};

/// Precision (in q-powers) of the q-expansion check behind `one_minus`.
pub const ONE_MINUS_PREC: i64 = 24;

/// Sign of the permutation sorting `q`, and the sorted tuple.
pub fn sort_with_sign<const K: usize>(q: [u32; K]) -> ([u32; K], i8) {
    let mut sign = 1;
    for i in 0..K {
        for j in i + 1..K {
            if q[i] > q[j] {
                sign = -sign;
            }
        }
    }
    let mut s = q;
    s.sort_unstable();
    (s, sign)
}

fn permutations4(q: [u32; 4]) -> Vec<[u32; 4]> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    if i != j && i != k && i != l && j != k && j != l && k != l {
                        out.push([q[i], q[j], q[k], q[l]]);
                    }
                }
            }
        }
    }
    out
}

/// A unit of U2 with the parameter orderings that produce it.
#[derive(Clone, Debug)]
pub struct U2Element {
    pub index: usize,
    /// Lexicographically smallest ordered quadruple giving this unit.
    pub quad: [u32; 4],
    pub unit: UnitVector,
    /// Index of the 4-subset `sorted(quad)`.
    pub subset: usize,
    /// Sign of the permutation sorting `quad`.
    pub sign: i8,
    pub orderings: Vec<[u32; 4]>,
    /// Index of `1 - u`.
    pub one_minus: usize,
    /// Index of `1 / u`.
    pub inverse: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationTag {
    /// `{u1(from)}_2` and `{u1(to)}_2` are the same unit; in subset
    /// coordinates the row is `ε(to)·e_to - ε(from)·e_from`.
    Antisym { from: [u32; 4], to: [u32; 4] },
    /// `Σ_j {u1(t_j, t_{j+1}, t_{j+2}, t_{j+3})}_2`.
    FiveTerm([u32; 5]),
}

impl std::fmt::Display for RelationTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let j = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            RelationTag::Antisym { from, to } => write!(f, "antisym {} {}", j(from), j(to)),
            RelationTag::FiveTerm(t) => write!(f, "5-term {}", j(t)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RelationRow {
    pub tag: RelationTag,
    pub row: SparseRat,
}

/// Subset-coordinate image `ε(q) · e_{sorted q}` of `{u1(q)}_2`.
pub fn subset_image(subset_index: &HashMap<[u32; 4], usize>, q: [u32; 4]) -> (usize, i8) {
    let (s, e) = sort_with_sign(q);
    (subset_index[&s], e)
}

/// Row of a relation in subset coordinates, rebuilt from its tag.
pub fn relation_row(subset_index: &HashMap<[u32; 4], usize>, tag: &RelationTag) -> SparseRat {
    let mut row = SparseRat::new();
    let mut add = |q: [u32; 4], c: i64| {
        let (s, e) = subset_image(subset_index, q);
        let v = row.entry(s).or_insert_with(BigRational::zero);
        *v += BigRational::from_integer((c * e as i64).into());
        if v.is_zero() {
            row.remove(&s);
        }
    };
    match tag {
        RelationTag::Antisym { from, to } => {
            add(*to, 1);
            add(*from, -1);
        }
        RelationTag::FiveTerm(t) => {
            for j in 0..5 {
                add([t[j], t[(j + 1) % 5], t[(j + 2) % 5], t[(j + 3) % 5]], 1);
            }
        }
    }
    row
}

/// `U2`, `R2` and the quotient `Q[U2]/R2` at level N.
#[derive(Clone, Debug)]
pub struct ModularComplex {
    pub level: u32,
    /// Basis indices of `⟨U1⟩`: `1..=N/2`.
    pub u1_rank: u32,
    pub subsets: Vec<[u32; 4]>,
    pub subset_index: HashMap<[u32; 4], usize>,
    pub u2: Vec<U2Element>,
    by_unit: HashMap<UnitVector, usize>,
    pub relations: Vec<RelationRow>,
    r2: Echelon,
    free_index: HashMap<usize, usize>,
    /// Image of `{u}_2` in the quotient coordinates, per U2 element.
    quotient_image: Vec<SparseRat>,
}

/// The classes `0..=N/2` of `(Z/NZ)/±1`.
fn classes(level: u32) -> Vec<u32> {
    (0..=level / 2).collect()
}

/// U2 as a set: units keyed by their Siegel-basis vector, with the
/// orderings that produce each one.
pub fn build_u2(level: u32) -> Result<Vec<(UnitVector, Vec<[u32; 4]>)>, GoncharovError> {
    if level < 5 {
        return Err(GoncharovError::LevelTooSmall(level));
    }
    let cls = classes(level);
    let mut by_unit: BTreeMap<UnitVector, Vec<[u32; 4]>> = BTreeMap::new();
    for a in &cls {
        for b in &cls {
            for c in &cls {
                for d in &cls {
                    let q = [*a, *b, *c, *d];
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    let u = u1_as_siegel(level, q.map(|x| x as i64))?;
                    if u.is_constant() {
                        continue;
                    }
                    by_unit.entry(u).or_default().push(q);
                }
            }
        }
    }
    let mut out: Vec<(UnitVector, Vec<[u32; 4]>)> = by_unit.into_iter().collect();
    for (_, qs) in out.iter_mut() {
        qs.sort_unstable();
    }
    out.sort_by(|a, b| a.1[0].cmp(&b.1[0]));
    Ok(out)
}

/// Constants `κ1, κ2` with `κ1·s1 + κ2·s2 = 1` up to the common precision.
fn solve_partition_of_one(s1: &FracSeries, s2: &FracSeries) -> Option<(BigRational, BigRational)> {
    let prec = s1.prec()?.min(s2.prec()?);
    let mut exps: Vec<Rational64> = s1
        .terms()
        .map(|(e, _)| e)
        .chain(s2.terms().map(|(e, _)| e))
        .collect();
    exps.push(Rational64::zero());
    exps.sort();
    exps.dedup();
    let eqs: Vec<(BigRational, BigRational, BigRational)> = exps
        .iter()
        .filter(|e| **e < prec)
        .map(|e| {
            let c1 = s1.coefficient(*e).unwrap_or_else(BigRational::zero);
            let c2 = s2.coefficient(*e).unwrap_or_else(BigRational::zero);
            let rhs = if e.is_zero() {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            (c1, c2, rhs)
        })
        .collect();
    let mut sol = None;
    'outer: for i in 0..eqs.len() {
        for j in i + 1..eqs.len() {
            let (a1, b1, r1) = &eqs[i];
            let (a2, b2, r2) = &eqs[j];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            let k1 = (r1 * b2 - r2 * b1) / &det;
            let k2 = (a1 * r2 - a2 * r1) / &det;
            sol = Some((k1, k2));
            break 'outer;
        }
    }
    let (k1, k2) = sol?;
    if k1.is_zero() || k2.is_zero() {
        return None;
    }
    eqs.iter()
        .all(|(a, b, r)| &(&k1 * a + &k2 * b) == r)
        .then_some((k1, k2))
}

/// Whether `u' = const · (1 - u)` holds on q-expansions below `prec`.
pub fn check_one_minus(u: &UnitVector, u2: &UnitVector, prec: i64) -> Result<bool, GoncharovError> {
    let p = Rational64::from_integer(prec);
    let s1 = u.fricke_qexp(p)?;
    let s2 = u2.fricke_qexp(p)?;
    Ok(solve_partition_of_one(&s1, &s2).is_some())
}

impl ModularComplex {
    /// Builds U2 with its `1 - u` involution (validated on q-expansions
    /// when `validate` is set), all relation rows, and the echelon form of R2.
    pub fn build(level: u32, validate: bool) -> Result<Self, GoncharovError> {
        let raw = build_u2(level)?;
        let cls = classes(level);
        let mut subsets = Vec::new();
        for a in 0..cls.len() {
            for b in a + 1..cls.len() {
                for c in b + 1..cls.len() {
                    for d in c + 1..cls.len() {
                        subsets.push([cls[a], cls[b], cls[c], cls[d]]);
                    }
                }
            }
        }
        let subset_index: HashMap<[u32; 4], usize> =
            subsets.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let by_unit: HashMap<UnitVector, usize> = raw
            .iter()
            .enumerate()
            .map(|(i, (u, _))| (u.clone(), i))
            .collect();

        let one_minus: Vec<Result<usize, GoncharovError>> = raw
            .par_iter()
            .map(|(u, qs)| {
                let q = qs[0];
                let mut candidates = vec![[q[0], q[2], q[1], q[3]]];
                candidates.extend(permutations4(q));
                for cand in candidates {
                    let v = u1_as_siegel(level, cand.map(|x| x as i64))?;
                    let Some(&j) = by_unit.get(&v) else { continue };
                    if !validate || check_one_minus(u, &v, ONE_MINUS_PREC)? {
                        return Ok(j);
                    }
                }
                Err(GoncharovError::OneMinusValidation(q))
            })
            .collect();

        let mut u2 = Vec::with_capacity(raw.len());
        for (i, ((u, qs), om)) in raw.iter().zip(one_minus).enumerate() {
            let quad = qs[0];
            let (s, sign) = sort_with_sign(quad);
            let inverse = *by_unit
                .get(&u.inv())
                .ok_or_else(|| GoncharovError::NotInU2(quad.map(|x| x as i64)))?;
            u2.push(U2Element {
                index: i,
                quad,
                unit: u.clone(),
                subset: subset_index[&s],
                sign,
                orderings: qs.clone(),
                one_minus: om?,
                inverse,
            });
        }

        // Identification rows: every ordering of a unit against its canonical one.
        let mut relations: Vec<RelationRow> = Vec::new();
        for e in &u2 {
            for q in &e.orderings[1..] {
                let tag = RelationTag::Antisym {
                    from: e.quad,
                    to: *q,
                };
                let row = relation_row(&subset_index, &tag);
                if !row.is_empty() {
                    relations.push(RelationRow { tag, row });
                }
            }
        }
        let tuples: Vec<[u32; 5]> = five_tuples(&cls);
        let five: Vec<RelationRow> = tuples
            .par_iter()
            .map(|t| {
                let tag = RelationTag::FiveTerm(*t);
                RelationRow {
                    row: relation_row(&subset_index, &tag),
                    tag,
                }
            })
            .filter(|r| !r.row.is_empty())
            .collect();
        relations.extend(five);

        let mut r2 = Echelon::new(subsets.len());
        for r in &relations {
            r2.insert(&r.row);
        }
        let free_index: HashMap<usize, usize> = r2
            .free_columns()
            .into_iter()
            .enumerate()
            .map(|(i, c)| (c, i))
            .collect();
        let quotient_image = u2
            .iter()
            .map(|e| {
                let mut x = SparseRat::new();
                x.insert(e.subset, BigRational::from_integer(e.sign.into()));
                r2.quotient_coords(&x, &free_index)
            })
            .collect();
        Ok(ModularComplex {
            level,
            u1_rank: level / 2,
            subsets,
            subset_index,
            u2,
            by_unit,
            relations,
            r2,
            free_index,
            quotient_image,
        })
    }

    /// `dim Q[U2]/R2`.
    pub fn quotient_dim(&self) -> usize {
        self.free_index.len()
    }

    pub fn r2(&self) -> &Echelon {
        &self.r2
    }

    pub fn index_of(&self, u: &UnitVector) -> Option<usize> {
        self.by_unit.get(&u.clone().with_sign(1)).copied()
    }

    pub fn element(&self, u: &UnitVector) -> Result<&U2Element, GoncharovError> {
        self.index_of(u)
            .map(|i| &self.u2[i])
            .ok_or(GoncharovError::NotInU2([0; 4]))
    }

    pub fn unit_of_quad(&self, q: [i64; 4]) -> Result<&U2Element, GoncharovError> {
        let u = u1_as_siegel(self.level, q)?;
        self.index_of(&u)
            .map(|i| &self.u2[i])
            .ok_or(GoncharovError::NotInU2(q))
    }

    /// The element whose unit is `1 - u` (up to a constant).
    pub fn one_minus(&self, e: &U2Element) -> &U2Element {
        &self.u2[e.one_minus]
    }

    /// Image of `{u}_2` in subset coordinates.
    pub fn subset_vector(&self, i: usize) -> (usize, i8) {
        (self.u2[i].subset, self.u2[i].sign)
    }

    pub fn quotient_image(&self, i: usize) -> &SparseRat {
        &self.quotient_image[i]
    }

    /// `δ{u}_2 = (1-u) ∧ u`.
    pub fn delta2(&self, i: usize) -> Wedge2 {
        let e = &self.u2[i];
        wedge2(&self.u2[e.one_minus].unit, &e.unit)
    }

    /// `d2(Σ c {u}_2 ⊗ g_a) = Σ c (1-u) ∧ u ∧ g_a`.
    pub fn d2(&self, s: &Symbol2) -> Result<Wedge3, GoncharovError> {
        if s.level() != self.level && !s.is_zero() {
            return Err(GoncharovError::LevelMismatch(s.level(), self.level));
        }
        let mut out = Wedge3::default();
        for (u, a, c) in s.terms() {
            let i = self.index_of(u).ok_or(GoncharovError::NotInU2([0; 4]))?;
            out.add_scaled(c, &wedge_with_basis(&self.delta2(i), a));
        }
        Ok(out)
    }

    /// The symbol `Σ_r c_r {u1(q_r)}_2 ⊗ g_r`.
    pub fn symbol_from_terms(&self, terms: &[CocycleTerm]) -> Result<Symbol2, GoncharovError> {
        let mut s = Symbol2::zero(self.level);
        for t in terms {
            let e = self.unit_of_quad(t.quad)?;
            s.add_term(&t.coeff, &e.unit, &t.g);
        }
        Ok(s)
    }
}

/// Ordered 5-tuples of distinct classes, one per cyclic rotation class
/// (the smallest entry first).
fn five_tuples(cls: &[u32]) -> Vec<[u32; 5]> {
    let mut out = Vec::new();
    let n = cls.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for e in 0..n {
                        let t = [cls[a], cls[b], cls[c], cls[d], cls[e]];
                        let distinct = (0..5).all(|i| (i + 1..5).all(|j| t[i] != t[j]));
                        if distinct && t[0] == *t.iter().min().unwrap() {
                            out.push(t);
                        }
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u2_counts_for_primes() {
        for (p, want) in [(7u32, 6usize), (11, 60), (13, 126)] {
            let u2 = build_u2(p).unwrap();
            assert_eq!(u2.len(), want, "N={p}");
            let p = p as usize;
            assert_eq!(want, (p * p - 1) * (p * p - 25) / 192);
        }
    }

    #[test]
    fn quotient_dimension_small_levels() {
        for (p, want) in [(7u32, 1usize), (11, 5)] {
            let cx = ModularComplex::build(p, true).unwrap();
            assert_eq!(cx.quotient_dim(), want, "N={p}");
            assert_eq!(want, (p as usize - 1) * (p as usize - 5) / 12);
        }
    }

    #[test]
    fn one_minus_is_an_involution() {
        let cx = ModularComplex::build(11, true).unwrap();
        for e in &cx.u2 {
            assert_eq!(cx.one_minus(cx.one_minus(e)).index, e.index);
            assert_eq!(cx.u2[cx.u2[e.inverse].inverse].index, e.index);
        }
    }

    #[test]
    fn one_minus_of_u() {
        let cx = ModularComplex::build(15, true).unwrap();
        let u = cx.unit_of_quad([1, 2, 3, 7]).unwrap();
        let w = cx.one_minus(u);
        let expect = u1_as_siegel(15, [1, 3, 2, 7]).unwrap();
        assert_eq!(w.unit, expect);
        assert!(check_one_minus(&u.unit, &w.unit, 40).unwrap());
        // A wrong partner fails the q-expansion test.
        let wrong = cx.unit_of_quad([1, 2, 3, 6]).unwrap();
        assert!(!check_one_minus(&u.unit, &wrong.unit, 40).unwrap());
    }

    #[test]
    fn coboundaries_are_cocycles() {
        let cx = ModularComplex::build(13, false).unwrap();
        for e in &cx.u2 {
            assert!(cx.d2(&Symbol2::coboundary(&e.unit)).unwrap().is_zero());
        }
        assert!(cx.d2(&Symbol2::zero(13)).unwrap().is_zero());
    }

    #[test]
    fn relation_rows_are_killed_by_delta() {
        let cx = ModularComplex::build(13, false).unwrap();
        // δ on subset coordinates: e_S ↦ δ{u1(S)}_2.
        let sorted_delta: Vec<Wedge2> = cx
            .subsets
            .iter()
            .map(|s| cx.delta2(cx.unit_of_quad(s.map(|x| x as i64)).unwrap().index))
            .collect();
        for r in &cx.relations {
            let mut acc = Wedge2::default();
            for (s, c) in &r.row {
                acc.add_scaled(c, &sorted_delta[*s]);
            }
            assert!(acc.is_zero(), "{}", r.tag);
        }
    }

    #[test]
    fn distinct_vectors_are_distinct_functions() {
        use crate::units::oracle::slashed_u1;
        use num_complex::Complex64;
        let tau = Complex64::new(0.071, 1.13);
        let raw = build_u2(15).unwrap();
        let mut values = Vec::new();
        for (_, qs) in &raw {
            let vals: Vec<Complex64> = qs
                .iter()
                .map(|q| slashed_u1(15, q.map(|x| x as i64), 0, tau))
                .collect();
            for v in &vals {
                assert!((v - vals[0]).norm() < 1e-9 * vals[0].norm());
            }
            values.push(vals[0]);
        }
        // 50 pairs spread over U2.
        for k in 0..50 {
            let i = (k * 37) % values.len();
            let j = (k * 101 + 13) % values.len();
            if i == j {
                continue;
            }
            assert!((values[i] - values[j]).norm() > 1e-6, "{i} {j}");
        }
    }
}
