use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::GoncharovError;
use crate::goncharov::{relation_row, sort_with_sign, ModularComplex, RelationTag, Symbol2};
use crate::linalg::{axpy, Echelon, SparseRat};
use crate::units::{u1_as_siegel, UnitVector};

/// Default cap on `rows × columns` for a decomposition system.
pub const DEFAULT_CAP: usize = 50_000_000;

#[derive(Clone, Debug)]
pub enum Decomposition {
    InSpan(Certificate),
    /// The target is not in the computed span; this says nothing about
    /// the true cohomology class.
    NotInSpan {
        span_rank: usize,
        dim: usize,
    },
}

/// Exact witness of `target - Σ λ_i cand_i = Σ c_u {u}_2⊗u + Σ μ R ⊗ g_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub level: u32,
    pub lambda: Vec<BigRational>,
    /// Canonical parameter quadruple of every unit referenced.
    pub units: Vec<[u32; 4]>,
    /// `(unit quadruple, c_u)`.
    pub coboundaries: Vec<([u32; 4], BigRational)>,
    /// `(basis index a, relation, μ)`.
    pub relations: Vec<(u32, RelationTag, BigRational)>,
}

fn image_in_quotient(
    cx: &ModularComplex,
    s: &Symbol2,
    q: usize,
) -> Result<SparseRat, GoncharovError> {
    let mut out = SparseRat::new();
    for (u, a, c) in s.terms() {
        let i = cx.index_of(u).ok_or(GoncharovError::NotInU2([0; 4]))?;
        let mut shifted = SparseRat::new();
        for (col, v) in cx.quotient_image(i) {
            shifted.insert((a as usize - 1) * q + col, v.clone());
        }
        axpy(&mut out, c, &shifted);
    }
    Ok(out)
}

/// Per-basis-index lift of a symbol to subset coordinates.
fn lift_to_subsets(
    s: &Symbol2,
    quad_of: &HashMap<UnitVector, [u32; 4]>,
    subset_index: &HashMap<[u32; 4], usize>,
) -> Result<BTreeMap<u32, SparseRat>, GoncharovError> {
    let mut out: BTreeMap<u32, SparseRat> = BTreeMap::new();
    for (u, a, c) in s.terms() {
        let q = quad_of.get(u).ok_or_else(|| {
            GoncharovError::CertificateReplay(format!("unit {u} has no parameters"))
        })?;
        let (sorted, sign) = sort_with_sign(*q);
        let col = subset_index[&sorted];
        let mut e = SparseRat::new();
        e.insert(col, BigRational::from_integer(sign.into()));
        axpy(out.entry(a).or_default(), c, &e);
    }
    out.retain(|_, v| !v.is_empty());
    Ok(out)
}

/// Finds `λ` with `target - Σ λ_i candidates_i ∈ R2 ⊗ ⟨U1⟩ + Q`.
pub fn decompose(
    cx: &ModularComplex,
    target: &Symbol2,
    candidates: &[Symbol2],
    cap: usize,
) -> Result<Decomposition, GoncharovError> {
    for s in std::iter::once(target).chain(candidates) {
        if !s.is_zero() && s.level() != cx.level {
            return Err(GoncharovError::LevelMismatch(s.level(), cx.level));
        }
    }
    let q = cx.quotient_dim();
    let cols = q * cx.u1_rank as usize;
    let n = cx.u2.len();
    let rows = n + candidates.len();
    if rows.saturating_mul(cols) > cap || cx.relations.len().saturating_mul(cx.subsets.len()) > cap
    {
        return Err(GoncharovError::DimensionOverflow {
            rows: rows.max(cx.relations.len()),
            cols: cols.max(cx.subsets.len()),
            cap,
        });
    }
    let mut ech = Echelon::new(cols);
    let cobs: Vec<Symbol2> = cx.u2.iter().map(|e| Symbol2::coboundary(&e.unit)).collect();
    for c in &cobs {
        ech.insert(&image_in_quotient(cx, c, q)?);
    }
    for c in candidates {
        ech.insert(&image_in_quotient(cx, c, q)?);
    }
    let red = ech.reduce(&image_in_quotient(cx, target, q)?);
    if !red.is_member() {
        return Ok(Decomposition::NotInSpan {
            span_rank: ech.rank(),
            dim: cols,
        });
    }
    let coef = |i: usize| {
        red.provenance
            .get(&i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    };
    let lambda: Vec<BigRational> = (0..candidates.len()).map(|i| coef(n + i)).collect();
    let mut rest = target.clone();
    for (l, c) in lambda.iter().zip(candidates) {
        rest = rest.sub(&c.scale(l));
    }
    let mut coboundaries = Vec::new();
    for (i, c) in cobs.iter().enumerate() {
        let k = coef(i);
        if !k.is_zero() {
            rest = rest.sub(&c.scale(&k));
            coboundaries.push((cx.u2[i].quad, k));
        }
    }
    let quad_of: HashMap<UnitVector, [u32; 4]> =
        cx.u2.iter().map(|e| (e.unit.clone(), e.quad)).collect();
    let lifted = lift_to_subsets(&rest, &quad_of, &cx.subset_index)?;
    let mut relations = Vec::new();
    for (a, w) in lifted {
        let r = cx.r2().reduce(&w);
        if !r.is_member() {
            return Err(GoncharovError::CertificateReplay(format!(
                "component g{a} is not in R2 after lifting"
            )));
        }
        for (row, mu) in r.provenance {
            relations.push((a, cx.relations[row].tag.clone(), mu));
        }
    }
    let mut units: Vec<[u32; 4]> = Vec::new();
    for s in std::iter::once(target).chain(candidates) {
        for (u, _, _) in s.terms() {
            units.push(cx.u2[cx.index_of(u).ok_or(GoncharovError::NotInU2([0; 4]))?].quad);
        }
    }
    units.extend(coboundaries.iter().map(|(q, _)| *q));
    units.sort_unstable();
    units.dedup();
    let cert = Certificate {
        level: cx.level,
        lambda,
        units,
        coboundaries,
        relations,
    };
    cert.replay(target, candidates)?;
    Ok(Decomposition::InSpan(cert))
}

impl Certificate {
    /// Re-verifies the identity from the certificate data alone: relation
    /// rows are rebuilt from their tags and units from their parameters.
    pub fn replay(&self, target: &Symbol2, candidates: &[Symbol2]) -> Result<(), GoncharovError> {
        if candidates.len() != self.lambda.len() {
            return Err(GoncharovError::CertificateReplay(format!(
                "{} candidates but {} coefficients",
                candidates.len(),
                self.lambda.len()
            )));
        }
        let level = self.level;
        let m = level / 2;
        let mut subset_index = HashMap::new();
        let mut idx = 0;
        for a in 0..=m {
            for b in a + 1..=m {
                for c in b + 1..=m {
                    for d in c + 1..=m {
                        subset_index.insert([a, b, c, d], idx);
                        idx += 1;
                    }
                }
            }
        }
        let mut quad_of = HashMap::new();
        for q in &self.units {
            let u = u1_as_siegel(level, q.map(|x| x as i64))?;
            quad_of.insert(u, *q);
        }
        let mut total = target.clone();
        for (l, c) in self.lambda.iter().zip(candidates) {
            total = total.sub(&c.scale(l));
        }
        for (q, k) in &self.coboundaries {
            let u = u1_as_siegel(level, q.map(|x| x as i64))?;
            total = total.sub(&Symbol2::coboundary(&u).scale(k));
        }
        let mut lifted = lift_to_subsets(&total, &quad_of, &subset_index)?;
        for (a, tag, mu) in &self.relations {
            let row = relation_row(&subset_index, tag);
            axpy(lifted.entry(*a).or_default(), &-mu.clone(), &row);
        }
        match lifted.iter().find(|(_, v)| !v.is_empty()) {
            None => Ok(()),
            Some((a, v)) => Err(GoncharovError::CertificateReplay(format!(
                "nonzero remainder in component g{a} ({} entries)",
                v.len()
            ))),
        }
    }

    pub fn to_text(&self) -> String {
        let j = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        let mut s = String::new();
        let _ = writeln!(s, "certificate level {}", self.level);
        for (i, l) in self.lambda.iter().enumerate() {
            let _ = writeln!(s, "lambda {i} {l}");
        }
        for q in &self.units {
            let _ = writeln!(s, "unit {}", j(q));
        }
        for (q, k) in &self.coboundaries {
            let _ = writeln!(s, "cob {} {k}", j(q));
        }
        for (a, tag, mu) in &self.relations {
            let _ = writeln!(s, "rel {a} {tag} {mu}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, GoncharovError> {
        let bad = |l: &str| GoncharovError::CertificateReplay(format!("cannot parse `{l}`"));
        let quad = |t: &str| -> Option<Vec<u32>> {
            t.split(',')
                .map(|x| x.parse().ok())
                .collect::<Option<Vec<u32>>>()
        };
        let q4 = |t: &str| quad(t).and_then(|v| <[u32; 4]>::try_from(v).ok());
        let mut cert = Certificate {
            level: 0,
            lambda: Vec::new(),
            units: Vec::new(),
            coboundaries: Vec::new(),
            relations: Vec::new(),
        };
        for l in text.lines().filter(|l| !l.trim().is_empty()) {
            let t: Vec<&str> = l.split_whitespace().collect();
            match t.as_slice() {
                ["certificate", "level", n] => cert.level = n.parse().map_err(|_| bad(l))?,
                ["lambda", _, v] => cert.lambda.push(v.parse().map_err(|_| bad(l))?),
                ["unit", q] => cert.units.push(q4(q).ok_or_else(|| bad(l))?),
                ["cob", q, k] => cert
                    .coboundaries
                    .push((q4(q).ok_or_else(|| bad(l))?, k.parse().map_err(|_| bad(l))?)),
                ["rel", a, "antisym", f, to, mu] => cert.relations.push((
                    a.parse().map_err(|_| bad(l))?,
                    RelationTag::Antisym {
                        from: q4(f).ok_or_else(|| bad(l))?,
                        to: q4(to).ok_or_else(|| bad(l))?,
                    },
                    mu.parse().map_err(|_| bad(l))?,
                )),
                ["rel", a, "5-term", t5, mu] => cert.relations.push((
                    a.parse().map_err(|_| bad(l))?,
                    RelationTag::FiveTerm(
                        quad(t5)
                            .and_then(|v| <[u32; 5]>::try_from(v).ok())
                            .ok_or_else(|| bad(l))?,
                    ),
                    mu.parse().map_err(|_| bad(l))?,
                )),
                _ => return Err(bad(l)),
            }
        }
        Ok(cert)
    }
}

/// `λ` as a single rational when there is exactly one candidate.
pub fn single_lambda(d: &Decomposition) -> Option<BigRational> {
    match d {
        Decomposition::InSpan(c) if c.lambda.len() == 1 => Some(c.lambda[0].clone()),
        _ => None,
    }
}

pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::goncharov::CocycleTerm;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn sample_symbol(cx: &ModularComplex) -> Symbol2 {
        let g = UnitVector::from_ints(cx.level, [(1, 1), (3, -2)], 1).unwrap();
        cx.symbol_from_terms(&[CocycleTerm {
            coeff: r(1),
            quad: [1, 2, 3, 5],
            g,
        }])
        .unwrap()
    }

    #[test]
    fn candidate_against_itself() {
        let cx = ModularComplex::build(11, false).unwrap();
        let s = sample_symbol(&cx);
        let d = decompose(&cx, &s, std::slice::from_ref(&s), DEFAULT_CAP).unwrap();
        assert_eq!(single_lambda(&d), Some(r(1)));
    }

    #[test]
    fn relation_rows_are_in_span() {
        let cx = ModularComplex::build(11, false).unwrap();
        // A 5-term relation tensored with g_2, built in unit coordinates.
        let RelationTag::FiveTerm(t) = cx
            .relations
            .iter()
            .find(|r| matches!(r.tag, RelationTag::FiveTerm(_)))
            .unwrap()
            .tag
            .clone()
        else {
            unreachable!()
        };
        let g = UnitVector::basis(11, 2).unwrap();
        let terms: Vec<CocycleTerm> = (0..5)
            .map(|j| CocycleTerm {
                coeff: r(1),
                quad: [t[j], t[(j + 1) % 5], t[(j + 2) % 5], t[(j + 3) % 5]].map(|x| x as i64),
                g: g.clone(),
            })
            .collect();
        let s = cx.symbol_from_terms(&terms).unwrap();
        let d = decompose(&cx, &s, &[], DEFAULT_CAP).unwrap();
        let Decomposition::InSpan(c) = d else {
            panic!("not in span")
        };
        assert!(c.lambda.is_empty());
    }

    #[test]
    fn synthetic_multiple_plus_coboundaries() {
        let cx = ModularComplex::build(11, false).unwrap();
        let s = sample_symbol(&cx);
        let cob = Symbol2::coboundary(&cx.u2[5].unit).scale(&BigRational::new(7.into(), 3.into()));
        let target = s.scale(&r(3)).add(&cob);
        let d = decompose(&cx, &target, std::slice::from_ref(&s), DEFAULT_CAP).unwrap();
        assert_eq!(single_lambda(&d), Some(r(3)));
        let Decomposition::InSpan(c) = d else {
            unreachable!()
        };
        let text = c.to_text();
        let back = Certificate::parse(&text).unwrap();
        assert_eq!(back, c);
        back.replay(&target, std::slice::from_ref(&s)).unwrap();
        // Tampering with λ breaks the replay.
        let mut bad = back.clone();
        bad.lambda[0] = r(2);
        assert!(bad.replay(&target, std::slice::from_ref(&s)).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let cx = ModularComplex::build(11, false).unwrap();
        let s = sample_symbol(&cx);
        assert!(matches!(
            decompose(&cx, &s, &[], 10),
            Err(GoncharovError::DimensionOverflow { .. })
        ));
    }
}
