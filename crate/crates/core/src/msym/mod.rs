//! Manin symbols for Γ1(N): relative homology `H1(X1(N), cusps; Q)`, the
//! boundary map, complex conjugation, Hecke and diamond operators, and the
//! rational projection of `{0, ∞}` onto `H1(X1(N), Q)`.

mod heilbronn;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::MsymError;
use crate::linalg::{axpy, content_of, hermite_rows, Echelon, QMatrix, SparseRat};

pub use heilbronn::{heilbronn_cremona, is_prime};

/// Coset label of ±Γ1(N)\SL2(Z): the bottom row `(c, d)` mod N, mod ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ManinSymbol {
    pub c: u32,
    pub d: u32,
}

impl ManinSymbol {
    pub fn new(level: u32, c: i64, d: i64) -> Result<Self, MsymError> {
        let n = level as i64;
        let (c1, d1) = (c.rem_euclid(n), d.rem_euclid(n));
        if c1.gcd(&d1).gcd(&n) != 1 {
            return Err(MsymError::BadSymbol(c, d));
        }
        let (c2, d2) = ((-c1).rem_euclid(n), (-d1).rem_euclid(n));
        let (c, d) = (c1, d1).min((c2, d2));
        Ok(ManinSymbol {
            c: c as u32,
            d: d as u32,
        })
    }
}

impl fmt::Display for ManinSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.c, self.d)
    }
}

/// Exact coordinates in the quotient basis of a [`ManinSpace`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomologyVector {
    pub coords: Vec<BigRational>,
}

impl HomologyVector {
    pub fn zero(dim: usize) -> Self {
        HomologyVector {
            coords: vec![BigRational::zero(); dim],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        HomologyVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        HomologyVector {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-BigRational::one())
    }

    pub fn apply(&self, m: &QMatrix) -> Self {
        HomologyVector {
            coords: m.vec_mul(&self.coords),
        }
    }

    /// `self = k · other` for some rational `k`.
    pub fn ratio_to(&self, other: &Self) -> Option<BigRational> {
        let j = other.coords.iter().position(|x| !x.is_zero())?;
        let k = &self.coords[j] / &other.coords[j];
        (other.scale(&k) == *self).then_some(k)
    }
}

/// A Γ1(N)-cusp class, keyed by `(y mod N, x mod gcd(y, N))` mod ±1 for
/// the cusp `x/y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CuspKey(pub u32, pub u32);

impl fmt::Display for CuspKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.0, self.1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CuspDivisorClass {
    pub coeffs: BTreeMap<CuspKey, BigRational>,
}

impl CuspDivisorClass {
    pub fn degree(&self) -> BigRational {
        self.coeffs.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&mut self, k: CuspKey, c: &BigRational) {
        let e = self.coeffs.entry(k).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }
}

impl fmt::Display for CuspDivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|(k, c)| format!("{c}{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Presentation of relative homology by Manin symbols modulo the 2-term
/// and 3-term relations.
#[derive(Clone, Debug)]
pub struct ManinSpace {
    pub level: u32,
    pub symbols: Vec<ManinSymbol>,
    index: HashMap<ManinSymbol, usize>,
    /// Relation rows in symbol coordinates.
    pub relations: Vec<SparseRat>,
    /// Symbol index of each quotient basis vector.
    pub basis: Vec<usize>,
    images: Vec<Vec<BigRational>>,
    pub cusps: Vec<CuspKey>,
}

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl ManinSpace {
    pub fn new(level: u32) -> Self {
        let n = level as i64;
        let mut symbols: Vec<ManinSymbol> = (0..n)
            .flat_map(|c| (0..n).map(move |d| (c, d)))
            .filter_map(|(c, d)| ManinSymbol::new(level, c, d).ok())
            .collect();
        symbols.sort_unstable();
        symbols.dedup();
        let index: HashMap<ManinSymbol, usize> =
            symbols.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let sym = |c: i64, d: i64| index[&ManinSymbol::new(level, c, d).expect("unimodular")];
        let mut relations = Vec::new();
        for s in &symbols {
            let (c, d) = (s.c as i64, s.d as i64);
            for terms in [
                vec![(c, d), (d, -c)],
                vec![(c, d), (d, -c - d), (-c - d, c)],
            ] {
                let mut row = SparseRat::new();
                for (x, y) in terms {
                    let mut e = SparseRat::new();
                    e.insert(sym(x, y), BigRational::one());
                    axpy(&mut row, &BigRational::one(), &e);
                }
                if !row.is_empty() {
                    relations.push(row);
                }
            }
        }
        let mut ech = Echelon::new(symbols.len());
        for row in &relations {
            ech.insert(row);
        }
        let basis = ech.free_columns();
        let free_index: HashMap<usize, usize> =
            basis.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let images = (0..symbols.len())
            .map(|i| {
                let mut e = SparseRat::new();
                e.insert(i, BigRational::one());
                let q = ech.quotient_coords(&e, &free_index);
                let mut v = vec![BigRational::zero(); basis.len()];
                for (k, x) in q {
                    v[k] = x;
                }
                v
            })
            .collect();
        let mut space = ManinSpace {
            level,
            symbols,
            index,
            relations,
            basis,
            images,
            cusps: Vec::new(),
        };
        let mut cusps: Vec<CuspKey> = space
            .symbols
            .iter()
            .flat_map(|s| {
                let [a, b] = space.symbol_ends(*s);
                [a, b]
            })
            .collect();
        cusps.sort_unstable();
        cusps.dedup();
        space.cusps = cusps;
        space
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn cusp_key(&self, y: i64, z: i64) -> CuspKey {
        let n = self.level as i64;
        let g = y.rem_euclid(n).gcd(&n);
        let a = (y.rem_euclid(n), z.rem_euclid(g));
        let b = ((-y).rem_euclid(n), (-z).rem_euclid(g));
        let (y, z) = a.min(b);
        CuspKey(y as u32, z as u32)
    }

    /// Cusp classes of `g·∞` and `g·0` for a matrix with bottom row `(c, d)`.
    /// The cusp `x/y` is keyed through `x⁻¹ mod gcd(y, N)`, which is `d`
    /// for `g·∞ = a/c` and `-c` for `g·0 = b/d`.
    fn symbol_ends(&self, s: ManinSymbol) -> [CuspKey; 2] {
        let (c, d) = (s.c as i64, s.d as i64);
        [self.cusp_key(c, d), self.cusp_key(d, -c)]
    }

    pub fn symbol(&self, c: i64, d: i64) -> Result<HomologyVector, MsymError> {
        let s = ManinSymbol::new(self.level, c, d)?;
        Ok(HomologyVector {
            coords: self.images[self.index[&s]].clone(),
        })
    }

    /// `Σ coeff · [(a b; c d)]`.
    pub fn from_matrices(
        &self,
        terms: &[(BigRational, [i64; 4])],
    ) -> Result<HomologyVector, MsymError> {
        let mut v = HomologyVector::zero(self.dim());
        for (k, [a, b, c, d]) in terms {
            if a * d - b * c != 1 {
                return Err(MsymError::BadSymbol(*c, *d));
            }
            v = v.add(&self.symbol(*c, *d)?.scale(k));
        }
        Ok(v)
    }

    /// The path `{0, ∞}`, i.e. the symbol of the identity.
    pub fn zero_infinity(&self) -> HomologyVector {
        self.symbol(0, 1).expect("identity symbol")
    }

    /// Operator induced by a map on symbols, as a matrix acting on row vectors.
    pub fn operator<F>(&self, f: F) -> Result<QMatrix, MsymError>
    where
        F: Fn(i64, i64) -> Vec<(i64, i64)>,
    {
        let rows: Result<Vec<Vec<BigRational>>, MsymError> = self
            .basis
            .iter()
            .map(|&j| {
                let s = self.symbols[j];
                let mut acc = HomologyVector::zero(self.dim());
                for (c, d) in f(s.c as i64, s.d as i64) {
                    acc = acc.add(&self.symbol(c, d)?);
                }
                Ok(acc.coords)
            })
            .collect();
        Ok(QMatrix::from_rows(&rows?))
    }

    /// Complex conjugation `(c, d) ↦ (-c, d)`.
    pub fn star(&self) -> QMatrix {
        self.operator(|c, d| vec![(-c, d)])
            .expect("star preserves symbols")
    }

    pub fn hecke(&self, p: u64) -> Result<QMatrix, MsymError> {
        self.check_prime(p)?;
        let hs = heilbronn_cremona(p as i64);
        self.operator(|c, d| {
            hs.iter()
                .map(|[a, b, x, y]| (c * a + d * x, c * b + d * y))
                .collect()
        })
    }

    /// `T_p v` without forming the matrix.
    pub fn hecke_apply(&self, p: u64, v: &HomologyVector) -> Result<HomologyVector, MsymError> {
        self.check_prime(p)?;
        let hs = heilbronn_cremona(p as i64);
        let mut acc = vec![BigRational::zero(); self.dim()];
        for (k, &j) in v.coords.iter().zip(&self.basis) {
            if k.is_zero() {
                continue;
            }
            let s = self.symbols[j];
            let (c, d) = (s.c as i64, s.d as i64);
            let mut counts: HashMap<usize, i64> = HashMap::new();
            for [a, b, x, y] in &hs {
                let t = ManinSymbol::new(self.level, c * a + d * x, c * b + d * y)?;
                *counts.entry(self.index[&t]).or_default() += 1;
            }
            for (i, m) in counts {
                let f = k * r(m);
                for (o, x) in acc.iter_mut().zip(&self.images[i]) {
                    if !x.is_zero() {
                        *o += &f * x;
                    }
                }
            }
        }
        Ok(HomologyVector { coords: acc })
    }

    /// Diamond operator `⟨u⟩: (c, d) ↦ (uc, ud)`.
    pub fn diamond(&self, u: i64) -> Result<QMatrix, MsymError> {
        self.operator(|c, d| vec![(u * c, u * d)])
    }

    /// `(1/|G|) Σ_u ⟨u⟩` over `G = (Z/N)^× / ±1`: projection onto the
    /// trivial-character part.
    pub fn trivial_character_projector(&self) -> Result<QMatrix, MsymError> {
        let n = self.level as i64;
        let units: Vec<i64> = (1..=(n / 2).max(1)).filter(|u| u.gcd(&n) == 1).collect();
        let mut acc = QMatrix::zeros(self.dim(), self.dim());
        for u in &units {
            acc = acc.add(&self.diamond(*u)?);
        }
        Ok(acc.scale(&BigRational::new(1.into(), (units.len() as i64).into())))
    }

    fn check_prime(&self, p: u64) -> Result<(), MsymError> {
        if !is_prime(p) {
            return Err(MsymError::NotPrime(p));
        }
        if (self.level as u64).is_multiple_of(p) {
            return Err(MsymError::BadPrime { p, n: self.level });
        }
        Ok(())
    }

    pub fn boundary_of_symbol(&self, c: i64, d: i64) -> Result<CuspDivisorClass, MsymError> {
        let s = ManinSymbol::new(self.level, c, d)?;
        let [inf, zero] = self.symbol_ends(s);
        let mut out = CuspDivisorClass::default();
        out.add(inf, &BigRational::one());
        out.add(zero, &-BigRational::one());
        Ok(out)
    }

    /// `δ[g] = [g∞] - [g0]`.
    pub fn boundary(&self, v: &HomologyVector) -> CuspDivisorClass {
        let mut out = CuspDivisorClass::default();
        for (k, &j) in v.coords.iter().zip(&self.basis) {
            if k.is_zero() {
                continue;
            }
            let [inf, zero] = self.symbol_ends(self.symbols[j]);
            out.add(inf, k);
            out.add(zero, &-k.clone());
        }
        out
    }

    /// Boundary as a `dim × #cusps` matrix.
    pub fn boundary_matrix(&self) -> QMatrix {
        let rows: Vec<Vec<BigRational>> = (0..self.dim())
            .map(|i| {
                let mut e = HomologyVector::zero(self.dim());
                e.coords[i] = BigRational::one();
                let b = self.boundary(&e);
                self.cusps
                    .iter()
                    .map(|k| b.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero))
                    .collect()
            })
            .collect();
        QMatrix::from_rows(&rows)
    }

    /// Basis of `H1 = ker δ`.
    pub fn cuspidal_basis(&self) -> Vec<HomologyVector> {
        self.boundary_matrix()
            .left_kernel()
            .into_iter()
            .map(|coords| HomologyVector { coords })
            .collect()
    }

    /// Basis of the star-invariant part of `ker δ`.
    pub fn plus_basis(&self) -> Vec<HomologyVector> {
        let b = self.boundary_matrix();
        let s = self.star().add_scalar_identity(&-BigRational::one());
        let cols = b.cols + s.cols;
        let rows: Vec<Vec<BigRational>> = (0..self.dim())
            .map(|i| {
                let mut row = b.row(i);
                row.extend(s.row(i));
                debug_assert_eq!(row.len(), cols);
                row
            })
            .collect();
        QMatrix::from_rows(&rows)
            .left_kernel()
            .into_iter()
            .map(|coords| HomologyVector { coords })
            .collect()
    }

    /// Z-basis (Hermite form) of the lattice spanned by all symbols, as rows
    /// scaled by the returned common denominator.
    pub fn integral_basis(&self) -> (QMatrix, BigInt) {
        let den = self
            .images
            .iter()
            .flatten()
            .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
        let rows: Vec<Vec<BigInt>> = self
            .images
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
                    .collect()
            })
            .collect();
        let h = hermite_rows(rows);
        let q: Vec<Vec<BigRational>> = h
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|x| BigRational::new(x, den.clone()))
                    .collect()
            })
            .collect();
        (QMatrix::from_rows(&q), den)
    }

    /// Coordinates of `v` in the integral basis.
    pub fn lattice_coords(&self, v: &HomologyVector) -> Option<Vec<BigRational>> {
        self.integral_basis().0.solve_left(&v.coords)
    }

    /// Checks that `v` is a primitive vector of the symbol lattice.
    pub fn check_primitive(&self, v: &HomologyVector) -> Result<(), MsymError> {
        let x = self
            .lattice_coords(v)
            .ok_or_else(|| MsymError::NotPrimitive("outside the span".into()))?;
        let c = content_of(&x);
        if c.is_one() {
            Ok(())
        } else {
            Err(MsymError::NotPrimitive(c.to_string()))
        }
    }

    /// The primitive generator of the plus part of `H1`, with its first
    /// nonzero coordinate positive.
    pub fn plus_generator(&self) -> Result<HomologyVector, MsymError> {
        let plus = self.plus_basis();
        if plus.len() != 1 {
            return Err(MsymError::PlusRank(plus.len()));
        }
        let w = &plus[0];
        let x = self
            .lattice_coords(w)
            .ok_or_else(|| MsymError::NotPrimitive("outside the span".into()))?;
        let mut g = w.scale(&content_of(&x).recip());
        if g.coords
            .iter()
            .find(|x| !x.is_zero())
            .is_some_and(|x| x.is_negative())
        {
            g = g.neg();
        }
        self.check_primitive(&g)?;
        Ok(g)
    }

    /// The scalar by which `T_p` acts on `ker δ`.
    pub fn cuspidal_eigenvalue(&self, p: u64) -> Result<BigRational, MsymError> {
        let basis = self.cuspidal_basis();
        let mut ev: Option<BigRational> = None;
        for v in &basis {
            let k = self
                .hecke_apply(p, v)?
                .ratio_to(v)
                .ok_or(MsymError::NotEigen(p))?;
            match &ev {
                Some(e) if *e != k => return Err(MsymError::NotEigen(p)),
                _ => ev = Some(k),
            }
        }
        ev.ok_or(MsymError::NotEigen(p))
    }

    /// `π(v) = (T_p - p - 1) e(v) / (a_p - p - 1)`, where `e` is the
    /// trivial-character projector and `a_p` the eigenvalue on `ker δ`.
    pub fn manin_drinfeld_project(
        &self,
        v: &HomologyVector,
        p: u64,
    ) -> Result<HomologyVector, MsymError> {
        let ap = self.cuspidal_eigenvalue(p)?;
        let e = self.trivial_character_projector()?;
        for k in self.cuspidal_basis() {
            if k.apply(&e) != k {
                return Err(MsymError::NotEigen(p));
            }
        }
        let denom = &ap - r(p as i64 + 1);
        if denom.is_zero() {
            return Err(MsymError::NoSeparatingPrime { tried: vec![p] });
        }
        let ev = v.apply(&e);
        let tv = self.hecke_apply(p, &ev)?;
        let out = tv.add(&ev.scale(&-r(p as i64 + 1))).scale(&denom.recip());
        if !self.boundary(&out).is_zero() {
            return Err(MsymError::NoSeparatingPrime { tried: vec![p] });
        }
        Ok(out)
    }

    /// Tries the primes in order and returns the first projection.
    pub fn project_with_primes(
        &self,
        v: &HomologyVector,
        primes: &[u64],
    ) -> Result<(u64, HomologyVector), MsymError> {
        for &p in primes {
            match self.manin_drinfeld_project(v, p) {
                Ok(w) => return Ok((p, w)),
                Err(MsymError::NoSeparatingPrime { .. }) | Err(MsymError::BadPrime { .. }) => {
                    continue
                }
                Err(e) => return Err(e),
            }
        }
        Err(MsymError::NoSeparatingPrime {
            tried: primes.to_vec(),
        })
    }

    /// Serialises `v` as `(matrix, coefficient)` pairs over the basis symbols.
    pub fn to_matrix_terms(&self, v: &HomologyVector) -> Vec<([i64; 4], BigRational)> {
        v.coords
            .iter()
            .zip(&self.basis)
            .filter(|(k, _)| !k.is_zero())
            .map(|(k, &j)| (lift_to_sl2(self.level, self.symbols[j]), k.clone()))
            .collect()
    }
}

/// A matrix in SL2(Z) with bottom row congruent to the symbol.
pub fn lift_to_sl2(level: u32, s: ManinSymbol) -> [i64; 4] {
    let n = level as i64;
    let c = s.c as i64;
    let mut d = s.d as i64;
    let c = if c == 0 { n } else { c };
    while c.gcd(&d) != 1 {
        d += n;
    }
    let e = c.extended_gcd(&d);
    // e.x·c + e.y·d = 1, so (a b; c d) = (e.y, -e.x; c, d).
    [e.y, -e.x, c, d]
}

/// The integral generator of the plus part at level 15, as printed:
/// `2[(1 9; 2 19)] - [(0 -1; 1 11)] - [(0 -1; 1 4)] + 2[(0 -1; 1 2)]`.
pub fn gamma15_terms() -> Vec<(BigRational, [i64; 4])> {
    vec![
        (r(2), [1, 9, 2, 19]),
        (r(-1), [0, -1, 1, 11]),
        (r(-1), [0, -1, 1, 4]),
        (r(2), [0, -1, 1, 2]),
    ]
}
