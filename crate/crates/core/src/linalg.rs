//! Exact linear algebra over Q: an incremental sparse echelon form with
//! integer rows and provenance tracking, dense rational matrices, and
//! Hermite normal forms over Z.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type SparseInt = BTreeMap<usize, BigInt>;
pub type SparseRat = BTreeMap<usize, BigRational>;

/// Divides an integer vector by the gcd of its entries and makes the
/// first entry positive. Returns the factor divided out (with sign).
pub fn make_primitive(v: &mut SparseInt) -> BigInt {
    let mut g = BigInt::zero();
    for x in v.values() {
        g = g.gcd(x);
        if g.is_one() {
            break;
        }
    }
    if g.is_zero() {
        return BigInt::one();
    }
    if v.values().next().is_some_and(|x| x.is_negative()) {
        g = -g;
    }
    if !g.is_one() {
        for x in v.values_mut() {
            *x = &*x / &g;
        }
    }
    g
}

/// Clears denominators of a rational vector; returns `(integer vector, d)`
/// with `v = w / d`.
pub fn clear_denominators(v: &SparseRat) -> (SparseInt, BigInt) {
    let d = v.values().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let w = v
        .iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(k, x)| (*k, x.numer() * (&d / x.denom())))
        .collect();
    (w, d)
}

pub fn to_rational(v: &SparseInt) -> SparseRat {
    v.iter()
        .map(|(k, x)| (*k, BigRational::from_integer(x.clone())))
        .collect()
}

pub fn axpy(y: &mut SparseRat, a: &BigRational, x: &SparseRat) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let e = y.entry(*k).or_insert_with(BigRational::zero);
        *e += a * v;
        if e.is_zero() {
            y.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
struct EchRow {
    pivot: usize,
    entries: SparseInt,
    /// `entries = Σ prov[i] · (input row i)`.
    prov: SparseRat,
}

/// Result of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction {
    /// `x - Σ coeff_j · basis_j`, supported on non-pivot columns.
    pub residual: SparseRat,
    /// `x - residual` as a combination of the inserted input rows.
    pub provenance: SparseRat,
}

impl Reduction {
    pub fn is_member(&self) -> bool {
        self.residual.is_empty()
    }
}

/// Incremental row echelon form over Z, kept fully reduced: every pivot
/// column is nonzero in exactly one stored row.
///
/// Rows are integer vectors made primitive after every fraction-free
/// update. Pivots are chosen by a Markowitz-style rule (fewest
/// column occurrences times row fill, ties to the smallest column).
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<EchRow>,
    pivot_row: HashMap<usize, usize>,
    col_count: Vec<usize>,
    inserted: usize,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row: HashMap::new(),
            col_count: vec![0; ncols],
            inserted: 0,
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of rows offered to [`Echelon::insert`] so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Columns without a pivot, in increasing order: coordinates on the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|c| !self.is_pivot(*c)).collect()
    }

    pub fn reduce(&self, x: &SparseRat) -> Reduction {
        let mut residual = x.clone();
        let mut provenance = SparseRat::new();
        for (col, v) in x {
            if let Some(&r) = self.pivot_row.get(col) {
                let row = &self.rows[r];
                let c = v / BigRational::from_integer(row.entries[col].clone());
                axpy(&mut residual, &-c.clone(), &to_rational(&row.entries));
                axpy(&mut provenance, &c, &row.prov);
            }
        }
        Reduction {
            residual,
            provenance,
        }
    }

    /// Inserts input row number `self.inserted()`; returns whether it
    /// increased the rank.
    pub fn insert(&mut self, x: &SparseRat) -> bool {
        let id = self.inserted;
        self.inserted += 1;
        let red = self.reduce(x);
        if red.residual.is_empty() {
            return false;
        }
        let (mut entries, d) = clear_denominators(&red.residual);
        let g = make_primitive(&mut entries);
        // entries = (d/g)·(x - provenance)
        let scale = BigRational::new(d, g);
        let mut prov = SparseRat::new();
        prov.insert(id, BigRational::one());
        axpy(&mut prov, &-BigRational::one(), &red.provenance);
        for v in prov.values_mut() {
            *v = &*v * &scale;
        }
        let fill = entries.len();
        let pivot = *entries
            .keys()
            .min_by_key(|c| (self.col_count[**c] * (fill - 1), **c))
            .expect("nonzero row");
        let pv = entries[&pivot].clone();
        for r in 0..self.rows.len() {
            let Some(bv) = self.rows[r].entries.get(&pivot).cloned() else {
                continue;
            };
            let row = &mut self.rows[r];
            // row ← pv·row − bv·new
            for v in row.entries.values_mut() {
                *v = &*v * &pv;
            }
            for (c, v) in &entries {
                let e = row.entries.entry(*c).or_insert_with(BigInt::zero);
                *e -= &bv * v;
            }
            row.entries.retain(|_, v| !v.is_zero());
            let pvr = BigRational::from_integer(pv.clone());
            for v in row.prov.values_mut() {
                *v = &*v * &pvr;
            }
            axpy(&mut row.prov, &-BigRational::from_integer(bv), &prov);
            let g = make_primitive_keep_sign(&mut row.entries);
            if !g.is_one() {
                let gr = BigRational::from_integer(g);
                for v in row.prov.values_mut() {
                    *v = &*v / &gr;
                }
            }
        }
        self.pivot_row.insert(pivot, self.rows.len());
        self.rows.push(EchRow {
            pivot,
            entries,
            prov,
        });
        self.recount();
        true
    }

    fn recount(&mut self) {
        self.col_count.iter_mut().for_each(|c| *c = 0);
        for r in &self.rows {
            for c in r.entries.keys() {
                self.col_count[*c] += 1;
            }
        }
    }

    /// Coordinates of `x` in the quotient by the row space, indexed by
    /// [`Echelon::free_columns`].
    pub fn quotient_coords(&self, x: &SparseRat, free_index: &HashMap<usize, usize>) -> SparseRat {
        self.reduce(x)
            .residual
            .into_iter()
            .map(|(c, v)| (free_index[&c], v))
            .collect()
    }

    /// Basis rows with their pivot columns.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseInt)> {
        self.rows.iter().map(|r| (r.pivot, &r.entries))
    }
}

/// Divides by the positive gcd of the entries; returns the gcd.
fn make_primitive_keep_sign(v: &mut SparseInt) -> BigInt {
    let mut g = BigInt::zero();
    for x in v.values() {
        g = g.gcd(x);
        if g.is_one() {
            return g;
        }
    }
    if g.is_zero() || g.is_one() {
        return BigInt::one();
    }
    for x in v.values_mut() {
        *x = &*x / &g;
    }
    g
}

/// Dense matrix over Q, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = BigRational;
    fn index(&self, (r, c): (usize, usize)) -> &BigRational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigRational {
        &mut self.data[r * self.cols + c]
    }
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigRational>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, v) in r.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn row(&self, r: usize) -> Vec<BigRational> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigRational::zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = &self[(i, j)];
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn add_scalar_identity(&self, c: &BigRational) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += c;
        }
        out
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|i| !m[(*i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m[(r, c)].recip();
            for j in 0..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    if m[(r, j)].is_zero() {
                        continue;
                    }
                    let v = &f * &m[(r, j)];
                    m[(i, j)] -= v;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the left kernel `{v : v·M = 0}`, as rows.
    pub fn left_kernel(&self) -> Vec<Vec<BigRational>> {
        self.transpose().right_kernel()
    }

    /// Basis of `{v : M·v = 0}`.
    pub fn right_kernel(&self) -> Vec<Vec<BigRational>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); self.cols];
                v[f] = BigRational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -m[(r, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `x·M = b` for a row vector `x`, if solvable.
    pub fn solve_left(&self, b: &[BigRational]) -> Option<Vec<BigRational>> {
        let mut aug = Self::zeros(self.cols, self.rows + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(j, i)] = self[(i, j)].clone();
            }
        }
        for (j, v) in b.iter().enumerate() {
            aug[(j, self.rows)] = v.clone();
        }
        let (m, pivots) = aug.rref();
        if pivots.contains(&self.rows) {
            return None;
        }
        let mut x = vec![BigRational::zero(); self.rows];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = m[(r, self.rows)].clone();
        }
        Some(x)
    }
}

/// Row-style Hermite normal form of an integer matrix: the nonzero rows
/// of the result form a Z-basis of the row lattice.
pub fn hermite_rows(mut m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        loop {
            // Row with the smallest nonzero |entry| in column c.
            let Some(p) = (r..m.len())
                .filter(|i| !m[*i][c].is_zero())
                .min_by(|a, b| m[*a][c].abs().cmp(&m[*b][c].abs()))
            else {
                break;
            };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][c].is_zero() {
                    continue;
                }
                let q = m[i][c].div_floor(&m[r][c]);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !m[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][c].is_zero() {
            if m[r][c].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..r {
                let q = m[i][c].div_floor(&m[r][c]);
                if q.is_zero() {
                    continue;
                }
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

pub fn content_of(v: &[BigRational]) -> BigRational {
    let num = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x.numer()));
    let den = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    BigRational::new(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn sv(v: &[i64]) -> SparseRat {
        v.iter()
            .enumerate()
            .filter(|(_, x)| **x != 0)
            .map(|(i, x)| (i, q(*x)))
            .collect()
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new(4);
        assert!(e.insert(&sv(&[1, 2, 0, 0])));
        assert!(e.insert(&sv(&[0, 1, 1, 0])));
        assert!(!e.insert(&sv(&[1, 3, 1, 0])));
        assert_eq!(e.rank(), 2);
        let r = e.reduce(&sv(&[2, 5, 1, 0]));
        assert!(r.is_member());
        // 2·row0 + 1·row1
        assert_eq!(r.provenance, sv(&[2, 1]));
        assert!(!e.reduce(&sv(&[0, 0, 0, 1])).is_member());
    }

    #[test]
    fn kernel_and_solve() {
        let m = QMatrix::from_rows(&[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        assert_eq!(m.rank(), 1);
        assert_eq!(m.right_kernel().len(), 2);
        let x = m.solve_left(&[q(3), q(6), q(9)]).unwrap();
        assert_eq!(m.vec_mul(&x), vec![q(3), q(6), q(9)]);
        assert!(m.solve_left(&[q(1), q(0), q(0)]).is_none());
    }

    #[test]
    fn hermite_basis() {
        let b = |v: &[i64]| v.iter().map(|x| BigInt::from(*x)).collect::<Vec<_>>();
        let h = hermite_rows(vec![b(&[2, 0]), b(&[0, 2]), b(&[1, 1])]);
        assert_eq!(h, vec![b(&[1, 1]), b(&[0, 2])]);
    }

    proptest! {
        #[test]
        fn provenance_replays(rows in proptest::collection::vec(
            proptest::collection::vec(-3i64..4, 6), 1..8),
            target_coeffs in proptest::collection::vec(-3i64..4, 8))
        {
            let mut e = Echelon::new(6);
            for r in &rows {
                e.insert(&sv(r));
            }
            // A random combination of the inputs is always a member and
            // its provenance reproduces it.
            let mut t = SparseRat::new();
            for (r, c) in rows.iter().zip(&target_coeffs) {
                axpy(&mut t, &q(*c), &sv(r));
            }
            let red = e.reduce(&t);
            prop_assert!(red.is_member());
            let mut back = SparseRat::new();
            for (i, c) in &red.provenance {
                axpy(&mut back, c, &sv(&rows[*i]));
            }
            prop_assert_eq!(back, t);
        }

        #[test]
        fn rank_matches_dense(rows in proptest::collection::vec(
            proptest::collection::vec(-2i64..3, 5), 1..7))
        {
            let mut e = Echelon::new(5);
            for r in &rows {
                e.insert(&sv(r));
            }
            let dense = QMatrix::from_rows(
                &rows.iter().map(|r| r.iter().map(|x| q(*x)).collect()).collect::<Vec<_>>());
            prop_assert_eq!(e.rank(), dense.rank());
        }
    }
}
