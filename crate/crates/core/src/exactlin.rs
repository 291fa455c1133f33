//! Dense linear algebra over a prime field `F_p`.
//!
//! Every Hom, homotopy and center computation in the crate bottoms out in
//! [`Mat::rref`]. Matrices here are small (a few hundred columns at most), so
//! the representation is a plain row-major `Vec<u32>`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default characteristic. Large enough that no small-characteristic accident
/// (such as `2 = 0`) can hide a sign error.
pub const DEFAULT_PRIME: u32 = 32003;

/// A residue `0 <= value < p`.
pub type FieldElem = u32;

/// The prime field `F_p`; carries `p` and does the modular arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Field {
    p: u32,
}

impl TryFrom<u32> for Field {
    type Error = Error;

    fn try_from(p: u32) -> Result<Self> {
        Field::new(p)
    }
}

impl From<Field> for u32 {
    fn from(f: Field) -> u32 {
        f.p
    }
}

impl Default for Field {
    fn default() -> Self {
        Field { p: DEFAULT_PRIME }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        // p < 2^31 keeps every sum of two residues inside u32.
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidPrime(p));
        }
        Ok(Field { p })
    }

    #[inline]
    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn elem(&self, v: i64) -> FieldElem {
        v.rem_euclid(self.p as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(&self, mut a: FieldElem, mut e: u64) -> FieldElem {
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// Signed representative in `(-p/2, p/2]`, for display.
    pub fn signed(&self, a: FieldElem) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// Row-major dense matrix over a [`Field`].
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over F_{}", self.rows, self.cols, self.field.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Particular solution plus kernel basis of a consistent linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<FieldElem>,
    pub kernel: Vec<Vec<FieldElem>>,
}

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Mat {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from signed integer rows, reducing mod `p`.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Mat::zeros(field, rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, field.elem(v));
            }
        }
        m
    }

    /// Builds a matrix whose rows are the given residue vectors.
    pub fn from_vectors(field: Field, cols: usize, rows: &[Vec<FieldElem>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged rows");
            data.extend_from_slice(row);
        }
        Mat {
            field,
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn add_at(&mut self, r: usize, c: usize, v: FieldElem) {
        let i = r * self.cols + c;
        self.data[i] = self.field.add(self.data[i], v);
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let f = self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b != 0 {
                        out.add_at(i, j, f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `self * v`.
    pub fn apply(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matrix-vector product",
                expected: self.cols,
                found: v.len(),
            });
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    /// Reduced row echelon form and the (strictly increasing) pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..cols {
            if prow == rows {
                break;
            }
            let Some(sel) = (prow..rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if sel != prow {
                for j in 0..cols {
                    self.data.swap(sel * cols + j, prow * cols + j);
                }
            }
            let inv = f.inv(self.get(prow, c)).expect("nonzero pivot");
            for j in c..cols {
                let v = self.get(prow, j);
                self.set(prow, j, f.mul(v, inv));
            }
            for r in 0..rows {
                if r == prow {
                    continue;
                }
                let factor = self.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in c..cols {
                    let pv = self.get(prow, j);
                    if pv != 0 {
                        let v = self.get(r, j);
                        self.set(r, j, f.sub(v, f.mul(factor, pv)));
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self * v = 0}`, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<FieldElem>> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Solves `self * x = b`; `None` when inconsistent.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Option<Solution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "right-hand side",
                expected: self.rows,
                found: b.len(),
            });
        }
        let f = self.field;
        let mut aug = Mat::zeros(f, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut particular = vec![0; self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            particular[pc] = aug.get(row, self.cols);
        }
        let mut coeffs = Mat::zeros(f, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                coeffs.set(r, c, aug.get(r, c));
            }
        }
        Ok(Some(Solution {
            particular,
            kernel: kernel_from_rref(&coeffs, &pivots),
        }))
    }
}

fn kernel_from_rref(r: &Mat, pivots: &[usize]) -> Vec<Vec<FieldElem>> {
    let f = r.field;
    let mut is_pivot = vec![false; r.cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..r.cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0; r.cols];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = f.neg(r.get(row, free));
        }
        basis.push(v);
    }
    basis
}

/// An echelonized subspace of `F_p^n`, kept in reduced row echelon form.
///
/// Used for spans that grow incrementally (spanning closure, quotient bases).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    dim_ambient: usize,
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(field: Field, dim_ambient: usize) -> Self {
        Subspace {
            field,
            dim_ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn spanned_by(field: Field, dim_ambient: usize, vectors: &[Vec<FieldElem>]) -> Self {
        let mut s = Subspace::new(field, dim_ambient);
        if vectors.is_empty() {
            return s;
        }
        let (m, pivots) = Mat::from_vectors(field, dim_ambient, vectors).rref();
        s.rows = (0..pivots.len()).map(|r| m.row(r).to_vec()).collect();
        s.pivots = pivots;
        s
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim_ambient
    }

    pub fn basis(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Subtracts the span from `v` so that `v` vanishes on every pivot column.
    pub fn reduce(&self, v: &mut [FieldElem]) {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &[FieldElem]) -> bool {
        let f = self.field;
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[pc]).expect("nonzero");
        for x in w.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&w) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
        }
        let at = self.pivots.partition_point(|&p| p < pc);
        self.rows.insert(at, w);
        self.pivots.insert(at, pc);
        true
    }
}

/// Linear combination `sum coeffs[i] * vectors[i]`.
pub fn combine(field: Field, len: usize, coeffs: &[FieldElem], vectors: &[Vec<FieldElem>]) -> Vec<FieldElem> {
    let mut out = vec![0; len];
    for (&c, v) in coeffs.iter().zip(vectors) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v) {
            if x != 0 {
                *o = field.add(*o, field.mul(c, x));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u32) -> Field {
        Field::new(p).unwrap()
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::new(32004).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(7).is_ok());
    }

    #[test]
    fn rref_identity_and_zero() {
        let fp = Field::default();
        let (r, piv) = Mat::identity(fp, 2).rref();
        assert_eq!(r, Mat::identity(fp, 2));
        assert_eq!(piv, vec![0, 1]);
        let z = Mat::zeros(fp, 3, 3);
        let (r, piv) = z.rref();
        assert!(r.is_zero());
        assert!(piv.is_empty());
    }

    #[test]
    fn rref_small_example_mod_5() {
        let fp = f(5);
        let (r, piv) = Mat::from_rows(fp, &[vec![2, 4], vec![1, 2]]).rref();
        assert_eq!(r, Mat::from_rows(fp, &[vec![1, 2], vec![0, 0]]));
        assert_eq!(piv, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        let fp = Field::default();
        assert!(Mat::identity(fp, 4).kernel().is_empty());
        let k = Mat::zeros(fp, 3, 3).kernel();
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let k = Mat::from_rows(f(7), &[vec![1, 1]]).kernel();
        assert_eq!(k, vec![vec![6, 1]]);
        // (1,6) up to scalar: 6 * (6,1) = (36,6) = (1,6) mod 7
        let scaled: Vec<u32> = k[0].iter().map(|&x| f(7).mul(6, x)).collect();
        assert_eq!(scaled, vec![1, 6]);
    }

    #[test]
    fn solve_examples() {
        let fp = Field::default();
        let b = vec![3, 5, 7];
        let s = Mat::identity(fp, 3).solve(&b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert!(s.kernel.is_empty());
        assert!(Mat::zeros(fp, 2, 2).solve(&[0, 1]).unwrap().is_none());
        assert!(Mat::zeros(fp, 2, 2).solve(&[1]).is_err());
    }

    #[test]
    fn solve_matches_enumeration_over_f5() {
        let fp = f(5);
        let m = Mat::from_rows(fp, &[vec![1, 1]]);
        let s = m.solve(&[3]).unwrap().unwrap();
        assert_eq!(s.particular, vec![3, 0]);
        assert_eq!(s.kernel.len(), 1);
        // every (x, y) in F_5^2 with x + y = 3 is particular + t * kernel
        let mut brute = Vec::new();
        for x in 0..5u32 {
            for y in 0..5u32 {
                if (x + y) % 5 == 3 {
                    brute.push(vec![x, y]);
                }
            }
        }
        let mut param: Vec<Vec<u32>> = (0..5)
            .map(|t| {
                s.particular
                    .iter()
                    .zip(&s.kernel[0])
                    .map(|(&a, &k)| fp.add(a, fp.mul(t, k)))
                    .collect()
            })
            .collect();
        param.sort();
        assert_eq!(param, brute);
    }

    #[test]
    fn subspace_insert_and_reduce() {
        let fp = f(7);
        let mut s = Subspace::new(fp, 3);
        assert!(s.insert(&[0, 2, 4]));
        assert!(!s.insert(&[0, 1, 2]));
        assert!(s.insert(&[1, 0, 0]));
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&[3, 3, 6]));
        assert!(!s.contains(&[0, 0, 1]));
        assert_eq!(s.pivots(), &[0, 1]);
    }

    fn small_matrix() -> impl Strategy<Value = (Vec<Vec<i64>>, usize)> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            (proptest::collection::vec(proptest::collection::vec(-20i64..20, c), r), Just(c))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity((rows, cols) in small_matrix()) {
            let fp = f(7);
            let m = Mat::from_rows(fp, &rows);
            let (r, piv) = m.rref();
            prop_assert!(piv.windows(2).all(|w| w[0] < w[1]));
            prop_assert_eq!(r.rank(), piv.len());
            let k = m.kernel();
            prop_assert_eq!(piv.len() + k.len(), cols);
            for v in &k {
                prop_assert!(m.apply(v).unwrap().iter().all(|&x| x == 0));
            }
            // row space preserved: rref rows lie in the row space and have the same rank
            let mut both: Vec<Vec<u32>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
            both.extend((0..r.rows()).map(|i| r.row(i).to_vec()));
            prop_assert_eq!(Mat::from_vectors(fp, cols, &both).rank(), piv.len());
        }

        #[test]
        fn solve_is_exact((rows, cols) in small_matrix(), x in proptest::collection::vec(0u32..7, 6)) {
            let fp = f(7);
            let m = Mat::from_rows(fp, &rows);
            let x = &x[..cols];
            let b = m.apply(x).unwrap();
            let s = m.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(m.apply(&s.particular).unwrap(), b.clone());
            prop_assert_eq!(s.kernel.len(), cols - m.rank());
        }
    }
}
