//! Morphisms in the homotopy category: chain maps modulo null-homotopic maps.
//!
//! A graded map of degree `k` from `X` to `Y` is written in coordinates: one
//! coordinate per triple (summand of `X^n`, summand of `Y^{n+k}`, basis path).
//! Chain maps are the kernel of `D0(f) = f . d_X - d_Y . f` and null-homotopic
//! maps are the image of `D-1(s) = d_Y . s + s . d_X`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{cone, ChainMap, ProjComplex};
use crate::error::{Error, Result};
use crate::exactlin::{combine, Field, FieldElem, Mat, Subspace};
use crate::pathalg::{AlgElem, Algebra, PathId};

#[derive(Clone, Debug)]
struct Slot {
    n: i64,
    s: usize,
    t: usize,
    offset: usize,
    paths: Vec<PathId>,
}

/// Coordinates of degree-`k` graded maps `X -> Y`.
#[derive(Clone, Debug)]
pub struct Layout {
    k: i64,
    slots: Vec<Slot>,
    index: HashMap<(i64, usize, usize), usize>,
    dim: usize,
}

impl Layout {
    pub fn new(alg: &Algebra, x: &ProjComplex, y: &ProjComplex, k: i64) -> Self {
        let mut slots = Vec::new();
        let mut index = HashMap::new();
        let mut offset = 0;
        if let Some((lo, hi)) = x.support() {
            for n in lo..=hi {
                for (s, &u) in x.term(n).iter().enumerate() {
                    for (t, &v) in y.term(n + k).iter().enumerate() {
                        let paths = alg.pres.paths_between(v, u).to_vec();
                        if paths.is_empty() {
                            continue;
                        }
                        index.insert((n, s, t), slots.len());
                        let len = paths.len();
                        slots.push(Slot {
                            n,
                            s,
                            t,
                            offset,
                            paths,
                        });
                        offset += len;
                    }
                }
            }
        }
        Layout {
            k,
            slots,
            index,
            dim: offset,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> i64 {
        self.k
    }

    /// Coordinates belonging to components in degree `n` (contiguous).
    pub fn degree_range(&self, n: i64) -> std::ops::Range<usize> {
        let mut it = self.slots.iter().filter(|s| s.n == n);
        match it.next() {
            None => 0..0,
            Some(first) => {
                let last = it.next_back().unwrap_or(first);
                first.offset..last.offset + last.paths.len()
            }
        }
    }

    #[inline]
    fn coord(&self, n: i64, s: usize, t: usize, p: PathId) -> Option<usize> {
        let slot = &self.slots[*self.index.get(&(n, s, t))?];
        slot.paths.binary_search(&p).ok().map(|i| slot.offset + i)
    }

    /// Coordinates of a degree-zero map. Errors if a component uses a path
    /// outside the layout (which cannot happen for well-formed maps).
    pub fn encode(&self, f: &ChainMap) -> Result<Vec<FieldElem>> {
        let mut v = vec![0; self.dim];
        for (&n, block) in f.components() {
            for (s, row) in block.iter().enumerate() {
                for (t, x) in row.iter().enumerate() {
                    for &(p, c) in &x.terms {
                        let i = self.coord(n, s, t, p).ok_or_else(|| {
                            Error::Malformed(format!("path {p} outside Hom layout"))
                        })?;
                        v[i] = c;
                    }
                }
            }
        }
        Ok(v)
    }

    /// The degree-zero map with the given coordinates.
    pub fn decode(&self, dom: &Arc<ProjComplex>, cod: &Arc<ProjComplex>, v: &[FieldElem]) -> ChainMap {
        debug_assert_eq!(self.k, 0);
        ChainMap::from_fn(dom, cod, |n, s, t, u, w| match self.index.get(&(n, s, t)) {
            Some(&i) => {
                let slot = &self.slots[i];
                let terms = slot
                    .paths
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| v[slot.offset + j] != 0)
                    .map(|(j, &p)| (p, v[slot.offset + j]))
                    .collect();
                AlgElem { dom: u, cod: w, terms }
            }
            None => AlgElem::zero(u, w),
        })
    }
}

/// Matrix of `D0` (columns: degree-0 coordinates; rows: degree-1 coordinates).
fn d0_matrix(alg: &Algebra, x: &ProjComplex, y: &ProjComplex, l0: &Layout, l1: &Layout) -> Mat {
    let f = alg.field;
    let pres = &alg.pres;
    let mut m = Mat::zeros(f, l1.dim(), l0.dim());
    for slot in &l0.slots {
        let (n, s, t) = (slot.n, slot.s, slot.t);
        for (j, &p) in slot.paths.iter().enumerate() {
            let col = slot.offset + j;
            // f . d_X: X^{n-1} -> X^n -> Y^n
            if let Some(d) = x.diff(n - 1) {
                for (s2, row) in d.iter().enumerate() {
                    for &(q, c) in &row[s].terms {
                        if let Some(qp) = pres.mul_paths(q, p) {
                            let r = l1.coord(n - 1, s2, t, qp).expect("layout covers product");
                            m.add_at(r, col, c);
                        }
                    }
                }
            }
            // - d_Y . f: X^n -> Y^n -> Y^{n+1}
            if let Some(d) = y.diff(n) {
                for (u, e) in d[t].iter().enumerate() {
                    for &(q, c) in &e.terms {
                        if let Some(pq) = pres.mul_paths(p, q) {
                            let r = l1.coord(n, s, u, pq).expect("layout covers product");
                            m.add_at(r, col, f.neg(c));
                        }
                    }
                }
            }
        }
    }
    m
}

/// Images of the unit degree-(-1) maps under `D-1`, as degree-0 coordinate vectors.
fn homotopy_images(alg: &Algebra, x: &ProjComplex, y: &ProjComplex, lm: &Layout, l0: &Layout) -> Vec<Vec<FieldElem>> {
    let f = alg.field;
    let pres = &alg.pres;
    let mut out = Vec::with_capacity(lm.dim());
    for slot in &lm.slots {
        let (n, s, t) = (slot.n, slot.s, slot.t);
        for &p in &slot.paths {
            let mut v = vec![0; l0.dim()];
            // d_Y . s: X^n -> Y^{n-1} -> Y^n
            if let Some(d) = y.diff(n - 1) {
                for (u, e) in d[t].iter().enumerate() {
                    for &(q, c) in &e.terms {
                        if let Some(pq) = pres.mul_paths(p, q) {
                            let i = l0.coord(n, s, u, pq).expect("layout covers product");
                            v[i] = f.add(v[i], c);
                        }
                    }
                }
            }
            // s . d_X: X^{n-1} -> X^n -> Y^{n-1}
            if let Some(d) = x.diff(n - 1) {
                for (s2, row) in d.iter().enumerate() {
                    for &(q, c) in &row[s].terms {
                        if let Some(qp) = pres.mul_paths(q, p) {
                            let i = l0.coord(n - 1, s2, t, qp).expect("layout covers product");
                            v[i] = f.add(v[i], c);
                        }
                    }
                }
            }
            out.push(v);
        }
    }
    out
}

/// Basis of all chain maps `X -> Y`, as degree-0 coordinate vectors.
pub fn chain_map_vectors(alg: &Algebra, x: &ProjComplex, y: &ProjComplex) -> (Layout, Vec<Vec<FieldElem>>) {
    let l0 = Layout::new(alg, x, y, 0);
    let l1 = Layout::new(alg, x, y, 1);
    let z = if l0.dim() == 0 {
        Vec::new()
    } else if l1.dim() == 0 {
        Mat::identity(alg.field, l0.dim()).kernel_of_zero()
    } else {
        d0_matrix(alg, x, y, &l0, &l1).kernel()
    };
    (l0, z)
}

/// Basis of all chain maps `X -> Y`.
pub fn chain_maps(alg: &Algebra, x: &Arc<ProjComplex>, y: &Arc<ProjComplex>) -> Vec<ChainMap> {
    let (l0, z) = chain_map_vectors(alg, x, y);
    z.iter().map(|v| l0.decode(x, y, v)).collect()
}

/// The null-homotopic maps `X -> Y`, echelonized in degree-0 coordinates.
pub fn null_homotopic_space(alg: &Algebra, x: &ProjComplex, y: &ProjComplex, l0: &Layout) -> Subspace {
    let lm = Layout::new(alg, x, y, -1);
    Subspace::spanned_by(alg.field, l0.dim(), &homotopy_images(alg, x, y, &lm, l0))
}

/// A basis of the null-homotopic maps `X -> Y`.
pub fn null_homotopics(alg: &Algebra, x: &Arc<ProjComplex>, y: &Arc<ProjComplex>) -> Vec<ChainMap> {
    let l0 = Layout::new(alg, x, y, 0);
    null_homotopic_space(alg, x, y, &l0)
        .basis()
        .iter()
        .map(|v| l0.decode(x, y, v))
        .collect()
}

/// Whether a chain map is null-homotopic.
pub fn is_null_homotopic(alg: &Algebra, f: &ChainMap) -> Result<bool> {
    let l0 = Layout::new(alg, &f.dom, &f.cod, 0);
    let v = l0.encode(f)?;
    if v.iter().all(|&c| c == 0) {
        return Ok(true);
    }
    Ok(null_homotopic_space(alg, &f.dom, &f.cod, &l0).contains(&v))
}

/// `Hom(X, Y)` in the homotopy category.
///
/// Basis representatives are deterministic: chain maps are reduced modulo
/// the echelonized null-homotopic space and the results put in reduced row
/// echelon form.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub dom: Arc<ProjComplex>,
    pub cod: Arc<ProjComplex>,
    layout: Arc<Layout>,
    null: Subspace,
    quotient: Subspace,
    chain_dim: usize,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }

    pub fn field(&self) -> Field {
        self.null.field()
    }

    pub fn homotopy_dim(&self) -> usize {
        self.null.dim()
    }

    pub fn chain_dim(&self) -> usize {
        self.chain_dim
    }

    /// Echelon basis of the null-homotopic maps, in degree-0 coordinates.
    pub fn null_basis(&self) -> &[Vec<FieldElem>] {
        self.null.basis()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Basis representatives in degree-0 coordinates.
    pub fn basis_vectors(&self) -> &[Vec<FieldElem>] {
        self.quotient.basis()
    }

    pub fn basis_map(&self, i: usize) -> ChainMap {
        self.layout.decode(&self.dom, &self.cod, &self.quotient.basis()[i])
    }

    pub fn basis(&self) -> Vec<ChainMap> {
        (0..self.dim()).map(|i| self.basis_map(i)).collect()
    }

    /// `sum coeffs[i] * basis[i]`.
    pub fn combine(&self, coeffs: &[FieldElem]) -> ChainMap {
        let v = combine(self.null.field(), self.layout.dim(), coeffs, self.quotient.basis());
        self.layout.decode(&self.dom, &self.cod, &v)
    }

    /// Coordinates of a chain-map coordinate vector in the quotient basis.
    pub fn reduce_vector(&self, v: &[FieldElem]) -> Vec<FieldElem> {
        let mut w = v.to_vec();
        self.null.reduce(&mut w);
        self.quotient.pivots().iter().map(|&p| w[p]).collect()
    }

    /// Coordinates of the homotopy class of `f` in the basis. `f` must be a
    /// chain map between this space's complexes.
    pub fn reduce(&self, f: &ChainMap) -> Result<Vec<FieldElem>> {
        if *f.dom != *self.dom || *f.cod != *self.cod {
            return Err(Error::NotComposable("map does not lie in this Hom space".into()));
        }
        Ok(self.reduce_vector(&self.layout.encode(f)?))
    }

    pub fn is_null(&self, f: &ChainMap) -> Result<bool> {
        Ok(self.reduce(f)?.iter().all(|&c| c == 0))
    }
}

trait KernelOfZero {
    fn kernel_of_zero(&self) -> Vec<Vec<FieldElem>>;
}

impl KernelOfZero for Mat {
    /// Standard basis of the domain: the kernel of a map to the zero space.
    fn kernel_of_zero(&self) -> Vec<Vec<FieldElem>> {
        let n = self.cols();
        (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect()
    }
}

pub fn hom_kb(alg: &Algebra, x: &Arc<ProjComplex>, y: &Arc<ProjComplex>) -> HomSpace {
    let (l0, z) = chain_map_vectors(alg, x, y);
    let null = if z.is_empty() {
        Subspace::new(alg.field, l0.dim())
    } else {
        null_homotopic_space(alg, x, y, &l0)
    };
    let mut quotient = Subspace::new(alg.field, l0.dim());
    for v in &z {
        let mut w = v.clone();
        null.reduce(&mut w);
        quotient.insert(&w);
    }
    HomSpace {
        dom: x.clone(),
        cod: y.clone(),
        layout: Arc::new(l0),
        null,
        quotient,
        chain_dim: z.len(),
    }
}

/// `g . f`.
pub fn compose(alg: &Algebra, f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    f.then(alg, g)
}

/// Whether `f` is invertible in the homotopy category: the identity of its
/// cone is null-homotopic.
pub fn is_homotopy_equivalence(alg: &Algebra, f: &ChainMap) -> Result<bool> {
    let c = cone(alg, f)?;
    is_null_homotopic(alg, &ChainMap::identity(&c.cone, alg))
}

/// `End(X)` with its multiplication and the trace functional used by the
/// locality test.
#[derive(Clone, Debug)]
pub struct EndRing {
    pub hom: HomSpace,
    /// `mult[i][j]` = coordinates of `b_i . b_j` (apply `b_j` first).
    pub mult: Vec<Vec<Vec<FieldElem>>>,
    /// `rho(e) = tr(x |-> e . x) / dim`; on a local ring this is the residue map.
    pub rho: Vec<FieldElem>,
    pub local: bool,
}

impl EndRing {
    pub fn new(alg: &Algebra, x: &Arc<ProjComplex>) -> Result<Self> {
        EndRing::from_hom(alg, hom_kb(alg, x, x))
    }

    pub fn from_hom(alg: &Algebra, hom: HomSpace) -> Result<Self> {
        let f = alg.field;
        let d = hom.dim();
        let basis = hom.basis();
        let mut mult = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                mult[i][j] = hom.reduce(&basis[j].then(alg, &basis[i])?)?;
            }
        }
        if d == 0 {
            return Ok(EndRing {
                hom,
                mult,
                rho: Vec::new(),
                local: false,
            });
        }
        let inv_d = f
            .inv(f.elem(d as i64))
            .ok_or_else(|| Error::Unsupported("End dimension divisible by p".into()))?;
        let rho: Vec<FieldElem> = (0..d)
            .map(|e| {
                let tr = (0..d).fold(0, |acc, i| f.add(acc, mult[e][i][i]));
                f.mul(tr, inv_d)
            })
            .collect();
        let local = radical_is_nilpotent(f, d, &mult, &rho);
        Ok(EndRing {
            hom,
            mult,
            rho,
            local,
        })
    }

    pub fn dim(&self) -> usize {
        self.hom.dim()
    }

    /// Product of coordinate vectors: `x . y` (apply `y` first).
    pub fn mul(&self, field: Field, x: &[FieldElem], y: &[FieldElem]) -> Vec<FieldElem> {
        let d = self.dim();
        let mut out = vec![0; d];
        for i in 0..d {
            if x[i] == 0 {
                continue;
            }
            for j in 0..d {
                if y[j] == 0 {
                    continue;
                }
                let c = field.mul(x[i], y[j]);
                for (o, &m) in out.iter_mut().zip(&self.mult[i][j]) {
                    *o = field.add(*o, field.mul(c, m));
                }
            }
        }
        out
    }

    pub fn residue(&self, field: Field, x: &[FieldElem]) -> FieldElem {
        x.iter()
            .zip(&self.rho)
            .fold(0, |acc, (&a, &b)| field.add(acc, field.mul(a, b)))
    }

    /// Basis of the radical candidates `ker rho`.
    pub fn radical_basis(&self) -> Vec<Vec<FieldElem>> {
        let f = self.hom.null.field();
        Mat::from_vectors(f, self.dim(), std::slice::from_ref(&self.rho)).kernel()
    }
}

fn radical_is_nilpotent(f: Field, d: usize, mult: &[Vec<Vec<FieldElem>>], rho: &[FieldElem]) -> bool {
    let j = Mat::from_vectors(f, d, &[rho.to_vec()]).kernel();
    let mut power = Subspace::spanned_by(f, d, &j);
    // J^k strictly decreases until it vanishes, or stalls on a non-nilpotent ideal
    for _ in 0..=d {
        if power.dim() == 0 {
            return true;
        }
        let mut next = Subspace::new(f, d);
        for x in power.basis() {
            for y in &j {
                let mut prod = vec![0; d];
                for a in 0..d {
                    for b in 0..d {
                        let c = f.mul(x[a], y[b]);
                        if c == 0 {
                            continue;
                        }
                        for (o, &m) in prod.iter_mut().zip(&mult[a][b]) {
                            *o = f.add(*o, f.mul(c, m));
                        }
                    }
                }
                next.insert(&prod);
            }
        }
        if next.dim() >= power.dim() {
            return false;
        }
        power = next;
    }
    power.dim() == 0
}

/// `End(X)` is local.
pub fn is_indecomposable(alg: &Algebra, x: &Arc<ProjComplex>) -> Result<bool> {
    Ok(EndRing::new(alg, x)?.local)
}

/// For indecomposables with known endomorphism rings: whether some
/// `f: X -> Y`, `g: Y -> X` has `g . f` outside the radical of `End(X)`.
/// Since `(f, g) |-> rho(g . f)` is bilinear, testing basis pairs is exact.
pub fn isomorphic_indecomposables(
    alg: &Algebra,
    end_x: &EndRing,
    xy: &HomSpace,
    yx: &HomSpace,
) -> Result<Option<(ChainMap, ChainMap)>> {
    for f in xy.basis() {
        for g in yx.basis() {
            let gf = f.then(alg, &g)?;
            let c = end_x.hom.reduce(&gf)?;
            if end_x.residue(alg.field, &c) != 0 {
                return Ok(Some((f, g)));
            }
        }
    }
    Ok(None)
}

/// Searches `Hom(X, Y)` for a homotopy equivalence: basis vectors first, then
/// seeded random combinations.
pub fn find_homotopy_equivalence(
    alg: &Algebra,
    hom: &HomSpace,
    samples: usize,
    seed: u64,
) -> Result<Option<ChainMap>> {
    use rand::{Rng, SeedableRng};
    for f in hom.basis() {
        if is_homotopy_equivalence(alg, &f)? {
            return Ok(Some(f));
        }
    }
    if hom.dim() < 2 {
        return Ok(None);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p = alg.field.prime();
    for _ in 0..samples {
        let coeffs: Vec<FieldElem> = (0..hom.dim()).map(|_| rng.gen_range(0..p)).collect();
        let f = hom.combine(&coeffs);
        if is_homotopy_equivalence(alg, &f)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}
