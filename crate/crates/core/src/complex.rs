//! Bounded complexes of finitely generated projectives over an [`Algebra`],
//! chain maps, suspension, direct sums and mapping cones.
//!
//! A differential block `d^n` has one row per summand of degree `n` and one
//! column per summand of degree `n + 1`; entry `(s, t)` is the map from
//! summand `s` to summand `t`. The same row/column convention is used for
//! chain-map components.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactlin::FieldElem;
use crate::pathalg::{AlgElem, Algebra};

pub type Block = Vec<Vec<AlgElem>>;

fn zero_block(rows: &[usize], cols: &[usize]) -> Block {
    rows.iter()
        .map(|&u| cols.iter().map(|&v| AlgElem::zero(u, v)).collect())
        .collect()
}

/// Block product: first `a` (from `rows` to `mid`), then `b` (from `mid` to `cols`).
fn block_then(alg: &Algebra, a: &Block, b: &Block, rows: &[usize], cols: &[usize]) -> Block {
    a.iter()
        .zip(rows)
        .map(|(row, &rv)| {
            cols.iter()
                .enumerate()
                .map(|(u, &cv)| {
                    let mut acc = AlgElem::zero(rv, cv);
                    for (t, x) in row.iter().enumerate() {
                        if x.is_zero() || b[t][u].is_zero() {
                            continue;
                        }
                        acc = alg.add(&acc, &alg.mul_unchecked(x, &b[t][u]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn block_is_zero(b: &Block) -> bool {
    b.iter().all(|row| row.iter().all(AlgElem::is_zero))
}

fn block_map(alg: &Algebra, b: &Block, c: FieldElem) -> Block {
    b.iter()
        .map(|row| row.iter().map(|x| alg.scale(c, x)).collect())
        .collect()
}

fn block_add(alg: &Algebra, a: &Block, b: &Block) -> Block {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| alg.add(x, y)).collect())
        .collect()
}

/// A bounded complex. Degrees outside `[lo, lo + terms.len())` are zero, and
/// the first and last stored degrees are nonzero (the zero complex stores none).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjComplex {
    lo: i64,
    terms: Vec<Vec<usize>>,
    diffs: Vec<Block>,
}

impl ProjComplex {
    pub fn zero() -> Self {
        ProjComplex {
            lo: 0,
            terms: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// Builds and validates a complex. `terms[k]` lists the vertices of the
    /// summands in degree `lo + k`; `diffs[k]` is `d^{lo+k}`.
    pub fn new(alg: &Algebra, lo: i64, terms: Vec<Vec<usize>>, diffs: Vec<Block>) -> Result<Self> {
        if diffs.len() != terms.len().saturating_sub(1) {
            return Err(Error::InvalidComplex(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        let c = ProjComplex { lo, terms, diffs }.trimmed();
        c.validate(alg)?;
        Ok(c)
    }

    fn trimmed(mut self) -> Self {
        while self.terms.last().is_some_and(|t| t.is_empty()) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.first().is_some_and(|t| t.is_empty()) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.lo += 1;
        }
        if self.terms.is_empty() {
            self.lo = 0;
        }
        self
    }

    /// Shapes, idempotents and `d^{n+1} . d^n = 0`.
    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        for (k, term) in self.terms.iter().enumerate() {
            if let Some(&v) = term.iter().find(|&&v| v >= alg.n()) {
                return Err(Error::InvalidComplex(format!(
                    "vertex {v} in degree {} out of range",
                    self.lo + k as i64
                )));
            }
        }
        for (k, d) in self.diffs.iter().enumerate() {
            let (src, dst) = (&self.terms[k], &self.terms[k + 1]);
            check_block(d, src, dst).map_err(|m| {
                Error::InvalidComplex(format!("d^{}: {m}", self.lo + k as i64))
            })?;
        }
        for k in 0..self.diffs.len().saturating_sub(1) {
            let dd = block_then(alg, &self.diffs[k], &self.diffs[k + 1], &self.terms[k], &self.terms[k + 2]);
            if !block_is_zero(&dd) {
                return Err(Error::InvalidComplex(format!(
                    "d^{} . d^{} is nonzero",
                    self.lo + k as i64 + 1,
                    self.lo + k as i64
                )));
            }
        }
        Ok(())
    }

    /// `Sigma^n(P_v)`, concentrated in degree `-n`.
    pub fn stalk(alg: &Algebra, v: usize, n: i64) -> Result<Self> {
        ProjComplex::new(alg, -n, vec![vec![v]], Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least and greatest degrees with a nonzero term.
    pub fn support(&self) -> Option<(i64, i64)> {
        (!self.terms.is_empty()).then(|| (self.lo, self.lo + self.terms.len() as i64 - 1))
    }

    pub fn term(&self, n: i64) -> &[usize] {
        let k = n - self.lo;
        if k < 0 || k >= self.terms.len() as i64 {
            &[]
        } else {
            &self.terms[k as usize]
        }
    }

    /// `d^n: X^n -> X^{n+1}`, absent when either side is zero.
    pub fn diff(&self, n: i64) -> Option<&Block> {
        let k = n - self.lo;
        if k < 0 || k >= self.diffs.len() as i64 {
            None
        } else {
            Some(&self.diffs[k as usize])
        }
    }

    /// `Sigma^k X`: degree `n` holds `X^{n+k}`, differential times `(-1)^k`.
    pub fn shift(&self, alg: &Algebra, k: i64) -> Self {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { alg.field.neg(1) };
        ProjComplex {
            lo: if self.terms.is_empty() { 0 } else { self.lo - k },
            terms: self.terms.clone(),
            diffs: self.diffs.iter().map(|d| block_map(alg, d, sign)).collect(),
        }
    }

    /// Degreewise concatenation with block-diagonal differential, plus the
    /// injections and projections.
    pub fn direct_sum(alg: &Algebra, x: &Arc<Self>, y: &Arc<Self>) -> DirectSum {
        let (lo, hi) = hull(x.support(), y.support());
        let mut terms = Vec::new();
        let mut diffs = Vec::new();
        if lo <= hi {
            for n in lo..=hi {
                let mut t = x.term(n).to_vec();
                t.extend_from_slice(y.term(n));
                terms.push(t);
            }
            for n in lo..hi {
                let (xs, xt) = (x.term(n), x.term(n + 1));
                let (ys, yt) = (y.term(n), y.term(n + 1));
                let mut rows = Vec::new();
                for (s, &v) in xs.iter().enumerate() {
                    let mut row: Vec<AlgElem> = match x.diff(n) {
                        Some(d) => d[s].clone(),
                        None => xt.iter().map(|&w| AlgElem::zero(v, w)).collect(),
                    };
                    row.extend(yt.iter().map(|&w| AlgElem::zero(v, w)));
                    rows.push(row);
                }
                for (s, &v) in ys.iter().enumerate() {
                    let mut row: Vec<AlgElem> = xt.iter().map(|&w| AlgElem::zero(v, w)).collect();
                    match y.diff(n) {
                        Some(d) => row.extend(d[s].iter().cloned()),
                        None => row.extend(yt.iter().map(|&w| AlgElem::zero(v, w))),
                    }
                    rows.push(row);
                }
                diffs.push(rows);
            }
        }
        let sum = Arc::new(
            ProjComplex {
                lo: if lo <= hi { lo } else { 0 },
                terms,
                diffs,
            }
            .trimmed(),
        );
        let nx = |n: i64| x.term(n).len();
        let inj_x = ChainMap::from_fn(x, &sum, |_, s, t, u, v| {
            if s == t { alg.identity(u) } else { AlgElem::zero(u, v) }
        });
        let inj_y = ChainMap::from_fn(y, &sum, |n, s, t, u, v| {
            if t == nx(n) + s { alg.identity(u) } else { AlgElem::zero(u, v) }
        });
        let proj_x = ChainMap::from_fn(&sum, x, |_, s, t, u, v| {
            if s == t { alg.identity(u) } else { AlgElem::zero(u, v) }
        });
        let proj_y = ChainMap::from_fn(&sum, y, |n, s, t, u, v| {
            if s == nx(n) + t { alg.identity(u) } else { AlgElem::zero(u, v) }
        });
        DirectSum {
            sum,
            inj_x,
            inj_y,
            proj_x,
            proj_y,
        }
    }

    /// Multi-line rendering: one line per degree, then one per nonzero
    /// differential entry.
    pub fn render(&self, alg: &Algebra) -> String {
        let mut out = String::new();
        let Some((lo, hi)) = self.support() else {
            return "0\n".into();
        };
        for n in lo..=hi {
            let names: Vec<String> = self.term(n).iter().map(|v| format!("P{v}")).collect();
            let _ = writeln!(out, "degree {n}: {}", if names.is_empty() { "0".into() } else { names.join(" + ") });
        }
        for n in lo..hi {
            if let Some(d) = self.diff(n) {
                for (s, row) in d.iter().enumerate() {
                    for (t, x) in row.iter().enumerate() {
                        if !x.is_zero() {
                            let _ = writeln!(out, "d{n}[{s},{t}] = {}", alg.format_elem(x));
                        }
                    }
                }
            }
        }
        out
    }
}

fn hull(a: Option<(i64, i64)>, b: Option<(i64, i64)>) -> (i64, i64) {
    match (a, b) {
        (None, None) => (0, -1),
        (Some(x), None) | (None, Some(x)) => x,
        (Some(x), Some(y)) => (x.0.min(y.0), x.1.max(y.1)),
    }
}

fn check_block(b: &Block, rows: &[usize], cols: &[usize]) -> std::result::Result<(), String> {
    if b.len() != rows.len() {
        return Err(format!("expected {} rows, got {}", rows.len(), b.len()));
    }
    for (s, row) in b.iter().enumerate() {
        if row.len() != cols.len() {
            return Err(format!("row {s}: expected {} entries, got {}", cols.len(), row.len()));
        }
        for (t, x) in row.iter().enumerate() {
            if x.dom != rows[s] || x.cod != cols[t] {
                return Err(format!(
                    "entry ({s},{t}) lies in e_{}Ae_{}, expected e_{}Ae_{}",
                    x.dom, x.cod, rows[s], cols[t]
                ));
            }
        }
    }
    Ok(())
}

pub struct DirectSum {
    pub sum: Arc<ProjComplex>,
    pub inj_x: ChainMap,
    pub inj_y: ChainMap,
    pub proj_x: ChainMap,
    pub proj_y: ChainMap,
}

/// A degree-zero map of complexes. Components are stored for every degree
/// in which both terms are nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub dom: Arc<ProjComplex>,
    pub cod: Arc<ProjComplex>,
    comps: BTreeMap<i64, Block>,
}

impl ChainMap {
    pub fn zero(dom: &Arc<ProjComplex>, cod: &Arc<ProjComplex>) -> Self {
        ChainMap::from_fn(dom, cod, |_, _, _, u, v| AlgElem::zero(u, v))
    }

    pub fn identity(x: &Arc<ProjComplex>, alg: &Algebra) -> Self {
        ChainMap::from_fn(x, x, |_, s, t, u, v| {
            if s == t { alg.identity(u) } else { AlgElem::zero(u, v) }
        })
    }

    /// Component entries from `entry(degree, s, t, vertex_s, vertex_t)`.
    /// No validation is done; see [`ChainMap::validate`].
    pub fn from_fn(
        dom: &Arc<ProjComplex>,
        cod: &Arc<ProjComplex>,
        mut entry: impl FnMut(i64, usize, usize, usize, usize) -> AlgElem,
    ) -> Self {
        let mut comps = BTreeMap::new();
        if let (Some((a, b)), Some((c, d))) = (dom.support(), cod.support()) {
            for n in a.max(c)..=b.min(d) {
                let (rows, cols) = (dom.term(n), cod.term(n));
                if rows.is_empty() || cols.is_empty() {
                    continue;
                }
                let block = rows
                    .iter()
                    .enumerate()
                    .map(|(s, &u)| {
                        cols.iter()
                            .enumerate()
                            .map(|(t, &v)| entry(n, s, t, u, v))
                            .collect()
                    })
                    .collect();
                comps.insert(n, block);
            }
        }
        ChainMap {
            dom: dom.clone(),
            cod: cod.clone(),
            comps,
        }
    }

    /// Explicit components; degrees not listed are zero.
    pub fn from_components(
        dom: &Arc<ProjComplex>,
        cod: &Arc<ProjComplex>,
        given: BTreeMap<i64, Block>,
    ) -> Result<Self> {
        let mut m = ChainMap::zero(dom, cod);
        for (n, b) in given {
            check_block(&b, dom.term(n), cod.term(n))
                .map_err(|e| Error::NotChainMap(format!("component {n}: {e}")))?;
            if !m.comps.contains_key(&n) {
                if block_is_zero(&b) {
                    continue;
                }
                return Err(Error::NotChainMap(format!("component in degree {n} has a zero side")));
            }
            m.comps.insert(n, b);
        }
        Ok(m)
    }

    pub fn comp(&self, n: i64) -> Option<&Block> {
        self.comps.get(&n)
    }

    pub fn components(&self) -> &BTreeMap<i64, Block> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(block_is_zero)
    }

    /// Commuting squares `f^{n+1} . d_X^n = d_Y^n . f^n`.
    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        for (&n, b) in &self.comps {
            check_block(b, self.dom.term(n), self.cod.term(n))
                .map_err(|e| Error::NotChainMap(format!("component {n}: {e}")))?;
        }
        let (Some((a, b)), Some((c, d))) = (self.dom.support(), self.cod.support()) else {
            return Ok(());
        };
        for n in a.min(c) - 1..=b.max(d) {
            let lhs = match (self.dom.diff(n), self.comps.get(&(n + 1))) {
                (Some(dx), Some(f1)) => Some(block_then(alg, dx, f1, self.dom.term(n), self.cod.term(n + 1))),
                _ => None,
            };
            let rhs = match (self.comps.get(&n), self.cod.diff(n)) {
                (Some(f0), Some(dy)) => Some(block_then(alg, f0, dy, self.dom.term(n), self.cod.term(n + 1))),
                _ => None,
            };
            let ok = match (&lhs, &rhs) {
                (Some(l), Some(r)) => l == r,
                (Some(l), None) => block_is_zero(l),
                (None, Some(r)) => block_is_zero(r),
                (None, None) => true,
            };
            if !ok {
                return Err(Error::NotChainMap(format!("square at degree {n} does not commute")));
            }
        }
        Ok(())
    }

    /// `g . f`: apply `self`, then `g`.
    pub fn then(&self, alg: &Algebra, g: &ChainMap) -> Result<ChainMap> {
        if *self.cod != *g.dom {
            return Err(Error::NotComposable("codomain and domain differ".into()));
        }
        let mut comps = BTreeMap::new();
        if let (Some((a, b)), Some((c, d))) = (self.dom.support(), g.cod.support()) {
            for n in a.max(c)..=b.min(d) {
                let (rows, cols) = (self.dom.term(n), g.cod.term(n));
                if rows.is_empty() || cols.is_empty() {
                    continue;
                }
                let block = match (self.comps.get(&n), g.comps.get(&n)) {
                    (Some(f), Some(h)) => block_then(alg, f, h, rows, cols),
                    _ => zero_block(rows, cols),
                };
                comps.insert(n, block);
            }
        }
        Ok(ChainMap {
            dom: self.dom.clone(),
            cod: g.cod.clone(),
            comps,
        })
    }

    pub fn add(&self, alg: &Algebra, other: &ChainMap) -> Result<ChainMap> {
        if *self.dom != *other.dom || *self.cod != *other.cod {
            return Err(Error::NotComposable("sum of maps between different complexes".into()));
        }
        let comps = self
            .comps
            .iter()
            .map(|(&n, b)| (n, block_add(alg, b, &other.comps[&n])))
            .collect();
        Ok(ChainMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            comps,
        })
    }

    pub fn scale(&self, alg: &Algebra, c: FieldElem) -> ChainMap {
        ChainMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            comps: self.comps.iter().map(|(&n, b)| (n, block_map(alg, b, c))).collect(),
        }
    }

    /// `Sigma^k f`, with `(Sigma^k f)^n = f^{n+k}` (no sign).
    pub fn shift(&self, alg: &Algebra, k: i64) -> ChainMap {
        ChainMap {
            dom: Arc::new(self.dom.shift(alg, k)),
            cod: Arc::new(self.cod.shift(alg, k)),
            comps: self.comps.iter().map(|(&n, b)| (n - k, b.clone())).collect(),
        }
    }

    /// Same components, reinterpreted between bit-identical complexes.
    pub fn retarget(&self, dom: &Arc<ProjComplex>, cod: &Arc<ProjComplex>) -> Result<ChainMap> {
        if **dom != *self.dom || **cod != *self.cod {
            return Err(Error::NotComposable("retarget between different complexes".into()));
        }
        Ok(ChainMap {
            dom: dom.clone(),
            cod: cod.clone(),
            comps: self.comps.clone(),
        })
    }

    pub fn render(&self, alg: &Algebra) -> String {
        let mut out = String::new();
        for (n, b) in &self.comps {
            for (s, row) in b.iter().enumerate() {
                for (t, x) in row.iter().enumerate() {
                    if !x.is_zero() {
                        let _ = writeln!(out, "f{n}[{s},{t}] = {}", alg.format_elem(x));
                    }
                }
            }
        }
        if out.is_empty() {
            out.push_str("0\n");
        }
        out
    }
}

/// The mapping cone of `f: X -> Y` with its canonical maps.
pub struct Cone {
    pub cone: Arc<ProjComplex>,
    /// `Y -> C(f)`.
    pub inc: ChainMap,
    /// `C(f) -> Sigma X`.
    pub proj: ChainMap,
    pub shifted_dom: Arc<ProjComplex>,
}

/// `C^n = X^{n+1} + Y^n` with differential `[[-d_X, 0], [f, d_Y]]`
/// (written on column vectors).
pub fn cone(alg: &Algebra, f: &ChainMap) -> Result<Cone> {
    let x = &f.dom;
    let y = &f.cod;
    let sx = Arc::new(x.shift(alg, 1));
    let (lo, hi) = hull(sx.support(), y.support());
    let mut terms = Vec::new();
    let mut diffs = Vec::new();
    if lo <= hi {
        for n in lo..=hi {
            let mut t = x.term(n + 1).to_vec();
            t.extend_from_slice(y.term(n));
            terms.push(t);
        }
        let neg = alg.field.neg(1);
        for n in lo..hi {
            let (xs, xt) = (x.term(n + 1), x.term(n + 2));
            let (ys, yt) = (y.term(n), y.term(n + 1));
            let mut rows = Vec::new();
            for (s, &v) in xs.iter().enumerate() {
                let mut row: Vec<AlgElem> = match x.diff(n + 1) {
                    Some(d) => d[s].iter().map(|e| alg.scale(neg, e)).collect(),
                    None => xt.iter().map(|&w| AlgElem::zero(v, w)).collect(),
                };
                match f.comp(n + 1) {
                    Some(b) => row.extend(b[s].iter().cloned()),
                    None => row.extend(yt.iter().map(|&w| AlgElem::zero(v, w))),
                }
                rows.push(row);
            }
            for (s, &v) in ys.iter().enumerate() {
                let mut row: Vec<AlgElem> = xt.iter().map(|&w| AlgElem::zero(v, w)).collect();
                match y.diff(n) {
                    Some(d) => row.extend(d[s].iter().cloned()),
                    None => row.extend(yt.iter().map(|&w| AlgElem::zero(v, w))),
                }
                rows.push(row);
            }
            diffs.push(rows);
        }
    }
    let c = Arc::new(ProjComplex::new(alg, lo, terms, diffs)?);
    let inc = ChainMap::from_fn(y, &c, |n, s, t, u, v| {
        if t == x.term(n + 1).len() + s { alg.identity(u) } else { AlgElem::zero(u, v) }
    });
    let proj = ChainMap::from_fn(&c, &sx, |_, s, t, u, v| {
        if s == t { alg.identity(u) } else { AlgElem::zero(u, v) }
    });
    Ok(Cone {
        cone: c,
        inc,
        proj,
        shifted_dom: sx,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    fn alg(r: usize, n: usize) -> Algebra {
        Algebra::arn(r, n, Field::default()).unwrap()
    }

    /// `P_0 -> P_0 -> ... ` with cycle differentials, `r = 1`.
    fn x_mn(a: &Algebra, m: i64, n: i64) -> Arc<ProjComplex> {
        let len = (n - m + 1) as usize;
        let cyc = a.unnamed(0, 0).unwrap();
        let diffs = (1..len).map(|_| vec![vec![cyc.clone()]]).collect();
        Arc::new(ProjComplex::new(a, m, vec![vec![0]; len], diffs).unwrap())
    }

    #[test]
    fn rejects_nonzero_square() {
        let a = alg(2, 3);
        // Q_2 -> P_1 -> P_0: the composite walks 0 -> 1 -> 2 through vertex 1 < r
        let d1 = a.unnamed(2, 1).unwrap();
        let d2 = a.unnamed(1, 0).unwrap();
        let c = ProjComplex::new(&a, 0, vec![vec![2], vec![1], vec![0]], vec![vec![vec![d1]], vec![vec![d2]]]);
        assert!(c.is_ok());
        let e = a.identity(0);
        let bad = ProjComplex::new(&a, 0, vec![vec![0], vec![0], vec![0]], vec![vec![vec![e.clone()]], vec![vec![e]]]);
        assert!(matches!(bad, Err(Error::InvalidComplex(_))));
        let ragged = ProjComplex::new(&a, 0, vec![vec![0], vec![0]], vec![]);
        assert!(ragged.is_err());
    }

    #[test]
    fn shift_examples() {
        let a = alg(1, 2);
        let x = x_mn(&a, 0, 2);
        assert_eq!(x.shift(&a, 0), *x);
        assert_eq!(x.shift(&a, 1).shift(&a, -1), *x);
        let s = ProjComplex::stalk(&a, 0, 0).unwrap().shift(&a, 3);
        assert_eq!(s.support(), Some((-3, -3)));
        assert_eq!(ProjComplex::stalk(&a, 1, 2).unwrap().support(), Some((-2, -2)));
        let sx = x.shift(&a, 1);
        assert_eq!(sx.support(), Some((-1, 1)));
        let d = sx.diff(-1).unwrap();
        assert_eq!(d[0][0], a.scale(a.field.neg(1), &a.unnamed(0, 0).unwrap()));
        sx.validate(&a).unwrap();
    }

    #[test]
    fn supports_and_sums() {
        let a = alg(1, 2);
        assert_eq!(x_mn(&a, 2, 5).support(), Some((2, 5)));
        assert_eq!(ProjComplex::zero().support(), None);
        let s = ProjComplex::direct_sum(&a, &x_mn(&a, 0, 1), &x_mn(&a, 3, 4));
        assert_eq!(s.sum.support(), Some((0, 4)));
        assert!(s.sum.term(2).is_empty());
        s.sum.validate(&a).unwrap();
        let z = Arc::new(ProjComplex::zero());
        let x = x_mn(&a, 0, 2);
        let s = ProjComplex::direct_sum(&a, &x, &z);
        assert_eq!(*s.sum, *x);
        for m in [&s.inj_x, &s.inj_y, &s.proj_x, &s.proj_y] {
            m.validate(&a).unwrap();
        }
        let s = ProjComplex::direct_sum(&a, &x, &x);
        let back = s.inj_y.then(&a, &s.proj_y).unwrap();
        assert_eq!(back, ChainMap::identity(&x, &a));
        assert!(s.inj_x.then(&a, &s.proj_y).unwrap().is_zero());
    }

    #[test]
    fn chain_map_validation() {
        let a = alg(1, 2);
        let x = x_mn(&a, 0, 1);
        ChainMap::identity(&x, &a).validate(&a).unwrap();
        // identity in degree 0 only is not a chain map on X_{0,1}
        let bad = ChainMap::from_fn(&x, &x, |n, _, _, u, v| {
            if n == 0 { a.identity(u) } else { AlgElem::zero(u, v) }
        });
        assert!(bad.validate(&a).is_err());
        // the cycle in degree 0 only is one (it squares to zero)
        let delta = ChainMap::from_fn(&x, &x, |n, _, _, u, v| {
            if n == 0 { a.unnamed(0, 0).unwrap() } else { AlgElem::zero(u, v) }
        });
        delta.validate(&a).unwrap();
    }

    #[test]
    fn cone_shapes() {
        let a = alg(1, 2);
        let x = x_mn(&a, 0, 1);
        let c = cone(&a, &ChainMap::identity(&x, &a)).unwrap();
        assert_eq!(c.cone.support(), Some((-1, 1)));
        c.cone.validate(&a).unwrap();
        c.inc.validate(&a).unwrap();
        c.proj.validate(&a).unwrap();
        assert!(c.inc.then(&a, &c.proj).unwrap().is_zero());
        // cone(0 -> Y) = Y
        let z = Arc::new(ProjComplex::zero());
        let c = cone(&a, &ChainMap::zero(&z, &x)).unwrap();
        assert_eq!(*c.cone, *x);
    }

    #[test]
    fn cone_commutes_with_shift() {
        let a = alg(1, 3);
        let x = x_mn(&a, 0, 2);
        let y = x_mn(&a, -1, 2);
        let f = ChainMap::from_fn(&x, &y, |_, _, _, u, _| a.identity(u));
        f.validate(&a).unwrap();
        let c = cone(&a, &f).unwrap();
        // Sigma C(f) = C(-Sigma f): the shifted differential flips the sign of f
        let neg = a.field.neg(1);
        let cs = cone(&a, &f.shift(&a, 1).scale(&a, neg)).unwrap();
        assert_eq!(*cs.cone, c.cone.shift(&a, 1));
        let cs = cone(&a, &f.shift(&a, 1)).unwrap();
        assert_ne!(*cs.cone, c.cone.shift(&a, 1));
    }
}
