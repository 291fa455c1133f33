//! Window-scale checks of the structural statements about `K^b(proj A(r,N))`.
//!
//! Every check works on the catalog objects whose support lies in a window
//! `[lo, hi]` and is exact: all arithmetic is over the prime field.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::catalog::{self, delta_on, shift_iso, CatalogId};
use crate::complex::{cone, ChainMap, ProjComplex};
use crate::error::{Error, Result};
use crate::exactlin::{FieldElem, Mat, Subspace};
use crate::homotopy::{hom_kb, is_homotopy_equivalence, isomorphic_indecomposables, EndRing, HomSpace};
use crate::pathalg::{AlgElem, Algebra};
use crate::spanmorph::{enumerate_spanning, realize_between, Family, MorphId};

pub const REPORT_SCHEMA: &str = "nakayama.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Undetermined,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Fail dominates undetermined, which dominates pass.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            _ => Pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub r: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: u32,
    pub window: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub schema: String,
    pub check: String,
    pub params: Params,
    pub verdict: Verdict,
    /// Check-specific numbers (counts, dimensions, tables).
    pub summary: BTreeMap<String, Value>,
    /// Counterexamples, in deterministic order; empty on pass.
    pub witnesses: Vec<Value>,
}

impl WindowReport {
    pub fn new(check: &str, params: Params) -> Self {
        WindowReport {
            schema: REPORT_SCHEMA.into(),
            check: check.into(),
            params,
            verdict: Verdict::Pass,
            summary: BTreeMap::new(),
            witnesses: Vec::new(),
        }
    }

    pub fn fail(&mut self, w: Value) {
        self.verdict = Verdict::Fail;
        self.witnesses.push(w);
    }

    pub fn note(&mut self, k: &str, v: impl Serialize) {
        self.summary
            .insert(k.into(), serde_json::to_value(v).expect("serializable"));
    }
}

/// Shared realizations and Hom spaces for one algebra.
pub struct Context {
    pub alg: Algebra,
    complexes: RwLock<HashMap<CatalogId, Arc<ProjComplex>>>,
    homs: RwLock<HashMap<(CatalogId, CatalogId), Arc<HomSpace>>>,
    ends: RwLock<HashMap<CatalogId, Arc<EndRing>>>,
}

impl Context {
    pub fn new(alg: Algebra) -> Self {
        Context {
            alg,
            complexes: RwLock::default(),
            homs: RwLock::default(),
            ends: RwLock::default(),
        }
    }

    pub fn params(&self, lo: i64, hi: i64) -> Params {
        Params {
            r: self.alg.r(),
            n: self.alg.n(),
            p: self.alg.field.prime(),
            window: [lo, hi],
        }
    }

    pub fn complex(&self, id: CatalogId) -> Result<Arc<ProjComplex>> {
        let id = id.check(self.alg.r(), self.alg.n())?;
        if let Some(c) = self.complexes.read().expect("lock").get(&id) {
            return Ok(c.clone());
        }
        let c = Arc::new(id.realize(&self.alg)?);
        Ok(self
            .complexes
            .write()
            .expect("lock")
            .entry(id)
            .or_insert(c)
            .clone())
    }

    pub fn hom(&self, x: CatalogId, y: CatalogId) -> Result<Arc<HomSpace>> {
        if let Some(h) = self.homs.read().expect("lock").get(&(x, y)) {
            return Ok(h.clone());
        }
        let h = Arc::new(hom_kb(&self.alg, &self.complex(x)?, &self.complex(y)?));
        Ok(self
            .homs
            .write()
            .expect("lock")
            .entry((x, y))
            .or_insert(h)
            .clone())
    }

    pub fn end(&self, x: CatalogId) -> Result<Arc<EndRing>> {
        if let Some(e) = self.ends.read().expect("lock").get(&x) {
            return Ok(e.clone());
        }
        let e = Arc::new(EndRing::from_hom(&self.alg, (*self.hom(x, x)?).clone())?);
        Ok(self
            .ends
            .write()
            .expect("lock")
            .entry(x)
            .or_insert(e)
            .clone())
    }

    /// Realizes a spanning morphism between the shared realizations.
    pub fn morph(&self, id: &MorphId) -> Result<(CatalogId, CatalogId, ChainMap)> {
        let (s, t) = id.check(self.alg.r(), self.alg.n())?;
        let f = realize_between(&self.alg, id, &self.complex(s)?, &self.complex(t)?)?;
        Ok((s, t, f))
    }

    pub fn objects(&self, lo: i64, hi: i64) -> Vec<CatalogId> {
        catalog::enumerate(self.alg.r(), self.alg.n(), lo, hi)
    }

    /// Hom spaces for all ordered pairs, computed in parallel.
    pub fn warm(&self, objs: &[CatalogId]) -> Result<()> {
        let pairs: Vec<(CatalogId, CatalogId)> = objs
            .iter()
            .flat_map(|&x| objs.iter().map(move |&y| (x, y)))
            .collect();
        pairs
            .par_iter()
            .map(|&(x, y)| self.hom(x, y).map(|_| ()))
            .collect::<Result<Vec<()>>>()?;
        Ok(())
    }
}

/// Validation, indecomposability and pairwise non-isomorphism of the window catalog.
pub fn check_catalog(ctx: &Context, lo: i64, hi: i64) -> Result<WindowReport> {
    let mut rep = WindowReport::new("catalog", ctx.params(lo, hi));
    let objs = ctx.objects(lo, hi);
    rep.note("objects", objs.len());
    ctx.warm(&objs)?;
    let locals: Vec<(CatalogId, bool)> = objs
        .par_iter()
        .map(|&x| {
            let c = ctx.complex(x)?;
            c.validate(&ctx.alg)?;
            Ok((x, ctx.end(x)?.local))
        })
        .collect::<Result<_>>()?;
    for (x, local) in locals {
        if !local {
            rep.fail(json!({"object": x, "reason": "End ring is not local"}));
        }
    }
    let pairs: Vec<(CatalogId, CatalogId)> = objs
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| objs[i + 1..].iter().map(move |&y| (x, y)))
        .collect();
    let isos: Vec<Option<Value>> = pairs
        .par_iter()
        .map(|&(x, y)| -> Result<Option<Value>> {
            let xy = ctx.hom(x, y)?;
            if xy.dim() == 0 {
                return Ok(None);
            }
            let yx = ctx.hom(y, x)?;
            if yx.dim() == 0 {
                return Ok(None);
            }
            let ex = ctx.end(x)?;
            if isomorphic_indecomposables(&ctx.alg, &ex, &xy, &yx)?.is_some() {
                return Ok(Some(json!({"pair": [x, y], "reason": "isomorphic (trace route)"})));
            }
            for f in xy.basis() {
                if is_homotopy_equivalence(&ctx.alg, &f)? {
                    return Ok(Some(json!({"pair": [x, y], "reason": "isomorphic (cone route)"})));
                }
            }
            Ok(None)
        })
        .collect::<Result<_>>()?;
    for w in isos.into_iter().flatten() {
        rep.fail(w);
    }
    rep.note("pairs", pairs.len());
    Ok(rep)
}

/// Full table of `dim Hom(X, Y)` over the window and the bound it must satisfy.
pub fn check_homdim(ctx: &Context, lo: i64, hi: i64) -> Result<WindowReport> {
    let mut rep = WindowReport::new("homdim", ctx.params(lo, hi));
    let objs = ctx.objects(lo, hi);
    ctx.warm(&objs)?;
    let r = ctx.alg.r();
    let bound = if r == 1 { 2 } else { 1 };
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    let mut max = 0;
    for &x in &objs {
        for &y in &objs {
            let d = ctx.hom(x, y)?.dim();
            *hist.entry(d).or_default() += 1;
            max = max.max(d);
            let diag_x = x == y && x.family() == 'X';
            let ok = if r == 1 {
                d <= 2 && ((d == 2) == diag_x)
            } else {
                d <= 1
            };
            if !ok {
                rep.fail(json!({"source": x, "target": y, "dim": d}));
            }
        }
    }
    rep.note("objects", objs.len());
    rep.note("bound", bound);
    rep.note("max_dim", max);
    rep.note(
        "histogram",
        hist.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
    );
    Ok(rep)
}

/// The generator graph of spanning morphisms on a window.
pub struct Generators {
    pub ids: Vec<MorphId>,
    by_source: HashMap<CatalogId, Vec<(usize, CatalogId, ChainMap)>>,
}

impl Generators {
    pub fn build(ctx: &Context, lo: i64, hi: i64, keep: impl Fn(&MorphId) -> bool) -> Result<Self> {
        let ids: Vec<MorphId> = enumerate_spanning(ctx.alg.r(), ctx.alg.n(), lo, hi)
            .into_iter()
            .filter(|m| keep(m))
            .collect();
        let realized: Vec<(CatalogId, CatalogId, ChainMap)> =
            ids.par_iter().map(|m| ctx.morph(m)).collect::<Result<_>>()?;
        let mut by_source: HashMap<CatalogId, Vec<(usize, CatalogId, ChainMap)>> = HashMap::new();
        for (i, (s, t, f)) in realized.into_iter().enumerate() {
            by_source.entry(s).or_default().push((i, t, f));
        }
        Ok(Generators { ids, by_source })
    }

    pub fn from(&self, x: CatalogId) -> &[(usize, CatalogId, ChainMap)] {
        self.by_source.get(&x).map_or(&[], |v| v.as_slice())
    }
}

/// Span of all composites of generators starting at `u` (identity included),
/// per reachable target.
pub fn closure_from(ctx: &Context, gens: &Generators, u: CatalogId) -> Result<HashMap<CatalogId, Subspace>> {
    let alg = &ctx.alg;
    let mut spaces: HashMap<CatalogId, Subspace> = HashMap::new();
    let mut queue = VecDeque::new();
    let huu = ctx.hom(u, u)?;
    let id = huu.reduce(&ChainMap::identity(&ctx.complex(u)?, alg))?;
    let mut s = Subspace::new(alg.field, huu.dim());
    s.insert(&id);
    spaces.insert(u, s);
    queue.push_back((u, id));
    while let Some((v, coords)) = queue.pop_front() {
        let f = ctx.hom(u, v)?.combine(&coords);
        for (_, w, g) in gens.from(v) {
            let huw = ctx.hom(u, *w)?;
            if huw.dim() == 0 {
                continue;
            }
            let c = huw.reduce(&f.then(alg, g)?)?;
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let sp = spaces
                .entry(*w)
                .or_insert_with(|| Subspace::new(alg.field, huw.dim()));
            if sp.dim() < huw.dim() && sp.insert(&c) {
                queue.push_back((*w, c));
            }
        }
    }
    Ok(spaces)
}

/// Default padding around the window for intermediate objects of composites.
pub fn default_margin(r: usize) -> i64 {
    r as i64 + 1
}

/// Spanned-versus-full comparison for every ordered pair of window objects.
/// `sabotage` drops the connection family from the generators.
pub fn check_spanning(ctx: &Context, lo: i64, hi: i64, margin: i64, sabotage: bool) -> Result<WindowReport> {
    let name = if sabotage { "spanning-sabotaged" } else { "spanning" };
    let mut rep = WindowReport::new(name, ctx.params(lo, hi));
    let gens = Generators::build(ctx, lo - margin, hi + margin, |m| !(sabotage && m.family == Family::C))?;
    let objs = ctx.objects(lo, hi);
    rep.note("margin", margin);
    rep.note("generators", gens.ids.len());
    rep.note("objects", objs.len());
    let results: Vec<Vec<Value>> = objs
        .par_iter()
        .map(|&u| -> Result<Vec<Value>> {
            let spaces = closure_from(ctx, &gens, u)?;
            let mut bad = Vec::new();
            for &v in &objs {
                let full = ctx.hom(u, v)?.dim();
                let got = spaces.get(&v).map_or(0, |s| s.dim());
                if got != full {
                    bad.push(json!({"source": u, "target": v, "spanned": got, "dim": full}));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    let mut total = 0;
    for w in results.into_iter().flatten() {
        total += 1;
        rep.fail(w);
    }
    rep.note("uncovered_pairs", total);
    Ok(rep)
}

/// Checks that `endo` on `x` behaves as an almost-vanishing endomorphism
/// against every object of the window.
pub fn check_almost_vanishing_map(ctx: &Context, x: CatalogId, endo: &ChainMap, lo: i64, hi: i64) -> Result<WindowReport> {
    let alg = &ctx.alg;
    let mut rep = WindowReport::new("almost-vanishing", ctx.params(lo, hi));
    rep.note("object", x);
    let hxx = ctx.hom(x, x)?;
    if hxx.is_null(endo)? {
        rep.fail(json!({"reason": "endomorphism is null-homotopic"}));
        return Ok(rep);
    }
    if is_homotopy_equivalence(alg, endo)? {
        rep.fail(json!({"reason": "endomorphism is invertible"}));
        return Ok(rep);
    }
    let ex = ctx.end(x)?;
    let radical: Vec<ChainMap> = ex.radical_basis().iter().map(|v| hxx.combine(v)).collect();
    let objs = ctx.objects(lo, hi);
    let checks: Vec<Vec<Value>> = objs
        .par_iter()
        .map(|&u| -> Result<Vec<Value>> {
            let mut bad = Vec::new();
            let (ins, outs) = if u == x {
                (radical.clone(), radical.clone())
            } else {
                (ctx.hom(u, x)?.basis(), ctx.hom(x, u)?.basis())
            };
            let hux = ctx.hom(u, x)?;
            for f in ins {
                if !hux.is_null(&f.then(alg, endo)?)? {
                    bad.push(json!({"object": u, "side": "precompose"}));
                }
            }
            let hxu = ctx.hom(x, u)?;
            for g in outs {
                if !hxu.is_null(&endo.then(alg, &g)?)? {
                    bad.push(json!({"object": u, "side": "postcompose"}));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    for w in checks.into_iter().flatten() {
        rep.fail(w);
    }
    let sq = endo.then(alg, endo)?;
    rep.note("square_null", hxx.is_null(&sq)?);
    if !hxx.is_null(&sq)? {
        rep.fail(json!({"reason": "square is not null-homotopic"}));
    }
    Ok(rep)
}

/// `Delta_{m,n}` is almost-vanishing relative to the window (`r = 1`). The
/// window must extend at least one degree beyond the support on both sides.
pub fn check_almost_vanishing(ctx: &Context, m: i64, n: i64, lo: i64, hi: i64) -> Result<WindowReport> {
    if lo > m - 1 || hi < n + 1 {
        return Err(Error::InvalidParams(format!(
            "window [{lo},{hi}] must contain [{},{}]",
            m - 1,
            n + 1
        )));
    }
    let x = CatalogId::X { s: None, m, n };
    let d = delta_on(&ctx.alg, &ctx.complex(x)?)?;
    check_almost_vanishing_map(ctx, x, &d, lo, hi)
}

/// Outcome of an exactness test for `X -f-> Y -g-> Z -h-> Sigma X`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Exactness {
    /// `phi: C(f) -> Z` compatible with `g`, `h` and invertible.
    Exact,
    /// No `phi` satisfies the two homotopy conditions: the linear system is
    /// inconsistent (rank of the augmented matrix exceeds the coefficient rank).
    NoComparisonMap { rank: usize, augmented_rank: usize },
    /// A compatible `phi` exists but is not invertible; since every such `phi`
    /// is invertible when the triangle is exact, this certifies non-exactness.
    ComparisonNotInvertible,
}

impl Exactness {
    pub fn is_exact(&self) -> bool {
        matches!(self, Exactness::Exact)
    }
}

/// Decides exactness by comparing with the cone triangle of `f`.
pub fn check_triangle(alg: &Algebra, f: &ChainMap, g: &ChainMap, h: &ChainMap) -> Result<Exactness> {
    if *g.dom != *f.cod || *h.dom != *g.cod {
        return Err(Error::Malformed("triangle maps do not compose".into()));
    }
    let c = cone(alg, f)?;
    if *h.cod != *c.shifted_dom {
        return Err(Error::Malformed("third map must land in the suspension of the first object".into()));
    }
    let z = &g.cod;
    let hcz = hom_kb(alg, &c.cone, z);
    let hyz = hom_kb(alg, &f.cod, z);
    let hcs = hom_kb(alg, &c.cone, &c.shifted_dom);
    // unknown: coordinates of phi in Hom(C, Z)
    let k = hcz.dim();
    let rows_n = hyz.dim() + hcs.dim();
    let mut a = Mat::zeros(alg.field, rows_n, k);
    for (j, phi) in hcz.basis().iter().enumerate() {
        let v1 = hyz.reduce(&c.inc.then(alg, phi)?)?;
        let v2 = hcs.reduce(&phi.then(alg, h)?)?;
        for (i, x) in v1.into_iter().chain(v2).enumerate() {
            a.set(i, j, x);
        }
    }
    let mut b = hyz.reduce(g)?;
    b.extend(hcs.reduce(&c.proj)?);
    match a.solve(&b)? {
        None => {
            let rank = a.rank();
            let mut rows: Vec<Vec<FieldElem>> = (0..rows_n).map(|i| a.row(i).to_vec()).collect();
            for (row, x) in rows.iter_mut().zip(&b) {
                row.push(*x);
            }
            let augmented_rank = Mat::from_vectors(alg.field, k + 1, &rows).rank();
            Ok(Exactness::NoComparisonMap { rank, augmented_rank })
        }
        Some(sol) => {
            let phi = hcz.combine(&sol.particular);
            if is_homotopy_equivalence(alg, &phi)? {
                Ok(Exactness::Exact)
            } else {
                Ok(Exactness::ComparisonNotInvertible)
            }
        }
    }
}

/// The truncation triangle `sigma_{>=n} U -> U -> sigma_{<=n-1} U -> Sigma sigma_{>=n} U`
/// of a catalog object with support `[m, n]`, `m < n`. The third map is
/// `-d_U^{n-1}` in degree `n - 1`.
pub struct ProofTriangle {
    pub object: CatalogId,
    pub sub: CatalogId,
    pub quotient: CatalogId,
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
}

pub fn proof_triangle(ctx: &Context, u: CatalogId) -> Result<ProofTriangle> {
    let alg = &ctx.alg;
    let r = alg.r();
    let (m, n) = u.support();
    if m >= n {
        return Err(Error::InvalidParams(format!("{u} has a one-term support")));
    }
    let sub = u.truncate_ge(r, n).expect("nonempty").check(r, alg.n())?;
    let quo = u.truncate_le(r, n - 1).expect("nonempty").check(r, alg.n())?;
    let (uc, ac, cc) = (ctx.complex(u)?, ctx.complex(sub)?, ctx.complex(quo)?);
    let f = catalog::common_identity(alg, &ac, &uc)?;
    let g = catalog::common_identity(alg, &uc, &cc)?;
    let sa = Arc::new(ac.shift(alg, 1));
    let d = uc.diff(n - 1).expect("m < n")[0][0].clone();
    let minus = alg.field.neg(1);
    let h = ChainMap::from_fn(&cc, &sa, |deg, _, _, x, y| {
        if deg == n - 1 {
            alg.scale(minus, &d)
        } else {
            AlgElem::zero(x, y)
        }
    });
    h.validate(alg)?;
    Ok(ProofTriangle {
        object: u,
        sub,
        quotient: quo,
        f,
        g,
        h,
    })
}

/// For each proof triangle in the window and each scalar, the verdict must be
/// exact exactly when the scalar is 1.
pub fn check_rigidity(ctx: &Context, lo: i64, hi: i64, scalars: &[i64]) -> Result<WindowReport> {
    let alg = &ctx.alg;
    let mut rep = WindowReport::new("rigidity", ctx.params(lo, hi));
    let objs: Vec<CatalogId> = ctx
        .objects(lo, hi)
        .into_iter()
        .filter(|u| u.support().0 < u.support().1)
        .collect();
    let rows: Vec<(CatalogId, Vec<(i64, Exactness)>)> = objs
        .par_iter()
        .map(|&u| -> Result<_> {
            let t = proof_triangle(ctx, u)?;
            let mut out = Vec::new();
            for &l in scalars {
                let h = t.h.scale(alg, alg.field.elem(l));
                out.push((l, check_triangle(alg, &t.f, &t.g, &h)?));
            }
            Ok((u, out))
        })
        .collect::<Result<_>>()?;
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for (u, out) in rows {
        for (l, e) in out {
            let expect = alg.field.elem(l) == 1;
            let key = match &e {
                Exactness::Exact => "exact",
                Exactness::NoComparisonMap { .. } => "no-comparison-map",
                Exactness::ComparisonNotInvertible => "comparison-not-invertible",
            };
            *counts.entry(format!("lambda={l}:{key}")).or_default() += 1;
            if e.is_exact() != expect {
                rep.fail(json!({"object": u, "lambda": l, "result": e}));
            }
        }
    }
    rep.note("triangles", objs.len());
    rep.note("outcomes", counts);
    Ok(rep)
}

/// A family `U |-> lambda_U`, each value in coordinates of the `End(U)` basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentralElement {
    pub values: BTreeMap<CatalogId, Vec<FieldElem>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Center {
    /// The identity first, then a basis of the part with zero residue at every object.
    pub basis: Vec<CentralElement>,
    pub dim: usize,
    /// Whether `basis` has the identity-plus-radical shape.
    pub split: bool,
}

/// Linear system on the concatenated `End(U)` coordinates.
struct CenterSystem {
    objs: Vec<CatalogId>,
    offsets: Vec<usize>,
    nvars: usize,
    rows: Vec<Vec<FieldElem>>,
}

impl CenterSystem {
    fn new(ctx: &Context, objs: Vec<CatalogId>) -> Result<Self> {
        let mut offsets = Vec::with_capacity(objs.len());
        let mut nvars = 0;
        for &u in &objs {
            offsets.push(nvars);
            nvars += ctx.hom(u, u)?.dim();
        }
        Ok(CenterSystem {
            objs,
            offsets,
            nvars,
            rows: Vec::new(),
        })
    }

    fn index(&self, u: CatalogId) -> Option<usize> {
        self.objs.binary_search(&u).ok()
    }

    fn naturality(&mut self, ctx: &Context) -> Result<()> {
        let alg = &ctx.alg;
        let n = self.objs.len();
        let blocks: Vec<Vec<Vec<FieldElem>>> = (0..n * n)
            .into_par_iter()
            .map(|k| -> Result<Vec<Vec<FieldElem>>> {
                let (i, j) = (k / n, k % n);
                let (u, v) = (self.objs[i], self.objs[j]);
                let huv = ctx.hom(u, v)?;
                if huv.dim() == 0 {
                    return Ok(Vec::new());
                }
                let eu = ctx.hom(u, u)?.basis();
                let ev = ctx.hom(v, v)?.basis();
                let mut out = Vec::new();
                for f in huv.basis() {
                    // lambda_V . f - f . lambda_U = 0 in Hom(U, V)
                    let mut cols: Vec<(usize, Vec<FieldElem>)> = Vec::new();
                    for (a, e) in ev.iter().enumerate() {
                        cols.push((self.offsets[j] + a, huv.reduce(&f.then(alg, e)?)?));
                    }
                    for (a, e) in eu.iter().enumerate() {
                        let c = huv.reduce(&e.then(alg, &f)?)?;
                        let c = c.into_iter().map(|x| alg.field.neg(x)).collect();
                        cols.push((self.offsets[i] + a, c));
                    }
                    for row in 0..huv.dim() {
                        let mut r = vec![0; self.nvars];
                        for (col, c) in &cols {
                            r[*col] = alg.field.add(r[*col], c[row]);
                        }
                        out.push(r);
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        self.rows.extend(blocks.into_iter().flatten());
        Ok(())
    }

    /// `t . Sigma(lambda_U) = lambda_{U'} . t` for `U' = Sigma U` in the window.
    fn suspension(&mut self, ctx: &Context) -> Result<()> {
        let alg = &ctx.alg;
        for (i, &u) in self.objs.clone().iter().enumerate() {
            let u2 = u.shifted(1);
            let Some(j) = self.index(u2) else { continue };
            let t = shift_iso(alg, u, 1)?;
            let t = t.retarget(&t.dom, &ctx.complex(u2)?)?;
            let h = hom_kb(alg, &t.dom, &t.cod);
            let mut cols: Vec<(usize, Vec<FieldElem>)> = Vec::new();
            for (a, e) in ctx.hom(u, u)?.basis().iter().enumerate() {
                let se = e.shift(alg, 1).retarget(&t.dom, &t.dom)?;
                cols.push((self.offsets[i] + a, h.reduce(&se.then(alg, &t)?)?));
            }
            for (a, e) in ctx.hom(u2, u2)?.basis().iter().enumerate() {
                let c = h.reduce(&t.then(alg, e)?)?;
                cols.push((self.offsets[j] + a, c.into_iter().map(|x| alg.field.neg(x)).collect()));
            }
            for row in 0..h.dim() {
                let mut r = vec![0; self.nvars];
                for (col, c) in &cols {
                    r[*col] = alg.field.add(r[*col], c[row]);
                }
                self.rows.push(r);
            }
        }
        Ok(())
    }

    /// Residue of `lambda_U` vanishes at every object.
    fn radical(&mut self, ctx: &Context) -> Result<()> {
        for (i, &u) in self.objs.clone().iter().enumerate() {
            let e = ctx.end(u)?;
            let mut r = vec![0; self.nvars];
            r[self.offsets[i]..self.offsets[i] + e.dim()].copy_from_slice(&e.rho);
            self.rows.push(r);
        }
        Ok(())
    }

    fn solve(&self, ctx: &Context) -> Vec<Vec<FieldElem>> {
        if self.rows.is_empty() {
            return (0..self.nvars)
                .map(|i| {
                    let mut v = vec![0; self.nvars];
                    v[i] = 1;
                    v
                })
                .collect();
        }
        Mat::from_vectors(ctx.alg.field, self.nvars, &self.rows).kernel()
    }

    fn element(&self, v: &[FieldElem]) -> CentralElement {
        let mut values = BTreeMap::new();
        for (i, &u) in self.objs.iter().enumerate() {
            let end = if i + 1 < self.objs.len() { self.offsets[i + 1] } else { self.nvars };
            values.insert(u, v[self.offsets[i]..end].to_vec());
        }
        CentralElement { values }
    }
}

fn identity_element(ctx: &Context, objs: &[CatalogId]) -> Result<CentralElement> {
    let mut values = BTreeMap::new();
    for &u in objs {
        let h = ctx.hom(u, u)?;
        values.insert(u, h.reduce(&ChainMap::identity(&ctx.complex(u)?, &ctx.alg))?);
    }
    Ok(CentralElement { values })
}

fn center_impl(ctx: &Context, lo: i64, hi: i64, triangle: bool) -> Result<Center> {
    let objs = ctx.objects(lo, hi);
    ctx.warm(&objs)?;
    let mut sys = CenterSystem::new(ctx, objs.clone())?;
    sys.naturality(ctx)?;
    if triangle {
        sys.suspension(ctx)?;
    }
    let full = sys.solve(ctx);
    sys.radical(ctx)?;
    let rad = sys.solve(ctx);
    let split = rad.len() + 1 == full.len();
    let basis = if split {
        std::iter::once(identity_element(ctx, &objs))
            .chain(rad.iter().map(|v| Ok(sys.element(v))))
            .collect::<Result<_>>()?
    } else {
        full.iter().map(|v| sys.element(v)).collect()
    };
    Ok(Center {
        dim: full.len(),
        basis,
        split,
    })
}

/// Natural transformations of the identity, restricted to the window objects.
pub fn window_center(ctx: &Context, lo: i64, hi: i64) -> Result<Center> {
    center_impl(ctx, lo, hi, false)
}

/// The part of the window center compatible with suspension.
pub fn window_triangle_center(ctx: &Context, lo: i64, hi: i64) -> Result<Center> {
    center_impl(ctx, lo, hi, true)
}

/// Whether a family satisfies every naturality square in the window.
pub fn is_central(ctx: &Context, lo: i64, hi: i64, el: &CentralElement) -> Result<bool> {
    let objs = ctx.objects(lo, hi);
    let mut sys = CenterSystem::new(ctx, objs.clone())?;
    sys.naturality(ctx)?;
    let mut v = Vec::with_capacity(sys.nvars);
    for u in &objs {
        let val = el
            .values
            .get(u)
            .ok_or_else(|| Error::InvalidParams(format!("no value at {u}")))?;
        v.extend_from_slice(val);
    }
    if v.len() != sys.nvars {
        return Err(Error::DimensionMismatch {
            context: "central element",
            expected: sys.nvars,
            found: v.len(),
        });
    }
    let f = ctx.alg.field;
    Ok(sys
        .rows
        .iter()
        .all(|r| r.iter().zip(&v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))) == 0))
}

/// `delta(X)`: `Delta` on `X`, zero on every other window object (`r = 1`).
pub fn delta_element(ctx: &Context, lo: i64, hi: i64, x: CatalogId) -> Result<CentralElement> {
    let mut values = BTreeMap::new();
    for u in ctx.objects(lo, hi) {
        let h = ctx.hom(u, u)?;
        let v = if u == x {
            h.reduce(&delta_on(&ctx.alg, &ctx.complex(u)?)?)?
        } else {
            vec![0; h.dim()]
        };
        values.insert(u, v);
    }
    Ok(CentralElement { values })
}

/// Objectwise product `(lambda mu)_U = lambda_U . mu_U`.
pub fn central_product(ctx: &Context, x: &CentralElement, y: &CentralElement) -> Result<CentralElement> {
    let mut values = BTreeMap::new();
    for (u, a) in &x.values {
        let b = y
            .values
            .get(u)
            .ok_or_else(|| Error::InvalidParams(format!("no value at {u}")))?;
        let e = ctx.end(*u)?;
        values.insert(*u, e.mul(ctx.alg.field, a, b));
    }
    Ok(CentralElement { values })
}

pub fn center_report(ctx: &Context, lo: i64, hi: i64, triangle: bool) -> Result<(Center, WindowReport)> {
    let c = center_impl(ctx, lo, hi, triangle)?;
    let name = if triangle { "triangle-center" } else { "center" };
    let mut rep = WindowReport::new(name, ctx.params(lo, hi));
    rep.note("dim", c.dim);
    rep.note("split", c.split);
    let objs = ctx.objects(lo, hi);
    let xs = objs.iter().filter(|u| u.family() == 'X').count();
    rep.note("x_objects", xs);
    if !c.split {
        rep.fail(json!({"reason": "center does not split as identity plus radical"}));
    }
    for i in 1..c.basis.len() {
        for j in 1..c.basis.len() {
            let p = central_product(ctx, &c.basis[i], &c.basis[j])?;
            if p.values.values().any(|v| v.iter().any(|&x| x != 0)) {
                rep.fail(json!({"reason": "nonzero product of radical elements", "pair": [i, j]}));
            }
        }
    }
    if ctx.alg.r() == 1 && !triangle {
        for &x in objs.iter().filter(|u| u.family() == 'X') {
            if !is_central(ctx, lo, hi, &delta_element(ctx, lo, hi, x)?)? {
                rep.fail(json!({"reason": "delta(X) is not central", "object": x}));
            }
        }
    }
    Ok((c, rep))
}

/// Conjugation identity and suspension freeness for `X(m,n)` (`r = 1`).
pub fn check_orbit(ctx: &Context, m: i64, n: i64, ks: &[i64]) -> Result<WindowReport> {
    let alg = &ctx.alg;
    if alg.r() != 1 {
        return Err(Error::Unsupported("orbit check is for r = 1".into()));
    }
    let mut rep = WindowReport::new("orbit", ctx.params(m, n));
    let x = CatalogId::X { s: None, m, n };
    let x1 = x.shifted(1);
    let xc = ctx.complex(x)?;
    let x1c = ctx.complex(x1)?;
    let t = shift_iso(alg, x, 1)?.retarget(&Arc::new(xc.shift(alg, 1)), &x1c)?;
    let ti = catalog::shift_iso_inverse(alg, x, 1)?.retarget(&x1c, &t.dom)?;
    let d = delta_on(alg, &xc)?;
    let conj = ti.then(alg, &d.shift(alg, 1).retarget(&t.dom, &t.dom)?)?.then(alg, &t)?;
    let d1 = delta_on(alg, &x1c)?;
    let h1 = ctx.hom(x1, x1)?;
    if h1.reduce(&conj)? != h1.reduce(&d1)? {
        rep.fail(json!({"reason": "conjugation identity fails", "object": x}));
    }
    let ex = ctx.end(x)?;
    for &k in ks {
        let sk = Arc::new(xc.shift(alg, k));
        let iso = shift_iso(alg, x, k)?;
        if !is_homotopy_equivalence(alg, &iso)? {
            rep.fail(json!({"reason": "shift identification is not invertible", "k": k}));
        }
        if k != 0 {
            let a = hom_kb(alg, &xc, &sk);
            let b = hom_kb(alg, &sk, &xc);
            if isomorphic_indecomposables(alg, &ex, &a, &b)?.is_some() {
                rep.fail(json!({"reason": "Sigma^k X isomorphic to X", "k": k}));
            }
        }
    }
    rep.note("object", x);
    rep.note("shifts", ks);
    Ok(rep)
}

/// `cone(inc: X(n,n) -> X(m,n))` is homotopy equivalent to `X(m,n-1)` (`r = 1`),
/// or its analogue `X(s-(n-m), n, n) -> X(s,m,n)` for `r > 1`.
pub fn check_cone_identity(ctx: &Context, s: i64, m: i64, n: i64) -> Result<bool> {
    let alg = &ctx.alg;
    let r = alg.r();
    let big = CatalogId::x(r, s, m, n);
    let small = big.truncate_ge(r, n).expect("nonempty");
    let quo = big.truncate_le(r, n - 1).expect("m < n");
    let inc = catalog::common_identity(alg, &ctx.complex(small)?, &ctx.complex(big)?)?;
    let c = cone(alg, &inc)?;
    let h = hom_kb(alg, &c.cone, &ctx.complex(quo)?);
    Ok(crate::homotopy::find_homotopy_equivalence(alg, &h, 16, 0)?.is_some())
}

/// Almost-vanishing of every `Delta_{m,n}` whose support sits at least one
/// degree inside the window (`r = 1`).
pub fn check_almost_vanishing_all(ctx: &Context, lo: i64, hi: i64) -> Result<WindowReport> {
    if ctx.alg.r() != 1 {
        return Err(Error::Unsupported("almost-vanishing endomorphisms exist for r = 1".into()));
    }
    let mut rep = WindowReport::new("almost-vanishing", ctx.params(lo, hi));
    let xs: Vec<CatalogId> = ctx
        .objects(lo + 1, hi - 1)
        .into_iter()
        .filter(|u| u.family() == 'X')
        .collect();
    for &x in &xs {
        let (m, n) = x.support();
        let sub = check_almost_vanishing(ctx, m, n, lo, hi)?;
        for w in sub.witnesses {
            rep.fail(json!({"object": x, "detail": w}));
        }
    }
    rep.note("objects", xs.len());
    Ok(rep)
}

/// Conjugation identity and suspension freeness for every X-object of the window (`r = 1`).
pub fn check_orbits(ctx: &Context, lo: i64, hi: i64, ks: &[i64]) -> Result<WindowReport> {
    let mut rep = WindowReport::new("orbit", ctx.params(lo, hi));
    let xs: Vec<CatalogId> = ctx
        .objects(lo, hi)
        .into_iter()
        .filter(|u| u.family() == 'X')
        .collect();
    for &x in &xs {
        let (m, n) = x.support();
        let sub = check_orbit(ctx, m, n, ks)?;
        for w in sub.witnesses {
            rep.fail(json!({"object": x, "detail": w}));
        }
    }
    rep.note("objects", xs.len());
    rep.note("shifts", ks);
    Ok(rep)
}

/// `check_cone_identity` on `samples` triples `(s, m, n)`, `lo <= m < n <= hi`,
/// drawn with a seeded generator.
pub fn check_cone_identities(ctx: &Context, lo: i64, hi: i64, samples: usize, seed: u64) -> Result<WindowReport> {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;
    let mut rep = WindowReport::new("cone-identity", ctx.params(lo, hi));
    if hi <= lo {
        return Err(Error::InvalidParams("cone identities need a window of width at least 2".into()));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let r = ctx.alg.r() as i64;
    let mut tried = Vec::new();
    for _ in 0..samples {
        let m = rng.gen_range(lo..hi);
        let n = rng.gen_range(m + 1..=hi);
        let s = rng.gen_range(0..r);
        let ok = check_cone_identity(ctx, s, m, n)?;
        let id = CatalogId::x(ctx.alg.r(), s, m, n);
        if !ok {
            rep.fail(json!({"object": id}));
        }
        tried.push(id);
    }
    rep.note("sampled", tried);
    Ok(rep)
}

/// Full endomorphism table against the catalog invariants: `dim End = 2`
/// with `Delta^2` null on X-objects when `r = 1`, and 1 otherwise.
pub fn check_end_rings(ctx: &Context, lo: i64, hi: i64) -> Result<WindowReport> {
    let alg = &ctx.alg;
    let mut rep = WindowReport::new("end-rings", ctx.params(lo, hi));
    let objs = ctx.objects(lo, hi);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &u in &objs {
        let h = ctx.hom(u, u)?;
        *counts.entry(h.dim()).or_default() += 1;
        let two = alg.r() == 1 && u.family() == 'X';
        if h.dim() != if two { 2 } else { 1 } {
            rep.fail(json!({"object": u, "dim": h.dim()}));
            continue;
        }
        if two {
            let d = delta_on(alg, &ctx.complex(u)?)?;
            if h.is_null(&d)? || !h.is_null(&d.then(alg, &d)?)? {
                rep.fail(json!({"object": u, "reason": "Delta must be nonzero with null square"}));
            }
        }
    }
    rep.note(
        "dims",
        counts.iter().map(|(k, v)| (k.to_string(), *v)).collect::<BTreeMap<_, _>>(),
    );
    Ok(rep)
}

/// Dimension and nilpotency of the center of the algebra `A` itself.
pub fn check_algebra_center(ctx: &Context) -> Result<WindowReport> {
    let alg = &ctx.alg;
    let mut rep = WindowReport::new("algebra-center", ctx.params(0, 0));
    let basis = alg.center_basis();
    let one = alg.one_full();
    let space = Subspace::spanned_by(alg.field, one.len(), &basis);
    rep.note("dim", basis.len());
    let want = if alg.r() == 1 { 2 } else { 1 };
    if basis.len() != want || !space.contains(&one) {
        rep.fail(json!({"reason": "unexpected center", "dim": basis.len()}));
    }
    if alg.r() == 1 {
        // remove the scalar part of each basis element and look for z with z^2 = 0
        let e0 = alg.pres.idempotent(0);
        let ok = basis.iter().any(|b| {
            let z: Vec<FieldElem> = b
                .iter()
                .zip(&one)
                .map(|(&x, &o)| alg.field.sub(x, alg.field.mul(b[e0], o)))
                .collect();
            z.iter().any(|&x| x != 0) && alg.mul_full(&z, &z).iter().all(|&x| x == 0)
        });
        rep.note("nilpotent_generator", ok);
        if !ok {
            rep.fail(json!({"reason": "no nilpotent generator"}));
        }
    }
    Ok(rep)
}
