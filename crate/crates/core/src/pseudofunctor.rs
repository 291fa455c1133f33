//! Scalar models of pseudo-identities on the spanning morphisms of a window:
//! functoriality relations, trivialization by per-object scalars, degree
//! normalization of connecting elements and the `eta` construction for `r = 1`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{delta_on, shift_iso, CatalogId};
use crate::complex::ChainMap;
use crate::error::{Error, Result};
use crate::exactlin::{Field, FieldElem, Mat, Subspace};
use crate::pathalg::Algebra;
use crate::spanmorph::{enumerate_spanning, MorphId};
use crate::verify::{Context, Verdict};

pub const SCALAR_SCHEMA: &str = "nakayama.scalars/1";
pub const TRIVIALIZATION_SCHEMA: &str = "nakayama.trivialization/1";

/// Nonzero scalars on the spanning morphisms of a window, plus optional
/// connecting elements of the center of `A` indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarSystem {
    pub window: [i64; 2],
    pub scalars: BTreeMap<MorphId, FieldElem>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub connecting: BTreeMap<i64, Vec<FieldElem>>,
}

impl ScalarSystem {
    pub fn ones(r: usize, big_n: usize, lo: i64, hi: i64) -> Self {
        ScalarSystem {
            window: [lo, hi],
            scalars: enumerate_spanning(r, big_n, lo, hi)
                .into_iter()
                .map(|m| (m, 1))
                .collect(),
            connecting: BTreeMap::new(),
        }
    }

    /// `sys(f) = c(target) c(source)^{-1}`.
    pub fn coboundary(alg: &Algebra, lo: i64, hi: i64, c: &BTreeMap<CatalogId, FieldElem>) -> Result<Self> {
        let f = alg.field;
        let mut sys = Self::ones(alg.r(), alg.n(), lo, hi);
        for (m, v) in sys.scalars.iter_mut() {
            let (s, t) = m.check(alg.r(), alg.n())?;
            let (cs, ct) = (lookup(c, s)?, lookup(c, t)?);
            *v = f.mul(ct, f.inv(cs).ok_or_else(|| Error::Constraint(format!("zero scalar at {s}")))?);
        }
        Ok(sys)
    }

    /// Checks totality and that every scalar is a nonzero residue.
    pub fn validate(&self, alg: &Algebra) -> Result<()> {
        let want = enumerate_spanning(alg.r(), alg.n(), self.window[0], self.window[1]);
        if want.len() != self.scalars.len() || want.iter().any(|m| !self.scalars.contains_key(m)) {
            return Err(Error::Constraint(format!(
                "scalar system must cover exactly the {} spanning morphisms of the window",
                want.len()
            )));
        }
        let p = alg.field.prime();
        for (m, &v) in &self.scalars {
            if v == 0 || v >= p {
                return Err(Error::Constraint(format!("scalar at {m} must be a nonzero residue mod {p}")));
            }
        }
        for (n, l) in &self.connecting {
            if l.len() != alg.pres.dim() || alg.inverse_full(l).is_none() {
                return Err(Error::Constraint(format!("connecting element at degree {n} is not invertible")));
            }
        }
        Ok(())
    }
}

fn lookup(c: &BTreeMap<CatalogId, FieldElem>, x: CatalogId) -> Result<FieldElem> {
    c.get(&x)
        .copied()
        .ok_or_else(|| Error::InvalidParams(format!("no scalar for {x}")))
}

/// A product of generator scalars with integer exponents, sorted by generator.
pub type Monomial = Vec<(usize, i32)>;

fn mono_mul(a: &[(usize, i32)], b: &[(usize, i32)], sign: i32) -> Monomial {
    let mut m: BTreeMap<usize, i32> = a.iter().copied().collect();
    for &(g, e) in b {
        *m.entry(g).or_default() += sign * e;
    }
    m.into_iter().filter(|&(_, e)| e != 0).collect()
}

fn mono_eval(field: Field, m: &Monomial, vals: &[FieldElem]) -> FieldElem {
    m.iter().fold(1, |acc, &(g, e)| {
        let v = if e < 0 {
            field.inv(vals[g]).expect("nonzero scalar")
        } else {
            vals[g]
        };
        field.mul(acc, field.pow(v, e.unsigned_abs() as u64))
    })
}

/// Monomial identities every functorial scalar action must satisfy, read off
/// from linear dependencies between composites of spanning morphisms.
pub struct Relations {
    pub window: [i64; 2],
    pub generators: Vec<MorphId>,
    /// Generators whose class is zero; their scalars are unconstrained.
    pub null: Vec<bool>,
    pub endpoints: Vec<(CatalogId, CatalogId)>,
    pub relations: Vec<Monomial>,
}

struct Word {
    class: Vec<FieldElem>,
    mono: Monomial,
}

impl Relations {
    pub fn extract(ctx: &Context, lo: i64, hi: i64) -> Result<Self> {
        let alg = &ctx.alg;
        let generators = enumerate_spanning(alg.r(), alg.n(), lo, hi);
        let realized: Vec<(CatalogId, CatalogId, ChainMap, bool)> = generators
            .par_iter()
            .map(|m| {
                let (s, t, f) = ctx.morph(m)?;
                let null = ctx.hom(s, t)?.is_null(&f)?;
                Ok((s, t, f, null))
            })
            .collect::<Result<_>>()?;
        let mut out_edges: HashMap<CatalogId, Vec<usize>> = HashMap::new();
        for (i, (s, _, _, null)) in realized.iter().enumerate() {
            if !null {
                out_edges.entry(*s).or_default().push(i);
            }
        }
        let objs = ctx.objects(lo, hi);
        let per_source: Vec<Vec<Monomial>> = objs
            .par_iter()
            .map(|&u| -> Result<Vec<Monomial>> {
                let mut found = Vec::new();
                let mut words: HashMap<CatalogId, Vec<Word>> = HashMap::new();
                let huu = ctx.hom(u, u)?;
                let id = huu.reduce(&ChainMap::identity(&ctx.complex(u)?, alg))?;
                words.insert(u, vec![Word { class: id, mono: Vec::new() }]);
                let mut queue = VecDeque::from([(u, 0usize)]);
                while let Some((v, k)) = queue.pop_front() {
                    let (cls, mono) = {
                        let w = &words[&v][k];
                        (w.class.clone(), w.mono.clone())
                    };
                    let f = ctx.hom(u, v)?.combine(&cls);
                    for &g in out_edges.get(&v).map_or(&[][..], |e| e.as_slice()) {
                        let (_, w, ref gm, _) = realized[g];
                        let huw = ctx.hom(u, w)?;
                        if huw.dim() == 0 {
                            continue;
                        }
                        let c = huw.reduce(&f.then(alg, gm)?)?;
                        if c.iter().all(|&x| x == 0) {
                            continue;
                        }
                        let m = mono_mul(&mono, &[(g, 1)], 1);
                        let basis = words.entry(w).or_default();
                        let cols: Vec<Vec<FieldElem>> = basis.iter().map(|b| b.class.clone()).collect();
                        let coeffs = if cols.is_empty() {
                            None
                        } else {
                            Mat::from_vectors(alg.field, cols.len(), &transpose(&cols, huw.dim()))
                                .solve(&c)?
                                .map(|s| s.particular)
                        };
                        match coeffs {
                            None => {
                                basis.push(Word { class: c, mono: m });
                                queue.push_back((w, basis.len() - 1));
                            }
                            Some(a) => {
                                for (i, &ai) in a.iter().enumerate() {
                                    if ai != 0 {
                                        let rel = mono_mul(&m, &basis[i].mono, -1);
                                        if !rel.is_empty() {
                                            found.push(rel);
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                Ok(found)
            })
            .collect::<Result<_>>()?;
        let mut seen = HashSet::new();
        let mut relations = Vec::new();
        for rel in per_source.into_iter().flatten() {
            let canon = canonical_sign(rel);
            if seen.insert(canon.clone()) {
                relations.push(canon);
            }
        }
        relations.sort();
        Ok(Relations {
            window: [lo, hi],
            generators,
            null: realized.iter().map(|x| x.3).collect(),
            endpoints: realized.iter().map(|x| (x.0, x.1)).collect(),
            relations,
        })
    }

    fn values(&self, sys: &ScalarSystem) -> Result<Vec<FieldElem>> {
        if sys.window != self.window {
            return Err(Error::InvalidParams("scalar system and relations use different windows".into()));
        }
        self.generators
            .iter()
            .map(|m| {
                sys.scalars
                    .get(m)
                    .copied()
                    .ok_or_else(|| Error::Constraint(format!("no scalar for {m}")))
            })
            .collect()
    }

    /// Generators that occur in at least one relation.
    pub fn constrained(&self) -> Vec<bool> {
        let mut c = vec![false; self.generators.len()];
        for r in &self.relations {
            for &(g, _) in r {
                c[g] = true;
            }
        }
        c
    }
}

/// `rows` are column vectors of length `len`; returns the `len x rows.len()` matrix rows.
fn transpose(cols: &[Vec<FieldElem>], len: usize) -> Vec<Vec<FieldElem>> {
    (0..len).map(|i| cols.iter().map(|c| c[i]).collect()).collect()
}

/// A relation and its inverse express the same constraint.
fn canonical_sign(m: Monomial) -> Monomial {
    if m.first().is_some_and(|&(_, e)| e < 0) {
        m.into_iter().map(|(g, e)| (g, -e)).collect()
    } else {
        m
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub verdict: Verdict,
    pub relations: usize,
    /// First violated relations as `morphism -> exponent`, with the value found.
    pub violations: Vec<(BTreeMap<MorphId, i32>, FieldElem)>,
}

const MAX_VIOLATIONS: usize = 8;

pub fn check_consistency(alg: &Algebra, rels: &Relations, sys: &ScalarSystem) -> Result<ConsistencyReport> {
    sys.validate(alg)?;
    let vals = rels.values(sys)?;
    let mut violations = Vec::new();
    for r in &rels.relations {
        let v = mono_eval(alg.field, r, &vals);
        if v != 1 {
            if violations.len() < MAX_VIOLATIONS {
                let named = r.iter().map(|&(g, e)| (rels.generators[g], e)).collect();
                violations.push((named, v));
            } else {
                break;
            }
        }
    }
    Ok(ConsistencyReport {
        verdict: Verdict::from_bool(violations.is_empty()),
        relations: rels.relations.len(),
        violations,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trivialization {
    pub schema: String,
    pub window: [i64; 2],
    /// `delta(U)`, with `delta = 1` at the least object of each component.
    pub scalars: BTreeMap<CatalogId, FieldElem>,
    pub components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum TrivializeOutcome {
    Trivialized(Trivialization),
    /// A closed walk of generators along which the scalars do not cancel;
    /// `true` marks a generator traversed backwards.
    Obstructed { cycle: Vec<(MorphId, bool)>, product: FieldElem },
}

/// Finds `delta` with `delta(V) sys(f) delta(U)^{-1} = 1` on every non-null generator.
pub fn trivialize(alg: &Algebra, rels: &Relations, sys: &ScalarSystem) -> Result<TrivializeOutcome> {
    let f = alg.field;
    let vals = rels.values(sys)?;
    let mut adj: BTreeMap<CatalogId, Vec<(usize, CatalogId, bool)>> = BTreeMap::new();
    for (g, &(s, t)) in rels.endpoints.iter().enumerate() {
        adj.entry(s).or_default();
        adj.entry(t).or_default();
        if rels.null[g] || s == t {
            continue;
        }
        adj.get_mut(&s).expect("inserted").push((g, t, false));
        adj.get_mut(&t).expect("inserted").push((g, s, true));
    }
    let mut delta: BTreeMap<CatalogId, FieldElem> = BTreeMap::new();
    // parent edge toward the root
    let mut parent: HashMap<CatalogId, (usize, CatalogId, bool)> = HashMap::new();
    let mut depth: HashMap<CatalogId, usize> = HashMap::new();
    let mut components = 0;
    let nodes: Vec<CatalogId> = adj.keys().copied().collect();
    for &root in &nodes {
        if delta.contains_key(&root) {
            continue;
        }
        components += 1;
        delta.insert(root, 1);
        depth.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &(g, v, back) in &adj[&u] {
                if delta.contains_key(&v) {
                    continue;
                }
                let du = delta[&u];
                // forward edge u -> v: delta(v) = delta(u) sys^{-1}; backward: delta(v) = delta(u) sys
                let dv = if back {
                    f.mul(du, vals[g])
                } else {
                    f.mul(du, f.inv(vals[g]).expect("nonzero"))
                };
                delta.insert(v, dv);
                parent.insert(v, (g, u, back));
                depth.insert(v, depth[&u] + 1);
                queue.push_back(v);
            }
        }
    }
    for (g, &(s, t)) in rels.endpoints.iter().enumerate() {
        if rels.null[g] {
            continue;
        }
        let val = f.mul(f.mul(delta[&t], vals[g]), f.inv(delta[&s]).expect("nonzero"));
        if val != 1 {
            return Ok(TrivializeOutcome::Obstructed {
                cycle: cycle_through(&parent, &depth, g, s, t, &rels.generators),
                product: val,
            });
        }
    }
    Ok(TrivializeOutcome::Trivialized(Trivialization {
        schema: TRIVIALIZATION_SCHEMA.into(),
        window: rels.window,
        scalars: delta,
        components,
    }))
}

/// The closed walk `s -g-> t -> ... -> lca -> ... -> s` through tree edges.
fn cycle_through(
    parent: &HashMap<CatalogId, (usize, CatalogId, bool)>,
    depth: &HashMap<CatalogId, usize>,
    g: usize,
    s: CatalogId,
    t: CatalogId,
    names: &[MorphId],
) -> Vec<(MorphId, bool)> {
    let (mut a, mut b) = (t, s);
    let mut up = Vec::new();
    let mut down = Vec::new();
    while a != b {
        if depth[&a] >= depth[&b] {
            let (e, p, back) = parent[&a];
            // walking from a toward the root reverses the tree edge's direction
            up.push((names[e], !back));
            a = p;
        } else {
            let (e, p, back) = parent[&b];
            down.push((names[e], back));
            b = p;
        }
    }
    let mut cycle = vec![(names[g], false)];
    cycle.extend(up);
    cycle.extend(down.into_iter().rev());
    cycle
}

/// Draws `c(U)` uniformly from the nonzero residues for every window object.
pub fn random_cochain(alg: &Algebra, lo: i64, hi: i64, rng: &mut ChaCha8Rng) -> BTreeMap<CatalogId, FieldElem> {
    let p = alg.field.prime();
    crate::catalog::enumerate(alg.r(), alg.n(), lo, hi)
        .into_iter()
        .map(|u| (u, rng.gen_range(1..p)))
        .collect()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Multiplies the scalar of one constrained, non-null generator by a factor other than 1.
pub fn perturb(alg: &Algebra, rels: &Relations, sys: &mut ScalarSystem, rng: &mut ChaCha8Rng) -> Option<(MorphId, FieldElem)> {
    let c = rels.constrained();
    let pool: Vec<usize> = (0..rels.generators.len()).filter(|&g| c[g] && !rels.null[g]).collect();
    if pool.is_empty() {
        return None;
    }
    let g = pool[rng.gen_range(0..pool.len())];
    let z = rng.gen_range(2..alg.field.prime());
    let m = rels.generators[g];
    let v = sys.scalars.get_mut(&m).expect("total system");
    *v = alg.field.mul(*v, z);
    Some((m, z))
}

/// `a_0 = 1`, `a_{n+1} = a_n lambda_n`, extended downward by inverses.
/// Entries are full coordinate vectors in `A`.
pub fn normalize_connecting(alg: &Algebra, lambda: &BTreeMap<i64, Vec<FieldElem>>) -> Result<BTreeMap<i64, Vec<FieldElem>>> {
    let center = Subspace::spanned_by(alg.field, alg.pres.dim(), &alg.center_basis());
    let mut inv = BTreeMap::new();
    for (&n, l) in lambda {
        if l.len() != alg.pres.dim() || !center.contains(l) {
            return Err(Error::Constraint(format!("lambda_{n} is not central")));
        }
        let i = alg
            .inverse_full(l)
            .ok_or_else(|| Error::Constraint(format!("lambda_{n} is not invertible")))?;
        inv.insert(n, i);
    }
    let mut a = BTreeMap::new();
    a.insert(0, alg.one_full());
    let Some((&lo, _)) = lambda.first_key_value() else {
        return Ok(a);
    };
    let hi = *lambda.last_key_value().expect("nonempty").0;
    let one = alg.one_full();
    for n in 0..=hi.max(-1) {
        let l = lambda.get(&n).unwrap_or(&one);
        let next = alg.mul_full(&a[&n], l);
        a.insert(n + 1, next);
    }
    for n in (lo.min(0)..0).rev() {
        let li = inv.get(&n).unwrap_or(&one);
        let prev = alg.mul_full(&a[&(n + 1)], li);
        a.insert(n, prev);
    }
    for (&n, l) in lambda {
        let ai = alg.inverse_full(&a[&n]).expect("product of units");
        if alg.mul_full(&ai, &a[&(n + 1)]) != *l {
            return Err(Error::Constraint(format!("telescoping identity fails at {n}")));
        }
    }
    Ok(a)
}

/// Window `phi` for a given `b`: along each suspension orbit segment,
/// `phi(X(m,n)) = phi(X(m-1,n-1)) + b(X(m,n))`, anchored at 0 on the segment's
/// most suspended member.
pub fn telescope_phi(alg: &Algebra, lo: i64, hi: i64, b: &BTreeMap<CatalogId, FieldElem>) -> BTreeMap<CatalogId, FieldElem> {
    let f = alg.field;
    let mut xs: Vec<CatalogId> = crate::catalog::enumerate(alg.r(), alg.n(), lo, hi)
        .into_iter()
        .filter(|u| u.family() == 'X')
        .collect();
    // increasing m within an orbit: predecessors come first
    xs.sort_by_key(|u| u.support().0);
    let mut phi = BTreeMap::new();
    for u in xs {
        let prev = phi.get(&u.shifted(1)).copied();
        let v = match prev {
            None => 0,
            Some(p) => f.add(p, b.get(&u).copied().unwrap_or(0)),
        };
        phi.insert(u, v);
    }
    phi
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EtaReport {
    pub verdict: Verdict,
    pub phi: BTreeMap<CatalogId, FieldElem>,
    /// Objects whose square fails.
    pub failures: Vec<CatalogId>,
}

/// Checks `eta_{U'} . t . Sigma(lambda_U) = t . Sigma(eta_U)` with
/// `lambda = 1 + b Delta`, `eta = 1 + phi Delta` on X-objects, for every
/// window object `U` whose shift `U'` is in the window.
pub fn verify_eta(
    ctx: &Context,
    lo: i64,
    hi: i64,
    b: &BTreeMap<CatalogId, FieldElem>,
    phi: &BTreeMap<CatalogId, FieldElem>,
) -> Result<Vec<CatalogId>> {
    let alg = &ctx.alg;
    if alg.r() != 1 {
        return Err(Error::Unsupported("the eta construction is for r = 1".into()));
    }
    let objs = ctx.objects(lo, hi);
    let endo = |u: CatalogId, coeff: FieldElem| -> Result<ChainMap> {
        let c = ctx.complex(u)?;
        let id = ChainMap::identity(&c, alg);
        if u.family() == 'X' && coeff != 0 {
            id.add(alg, &delta_on(alg, &c)?.scale(alg, coeff))
        } else {
            Ok(id)
        }
    };
    let res: Vec<Option<CatalogId>> = objs
        .par_iter()
        .map(|&u| -> Result<Option<CatalogId>> {
            let u2 = u.shifted(1);
            if objs.binary_search(&u2).is_err() {
                return Ok(None);
            }
            let get = |m: &BTreeMap<CatalogId, FieldElem>, x| m.get(&x).copied().unwrap_or(0);
            let t = shift_iso(alg, u, 1)?;
            let t = t.retarget(&t.dom, &ctx.complex(u2)?)?;
            let sl = endo(u, get(b, u))?.shift(alg, 1).retarget(&t.dom, &t.dom)?;
            let se = endo(u, get(phi, u))?.shift(alg, 1).retarget(&t.dom, &t.dom)?;
            let lhs = sl.then(alg, &t)?.then(alg, &endo(u2, get(phi, u2))?)?;
            let rhs = se.then(alg, &t)?;
            let h = crate::homotopy::hom_kb(alg, &t.dom, &t.cod);
            Ok((h.reduce(&lhs)? != h.reduce(&rhs)?).then_some(u))
        })
        .collect::<Result<_>>()?;
    Ok(res.into_iter().flatten().collect())
}

pub fn eta_from_differences(ctx: &Context, lo: i64, hi: i64, b: &BTreeMap<CatalogId, FieldElem>) -> Result<EtaReport> {
    let phi = telescope_phi(&ctx.alg, lo, hi, b);
    let failures = verify_eta(ctx, lo, hi, b, &phi)?;
    Ok(EtaReport {
        verdict: Verdict::from_bool(failures.is_empty()),
        phi,
        failures,
    })
}

/// Seeded round trip: `samples` random coboundary systems must be consistent
/// and trivialize back to their cochain (one free scalar per component), and
/// the same systems with one constrained generator perturbed must be inconsistent.
pub fn check_trivialization_round_trip(
    ctx: &Context,
    lo: i64,
    hi: i64,
    samples: usize,
    seed: u64,
) -> Result<crate::verify::WindowReport> {
    use serde_json::json;
    let alg = &ctx.alg;
    let f = alg.field;
    let mut rep = crate::verify::WindowReport::new("trivialization", ctx.params(lo, hi));
    let rels = Relations::extract(ctx, lo, hi)?;
    let mut rng = seeded_rng(seed);
    let (mut consistent, mut recovered, mut detected) = (0, 0, 0);
    for i in 0..samples {
        let c = random_cochain(alg, lo, hi, &mut rng);
        let mut sys = ScalarSystem::coboundary(alg, lo, hi, &c)?;
        if check_consistency(alg, &rels, &sys)?.verdict == Verdict::Pass {
            consistent += 1;
        } else {
            rep.fail(json!({"sample": i, "reason": "coboundary reported inconsistent"}));
        }
        match trivialize(alg, &rels, &sys)? {
            TrivializeOutcome::Trivialized(t) => {
                let same = |u: &CatalogId| f.mul(t.scalars[u], c[u]);
                let ok = rels
                    .endpoints
                    .iter()
                    .zip(&rels.null)
                    .all(|((s, tt), &null)| null || same(s) == same(tt));
                if ok {
                    recovered += 1;
                } else {
                    rep.fail(json!({"sample": i, "reason": "trivialization is not the cochain"}));
                }
            }
            TrivializeOutcome::Obstructed { cycle, .. } => {
                rep.fail(json!({"sample": i, "reason": "coboundary obstructed", "cycle": cycle}));
            }
        }
        match perturb(alg, &rels, &mut sys, &mut rng) {
            Some((m, z)) => {
                if check_consistency(alg, &rels, &sys)?.verdict == Verdict::Fail {
                    detected += 1;
                } else {
                    rep.fail(json!({"sample": i, "reason": "perturbation not detected", "morphism": m, "factor": z}));
                }
            }
            None => rep.fail(json!({"sample": i, "reason": "no constrained generator to perturb"})),
        }
    }
    let constrained = rels.constrained();
    rep.note("generators", rels.generators.len());
    rep.note("null_generators", rels.null.iter().filter(|&&x| x).count());
    rep.note(
        "unconstrained_generators",
        (0..constrained.len())
            .filter(|&g| !constrained[g] && !rels.null[g])
            .map(|g| rels.generators[g])
            .collect::<Vec<_>>(),
    );
    rep.note("relations", rels.relations.len());
    rep.note("samples", samples);
    rep.note("consistent", consistent);
    rep.note("recovered", recovered);
    rep.note("perturbations_detected", detected);
    Ok(rep)
}
