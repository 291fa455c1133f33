//! The spanning morphisms between catalog objects: inclusions, projections,
//! connections and the eleven mixed classes.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::catalog::{common_identity, CatalogId};
use crate::complex::{ChainMap, ProjComplex};
use crate::error::{Error, Result};
use crate::exactlin::{Mat, Subspace};
use crate::homotopy::{hom_kb, HomSpace};
use crate::idsyntax::{lex, vertex};
use crate::pathalg::{AlgElem, Algebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    I,
    J,
    IPrime,
    Iota,
    Xi,
    Pi,
    PiPrime,
    P,
    Q,
    Zeta,
    C,
    Mx1,
    Mx2,
    Mx3,
    Mx4,
    Mx5,
    Mx6,
    Mx7,
    Mx8,
    Mx9,
    Mx10,
    Mx11,
}

use Family::*;

pub const FAMILIES: [Family; 22] = [
    I, J, IPrime, Iota, Xi, Pi, PiPrime, P, Q, Zeta, C, Mx1, Mx2, Mx3, Mx4, Mx5, Mx6, Mx7, Mx8,
    Mx9, Mx10, Mx11,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Inclusion,
    Projection,
    Connection,
    Mixed,
}

// integer keys in print order; "s" is optional and only used when r > 1
const L_: &str = "l";
const M_: &str = "m";
const M2: &str = "m'";
const N_: &str = "n";
const N2: &str = "n'";

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            I => "i",
            J => "j",
            IPrime => "i'",
            Iota => "iota",
            Xi => "xi",
            Pi => "pi",
            PiPrime => "pi'",
            P => "p",
            Q => "q",
            Zeta => "zeta",
            C => "c",
            Mx1 => "mx.I",
            Mx2 => "mx.II",
            Mx3 => "mx.III",
            Mx4 => "mx.IV",
            Mx5 => "mx.V",
            Mx6 => "mx.VI",
            Mx7 => "mx.VII",
            Mx8 => "mx.VIII",
            Mx9 => "mx.IX",
            Mx10 => "mx.X",
            Mx11 => "mx.XI",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        FAMILIES.iter().copied().find(|f| f.name() == s)
    }

    pub fn kind(self) -> Kind {
        match self {
            I | J | IPrime | Iota | Xi => Kind::Inclusion,
            Pi | PiPrime | P | Q | Zeta => Kind::Projection,
            C => Kind::Connection,
            _ => Kind::Mixed,
        }
    }

    fn int_keys(self) -> &'static [&'static str] {
        match self {
            I | Pi => &[M_, N_],
            Xi | Zeta | Mx11 => &[M_],
            C => &[L_, M_, N_],
            Mx1 | Mx7 => &[M_, M2, N_],
            Mx3 | Mx6 => &[M_, N_, N2],
            Mx5 => &[M_, M2, N_, N2],
            _ => &[M_, N_],
        }
    }

    fn vertex_keys(self) -> &'static [&'static str] {
        match self {
            I | Pi => &[],
            J | PiPrime => &["a"],
            IPrime | P => &["b"],
            Iota | Xi | Q | Zeta | C | Mx1 | Mx2 | Mx3 | Mx4 => &["a", "b"],
            _ => &["a", "b", "a'", "b'"],
        }
    }

    fn has_s(self) -> bool {
        matches!(self, I | Pi)
    }
}

/// Parameters not used by the family are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphId {
    pub family: Family,
    pub s: Option<usize>,
    pub l: i64,
    pub m: i64,
    pub m2: i64,
    pub n: i64,
    pub n2: i64,
    pub a: usize,
    pub b: usize,
    pub a2: usize,
    pub b2: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Comp {
    Id,
    Arrow,
    /// identity when the two vertices agree, the unnamed arrow otherwise
    ArrowOrId,
}

fn divides(r: usize, x: i64) -> bool {
    x.rem_euclid(r as i64) == 0
}

impl MorphId {
    pub fn new(family: Family) -> Self {
        MorphId {
            family,
            s: None,
            l: 0,
            m: 0,
            m2: 0,
            n: 0,
            n2: 0,
            a: 0,
            b: 0,
            a2: 0,
            b2: 0,
        }
    }

    fn int_slot(&mut self, key: &str) -> &mut i64 {
        match key {
            L_ => &mut self.l,
            M_ => &mut self.m,
            M2 => &mut self.m2,
            N_ => &mut self.n,
            _ => &mut self.n2,
        }
    }

    fn int_value(&self, key: &str) -> i64 {
        match key {
            L_ => self.l,
            M_ => self.m,
            M2 => self.m2,
            N_ => self.n,
            _ => self.n2,
        }
    }

    fn vertex_slot(&mut self, key: &str) -> &mut usize {
        match key {
            "a" => &mut self.a,
            "b" => &mut self.b,
            "a'" => &mut self.a2,
            _ => &mut self.b2,
        }
    }

    fn vertex_value(&self, key: &str) -> usize {
        match key {
            "a" => self.a,
            "b" => self.b,
            "a'" => self.a2,
            _ => self.b2,
        }
    }

    pub fn kind(&self) -> Kind {
        self.family.kind()
    }

    /// Source object as displayed (not canonicalized).
    pub fn source(&self, r: usize) -> CatalogId {
        let MorphId { s, l, m, n, a, b, .. } = *self;
        let s = s.unwrap_or(0) as i64;
        match self.family {
            I | Pi => CatalogId::x(r, s, m, n),
            J => CatalogId::x(r, r as i64 - 1, m, n),
            IPrime | Iota | P => CatalogId::R { m, n, b },
            Xi => CatalogId::L { m, n: m, a: b },
            PiPrime | Mx1 | Mx2 => CatalogId::L { m, n, a },
            Q | Mx5 | Mx6 | Mx7 | Mx8 | Mx9 => CatalogId::B { m, n, a, b },
            Zeta | Mx10 | Mx11 => CatalogId::Z { m, a, b },
            C => CatalogId::L { m: l, n: m, a },
            Mx3 | Mx4 => CatalogId::R { m, n, b: a },
        }
    }

    /// Target object as displayed (not canonicalized).
    pub fn target(&self, r: usize) -> CatalogId {
        let MorphId { s, m, m2, n, n2, a, b, a2, b2, .. } = *self;
        let s = s.unwrap_or(0) as i64;
        match self.family {
            I => CatalogId::x(r, s + 1, m - 1, n),
            J => CatalogId::L { m: m - 1, n, a },
            IPrime => CatalogId::R { m: m - 1, n, b },
            Iota => CatalogId::B { m: m - 1, n, a, b },
            Xi => CatalogId::Z { m: m - 1, a, b },
            Pi => CatalogId::x(r, s, m, n - 1),
            PiPrime => CatalogId::L { m, n: n - 1, a },
            P => CatalogId::x(r, n - m - 1, m, n - 1),
            Q => CatalogId::L { m, n: n - 1, a },
            Zeta => CatalogId::L { m, n: m, a },
            C => CatalogId::R { m, n, b },
            Mx1 => CatalogId::L { m: m2, n, a: b },
            Mx2 => CatalogId::L { m, n, a: b },
            Mx3 => CatalogId::R { m, n: n2, b },
            Mx4 => CatalogId::R { m, n, b },
            Mx5 => CatalogId::B { m: m2, n: n2, a: a2, b: b2 },
            Mx6 => CatalogId::B { m, n: n2, a: a2, b: b2 },
            Mx7 => CatalogId::B { m: m2, n, a: a2, b: b2 },
            Mx8 => CatalogId::B { m, n, a: a2, b: b2 },
            Mx9 => CatalogId::Z { m: n - 1, a: a2, b: b2 },
            Mx10 => CatalogId::B { m, n, a: a2, b: b2 },
            Mx11 => CatalogId::Z { m, a: a2, b: b2 },
        }
    }

    /// Validates parameters; returns canonical (source, target).
    pub fn check(&self, r: usize, big_n: usize) -> Result<(CatalogId, CatalogId)> {
        let MorphId { family, s, l, m, m2, n, n2, a, b, a2, b2 } = *self;
        let fail = |msg: &str| Err(Error::Constraint(format!("{}: {msg}", family.name())));
        match (family.has_s(), r, s) {
            (true, 1, Some(_)) => return fail("s is not used when r=1"),
            (true, r, None) if r > 1 => return fail("s is required when r>1"),
            (false, _, Some(_)) => return fail("s is not a parameter"),
            _ => {}
        }
        let ri = r as i64;
        let ok = match family {
            I | J | IPrime => m <= n,
            Iota => {
                if !divides(r, n - m) {
                    return fail(&format!("needs {r} | (n-m)"));
                }
                m <= n - ri
            }
            Xi | Zeta => b < a,
            Pi | PiPrime | P => m < n,
            Q => true,
            C => {
                if !divides(r, n - l) {
                    return fail(&format!("needs {r} | (n-l)"));
                }
                l <= m && m <= n && (l < n || b < a)
            }
            Mx1 => {
                if !divides(r, m2 - m) {
                    return fail(&format!("needs {r} | (m'-m)"));
                }
                m < m2 && m2 < n
            }
            Mx2 | Mx4 => m < n && b < a,
            Mx3 => {
                if !divides(r, n2 - n) {
                    return fail(&format!("needs {r} | (n'-n)"));
                }
                m < n && n < n2
            }
            Mx5 => {
                if !divides(r, m2 - m) || !divides(r, n2 - n) {
                    return fail(&format!("needs {r} | (m'-m) and {r} | (n'-n)"));
                }
                m < m2 && m2 < n && n < n2
            }
            Mx6 => {
                if !divides(r, n2 - n) {
                    return fail(&format!("needs {r} | (n'-n)"));
                }
                n < n2 && a2 <= a
            }
            Mx7 => {
                if !divides(r, m2 - m) {
                    return fail(&format!("needs {r} | (m'-m)"));
                }
                m < m2 && b2 <= b
            }
            Mx8 => a2 <= a && b2 <= b && (a2, b2) != (a, b),
            Mx9 => b2 <= b && b < a2,
            Mx10 => b < a2 && a2 <= a,
            Mx11 => b2 <= b && b < a2 && a2 <= a && (a2, b2) != (a, b),
        };
        if !ok {
            return fail("index inequalities violated");
        }
        let src = self.source(r).check(r, big_n)?;
        let tgt = self.target(r).check(r, big_n)?;
        Ok((src, tgt))
    }

    fn components(&self) -> Vec<(i64, Comp)> {
        let MorphId { m, m2, n, .. } = *self;
        let ids = |lo: i64, hi: i64| (lo..=hi).map(|d| (d, Comp::Id));
        match self.family {
            I | J | IPrime | Iota => ids(m, n).collect(),
            Xi | Zeta => vec![(m, Comp::Id)],
            Pi | PiPrime | P | Q => ids(m, n - 1).collect(),
            C => vec![(m, Comp::Arrow)],
            Mx1 => std::iter::once((m2, Comp::Arrow)).chain(ids(m2 + 1, n)).collect(),
            Mx2 => std::iter::once((m, Comp::Arrow)).chain(ids(m + 1, n)).collect(),
            Mx3 | Mx4 => ids(m, n - 1).chain([(n, Comp::Arrow)]).collect(),
            Mx5 => std::iter::once((m2, Comp::Arrow))
                .chain(ids(m2 + 1, n - 1))
                .chain([(n, Comp::Arrow)])
                .collect(),
            Mx6 => std::iter::once((m, Comp::ArrowOrId))
                .chain(ids(m + 1, n - 1))
                .chain([(n, Comp::Arrow)])
                .collect(),
            Mx7 => std::iter::once((m2, Comp::Arrow))
                .chain(ids(m2 + 1, n - 1))
                .chain([(n, Comp::ArrowOrId)])
                .collect(),
            Mx8 => std::iter::once((m, Comp::ArrowOrId))
                .chain(ids(m + 1, n - 1))
                .chain([(n, Comp::ArrowOrId)])
                .collect(),
            Mx9 => vec![(n - 1, Comp::Arrow), (n, Comp::ArrowOrId)],
            Mx10 => vec![(m, Comp::ArrowOrId), (m + 1, Comp::Arrow)],
            Mx11 => vec![(m, Comp::ArrowOrId), (m + 1, Comp::ArrowOrId)],
        }
    }

    /// The documented degenerate case of class mx.V: `n = m'+1` and `a' <= b`.
    pub fn is_documented_null(&self) -> bool {
        self.family == Mx5 && self.n == self.m2 + 1 && self.a2 <= self.b
    }
}

impl fmt::Display for MorphId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.family.name())?;
        let mut first = true;
        if let Some(s) = self.s {
            write!(f, "s={s}")?;
            first = false;
        }
        for k in self.family.int_keys() {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{k}={}", self.int_value(k))?;
        }
        let vk = self.family.vertex_keys();
        for (i, k) in vk.iter().enumerate() {
            f.write_str(if i == 0 { ";" } else { "," })?;
            write!(f, "{k}={}", self.vertex_value(k))?;
        }
        f.write_str("]")
    }
}

impl FromStr for MorphId {
    type Err = Error;

    /// Syntactic parse only; see [`MorphId::check`] for the constraints.
    fn from_str(s: &str) -> Result<Self> {
        let raw = lex(s)?;
        let family = Family::from_name(&raw.name).ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("unknown family '{}'", raw.name),
        })?;
        let mut ints: Vec<&str> = Vec::new();
        let with_s = family.has_s()
            && raw.groups[0].first().and_then(|it| it.key.as_deref()) == Some("s");
        if with_s {
            ints.push("s");
        }
        ints.extend_from_slice(family.int_keys());
        let vks = family.vertex_keys();
        let shape: Vec<&[&str]> = if vks.is_empty() {
            vec![&ints[..]]
        } else {
            vec![&ints[..], vks]
        };
        let vals = raw.expect_shape(&shape)?;
        let mut id = MorphId::new(family);
        let mut k = 0;
        if with_s {
            id.s = Some(vertex(&raw, 0, vals[0])?);
            k = 1;
        }
        for key in family.int_keys() {
            *id.int_slot(key) = vals[k];
            k += 1;
        }
        for key in vks {
            *id.vertex_slot(key) = vertex(&raw, k, vals[k])?;
            k += 1;
        }
        Ok(id)
    }
}

impl Serialize for MorphId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MorphId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Realizes a spanning morphism between freshly realized catalog objects.
pub fn realize_morph(alg: &Algebra, id: &MorphId) -> Result<ChainMap> {
    let (src, tgt) = id.check(alg.r(), alg.n())?;
    let dom = Arc::new(src.realize(alg)?);
    let cod = Arc::new(tgt.realize(alg)?);
    realize_between(alg, id, &dom, &cod)
}

/// Realizes a spanning morphism between given realizations of its source and
/// target (which must be the canonical catalog complexes).
pub fn realize_between(
    alg: &Algebra,
    id: &MorphId,
    dom: &Arc<ProjComplex>,
    cod: &Arc<ProjComplex>,
) -> Result<ChainMap> {
    let (src, tgt) = id.check(alg.r(), alg.n())?;
    let r = alg.r();
    let mut comps = std::collections::BTreeMap::new();
    for (d, c) in id.components() {
        let (Some(u), Some(v)) = (src.vertex_at(r, d), tgt.vertex_at(r, d)) else {
            return Err(Error::NotChainMap(format!("{id}: no common term in degree {d}")));
        };
        let e = match c {
            Comp::Id if u == v => alg.identity(u),
            Comp::Id => {
                return Err(Error::NotChainMap(format!(
                    "{id}: identity component between P{u} and P{v} in degree {d}"
                )))
            }
            Comp::ArrowOrId if u == v => alg.identity(u),
            Comp::Arrow | Comp::ArrowOrId => alg.unnamed(u, v)?,
        };
        comps.insert(d, vec![vec![e]]);
    }
    let f = ChainMap::from_components(dom, cod, comps)?;
    f.validate(alg)
        .map_err(|e| Error::NotChainMap(format!("{id}: {e}")))?;
    Ok(f)
}

/// All spanning morphisms with source and target supports inside `[lo, hi]`, sorted.
pub fn enumerate_spanning(r: usize, big_n: usize, lo: i64, hi: i64) -> Vec<MorphId> {
    let mut out = Vec::new();
    if lo > hi {
        return out;
    }
    let inside = |id: CatalogId| {
        let (m, n) = id.support();
        lo <= m && n <= hi
    };
    for family in FAMILIES {
        let iks = family.int_keys();
        let vks = family.vertex_keys();
        let s_range: Vec<Option<usize>> = if family.has_s() && r > 1 {
            (0..r).map(Some).collect()
        } else {
            vec![None]
        };
        let span = (hi - lo + 3) as usize;
        let vspan = big_n.saturating_sub(r);
        let total_i = span.pow(iks.len() as u32);
        let total_v = vspan.pow(vks.len() as u32);
        for &s in &s_range {
            for ii in 0..total_i {
                let mut id = MorphId::new(family);
                id.s = s;
                let mut x = ii;
                for k in iks {
                    *id.int_slot(k) = lo - 1 + (x % span) as i64;
                    x /= span;
                }
                for vi in 0..total_v {
                    let mut y = vi;
                    for k in vks {
                        *id.vertex_slot(k) = r + y % vspan;
                        y /= vspan;
                    }
                    if let Ok((src, tgt)) = id.check(r, big_n) {
                        if inside(src) && inside(tgt) {
                            out.push(id);
                        }
                    }
                }
            }
        }
    }
    out.sort();
    out
}

/// `f` is crossing: supports `[m,n]`, `[p,q]` satisfy `m <= p <= n <= q` and no
/// map homotopic to `f` vanishes in degree `n` or in degree `p`.
pub fn crossing(hom: &HomSpace, f: &ChainMap) -> Result<bool> {
    let (Some((m, n)), Some((p, q))) = (f.dom.support(), f.cod.support()) else {
        return Ok(false);
    };
    if !(m <= p && p <= n && n <= q) || hom.is_null(f)? {
        return Ok(false);
    }
    let lay = hom.layout();
    let v = lay.encode(f)?;
    for d in [n, p] {
        let range = lay.degree_range(d);
        let w = &v[range.clone()];
        if w.iter().all(|&c| c == 0) {
            return Ok(false);
        }
        let rows: Vec<Vec<u32>> = hom.null_basis().iter().map(|b| b[range.clone()].to_vec()).collect();
        let sub = Subspace::spanned_by(hom.field(), range.len(), &rows);
        if sub.contains(w) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Truncation of a pair of catalog objects to a crossing pair of supports.
#[derive(Clone, Debug)]
pub struct Truncation {
    pub source: CatalogId,
    pub target: CatalogId,
    /// `X -> X'`
    pub pr: ChainMap,
    /// `Y' -> Y`
    pub inc: ChainMap,
}

/// `X' = sigma_{<= min(n,q)} X` and `Y' = sigma_{>= max(m,p)} Y`; `None` when
/// the supports do not overlap (then every chain map `X -> Y` is zero).
pub fn truncate_to_crossing(alg: &Algebra, x: CatalogId, y: CatalogId) -> Result<Option<Truncation>> {
    let r = alg.r();
    let x = x.check(r, alg.n())?;
    let y = y.check(r, alg.n())?;
    let ((m, n), (p, q)) = (x.support(), y.support());
    let (top, bottom) = (n.min(q), m.max(p));
    if top < bottom {
        return Ok(None);
    }
    let x2 = x.truncate_le(r, top).expect("top >= m");
    let y2 = y.truncate_ge(r, bottom).expect("bottom <= q");
    let xc = Arc::new(x.realize(alg)?);
    let yc = Arc::new(y.realize(alg)?);
    let x2c = Arc::new(x2.realize(alg)?);
    let y2c = Arc::new(y2.realize(alg)?);
    Ok(Some(Truncation {
        source: x2,
        target: y2,
        pr: common_identity(alg, &xc, &x2c)?,
        inc: common_identity(alg, &y2c, &yc)?,
    }))
}

/// Rank of `Hom(X', Y') -> Hom(X, Y)`, `f |-> inc . f . pr`.
pub fn truncation_rank(alg: &Algebra, t: &Truncation, hom_xy: &HomSpace) -> Result<usize> {
    let small = hom_kb(alg, &t.pr.cod, &t.inc.dom);
    let mut rows = Vec::new();
    for f in small.basis() {
        let g = t.pr.then(alg, &f)?.then(alg, &t.inc)?;
        rows.push(hom_xy.reduce(&g)?);
    }
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(Mat::from_vectors(alg.field, hom_xy.dim(), &rows).rank())
}

/// Realized catalog objects and spanning morphisms over a window, sharing
/// one realization per object.
#[derive(Clone, Debug)]
pub struct WindowData {
    pub objects: Vec<CatalogId>,
    pub complexes: HashMap<CatalogId, Arc<ProjComplex>>,
    pub morphisms: Vec<(MorphId, CatalogId, CatalogId, ChainMap)>,
}

impl WindowData {
    pub fn build(alg: &Algebra, lo: i64, hi: i64) -> Result<Self> {
        let (r, big_n) = (alg.r(), alg.n());
        let objects = crate::catalog::enumerate(r, big_n, lo, hi);
        let mut complexes = HashMap::new();
        for &id in &objects {
            complexes.insert(id, Arc::new(id.realize(alg)?));
        }
        let mut morphisms = Vec::new();
        for id in enumerate_spanning(r, big_n, lo, hi) {
            let (s, t) = id.check(r, big_n)?;
            let f = realize_between(alg, &id, &complexes[&s], &complexes[&t])?;
            morphisms.push((id, s, t, f));
        }
        Ok(WindowData {
            objects,
            complexes,
            morphisms,
        })
    }
}

/// Element helper used in tests and reports.
pub fn component_elem(f: &ChainMap, d: i64) -> Option<&AlgElem> {
    f.comp(d).and_then(|b| b.first()).and_then(|row| row.first())
}
