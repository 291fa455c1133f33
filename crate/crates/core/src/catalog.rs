//! The indecomposable complexes of `K^b(proj A(r,N))`.
//!
//! Every catalog complex has exactly one summand per degree in its support and
//! all differentials are unnamed arrows. Vertex indices of the `P_s` are taken
//! modulo `r`; the `Q_a` have `r <= a < N`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::complex::{ChainMap, ProjComplex};
use crate::error::{Error, Result};
use crate::idsyntax::{lex, vertex};
use crate::pathalg::{AlgElem, Algebra};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CatalogId {
    /// `s` is `None` exactly when `r = 1`.
    X { s: Option<usize>, m: i64, n: i64 },
    L { m: i64, n: i64, a: usize },
    /// Requires `m < n`; `R(m,m,b)` is the stalk `L(m,m,b)`.
    R { m: i64, n: i64, b: usize },
    B { m: i64, n: i64, a: usize, b: usize },
    Z { m: i64, a: usize, b: usize },
}

use CatalogId::*;

#[inline]
pub(crate) fn md(x: i64, r: usize) -> usize {
    x.rem_euclid(r as i64) as usize
}

impl CatalogId {
    /// `X` id in the convention of `r`: `s` is dropped when `r = 1`.
    pub fn x(r: usize, s: i64, m: i64, n: i64) -> CatalogId {
        X {
            s: (r > 1).then(|| md(s, r)),
            m,
            n,
        }
    }

    pub fn family(&self) -> char {
        match self {
            X { .. } => 'X',
            L { .. } => 'L',
            R { .. } => 'R',
            B { .. } => 'B',
            Z { .. } => 'Z',
        }
    }

    pub fn support(&self) -> (i64, i64) {
        match *self {
            X { m, n, .. } | L { m, n, .. } | R { m, n, .. } | B { m, n, .. } => (m, n),
            Z { m, .. } => (m, m + 1),
        }
    }

    /// Validates against `A(r,N)` and returns the canonical id.
    pub fn check(self, r: usize, big_n: usize) -> Result<CatalogId> {
        let c = |msg: String| Err(Error::Constraint(msg));
        let q = |v: usize, name: &str| -> Result<()> {
            if v < r || v >= big_n {
                Err(Error::Constraint(format!("{name}={v} outside [{r},{}]", big_n as i64 - 1)))
            } else {
                Ok(())
            }
        };
        let (m, n) = self.support();
        if m > n {
            return c(format!("empty support [{m},{n}]"));
        }
        match self {
            X { s, .. } => match (r, s) {
                (1, None) => Ok(self),
                (1, Some(_)) => c("X takes no s index when r=1".into()),
                (_, None) => c(format!("X needs an s index when r={r}")),
                (_, Some(s)) if s >= r => c(format!("s={s} outside Z/{r}")),
                _ => Ok(self),
            },
            L { a, .. } => q(a, "a").map(|_| self),
            R { m, n, b } => {
                q(b, "b")?;
                if m == n {
                    Ok(L { m, n, a: b })
                } else {
                    Ok(self)
                }
            }
            B { m, n, a, b } => {
                q(a, "a")?;
                q(b, "b")?;
                if m >= n - r as i64 {
                    return c(format!("B needs m < n-{r}"));
                }
                if (n - m - 1) % r as i64 != 0 {
                    return c(format!("B needs {r} | (n-m-1)"));
                }
                Ok(self)
            }
            Z { a, b, .. } => {
                if big_n < r + 2 {
                    return c(format!("Z undefined for N={big_n}"));
                }
                q(a, "a")?;
                q(b, "b")?;
                if b >= a {
                    return c("Z needs b < a".into());
                }
                Ok(self)
            }
        }
    }

    /// Vertex of the single summand in each degree of the support.
    pub fn vertices(&self, r: usize) -> Vec<usize> {
        match *self {
            X { s, m, n } => {
                let s = s.unwrap_or(0) as i64;
                (0..=n - m).map(|k| md(s - k, r)).collect()
            }
            L { m, n, a } => std::iter::once(a)
                .chain((1..=n - m).map(|k| md(r as i64 - k, r)))
                .collect(),
            R { m, n, b } => (0..n - m)
                .map(|k| md(n - m - 1 - k, r))
                .chain(std::iter::once(b))
                .collect(),
            B { m, n, a, b } => std::iter::once(a)
                .chain((1..n - m).map(|k| md(r as i64 - k, r)))
                .chain(std::iter::once(b))
                .collect(),
            Z { a, b, .. } => vec![a, b],
        }
    }

    /// Vertex in degree `d`, if `d` is in the support.
    pub fn vertex_at(&self, r: usize, d: i64) -> Option<usize> {
        let (m, n) = self.support();
        (m..=n).contains(&d).then(|| self.vertices(r)[(d - m) as usize])
    }

    /// The id of `Sigma^k` of this object.
    pub fn shifted(&self, k: i64) -> CatalogId {
        match *self {
            X { s, m, n } => X { s, m: m - k, n: n - k },
            L { m, n, a } => L { m: m - k, n: n - k, a },
            R { m, n, b } => R { m: m - k, n: n - k, b },
            B { m, n, a, b } => B { m: m - k, n: n - k, a, b },
            Z { m, a, b } => Z { m: m - k, a, b },
        }
    }

    /// The quotient complex keeping degrees `<= k`; `None` when it is zero.
    pub fn truncate_le(&self, r: usize, k: i64) -> Option<CatalogId> {
        let (m, n) = self.support();
        if k < m {
            return None;
        }
        if k >= n {
            return Some(*self);
        }
        Some(match *self {
            X { s, .. } => X { s, m, n: k },
            L { a, .. } | B { a, .. } | Z { a, .. } => L { m, n: k, a },
            R { .. } => CatalogId::x(r, n - m - 1, m, k),
        })
    }

    /// The subcomplex keeping degrees `>= k`; `None` when it is zero.
    pub fn truncate_ge(&self, r: usize, k: i64) -> Option<CatalogId> {
        let (m, n) = self.support();
        if k > n {
            return None;
        }
        if k <= m {
            return Some(*self);
        }
        Some(match *self {
            X { s, .. } => X {
                s: s.map(|s| md(s as i64 - (k - m), r)),
                m: k,
                n,
            },
            L { .. } => CatalogId::x(r, r as i64 - (k - m), k, n),
            R { b, .. } | B { b, .. } | Z { b, .. } if k == n => L { m: k, n: k, a: b },
            R { b, .. } | B { b, .. } => R { m: k, n, b },
            Z { .. } => unreachable!("Z has support of length two"),
        })
    }

    pub fn realize(&self, alg: &Algebra) -> Result<ProjComplex> {
        let id = self.check(alg.r(), alg.n())?;
        let vs = id.vertices(alg.r());
        let diffs = vs
            .windows(2)
            .map(|w| Ok(vec![vec![alg.unnamed(w[0], w[1])?]]))
            .collect::<Result<Vec<_>>>()?;
        ProjComplex::new(alg, id.support().0, vs.into_iter().map(|v| vec![v]).collect(), diffs)
    }
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            X { s: None, m, n } => write!(f, "X[{m},{n}]"),
            X { s: Some(s), m, n } => write!(f, "X[s={s};{m},{n}]"),
            L { m, n, a } => write!(f, "L[{m},{n};a={a}]"),
            R { m, n, b } => write!(f, "R[{m},{n};b={b}]"),
            B { m, n, a, b } => write!(f, "B[{m},{n};a={a},b={b}]"),
            Z { m, a, b } => write!(f, "Z[{m};a={a},b={b}]"),
        }
    }
}

impl FromStr for CatalogId {
    type Err = Error;

    /// Syntactic parse only; see [`CatalogId::check`] for the index constraints.
    fn from_str(s: &str) -> Result<Self> {
        let raw = lex(s)?;
        Ok(match raw.name.as_str() {
            "X" if raw.groups.len() == 1 => {
                let v = raw.expect_shape(&[&["", ""]])?;
                X { s: None, m: v[0], n: v[1] }
            }
            "X" => {
                let v = raw.expect_shape(&[&["s"], &["", ""]])?;
                X {
                    s: Some(vertex(&raw, 0, v[0])?),
                    m: v[1],
                    n: v[2],
                }
            }
            "L" => {
                let v = raw.expect_shape(&[&["", ""], &["a"]])?;
                L { m: v[0], n: v[1], a: vertex(&raw, 2, v[2])? }
            }
            "R" => {
                let v = raw.expect_shape(&[&["", ""], &["b"]])?;
                R { m: v[0], n: v[1], b: vertex(&raw, 2, v[2])? }
            }
            "B" => {
                let v = raw.expect_shape(&[&["", ""], &["a", "b"]])?;
                B {
                    m: v[0],
                    n: v[1],
                    a: vertex(&raw, 2, v[2])?,
                    b: vertex(&raw, 3, v[3])?,
                }
            }
            "Z" => {
                let v = raw.expect_shape(&[&[""], &["a", "b"]])?;
                Z {
                    m: v[0],
                    a: vertex(&raw, 1, v[1])?,
                    b: vertex(&raw, 2, v[2])?,
                }
            }
            other => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown family '{other}'"),
                })
            }
        })
    }
}

impl Serialize for CatalogId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CatalogId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All catalog ids with support inside `[lo, hi]`, sorted.
pub fn enumerate(r: usize, big_n: usize, lo: i64, hi: i64) -> Vec<CatalogId> {
    let mut out = Vec::new();
    let ri = r as i64;
    for m in lo..=hi {
        for n in m..=hi {
            if r == 1 {
                out.push(X { s: None, m, n });
            } else {
                out.extend((0..r).map(|s| X { s: Some(s), m, n }));
            }
            for a in r..big_n {
                out.push(L { m, n, a });
                if m < n {
                    out.push(R { m, n, b: a });
                }
            }
            if m < n - ri && (n - m - 1) % ri == 0 {
                for a in r..big_n {
                    out.extend((r..big_n).map(|b| B { m, n, a, b }));
                }
            }
        }
        if m < hi {
            for a in r..big_n {
                out.extend((r..a).map(|b| Z { m, a, b }));
            }
        }
    }
    out.sort();
    out
}

/// The chain map that is the identity on every degree where both complexes
/// are nonzero. Fails if a common degree carries different vertices.
pub fn common_identity(alg: &Algebra, dom: &Arc<ProjComplex>, cod: &Arc<ProjComplex>) -> Result<ChainMap> {
    let mut bad = None;
    let f = ChainMap::from_fn(dom, cod, |n, s, t, u, v| {
        if s == t && u == v {
            alg.identity(u)
        } else {
            if s == t {
                bad = Some(n);
            }
            AlgElem::zero(u, v)
        }
    });
    match bad {
        Some(n) => Err(Error::NotChainMap(format!("vertices differ in common degree {n}"))),
        None => Ok(f),
    }
}

/// `Delta_{m,n}` on `X(m,n)` for `r = 1`: the full cycle in degree `m`, zero elsewhere.
pub fn delta(alg: &Algebra, m: i64, n: i64) -> Result<ChainMap> {
    if alg.r() != 1 {
        return Err(Error::Unsupported("Delta is defined for r = 1 only".into()));
    }
    let x = Arc::new(X { s: None, m, n }.realize(alg)?);
    delta_on(alg, &x)
}

/// `Delta` on an already realized `X(m,n)`.
pub fn delta_on(alg: &Algebra, x: &Arc<ProjComplex>) -> Result<ChainMap> {
    let (m, _) = x
        .support()
        .ok_or_else(|| Error::InvalidParams("Delta on the zero complex".into()))?;
    let cyc = alg.unnamed(0, 0)?;
    Ok(ChainMap::from_fn(x, x, |d, _, _, u, v| {
        if d == m {
            cyc.clone()
        } else {
            AlgElem::zero(u, v)
        }
    }))
}

/// `Sigma^k(U) -> U'` where `U'` realizes `id.shifted(k)`; the degree-`p`
/// component is `(-1)^{kp}` times the identity. With `k = 1` and `U = X(m,n)`
/// this is `t_{m,n}`.
pub fn shift_iso(alg: &Algebra, id: CatalogId, k: i64) -> Result<ChainMap> {
    let u = id.realize(alg)?;
    let dom = Arc::new(u.shift(alg, k));
    let cod = Arc::new(id.shifted(k).realize(alg)?);
    Ok(signed_identity(alg, &dom, &cod, k))
}

/// The inverse `U' -> Sigma^k(U)` of [`shift_iso`], with the same signs.
pub fn shift_iso_inverse(alg: &Algebra, id: CatalogId, k: i64) -> Result<ChainMap> {
    let u = id.realize(alg)?;
    let cod = Arc::new(u.shift(alg, k));
    let dom = Arc::new(id.shifted(k).realize(alg)?);
    Ok(signed_identity(alg, &dom, &cod, k))
}

fn signed_identity(alg: &Algebra, dom: &Arc<ProjComplex>, cod: &Arc<ProjComplex>, k: i64) -> ChainMap {
    let minus = alg.field.neg(1);
    ChainMap::from_fn(dom, cod, |p, _, _, u, _| {
        if (k * p).rem_euclid(2) == 1 {
            alg.scale(minus, &alg.identity(u))
        } else {
            alg.identity(u)
        }
    })
}

/// `t_{m,n}: Sigma(X(m,n)) -> X(m-1,n-1)` for `r = 1`.
pub fn t_iso(alg: &Algebra, m: i64, n: i64) -> Result<ChainMap> {
    if alg.r() != 1 {
        return Err(Error::Unsupported("t is defined here for r = 1 only".into()));
    }
    shift_iso(alg, X { s: None, m, n }, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;
    use crate::homotopy::{hom_kb, is_homotopy_equivalence};

    fn alg(r: usize, n: usize) -> Algebra {
        Algebra::arn(r, n, Field::default()).unwrap()
    }

    #[test]
    fn x_stalk_is_shifted_projective() {
        let a = alg(1, 2);
        let x = X { s: None, m: 2, n: 2 }.realize(&a).unwrap();
        assert_eq!(x, ProjComplex::stalk(&a, 0, -2).unwrap());
        let l = L { m: 1, n: 1, a: 1 }.realize(&a).unwrap();
        assert_eq!(l, ProjComplex::stalk(&a, 1, -1).unwrap());
    }

    #[test]
    fn x01_has_cycle_differential() {
        let a = alg(1, 2);
        let x = X { s: None, m: 0, n: 1 }.realize(&a).unwrap();
        assert_eq!(x.support(), Some((0, 1)));
        assert_eq!(a.format_elem(&x.diff(0).unwrap()[0][0]), "a1a0");
    }

    #[test]
    fn r2_vertices_descend() {
        let id = X { s: Some(1), m: 0, n: 3 };
        assert_eq!(id.vertices(2), vec![1, 0, 1, 0]);
        assert_eq!(L { m: 0, n: 3, a: 2 }.vertices(2), vec![2, 1, 0, 1]);
        assert_eq!(R { m: 0, n: 3, b: 2 }.vertices(2), vec![0, 1, 0, 2]);
        assert_eq!(B { m: 0, n: 3, a: 2, b: 2 }.vertices(2), vec![2, 1, 0, 2]);
        let a = alg(2, 3);
        for id in enumerate(2, 3, -1, 3) {
            id.realize(&a).unwrap();
        }
    }

    #[test]
    fn validation_rules() {
        assert!(matches!(
            Z { m: 0, a: 2, b: 1 }.check(1, 2),
            Err(Error::Constraint(ref s)) if s.contains("Z undefined for N=2")
        ));
        assert!(B { m: 0, n: 1, a: 1, b: 1 }.check(1, 2).is_err());
        assert!(B { m: 0, n: 2, a: 1, b: 1 }.check(1, 2).is_ok());
        assert!(B { m: 0, n: 2, a: 2, b: 2 }.check(2, 3).is_err());
        assert!(B { m: 0, n: 3, a: 2, b: 2 }.check(2, 3).is_ok());
        assert!(B { m: 0, n: 4, a: 2, b: 2 }.check(2, 3).is_err());
        assert_eq!(
            R { m: 1, n: 1, b: 1 }.check(1, 2).unwrap(),
            L { m: 1, n: 1, a: 1 }
        );
        assert!(X { s: None, m: 0, n: 0 }.check(2, 3).is_err());
        assert!(L { m: 0, n: 0, a: 1 }.check(2, 3).is_err());
    }

    #[test]
    fn enumeration_examples() {
        let ids = enumerate(1, 2, 0, 0);
        assert_eq!(ids, vec![X { s: None, m: 0, n: 0 }, L { m: 0, n: 0, a: 1 }]);
        assert!(enumerate(1, 2, 1, 0).is_empty());
        let ids = enumerate(2, 4, -2, 2);
        for id in &ids {
            assert_eq!(id.check(2, 4).unwrap(), *id);
            let (m, n) = id.support();
            assert!(-2 <= m && n <= 2);
        }
        let mut dedup = ids.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), ids.len());
    }

    #[test]
    fn parse_print() {
        for s in ["X[0,3]", "X[s=1;0,3]", "L[0,2;a=1]", "R[-1,2;b=3]", "B[0,4;a=2,b=1]", "Z[0;a=2,b=1]"] {
            let id: CatalogId = s.parse().unwrap();
            assert_eq!(id.to_string(), s);
        }
        assert!("Q[0,1]".parse::<CatalogId>().is_err());
        assert!("L[0,2;b=1]".parse::<CatalogId>().is_err());
        assert!("L[0,2;a=-1]".parse::<CatalogId>().is_err());
    }

    #[test]
    fn delta_and_t() {
        let a = alg(1, 2);
        let d = delta(&a, 0, 2).unwrap();
        d.validate(&a).unwrap();
        let h = hom_kb(&a, &d.dom, &d.dom);
        assert!(!h.is_null(&d).unwrap());
        assert!(h.is_null(&d.then(&a, &d).unwrap()).unwrap());

        let t = t_iso(&a, 0, 2).unwrap();
        t.validate(&a).unwrap();
        assert!(is_homotopy_equivalence(&a, &t).unwrap());
        let ti = shift_iso_inverse(&a, X { s: None, m: 0, n: 2 }, 1).unwrap();
        ti.validate(&a).unwrap();
        let round = t.then(&a, &ti).unwrap();
        assert_eq!(round, ChainMap::identity(&t.dom, &a));
        // conjugation: t . Sigma(Delta) . t^-1 = Delta_{m-1,n-1}
        let conj = ti
            .then(&a, &d.shift(&a, 1))
            .unwrap()
            .then(&a, &t)
            .unwrap();
        let d2 = delta(&a, -1, 1).unwrap();
        let h2 = hom_kb(&a, &d2.dom, &d2.dom);
        assert_eq!(h2.reduce(&conj).unwrap(), h2.reduce(&d2).unwrap());
    }

    #[test]
    fn shift_iso_all_families() {
        for (r, n) in [(1, 3), (2, 4)] {
            let a = alg(r, n);
            for id in enumerate(r, n, -1, 3) {
                for k in [-2, 1, 3] {
                    let f = shift_iso(&a, id, k).unwrap();
                    f.validate(&a).unwrap();
                }
            }
        }
    }

    #[test]
    fn truncations_match_brutal_truncation() {
        for (r, big_n) in [(1, 3), (2, 3), (3, 5)] {
            let a = alg(r, big_n);
            for id in enumerate(r, big_n, -2, 3) {
                let u = Arc::new(id.realize(&a).unwrap());
                let (m, n) = id.support();
                for k in m - 1..=n + 1 {
                    match id.truncate_le(r, k) {
                        None => assert!(k < m),
                        Some(t) => {
                            let t = t.check(r, big_n).unwrap();
                            assert_eq!(t.support(), (m, k.min(n)));
                            let tc = Arc::new(t.realize(&a).unwrap());
                            common_identity(&a, &u, &tc).unwrap().validate(&a).unwrap();
                        }
                    }
                    match id.truncate_ge(r, k) {
                        None => assert!(k > n),
                        Some(t) => {
                            let t = t.check(r, big_n).unwrap();
                            assert_eq!(t.support(), (k.max(m), n));
                            let tc = Arc::new(t.realize(&a).unwrap());
                            common_identity(&a, &tc, &u).unwrap().validate(&a).unwrap();
                        }
                    }
                }
            }
        }
    }
}
