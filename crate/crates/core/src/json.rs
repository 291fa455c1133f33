//! Versioned JSON documents for algebras, elements, complexes, chain maps,
//! Hom summaries and scalar systems.
//!
//! Path words are arrow-id lists written right to left (the last id is the
//! first arrow applied); coefficients are integers, read modulo `p`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complex::{Block, ChainMap, ProjComplex};
use crate::error::{Error, Result};
use crate::exactlin::Field;
use crate::homotopy::HomSpace;
use crate::pathalg::{AlgElem, Algebra};
use crate::pseudofunctor::{ScalarSystem, SCALAR_SCHEMA};
use crate::spanmorph::MorphId;

pub const ALGEBRA_SCHEMA: &str = "nakayama.algebra/1";
pub const COMPLEX_SCHEMA: &str = "nakayama.complex/1";
pub const CHAIN_MAP_SCHEMA: &str = "nakayama.chainmap/1";
pub const HOM_SCHEMA: &str = "nakayama.hom/1";

/// Largest `N` accepted from documents; the multiplication table is quartic in `N`.
pub const MAX_DOC_N: usize = 64;

/// Widest window accepted from scalar documents; extraction is polynomial in the width.
pub const MAX_DOC_WINDOW: i64 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraParams {
    pub r: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: u32,
}

impl AlgebraParams {
    pub fn of(alg: &Algebra) -> Self {
        AlgebraParams {
            r: alg.r(),
            n: alg.n(),
            p: alg.field.prime(),
        }
    }

    pub fn build(&self) -> Result<Algebra> {
        if self.n > MAX_DOC_N {
            return Err(Error::InvalidParams(format!("N={} exceeds {MAX_DOC_N}", self.n)));
        }
        Algebra::arn(self.r, self.n, Field::new(self.p)?)
    }
}

fn check_schema(found: &str, want: &str) -> Result<()> {
    if found != want {
        return Err(Error::Malformed(format!("schema {found:?}, expected {want:?}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub id: usize,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDoc {
    pub source: usize,
    pub target: usize,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub schema: String,
    #[serde(flatten)]
    pub params: AlgebraParams,
    pub vertices: usize,
    pub arrows: Vec<ArrowDoc>,
    /// `[later, earlier]`: the path `later . earlier` is zero.
    pub relations: Vec<[usize; 2]>,
    pub dim: usize,
    pub paths: Vec<PathDoc>,
}

pub fn algebra_doc(alg: &Algebra) -> AlgebraDoc {
    let pres = &alg.pres;
    AlgebraDoc {
        schema: ALGEBRA_SCHEMA.into(),
        params: AlgebraParams::of(alg),
        vertices: pres.quiver.vertices,
        arrows: pres
            .quiver
            .arrows
            .iter()
            .map(|a| ArrowDoc {
                id: a.id,
                source: a.source,
                target: a.target,
            })
            .collect(),
        relations: pres.forbidden.iter().map(|&(a, b)| [a, b]).collect(),
        dim: pres.dim(),
        paths: pres
            .paths()
            .iter()
            .map(|p| PathDoc {
                source: p.source,
                target: p.target,
                word: p.word.clone(),
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub word: Vec<usize>,
    pub coeff: i64,
}

/// An element of `e_dom A e_cod`; its paths run from `cod` to `dom`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElemDoc {
    pub dom: usize,
    pub cod: usize,
    pub terms: Vec<TermDoc>,
}

fn terms_doc(alg: &Algebra, x: &AlgElem) -> Vec<TermDoc> {
    x.terms
        .iter()
        .map(|&(p, c)| TermDoc {
            word: alg.pres.path(p).word.clone(),
            coeff: alg.field.signed(c),
        })
        .collect()
}

pub fn elem_doc(alg: &Algebra, x: &AlgElem) -> ElemDoc {
    ElemDoc {
        dom: x.dom,
        cod: x.cod,
        terms: terms_doc(alg, x),
    }
}

fn elem_from_terms(alg: &Algebra, dom: usize, cod: usize, terms: &[TermDoc]) -> Result<AlgElem> {
    if dom >= alg.n() || cod >= alg.n() {
        return Err(Error::Malformed(format!("vertex out of range in e_{dom} A e_{cod}")));
    }
    let mut out = Vec::with_capacity(terms.len());
    for t in terms {
        let p = alg
            .pres
            .lookup_word(cod, &t.word)
            .ok_or_else(|| Error::Malformed(format!("word {:?} is not a nonzero path from {cod}", t.word)))?;
        out.push((p, alg.field.elem(t.coeff)));
    }
    alg.elem(dom, cod, &out)
}

pub fn elem_from_doc(alg: &Algebra, d: &ElemDoc) -> Result<AlgElem> {
    elem_from_terms(alg, d.dom, d.cod, &d.terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeDoc {
    pub degree: i64,
    pub summands: Vec<usize>,
    /// `differential[s][t]`: summand `s` here to summand `t` one degree up.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub differential: Vec<Vec<Vec<TermDoc>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexBody {
    pub degrees: Vec<DegreeDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexDoc {
    pub schema: String,
    pub algebra: AlgebraParams,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub id: Option<String>,
    #[serde(flatten)]
    pub body: ComplexBody,
}

fn block_doc(alg: &Algebra, b: &Block) -> Vec<Vec<Vec<TermDoc>>> {
    b.iter()
        .map(|row| row.iter().map(|x| terms_doc(alg, x)).collect())
        .collect()
}

fn block_from_doc(alg: &Algebra, rows: &[usize], cols: &[usize], d: &[Vec<Vec<TermDoc>>]) -> Result<Block> {
    if d.len() != rows.len() || d.iter().any(|r| r.len() != cols.len()) {
        return Err(Error::Malformed(format!(
            "block must be {}x{}",
            rows.len(),
            cols.len()
        )));
    }
    rows.iter()
        .zip(d)
        .map(|(&u, row)| {
            cols.iter()
                .zip(row)
                .map(|(&v, terms)| elem_from_terms(alg, u, v, terms))
                .collect()
        })
        .collect()
}

pub fn complex_body(alg: &Algebra, c: &ProjComplex) -> ComplexBody {
    let mut degrees = Vec::new();
    if let Some((lo, hi)) = c.support() {
        for n in lo..=hi {
            degrees.push(DegreeDoc {
                degree: n,
                summands: c.term(n).to_vec(),
                differential: c.diff(n).map(|b| block_doc(alg, b)).unwrap_or_default(),
            });
        }
    }
    ComplexBody { degrees }
}

pub fn complex_doc(alg: &Algebra, c: &ProjComplex, id: Option<String>) -> ComplexDoc {
    ComplexDoc {
        schema: COMPLEX_SCHEMA.into(),
        algebra: AlgebraParams::of(alg),
        id,
        body: complex_body(alg, c),
    }
}

/// Degrees must be consecutive; a differential is required between
/// nonempty neighbours and may be omitted when either side is empty.
pub fn complex_from_body(alg: &Algebra, body: &ComplexBody) -> Result<ProjComplex> {
    let Some(first) = body.degrees.first() else {
        return Ok(ProjComplex::zero());
    };
    let lo = first.degree;
    let mut terms = Vec::with_capacity(body.degrees.len());
    for (k, d) in body.degrees.iter().enumerate() {
        if d.degree.checked_sub(lo) != Some(k as i64) {
            return Err(Error::Malformed(format!("degree {} out of sequence", d.degree)));
        }
        if let Some(&v) = d.summands.iter().find(|&&v| v >= alg.n()) {
            return Err(Error::Malformed(format!("vertex {v} out of range")));
        }
        terms.push(d.summands.clone());
    }
    let mut diffs = Vec::new();
    for k in 0..terms.len().saturating_sub(1) {
        let d = &body.degrees[k];
        let (rows, cols) = (&terms[k], &terms[k + 1]);
        let block = if d.differential.is_empty() && (rows.is_empty() || cols.is_empty()) {
            rows.iter().map(|_| Vec::new()).collect()
        } else {
            block_from_doc(alg, rows, cols, &d.differential)?
        };
        diffs.push(block);
    }
    if let Some(last) = body.degrees.last() {
        if !last.differential.is_empty() {
            return Err(Error::Malformed("differential out of the top degree".into()));
        }
    }
    ProjComplex::new(alg, lo, terms, diffs)
}

impl ComplexDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let d: ComplexDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        check_schema(&d.schema, COMPLEX_SCHEMA)?;
        Ok(d)
    }

    pub fn build(&self) -> Result<(Algebra, ProjComplex)> {
        let alg = self.algebra.build()?;
        let c = complex_from_body(&alg, &self.body)?;
        Ok((alg, c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDoc {
    pub degree: i64,
    pub block: Vec<Vec<Vec<TermDoc>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMapDoc {
    pub schema: String,
    pub algebra: AlgebraParams,
    pub dom: ComplexBody,
    pub cod: ComplexBody,
    pub components: Vec<ComponentDoc>,
}

fn components_doc(alg: &Algebra, f: &ChainMap) -> Vec<ComponentDoc> {
    f.components()
        .iter()
        .map(|(&n, b)| ComponentDoc {
            degree: n,
            block: block_doc(alg, b),
        })
        .collect()
}

pub fn chain_map_doc(alg: &Algebra, f: &ChainMap) -> ChainMapDoc {
    ChainMapDoc {
        schema: CHAIN_MAP_SCHEMA.into(),
        algebra: AlgebraParams::of(alg),
        dom: complex_body(alg, &f.dom),
        cod: complex_body(alg, &f.cod),
        components: components_doc(alg, f),
    }
}

pub fn chain_map_from_doc(alg: &Algebra, d: &ChainMapDoc) -> Result<ChainMap> {
    check_schema(&d.schema, CHAIN_MAP_SCHEMA)?;
    if d.algebra != AlgebraParams::of(alg) {
        return Err(Error::Malformed("chain map is over a different algebra".into()));
    }
    let dom = Arc::new(complex_from_body(alg, &d.dom)?);
    let cod = Arc::new(complex_from_body(alg, &d.cod)?);
    let mut comps = BTreeMap::new();
    for c in &d.components {
        let b = block_from_doc(alg, dom.term(c.degree), cod.term(c.degree), &c.block)?;
        if comps.insert(c.degree, b).is_some() {
            return Err(Error::Malformed(format!("degree {} listed twice", c.degree)));
        }
    }
    let f = ChainMap::from_components(&dom, &cod, comps)?;
    f.validate(alg)?;
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDoc {
    pub schema: String,
    pub algebra: AlgebraParams,
    pub source: String,
    pub target: String,
    pub dim: usize,
    pub chain_dim: usize,
    pub null_dim: usize,
    /// Components of the basis representatives.
    pub basis: Vec<Vec<ComponentDoc>>,
    /// The same representatives in degree-0 coordinates.
    pub coordinates: Vec<Vec<i64>>,
}

pub fn hom_doc(alg: &Algebra, source: &str, target: &str, h: &HomSpace) -> HomDoc {
    HomDoc {
        schema: HOM_SCHEMA.into(),
        algebra: AlgebraParams::of(alg),
        source: source.into(),
        target: target.into(),
        dim: h.dim(),
        chain_dim: h.chain_dim(),
        null_dim: h.homotopy_dim(),
        basis: h.basis().iter().map(|f| components_doc(alg, f)).collect(),
        coordinates: h
            .basis_vectors()
            .iter()
            .map(|v| v.iter().map(|&x| alg.field.signed(x)).collect())
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarDoc {
    pub schema: String,
    pub algebra: AlgebraParams,
    pub window: [i64; 2],
    pub scalars: BTreeMap<MorphId, i64>,
    /// Degree to full coordinate vector in `A`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub connecting: BTreeMap<i64, Vec<i64>>,
}

impl ScalarDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let d: ScalarDoc = serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))?;
        check_schema(&d.schema, SCALAR_SCHEMA)?;
        Ok(d)
    }

    pub fn from_system(alg: &Algebra, sys: &ScalarSystem) -> Self {
        let f = alg.field;
        ScalarDoc {
            schema: SCALAR_SCHEMA.into(),
            algebra: AlgebraParams::of(alg),
            window: sys.window,
            scalars: sys.scalars.iter().map(|(&m, &v)| (m, f.signed(v))).collect(),
            connecting: sys
                .connecting
                .iter()
                .map(|(&n, v)| (n, v.iter().map(|&x| f.signed(x)).collect()))
                .collect(),
        }
    }

    /// Reduces the integers mod `p` and validates the result.
    pub fn to_system(&self, alg: &Algebra) -> Result<ScalarSystem> {
        if self.algebra != AlgebraParams::of(alg) {
            return Err(Error::Malformed("scalar system is over a different algebra".into()));
        }
        let [lo, hi] = self.window;
        if lo > hi || (hi as i128 - lo as i128) >= MAX_DOC_WINDOW as i128 {
            return Err(Error::InvalidParams(format!(
                "window [{lo}, {hi}] must be nonempty and at most {MAX_DOC_WINDOW} wide"
            )));
        }
        let f = alg.field;
        let sys = ScalarSystem {
            window: self.window,
            scalars: self.scalars.iter().map(|(&m, &v)| (m, f.elem(v))).collect(),
            connecting: self
                .connecting
                .iter()
                .map(|(&n, v)| (n, v.iter().map(|&x| f.elem(x)).collect()))
                .collect(),
        };
        sys.validate(alg)?;
        Ok(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::CatalogId;

    fn alg(r: usize, n: usize) -> Algebra {
        Algebra::arn(r, n, Field::default()).unwrap()
    }

    #[test]
    fn complex_round_trip() {
        let a = alg(1, 3);
        for id in ["X[0,2]", "L[0,2;a=1]", "Z[0;a=2,b=1]"] {
            let c = id.parse::<CatalogId>().unwrap().realize(&a).unwrap();
            let text = serde_json::to_string(&complex_doc(&a, &c, Some(id.into()))).unwrap();
            let (b, back) = ComplexDoc::parse(&text).unwrap().build().unwrap();
            assert_eq!(b, a);
            assert_eq!(back, c);
        }
    }

    #[test]
    fn chain_map_round_trip() {
        let a = alg(1, 2);
        let x = Arc::new(CatalogId::X { s: None, m: 0, n: 1 }.realize(&a).unwrap());
        let d = crate::catalog::delta_on(&a, &x).unwrap();
        let text = serde_json::to_string(&chain_map_doc(&a, &d)).unwrap();
        let doc: ChainMapDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(chain_map_from_doc(&a, &doc).unwrap(), d);
    }

    #[test]
    fn rejects_bad_documents() {
        let a = alg(1, 2);
        let c = CatalogId::X { s: None, m: 0, n: 1 }.realize(&a).unwrap();
        let mut doc = complex_doc(&a, &c, None);
        doc.body.degrees[0].differential[0][0][0].word = vec![0, 0];
        assert!(complex_from_body(&a, &doc.body).is_err());
        let mut doc = complex_doc(&a, &c, None);
        doc.body.degrees[1].degree = 5;
        assert!(complex_from_body(&a, &doc.body).is_err());
        doc.schema = "nakayama.complex/0".into();
        assert!(ComplexDoc::parse(&serde_json::to_string(&doc).unwrap()).is_err());
    }

    #[test]
    fn scalar_round_trip() {
        let a = alg(2, 3);
        let mut sys = ScalarSystem::ones(2, 3, -1, 1);
        let k = *sys.scalars.keys().next().unwrap();
        sys.scalars.insert(k, a.field.elem(-5));
        let doc = ScalarDoc::from_system(&a, &sys);
        assert_eq!(doc.scalars[&k], -5);
        let text = serde_json::to_string(&doc).unwrap();
        assert_eq!(ScalarDoc::parse(&text).unwrap().to_system(&a).unwrap(), sys);
    }

    #[test]
    fn scalar_windows_are_bounded() {
        let a = alg(1, 2);
        let mut doc = ScalarDoc::from_system(&a, &ScalarSystem::ones(1, 2, 0, 0));
        doc.window = [i64::MIN, i64::MAX];
        assert!(matches!(doc.to_system(&a), Err(Error::InvalidParams(_))));
        doc.window = [1, 0];
        assert!(doc.to_system(&a).is_err());
    }
}
