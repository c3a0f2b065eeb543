//! JSON shapes for jobfiles and reports, with conversions to the library types.
//!
//! Field elements are coefficient arrays (constant term first), S̃-elements are
//! arrays of field elements `[c_0, …, c_{p-1}]`, S₁-elements are
//! `{"terms": [[i, coeff], …]}` in the basis `u^i/q(i)!`. Module columns are
//! lists of d ring elements; matrices are lists of rows.

use serde::{Deserialize, Serialize};

use crate::cat::{SimpleObject, TildeModule, TildeMorphism};
use crate::dprings::{DpRing, RingParams, S1Elem, TildeSElem};
use crate::equiv::S1Module;
use crate::error::{Error, Result};
use crate::gf::{FieldElem, GaloisField};
use crate::inertia::TameCharacter;
use crate::linalg::Matrix;
use crate::mat::{RMatrix, TildeRing};

pub type FieldJson = Vec<u32>;
pub type TildeJson = Vec<FieldJson>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct S1Json {
    pub terms: Vec<(usize, FieldJson)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimpleJson {
    pub d: usize,
    pub weights: Vec<usize>,
    /// Omitted for cyclic objects.
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<FieldJson>>>,
    #[serde(default)]
    pub cyclic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleJson<E> {
    pub d: usize,
    pub fil_gens: Vec<Vec<E>>,
    pub phi_on_fil: Vec<Vec<E>>,
    /// Rows of the matrix of N; zero when omitted.
    #[serde(default = "Option::default", skip_serializing_if = "Option::is_none")]
    pub n_mat: Option<Vec<Vec<E>>>,
}

pub type TildeModuleJson = ModuleJson<TildeJson>;
pub type S1ModuleJson = ModuleJson<S1Json>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ObjectJson {
    Simple(SimpleJson),
    Module(TildeModuleJson),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub source: ObjectJson,
    pub target: ObjectJson,
    /// Rows of the matrix in the given bases.
    pub matrix: Vec<Vec<TildeJson>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterJson {
    /// Level; defaults to the number of digits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Payload {
    Simple(SimpleJson),
    Module(TildeModuleJson),
    S1Module(S1ModuleJson),
    Morphism(MorphismJson),
    Character(CharacterJson),
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Simple(_) => "simple",
            Payload::Module(_) => "module",
            Payload::S1Module(_) => "s1_module",
            Payload::Morphism(_) => "morphism",
            Payload::Character(_) => "character",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    /// Solution pair for `pairing-check`, as elements of the ambient field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<FieldJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<FieldJson>,
    /// Prime-field scalars lifted by `lift-check`; all of GF(p) by default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalars: Option<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobFile {
    pub params: RingParams,
    pub payload: Payload,
    #[serde(default)]
    pub options: Options,
}

impl JobFile {
    pub fn parse(text: &str) -> Result<JobFile> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("jobfile: {e}")))
    }
}

pub fn field_elem(f: &GaloisField, v: &[u32], path: &str) -> Result<FieldElem> {
    f.from_coeffs(v).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

pub fn field_json(f: &GaloisField, x: FieldElem) -> FieldJson {
    let mut c = f.coeffs(x);
    while c.len() > 1 && c.last() == Some(&0) {
        c.pop();
    }
    c
}

pub fn tilde_elem(f: &GaloisField, v: &[FieldJson], path: &str) -> Result<TildeSElem> {
    let p = f.p() as usize;
    if v.len() > p {
        return Err(Error::InvalidInput(format!("{path}: {} coefficients but S̃ = k[u]/u^{p}", v.len())));
    }
    let mut out = TildeSElem::zero(p);
    for (i, c) in v.iter().enumerate() {
        out.0[i] = field_elem(f, c, &format!("{path}[{i}]"))?;
    }
    Ok(out)
}

pub fn tilde_json(f: &GaloisField, x: &TildeSElem) -> TildeJson {
    let last = x.0.iter().rposition(|c| !c.is_zero()).map_or(1, |i| i + 1);
    x.0[..last].iter().map(|&c| field_json(f, c)).collect()
}

pub fn s1_elem(ring: &DpRing, v: &S1Json, path: &str) -> Result<S1Elem> {
    let f = ring.field();
    let mut out = S1Elem::zero();
    for (k, (i, c)) in v.terms.iter().enumerate() {
        if *i >= ring.trunc_degree() {
            return Err(Error::InvalidInput(format!(
                "{path}.terms[{k}]: degree {i} is not below trunc_degree {}",
                ring.trunc_degree()
            )));
        }
        let c = field_elem(f, c, &format!("{path}.terms[{k}]"))?;
        out = out.add(f, &S1Elem::term(*i, c));
    }
    Ok(out)
}

pub fn s1_json(f: &GaloisField, x: &S1Elem) -> S1Json {
    S1Json { terms: x.terms().map(|(i, c)| (i, field_json(f, c))).collect() }
}

fn columns<E, T>(cols: &[Vec<E>], d: usize, path: &str, mut conv: impl FnMut(&E, &str) -> Result<T>) -> Result<Vec<Vec<T>>> {
    cols.iter()
        .enumerate()
        .map(|(j, c)| {
            if c.len() != d {
                return Err(Error::InvalidInput(format!("{path}[{j}]: {} entries, expected d = {d}", c.len())));
            }
            c.iter().enumerate().map(|(i, x)| conv(x, &format!("{path}[{j}][{i}]"))).collect()
        })
        .collect()
}

fn square_rows<E, T>(rows: &[Vec<E>], d: usize, path: &str, conv: impl FnMut(&E, &str) -> Result<T>) -> Result<Vec<Vec<T>>> {
    if rows.len() != d {
        return Err(Error::InvalidInput(format!("{path}: {} rows, expected d = {d}", rows.len())));
    }
    columns(rows, d, path, conv)
}

pub fn simple_object(ring: &DpRing, s: &SimpleJson, path: &str) -> Result<SimpleObject> {
    if s.weights.len() != s.d {
        return Err(Error::InvalidInput(format!("{path}.weights: {} entries, expected d = {}", s.weights.len(), s.d)));
    }
    let er = ring.er();
    if let Some((i, w)) = s.weights.iter().enumerate().find(|(_, &w)| w > er) {
        return Err(Error::InvalidInput(format!("{path}.weights[{i}]: {w} outside [0, er] = [0, {er}]")));
    }
    let at = |e: Error| match e {
        Error::InvalidParams { .. } | Error::Inadmissible { .. } => e,
        other => Error::InvalidInput(format!("{path}: {other}")),
    };
    match &s.g {
        None if s.cyclic => SimpleObject::cyclic(ring, s.weights.clone()).map_err(at),
        None => Err(Error::InvalidInput(format!("{path}.G: required unless cyclic is true"))),
        Some(g) => {
            let f = ring.field();
            let rows = square_rows(g, s.d, &format!("{path}.G"), |x, p| field_elem(f, x, p))?;
            SimpleObject::new(ring, s.weights.clone(), Matrix::from_rows(rows), s.cyclic).map_err(at)
        }
    }
}

pub fn simple_json(s: &SimpleObject) -> SimpleJson {
    let f = s.ring().field();
    let g = (!s.is_cyclic())
        .then(|| (0..s.d()).map(|i| (0..s.d()).map(|j| field_json(f, s.g().get(i, j))).collect()).collect());
    SimpleJson { d: s.d(), weights: s.weights().to_vec(), g, cyclic: s.is_cyclic() }
}

pub fn tilde_module(ring: &DpRing, m: &TildeModuleJson, path: &str) -> Result<TildeModule> {
    let f = ring.field();
    let conv = |x: &TildeJson, p: &str| tilde_elem(f, x, p);
    let d = m.d;
    let gens = columns(&m.fil_gens, d, &format!("{path}.fil_gens"), conv)?;
    let phi = columns(&m.phi_on_fil, d, &format!("{path}.phi_on_fil"), conv)?;
    let tr = TildeRing::new(f.clone());
    let n = match &m.n_mat {
        None => RMatrix::zeros(&tr, d, d),
        Some(rows) => RMatrix::from_rows(square_rows(rows, d, &format!("{path}.n_mat"), conv)?),
    };
    TildeModule::new(ring, d, gens, phi, n).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

pub fn tilde_module_json(m: &TildeModule) -> TildeModuleJson {
    let f = m.ring().field();
    let col = |c: &Vec<TildeSElem>| c.iter().map(|x| tilde_json(f, x)).collect();
    ModuleJson {
        d: m.d(),
        fil_gens: m.fil_gens().iter().map(col).collect(),
        phi_on_fil: m.phi_on_fil().iter().map(col).collect(),
        n_mat: Some(m.n_mat().to_rows().iter().map(col).collect()),
    }
}

pub fn s1_module(ring: &DpRing, m: &S1ModuleJson, path: &str) -> Result<S1Module> {
    let conv = |x: &S1Json, p: &str| s1_elem(ring, x, p);
    let d = m.d;
    let gens = columns(&m.fil_gens, d, &format!("{path}.fil_gens"), conv)?;
    let phi = columns(&m.phi_on_fil, d, &format!("{path}.phi_on_fil"), conv)?;
    let n = match &m.n_mat {
        None => RMatrix::zeros(ring, d, d),
        Some(rows) => RMatrix::from_rows(square_rows(rows, d, &format!("{path}.n_mat"), conv)?),
    };
    S1Module::new(ring, d, gens, phi, n).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

pub fn s1_module_json(m: &S1Module) -> S1ModuleJson {
    let f = m.ring().field();
    let col = |c: &Vec<S1Elem>| c.iter().map(|x| s1_json(f, x)).collect();
    ModuleJson {
        d: m.d(),
        fil_gens: m.fil_gens().iter().map(col).collect(),
        phi_on_fil: m.phi_on_gens().iter().chain(m.phi_on_basis()).map(col).collect(),
        n_mat: Some(m.n_mat().to_rows().iter().map(col).collect()),
    }
}

pub fn s1_matrix_json(f: &GaloisField, m: &RMatrix<S1Elem>) -> Vec<Vec<S1Json>> {
    m.to_rows().iter().map(|r| r.iter().map(|x| s1_json(f, x)).collect()).collect()
}

pub fn object(ring: &DpRing, o: &ObjectJson, path: &str) -> Result<TildeModule> {
    match o {
        ObjectJson::Simple(s) => Ok(simple_object(ring, s, &format!("{path}.simple"))?.to_module()),
        ObjectJson::Module(m) => tilde_module(ring, m, &format!("{path}.module")),
    }
}

pub fn morphism(ring: &DpRing, m: &MorphismJson, path: &str) -> Result<TildeMorphism> {
    let src = object(ring, &m.source, &format!("{path}.source"))?;
    let tgt = object(ring, &m.target, &format!("{path}.target"))?;
    let f = ring.field();
    let mpath = format!("{path}.matrix");
    if m.matrix.len() != tgt.d() {
        return Err(Error::InvalidInput(format!("{mpath}: {} rows, expected {}", m.matrix.len(), tgt.d())));
    }
    let rows = columns(&m.matrix, src.d(), &mpath, |x, p| tilde_elem(f, x, p))?;
    TildeMorphism::new(src, tgt, RMatrix::from_rows(rows)).map_err(|e| Error::InvalidInput(format!("{path}: {e}")))
}

pub fn character(p: u32, c: &CharacterJson, path: &str) -> Result<TameCharacter> {
    let at = |e: Error| Error::InvalidInput(format!("{path}: {e}"));
    match (&c.exponent, &c.digits) {
        (Some(_), Some(_)) => Err(Error::InvalidInput(format!("{path}: give either exponent or digits, not both"))),
        (None, None) => Err(Error::InvalidInput(format!("{path}: one of exponent or digits is required"))),
        (None, Some(digits)) => {
            if c.h.is_some_and(|h| h != digits.len()) {
                return Err(Error::InvalidInput(format!("{path}.h: does not match the number of digits")));
            }
            TameCharacter::from_digits(p, digits).map_err(at)
        }
        (Some(x), None) => {
            let h = c.h.ok_or_else(|| Error::InvalidInput(format!("{path}.h: required with exponent")))?;
            TameCharacter::new(p, h, *x).map_err(at)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> DpRing {
        DpRing::new(RingParams::standard(5, 2, 2, 1)).unwrap()
    }

    #[test]
    fn parse_simple_job() {
        let job = JobFile::parse(
            r#"{"params": {"p": 5, "e": 2, "r": 1, "eisenstein": [-5, 0, 1]},
                "payload": {"simple": {"d": 2, "weights": [1, 2], "cyclic": true}}}"#,
        )
        .unwrap();
        let r = DpRing::new(job.params.clone()).unwrap();
        let Payload::Simple(s) = &job.payload else { panic!() };
        let obj = simple_object(&r, s, "payload.simple").unwrap();
        assert_eq!(obj.weights(), &[1, 2]);
        assert_eq!(simple_json(&obj), *s);
    }

    #[test]
    fn unknown_fields_rejected() {
        let e = JobFile::parse(r#"{"params": {"p": 5, "e": 1, "r": 1, "eisenstein": [-5, 1], "x": 1}, "payload": {"character": {"exponent": 1, "h": 1}}}"#);
        assert!(e.unwrap_err().to_string().contains("unknown field `x`"));
    }

    #[test]
    fn module_round_trip() {
        let r = ring();
        let m = SimpleObject::cyclic(&r, vec![1, 2]).unwrap().to_module();
        let j = tilde_module_json(&m);
        assert_eq!(tilde_module(&r, &j, "m").unwrap(), m);
        let text = serde_json::to_string(&j).unwrap();
        let back: TildeModuleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back, j);
    }

    #[test]
    fn element_errors_name_the_path() {
        let r = ring();
        let f = r.field();
        let e = tilde_elem(f, &[vec![7]], "payload.module.fil_gens[0][1]").unwrap_err();
        assert!(e.to_string().contains("payload.module.fil_gens[0][1][0]"));
        let bad = SimpleJson { d: 2, weights: vec![1, 3], g: None, cyclic: true };
        let e = simple_object(&r, &bad, "payload.simple").unwrap_err();
        assert!(e.to_string().contains("payload.simple.weights[1]"));
        let s1 = S1Json { terms: vec![(50, vec![1])] };
        assert!(s1_elem(&r, &s1, "x").is_err());
    }

    #[test]
    fn s1_and_characters() {
        let r = ring();
        let x = r.s1_phi(&r.u_pow(3)).add(r.field(), &r.one());
        assert_eq!(s1_elem(&r, &s1_json(r.field(), &x), "x").unwrap(), x);
        let c = CharacterJson { h: None, exponent: None, digits: Some(vec![2, 1]) };
        assert_eq!(character(5, &c, "c").unwrap().exponent, 7);
        let c = CharacterJson { h: None, exponent: Some(7), digits: None };
        assert!(character(5, &c, "c").is_err());
    }
}
