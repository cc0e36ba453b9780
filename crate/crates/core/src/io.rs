//! Algebra (TOML), module and complex (JSON) file formats.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{BoundAlgebra, Quiver, Relation};
use crate::complex::{BoundedComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::module::{Module, ModuleHom};
use crate::rep::{injective, projective, radical_quotient};

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn scalar(&self, field: Field) -> Result<Scalar> {
        match self {
            Entry::Int(n) => Ok(field.from_i64(*n)),
            Entry::Text(t) => field.parse_scalar(t),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: Entry,
    pub path: Vec<String>,
}

/// A module given by dimension vector and arrow matrices (row-major,
/// `dim(target) × dim(source)`); arrows between zero spaces may be omitted.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub dims: Vec<usize>,
    #[serde(default)]
    pub arrows: BTreeMap<String, Vec<Vec<Entry>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedModuleSpec {
    pub name: String,
    #[serde(flatten)]
    pub module: ModuleSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default)]
    pub name: Option<String>,
    pub field: String,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub relations: Vec<Vec<TermSpec>>,
    pub max_path_length: usize,
    /// Extra named modules, e.g. regular Kronecker modules.
    #[serde(default)]
    pub modules: Vec<NamedModuleSpec>,
}

fn parse_error(location: impl Into<String>, message: impl ToString) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.to_string(),
    }
}

/// Parses an algebra file; errors carry the field path and line.
pub fn parse_algebra_file(text: &str) -> Result<AlgebraFile> {
    let de = toml::Deserializer::parse(text).map_err(|e| parse_error(line_of(text, e.span()), e.message()))?;
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let line = line_of(text, inner.span());
        parse_error(format!("{line} {path}"), inner.message())
    })
}

fn line_of(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(r) => format!("line {}", text[..r.start.min(text.len())].lines().count().max(1)),
        None => "line ?".into(),
    }
}

impl AlgebraFile {
    pub fn build(&self) -> Result<BoundAlgebra> {
        let field = Field::parse(&self.field)?;
        let quiver = Quiver::new(
            self.vertices.clone(),
            self.arrows
                .iter()
                .map(|a| (a.name.clone(), a.from.clone(), a.to.clone()))
                .collect(),
        )?;
        let relations = self
            .relations
            .iter()
            .enumerate()
            .map(|(r, terms)| {
                let terms = terms
                    .iter()
                    .enumerate()
                    .map(|(t, term)| {
                        let at = || format!("relations[{r}][{t}]");
                        let c = term.coeff.scalar(field).map_err(|e| parse_error(at(), e))?;
                        let path = term
                            .path
                            .iter()
                            .map(|name| quiver.arrow(name))
                            .collect::<Result<Vec<_>>>()
                            .map_err(|e| parse_error(format!("{}.path", at()), e))?;
                        Ok((c, path))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Relation { terms })
            })
            .collect::<Result<Vec<_>>>()?;
        BoundAlgebra::new(quiver, relations, field, self.max_path_length)
    }
}

pub fn parse_algebra(text: &str) -> Result<BoundAlgebra> {
    parse_algebra_file(text)?.build()
}

fn matrix_from_rows(field: Field, rows: &[Vec<Entry>], shape: (usize, usize), at: &str) -> Result<Matrix> {
    if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
        return Err(parse_error(at, format!("expected a {}x{} matrix", shape.0, shape.1)));
    }
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|e| e.scalar(field)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()
        .map_err(|e| parse_error(at, e))?;
    Matrix::from_rows(field, rows, shape.1)
}

impl ModuleSpec {
    pub fn build(&self, alg: &Arc<BoundAlgebra>) -> Result<Module> {
        let q = alg.quiver();
        if self.dims.len() != q.num_vertices() {
            return Err(parse_error("dims", format!("expected {} entries", q.num_vertices())));
        }
        for name in self.arrows.keys() {
            q.arrow(name).map_err(|e| parse_error(format!("arrows.{name}"), e))?;
        }
        let arrows = q
            .arrows()
            .iter()
            .map(|a| {
                let shape = (self.dims[a.target], self.dims[a.source]);
                match self.arrows.get(&a.name) {
                    Some(rows) => matrix_from_rows(alg.field(), rows, shape, &format!("arrows.{}", a.name)),
                    None if shape.0 == 0 || shape.1 == 0 => Ok(Matrix::zeros(alg.field(), shape.0, shape.1)),
                    None => Err(parse_error(format!("arrows.{}", a.name), "missing matrix")),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Module::new(alg.clone(), self.dims.clone(), arrows)
    }

    pub fn of(m: &Module) -> ModuleSpec {
        let q = m.algebra().quiver();
        let arrows = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arrow)| (arrow.name.clone(), matrix_rows(m.arrow(a))))
            .collect();
        ModuleSpec {
            dims: m.dims().to_vec(),
            arrows,
        }
    }
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<Entry>> {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|s| match s.to_json() {
                    Value::String(t) => Entry::Text(t),
                    v => Entry::Int(v.as_i64().expect("residues are integers")),
                })
                .collect()
        })
        .collect()
}

/// `P:v`, `I:v`, `S:v` or `P:v/k` (`P(v)/rad^k`), with `v` a vertex label.
pub fn module_by_name(alg: &Arc<BoundAlgebra>, name: &str) -> Result<Module> {
    let bad = || parse_error("module", format!("unknown module reference {name:?}"));
    let (kind, rest) = name.split_once(':').ok_or_else(bad)?;
    let (label, power) = match rest.split_once('/') {
        Some((l, k)) => (l, Some(k.parse::<usize>().map_err(|_| bad())?)),
        None => (rest, None),
    };
    let v = alg.quiver().vertex(label)?;
    match (kind, power) {
        ("P", None) => Ok(projective(alg, v)),
        ("P", Some(k)) => Ok(radical_quotient(&projective(alg, v), k)),
        ("I", None) => Ok(injective(alg, v)),
        ("S", None) => Ok(Module::simple(alg.clone(), v)),
        _ => Err(bad()),
    }
}

/// Module given inline or by reference.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ModuleRef {
    Name(String),
    Spec(ModuleSpec),
}

impl ModuleRef {
    pub fn build(&self, alg: &Arc<BoundAlgebra>, named: &BTreeMap<String, Module>) -> Result<Module> {
        match self {
            ModuleRef::Name(n) => match named.get(n) {
                Some(m) => Ok(m.clone()),
                None => module_by_name(alg, n),
            },
            ModuleRef::Spec(s) => s.build(alg),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DegreeSpec {
    pub n: i64,
    pub module: ModuleRef,
    /// One matrix per vertex.
    #[serde(default)]
    pub d_to_next: Option<Vec<Vec<Vec<Entry>>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub degrees: Vec<DegreeSpec>,
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        parse_error(format!("line {} {path}", inner.line()), inner)
    })
}

pub fn parse_module(alg: &Arc<BoundAlgebra>, text: &str) -> Result<Module> {
    parse_json::<ModuleSpec>(text)?.build(alg)
}

impl ComplexFile {
    pub fn build(&self, alg: &Arc<BoundAlgebra>, named: &BTreeMap<String, Module>) -> Result<BoundedComplex> {
        if self.degrees.is_empty() {
            return Ok(BoundedComplex::zero(alg.clone()));
        }
        let lo = self.degrees[0].n;
        for (k, d) in self.degrees.iter().enumerate() {
            if d.n != lo + k as i64 {
                return Err(parse_error(format!("degrees[{k}].n"), "degrees must be consecutive"));
            }
        }
        let terms = self
            .degrees
            .iter()
            .enumerate()
            .map(|(k, d)| d.module.build(alg, named).map_err(|e| parse_error(format!("degrees[{k}].module"), e)))
            .collect::<Result<Vec<_>>>()?;
        let mut diffs = Vec::new();
        for k in 0..terms.len().saturating_sub(1) {
            let at = format!("degrees[{k}].d_to_next");
            let (s, t) = (&terms[k], &terms[k + 1]);
            let maps = match &self.degrees[k].d_to_next {
                Some(ms) => {
                    if ms.len() != alg.num_vertices() {
                        return Err(parse_error(at, "one matrix per vertex expected"));
                    }
                    ms.iter()
                        .enumerate()
                        .map(|(v, rows)| matrix_from_rows(alg.field(), rows, (t.dim_at(v), s.dim_at(v)), &format!("{at}[{v}]")))
                        .collect::<Result<Vec<_>>>()?
                }
                None => ModuleHom::zero(s, t).maps().to_vec(),
            };
            diffs.push(ModuleHom::new(s.clone(), t.clone(), maps).map_err(|e| parse_error(at, e))?);
        }
        BoundedComplex::new(alg.clone(), lo, terms, diffs)
    }
}

pub fn parse_complex(alg: &Arc<BoundAlgebra>, text: &str, named: &BTreeMap<String, Module>) -> Result<BoundedComplex> {
    parse_json::<ComplexFile>(text)?.build(alg, named)
}

pub fn module_to_json(m: &Module) -> Value {
    serde_json::to_value(ModuleSpec::of(m)).expect("serializable")
}

pub fn complex_to_json(x: &BoundedComplex) -> Value {
    if x.is_zero() {
        return json!({"degrees": []});
    }
    let degrees: Vec<Value> = x
        .degrees()
        .map(|n| {
            let mut d = json!({"n": n, "module": module_to_json(x.term(n))});
            if n < x.hi() {
                let maps: Vec<Vec<Vec<Entry>>> = x.diff(n).maps().iter().map(matrix_rows).collect();
                d["d_to_next"] = serde_json::to_value(maps).expect("serializable");
            }
            d
        })
        .collect();
    json!({ "degrees": degrees })
}

/// Per-degree, per-vertex matrices of a chain map, over the union of the
/// degree windows.
pub fn chain_map_to_json(f: &ChainMap) -> Value {
    let (x, y) = (f.source(), f.target());
    let degrees: Vec<Value> = if x.is_zero() || y.is_zero() {
        vec![]
    } else {
        (x.lo().max(y.lo())..=x.hi().min(y.hi()))
            .map(|n| {
                let maps: Vec<Vec<Vec<Entry>>> = f.component(n).maps().iter().map(matrix_rows).collect();
                json!({"n": n, "maps": maps})
            })
            .collect()
    };
    json!({ "degrees": degrees })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = r#"
field = "Q"
vertices = ["1", "2"]
arrows = [{ name = "a", from = "1", to = "2" }]
max_path_length = 2
"#;

    fn a2() -> Arc<BoundAlgebra> {
        Arc::new(parse_algebra(A2).unwrap())
    }

    #[test]
    fn parses_a2() {
        assert_eq!(a2().dim(), 3);
    }

    #[test]
    fn unknown_arrow_in_relation() {
        let text = r#"
field = "Q"
vertices = ["1"]
arrows = [{ name = "x", from = "1", to = "1" }]
relations = [[{ coeff = "1", path = ["x", "y"] }]]
max_path_length = 2
"#;
        match parse_algebra(text) {
            Err(Error::Parse { location, .. }) => assert!(location.contains("relations[0][0].path")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_prime_field() {
        let text = A2.replace("\"Q\"", "\"GF:4\"");
        assert!(matches!(parse_algebra(&text), Err(Error::NonPrime(4))));
    }

    #[test]
    fn typo_reports_path() {
        let text = A2.replace("max_path_length = 2", "max_path_length = \"two\"");
        match parse_algebra_file(&text) {
            Err(Error::Parse { location, .. }) => assert!(location.contains("max_path_length")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn module_round_trip() {
        let alg = a2();
        let m = parse_module(&alg, r#"{"dims": [1, 1], "arrows": {"a": [["1/2"]]}}"#).unwrap();
        let back = serde_json::to_string(&module_to_json(&m)).unwrap();
        assert_eq!(parse_module(&alg, &back).unwrap(), m);
        assert!(parse_module(&alg, r#"{"dims": [1, 1], "arrows": {"b": [["1"]]}}"#).is_err());
        assert!(parse_module(&alg, r#"{"dims": [1, 1]}"#).is_err());
    }

    #[test]
    fn named_modules() {
        let alg = a2();
        assert_eq!(module_by_name(&alg, "P:1").unwrap().dims(), &[1, 1]);
        assert_eq!(module_by_name(&alg, "P:1/1").unwrap().dims(), &[1, 0]);
        assert_eq!(module_by_name(&alg, "I:2").unwrap().dims(), &[1, 1]);
        assert!(module_by_name(&alg, "Q:1").is_err());
    }

    #[test]
    fn complex_round_trip() {
        let alg = a2();
        let text = r#"{"degrees": [
            {"n": -1, "module": "P:2", "d_to_next": [[[]], [["1"]]]},
            {"n": 0, "module": "P:1"}
        ]}"#;
        let x = parse_complex(&alg, text, &BTreeMap::new()).unwrap();
        assert_eq!((x.lo(), x.hi()), (-1, 0));
        let back = complex_to_json(&x).to_string();
        assert_eq!(parse_complex(&alg, &back, &BTreeMap::new()).unwrap(), x);
        let bad = text.replace(r#"[["1"]]"#, r#"[["1", "0"]]"#);
        assert!(matches!(parse_complex(&alg, &bad, &BTreeMap::new()), Err(Error::Parse { .. })));
    }
}
