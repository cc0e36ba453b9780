//! The bundled verification corpus: algebras, their indecomposable modules,
//! corpus complexes and probe families.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::BoundAlgebra;
use crate::complex::BoundedComplex;
use crate::error::{Error, Result};
use crate::io::parse_algebra_file;
use crate::module::Module;
use crate::random::{random_complex, rng_for};
use crate::rep::{find_isomorphism, injective, projective, projective_presentation, radical_quotient};

const BUNDLED: &[(&str, &str)] = &[
    ("a2_gf101", include_str!("../corpus/a2_gf101.toml")),
    ("a2_q", include_str!("../corpus/a2_q.toml")),
    ("a3_gf101", include_str!("../corpus/a3_gf101.toml")),
    ("a3_q", include_str!("../corpus/a3_q.toml")),
    ("dual_numbers_gf101", include_str!("../corpus/dual_numbers_gf101.toml")),
    ("dual_numbers_q", include_str!("../corpus/dual_numbers_q.toml")),
    ("kronecker_gf101", include_str!("../corpus/kronecker_gf101.toml")),
    ("kronecker_q", include_str!("../corpus/kronecker_q.toml")),
    ("nakayama3_gf101", include_str!("../corpus/nakayama3_gf101.toml")),
    ("nakayama3_q", include_str!("../corpus/nakayama3_q.toml")),
];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ProbeFamily {
    /// Indecomposable module stalks shifted by −2..=2.
    #[default]
    Default,
    /// The default family plus five seeded random complexes.
    Extended,
}

#[derive(Clone, Debug)]
pub struct CorpusAlgebra {
    pub name: String,
    pub algebra: Arc<BoundAlgebra>,
    /// Modules named in the algebra file.
    pub named: BTreeMap<String, Module>,
    /// `P(v)/rad^k`, `I(v)` and the named modules, up to isomorphism.
    pub indecomposables: Vec<(String, Module)>,
}

impl CorpusAlgebra {
    pub fn from_toml(name: &str, text: &str) -> Result<Self> {
        let file = parse_algebra_file(text)?;
        let algebra = Arc::new(file.build()?);
        let mut named = BTreeMap::new();
        for m in &file.modules {
            named.insert(m.name.clone(), m.module.build(&algebra)?);
        }
        let labels = algebra.quiver().vertices().to_vec();
        let mut candidates: Vec<(String, Module)> = Vec::new();
        for (v, label) in labels.iter().enumerate() {
            let p = projective(&algebra, v);
            for k in 1..algebra.max_path_length() {
                let q = radical_quotient(&p, k);
                if q.total_dim() < p.total_dim() {
                    candidates.push((format!("P:{label}/{k}"), q));
                }
            }
            candidates.push((format!("P:{label}"), p));
        }
        for (v, label) in labels.iter().enumerate() {
            candidates.push((format!("I:{label}"), injective(&algebra, v)));
        }
        candidates.extend(named.iter().map(|(n, m)| (n.clone(), m.clone())));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut indecomposables: Vec<(String, Module)> = Vec::new();
        for (n, m) in candidates {
            let seen = indecomposables
                .iter()
                .any(|(_, x)| x.dims() == m.dims() && find_isomorphism(x, &m, &mut rng, 8).is_some());
            if !seen {
                indecomposables.push((n, m));
            }
        }
        Ok(CorpusAlgebra {
            name: file.name.unwrap_or_else(|| name.to_string()),
            algebra,
            named,
            indecomposables,
        })
    }

    /// Stalks of the indecomposables in degree 0 and, for each
    /// non-projective one, its minimal projective presentation in degrees
    /// −1, 0.
    pub fn complexes(&self) -> Vec<(String, BoundedComplex)> {
        let mut out: Vec<(String, BoundedComplex)> = self
            .indecomposables
            .iter()
            .map(|(n, m)| (n.clone(), BoundedComplex::stalk(m, 0)))
            .collect();
        for (n, m) in &self.indecomposables {
            let pres = projective_presentation(m);
            if pres.p.source().is_zero() {
                continue;
            }
            let x = BoundedComplex::new(
                self.algebra.clone(),
                -1,
                vec![pres.p.source().clone(), pres.p.target().clone()],
                vec![pres.p.clone()],
            )
            .expect("a map is a two-term complex");
            out.push((format!("pres({n})"), x));
        }
        out
    }

    pub fn probes(&self, family: ProbeFamily, seed: u64) -> Result<Vec<BoundedComplex>> {
        let mut out = Vec::new();
        for (_, m) in &self.indecomposables {
            for s in -2..=2 {
                out.push(BoundedComplex::stalk(m, s));
            }
        }
        if family == ProbeFamily::Extended {
            let mut rng = rng_for(seed, &format!("probes/{}", self.name));
            for _ in 0..5 {
                out.push(random_complex(&self.algebra, &mut rng, 3)?);
            }
        }
        Ok(out)
    }

    pub fn module(&self, name: &str) -> Result<Module> {
        if let Some(m) = self.named.get(name) {
            return Ok(m.clone());
        }
        crate::io::module_by_name(&self.algebra, name)
    }
}

pub fn bundled() -> Result<Vec<CorpusAlgebra>> {
    BUNDLED
        .iter()
        .map(|(n, t)| {
            CorpusAlgebra::from_toml(n, t).map_err(|e| match e {
                Error::Parse { location, message } => Error::Parse {
                    location: format!("{n}: {location}"),
                    message,
                },
                other => other,
            })
        })
        .collect()
}

/// Every `*.toml` file in `dir`, sorted by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<CorpusAlgebra>> {
    let io_err = |e: std::io::Error| Error::Parse {
        location: dir.display().to_string(),
        message: e.to_string(),
    };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(io_err)?;
            let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("algebra");
            CorpusAlgebra::from_toml(stem, &text).map_err(|e| match e {
                Error::Parse { location, message } => Error::Parse {
                    location: format!("{}: {location}", p.display()),
                    message,
                },
                other => other,
            })
        })
        .collect()
}
