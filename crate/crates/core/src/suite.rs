//! The verification suite: one check per criterion and corpus algebra.

use std::collections::BTreeMap;

use rand::Rng;
use serde_json::{json, Value};

use crate::ar::{
    ar_triangle, check_almost_split, cocone_identity_extension, is_local, nondegenerate_composition_check,
    verify_defect_formula, verify_duality_dims, EndAlgebra, Locality,
};
use crate::complex::{BoundedComplex, ChainMap};
use crate::corpus::{CorpusAlgebra, ProbeFamily};
use crate::double::tot_cone_permutation;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::homotopy::{equivalence_certificate, find_homotopy_equivalence};
use crate::module::{HomSpace, Module};
use crate::parallel::{self, Execution};
use crate::random::{
    random_chain_map, random_complex, random_double_map, random_extension, rng_for, rows_exact_double,
};
use crate::report::{Check, Report, Status};
use crate::rep::{classical_tau, find_isomorphism, injective, projective, projective_presentation};
use crate::serre::{
    compare_alt, compare_horseshoe, horseshoe, serre_alt, serre_inverse, serre_of_complex, serre_of_module,
    serre_on_map, Staircase,
};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub execution: Execution,
    pub probes: ProbeFamily,
    pub duality_pairs: usize,
    pub extensions: usize,
    pub double_maps: usize,
    pub exact_rows: usize,
    pub triangle_maps: usize,
    pub probe_samples: usize,
    pub equivalence_attempts: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            execution: Execution::Parallel,
            probes: ProbeFamily::Default,
            duality_pairs: 50,
            extensions: 50,
            double_maps: 10,
            exact_rows: 10,
            triangle_maps: 20,
            probe_samples: 2,
            equivalence_attempts: 20,
        }
    }
}

pub const CRITERIA: [(u8, &str); 10] = [
    (1, "duality_dims"),
    (2, "presentation_independence"),
    (3, "quasi_inverse"),
    (4, "module_case"),
    (5, "tau_oracle"),
    (6, "defect_formula"),
    (7, "ar_triangles"),
    (8, "nondegeneracy"),
    (9, "totalization"),
    (10, "triangle_functor"),
];

pub fn check_name(criterion: u8, algebra: &str) -> String {
    let label = CRITERIA
        .iter()
        .find(|(k, _)| *k == criterion)
        .map(|(_, l)| *l)
        .unwrap_or("unknown");
    format!("c{criterion:02}_{label}/{algebra}")
}

/// Outcome of many instances of one property.
#[derive(Default)]
struct Tally {
    instances: usize,
    failures: Vec<Value>,
    extra: BTreeMap<String, Value>,
}

impl Tally {
    fn record(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.instances += 1;
        if !ok {
            self.failures.push(witness());
        }
    }

    fn record_result(&mut self, label: &str, r: Result<bool>, witness: impl FnOnce() -> Value) {
        match r {
            Ok(ok) => self.record(ok, witness),
            Err(e) => self.record(false, || json!({"instance": label, "error": e.to_string()})),
        }
    }

    fn into_check(self, name: String) -> Check {
        let mut w = json!({"instances": self.instances, "failures": self.failures});
        for (k, v) in self.extra {
            w[k] = v;
        }
        Check::new(name, self.failures.is_empty(), w)
    }
}

fn homology_dims(x: &BoundedComplex) -> Vec<(i64, Vec<usize>)> {
    x.homology()
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| (n, m.dims().to_vec()))
        .collect()
}

fn equivalent(x: &BoundedComplex, y: &BoundedComplex, seed: u64, label: &str, attempts: usize) -> Result<bool> {
    let mut rng = rng_for(seed, label);
    Ok(find_homotopy_equivalence(x, y, &mut rng, attempts)?.is_some())
}

fn c1(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = rng_for(cfg.seed, &check_name(1, &c.name));
    // A third of the pairs take X independent of M; the rest take X = M[s]
    // or X = M ⊕ Y so that Hom_K(M, X) is rarely zero.
    let pairs = (0..cfg.duality_pairs)
        .map(|k| {
            let m = random_complex(&c.algebra, &mut rng, 4)?;
            let y = random_complex(&c.algebra, &mut rng, 4)?;
            let x = match k % 3 {
                0 => y,
                1 => m.shift(rng.gen_range(-1..=1)),
                _ => BoundedComplex::direct_sum(&c.algebra, &[m.clone(), y]).sum,
            };
            Ok((m, x))
        })
        .collect::<Result<Vec<_>>>()?;
    let results = parallel::map(cfg.execution, pairs.into_iter().enumerate().collect(), |(k, (m, x))| {
        let sm = serre_of_complex(&m)?.output;
        Ok((k, verify_duality_dims(&m, &x, &sm)?))
    });
    let mut t = Tally::default();
    let mut nonzero = 0;
    for r in results {
        let r: Result<_> = r;
        match r {
            Ok((k, d)) => {
                nonzero += usize::from(d.dim_left > 0);
                t.record(d.equal, || json!({"pair": k, "dims": d}))
            }
            Err(e) => t.record(false, || json!({"error": e.to_string()})),
        }
    }
    t.extra.insert("nonzero_hom".into(), json!(nonzero));
    Ok(t)
}

/// `(q, ε)` variants for `serre_alt`, labelled; non-minimal ones add a
/// projective stalk `Z` with zero map, or a staircase `Z'` mapped by the
/// identity.
fn presentations(c: &CorpusAlgebra, name: &str, x: &BoundedComplex, index: usize) -> Result<Vec<(String, ChainMap, ChainMap, bool)>> {
    let alg = &c.algebra;
    let std = serre_of_complex(x)?;
    let (q, eps) = (std.presentation.p.clone(), std.presentation.epsilon.clone());
    let mut out = vec![(format!("{name}:staircase"), q.clone(), eps.clone(), false)];
    if x.lo() == x.hi() && !x.is_zero() {
        let n = x.lo();
        let pres = projective_presentation(x.term(n));
        let qs = BoundedComplex::stalk(pres.p.source(), n);
        let ps = BoundedComplex::stalk(pres.p.target(), n);
        let q1 = ChainMap::new(&qs, &ps, |_| pres.p.clone())?;
        let e1 = ChainMap::new(&ps, x, |_| pres.epsilon.clone())?;
        out.push((format!("{name}:minimal"), q1, e1, false));
    }
    let base = out.last().cloned().expect("nonempty");
    let n_v = alg.num_vertices();
    for v in 0..n_v {
        for deg in [x.lo(), x.hi()] {
            let z = BoundedComplex::stalk(&projective(alg, v), deg);
            let sum = BoundedComplex::direct_sum(alg, &[base.1.source().clone(), z]);
            let qa = base.1.compose(&sum.projections[0]);
            out.push((format!("{name}:zero_summand({v},{deg})"), qa, base.2.clone(), true));
        }
        for deg in [x.hi(), x.lo() - 1] {
            let w = (v + index) % n_v;
            let gens = [(deg, projective(alg, w))].into_iter().collect();
            let zs = Staircase::new(alg, gens).complex;
            let qsum = BoundedComplex::direct_sum(alg, &[base.1.source().clone(), zs.clone()]);
            let psum = BoundedComplex::direct_sum(alg, &[base.1.target().clone(), zs]);
            let qb = psum.injections[0]
                .compose(&base.1)
                .compose(&qsum.projections[0])
                .add(&psum.injections[1].compose(&qsum.projections[1]));
            let eb = base.2.compose(&psum.projections[0]);
            out.push((format!("{name}:identity_summand({w},{deg})"), qb, eb, true));
        }
    }
    Ok(out)
}

fn c2(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let complexes = c.complexes();
    let results = parallel::map(cfg.execution, complexes.into_iter().enumerate().collect(), |(k, (name, x))| {
        let std = serre_of_complex(&x)?;
        let mut out = Vec::new();
        for (label, q, eps, nonminimal) in presentations(c, &name, &x, k)? {
            let ok = serre_alt(&q, &eps)
                .and_then(|alt| compare_alt(&std, &alt))
                .map(|cmp| equivalence_certificate(&cmp).is_some());
            out.push((label, nonminimal, ok));
        }
        Ok(out)
    });
    let mut t = Tally::default();
    let mut nonminimal = 0;
    for r in results {
        let r: Result<Vec<(String, bool, Result<bool>)>> = r;
        match r {
            Ok(items) => {
                for (label, nm, ok) in items {
                    nonminimal += usize::from(nm);
                    let l = label.clone();
                    t.record_result(&label, ok, || json!({"presentation": l}));
                }
            }
            Err(e) => t.record(false, || json!({"error": e.to_string()})),
        }
    }
    t.extra.insert("nonminimal".into(), json!(nonminimal));
    if nonminimal < 10 {
        t.failures.push(json!({"error": "fewer than 10 non-minimal presentations"}));
    }
    Ok(t)
}

fn c3(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let complexes = c.complexes();
    let seed = cfg.seed;
    let attempts = cfg.equivalence_attempts;
    let results = parallel::map(cfg.execution, complexes, |(name, x)| {
        let s = serre_of_complex(&x)?.output;
        let back = serre_inverse(&s)?.output;
        let left = equivalent(&x, &back, seed, &format!("c03/{name}/left"), attempts)?;
        let si = serre_inverse(&x)?.output;
        let again = serre_of_complex(&si)?.output;
        let right = equivalent(&x, &again, seed, &format!("c03/{name}/right"), attempts)?;
        Ok((name, left, right))
    });
    let mut t = Tally::default();
    for r in results {
        let r: Result<(String, bool, bool)> = r;
        match r {
            Ok((name, l, rt)) => t.record(l && rt, || json!({"complex": name, "inverse_after": l, "after_inverse": rt})),
            Err(e) => t.record(false, || json!({"error": e.to_string()})),
        }
    }
    Ok(t)
}

/// `dim (ν M)_v = dim Hom_Λ(M, P(v))`.
fn nakayama_dims(m: &Module) -> Result<Vec<usize>> {
    let alg = m.algebra();
    (0..alg.num_vertices())
        .map(|v| Ok(HomSpace::new(m, &projective(alg, v))?.dim()))
        .collect()
}

fn c4(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::default();
    for (name, m) in &c.indecomposables {
        let x = serre_of_module(m)?;
        let h = homology_dims(&x);
        let nu = nakayama_dims(m)?;
        let expected: Vec<(i64, Vec<usize>)> = if nu.iter().all(|&d| d == 0) {
            vec![]
        } else {
            vec![(0, nu.clone())]
        };
        t.record(h == expected, || json!({"module": name, "homology": h, "nu_dims": nu}));
    }
    for v in 0..c.algebra.num_vertices() {
        let s = serre_of_complex(&BoundedComplex::stalk(&projective(&c.algebra, v), 0))?.output;
        let i = BoundedComplex::stalk(&injective(&c.algebra, v), 0);
        let ok = equivalent(&s, &i, cfg.seed, &format!("c04/{}/{v}", c.name), cfg.equivalence_attempts)?;
        t.record(ok, || json!({"projective": v}));
    }
    Ok(t)
}

fn c5(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let mut t = Tally::default();
    let mut rng = rng_for(cfg.seed, &check_name(5, &c.name));
    for (name, m) in &c.indecomposables {
        if projective_presentation(m).p.source().is_zero() && projective_presentation(m).epsilon.is_isomorphism() {
            continue;
        }
        let tau = classical_tau(m);
        let kernel = serre_of_module(m)?.term(-2).clone();
        let ok = tau.dims() == kernel.dims() && find_isomorphism(&tau, &kernel, &mut rng, 20).is_some();
        t.record(ok, || json!({"module": name, "tau": tau.dims(), "kernel": kernel.dims()}));
    }
    Ok(t)
}

fn c6(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = rng_for(cfg.seed, &check_name(6, &c.name));
    let mut inputs = Vec::new();
    for k in 0..cfg.extensions {
        let e = if k < 5 {
            cocone_identity_extension(&random_complex(&c.algebra, &mut rng, 3)?)?
        } else {
            random_extension(&c.algebra, &mut rng)?
        };
        // Half of the test objects involve C so that maps into C often fail
        // to lift.
        let y = random_complex(&c.algebra, &mut rng, 3)?;
        let m = match k % 4 {
            0 | 1 => y,
            2 => e.c().clone(),
            _ => BoundedComplex::direct_sum(&c.algebra, &[e.c().clone(), y]).sum,
        };
        inputs.push((k, e, m));
    }
    let results = parallel::map(cfg.execution, inputs, |(k, e, m)| {
        let sm = serre_of_complex(&m)?.output;
        Ok((k, verify_defect_formula(&e, &m, &sm)?))
    });
    let mut t = Tally::default();
    let mut nonzero = 0;
    for r in results {
        let r: Result<_> = r;
        match r {
            Ok((k, d)) => {
                nonzero += usize::from(d.covariant > 0);
                t.record(d.equal, || json!({"extension": k, "defects": d}))
            }
            Err(e) => t.record(false, || json!({"error": e.to_string()})),
        }
    }
    t.extra.insert("nonzero_defect".into(), json!(nonzero));
    Ok(t)
}

fn c7(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let probes = c.probes(cfg.probes, cfg.seed)?;
    let seed = cfg.seed;
    let samples = cfg.probe_samples;
    let results = parallel::map(cfg.execution, c.complexes(), |(name, x)| -> Result<Option<Value>> {
        let end = EndAlgebra::new(&x)?;
        if is_local(&end) != Locality::Local {
            return Ok(None);
        }
        end.verify()?;
        let t = ar_triangle(&x, false)?;
        let mut failed: Vec<String> = t
            .certify()
            .into_iter()
            .filter(|(_, ok, _)| !ok)
            .map(|(n, _, _)| n)
            .collect();
        let mut all = probes.clone();
        all.extend([t.x.clone(), t.sx().clone(), t.e.clone()]);
        let mut rng = rng_for(seed, &format!("c07/{name}"));
        let (right, left) = check_almost_split(&t, &all, &mut rng, samples)?;
        if !right.passed() {
            failed.push("right_almost_split".into());
        }
        if !left.passed() {
            failed.push("left_almost_split".into());
        }
        Ok(Some(json!({
            "complex": name,
            "radical_dim": t.end.radical_dim(),
            "maps_checked": right.maps_checked + left.maps_checked,
            "failed": failed,
        })))
    });
    let mut t = Tally::default();
    let mut skipped = 0;
    for r in results {
        match r {
            Ok(Some(w)) => {
                let ok = w["failed"].as_array().is_some_and(Vec::is_empty);
                t.record(ok, || w);
            }
            Ok(None) => skipped += 1,
            Err(e) => t.record(false, || json!({"error": e.to_string()})),
        }
    }
    t.extra.insert("skipped_not_certified_local".into(), json!(skipped));
    Ok(t)
}

fn c8(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let probes = c.probes(cfg.probes, cfg.seed)?;
    let results = parallel::map(cfg.execution, c.complexes(), |(name, x)| {
        let sx = serre_of_complex(&x)?.output;
        Ok((name, nondegenerate_composition_check(&x, &sx, &probes)?))
    });
    let mut t = Tally::default();
    for r in results {
        let r: Result<_> = r;
        match r {
            Ok((name, rep)) => t.record(rep.passed(), || json!({"complex": name, "violations": rep.violations})),
            Err(e) => t.record(false, || json!({"error": e.to_string()})),
        }
    }
    Ok(t)
}

fn c9(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = rng_for(cfg.seed, &check_name(9, &c.name));
    let mut t = Tally::default();
    for k in 0..cfg.double_maps {
        let f = random_double_map(&c.algebra, &mut rng)?;
        let (_, _, p) = tot_cone_permutation(&f);
        let (lo, hi) = (p.source().lo().min(p.target().lo()), p.source().hi().max(p.target().hi()));
        let permutation = (lo..=hi).all(|n| p.component(n).maps().iter().all(is_permutation));
        let ok = p.is_chain_map() && permutation;
        t.record(ok, || json!({"double_map": k, "permutation": permutation}));
    }
    for k in 0..cfg.exact_rows {
        let d = rows_exact_double(&c.algebra, &mut rng)?;
        let rows_exact = (d.positions().map(|p| p.1).min().unwrap_or(0)..=d.positions().map(|p| p.1).max().unwrap_or(-1))
            .all(|j| d.row(j).is_acyclic());
        let ok = rows_exact && d.tot().complex.is_acyclic();
        t.record(ok, || json!({"exact_rows": k, "rows_exact": rows_exact}));
    }
    Ok(t)
}

/// Square 0/1 matrix with exactly one 1 in every row and column.
fn is_permutation(m: &Matrix) -> bool {
    m.rows() == m.cols()
        && (0..m.rows()).all(|i| {
            m.row(i).iter().filter(|x| x.is_one()).count() == 1
                && m.row(i).iter().all(|x| x.is_zero() || x.is_one())
                && m.column(i).iter().filter(|x| x.is_one()).count() == 1
        })
}

fn c10(c: &CorpusAlgebra, cfg: &SuiteConfig) -> Result<Tally> {
    let mut rng = rng_for(cfg.seed, &check_name(10, &c.name));
    let inputs = (0..cfg.triangle_maps)
        .map(|k| {
            let m = random_complex(&c.algebra, &mut rng, 3)?;
            let y = random_complex(&c.algebra, &mut rng, 3)?;
            let n = if k % 2 == 0 {
                y
            } else {
                BoundedComplex::direct_sum(&c.algebra, &[m.clone(), y]).sum
            };
            let mut f = random_chain_map(&m, &n, &mut rng)?;
            for _ in 0..4 {
                if !f.is_zero() {
                    break;
                }
                f = random_chain_map(&m, &n, &mut rng)?;
            }
            Ok((k, f))
        })
        .collect::<Result<Vec<_>>>()?;
    let results = parallel::map(cfg.execution, inputs, |(k, f)| -> Result<(usize, bool, bool, bool)> {
        let sm = serre_of_complex(f.source())?;
        let sn = serre_of_complex(f.target())?;
        let hs = horseshoe(&f, &sm, &sn)?;
        let sf = serre_on_map(&f, &sm, &sn)?;
        let exact = hs.kernel_shifted == sf.cone().complex;
        let s_cone = serre_of_complex(&hs.cone)?;
        let cmp = compare_horseshoe(&s_cone, &hs)?;
        let certified = equivalence_certificate(&cmp).is_some();
        Ok((k, exact, certified, !f.is_zero()))
    });
    let mut t = Tally::default();
    let mut fallbacks = 0;
    let mut nonzero = 0;
    for r in results {
        match r {
            Ok((k, exact, certified, nz)) => {
                nonzero += usize::from(nz);
                fallbacks += usize::from(!exact);
                t.record(exact && certified, || json!({"map": k, "kernel_is_cone": exact, "certified": certified}));
            }
            Err(e) => t.record(false, || json!({"error": e.to_string()})),
        }
    }
    t.extra.insert("fallbacks".into(), json!(fallbacks));
    t.extra.insert("nonzero_maps".into(), json!(nonzero));
    Ok(t)
}

/// Runs one criterion on one algebra.
pub fn run_criterion(criterion: u8, c: &CorpusAlgebra, cfg: &SuiteConfig) -> Check {
    let name = check_name(criterion, &c.name);
    let tally = match criterion {
        1 => c1(c, cfg),
        2 => c2(c, cfg),
        3 => c3(c, cfg),
        4 => c4(c, cfg),
        5 => c5(c, cfg),
        6 => c6(c, cfg),
        7 => c7(c, cfg),
        8 => c8(c, cfg),
        9 => c9(c, cfg),
        10 => c10(c, cfg),
        _ => Err(Error::Precondition(format!("no criterion {criterion}"))),
    };
    match tally {
        Ok(t) => t.into_check(name),
        Err(e) => Check::new(name, false, json!({"error": e.to_string()})),
    }
}

/// Every criterion on every algebra.
pub fn run_suite(corpus: &[CorpusAlgebra], cfg: &SuiteConfig) -> Report {
    let jobs: Vec<(u8, &CorpusAlgebra)> = CRITERIA
        .iter()
        .flat_map(|&(k, _)| corpus.iter().map(move |c| (k, c)))
        .collect();
    let checks = parallel::map(cfg.execution, jobs, |(k, c)| run_criterion(k, c, cfg));
    Report::new("suite", cfg.seed, checks)
}

/// Whether every check of a criterion passed.
pub fn criterion_status(report: &Report, criterion: u8) -> Status {
    let prefix = format!("c{criterion:02}_");
    let mut checks = report.checks.iter().filter(|c| c.name.starts_with(&prefix)).peekable();
    if checks.peek().is_none() {
        return Status::Skip;
    }
    if checks.all(|c| c.status != Status::Fail) {
        Status::Pass
    } else {
        Status::Fail
    }
}
