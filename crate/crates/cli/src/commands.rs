//! Command dispatch: each command returns a report or an input error.

use std::path::Path;

use serde_json::{json, Value};
use serrekb::ar::{
    ar_triangle, check_almost_split, is_local, nondegenerate_composition_check, verify_defect_formula,
    verify_duality_dims, EndAlgebra,
};
use serrekb::complex::{BoundedComplex, ChainMap};
use serrekb::corpus::{bundled, load_dir, CorpusAlgebra, ProbeFamily};
use serrekb::homotopy::{equivalence_certificate, find_homotopy_equivalence};
use serrekb::io::{chain_map_to_json, complex_to_json, module_to_json, parse_complex};
use serrekb::module::{HomSpace, Module};
use serrekb::parallel::Execution;
use serrekb::random::{random_chain_map, random_complex, random_extension, rng_for};
use serrekb::report::{Check, Report};
use serrekb::rep::{classical_tau, find_isomorphism, injective, projective, projective_presentation};
use serrekb::serre::{
    compare_alt, compare_horseshoe, horseshoe, serre_alt, serre_inverse, serre_of_complex, serre_of_module,
    serre_on_map, staircase_as_presentation,
};
use serrekb::suite::{run_suite, SuiteConfig};
use serrekb::{Error, Result};

use crate::{Cli, Command, Probes, Property};

const EQUIVALENCE_ATTEMPTS: usize = 20;
const RANDOM_EXTENSIONS: usize = 50;
const RANDOM_MAPS: usize = 20;

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        location: path.display().to_string(),
        message: e.to_string(),
    })
}

fn located(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { location, message } => Error::Parse {
            location: format!("{}: {location}", path.display()),
            message,
        },
        other => other,
    }
}

fn load_algebra(cli: &Cli) -> Result<CorpusAlgebra> {
    let path = cli
        .algebra
        .as_deref()
        .ok_or_else(|| Error::Precondition("--algebra FILE is required".into()))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("algebra");
    CorpusAlgebra::from_toml(stem, &read(path)?).map_err(|e| located(path, e))
}

/// The input object: a complex file, or a module as a stalk in degree 0.
struct Input {
    label: String,
    complex: BoundedComplex,
    module: Option<Module>,
}

fn load_input(cli: &Cli, c: &CorpusAlgebra) -> Result<Input> {
    match (&cli.complex, &cli.module) {
        (Some(_), Some(_)) => Err(Error::Precondition("give either --complex or --module, not both".into())),
        (Some(path), None) => {
            let x = parse_complex(&c.algebra, &read(path)?, &c.named).map_err(|e| located(path, e))?;
            Ok(Input {
                label: path.display().to_string(),
                complex: x,
                module: None,
            })
        }
        (None, Some(name)) => {
            let m = c.module(name)?;
            Ok(Input {
                label: name.clone(),
                complex: BoundedComplex::stalk(&m, 0),
                module: Some(m),
            })
        }
        (None, None) => Err(Error::Precondition("an input is required: --complex FILE or --module NAME".into())),
    }
}

fn probe_family(cli: &Cli) -> ProbeFamily {
    match cli.probes {
        Probes::Default => ProbeFamily::Default,
        Probes::Extended => ProbeFamily::Extended,
    }
}

fn homology_json(x: &BoundedComplex) -> Value {
    x.homology()
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| json!({"n": n, "dims": m.dims()}))
        .collect()
}

/// The vertex `i` with `m ≅ P(i)`, if any.
fn projective_vertex(m: &Module, seed: u64) -> Option<usize> {
    let alg = m.algebra();
    let mut rng = rng_for(seed, "projective");
    (0..alg.num_vertices()).find(|&v| {
        let p = projective(alg, v);
        p.dims() == m.dims() && find_isomorphism(&p, m, &mut rng, 16).is_some()
    })
}

fn equivalent(x: &BoundedComplex, y: &BoundedComplex, seed: u64, label: &str) -> Result<bool> {
    let mut rng = rng_for(seed, label);
    Ok(find_homotopy_equivalence(x, y, &mut rng, EQUIVALENCE_ATTEMPTS)?.is_some())
}

pub fn run(cli: &Cli) -> Result<Report> {
    match cli.command {
        Command::Suite => suite(cli),
        Command::Verify { property } => {
            let c = load_algebra(cli)?;
            let input = load_input(cli, &c)?;
            let name = match property {
                Property::Duality => "verify duality",
                Property::Defect => "verify defect",
                Property::Nondegeneracy => "verify nondegeneracy",
                Property::TriangleFunctor => "verify triangle-functor",
            };
            let checks = match property {
                Property::Duality => verify_duality(cli, &c, &input)?,
                Property::Defect => verify_defect(cli, &c, &input)?,
                Property::Nondegeneracy => verify_nondegeneracy(cli, &c, &input)?,
                Property::TriangleFunctor => verify_triangle_functor(cli, &c, &input)?,
            };
            Ok(Report::new(format!("{name} {}", input.label), cli.seed, checks))
        }
        command => {
            let c = load_algebra(cli)?;
            let input = load_input(cli, &c)?;
            match command {
                Command::Serre => serre(cli, &input),
                Command::SerreAlt => serre_alt_cmd(cli, &input),
                Command::SerreInverse => serre_inverse_cmd(cli, &input),
                Command::Tau => tau(cli, &input),
                Command::ArTriangle => ar(cli, &c, &input),
                Command::Verify { .. } | Command::Suite => unreachable!("handled above"),
            }
        }
    }
}

fn serre(cli: &Cli, input: &Input) -> Result<Report> {
    let pkg = serre_of_complex(&input.complex)?;
    let mut checks = vec![Check::new(
        "presentation by contractibles verified",
        pkg.presentation.verify().is_ok(),
        json!({"p0_total_dim": pkg.presentation.p0.complex.total_dim(), "p1_total_dim": pkg.presentation.p1.complex.total_dim()}),
    )];
    if let Some(m) = &input.module {
        let nu: Vec<usize> = (0..m.algebra().num_vertices())
            .map(|v| Ok(HomSpace::new(m, &projective(m.algebra(), v))?.dim()))
            .collect::<Result<_>>()?;
        let h = homology_json(&pkg.output);
        let expected: Value = if nu.iter().all(|&d| d == 0) {
            json!([])
        } else {
            json!([{"n": 0, "dims": nu}])
        };
        checks.push(Check::new(
            "homology concentrated in degree 0 with dims of nu M",
            h == expected,
            json!({"homology": h, "nu_dims": nu}),
        ));
        if let Some(v) = projective_vertex(m, cli.seed) {
            let label = &m.algebra().quiver().vertices()[v];
            let i = BoundedComplex::stalk(&injective(m.algebra(), v), 0);
            checks.push(Check::new(
                format!("homotopy-equivalent to I({label}) stalk"),
                equivalent(&pkg.output, &i, cli.seed, "serre")?,
                json!({"vertex": label}),
            ));
        }
    }
    let result = json!({"output": complex_to_json(&pkg.output), "homology": homology_json(&pkg.output)});
    Ok(Report::new(format!("serre {}", input.label), cli.seed, checks).with_result(result))
}

fn serre_alt_cmd(cli: &Cli, input: &Input) -> Result<Report> {
    let std = serre_of_complex(&input.complex)?;
    let (kind, q, eps) = match &input.module {
        Some(m) if !m.is_zero() => {
            let pres = projective_presentation(m);
            let qs = BoundedComplex::stalk(pres.p.source(), 0);
            let ps = BoundedComplex::stalk(pres.p.target(), 0);
            let q = ChainMap::new(&qs, &ps, |_| pres.p.clone())?;
            let eps = ChainMap::new(&ps, &input.complex, |_| pres.epsilon.clone())?;
            ("minimal module presentation", q, eps)
        }
        _ => {
            let (q, eps) = staircase_as_presentation(&std);
            ("staircase presentation", q, eps)
        }
    };
    let alt = serre_alt(&q, &eps)?;
    let cmp = compare_alt(&std, &alt)?;
    let checks = vec![Check::new(
        "homotopy-equivalent to the staircase construction",
        equivalence_certificate(&cmp).is_some(),
        json!({"presentation": kind}),
    )];
    let result = json!({"output": complex_to_json(alt.output()), "homology": homology_json(alt.output())});
    Ok(Report::new(format!("serre-alt {}", input.label), cli.seed, checks).with_result(result))
}

fn serre_inverse_cmd(cli: &Cli, input: &Input) -> Result<Report> {
    let inv = serre_inverse(&input.complex)?.output;
    let back = serre_of_complex(&inv)?.output;
    let checks = vec![Check::new(
        "S of the output is homotopy-equivalent to the input",
        equivalent(&back, &input.complex, cli.seed, "serre-inverse")?,
        json!({"input_homology": homology_json(&input.complex), "round_trip_homology": homology_json(&back)}),
    )];
    let result = json!({"output": complex_to_json(&inv), "homology": homology_json(&inv)});
    Ok(Report::new(format!("serre-inverse {}", input.label), cli.seed, checks).with_result(result))
}

fn tau(cli: &Cli, input: &Input) -> Result<Report> {
    let m = input
        .module
        .as_ref()
        .ok_or_else(|| Error::Precondition("tau needs --module".into()))?;
    let t = classical_tau(m);
    let kernel = serre_of_module(m)?.term(-2).clone();
    let mut rng = rng_for(cli.seed, "tau");
    let agrees = t.dims() == kernel.dims() && (t.is_zero() || find_isomorphism(&t, &kernel, &mut rng, 20).is_some());
    let mut checks = vec![Check::new(
        "D Tr agrees with the degree -2 term of S M",
        agrees,
        json!({"tau_dims": t.dims(), "kernel_dims": kernel.dims()}),
    )];
    if projective_vertex(m, cli.seed).is_some() {
        checks.push(Check::new("tau of a projective is zero", t.is_zero(), json!({"tau_dims": t.dims()})));
    }
    Ok(Report::new(format!("tau {}", input.label), cli.seed, checks).with_result(json!({"tau": module_to_json(&t)})))
}

fn ar(cli: &Cli, c: &CorpusAlgebra, input: &Input) -> Result<Report> {
    let end = EndAlgebra::new(&input.complex)?;
    let locality = is_local(&end);
    let t = ar_triangle(&input.complex, cli.assert_local)?;
    let mut checks: Vec<Check> = t
        .certify()
        .into_iter()
        .map(|(name, ok, w)| Check::new(name.replace('_', " "), ok, w))
        .collect();
    checks.push(Check::new(
        "radical nilpotent",
        end.verify().is_ok(),
        json!({"end_dim": end.dim(), "radical_dim": end.radical_dim()}),
    ));
    let mut probes = c.probes(probe_family(cli), cli.seed)?;
    probes.extend([t.x.clone(), t.sx().clone(), t.e.clone()]);
    let mut rng = rng_for(cli.seed, "ar-triangle");
    let (right, left) = check_almost_split(&t, &probes, &mut rng, 3)?;
    checks.push(Check::new("right almost split", right.passed(), json!(right)));
    checks.push(Check::new("left almost split", left.passed(), json!(left)));
    let result = json!({
        "locality": locality,
        "assumed_local": t.assumed_local,
        "x": complex_to_json(&t.x),
        "sx": complex_to_json(t.sx()),
        "e": complex_to_json(&t.e),
        "w": chain_map_to_json(&t.w),
        "w_coordinates": t.w_coords.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
        "e_homology": homology_json(&t.e),
    });
    Ok(Report::new(format!("ar-triangle {}", input.label), cli.seed, checks).with_result(result))
}

fn verify_duality(cli: &Cli, c: &CorpusAlgebra, input: &Input) -> Result<Vec<Check>> {
    let sm = serre_of_complex(&input.complex)?.output;
    let mut failures = Vec::new();
    let probes = c.probes(probe_family(cli), cli.seed)?;
    for (k, x) in probes.iter().enumerate() {
        let d = verify_duality_dims(&input.complex, x, &sm)?;
        if !d.equal {
            failures.push(json!({"probe": k, "dims": d}));
        }
    }
    Ok(vec![Check::new(
        "dim Hom_K(M, X) = dim Hom_K(X, S M) over the probe family",
        failures.is_empty(),
        json!({"probes": probes.len(), "failures": failures}),
    )])
}

fn verify_defect(cli: &Cli, c: &CorpusAlgebra, input: &Input) -> Result<Vec<Check>> {
    let sm = serre_of_complex(&input.complex)?.output;
    let mut rng = rng_for(cli.seed, "verify-defect");
    let mut failures = Vec::new();
    let mut nonzero = 0;
    for k in 0..RANDOM_EXTENSIONS {
        let e = random_extension(&c.algebra, &mut rng)?;
        let d = verify_defect_formula(&e, &input.complex, &sm)?;
        nonzero += usize::from(d.covariant > 0);
        if !d.equal {
            failures.push(json!({"extension": k, "defects": d}));
        }
    }
    Ok(vec![Check::new(
        "defect formula on seeded random extensions",
        failures.is_empty(),
        json!({"extensions": RANDOM_EXTENSIONS, "nonzero_defect": nonzero, "failures": failures}),
    )])
}

fn verify_nondegeneracy(cli: &Cli, c: &CorpusAlgebra, input: &Input) -> Result<Vec<Check>> {
    let sx = serre_of_complex(&input.complex)?.output;
    let probes = c.probes(probe_family(cli), cli.seed)?;
    let r = nondegenerate_composition_check(&input.complex, &sx, &probes)?;
    Ok(vec![Check::new(
        "composition into S X is non-degenerate over the probe family",
        r.passed(),
        json!(r),
    )])
}

fn verify_triangle_functor(cli: &Cli, c: &CorpusAlgebra, input: &Input) -> Result<Vec<Check>> {
    let x = &input.complex;
    let sx = serre_of_complex(x)?;
    let mut rng = rng_for(cli.seed, "verify-triangle-functor");
    let mut failures = Vec::new();
    let mut fallbacks = 0;
    for k in 0..RANDOM_MAPS {
        let y = random_complex(&c.algebra, &mut rng, 3)?;
        let y = if k % 2 == 0 {
            y
        } else {
            BoundedComplex::direct_sum(&c.algebra, &[x.clone(), y]).sum
        };
        let f = random_chain_map(x, &y, &mut rng)?;
        let sy = serre_of_complex(&y)?;
        let hs = horseshoe(&f, &sx, &sy)?;
        let exact = hs.kernel_shifted == serre_on_map(&f, &sx, &sy)?.cone().complex;
        let s_cone = serre_of_complex(&hs.cone)?;
        let certified = equivalence_certificate(&compare_horseshoe(&s_cone, &hs)?).is_some();
        fallbacks += usize::from(!exact);
        if !(exact && certified) {
            failures.push(json!({
                "map": k,
                "kernel_is_cone": exact,
                "certified": certified,
                "cone_homology": homology_json(&hs.cone),
            }));
        }
    }
    Ok(vec![Check::new(
        "S(cone f) is homotopy-equivalent to cone(S f)",
        failures.is_empty(),
        json!({"maps": RANDOM_MAPS, "fallbacks": fallbacks, "failures": failures}),
    )])
}

fn suite(cli: &Cli) -> Result<Report> {
    let corpus = match (&cli.corpus, &cli.algebra) {
        (Some(dir), _) => load_dir(dir)?,
        (None, Some(_)) => vec![load_algebra(cli)?],
        (None, None) => bundled()?,
    };
    let cfg = SuiteConfig {
        seed: cli.seed,
        execution: if cli.sequential { Execution::Sequential } else { Execution::Parallel },
        probes: probe_family(cli),
        ..SuiteConfig::default()
    };
    Ok(run_suite(&corpus, &cfg))
}
