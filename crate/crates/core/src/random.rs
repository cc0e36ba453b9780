//! Seeded random modules, complexes, chain maps, double complexes and
//! extensions for the property checks.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::BoundAlgebra;
use crate::ar::{chain_maps, cocone_identity_extension, make_extension, Extension};
use crate::complex::{BoundedComplex, ChainMap};
use crate::double::{DoubleComplex, DoubleMap};
use crate::error::Result;
use crate::linalg::{Field, Scalar};
use crate::module::{submodule_from_bases, HomSpace, Module, ModuleHom};
use crate::rep::{projective_sum, radical_power};

pub const MAX_DIM: usize = 3;

/// Per-check generator: `seed` mixed with the check's name.
pub fn rng_for(seed: u64, name: &str) -> ChaCha8Rng {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

/// `{−1, 0, 1}` over ℚ, uniform over GF(p).
pub fn random_scalar(field: Field, rng: &mut impl Rng) -> Scalar {
    match field {
        Field::Rational => field.from_i64(rng.gen_range(-1..=1)),
        Field::Prime(p) => field.from_i64(rng.gen_range(0..p as i64)),
    }
}

fn combination(field: Field, n: usize, rng: &mut impl Rng) -> Vec<Scalar> {
    (0..n).map(|_| random_scalar(field, rng)).collect()
}

pub fn random_hom(m: &Module, n: &Module, rng: &mut impl Rng) -> Result<ModuleHom> {
    let space = HomSpace::new(m, n)?;
    Ok(space.element(&combination(m.field(), space.dim(), rng)))
}

fn random_vertices(alg: &BoundAlgebra, lo: usize, hi: usize, rng: &mut impl Rng) -> Vec<usize> {
    let k = rng.gen_range(lo..=hi);
    let mut v: Vec<usize> = (0..k).map(|_| rng.gen_range(0..alg.num_vertices())).collect();
    v.sort_unstable();
    v
}

/// Cokernel of a random map between sums of indecomposable projectives,
/// with every vertex dimension at most [`MAX_DIM`].
pub fn random_module(alg: &Arc<BoundAlgebra>, rng: &mut impl Rng) -> Result<Module> {
    for _ in 0..32 {
        let p = projective_sum(alg, &random_vertices(alg, 1, 2, rng));
        if p.dims().iter().any(|&d| d > 2 * MAX_DIM) {
            continue;
        }
        let q = projective_sum(alg, &random_vertices(alg, 0, 2, rng));
        let m = random_hom(&q, &p, rng)?.cokernel().target().clone();
        if m.dims().iter().all(|&d| d <= MAX_DIM) {
            return Ok(m);
        }
    }
    let v = rng.gen_range(0..alg.num_vertices());
    Ok(Module::simple(alg.clone(), v))
}

/// Terms are random modules in a window of at most `max_window` degrees
/// starting in `−1..=0`; each differential is a random map into the kernel
/// of the next one.
pub fn random_complex(alg: &Arc<BoundAlgebra>, rng: &mut impl Rng, max_window: usize) -> Result<BoundedComplex> {
    let len = rng.gen_range(1..=max_window.max(1));
    let lo = rng.gen_range(-1..=0);
    let terms = (0..len).map(|_| random_module(alg, rng)).collect::<Result<Vec<_>>>()?;
    let mut diffs: Vec<ModuleHom> = Vec::with_capacity(len.saturating_sub(1));
    for k in (0..len.saturating_sub(1)).rev() {
        let next_kernel = match diffs.last() {
            Some(d) => d.kernel(),
            None => ModuleHom::identity(&terms[k + 1]),
        };
        let f = random_hom(&terms[k], next_kernel.source(), rng)?;
        diffs.push(next_kernel.compose(&f));
    }
    diffs.reverse();
    BoundedComplex::new(alg.clone(), lo, terms, diffs)
}

/// A random element of the space of chain maps `X → Y`.
pub fn random_chain_map(x: &BoundedComplex, y: &BoundedComplex, rng: &mut impl Rng) -> Result<ChainMap> {
    let (space, basis) = chain_maps(x, y)?;
    let field = x.algebra().field();
    let mut v = vec![field.zero(); space.dim()];
    for k in 0..basis.cols() {
        let c = random_scalar(field, rng);
        if c.is_zero() {
            continue;
        }
        for (a, b) in v.iter_mut().zip(basis.column(k)) {
            *a += &(&c * &b);
        }
    }
    let comps = space.components(&v);
    ChainMap::new(x, y, |n| {
        comps
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ModuleHom::zero(x.term(n), y.term(n)))
    })
}

/// A map of two-column double complexes `(g: C₀ → C₁) → (g': C₀' → C₁')`
/// where `C₁'` is the pushout of `C₁ ← C₀ → C₀'` along random maps.
pub fn random_double_map(alg: &Arc<BoundAlgebra>, rng: &mut impl Rng) -> Result<DoubleMap> {
    let c0 = random_complex(alg, rng, 3)?;
    let c1 = random_complex(alg, rng, 3)?;
    let c0p = random_complex(alg, rng, 3)?;
    let g = random_chain_map(&c0, &c1, rng)?;
    let a0 = random_chain_map(&c0, &c0p, rng)?;
    let sum = BoundedComplex::direct_sum(alg, &[c1.clone(), c0p.clone()]);
    let diag = sum.injections[0].compose(&g).sub(&sum.injections[1].compose(&a0));
    let to_pushout = diag.cokernel_complex();
    let c1p = to_pushout.target().clone();
    let a1 = to_pushout.compose(&sum.injections[0]);
    let gp = to_pushout.compose(&sum.injections[1]);
    let source = DoubleComplex::from_columns(0, &[c0.clone(), c1.clone()], &[g])?;
    let target = DoubleComplex::from_columns(0, &[c0p.clone(), c1p], &[gp])?;
    let mut comps = BTreeMap::new();
    for j in c0.degrees() {
        comps.insert((0, j), a0.component(j));
    }
    for j in c1.degrees() {
        comps.insert((1, j), a1.component(j));
    }
    DoubleMap::new(&source, &target, comps)
}

/// Double complex with exact rows, either `ker g ↪ X → Y ↠ coker g` for a
/// random chain map `g`, or a random short exact sequence of complexes.
pub fn rows_exact_double(alg: &Arc<BoundAlgebra>, rng: &mut impl Rng) -> Result<DoubleComplex> {
    if rng.gen_bool(0.5) {
        let x = random_complex(alg, rng, 3)?;
        let y = random_complex(alg, rng, 3)?;
        let g = random_chain_map(&x, &y, rng)?;
        let k = g.kernel_complex();
        let c = g.cokernel_complex();
        DoubleComplex::from_columns(
            -1,
            &[k.source().clone(), x, y, c.target().clone()],
            &[k.clone(), g, c],
        )
    } else {
        let e = random_extension(alg, rng)?;
        DoubleComplex::from_columns(
            -1,
            &[e.a().clone(), e.b().clone(), e.c().clone()],
            &[e.iota.clone(), e.pi.clone()],
        )
    }
}

/// Degreewise radical `rad B ↪ B` as a subcomplex.
fn radical_subcomplex(b: &BoundedComplex) -> Result<ChainMap> {
    let incs: BTreeMap<i64, ModuleHom> = b
        .degrees()
        .map(|n| {
            let spans = radical_power(b.term(n), 1);
            let bases = spans.iter().map(|s| s.column_space()).collect();
            (n, submodule_from_bases(b.term(n), bases))
        })
        .collect();
    let terms: Vec<Module> = incs.values().map(|i| i.source().clone()).collect();
    let diffs = b
        .degrees()
        .take(terms.len().saturating_sub(1))
        .map(|n| {
            b.diff(n)
                .restrict(&incs[&n], &incs[&(n + 1)])
                .expect("homomorphisms preserve radicals")
        })
        .collect();
    let sub = BoundedComplex::new(b.algebra().clone(), b.lo(), terms, diffs)?;
    ChainMap::new(&sub, b, |n| {
        incs.get(&n)
            .cloned()
            .unwrap_or_else(|| ModuleHom::zero(sub.term(n), b.term(n)))
    })
}

/// One of four kinds, chosen at random: `A → cone(φ) → C` for a random
/// `φ: C[−1] → A`; `rad B ↪ B`; `ker g ↪ B`; `coCone(id_X)`.
pub fn random_extension(alg: &Arc<BoundAlgebra>, rng: &mut impl Rng) -> Result<Extension> {
    let kinds = [0, 1, 2, 3];
    match *kinds.choose(rng).expect("nonempty") {
        0 => {
            let a = random_complex(alg, rng, 3)?;
            let c = random_complex(alg, rng, 3)?;
            let phi = random_chain_map(&c.shift(-1), &a, rng)?;
            let cone = phi.cone();
            let pi = cone.projection.retarget(&cone.complex, &c);
            Extension::new(cone.inclusion, pi)
        }
        1 => make_extension(&radical_subcomplex(&random_complex(alg, rng, 3)?)?),
        2 => {
            let b = random_complex(alg, rng, 3)?;
            let y = random_complex(alg, rng, 3)?;
            make_extension(&random_chain_map(&b, &y, rng)?.kernel_complex())
        }
        _ => cocone_identity_extension(&random_complex(alg, rng, 3)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;
    use crate::double::tot_cone_permutation;

    fn a3() -> Arc<BoundAlgebra> {
        let q = Quiver::new(
            vec!["1".into(), "2".into(), "3".into()],
            vec![("a".into(), "1".into(), "2".into()), ("b".into(), "2".into(), "3".into())],
        )
        .unwrap();
        Arc::new(BoundAlgebra::new(q, vec![], Field::Rational, 3).unwrap())
    }

    #[test]
    fn generators_are_deterministic_and_valid() {
        let alg = a3();
        let mut r1 = rng_for(9, "x");
        let mut r2 = rng_for(9, "x");
        for _ in 0..5 {
            let x = random_complex(&alg, &mut r1, 4).unwrap();
            assert_eq!(x, random_complex(&alg, &mut r2, 4).unwrap());
            assert!(x.degrees().all(|n| x.term(n).dims().iter().all(|&d| d <= MAX_DIM)));
        }
        let x = random_complex(&alg, &mut r1, 4).unwrap();
        let y = random_complex(&alg, &mut r1, 4).unwrap();
        assert!(random_chain_map(&x, &y, &mut r1).unwrap().is_chain_map());
    }

    #[test]
    fn double_maps_and_exact_rows() {
        let alg = a3();
        let mut rng = rng_for(1, "double");
        for _ in 0..3 {
            let f = random_double_map(&alg, &mut rng).unwrap();
            let (_, _, p) = tot_cone_permutation(&f);
            assert!(p.is_chain_map());
            assert!((p.source().lo().min(p.target().lo())..=p.source().hi().max(p.target().hi()))
                .all(|n| p.component(n).is_isomorphism()));
            assert!(rows_exact_double(&alg, &mut rng).unwrap().tot().complex.is_acyclic());
        }
    }

    #[test]
    fn extensions_are_exact() {
        let alg = a3();
        let mut rng = rng_for(2, "ext");
        for _ in 0..8 {
            random_extension(&alg, &mut rng).unwrap();
        }
    }
}
