//! The Serre functor on bounded complexes: presentations by contractible
//! complexes of projectives, `S M = Ker(ν p)[2]`, the alternative
//! totalization formula, the quasi-inverse `S⁻` and `S` on maps.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::BoundAlgebra;
use crate::complex::{BoundedComplex, ChainMap};
use crate::double::{DoubleComplex, DoubleMap, Totalization};
use crate::error::{Error, Result};
use crate::homotopy::{contraction, Homotopy};
use crate::module::{lift_through, DirectSum, Decomposition, Module, ModuleHom};
use crate::rep::{
    injective_envelope, inverse_nakayama, inverse_nakayama_object, nakayama, nakayama_object,
    projective_cover,
};

/// A complex with term `G^{i−1} ⊕ G^i` in degree `i` and differential
/// `(a, b) ↦ (b, 0)`. Contractible with contraction `(a, b) ↦ (0, a)`.
#[derive(Clone, Debug)]
pub struct Staircase {
    pub complex: BoundedComplex,
    pub generators: BTreeMap<i64, Module>,
    parts: BTreeMap<i64, DirectSum>,
    zero: DirectSum,
}

impl Staircase {
    pub fn new(algebra: &Arc<BoundAlgebra>, generators: BTreeMap<i64, Module>) -> Self {
        let generators: BTreeMap<i64, Module> =
            generators.into_iter().filter(|(_, g)| !g.is_zero()).collect();
        let zero_module = Module::zero(algebra.clone());
        let zero = Module::direct_sum(algebra, &[zero_module.clone(), zero_module.clone()]);
        let (lo, hi) = match (generators.keys().next(), generators.keys().next_back()) {
            (Some(&a), Some(&b)) => (a, b + 1),
            _ => (0, -1),
        };
        let g = |i: i64| generators.get(&i).cloned().unwrap_or_else(|| zero_module.clone());
        let parts: BTreeMap<i64, DirectSum> = (lo..=hi)
            .map(|i| (i, Module::direct_sum(algebra, &[g(i - 1), g(i)])))
            .collect();
        let diffs = (lo..hi)
            .map(|i| {
                let id = ModuleHom::identity(&g(i));
                ModuleHom::from_blocks(
                    &parts[&i],
                    &parts[&(i + 1)],
                    &[vec![None, Some(&id)], vec![None, None]],
                )
            })
            .collect();
        let complex = BoundedComplex::new_unchecked(
            algebra.clone(),
            lo,
            (lo..=hi).map(|i| parts[&i].sum.clone()).collect(),
            diffs,
        );
        Staircase {
            complex,
            generators,
            parts,
            zero,
        }
    }

    fn part(&self, i: i64) -> &DirectSum {
        self.parts.get(&i).unwrap_or(&self.zero)
    }

    pub fn generator(&self, i: i64) -> Module {
        self.part(i + 1).injections[0].source().clone()
    }

    /// `G^i → X^i` into the second summand.
    pub fn generator_injection(&self, i: i64) -> ModuleHom {
        self.part(i).injections[1].retarget(&self.generator(i), self.complex.term(i))
    }

    /// The chain map `X → Y` whose restriction to each `G^i ⊂ X^i` is
    /// `g(i)`; on `G^{i−1} ⊂ X^i` it is forced to be `d_Y g(i−1)`.
    pub fn map_out(&self, y: &BoundedComplex, g: impl Fn(i64) -> ModuleHom) -> ChainMap {
        let gen = |i: i64| -> ModuleHom {
            if self.generators.contains_key(&i) {
                g(i)
            } else {
                ModuleHom::zero(&self.generator(i), y.term(i))
            }
        };
        ChainMap::from_fn(&self.complex, y, |i| {
            let u = y.diff(i - 1).compose(&gen(i - 1));
            ModuleHom::hstack(self.complex.term(i), y.term(i), &[u, gen(i)])
        })
    }

    /// The chain map `Y → X` whose projection to `G^{i−1} ⊂ X^i` is
    /// `h(i): Y^i → G^{i−1}`; the projection to `G^i` is forced to be
    /// `h(i+1) d_Y`.
    pub fn map_in(&self, y: &BoundedComplex, h: impl Fn(i64) -> ModuleHom) -> ChainMap {
        let hh = |i: i64| -> ModuleHom {
            if self.generators.contains_key(&(i - 1)) {
                h(i)
            } else {
                ModuleHom::zero(y.term(i), &self.generator(i - 1))
            }
        };
        ChainMap::from_fn(y, &self.complex, |i| {
            let lower = hh(i + 1).compose(&y.diff(i));
            ModuleHom::vstack(y.term(i), self.complex.term(i), &[hh(i), lower])
        })
    }

    /// The contraction `(a, b) ↦ (0, a)`.
    pub fn contraction(&self) -> Homotopy {
        let components = self
            .complex
            .degrees()
            .map(|i| {
                let id = ModuleHom::identity(&self.generator(i - 1));
                let s = ModuleHom::from_blocks(
                    self.part(i),
                    self.part(i - 1),
                    &[vec![None, None], vec![Some(&id), None]],
                );
                (i, s.retarget(self.complex.term(i), self.complex.term(i - 1)))
            })
            .collect();
        Homotopy {
            source: self.complex.clone(),
            target: self.complex.clone(),
            components,
        }
    }
}

/// Staircase of projective covers of the terms of `m`, with the epimorphism
/// onto `m` and the covers `ε_i: G^i ↠ M^i`.
fn projective_staircase(m: &BoundedComplex) -> (Staircase, ChainMap, BTreeMap<i64, ModuleHom>) {
    let covers: BTreeMap<i64, ModuleHom> = m
        .degrees()
        .map(|i| (i, projective_cover(m.term(i))))
        .collect();
    let gens = covers.iter().map(|(&i, e)| (i, e.source().clone())).collect();
    let stair = Staircase::new(m.algebra(), gens);
    let eps = stair.map_out(m, |i| covers[&i].clone());
    (stair, eps, covers)
}

/// `P₁ →p P₀ →ε M → 0` with `P₀`, `P₁` staircases of projective covers.
#[derive(Clone, Debug)]
pub struct ContractiblePresentation {
    pub target: BoundedComplex,
    pub p0: Staircase,
    pub epsilon: ChainMap,
    pub kernel: ChainMap,
    pub p1: Staircase,
    pub epsilon1: ChainMap,
    pub p: ChainMap,
}

impl ContractiblePresentation {
    pub fn new(m: &BoundedComplex) -> Self {
        let (p0, epsilon, _) = projective_staircase(m);
        let kernel = epsilon.kernel_complex();
        let (p1, epsilon1, _) = projective_staircase(kernel.source());
        let p = kernel.compose(&epsilon1);
        ContractiblePresentation {
            target: m.clone(),
            p0,
            epsilon,
            kernel,
            p1,
            epsilon1,
            p,
        }
    }

    /// Re-checks exactness, chain map conditions and the contractions.
    pub fn verify(&self) -> Result<()> {
        if !self.epsilon.is_chain_map() || !self.p.is_chain_map() {
            return Err(Error::Internal("presentation maps are not chain maps".into()));
        }
        check_exact(&self.p, &self.epsilon)?;
        for s in [&self.p0, &self.p1] {
            if !s.contraction().witnesses(&ChainMap::identity(&s.complex)) {
                return Err(Error::Internal("staircase contraction fails".into()));
            }
        }
        Ok(())
    }
}

/// Checks `Q →q P →ε M → 0` is exact in every degree at every vertex.
fn check_exact(q: &ChainMap, eps: &ChainMap) -> Result<()> {
    if !eps.is_degreewise_surjective() {
        return Err(Error::NotExact("ε is not surjective".into()));
    }
    let p = q.target();
    for n in p.degrees() {
        let e = eps.component(n);
        let qq = q.component(n);
        if !e.compose(&qq).is_zero() {
            return Err(Error::NotExact(format!("ε∘q ≠ 0 in degree {n}")));
        }
        for v in 0..p.algebra().num_vertices() {
            if qq.map_at(v).rank() + e.map_at(v).rank() != p.term(n).dim_at(v) {
                return Err(Error::NotExact(format!(
                    "im q ≠ ker ε in degree {n} at vertex {v}"
                )));
            }
        }
    }
    Ok(())
}

fn check_metadata(x: &BoundedComplex, projective: bool) -> Result<()> {
    for n in x.degrees() {
        match (x.term(n).decomposition(), projective) {
            (Some(Decomposition::Projective(_)), true) | (Some(Decomposition::Injective(_)), false) => {}
            _ => {
                return Err(Error::MissingMetadata(if projective {
                    "projective"
                } else {
                    "injective"
                }))
            }
        }
    }
    Ok(())
}

/// `ν` applied termwise to a complex of projectives.
pub fn nakayama_complex(x: &BoundedComplex) -> Result<BoundedComplex> {
    let terms = x.degrees().map(|n| nakayama_object(x.term(n))).collect::<Result<Vec<_>>>()?;
    let diffs = x
        .degrees()
        .take(terms.len().saturating_sub(1))
        .map(|n| nakayama(&x.diff(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundedComplex::new_unchecked(x.algebra().clone(), x.lo(), terms, diffs))
}

/// `ν f` between the termwise images `source`, `target`.
pub fn nakayama_chain(f: &ChainMap, source: &BoundedComplex, target: &BoundedComplex) -> Result<ChainMap> {
    let (lo, hi) = (
        f.source().lo().min(f.target().lo()),
        f.source().hi().max(f.target().hi()),
    );
    let comps = (lo..=hi).map(|n| nakayama(&f.component(n))).collect::<Result<Vec<_>>>()?;
    let by_degree: BTreeMap<i64, ModuleHom> = (lo..=hi).zip(comps).collect();
    Ok(ChainMap::from_fn(source, target, |n| {
        by_degree
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ModuleHom::zero(source.term(n), target.term(n)))
    }))
}

/// `ν⁻` applied termwise to a complex of injectives.
pub fn inverse_nakayama_complex(x: &BoundedComplex) -> Result<BoundedComplex> {
    let terms = x
        .degrees()
        .map(|n| inverse_nakayama_object(x.term(n)))
        .collect::<Result<Vec<_>>>()?;
    let diffs = x
        .degrees()
        .take(terms.len().saturating_sub(1))
        .map(|n| inverse_nakayama(&x.diff(n)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundedComplex::new_unchecked(x.algebra().clone(), x.lo(), terms, diffs))
}

pub fn inverse_nakayama_chain(
    f: &ChainMap,
    source: &BoundedComplex,
    target: &BoundedComplex,
) -> Result<ChainMap> {
    let (lo, hi) = (
        f.source().lo().min(f.target().lo()),
        f.source().hi().max(f.target().hi()),
    );
    let comps = (lo..=hi)
        .map(|n| inverse_nakayama(&f.component(n)))
        .collect::<Result<Vec<_>>>()?;
    let by_degree: BTreeMap<i64, ModuleHom> = (lo..=hi).zip(comps).collect();
    Ok(ChainMap::from_fn(source, target, |n| {
        by_degree
            .get(&n)
            .cloned()
            .unwrap_or_else(|| ModuleHom::zero(source.term(n), target.term(n)))
    }))
}

/// Which formula produced a Serre image.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Staircase,
    Alternative,
}

/// `S M = Ker(ν p)[2]` with the presentation it was computed from.
#[derive(Clone, Debug)]
pub struct SerrePackage {
    pub input: BoundedComplex,
    pub presentation: ContractiblePresentation,
    pub nu_p1: BoundedComplex,
    pub nu_p0: BoundedComplex,
    pub nu_p: ChainMap,
    /// `Ker(ν p) ↪ ν P₁`, before the shift.
    pub kernel: ChainMap,
    pub output: BoundedComplex,
}

impl SerrePackage {
    pub fn method(&self) -> Method {
        Method::Staircase
    }
}

pub fn serre_of_complex(m: &BoundedComplex) -> Result<SerrePackage> {
    serre_from_presentation(ContractiblePresentation::new(m))
}

fn serre_from_presentation(presentation: ContractiblePresentation) -> Result<SerrePackage> {
    let nu_p1 = nakayama_complex(&presentation.p1.complex)?;
    let nu_p0 = nakayama_complex(&presentation.p0.complex)?;
    let nu_p = nakayama_chain(&presentation.p, &nu_p1, &nu_p0)?;
    let kernel = nu_p.kernel_complex();
    let output = kernel.source().shift(2);
    Ok(SerrePackage {
        input: presentation.target.clone(),
        presentation,
        nu_p1,
        nu_p0,
        nu_p,
        kernel,
        output,
    })
}

/// `(τM ↪ νP₁ → νP₀)` in degrees −2, −1, 0 from the minimal presentation.
pub fn serre_of_module(m: &Module) -> Result<BoundedComplex> {
    let pres = crate::rep::projective_presentation(m);
    let nu = nakayama(&pres.p)?;
    let k = nu.kernel();
    BoundedComplex::new(
        m.algebra().clone(),
        -2,
        vec![k.source().clone(), nu.source().clone(), nu.target().clone()],
        vec![k.clone(), nu],
    )
}

/// Chain maps `(f₀, f₁)` lifting `f: M → N` from a staircase presentation of
/// `M` to a presentation `Q →q P →ε N` by complexes of projectives.
pub fn lift_to_presentation(
    f: &ChainMap,
    from: &ContractiblePresentation,
    q: &ChainMap,
    eps: &ChainMap,
) -> Result<(ChainMap, ChainMap)> {
    let p = eps.source();
    let f0 = from.p0.map_out(p, |i| {
        let goal = f.component(i).compose(&from.epsilon.component(i)).compose(&from.p0.generator_injection(i));
        lift_through(&goal, &eps.component(i)).expect("projective generators lift through an epimorphism")
    });
    let along = f0.compose(&from.p);
    let f1 = from.p1.map_out(q.source(), |i| {
        let goal = along.component(i).compose(&from.p1.generator_injection(i));
        lift_through(&goal, &q.component(i)).expect("the image lies in ker ε = im q")
    });
    if !f0.is_chain_map() || !f1.is_chain_map() {
        return Err(Error::Internal("lifted maps are not chain maps".into()));
    }
    if eps.compose(&f0).sub(&f.compose(&from.epsilon)).is_zero() && q.compose(&f1).sub(&along).is_zero() {
        Ok((f0, f1))
    } else {
        Err(Error::Internal("lifted maps do not commute with the presentations".into()))
    }
}

/// `S f: S M → S N` from lifts of `f` to the staircase presentations.
pub fn serre_on_map(f: &ChainMap, sm: &SerrePackage, sn: &SerrePackage) -> Result<ChainMap> {
    let to = &sn.presentation;
    let (_, f1) = lift_to_presentation(f, &sm.presentation, &to.p, &to.epsilon)?;
    let nu_f1 = nakayama_chain(&f1, &sm.nu_p1, &sn.nu_p1)?;
    let restricted = nu_f1
        .restrict(&sm.kernel, &sn.kernel)
        .ok_or_else(|| Error::Internal("ν f₁ does not preserve the kernels".into()))?;
    Ok(restricted.shift(2).retarget(&sm.output, &sn.output))
}

/// `Tot(Ker ν q ↪ ν Q → ν P)` with `ν P` in column 0.
#[derive(Clone, Debug)]
pub struct AltPackage {
    pub input: BoundedComplex,
    pub q: ChainMap,
    pub epsilon: ChainMap,
    pub nu_q_source: BoundedComplex,
    pub nu_q_target: BoundedComplex,
    pub nu_q: ChainMap,
    pub kernel: ChainMap,
    pub double: DoubleComplex,
    pub tot: Totalization,
}

impl AltPackage {
    pub fn method(&self) -> Method {
        Method::Alternative
    }

    pub fn output(&self) -> &BoundedComplex {
        &self.tot.complex
    }
}

fn three_columns(kernel: &ChainMap, nu_q: &ChainMap) -> Result<DoubleComplex> {
    DoubleComplex::from_columns(
        -2,
        &[kernel.source().clone(), nu_q.source().clone(), nu_q.target().clone()],
        &[kernel.clone(), nu_q.clone()],
    )
}

/// The Serre image from any presentation `Q →q P →ε M → 0` by complexes of
/// projectives, verified exact.
pub fn serre_alt(q: &ChainMap, eps: &ChainMap) -> Result<AltPackage> {
    check_metadata(q.source(), true)?;
    check_metadata(q.target(), true)?;
    if !q.is_chain_map() || !eps.is_chain_map() {
        return Err(Error::NotAChainMap("presentation maps".into()));
    }
    check_exact(q, eps)?;
    let nu_q_source = nakayama_complex(q.source())?;
    let nu_q_target = nakayama_complex(q.target())?;
    let nu_q = nakayama_chain(q, &nu_q_source, &nu_q_target)?;
    let kernel = nu_q.kernel_complex();
    let double = three_columns(&kernel, &nu_q)?;
    let tot = double.tot();
    Ok(AltPackage {
        input: eps.target().clone(),
        q: q.clone(),
        epsilon: eps.clone(),
        nu_q_source,
        nu_q_target,
        nu_q,
        kernel,
        double,
        tot,
    })
}

/// The comparison `S M → Tot(Ker ν q ↪ ν Q → ν P)`: the staircase image
/// maps into the staircase totalization by `x ↦ (x, −h δ x)` for a
/// contraction `h` of `Tot(ν P₁ → ν P₀)`, followed by the totalization of
/// `ν` of a lift between the presentations.
pub fn compare_alt(std: &SerrePackage, alt: &AltPackage) -> Result<ChainMap> {
    let pres = &std.presentation;
    let (f0, f1) = lift_to_presentation(
        &ChainMap::identity(&std.input).retarget(&std.input, alt.epsilon.target()),
        pres,
        &alt.q,
        &alt.epsilon,
    )?;
    let nu_f0 = nakayama_chain(&f0, &std.nu_p0, &alt.nu_q_target)?;
    let nu_f1 = nakayama_chain(&f1, &std.nu_p1, &alt.nu_q_source)?;
    let on_kernels = nu_f1
        .restrict(&std.kernel, &alt.kernel)
        .ok_or_else(|| Error::Internal("ν f₁ does not preserve the kernels".into()))?;

    let std_double = three_columns(&std.kernel, &std.nu_p)?;
    let std_tot = std_double.tot();
    let mut comps = BTreeMap::new();
    for &(i, j) in std_double.positions() {
        let c = match i {
            -2 => on_kernels.component(j),
            -1 => nu_f1.component(j),
            _ => nu_f0.component(j),
        };
        comps.insert((i, j), c);
    }
    let phi = DoubleMap::new(&std_double, &alt.double, comps)?;
    let tot_phi = phi.tot(&std_tot, &alt.tot);

    let pair = DoubleComplex::from_columns(-1, &[std.nu_p1.clone(), std.nu_p0.clone()], std::slice::from_ref(&std.nu_p))?;
    let pair_tot = pair.tot();
    let h = contraction(&pair_tot.complex)
        .ok_or_else(|| Error::Internal("Tot(ν P₁ → ν P₀) is not contractible".into()))?;
    let k = std.kernel.source();
    let sigma = ChainMap::from_fn(&std.output, &std_tot.complex, |m| {
        let target = std_tot.complex.term(m);
        let source = std.output.term(m);
        let mut total = ModuleHom::zero(source, target);
        if k.term(m + 2).is_zero() {
            return total;
        }
        if let Some(inj) = std_tot.injection(-2, m + 2) {
            total = total.add(&inj.retarget(source, target));
        }
        let Some(delta_inj) = pair_tot.injection(-1, m + 2) else {
            return total;
        };
        let delta = delta_inj
            .compose(&std.kernel.component(m + 2))
            .retarget(source, pair_tot.complex.term(m + 1));
        let correction = h.component(m + 1).compose(&delta).neg();
        for &(i, j) in pair_tot.layout.get(&m).map(Vec::as_slice).unwrap_or(&[]) {
            if let (Some(proj), Some(inj)) = (pair_tot.projection(i, j), std_tot.injection(i, j)) {
                let piece = inj
                    .compose(&proj.retarget(pair_tot.complex.term(m), proj.target()))
                    .compose(&correction);
                total = total.add(&piece.retarget(source, target));
            }
        }
        total
    });
    if !sigma.is_chain_map() {
        return Err(Error::Internal("σ is not a chain map".into()));
    }
    Ok(tot_phi.compose(&sigma))
}

/// The staircase presentation as an input to [`serre_alt`].
pub fn staircase_as_presentation(std: &SerrePackage) -> (ChainMap, ChainMap) {
    (std.presentation.p.clone(), std.presentation.epsilon.clone())
}

/// Injective copresentation `0 → M →η J⁰ →j J¹` by dual staircases.
#[derive(Clone, Debug)]
pub struct ContractibleCopresentation {
    pub target: BoundedComplex,
    pub j0: Staircase,
    pub eta: ChainMap,
    pub cokernel: ChainMap,
    pub j1: Staircase,
    pub eta1: ChainMap,
    pub j: ChainMap,
}

/// Staircase with generator `G^{i−1} = J^i` the injective envelope of `M^i`,
/// so the term in degree `i` is `J^i ⊕ J^{i+1}`.
fn injective_staircase(m: &BoundedComplex) -> (Staircase, ChainMap) {
    let envelopes: BTreeMap<i64, ModuleHom> = m
        .degrees()
        .map(|i| (i, injective_envelope(m.term(i))))
        .collect();
    let gens = envelopes.iter().map(|(&i, e)| (i - 1, e.target().clone())).collect();
    let stair = Staircase::new(m.algebra(), gens);
    let eta = stair.map_in(m, |i| envelopes[&i].clone());
    (stair, eta)
}

impl ContractibleCopresentation {
    pub fn new(m: &BoundedComplex) -> Self {
        let (j0, eta) = injective_staircase(m);
        let cokernel = eta.cokernel_complex();
        let (j1, eta1) = injective_staircase(cokernel.target());
        let j = eta1.compose(&cokernel);
        ContractibleCopresentation {
            target: m.clone(),
            j0,
            eta,
            cokernel,
            j1,
            eta1,
            j,
        }
    }
}

/// `S⁻ M = Cok(ν⁻ J⁰ → ν⁻ J¹)[−2]`.
#[derive(Clone, Debug)]
pub struct InversePackage {
    pub input: BoundedComplex,
    pub copresentation: ContractibleCopresentation,
    pub nu_j: ChainMap,
    pub cokernel: ChainMap,
    pub output: BoundedComplex,
}

pub fn serre_inverse(m: &BoundedComplex) -> Result<InversePackage> {
    let copresentation = ContractibleCopresentation::new(m);
    if !copresentation.eta.is_degreewise_injective() {
        return Err(Error::Internal("η is not injective".into()));
    }
    let j0 = inverse_nakayama_complex(&copresentation.j0.complex)?;
    let j1 = inverse_nakayama_complex(&copresentation.j1.complex)?;
    let nu_j = inverse_nakayama_chain(&copresentation.j, &j0, &j1)?;
    let cokernel = nu_j.cokernel_complex();
    let output = cokernel.target().shift(-2);
    Ok(InversePackage {
        input: m.clone(),
        copresentation,
        nu_j,
        cokernel,
        output,
    })
}

/// The presentation of `cone(f)` assembled from lifts of `f` to the staircase
/// presentations: `cone(f₁) → cone(f₀) → cone(f)`. Its kernel complex
/// is exactly `cone` of `S f` before the shift.
pub struct Horseshoe {
    pub cone: BoundedComplex,
    pub q: ChainMap,
    pub epsilon: ChainMap,
    /// `Ker ν(q)[2]`, equal to `cone(S f)`.
    pub kernel_shifted: BoundedComplex,
    pub kernel: ChainMap,
    pub nu_q_source: BoundedComplex,
}

/// Cone of a commutative square, as a map `cone(a) → cone(b)` given by the
/// components `(top, bottom)` with `b ∘ top = bottom ∘ a`.
fn cone_map(a: &ChainMap, b: &ChainMap, top: &ChainMap, bottom: &ChainMap) -> ChainMap {
    let ca = a.cone();
    let cb = b.cone();
    ChainMap::from_fn(&ca.complex, &cb.complex, |n| {
        let s = part_or_sum(&ca, a, n);
        let t = part_or_sum(&cb, b, n);
        let x = top.component(n + 1);
        let y = bottom.component(n);
        ModuleHom::from_blocks(&s, &t, &[vec![Some(&x), None], vec![None, Some(&y)]])
            .retarget(ca.complex.term(n), cb.complex.term(n))
    })
}

fn part_or_sum(c: &crate::complex::Cone, f: &ChainMap, n: i64) -> DirectSum {
    let k = n - c.lo;
    if k >= 0 && (k as usize) < c.parts.len() {
        c.parts[k as usize].clone()
    } else {
        Module::direct_sum(
            f.source().algebra(),
            &[f.source().term(n + 1).clone(), f.target().term(n).clone()],
        )
    }
}

pub fn horseshoe(f: &ChainMap, sm: &SerrePackage, sn: &SerrePackage) -> Result<Horseshoe> {
    let pm = &sm.presentation;
    let pn = &sn.presentation;
    let (f0, f1) = lift_to_presentation(f, pm, &pn.p, &pn.epsilon)?;
    let epsilon = cone_map(&f0, f, &pm.epsilon, &pn.epsilon);
    let q = cone_map(&f1, &f0, &pm.p, &pn.p);
    let nu_f1 = nakayama_chain(&f1, &sm.nu_p1, &sn.nu_p1)?;
    let nu_q_source = nu_f1.cone().complex;
    let nu_q_target = nakayama_complex(q.target())?;
    let nu_q = nakayama_chain(&q, &nu_q_source, &nu_q_target)?;
    let kernel = nu_q.kernel_complex();
    Ok(Horseshoe {
        cone: f.cone().complex,
        kernel_shifted: kernel.source().shift(2),
        q,
        epsilon,
        kernel,
        nu_q_source,
    })
}

/// Comparison `S(cone f) → Ker ν(q)[2]` for the horseshoe presentation, from
/// a lift of the staircase presentation of `cone f`.
pub fn compare_horseshoe(s_cone: &SerrePackage, hs: &Horseshoe) -> Result<ChainMap> {
    let target = hs.epsilon.target();
    let (_, f1) = lift_to_presentation(
        &ChainMap::identity(&s_cone.input).retarget(&s_cone.input, target),
        &s_cone.presentation,
        &hs.q,
        &hs.epsilon,
    )?;
    let nu_f1 = nakayama_chain(&f1, &s_cone.nu_p1, &hs.nu_q_source)?;
    let restricted = nu_f1
        .restrict(&s_cone.kernel, &hs.kernel)
        .ok_or_else(|| Error::Internal("ν f₁ does not preserve the kernels".into()))?;
    Ok(restricted.shift(2).retarget(&s_cone.output, &hs.kernel_shifted))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Quiver, Relation};
    use crate::homotopy::{equivalence_certificate, find_homotopy_equivalence, HomotopyClasses};
    use crate::linalg::Field;
    use crate::rep::{classical_tau, injective, projective};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a2() -> Arc<BoundAlgebra> {
        let q = Quiver::new(
            vec!["1".into(), "2".into()],
            vec![("a".into(), "1".into(), "2".into())],
        )
        .unwrap();
        Arc::new(BoundAlgebra::new(q, vec![], Field::Rational, 2).unwrap())
    }

    fn dual_numbers() -> Arc<BoundAlgebra> {
        let q = Quiver::new(vec!["1".into()], vec![("x".into(), "1".into(), "1".into())]).unwrap();
        let f = Field::Rational;
        let rel = Relation {
            terms: vec![(f.one(), vec![0, 0])],
        };
        Arc::new(BoundAlgebra::new(q, vec![rel], f, 2).unwrap())
    }

    fn dims(x: &BoundedComplex) -> Vec<(i64, Vec<usize>)> {
        x.degrees().map(|n| (n, x.term(n).dims().to_vec())).collect()
    }

    #[test]
    fn zero_presentation() {
        let alg = a2();
        let pres = ContractiblePresentation::new(&BoundedComplex::zero(alg.clone()));
        assert!(pres.p0.complex.is_zero() && pres.p1.complex.is_zero());
        assert!(serre_of_complex(&BoundedComplex::zero(alg)).unwrap().output.is_zero());
    }

    #[test]
    fn staircase_of_projective_stalk() {
        let alg = a2();
        let p = projective(&alg, 0);
        let pres = ContractiblePresentation::new(&BoundedComplex::stalk(&p, 0));
        pres.verify().unwrap();
        assert_eq!(dims(&pres.p0.complex), vec![(0, vec![1, 1]), (1, vec![1, 1])]);
        assert_eq!(pres.p0.complex.diff(0).maps(), ModuleHom::identity(&p).maps());
    }

    #[test]
    fn staircase_of_simple_over_dual_numbers() {
        let alg = dual_numbers();
        let pres = ContractiblePresentation::new(&BoundedComplex::stalk(&Module::simple(alg, 0), 0));
        pres.verify().unwrap();
        assert_eq!(dims(&pres.p0.complex), vec![(0, vec![2]), (1, vec![2])]);
        assert_eq!(dims(pres.kernel.source()), vec![(0, vec![1]), (1, vec![2])]);
    }

    #[test]
    fn serre_of_projective_is_injective() {
        let alg = a2();
        for i in 0..2 {
            let s = serre_of_complex(&BoundedComplex::stalk(&projective(&alg, i), 0)).unwrap();
            let target = BoundedComplex::stalk(&injective(&alg, i), 0);
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            assert!(find_homotopy_equivalence(&s.output, &target, &mut rng, 10).unwrap().is_some());
        }
    }

    #[test]
    fn module_case_over_a2() {
        let alg = a2();
        let s1 = Module::simple(alg.clone(), 0);
        let x = serre_of_module(&s1).unwrap();
        assert_eq!(dims(&x), vec![(-2, vec![0, 1]), (-1, vec![1, 1]), (0, vec![1, 0])]);
        assert_eq!(x.term(-2), &classical_tau(&s1));
        let h: Vec<_> = x.homology().into_iter().map(|(n, m)| (n, m.dims().to_vec())).collect();
        // Hom(S₁, A) = 0 since the socle of A is at vertex 2, so ν S₁ = 0.
        assert!(h.iter().all(|(_, d)| d.iter().all(|&k| k == 0)));
    }

    #[test]
    fn alt_on_staircase_matches() {
        let alg = dual_numbers();
        let m = BoundedComplex::stalk(&Module::simple(alg, 0), 0);
        let std = serre_of_complex(&m).unwrap();
        let (q, eps) = staircase_as_presentation(&std);
        let alt = serre_alt(&q, &eps).unwrap();
        assert_eq!(alt.kernel.source(), std.kernel.source());
        let cmp = compare_alt(&std, &alt).unwrap();
        assert!(equivalence_certificate(&cmp).is_some());
    }

    #[test]
    fn alt_on_module_presentation() {
        let alg = a2();
        let s1 = Module::simple(alg.clone(), 0);
        let m = BoundedComplex::stalk(&s1, 0);
        let pres = crate::rep::projective_presentation(&s1);
        let q = ChainMap::from_fn(
            &BoundedComplex::stalk(pres.p.source(), 0),
            &BoundedComplex::stalk(pres.p.target(), 0),
            |_| pres.p.clone(),
        );
        let eps = ChainMap::from_fn(q.target(), &m, |_| pres.epsilon.clone());
        let alt = serre_alt(&q, &eps).unwrap();
        assert_eq!(dims(alt.output()), vec![(-2, vec![0, 1]), (-1, vec![1, 1]), (0, vec![1, 0])]);
        let std = serre_of_complex(&m).unwrap();
        let cmp = compare_alt(&std, &alt).unwrap();
        assert!(equivalence_certificate(&cmp).is_some());
    }

    #[test]
    fn duality_dimension_for_simple_over_dual_numbers() {
        let alg = dual_numbers();
        let m = BoundedComplex::stalk(&Module::simple(alg.clone(), 0), 0);
        let x = BoundedComplex::stalk(&projective(&alg, 0), 0);
        let sm = serre_of_complex(&m).unwrap().output;
        let left = HomotopyClasses::new(&m, &x).unwrap().dim();
        let right = HomotopyClasses::new(&x, &sm).unwrap().dim();
        assert_eq!((left, right), (1, 1));
    }

    #[test]
    fn inverse_of_injective_is_projective() {
        let alg = a2();
        for i in 0..2 {
            let s = serre_inverse(&BoundedComplex::stalk(&injective(&alg, i), 0)).unwrap();
            let target = BoundedComplex::stalk(&projective(&alg, i), 0);
            let mut rng = ChaCha8Rng::seed_from_u64(2);
            assert!(find_homotopy_equivalence(&s.output, &target, &mut rng, 10).unwrap().is_some());
        }
    }

    #[test]
    fn inverse_after_serre() {
        let alg = dual_numbers();
        let m = BoundedComplex::stalk(&Module::simple(alg, 0), 0);
        let s = serre_of_complex(&m).unwrap().output;
        let back = serre_inverse(&s).unwrap().output;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(find_homotopy_equivalence(&m, &back, &mut rng, 10).unwrap().is_some());
    }

    #[test]
    fn serre_on_identity_and_zero() {
        let alg = dual_numbers();
        let m = BoundedComplex::stalk(&Module::simple(alg, 0), 0);
        let sm = serre_of_complex(&m).unwrap();
        let id = serre_on_map(&ChainMap::identity(&m), &sm, &sm).unwrap();
        let classes = HomotopyClasses::new(&sm.output, &sm.output).unwrap();
        assert_eq!(
            classes.class_of(&id),
            classes.class_of(&ChainMap::identity(&sm.output))
        );
        let zero = serre_on_map(&ChainMap::zero(&m, &m), &sm, &sm).unwrap();
        assert!(classes.nullhomotopy(&zero).is_some());
    }

    #[test]
    fn horseshoe_kernel_is_cone_of_serre_map() {
        let alg = dual_numbers();
        let p = projective(&alg, 0);
        let s = Module::simple(alg.clone(), 0);
        let m = BoundedComplex::stalk(&p, 0);
        let n = BoundedComplex::stalk(&s, 0);
        let eps = crate::rep::projective_cover(&s);
        let f = ChainMap::new(&m, &n, |_| eps.clone()).unwrap();
        let sm = serre_of_complex(&m).unwrap();
        let sn = serre_of_complex(&n).unwrap();
        let hs = horseshoe(&f, &sm, &sn).unwrap();
        let sf = serre_on_map(&f, &sm, &sn).unwrap();
        assert_eq!(hs.kernel_shifted, sf.cone().complex);
        let s_cone = serre_of_complex(&hs.cone).unwrap();
        let cmp = compare_horseshoe(&s_cone, &hs).unwrap();
        assert!(equivalence_certificate(&cmp).is_some());
    }
}
