//! Projective and injective modules, projective covers and minimal
//! presentations, injective envelopes, the Nakayama functor and the
//! classical Auslander–Reiten translate.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::BoundAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Coordinates, Matrix, Quotient, Scalar};
use crate::module::{Decomposition, HomSpace, Module, ModuleHom};

/// `⊕ P(i)` over the listed vertices, with decomposition metadata.
pub fn projective_sum(alg: &Arc<BoundAlgebra>, vertices: &[usize]) -> Module {
    let n = alg.num_vertices();
    let dims: Vec<usize> = (0..n)
        .map(|v| vertices.iter().map(|&i| alg.paths_between(i, v).len()).sum())
        .collect();
    let arrows = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let x = alg.unit_vector(alg.arrow_basis(a));
            let blocks: Vec<Matrix> = vertices
                .iter()
                .map(|&i| alg.right_mul_matrix(&x, i, arrow.source, arrow.target))
                .collect();
            block_diagonal(alg, &blocks)
        })
        .collect();
    Module::new_unchecked(
        alg.clone(),
        dims,
        arrows,
        Some(Decomposition::Projective(vertices.to_vec())),
    )
}

/// `⊕ I(i)` over the listed vertices, with decomposition metadata.
pub fn injective_sum(alg: &Arc<BoundAlgebra>, vertices: &[usize]) -> Module {
    let n = alg.num_vertices();
    let dims: Vec<usize> = (0..n)
        .map(|v| vertices.iter().map(|&i| alg.paths_between(v, i).len()).sum())
        .collect();
    let arrows = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let x = alg.unit_vector(alg.arrow_basis(a));
            let blocks: Vec<Matrix> = vertices
                .iter()
                .map(|&i| {
                    alg.left_mul_matrix(&x, arrow.target, arrow.source, i)
                        .transpose()
                })
                .collect();
            block_diagonal(alg, &blocks)
        })
        .collect();
    Module::new_unchecked(
        alg.clone(),
        dims,
        arrows,
        Some(Decomposition::Injective(vertices.to_vec())),
    )
}

/// `rad^k M`, spanned per vertex by the images of paths of length `≥ k`.
pub fn radical_power(m: &Module, k: usize) -> Vec<Matrix> {
    let alg = m.algebra();
    let mut spans: Vec<Matrix> = (0..alg.num_vertices())
        .map(|v| Matrix::zeros(alg.field(), m.dim_at(v), 0))
        .collect();
    if k == 0 {
        return (0..alg.num_vertices())
            .map(|v| Matrix::identity(alg.field(), m.dim_at(v)))
            .collect();
    }
    for len in k..=alg.max_path_length() {
        for p in alg.paths_of_length(len) {
            spans[p.target] = spans[p.target].hstack(&m.path_action(&p));
        }
    }
    spans
}

/// `M / rad^k M`.
pub fn radical_quotient(m: &Module, k: usize) -> Module {
    crate::module::quotient_by(m, &radical_power(m, k)).target().clone()
}

pub fn projective(alg: &Arc<BoundAlgebra>, i: usize) -> Module {
    projective_sum(alg, &[i])
}

pub fn injective(alg: &Arc<BoundAlgebra>, i: usize) -> Module {
    injective_sum(alg, &[i])
}

fn block_diagonal(alg: &BoundAlgebra, blocks: &[Matrix]) -> Matrix {
    let rows: Vec<usize> = blocks.iter().map(Matrix::rows).collect();
    let cols: Vec<usize> = blocks.iter().map(Matrix::cols).collect();
    let grid: Vec<Vec<Option<&Matrix>>> = (0..blocks.len())
        .map(|r| (0..blocks.len()).map(|c| (r == c).then_some(&blocks[r])).collect())
        .collect();
    Matrix::from_blocks(alg.field(), &rows, &cols, &grid)
}

fn projective_vertices(m: &Module) -> Result<&[usize]> {
    match m.decomposition() {
        Some(Decomposition::Projective(v)) => Ok(v),
        _ if m.is_zero() => Ok(&[]),
        _ => Err(Error::MissingMetadata("projective")),
    }
}

fn injective_vertices(m: &Module) -> Result<&[usize]> {
    match m.decomposition() {
        Some(Decomposition::Injective(v)) => Ok(v),
        _ if m.is_zero() => Ok(&[]),
        _ => Err(Error::MissingMetadata("injective")),
    }
}

/// Offset of summand `k` inside the basis of the sum at vertex `v`, for a
/// projective (`outgoing = true`) or injective decomposition.
fn summand_offset(alg: &BoundAlgebra, vertices: &[usize], k: usize, v: usize, outgoing: bool) -> usize {
    vertices[..k]
        .iter()
        .map(|&i| {
            if outgoing {
                alg.paths_between(i, v).len()
            } else {
                alg.paths_between(v, i).len()
            }
        })
        .sum()
}

fn position_of_idempotent(alg: &BoundAlgebra, v: usize) -> usize {
    alg.paths_between(v, v)
        .iter()
        .position(|&b| b == alg.idempotent(v))
        .expect("idempotent is a basis path")
}

/// Matrix of algebra elements `λ[l][k] ∈ e_{j_l} Λ e_{i_k}` describing a map
/// `⊕ P(i_k) → ⊕ P(j_l)`: the image of the generator `e_{i_k}`.
pub fn projective_map_elements(f: &ModuleHom) -> Result<Vec<Vec<Vec<Scalar>>>> {
    let alg = f.source().algebra().clone();
    let src = projective_vertices(f.source())?;
    let tgt = projective_vertices(f.target())?;
    let mut out = Vec::with_capacity(tgt.len());
    for (l, &j) in tgt.iter().enumerate() {
        let mut row = Vec::with_capacity(src.len());
        for (k, &i) in src.iter().enumerate() {
            let col = summand_offset(&alg, src, k, i, true) + position_of_idempotent(&alg, i);
            let off = summand_offset(&alg, tgt, l, i, true);
            let mut lambda = vec![alg.field().zero(); alg.dim()];
            for (r, &b) in alg.paths_between(j, i).iter().enumerate() {
                lambda[b] = f.map_at(i).get(off + r, col).clone();
            }
            row.push(lambda);
        }
        out.push(row);
    }
    Ok(out)
}

/// The map `⊕ P(i_k) → ⊕ P(j_l)` given by left multiplication with `λ[l][k]`.
pub fn projective_map_from_elements(
    source: &Module,
    target: &Module,
    lambda: &[Vec<Vec<Scalar>>],
) -> Result<ModuleHom> {
    let alg = source.algebra().clone();
    let src = projective_vertices(source)?;
    let tgt = projective_vertices(target)?;
    let maps = (0..alg.num_vertices())
        .map(|v| {
            let blocks: Vec<Vec<Matrix>> = tgt
                .iter()
                .enumerate()
                .map(|(l, &j)| {
                    src.iter()
                        .enumerate()
                        .map(|(k, &i)| alg.left_mul_matrix(&lambda[l][k], i, j, v))
                        .collect()
                })
                .collect();
            assemble(&alg, &blocks, tgt, src, v, true, true)
        })
        .collect();
    Ok(ModuleHom::new_unchecked(source.clone(), target.clone(), maps))
}

fn assemble(
    alg: &BoundAlgebra,
    blocks: &[Vec<Matrix>],
    rows_v: &[usize],
    cols_v: &[usize],
    v: usize,
    rows_outgoing: bool,
    cols_outgoing: bool,
) -> Matrix {
    let size = |i: usize, outgoing: bool| {
        if outgoing {
            alg.paths_between(i, v).len()
        } else {
            alg.paths_between(v, i).len()
        }
    };
    let rows: Vec<usize> = rows_v.iter().map(|&j| size(j, rows_outgoing)).collect();
    let cols: Vec<usize> = cols_v.iter().map(|&i| size(i, cols_outgoing)).collect();
    let grid: Vec<Vec<Option<&Matrix>>> = blocks
        .iter()
        .map(|r| r.iter().map(Some).collect())
        .collect();
    Matrix::from_blocks(alg.field(), &rows, &cols, &grid)
}

/// The Nakayama functor on a map between projectives: `ν P(i) = I(i)`, and
/// the component `λ ∈ e_j Λ e_i` acts on `D(Λ e_i) → D(Λ e_j)` as the
/// transpose of right multiplication by `λ`.
pub fn nakayama(f: &ModuleHom) -> Result<ModuleHom> {
    let alg = f.source().algebra().clone();
    let src = projective_vertices(f.source())?.to_vec();
    let tgt = projective_vertices(f.target())?.to_vec();
    let lambda = projective_map_elements(f)?;
    let source = injective_sum(&alg, &src);
    let target = injective_sum(&alg, &tgt);
    let maps = (0..alg.num_vertices())
        .map(|v| {
            let blocks: Vec<Vec<Matrix>> = tgt
                .iter()
                .enumerate()
                .map(|(l, &j)| {
                    src.iter()
                        .enumerate()
                        .map(|(k, &i)| alg.right_mul_matrix(&lambda[l][k], v, j, i).transpose())
                        .collect()
                })
                .collect();
            assemble(&alg, &blocks, &tgt, &src, v, false, false)
        })
        .collect();
    Ok(ModuleHom::new_unchecked(source, target, maps))
}

/// `ν P` for a projective module `P` with metadata.
pub fn nakayama_object(p: &Module) -> Result<Module> {
    Ok(injective_sum(p.algebra(), projective_vertices(p)?))
}

/// `ν⁻ I` for an injective module `I` with metadata.
pub fn inverse_nakayama_object(i: &Module) -> Result<Module> {
    Ok(projective_sum(i.algebra(), injective_vertices(i)?))
}

/// Inverse Nakayama functor on a map between injectives. The element
/// `λ ∈ e_j Λ e_i` of the block `I(i) → I(j)` is read off the row of
/// `e_j^*` at vertex `j`.
pub fn inverse_nakayama(g: &ModuleHom) -> Result<ModuleHom> {
    let alg = g.source().algebra().clone();
    let src = injective_vertices(g.source())?.to_vec();
    let tgt = injective_vertices(g.target())?.to_vec();
    let mut lambda = Vec::with_capacity(tgt.len());
    for (l, &j) in tgt.iter().enumerate() {
        let row_index = summand_offset(&alg, &tgt, l, j, false) + position_of_idempotent(&alg, j);
        let mut row = Vec::with_capacity(src.len());
        for (k, &i) in src.iter().enumerate() {
            let off = summand_offset(&alg, &src, k, j, false);
            let mut x = vec![alg.field().zero(); alg.dim()];
            for (c, &b) in alg.paths_between(j, i).iter().enumerate() {
                x[b] = g.map_at(j).get(row_index, off + c).clone();
            }
            row.push(x);
        }
        lambda.push(row);
    }
    let source = projective_sum(&alg, &src);
    let target = projective_sum(&alg, &tgt);
    projective_map_from_elements(&source, &target, &lambda)
}

/// Projective cover `ε: P ↠ M`, with `P = ⊕ P(v)` over a basis of the top
/// `M / M·rad Λ`. Modules already carrying projective metadata are their
/// own cover.
pub fn projective_cover(m: &Module) -> ModuleHom {
    if matches!(m.decomposition(), Some(Decomposition::Projective(_))) {
        return ModuleHom::identity(m);
    }
    let alg = m.algebra().clone();
    let field = alg.field();
    let n = alg.num_vertices();
    let mut generators: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for v in 0..n {
        let incoming: Vec<Matrix> = alg
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.target == v)
            .map(|(a, _)| m.arrow(a).clone())
            .collect();
        let rad = incoming
            .iter()
            .fold(Matrix::zeros(field, m.dim_at(v), 0), |acc, x| acc.hstack(x));
        let q = Quotient::new(&rad);
        for j in 0..q.section.cols() {
            generators.push((v, q.section.column(j)));
        }
    }
    let vertices: Vec<usize> = generators.iter().map(|(v, _)| *v).collect();
    let p = projective_sum(&alg, &vertices);
    let maps = (0..n)
        .map(|w| {
            let mut cols = Vec::new();
            for (v, x) in &generators {
                for &b in alg.paths_between(*v, w) {
                    cols.push(m.path_action(&alg.basis()[b]).mul_vec(x));
                }
            }
            Matrix::from_columns(field, m.dim_at(w), &cols)
        })
        .collect();
    ModuleHom::new_unchecked(p, m.clone(), maps)
}

/// `P₁ →p P₀ →ε M → 0` with `P₀ ↠ M` and `P₁ ↠ ker ε` projective covers.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub p: ModuleHom,
    pub epsilon: ModuleHom,
}

pub fn projective_presentation(m: &Module) -> Presentation {
    let epsilon = projective_cover(m);
    let k = epsilon.kernel();
    let cover = projective_cover(k.source());
    Presentation {
        p: k.compose(&cover),
        epsilon,
    }
}

/// Injective envelope `η: M ↪ I`, with `I = ⊕ I(v)` over a basis of the
/// socle; a socle vector `s` with dual functional `φ` maps `m ∈ M_w` to the
/// functional `x ↦ φ(m·x)` on paths `w → v`.
pub fn injective_envelope(m: &Module) -> ModuleHom {
    if matches!(m.decomposition(), Some(Decomposition::Injective(_))) {
        return ModuleHom::identity(m);
    }
    let alg = m.algebra().clone();
    let field = alg.field();
    let n = alg.num_vertices();
    let mut functionals: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for v in 0..n {
        let outgoing: Vec<Matrix> = alg
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .filter(|(_, a)| a.source == v)
            .map(|(a, _)| m.arrow(a).clone())
            .collect();
        let stacked = outgoing
            .iter()
            .fold(Matrix::zeros(field, 0, m.dim_at(v)), |acc, x| acc.vstack(x));
        let socle = stacked.kernel_basis();
        if socle.cols() == 0 {
            continue;
        }
        let coords = Coordinates::new(socle).expect("kernel basis is independent");
        for k in 0..coords.dim() {
            let phi: Vec<Scalar> = (0..m.dim_at(v))
                .map(|c| {
                    let mut e = vec![field.zero(); m.dim_at(v)];
                    e[c] = field.one();
                    coords.coords_unchecked(&e)[k].clone()
                })
                .collect();
            functionals.push((v, phi));
        }
    }
    let vertices: Vec<usize> = functionals.iter().map(|(v, _)| *v).collect();
    let i = injective_sum(&alg, &vertices);
    let maps = (0..n)
        .map(|w| {
            let mut rows = Vec::new();
            for (v, phi) in &functionals {
                for &b in alg.paths_between(w, *v) {
                    let act = m.path_action(&alg.basis()[b]);
                    let phi_row = Matrix::from_rows(field, vec![phi.clone()], phi.len()).unwrap();
                    rows.push(phi_row.mul(&act).row(0).to_vec());
                }
            }
            Matrix::from_rows(field, rows, m.dim_at(w)).unwrap()
        })
        .collect();
    ModuleHom::new_unchecked(m.clone(), i, maps)
}

/// `0 → M →η I⁰ →j I¹` with `I⁰` and `I¹` injective envelopes.
#[derive(Clone, Debug)]
pub struct Copresentation {
    pub eta: ModuleHom,
    pub j: ModuleHom,
}

pub fn injective_copresentation(m: &Module) -> Copresentation {
    let eta = injective_envelope(m);
    let c = eta.cokernel();
    let env = injective_envelope(c.target());
    Copresentation {
        j: env.compose(&c),
        eta,
    }
}

/// `τM = D Tr M`, computed from the transpose: the cokernel of `Hom(p, Λ)`
/// as a left module, then dualized. Independent of [`nakayama`].
pub fn classical_tau(m: &Module) -> Module {
    let alg = m.algebra().clone();
    let field = alg.field();
    let n = alg.num_vertices();
    let pres = projective_presentation(m);
    let p0 = projective_vertices(pres.p.target()).unwrap().to_vec();
    let p1 = projective_vertices(pres.p.source()).unwrap().to_vec();
    let lambda = projective_map_elements(&pres.p).unwrap();
    // Hom(P(i), Λ) = Λ e_i; at vertex v this is e_v Λ e_i, paths v → i.
    let left_basis = |v: usize, gens: &[usize]| -> Vec<(usize, usize)> {
        gens.iter()
            .enumerate()
            .flat_map(|(k, &i)| alg.paths_between(v, i).iter().map(move |&b| (k, b)))
            .collect()
    };
    // p* : ⊕ Λe_{i_k} → ⊕ Λe_{j_l}, (μ_k) ↦ (Σ_k μ_k λ_{kl})_l
    let transpose_at = |v: usize| -> Matrix {
        let dom = left_basis(v, &p0);
        let cod = left_basis(v, &p1);
        let mut t = Matrix::zeros(field, cod.len(), dom.len());
        for (c, &(k, b)) in dom.iter().enumerate() {
            for (l, _) in p1.iter().enumerate() {
                let prod = alg.mul(&alg.unit_vector(b), &lambda[k][l]);
                for (r, &(l2, b2)) in cod.iter().enumerate() {
                    if l2 == l && !prod[b2].is_zero() {
                        t.set(r, c, prod[b2].clone());
                    }
                }
            }
        }
        t
    };
    let quotients: Vec<Quotient> = (0..n)
        .map(|v| Quotient::new(&transpose_at(v).column_space()))
        .collect();
    // Left action of a: v → w sends e_w Λ e_j to e_v Λ e_j.
    let left_action = |a: usize, v: usize, w: usize| -> Matrix {
        let x = alg.unit_vector(alg.arrow_basis(a));
        let dom = left_basis(w, &p1);
        let cod = left_basis(v, &p1);
        let mut t = Matrix::zeros(field, cod.len(), dom.len());
        for (c, &(l, b)) in dom.iter().enumerate() {
            let prod = alg.mul(&x, &alg.unit_vector(b));
            for (r, &(l2, b2)) in cod.iter().enumerate() {
                if l2 == l && !prod[b2].is_zero() {
                    t.set(r, c, prod[b2].clone());
                }
            }
        }
        t
    };
    let dims: Vec<usize> = quotients.iter().map(|q| q.projection.rows()).collect();
    let arrows = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let (v, w) = (arrow.source, arrow.target);
            quotients[v]
                .projection
                .mul(&left_action(a, v, w))
                .mul(&quotients[w].section)
                .transpose()
        })
        .collect();
    Module::new_unchecked(alg, dims, arrows, None)
}

/// An isomorphism `M → N`, searched among Hom-space basis vectors and then
/// random combinations. `None` means none was found.
pub fn find_isomorphism(m: &Module, n: &Module, rng: &mut impl Rng, attempts: usize) -> Option<ModuleHom> {
    if m.dims() != n.dims() {
        return None;
    }
    if m.is_zero() {
        return Some(ModuleHom::zero(m, n));
    }
    let space = HomSpace::new(m, n).ok()?;
    if let Some(f) = space.basis().iter().find(|f| f.is_isomorphism()) {
        return Some(f.clone());
    }
    let field = m.field();
    for _ in 0..attempts {
        let coords: Vec<Scalar> = (0..space.dim())
            .map(|_| field.from_i64(rng.gen_range(-3..=3)))
            .collect();
        let f = space.element(&coords);
        if f.is_isomorphism() {
            return Some(f);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Quiver, Relation};
    use crate::linalg::Field;
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

    #[test]
    fn a2_indecomposable_projectives_and_injectives() {
        let alg = a2();
        assert_eq!(projective(&alg, 0).dims(), &[1, 1]);
        assert_eq!(projective(&alg, 1).dims(), &[0, 1]);
        assert_eq!(injective(&alg, 0).dims(), &[1, 0]);
        assert_eq!(injective(&alg, 1).dims(), &[1, 1]);
    }

    #[test]
    fn dual_numbers_projective_is_injective() {
        let alg = dual_numbers();
        let p = projective(&alg, 0);
        let i = injective(&alg, 0);
        // basis (e, x): x acts as the nilpotent Jordan block e ↦ x
        let f = alg.field();
        assert_eq!(p.arrow(0), &Matrix::from_i64(f, &[&[0, 0], &[1, 0]]));
        // dual basis (e*, x*): x sends x* to e*
        assert_eq!(i.arrow(0), &Matrix::from_i64(f, &[&[0, 1], &[0, 0]]));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(find_isomorphism(&p, &i, &mut rng, 10).is_some());
    }

    #[test]
    fn yoneda_dimension() {
        let alg = a2();
        let s1 = Module::simple(alg.clone(), 0);
        assert_eq!(HomSpace::new(&projective(&alg, 0), &s1).unwrap().dim(), 1);
        assert_eq!(HomSpace::new(&projective(&alg, 1), &s1).unwrap().dim(), 0);
    }

    #[test]
    fn presentation_of_simple_over_a2() {
        let alg = a2();
        let pres = projective_presentation(&Module::simple(alg, 0));
        assert_eq!(pres.epsilon.source().decomposition(), Some(&Decomposition::Projective(vec![0])));
        assert_eq!(pres.p.source().decomposition(), Some(&Decomposition::Projective(vec![1])));
        assert!(pres.epsilon.is_surjective());
        assert!(pres.epsilon.compose(&pres.p).is_zero());
    }

    #[test]
    fn presentation_of_simple_over_dual_numbers() {
        let alg = dual_numbers();
        let pres = projective_presentation(&Module::simple(alg.clone(), 0));
        assert_eq!(pres.p.source().dims(), &[2]);
        assert_eq!(pres.p.target().dims(), &[2]);
        // p is multiplication by x: rank 1
        assert_eq!(pres.p.map_at(0).rank(), 1);
    }

    #[test]
    fn nakayama_of_inclusion_over_a2() {
        let alg = a2();
        let pres = projective_presentation(&Module::simple(alg.clone(), 0));
        let nu = nakayama(&pres.p).unwrap();
        assert!(nu.is_homomorphism());
        assert_eq!(nu.source().dims(), &[1, 1]);
        assert_eq!(nu.target().dims(), &[1, 0]);
        assert_eq!(nu.kernel().source().dims(), &[0, 1]);
    }

    #[test]
    fn nakayama_of_x_has_simple_kernel() {
        let alg = dual_numbers();
        let pres = projective_presentation(&Module::simple(alg.clone(), 0));
        let nu = nakayama(&pres.p).unwrap();
        assert!(nu.is_homomorphism());
        let f = alg.field();
        // transpose of right multiplication by x on (e, x)
        assert_eq!(nu.map_at(0), &Matrix::from_i64(f, &[&[0, 1], &[0, 0]]).scale(&pres.p.map_at(0).get(1, 0).clone()));
        assert_eq!(nu.kernel().source().dims(), &[1]);
    }

    #[test]
    fn inverse_nakayama_round_trip() {
        let alg = dual_numbers();
        let pres = projective_presentation(&Module::simple(alg, 0));
        let nu = nakayama(&pres.p).unwrap();
        assert_eq!(inverse_nakayama(&nu).unwrap(), pres.p);
    }

    #[test]
    fn classical_tau_examples() {
        let alg = a2();
        let tau = classical_tau(&Module::simple(alg.clone(), 0));
        assert_eq!(tau, Module::simple(alg.clone(), 1));
        assert!(classical_tau(&projective(&alg, 0)).is_zero());
        let alg = dual_numbers();
        assert_eq!(classical_tau(&Module::simple(alg.clone(), 0)), Module::simple(alg, 0));
    }

    #[test]
    fn envelope_of_simple_over_a2() {
        let alg = a2();
        let eta = injective_envelope(&Module::simple(alg.clone(), 0));
        assert_eq!(eta.target().decomposition(), Some(&Decomposition::Injective(vec![0])));
        let cop = injective_copresentation(&Module::simple(alg, 1));
        assert!(cop.eta.is_injective());
        assert_eq!(cop.j.target().dims(), &[1, 0]);
    }
}
