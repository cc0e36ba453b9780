//! Hom complexes, homotopy classes of chain maps, null-homotopies and
//! contractions.

use std::collections::BTreeMap;

use rand::Rng;

use crate::complex::{BoundedComplex, ChainMap};
use crate::error::{Error, Result};
use crate::linalg::{Coordinates, Matrix, Scalar};
use crate::module::{lift_through, HomSpace, ModuleHom};

/// Components `s^n: X^n → Y^{n−1}` of a homotopy.
#[derive(Clone, Debug)]
pub struct Homotopy {
    pub source: BoundedComplex,
    pub target: BoundedComplex,
    pub components: BTreeMap<i64, ModuleHom>,
}

impl Homotopy {
    pub fn component(&self, n: i64) -> ModuleHom {
        self.components.get(&n).cloned().unwrap_or_else(|| {
            ModuleHom::zero(self.source.term(n), self.target.term(n - 1))
        })
    }

    /// `d_Y s + s d_X` in degree `n`.
    pub fn boundary_at(&self, n: i64) -> ModuleHom {
        let a = self.target.diff(n - 1).compose(&self.component(n));
        let b = self.component(n + 1).compose(&self.source.diff(n));
        a.add(&b)
    }

    /// Whether `f = d s + s d` exactly in every degree.
    pub fn witnesses(&self, f: &ChainMap) -> bool {
        let lo = self.source.lo().min(self.target.lo()) - 1;
        let hi = self.source.hi().max(self.target.hi()) + 1;
        (lo..=hi).all(|n| self.boundary_at(n).maps() == f.component(n).maps())
    }
}

/// The degree-`n` part `⊕_i Hom_Λ(X^i, Y^{i+n})` of the Hom complex, with
/// the concatenated Hom-space bases.
#[derive(Clone, Debug)]
pub struct HomDegree {
    pub n: i64,
    blocks: Vec<(i64, HomSpace)>,
    offsets: Vec<usize>,
    dim: usize,
}

impl HomDegree {
    pub fn new(x: &BoundedComplex, y: &BoundedComplex, n: i64) -> Result<Self> {
        let mut blocks = Vec::new();
        if !x.is_zero() && !y.is_zero() {
            for i in x.degrees() {
                if y.term(i + n).is_zero() {
                    continue;
                }
                blocks.push((i, HomSpace::new(x.term(i), y.term(i + n))?));
            }
        }
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut dim = 0;
        for (_, s) in &blocks {
            offsets.push(dim);
            dim += s.dim();
        }
        Ok(HomDegree {
            n,
            blocks,
            offsets,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coordinates of the family of components `f_i: X^i → Y^{i+n}`.
    pub fn vector(&self, component: impl Fn(i64) -> ModuleHom) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(self.dim);
        for (i, space) in &self.blocks {
            v.extend(space.coords(&component(*i)));
        }
        v
    }

    /// Components `(i, f_i)` of a coordinate vector.
    pub fn components(&self, v: &[Scalar]) -> BTreeMap<i64, ModuleHom> {
        self.blocks
            .iter()
            .zip(&self.offsets)
            .map(|((i, space), &o)| (*i, space.element(&v[o..o + space.dim()])))
            .collect()
    }

    fn basis_elements(&self) -> impl Iterator<Item = (i64, &ModuleHom)> {
        self.blocks
            .iter()
            .flat_map(|(i, s)| s.basis().iter().map(move |h| (*i, h)))
    }
}

/// Matrix of `∂f = d_Y f − (−1)^n f d_X` from degree `n` to `n + 1`.
pub fn hom_differential(
    x: &BoundedComplex,
    y: &BoundedComplex,
    from: &HomDegree,
    to: &HomDegree,
) -> Matrix {
    let n = from.n;
    let field = x.algebra().field();
    let sign = if n.rem_euclid(2) == 0 {
        field.from_i64(-1)
    } else {
        field.one()
    };
    let columns: Vec<Vec<Scalar>> = from
        .basis_elements()
        .map(|(i, h)| {
            let left = y.diff(i + n).compose(h);
            let right = h.compose(&x.diff(i - 1)).scale(&sign);
            to.vector(|k| {
                if k == i {
                    left.clone()
                } else if k == i - 1 {
                    right.clone()
                } else {
                    ModuleHom::zero(x.term(k), y.term(k + n + 1))
                }
            })
        })
        .collect();
    Matrix::from_columns(field, to.dim(), &columns)
}

/// `Hom_K(X, Y) = H⁰ Hom(X, Y)` with a fixed basis of representatives.
#[derive(Clone, Debug)]
pub struct HomotopyClasses {
    pub source: BoundedComplex,
    pub target: BoundedComplex,
    minus: HomDegree,
    zero: HomDegree,
    boundary: Matrix,
    boundary_rank: usize,
    representatives: Vec<ChainMap>,
    coords: Coordinates,
}

impl HomotopyClasses {
    pub fn new(x: &BoundedComplex, y: &BoundedComplex) -> Result<Self> {
        if !crate::module::same_algebra(x.algebra(), y.algebra()) {
            return Err(Error::AlgebraMismatch);
        }
        let minus = HomDegree::new(x, y, -1)?;
        let zero = HomDegree::new(x, y, 0)?;
        let plus = HomDegree::new(x, y, 1)?;
        let boundary = hom_differential(x, y, &minus, &zero);
        let cycles = hom_differential(x, y, &zero, &plus).kernel_basis();
        let b0 = boundary.column_space();
        let combined = b0.hstack(&cycles);
        let pivots = combined.rref().pivots;
        let rep_cols: Vec<usize> = pivots
            .iter()
            .filter(|&&c| c >= b0.cols())
            .map(|&c| c - b0.cols())
            .collect();
        let reps = cycles.select_columns(&rep_cols);
        let representatives = (0..reps.cols())
            .map(|j| {
                let comps = zero.components(&reps.column(j));
                ChainMap::from_fn(x, y, |n| {
                    comps
                        .get(&n)
                        .cloned()
                        .unwrap_or_else(|| ModuleHom::zero(x.term(n), y.term(n)))
                })
            })
            .collect();
        let coords = Coordinates::new(b0.hstack(&reps))?;
        Ok(HomotopyClasses {
            source: x.clone(),
            target: y.clone(),
            minus,
            zero,
            boundary_rank: b0.cols(),
            boundary,
            representatives,
            coords,
        })
    }

    pub fn dim(&self) -> usize {
        self.representatives.len()
    }

    pub fn representatives(&self) -> &[ChainMap] {
        &self.representatives
    }

    /// Coordinates of the class of a chain map `X → Y`.
    pub fn class_of(&self, f: &ChainMap) -> Vec<Scalar> {
        let v = self.zero.vector(|n| f.component(n));
        let c = self
            .coords
            .coords(&v)
            .expect("chain maps are cycles of the Hom complex");
        c[self.boundary_rank..].to_vec()
    }

    /// A representative of the class with the given coordinates.
    pub fn element(&self, coords: &[Scalar]) -> ChainMap {
        let mut f = ChainMap::zero(&self.source, &self.target);
        for (c, r) in coords.iter().zip(&self.representatives) {
            if !c.is_zero() {
                f = f.add(&r.scale(c));
            }
        }
        f
    }

    /// A homotopy `s` with `f = d s + s d`, if `f` is null-homotopic.
    pub fn nullhomotopy(&self, f: &ChainMap) -> Option<Homotopy> {
        let v = self.zero.vector(|n| f.component(n));
        let sol = self.boundary.solve(&v).expect("consistent shapes")?;
        let components = self.minus.components(&sol.particular);
        Some(Homotopy {
            source: self.source.clone(),
            target: self.target.clone(),
            components,
        })
    }
}

/// A homotopy `s` with `f = d s + s d`, if one exists.
pub fn is_nullhomotopic(f: &ChainMap) -> Result<Option<Homotopy>> {
    let classes = HomotopyClasses::new(f.source(), f.target())?;
    Ok(classes.nullhomotopy(f))
}

/// A contraction `s` with `d s + s d = id`, if `X` is contractible.
///
/// Solves degree by degree from the top: `d s^n = id − s^{n+1} d^n` has a
/// solution for every earlier choice exactly when `X` is split exact, so
/// failure at any step means `X` is not contractible.
pub fn contraction(x: &BoundedComplex) -> Option<Homotopy> {
    let mut components = BTreeMap::new();
    let mut above = ModuleHom::zero(x.term(x.hi() + 1), x.term(x.hi()));
    for n in x.degrees().rev() {
        let goal = ModuleHom::identity(x.term(n)).sub(&above.compose(&x.diff(n)));
        let d = x.diff(n - 1);
        let s = if n == x.lo() {
            goal.is_zero().then(|| ModuleHom::zero(x.term(n), x.term(n - 1)))?
        } else {
            lift_through(&goal, &d)?
        };
        components.insert(n, s.clone());
        above = s;
    }
    let h = Homotopy {
        source: x.clone(),
        target: x.clone(),
        components,
    };
    debug_assert!(h.witnesses(&ChainMap::identity(x)));
    Some(h)
}

pub fn is_contractible(x: &BoundedComplex) -> bool {
    contraction(x).is_some()
}

/// Certificate that `f` is a homotopy equivalence: a contraction of its cone.
pub fn equivalence_certificate(f: &ChainMap) -> Option<Homotopy> {
    contraction(&f.cone().complex)
}

/// Homotopy equivalence `X → Y` found among class representatives and
/// random combinations of them, with the cone contraction certifying it.
pub fn find_homotopy_equivalence(
    x: &BoundedComplex,
    y: &BoundedComplex,
    rng: &mut impl Rng,
    attempts: usize,
) -> Result<Option<(ChainMap, Homotopy)>> {
    let dims = |c: &BoundedComplex| -> Vec<(i64, Vec<usize>)> {
        c.homology()
            .into_iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(n, m)| (n, m.dims().to_vec()))
            .collect()
    };
    if dims(x) != dims(y) {
        return Ok(None);
    }
    if x.is_zero() || y.is_zero() {
        let f = ChainMap::zero(x, y);
        return Ok(equivalence_certificate(&f).map(|h| (f, h)));
    }
    let classes = HomotopyClasses::new(x, y)?;
    if classes.dim() == 0 {
        // Both sides must then be contractible.
        let f = ChainMap::zero(x, y);
        return Ok(equivalence_certificate(&f).map(|h| (f, h)));
    }
    for f in classes.representatives() {
        if let Some(h) = equivalence_certificate(f) {
            return Ok(Some((f.clone(), h)));
        }
    }
    if classes.dim() < 2 {
        return Ok(None);
    }
    let field = x.algebra().field();
    for _ in 0..attempts {
        let coords: Vec<Scalar> = (0..classes.dim())
            .map(|_| field.from_i64(rng.gen_range(-3..=3)))
            .collect();
        let f = classes.element(&coords);
        if let Some(h) = equivalence_certificate(&f) {
            return Ok(Some((f, h)));
        }
    }
    Ok(None)
}
