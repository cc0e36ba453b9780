//! Right modules as quiver representations, their homomorphisms and Hom spaces.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{BoundAlgebra, Path};
use crate::error::{Error, Result};
use crate::linalg::{Coordinates, Field, Matrix, Quotient, Scalar};

/// Records that a module is a direct sum of indecomposable projectives
/// `P(i)` or injectives `I(i)`, in the given vertex order. The basis at a
/// vertex `v` is the concatenation of the summand bases: paths `i → v` for
/// `P(i)`, duals of paths `v → i` for `I(i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposition {
    Projective(Vec<usize>),
    Injective(Vec<usize>),
}

#[derive(Debug)]
struct ModuleData {
    algebra: Arc<BoundAlgebra>,
    dims: Vec<usize>,
    arrows: Vec<Matrix>,
    decomposition: Option<Decomposition>,
}

/// A finite-dimensional right module. Arrow `a: i → j` acts by a
/// `dims[j] × dims[i]` matrix on column vectors.
///
/// Equality compares the algebra, dimensions and arrow matrices;
/// decomposition metadata is ignored.
#[derive(Clone)]
pub struct Module(Arc<ModuleData>);

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (same_algebra(&self.0.algebra, &other.0.algebra)
                && self.0.dims == other.0.dims
                && self.0.arrows == other.0.arrows)
    }
}

impl Eq for Module {}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.0.dims)?;
        if let Some(d) = &self.0.decomposition {
            write!(f, " {d:?}")?;
        }
        Ok(())
    }
}

pub(crate) fn same_algebra(a: &Arc<BoundAlgebra>, b: &Arc<BoundAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Module {
    /// Validates shapes, relations and nilpotency of long paths.
    pub fn new(algebra: Arc<BoundAlgebra>, dims: Vec<usize>, arrows: Vec<Matrix>) -> Result<Self> {
        let m = Module::new_unchecked(algebra, dims, arrows, None);
        m.validate()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(
        algebra: Arc<BoundAlgebra>,
        dims: Vec<usize>,
        arrows: Vec<Matrix>,
        decomposition: Option<Decomposition>,
    ) -> Self {
        Module(Arc::new(ModuleData {
            algebra,
            dims,
            arrows,
            decomposition,
        }))
    }

    fn validate(&self) -> Result<()> {
        let alg = self.algebra();
        let q = alg.quiver();
        if self.0.dims.len() != q.num_vertices() {
            return Err(Error::NotAModule(format!(
                "{} dimensions for {} vertices",
                self.0.dims.len(),
                q.num_vertices()
            )));
        }
        if self.0.arrows.len() != q.arrows().len() {
            return Err(Error::NotAModule(format!(
                "{} arrow matrices for {} arrows",
                self.0.arrows.len(),
                q.arrows().len()
            )));
        }
        for (a, arrow) in q.arrows().iter().enumerate() {
            let m = &self.0.arrows[a];
            if m.field() != alg.field() {
                return Err(Error::FieldMismatch(alg.field().tag(), m.field().tag()));
            }
            let expected = (self.0.dims[arrow.target], self.0.dims[arrow.source]);
            if m.shape() != expected {
                return Err(Error::NotAModule(format!(
                    "arrow {} has shape {:?}, expected {:?}",
                    arrow.name,
                    m.shape(),
                    expected
                )));
            }
        }
        for (r, rel) in alg.relations().iter().enumerate() {
            let (s, t) = {
                let w = &rel.terms[0].1;
                (q.arrows()[w[0]].source, q.arrows()[*w.last().unwrap()].target)
            };
            let mut acc = Matrix::zeros(alg.field(), self.0.dims[t], self.0.dims[s]);
            for (c, w) in &rel.terms {
                acc = acc.add(&self.arrow_path(w).scale(c));
            }
            if !acc.is_zero() {
                return Err(Error::NotAModule(format!("relation {r} does not act as zero")));
            }
        }
        for p in alg.paths_of_length(alg.max_path_length() + 1) {
            if !self.path_action(&p).is_zero() {
                return Err(Error::NotAModule(format!(
                    "a path of length {} acts nontrivially",
                    p.len()
                )));
            }
        }
        Ok(())
    }

    pub fn zero(algebra: Arc<BoundAlgebra>) -> Self {
        let n = algebra.num_vertices();
        let field = algebra.field();
        let arrows = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|_| Matrix::zeros(field, 0, 0))
            .collect();
        Module::new_unchecked(algebra, vec![0; n], arrows, None)
    }

    /// The simple module at vertex `v`.
    pub fn simple(algebra: Arc<BoundAlgebra>, v: usize) -> Self {
        let n = algebra.num_vertices();
        let field = algebra.field();
        let mut dims = vec![0; n];
        dims[v] = 1;
        let arrows = algebra
            .quiver()
            .arrows()
            .iter()
            .map(|a| Matrix::zeros(field, dims[a.target], dims[a.source]))
            .collect();
        Module::new_unchecked(algebra, dims, arrows, None)
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.0.algebra
    }

    pub fn field(&self) -> Field {
        self.0.algebra.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.0.dims
    }

    pub fn dim_at(&self, v: usize) -> usize {
        self.0.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.0.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow(&self, a: usize) -> &Matrix {
        &self.0.arrows[a]
    }

    pub fn arrows(&self) -> &[Matrix] {
        &self.0.arrows
    }

    pub fn decomposition(&self) -> Option<&Decomposition> {
        self.0.decomposition.as_ref()
    }

    pub fn with_decomposition(&self, d: Option<Decomposition>) -> Module {
        Module::new_unchecked(
            self.0.algebra.clone(),
            self.0.dims.clone(),
            self.0.arrows.clone(),
            d,
        )
    }

    pub(crate) fn same_algebra(&self, other: &Module) -> bool {
        same_algebra(&self.0.algebra, &other.0.algebra)
    }

    /// Action of a path: the product of its arrow matrices.
    pub fn path_action(&self, p: &Path) -> Matrix {
        if p.is_trivial() {
            Matrix::identity(self.field(), self.0.dims[p.source])
        } else {
            self.arrow_path(&p.arrows)
        }
    }

    fn arrow_path(&self, arrows: &[usize]) -> Matrix {
        let mut m = self.0.arrows[arrows[0]].clone();
        for &a in &arrows[1..] {
            m = self.0.arrows[a].mul(&m);
        }
        m
    }

    /// Action of an algebra element `x ∈ e_s Λ e_t`, as a map `M_s → M_t`.
    pub fn element_action(&self, x: &[Scalar], s: usize, t: usize) -> Matrix {
        let alg = self.algebra();
        let mut m = Matrix::zeros(self.field(), self.0.dims[t], self.0.dims[s]);
        for &b in alg.paths_between(s, t) {
            if !x[b].is_zero() {
                m = m.add(&self.path_action(&alg.basis()[b]).scale(&x[b]));
            }
        }
        m
    }

    /// Direct sum with the canonical injections and projections. The
    /// decomposition metadata concatenates when all summands carry the same kind.
    pub fn direct_sum(algebra: &Arc<BoundAlgebra>, summands: &[Module]) -> DirectSum {
        let field = algebra.field();
        let n = algebra.num_vertices();
        let dims: Vec<usize> = (0..n)
            .map(|v| summands.iter().map(|m| m.dim_at(v)).sum())
            .collect();
        let arrows = algebra
            .quiver()
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, arrow)| {
                let mut m = Matrix::zeros(field, dims[arrow.target], dims[arrow.source]);
                let (mut r0, mut c0) = (0, 0);
                for s in summands {
                    let block = s.arrow(a);
                    for i in 0..block.rows() {
                        for j in 0..block.cols() {
                            m.set(r0 + i, c0 + j, block.get(i, j).clone());
                        }
                    }
                    r0 += block.rows();
                    c0 += block.cols();
                }
                m
            })
            .collect();
        let decomposition = concat_decompositions(summands);
        let sum = Module::new_unchecked(algebra.clone(), dims.clone(), arrows, decomposition);
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        let mut offsets = vec![0usize; n];
        for s in summands {
            let inj: Vec<Matrix> = (0..n)
                .map(|v| {
                    Matrix::from_fn(field, dims[v], s.dim_at(v), |i, j| {
                        if i == offsets[v] + j {
                            field.one()
                        } else {
                            field.zero()
                        }
                    })
                })
                .collect();
            let proj = inj.iter().map(Matrix::transpose).collect();
            injections.push(ModuleHom::new_unchecked(s.clone(), sum.clone(), inj));
            projections.push(ModuleHom::new_unchecked(sum.clone(), s.clone(), proj));
            for v in 0..n {
                offsets[v] += s.dim_at(v);
            }
        }
        DirectSum {
            sum,
            injections,
            projections,
        }
    }
}

fn concat_decompositions(summands: &[Module]) -> Option<Decomposition> {
    let mut proj = Vec::new();
    let mut inj = Vec::new();
    let (mut any_p, mut any_i) = (false, false);
    for s in summands {
        if s.is_zero() {
            continue;
        }
        match s.decomposition() {
            Some(Decomposition::Projective(v)) => {
                any_p = true;
                proj.extend(v);
            }
            Some(Decomposition::Injective(v)) => {
                any_i = true;
                inj.extend(v);
            }
            None => return None,
        }
    }
    match (any_p, any_i) {
        (true, false) => Some(Decomposition::Projective(proj)),
        (false, true) => Some(Decomposition::Injective(inj)),
        (false, false) => Some(Decomposition::Projective(vec![])),
        (true, true) => None,
    }
}

#[derive(Clone, Debug)]
pub struct DirectSum {
    pub sum: Module,
    pub injections: Vec<ModuleHom>,
    pub projections: Vec<ModuleHom>,
}

/// A module homomorphism given by one matrix per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleHom {
    source: Module,
    target: Module,
    maps: Vec<Matrix>,
}

impl fmt::Debug for ModuleHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModuleHom")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("maps", &self.maps)
            .finish()
    }
}

impl ModuleHom {
    /// Checks shapes and that every arrow square commutes.
    pub fn new(source: Module, target: Module, maps: Vec<Matrix>) -> Result<Self> {
        if !source.same_algebra(&target) {
            return Err(Error::AlgebraMismatch);
        }
        let n = source.algebra().num_vertices();
        if maps.len() != n {
            return Err(Error::NotAHomomorphism(format!(
                "{} vertex maps for {n} vertices",
                maps.len()
            )));
        }
        for v in 0..n {
            if maps[v].shape() != (target.dim_at(v), source.dim_at(v)) {
                return Err(Error::NotAHomomorphism(format!(
                    "vertex map {v} has shape {:?}, expected {:?}",
                    maps[v].shape(),
                    (target.dim_at(v), source.dim_at(v))
                )));
            }
        }
        let f = ModuleHom::new_unchecked(source, target, maps);
        if let Some(a) = f.failing_arrow() {
            return Err(Error::NotAHomomorphism(format!(
                "square at arrow {} does not commute",
                f.source.algebra().quiver().arrows()[a].name
            )));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: Module, target: Module, maps: Vec<Matrix>) -> Self {
        debug_assert!(maps
            .iter()
            .enumerate()
            .all(|(v, m)| m.shape() == (target.dim_at(v), source.dim_at(v))));
        ModuleHom {
            source,
            target,
            maps,
        }
    }

    fn failing_arrow(&self) -> Option<usize> {
        let q = self.source.algebra().quiver();
        q.arrows().iter().enumerate().position(|(a, arrow)| {
            let lhs = self.target.arrow(a).mul(&self.maps[arrow.source]);
            let rhs = self.maps[arrow.target].mul(self.source.arrow(a));
            lhs != rhs
        })
    }

    pub fn is_homomorphism(&self) -> bool {
        self.failing_arrow().is_none()
    }

    pub fn zero(source: &Module, target: &Module) -> Self {
        let field = source.field();
        let maps = (0..source.dims().len())
            .map(|v| Matrix::zeros(field, target.dim_at(v), source.dim_at(v)))
            .collect();
        ModuleHom::new_unchecked(source.clone(), target.clone(), maps)
    }

    pub fn identity(m: &Module) -> Self {
        let field = m.field();
        let maps = m.dims().iter().map(|&d| Matrix::identity(field, d)).collect();
        ModuleHom::new_unchecked(m.clone(), m.clone(), maps)
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn map_at(&self, v: usize) -> &Matrix {
        &self.maps[v]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ModuleHom) -> ModuleHom {
        assert_eq!(other.target.dims(), self.source.dims(), "composing incompatible homs");
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.mul(b)).collect();
        ModuleHom::new_unchecked(other.source.clone(), self.target.clone(), maps)
    }

    pub fn add(&self, other: &ModuleHom) -> ModuleHom {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect();
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn sub(&self, other: &ModuleHom) -> ModuleHom {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.sub(b)).collect();
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn scale(&self, c: &Scalar) -> ModuleHom {
        let maps = self.maps.iter().map(|a| a.scale(c)).collect();
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn neg(&self) -> ModuleHom {
        let maps = self.maps.iter().map(Matrix::neg).collect();
        ModuleHom::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    /// Same matrices, reinterpreted between modules with equal structure.
    pub fn retarget(&self, source: &Module, target: &Module) -> ModuleHom {
        debug_assert_eq!(source.dims(), self.source.dims());
        debug_assert_eq!(target.dims(), self.target.dims());
        ModuleHom::new_unchecked(source.clone(), target.clone(), self.maps.clone())
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_isomorphism(&self) -> bool {
        self.maps
            .iter()
            .all(|m| m.rows() == m.cols() && m.rank() == m.rows())
    }

    /// Row-major entries of all vertex maps, concatenated.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.maps.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }

    /// Block matrix map `⊕ sources → ⊕ targets` from a grid of homs
    /// (`blocks[row][col]: source[col] → target[row]`, `None` for zero).
    pub fn from_blocks(
        source: &DirectSum,
        target: &DirectSum,
        blocks: &[Vec<Option<&ModuleHom>>],
    ) -> ModuleHom {
        let s = &source.sum;
        let t = &target.sum;
        let n = s.dims().len();
        let field = s.field();
        let maps = (0..n)
            .map(|v| {
                let rows: Vec<usize> = target.projections.iter().map(|p| p.target.dim_at(v)).collect();
                let cols: Vec<usize> = source.injections.iter().map(|i| i.source.dim_at(v)).collect();
                let grid: Vec<Vec<Option<&Matrix>>> = blocks
                    .iter()
                    .map(|row| row.iter().map(|b| b.map(|h| &h.maps[v])).collect())
                    .collect();
                Matrix::from_blocks(field, &rows, &cols, &grid)
            })
            .collect();
        ModuleHom::new_unchecked(s.clone(), t.clone(), maps)
    }

    /// `[f_1 | f_2 | …]: source → target` with the per-vertex matrices of the
    /// parts concatenated horizontally; `source` is the sum of the part sources.
    pub fn hstack(source: &Module, target: &Module, parts: &[ModuleHom]) -> ModuleHom {
        let field = source.field();
        let maps = (0..source.dims().len())
            .map(|v| {
                parts.iter().fold(Matrix::zeros(field, target.dim_at(v), 0), |acc, p| {
                    acc.hstack(&p.maps[v])
                })
            })
            .collect();
        ModuleHom::new_unchecked(source.clone(), target.clone(), maps)
    }

    /// Vertical concatenation: `target` is the sum of the part targets.
    pub fn vstack(source: &Module, target: &Module, parts: &[ModuleHom]) -> ModuleHom {
        let field = source.field();
        let maps = (0..source.dims().len())
            .map(|v| {
                parts.iter().fold(Matrix::zeros(field, 0, source.dim_at(v)), |acc, p| {
                    acc.vstack(&p.maps[v])
                })
            })
            .collect();
        ModuleHom::new_unchecked(source.clone(), target.clone(), maps)
    }

    /// Kernel as a submodule, with its inclusion. The basis at each vertex is
    /// the canonical kernel basis of the vertex map.
    pub fn kernel(&self) -> ModuleHom {
        let bases: Vec<Matrix> = self.maps.iter().map(Matrix::kernel_basis).collect();
        submodule_from_bases(&self.source, bases)
    }

    /// Image as a submodule of the target, with its inclusion.
    pub fn image(&self) -> ModuleHom {
        let bases: Vec<Matrix> = self.maps.iter().map(Matrix::column_space).collect();
        submodule_from_bases(&self.target, bases)
    }

    /// Cokernel with its projection, using the canonical complement of the image.
    pub fn cokernel(&self) -> ModuleHom {
        quotient_by(&self.target, &self.maps)
    }

    /// Restriction to submodules: `self` maps `i.target ⊇ i.source` into
    /// `j.target ⊇ j.source`; returns the induced `i.source → j.source`, or
    /// `None` when the image is not contained in `j`.
    pub fn restrict(&self, i: &ModuleHom, j: &ModuleHom) -> Option<ModuleHom> {
        let maps = (0..self.maps.len())
            .map(|v| j.maps[v].solve_matrix(&self.maps[v].mul(&i.maps[v])))
            .collect::<Option<Vec<_>>>()?;
        Some(ModuleHom::new_unchecked(i.source.clone(), j.source.clone(), maps))
    }

    /// Induced map on quotients: `p: self.source → P`, `q: self.target → Q`
    /// are projections; requires `self` to map `ker p` into `ker q`.
    pub fn descend(&self, p: &ModuleHom, q: &ModuleHom, p_section: &[Matrix]) -> ModuleHom {
        let maps = (0..self.maps.len())
            .map(|v| q.maps[v].mul(&self.maps[v]).mul(&p_section[v]))
            .collect();
        ModuleHom::new_unchecked(p.target.clone(), q.target.clone(), maps)
    }
}

/// Submodule spanned per vertex by the (independent) columns of `bases`,
/// returned as its inclusion. Closure under the arrows is asserted.
pub fn submodule_from_bases(m: &Module, bases: Vec<Matrix>) -> ModuleHom {
    let alg = m.algebra().clone();
    let coords: Vec<Coordinates> = bases
        .iter()
        .map(|b| Coordinates::new(b.clone()).expect("independent submodule basis"))
        .collect();
    let arrows = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            let moved = m.arrow(a).mul(&bases[arrow.source]);
            let c = &coords[arrow.target];
            let cols: Vec<Vec<Scalar>> = (0..moved.cols())
                .map(|j| {
                    c.coords(&moved.column(j))
                        .expect("submodule is closed under the arrows")
                })
                .collect();
            Matrix::from_columns(alg.field(), bases[arrow.target].cols(), &cols)
        })
        .collect();
    let dims = bases.iter().map(Matrix::cols).collect();
    let sub = Module::new_unchecked(alg, dims, arrows, None);
    ModuleHom::new_unchecked(sub, m.clone(), bases)
}

/// Quotient of `m` by the submodule spanned per vertex by the columns of
/// `spans`, returned as the projection.
pub fn quotient_by(m: &Module, spans: &[Matrix]) -> ModuleHom {
    quotient_with_section(m, spans).0
}

/// As [`quotient_by`], also returning the canonical section at each vertex.
pub fn quotient_with_section(m: &Module, spans: &[Matrix]) -> (ModuleHom, Vec<Matrix>) {
    let alg = m.algebra().clone();
    let quotients: Vec<Quotient> = spans.iter().map(Quotient::new).collect();
    let arrows = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(a, arrow)| {
            quotients[arrow.target]
                .projection
                .mul(m.arrow(a))
                .mul(&quotients[arrow.source].section)
        })
        .collect();
    let dims = quotients.iter().map(|q| q.projection.rows()).collect();
    let quot = Module::new_unchecked(alg, dims, arrows, None);
    let proj = ModuleHom::new_unchecked(
        m.clone(),
        quot,
        quotients.iter().map(|q| q.projection.clone()).collect(),
    );
    debug_assert!(proj.is_homomorphism());
    (proj, quotients.into_iter().map(|q| q.section).collect())
}

/// A basis of `Hom_Λ(M, N)`: the canonical kernel basis of the commuting
/// square equations, with unknowns the row-major entries of all vertex maps.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    basis: Vec<ModuleHom>,
    free: Vec<usize>,
}

impl HomSpace {
    pub fn new(source: &Module, target: &Module) -> Result<Self> {
        if !source.same_algebra(target) {
            return Err(Error::AlgebraMismatch);
        }
        let alg = source.algebra();
        let field = alg.field();
        let n = alg.num_vertices();
        let mut offsets = Vec::with_capacity(n);
        let mut total = 0;
        for v in 0..n {
            offsets.push(total);
            total += source.dim_at(v) * target.dim_at(v);
        }
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for (a, arrow) in alg.quiver().arrows().iter().enumerate() {
            let (s, t) = (arrow.source, arrow.target);
            let ma = source.arrow(a);
            let na = target.arrow(a);
            // (N_a f_s - f_t M_a)[r][c] = 0
            for r in 0..target.dim_at(t) {
                for c in 0..source.dim_at(s) {
                    let mut row = vec![field.zero(); total];
                    for k in 0..target.dim_at(s) {
                        let x = na.get(r, k);
                        if !x.is_zero() {
                            row[offsets[s] + k * source.dim_at(s) + c] += x;
                        }
                    }
                    for k in 0..source.dim_at(t) {
                        let x = ma.get(k, c);
                        if !x.is_zero() {
                            row[offsets[t] + r * source.dim_at(t) + k] -= x;
                        }
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let system = Matrix::from_rows(field, rows, total)?;
        let ech = system.rref();
        let free: Vec<usize> = (0..total).filter(|c| !ech.pivots.contains(c)).collect();
        let kernel = system.kernel_basis();
        let basis = (0..kernel.cols())
            .map(|j| {
                let col = kernel.column(j);
                let maps = (0..n)
                    .map(|v| {
                        let (r, c) = (target.dim_at(v), source.dim_at(v));
                        Matrix::from_fn(field, r, c, |i, k| col[offsets[v] + i * c + k].clone())
                    })
                    .collect();
                ModuleHom::new_unchecked(source.clone(), target.clone(), maps)
            })
            .collect();
        Ok(HomSpace {
            source: source.clone(),
            target: target.clone(),
            basis,
            free,
        })
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ModuleHom] {
        &self.basis
    }

    /// Coordinates of a homomorphism: its entries at the free variables.
    pub fn coords(&self, f: &ModuleHom) -> Vec<Scalar> {
        let flat = f.flatten();
        self.free.iter().map(|&i| flat[i].clone()).collect()
    }

    pub fn element(&self, coords: &[Scalar]) -> ModuleHom {
        let mut f = ModuleHom::zero(&self.source, &self.target);
        for (c, b) in coords.iter().zip(&self.basis) {
            if !c.is_zero() {
                f = f.add(&b.scale(c));
            }
        }
        f
    }
}

/// Solves `op(h) = goal` for `h ∈ space`, where `op` is linear.
pub fn solve_in_hom_space(
    space: &HomSpace,
    op: impl Fn(&ModuleHom) -> ModuleHom,
    goal: &ModuleHom,
) -> Option<ModuleHom> {
    let field = space.source.field();
    let rhs = goal.flatten();
    let columns: Vec<Vec<Scalar>> = space.basis.iter().map(|b| op(b).flatten()).collect();
    let a = Matrix::from_columns(field, rhs.len(), &columns);
    let sol = a.solve(&rhs).expect("consistent shapes")?;
    Some(space.element(&sol.particular))
}

/// Some `h: source(g) → source(p)` with `p ∘ h = g`, if one exists.
pub fn lift_through(g: &ModuleHom, p: &ModuleHom) -> Option<ModuleHom> {
    let space = HomSpace::new(g.source(), p.source()).ok()?;
    solve_in_hom_space(&space, |h| p.compose(h), g)
}

/// Some `h: target(i) → target(g)` with `h ∘ i = g`, if one exists.
pub fn extend_through(g: &ModuleHom, i: &ModuleHom) -> Option<ModuleHom> {
    let space = HomSpace::new(i.target(), g.target()).ok()?;
    solve_in_hom_space(&space, |h| h.compose(i), g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Quiver, Relation};

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
    fn rejects_relation_violation() {
        let alg = dual_numbers();
        let f = alg.field();
        let jordan = Matrix::from_i64(f, &[&[1, 0], &[0, 1]]);
        assert!(matches!(
            Module::new(alg, vec![2], vec![jordan]),
            Err(Error::NotAModule(_))
        ));
    }

    #[test]
    fn simple_homs_vanish() {
        let alg = a2();
        let s1 = Module::simple(alg.clone(), 0);
        let s2 = Module::simple(alg, 1);
        assert_eq!(HomSpace::new(&s1, &s2).unwrap().dim(), 0);
        assert_eq!(HomSpace::new(&s1, &s1).unwrap().dim(), 1);
    }

    #[test]
    fn hom_space_contains_identity() {
        let alg = dual_numbers();
        let f = alg.field();
        let m = Module::new(alg, vec![2], vec![Matrix::from_i64(f, &[&[0, 0], &[1, 0]])]).unwrap();
        let space = HomSpace::new(&m, &m).unwrap();
        // End of the regular module over k[x]/(x²) is 2-dimensional
        assert_eq!(space.dim(), 2);
        let id = ModuleHom::identity(&m);
        assert_eq!(space.element(&space.coords(&id)), id);
    }

    #[test]
    fn kernel_and_cokernel_ranks() {
        let alg = dual_numbers();
        let f = alg.field();
        let m = Module::new(alg, vec![2], vec![Matrix::from_i64(f, &[&[0, 0], &[1, 0]])]).unwrap();
        let x = ModuleHom::new(m.clone(), m.clone(), vec![m.arrow(0).clone()]).unwrap();
        assert_eq!(x.kernel().source().dims(), &[1]);
        assert_eq!(x.cokernel().target().dims(), &[1]);
        assert_eq!(x.image().source().dims(), &[1]);
    }

    #[test]
    fn lifting_through_epimorphism() {
        let alg = dual_numbers();
        let f = alg.field();
        let m = Module::new(alg.clone(), vec![2], vec![Matrix::from_i64(f, &[&[0, 0], &[1, 0]])]).unwrap();
        let s = Module::simple(alg, 0);
        let eps = ModuleHom::new(m.clone(), s.clone(), vec![Matrix::from_i64(f, &[&[1, 0]])]).unwrap();
        let h = lift_through(&eps, &eps).unwrap();
        assert_eq!(eps.compose(&h), eps);
        // the socle inclusion S → Λ does not lift through ε
        let soc = ModuleHom::new(s.clone(), m.clone(), vec![Matrix::from_i64(f, &[&[0], &[1]])]).unwrap();
        assert!(lift_through(&ModuleHom::identity(&s), &eps.compose(&soc)).is_none());
    }
}
