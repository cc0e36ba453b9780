//! Bounded double complexes, totalization and the row-wise cone.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::algebra::BoundAlgebra;
use crate::complex::{BoundedComplex, ChainMap, Cone};
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::module::{DirectSum, HomSpace, Module, ModuleHom};

/// Terms `X^{i,j}` with row maps `r: X^{i,j} → X^{i+1,j}` and column maps
/// `c: X^{i,j} → X^{i,j+1}` that commute.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    algebra: Arc<BoundAlgebra>,
    terms: BTreeMap<(i64, i64), Module>,
    rows: BTreeMap<(i64, i64), ModuleHom>,
    cols: BTreeMap<(i64, i64), ModuleHom>,
    zero: Module,
}

impl DoubleComplex {
    /// Checks `r² = 0`, `c² = 0` and `rc = cr`.
    pub fn new(
        algebra: Arc<BoundAlgebra>,
        terms: BTreeMap<(i64, i64), Module>,
        rows: BTreeMap<(i64, i64), ModuleHom>,
        cols: BTreeMap<(i64, i64), ModuleHom>,
    ) -> Result<Self> {
        let d = Self::new_unchecked(algebra, terms, rows, cols);
        for &(i, j) in d.terms.keys() {
            let r = d.r(i, j);
            let c = d.c(i, j);
            if r.source() != d.term(i, j) || r.target() != d.term(i + 1, j) {
                return Err(Error::NotAComplex(format!("row map at ({i},{j}) has the wrong shape")));
            }
            if c.source() != d.term(i, j) || c.target() != d.term(i, j + 1) {
                return Err(Error::NotAComplex(format!("column map at ({i},{j}) has the wrong shape")));
            }
            if !r.is_homomorphism() || !c.is_homomorphism() {
                return Err(Error::NotAComplex(format!("map at ({i},{j}) is not a homomorphism")));
            }
            if !d.r(i + 1, j).compose(&r).is_zero() {
                return Err(Error::NotAComplex(format!("r∘r ≠ 0 at ({i},{j})")));
            }
            if !d.c(i, j + 1).compose(&c).is_zero() {
                return Err(Error::NotAComplex(format!("c∘c ≠ 0 at ({i},{j})")));
            }
            if d.c(i + 1, j).compose(&r).maps() != d.r(i, j + 1).compose(&c).maps() {
                return Err(Error::NotAComplex(format!("square at ({i},{j}) does not commute")));
            }
        }
        Ok(d)
    }

    fn new_unchecked(
        algebra: Arc<BoundAlgebra>,
        terms: BTreeMap<(i64, i64), Module>,
        rows: BTreeMap<(i64, i64), ModuleHom>,
        cols: BTreeMap<(i64, i64), ModuleHom>,
    ) -> Self {
        let terms: BTreeMap<_, _> = terms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let zero = Module::zero(algebra.clone());
        DoubleComplex {
            algebra,
            terms,
            rows,
            cols,
            zero,
        }
    }

    /// Columns `cols[k]` placed at `i = first + k`, joined by chain maps
    /// `rows[k]: cols[k] → cols[k + 1]` with vanishing consecutive composites.
    pub fn from_columns(first: i64, columns: &[BoundedComplex], rows: &[ChainMap]) -> Result<Self> {
        let algebra = columns
            .first()
            .map(|c| c.algebra().clone())
            .ok_or_else(|| Error::Precondition("a double complex needs a column".into()))?;
        let mut terms = BTreeMap::new();
        let mut rmaps = BTreeMap::new();
        let mut cmaps = BTreeMap::new();
        for (k, col) in columns.iter().enumerate() {
            let i = first + k as i64;
            for j in col.degrees() {
                terms.insert((i, j), col.term(j).clone());
                cmaps.insert((i, j), col.diff(j));
                if let Some(f) = rows.get(k) {
                    rmaps.insert((i, j), f.component(j));
                }
            }
        }
        Self::new(algebra, terms, rmaps, cmaps)
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.algebra
    }

    pub fn term(&self, i: i64, j: i64) -> &Module {
        self.terms.get(&(i, j)).unwrap_or(&self.zero)
    }

    pub fn positions(&self) -> impl Iterator<Item = &(i64, i64)> {
        self.terms.keys()
    }

    pub fn r(&self, i: i64, j: i64) -> ModuleHom {
        match self.rows.get(&(i, j)) {
            Some(h) if !self.term(i, j).is_zero() && !self.term(i + 1, j).is_zero() => {
                h.retarget(self.term(i, j), self.term(i + 1, j))
            }
            _ => ModuleHom::zero(self.term(i, j), self.term(i + 1, j)),
        }
    }

    pub fn c(&self, i: i64, j: i64) -> ModuleHom {
        match self.cols.get(&(i, j)) {
            Some(h) if !self.term(i, j).is_zero() && !self.term(i, j + 1).is_zero() => {
                h.retarget(self.term(i, j), self.term(i, j + 1))
            }
            _ => ModuleHom::zero(self.term(i, j), self.term(i, j + 1)),
        }
    }

    /// Row `j` as a complex in the `i` direction.
    pub fn row(&self, j: i64) -> BoundedComplex {
        let is: BTreeSet<i64> = self.terms.keys().filter(|(_, b)| *b == j).map(|(a, _)| *a).collect();
        let (Some(&lo), Some(&hi)) = (is.first(), is.last()) else {
            return BoundedComplex::zero(self.algebra.clone());
        };
        BoundedComplex::new_unchecked(
            self.algebra.clone(),
            lo,
            (lo..=hi).map(|i| self.term(i, j).clone()).collect(),
            (lo..hi).map(|i| self.r(i, j)).collect(),
        )
    }

    /// `Tot^n = ⊕_{i+j=n} X^{i,j}` ordered by increasing `i`, with
    /// `d = r + (−1)^i c`.
    pub fn tot(&self) -> Totalization {
        let mut layout: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
        for &(i, j) in self.terms.keys() {
            layout.entry(i + j).or_default().push((i, j));
        }
        let (lo, hi) = match (layout.keys().next(), layout.keys().next_back()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0, -1),
        };
        for n in lo..=hi {
            layout.entry(n).or_default();
        }
        let parts: BTreeMap<i64, DirectSum> = layout
            .iter()
            .map(|(&n, pos)| {
                let ms: Vec<Module> = pos.iter().map(|&(i, j)| self.term(i, j).clone()).collect();
                (n, Module::direct_sum(&self.algebra, &ms))
            })
            .collect();
        let diffs: Vec<ModuleHom> = (lo..hi)
            .map(|n| {
                let src = &layout[&n];
                let tgt = &layout[&(n + 1)];
                let owned: Vec<Vec<Option<ModuleHom>>> = tgt
                    .iter()
                    .map(|&(ti, tj)| {
                        src.iter()
                            .map(|&(si, sj)| {
                                if ti == si + 1 && tj == sj {
                                    Some(self.r(si, sj))
                                } else if ti == si && tj == sj + 1 {
                                    let c = self.c(si, sj);
                                    Some(if si.rem_euclid(2) == 1 { c.neg() } else { c })
                                } else {
                                    None
                                }
                            })
                            .collect()
                    })
                    .collect();
                let grid: Vec<Vec<Option<&ModuleHom>>> = owned
                    .iter()
                    .map(|row| row.iter().map(Option::as_ref).collect())
                    .collect();
                ModuleHom::from_blocks(&parts[&n], &parts[&(n + 1)], &grid)
            })
            .collect();
        let complex = BoundedComplex::new_unchecked(
            self.algebra.clone(),
            lo,
            (lo..=hi).map(|n| parts[&n].sum.clone()).collect(),
            diffs,
        );
        Totalization {
            complex,
            layout,
            parts,
        }
    }

    /// Row-wise cone of a map of double complexes:
    /// `Cone^row(f)^{i,j} = X^{i+1,j} ⊕ Y^{i,j}` with row map
    /// `[[−r_X, 0], [f, r_Y]]` and column map `c_X ⊕ c_Y`.
    pub fn cone_row(f: &DoubleMap) -> DoubleComplex {
        let x = &f.source;
        let y = &f.target;
        let alg = x.algebra.clone();
        let mut positions: BTreeSet<(i64, i64)> = BTreeSet::new();
        positions.extend(x.terms.keys().map(|&(i, j)| (i - 1, j)));
        positions.extend(y.terms.keys().copied());
        let sums: BTreeMap<(i64, i64), DirectSum> = positions
            .iter()
            .map(|&(i, j)| {
                (
                    (i, j),
                    Module::direct_sum(&alg, &[x.term(i + 1, j).clone(), y.term(i, j).clone()]),
                )
            })
            .collect();
        let zero_sum = Module::direct_sum(&alg, &[x.zero.clone(), y.zero.clone()]);
        let sum_at = |i: i64, j: i64| sums.get(&(i, j)).unwrap_or(&zero_sum);
        let mut terms = BTreeMap::new();
        let mut rows = BTreeMap::new();
        let mut cols = BTreeMap::new();
        for &(i, j) in &positions {
            terms.insert((i, j), sum_at(i, j).sum.clone());
            let rx = x.r(i + 1, j).neg();
            let fx = f.component(i + 1, j);
            let ry = y.r(i, j);
            rows.insert(
                (i, j),
                ModuleHom::from_blocks(
                    sum_at(i, j),
                    sum_at(i + 1, j),
                    &[vec![Some(&rx), None], vec![Some(&fx), Some(&ry)]],
                ),
            );
            let cx = x.c(i + 1, j);
            let cy = y.c(i, j);
            cols.insert(
                (i, j),
                ModuleHom::from_blocks(
                    sum_at(i, j),
                    sum_at(i, j + 1),
                    &[vec![Some(&cx), None], vec![None, Some(&cy)]],
                ),
            );
        }
        DoubleComplex::new_unchecked(alg, terms, rows, cols)
    }
}

/// `Tot` with its block layout: `layout[n]` lists the positions summed in
/// degree `n` and `parts[n]` is the corresponding module-level sum.
#[derive(Clone, Debug)]
pub struct Totalization {
    pub complex: BoundedComplex,
    pub layout: BTreeMap<i64, Vec<(i64, i64)>>,
    pub parts: BTreeMap<i64, DirectSum>,
}

impl Totalization {
    /// Index of position `(i, j)` among the summands of degree `i + j`.
    pub fn block(&self, i: i64, j: i64) -> Option<usize> {
        self.layout.get(&(i + j))?.iter().position(|&p| p == (i, j))
    }

    pub fn injection(&self, i: i64, j: i64) -> Option<ModuleHom> {
        let k = self.block(i, j)?;
        Some(self.parts[&(i + j)].injections[k].clone())
    }

    pub fn projection(&self, i: i64, j: i64) -> Option<ModuleHom> {
        let k = self.block(i, j)?;
        Some(self.parts[&(i + j)].projections[k].clone())
    }
}

/// A map of double complexes: components commuting with rows and columns.
#[derive(Clone, Debug)]
pub struct DoubleMap {
    pub source: DoubleComplex,
    pub target: DoubleComplex,
    components: BTreeMap<(i64, i64), ModuleHom>,
}

impl DoubleMap {
    pub fn new(
        source: &DoubleComplex,
        target: &DoubleComplex,
        components: BTreeMap<(i64, i64), ModuleHom>,
    ) -> Result<Self> {
        let f = DoubleMap {
            source: source.clone(),
            target: target.clone(),
            components,
        };
        let mut positions: BTreeSet<(i64, i64)> = source.terms.keys().copied().collect();
        positions.extend(target.terms.keys().copied());
        for (i, j) in positions {
            let fr = target.r(i, j).compose(&f.component(i, j));
            let rf = f.component(i + 1, j).compose(&source.r(i, j));
            let fc = target.c(i, j).compose(&f.component(i, j));
            let cf = f.component(i, j + 1).compose(&source.c(i, j));
            if fr.maps() != rf.maps() || fc.maps() != cf.maps() {
                return Err(Error::NotAChainMap(format!(
                    "map of double complexes does not commute at ({i},{j})"
                )));
            }
        }
        Ok(f)
    }

    pub fn component(&self, i: i64, j: i64) -> ModuleHom {
        let (s, t) = (self.source.term(i, j), self.target.term(i, j));
        match self.components.get(&(i, j)) {
            Some(h) if !s.is_zero() && !t.is_zero() => h.retarget(s, t),
            _ => ModuleHom::zero(s, t),
        }
    }

    /// The induced chain map `Tot f`, block-diagonal on the layouts.
    pub fn tot(&self, source: &Totalization, target: &Totalization) -> ChainMap {
        ChainMap::from_fn(&source.complex, &target.complex, |n| {
            let empty = Vec::new();
            let src = source.layout.get(&n).unwrap_or(&empty);
            let tgt = target.layout.get(&n).unwrap_or(&empty);
            if src.is_empty() || tgt.is_empty() {
                return ModuleHom::zero(source.complex.term(n), target.complex.term(n));
            }
            let owned: Vec<Vec<Option<ModuleHom>>> = tgt
                .iter()
                .map(|&p| {
                    src.iter()
                        .map(|&q| (p == q).then(|| self.component(p.0, p.1)))
                        .collect()
                })
                .collect();
            let grid: Vec<Vec<Option<&ModuleHom>>> = owned
                .iter()
                .map(|row| row.iter().map(Option::as_ref).collect())
                .collect();
            ModuleHom::from_blocks(&source.parts[&n], &target.parts[&n], &grid)
        })
    }
}

/// `Tot(Cone^row f)`, `Cone(Tot f)` and the block permutation between them,
/// sending the summands `X^{i+1,j}` and `Y^{i,j}` of position `(i, j)` to
/// their places in `Tot X^{n+1}` and `Tot Y^n`.
pub fn tot_cone_permutation(f: &DoubleMap) -> (Totalization, Cone, ChainMap) {
    let (x, y) = (&f.source, &f.target);
    let alg = x.algebra.clone();
    let tx = x.tot();
    let ty = y.tot();
    let cone = f.tot(&tx, &ty).cone();
    let row_cone = DoubleComplex::cone_row(f).tot();
    let perm = ChainMap::from_fn(&row_cone.complex, &cone.complex, |n| {
        let source = row_cone.complex.term(n);
        let target = cone.complex.term(n);
        let mut total = ModuleHom::zero(source, target);
        let k = n - cone.lo;
        if k < 0 || k as usize >= cone.parts.len() {
            return total;
        }
        let outer = &cone.parts[k as usize];
        for &(i, j) in row_cone.layout.get(&n).map(Vec::as_slice).unwrap_or(&[]) {
            let inner = Module::direct_sum(&alg, &[x.term(i + 1, j).clone(), y.term(i, j).clone()]);
            let proj = row_cone.projection(i, j).expect("listed position");
            let proj = proj.retarget(source, &inner.sum);
            if let Some(inj) = tx.injection(i + 1, j) {
                let piece = outer.injections[0]
                    .compose(&inj.retarget(x.term(i + 1, j), tx.complex.term(n + 1)))
                    .compose(&inner.projections[0])
                    .compose(&proj);
                total = total.add(&piece.retarget(source, target));
            }
            if let Some(inj) = ty.injection(i, j) {
                let piece = outer.injections[1]
                    .compose(&inj.retarget(y.term(i, j), ty.complex.term(n)))
                    .compose(&inner.projections[1])
                    .compose(&proj);
                total = total.add(&piece.retarget(source, target));
            }
        }
        total
    });
    (row_cone, cone, perm)
}

/// The double complex `HOM(X, Y)` of k-spaces: `Hom_Λ(X^i, Y^j)` at
/// position `(−i, j)`, with `r(h) = h ∘ d_X^{i−1}` and `c(h) = d_Y^j ∘ h`.
/// Each term is a vector space over the ground field, with the Hom-space
/// basis of the pair.
pub fn hom_double_complex(x: &BoundedComplex, y: &BoundedComplex) -> Result<(DoubleComplex, BTreeMap<(i64, i64), HomSpace>)> {
    let field = x.algebra().field();
    let ground = Arc::new(BoundAlgebra::ground(field));
    let mut spaces = BTreeMap::new();
    if !x.is_zero() && !y.is_zero() {
        for i in x.degrees() {
            for j in y.degrees() {
                spaces.insert((i, j), HomSpace::new(x.term(i), y.term(j))?);
            }
        }
    }
    let vs = |d: usize| Module::new_unchecked(ground.clone(), vec![d], vec![], None);
    let terms: BTreeMap<(i64, i64), Module> = spaces
        .iter()
        .map(|(&(i, j), s)| ((-i, j), vs(s.dim())))
        .collect();
    let matrix_of = |from: &HomSpace, to: Option<&HomSpace>, op: &dyn Fn(&ModuleHom) -> ModuleHom| {
        let rows = to.map_or(0, HomSpace::dim);
        let cols: Vec<Vec<Scalar>> = from
            .basis()
            .iter()
            .map(|h| to.map_or_else(Vec::new, |t| t.coords(&op(h))))
            .collect();
        Matrix::from_columns(field, rows, &cols)
    };
    let mut rows = BTreeMap::new();
    let mut cols = BTreeMap::new();
    for (&(i, j), s) in &spaces {
        let dx = x.diff(i - 1);
        let r = matrix_of(s, spaces.get(&(i - 1, j)), &|h| h.compose(&dx));
        let dy = y.diff(j);
        let c = matrix_of(s, spaces.get(&(i, j + 1)), &|h| dy.compose(h));
        let src = vs(s.dim());
        let rt = vs(spaces.get(&(i - 1, j)).map_or(0, HomSpace::dim));
        let ct = vs(spaces.get(&(i, j + 1)).map_or(0, HomSpace::dim));
        rows.insert((-i, j), ModuleHom::new_unchecked(src.clone(), rt, vec![r]));
        cols.insert((-i, j), ModuleHom::new_unchecked(src, ct, vec![c]));
    }
    Ok((DoubleComplex::new_unchecked(ground, terms, rows, cols), spaces))
}
