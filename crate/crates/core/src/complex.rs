//! Bounded cochain complexes of modules and chain maps.
//!
//! Sign conventions, fixed once:
//! - shift: `X[n]^i = X^{n+i}` with differential `(−1)^n d_X`;
//! - cone: `cone(f)^n = X^{n+1} ⊕ Y^n` with `d = [[−d_X, 0], [f, d_Y]]`;
//! - cocone: `coCone(f) = cone(f)[−1]`;
//! - Hom complex: `∂f = d_Y ∘ f − (−1)^n f ∘ d_X` in degree `n`;
//! - totalization: `d = r + (−1)^i c` on the term `(i, j)`.

use std::fmt;
use std::sync::Arc;

use crate::algebra::BoundAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Scalar};
use crate::module::{quotient_with_section, same_algebra, DirectSum, Module, ModuleHom};

/// A bounded complex, stored over the window `lo ..= lo + terms.len() − 1`
/// with leading and trailing zero terms trimmed. `diffs[k]` maps
/// `terms[k] → terms[k + 1]`.
#[derive(Clone)]
pub struct BoundedComplex {
    algebra: Arc<BoundAlgebra>,
    lo: i64,
    terms: Vec<Module>,
    diffs: Vec<ModuleHom>,
    zero: Module,
}

impl PartialEq for BoundedComplex {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.algebra, &other.algebra)
            && self.lo == other.lo
            && self.terms == other.terms
            && self.diffs.iter().zip(&other.diffs).all(|(a, b)| a.maps() == b.maps())
    }
}

impl Eq for BoundedComplex {}

impl fmt::Debug for BoundedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Complex[")?;
        for (k, t) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " → ")?;
            }
            write!(f, "{}:{:?}", self.lo + k as i64, t.dims())?;
        }
        write!(f, "]")
    }
}

impl BoundedComplex {
    /// Checks the differentials (homomorphisms with matching ends) and `d² = 0`.
    pub fn new(
        algebra: Arc<BoundAlgebra>,
        lo: i64,
        terms: Vec<Module>,
        diffs: Vec<ModuleHom>,
    ) -> Result<Self> {
        if diffs.len() + 1 != terms.len() && !(terms.is_empty() && diffs.is_empty()) {
            return Err(Error::NotAComplex(format!(
                "{} terms need {} differentials, got {}",
                terms.len(),
                terms.len().saturating_sub(1),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            if d.source() != &terms[k] || d.target() != &terms[k + 1] {
                return Err(Error::NotAComplex(format!(
                    "differential in degree {} has the wrong source or target",
                    lo + k as i64
                )));
            }
            if !d.is_homomorphism() {
                return Err(Error::NotAComplex(format!(
                    "differential in degree {} is not a homomorphism",
                    lo + k as i64
                )));
            }
        }
        for (k, pair) in diffs.windows(2).enumerate() {
            if !pair[1].compose(&pair[0]).is_zero() {
                return Err(Error::NotAComplex(format!(
                    "d∘d ≠ 0 starting in degree {}",
                    lo + k as i64
                )));
            }
        }
        Ok(Self::new_unchecked(algebra, lo, terms, diffs))
    }

    pub(crate) fn new_unchecked(
        algebra: Arc<BoundAlgebra>,
        mut lo: i64,
        mut terms: Vec<Module>,
        mut diffs: Vec<ModuleHom>,
    ) -> Self {
        while terms.first().is_some_and(Module::is_zero) {
            terms.remove(0);
            if !diffs.is_empty() {
                diffs.remove(0);
            }
            lo += 1;
        }
        while terms.last().is_some_and(Module::is_zero) {
            terms.pop();
            diffs.pop();
        }
        if terms.is_empty() {
            lo = 0;
        }
        let zero = Module::zero(algebra.clone());
        BoundedComplex {
            algebra,
            lo,
            terms,
            diffs,
            zero,
        }
    }

    pub fn zero(algebra: Arc<BoundAlgebra>) -> Self {
        Self::new_unchecked(algebra, 0, vec![], vec![])
    }

    /// The module `m` concentrated in degree `n`.
    pub fn stalk(m: &Module, n: i64) -> Self {
        Self::new_unchecked(m.algebra().clone(), n, vec![m.clone()], vec![])
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest nonzero degree (0 for the zero complex).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest nonzero degree (`lo − 1` for the zero complex).
    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn term(&self, n: i64) -> &Module {
        if n < self.lo || n > self.hi() {
            &self.zero
        } else {
            &self.terms[(n - self.lo) as usize]
        }
    }

    /// `d^n: X^n → X^{n+1}`.
    pub fn diff(&self, n: i64) -> ModuleHom {
        if n >= self.lo && n < self.hi() {
            self.diffs[(n - self.lo) as usize].clone()
        } else {
            ModuleHom::zero(self.term(n), self.term(n + 1))
        }
    }

    pub fn total_dim(&self) -> usize {
        self.terms.iter().map(Module::total_dim).sum()
    }

    pub fn shift(&self, n: i64) -> Self {
        let odd = n.rem_euclid(2) == 1;
        let diffs = self
            .diffs
            .iter()
            .map(|d| if odd { d.neg() } else { d.clone() })
            .collect();
        Self::new_unchecked(self.algebra.clone(), self.lo - n, self.terms.clone(), diffs)
    }

    /// Degreewise direct sum with the canonical injections and projections.
    pub fn direct_sum(algebra: &Arc<BoundAlgebra>, summands: &[BoundedComplex]) -> ComplexSum {
        let lo = summands.iter().filter(|c| !c.is_zero()).map(|c| c.lo).min().unwrap_or(0);
        let hi = summands.iter().filter(|c| !c.is_zero()).map(|c| c.hi()).max().unwrap_or(-1);
        let sums: Vec<DirectSum> = (lo..=hi)
            .map(|n| {
                let parts: Vec<Module> = summands.iter().map(|c| c.term(n).clone()).collect();
                Module::direct_sum(algebra, &parts)
            })
            .collect();
        let diffs: Vec<ModuleHom> = (lo..hi)
            .map(|n| {
                let k = (n - lo) as usize;
                let ds: Vec<ModuleHom> = summands.iter().map(|c| c.diff(n)).collect();
                let grid: Vec<Vec<Option<&ModuleHom>>> = (0..summands.len())
                    .map(|r| (0..summands.len()).map(|c| (r == c).then_some(&ds[r])).collect())
                    .collect();
                ModuleHom::from_blocks(&sums[k], &sums[k + 1], &grid)
            })
            .collect();
        let terms: Vec<Module> = sums.iter().map(|s| s.sum.clone()).collect();
        let sum = Self::new_unchecked(algebra.clone(), lo, terms, diffs);
        let injections = (0..summands.len())
            .map(|s| {
                let comps = (lo..=hi)
                    .map(|n| sums[(n - lo) as usize].injections[s].clone())
                    .collect();
                ChainMap::from_window(&summands[s], &sum, lo, comps)
            })
            .collect();
        let projections = (0..summands.len())
            .map(|s| {
                let comps = (lo..=hi)
                    .map(|n| sums[(n - lo) as usize].projections[s].clone())
                    .collect();
                ChainMap::from_window(&sum, &summands[s], lo, comps)
            })
            .collect();
        ComplexSum {
            sum,
            injections,
            projections,
            parts: sums,
            lo,
        }
    }

    /// Cohomology `H^n = ker d^n / im d^{n−1}` in every degree of the window.
    pub fn homology(&self) -> Vec<(i64, Module)> {
        self.degrees()
            .map(|n| {
                let k = self.diff(n).kernel();
                let incoming = self.diff(n - 1);
                let spans: Vec<Matrix> = (0..self.algebra.num_vertices())
                    .map(|v| {
                        k.map_at(v)
                            .solve_matrix(incoming.map_at(v))
                            .expect("d² = 0 puts the image inside the kernel")
                    })
                    .collect();
                let (q, _) = quotient_with_section(k.source(), &spans);
                (n, q.target().clone())
            })
            .collect()
    }

    /// Whether every cohomology module vanishes (ranks only).
    pub fn is_acyclic(&self) -> bool {
        self.degrees().all(|n| {
            (0..self.algebra.num_vertices()).all(|v| {
                let out = self.diff(n).map_at(v).rank();
                let inc = self.diff(n - 1).map_at(v).rank();
                self.term(n).dim_at(v) == out + inc
            })
        })
    }
}

/// Degreewise direct sum of complexes. `parts[n − lo]` is the module-level
/// sum in degree `n`.
#[derive(Clone, Debug)]
pub struct ComplexSum {
    pub sum: BoundedComplex,
    pub injections: Vec<ChainMap>,
    pub projections: Vec<ChainMap>,
    pub parts: Vec<DirectSum>,
    pub lo: i64,
}

/// A chain map, stored as components over a degree window; components
/// outside the window are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: BoundedComplex,
    target: BoundedComplex,
    lo: i64,
    components: Vec<ModuleHom>,
}

impl fmt::Debug for ChainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChainMap")
            .field("source", &self.source)
            .field("target", &self.target)
            .field("lo", &self.lo)
            .finish()
    }
}

fn window(a: &BoundedComplex, b: &BoundedComplex) -> (i64, i64) {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo, b.hi()),
        (false, true) => (a.lo, a.hi()),
        (false, false) => (a.lo.min(b.lo), a.hi().max(b.hi())),
    }
}

impl ChainMap {
    /// Checks that the components are homomorphisms between the right terms
    /// and commute with the differentials.
    pub fn new(
        source: &BoundedComplex,
        target: &BoundedComplex,
        components: impl Fn(i64) -> ModuleHom,
    ) -> Result<Self> {
        let (lo, hi) = window(source, target);
        let comps: Vec<ModuleHom> = (lo..=hi).map(components).collect();
        for (k, f) in comps.iter().enumerate() {
            let n = lo + k as i64;
            if f.source() != source.term(n) || f.target() != target.term(n) {
                return Err(Error::NotAChainMap(format!("component {n} has the wrong shape")));
            }
            if !f.is_homomorphism() {
                return Err(Error::NotAChainMap(format!("component {n} is not a homomorphism")));
            }
        }
        let map = Self::from_window(source, target, lo, comps);
        if let Some(n) = map.failing_degree() {
            return Err(Error::NotAChainMap(format!(
                "does not commute with the differentials in degree {n}"
            )));
        }
        Ok(map)
    }

    pub(crate) fn from_window(
        source: &BoundedComplex,
        target: &BoundedComplex,
        lo: i64,
        components: Vec<ModuleHom>,
    ) -> Self {
        let (wlo, whi) = window(source, target);
        let comps = (wlo..=whi)
            .map(|n| {
                let k = n - lo;
                if k >= 0 && (k as usize) < components.len() {
                    components[k as usize].retarget(source.term(n), target.term(n))
                } else {
                    ModuleHom::zero(source.term(n), target.term(n))
                }
            })
            .collect();
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            lo: wlo,
            components: comps,
        }
    }

    /// Builds a chain map from a component function without validation.
    pub(crate) fn from_fn(
        source: &BoundedComplex,
        target: &BoundedComplex,
        f: impl Fn(i64) -> ModuleHom,
    ) -> Self {
        let (lo, hi) = window(source, target);
        let comps = (lo..=hi).map(f).collect();
        Self::from_window(source, target, lo, comps)
    }

    fn failing_degree(&self) -> Option<i64> {
        let lo = self.lo - 1;
        let hi = self.lo + self.components.len() as i64;
        (lo..=hi).find(|&n| {
            let lhs = self.target.diff(n).compose(&self.component(n));
            let rhs = self.component(n + 1).compose(&self.source.diff(n));
            lhs.maps() != rhs.maps()
        })
    }

    pub fn is_chain_map(&self) -> bool {
        self.failing_degree().is_none()
    }

    pub fn source(&self) -> &BoundedComplex {
        &self.source
    }

    pub fn target(&self) -> &BoundedComplex {
        &self.target
    }

    pub fn component(&self, n: i64) -> ModuleHom {
        let k = n - self.lo;
        if k >= 0 && (k as usize) < self.components.len() {
            self.components[k as usize].clone()
        } else {
            ModuleHom::zero(self.source.term(n), self.target.term(n))
        }
    }

    pub fn identity(x: &BoundedComplex) -> Self {
        Self::from_fn(x, x, |n| ModuleHom::identity(x.term(n)))
    }

    pub fn zero(x: &BoundedComplex, y: &BoundedComplex) -> Self {
        Self::from_fn(x, y, |n| ModuleHom::zero(x.term(n), y.term(n)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> ChainMap {
        Self::from_fn(&other.source, &self.target, |n| {
            self.component(n).compose(&other.component(n))
        })
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        Self::from_fn(&self.source, &self.target, |n| {
            self.component(n).add(&other.component(n))
        })
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        Self::from_fn(&self.source, &self.target, |n| {
            self.component(n).sub(&other.component(n))
        })
    }

    pub fn scale(&self, c: &Scalar) -> ChainMap {
        Self::from_fn(&self.source, &self.target, |n| self.component(n).scale(c))
    }

    pub fn neg(&self) -> ChainMap {
        Self::from_fn(&self.source, &self.target, |n| self.component(n).neg())
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ModuleHom::is_zero)
    }

    /// `f[n]^i = f^{n+i}`.
    pub fn shift(&self, n: i64) -> ChainMap {
        let s = self.source.shift(n);
        let t = self.target.shift(n);
        Self::from_fn(&s, &t, |i| self.component(n + i))
    }

    /// Same components between structurally equal complexes.
    pub fn retarget(&self, source: &BoundedComplex, target: &BoundedComplex) -> ChainMap {
        Self::from_fn(source, target, |n| self.component(n))
    }

    pub fn is_degreewise_injective(&self) -> bool {
        self.components.iter().all(ModuleHom::is_injective)
    }

    pub fn is_degreewise_surjective(&self) -> bool {
        self.components.iter().all(ModuleHom::is_surjective)
    }

    /// Mapping cone with its structural maps `Y → cone(f) → X[1]`.
    pub fn cone(&self) -> Cone {
        let x = &self.source;
        let y = &self.target;
        let alg = x.algebra.clone();
        let (lo, hi) = window(&x.shift(1), y);
        let sums: Vec<DirectSum> = (lo..=hi)
            .map(|n| Module::direct_sum(&alg, &[x.term(n + 1).clone(), y.term(n).clone()]))
            .collect();
        let diffs: Vec<ModuleHom> = (lo..hi)
            .map(|n| {
                let k = (n - lo) as usize;
                let dx = x.diff(n + 1).neg();
                let f = self.component(n + 1);
                let dy = y.diff(n);
                ModuleHom::from_blocks(
                    &sums[k],
                    &sums[k + 1],
                    &[vec![Some(&dx), None], vec![Some(&f), Some(&dy)]],
                )
            })
            .collect();
        let complex = BoundedComplex::new_unchecked(
            alg,
            lo,
            sums.iter().map(|s| s.sum.clone()).collect(),
            diffs,
        );
        let x1 = x.shift(1);
        let part = |n: i64| -> Option<&DirectSum> {
            (n >= lo && n <= hi).then(|| &sums[(n - lo) as usize])
        };
        let inclusion = ChainMap::from_fn(y, &complex, |n| match part(n) {
            Some(s) => s.injections[1].clone(),
            None => ModuleHom::zero(y.term(n), complex.term(n)),
        });
        let projection = ChainMap::from_fn(&complex, &x1, |n| match part(n) {
            Some(s) => s.projections[0].clone(),
            None => ModuleHom::zero(complex.term(n), x1.term(n)),
        });
        Cone {
            complex,
            inclusion,
            projection,
            lo,
            parts: sums,
        }
    }

    /// `coCone(f) = cone(f)[−1]`.
    pub fn cocone(&self) -> BoundedComplex {
        self.cone().complex.shift(-1)
    }

    /// Degreewise kernel complex with its inclusion into the source.
    pub fn kernel_complex(&self) -> ChainMap {
        let x = &self.source;
        let incs: Vec<(i64, ModuleHom)> = x.degrees().map(|n| (n, self.component(n).kernel())).collect();
        let inc_at = |n: i64| incs.iter().find(|(m, _)| *m == n).map(|(_, i)| i.clone());
        let terms: Vec<Module> = incs.iter().map(|(_, i)| i.source().clone()).collect();
        let diffs: Vec<ModuleHom> = x
            .degrees()
            .take(incs.len().saturating_sub(1))
            .map(|n| {
                x.diff(n)
                    .restrict(&inc_at(n).unwrap(), &inc_at(n + 1).unwrap())
                    .expect("differential preserves kernels of a chain map")
            })
            .collect();
        let k = BoundedComplex::new_unchecked(x.algebra.clone(), x.lo, terms, diffs);
        ChainMap::from_fn(&k, x, |n| match inc_at(n) {
            Some(i) => i,
            None => ModuleHom::zero(k.term(n), x.term(n)),
        })
    }

    /// Degreewise cokernel complex with its projection from the target.
    pub fn cokernel_complex(&self) -> ChainMap {
        let y = &self.target;
        let parts: Vec<(i64, ModuleHom, Vec<Matrix>)> = y
            .degrees()
            .map(|n| {
                let (p, s) = quotient_with_section(y.term(n), self.component(n).maps());
                (n, p, s)
            })
            .collect();
        let at = |n: i64| parts.iter().find(|(m, _, _)| *m == n);
        let terms: Vec<Module> = parts.iter().map(|(_, p, _)| p.target().clone()).collect();
        let diffs: Vec<ModuleHom> = y
            .degrees()
            .take(parts.len().saturating_sub(1))
            .map(|n| {
                let (_, p, s) = at(n).unwrap();
                let (_, q, _) = at(n + 1).unwrap();
                y.diff(n).descend(p, q, s)
            })
            .collect();
        let c = BoundedComplex::new_unchecked(y.algebra.clone(), y.lo, terms, diffs);
        ChainMap::from_fn(y, &c, |n| match at(n) {
            Some((_, p, _)) => p.clone(),
            None => ModuleHom::zero(y.term(n), c.term(n)),
        })
    }

    /// Induced map between subcomplexes `i: A ↪ source`, `j: B ↪ target`.
    pub fn restrict(&self, i: &ChainMap, j: &ChainMap) -> Option<ChainMap> {
        let a = &i.source;
        let b = &j.source;
        let (lo, hi) = window(a, b);
        let comps = (lo..=hi)
            .map(|n| self.component(n).restrict(&i.component(n), &j.component(n)))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::from_window(a, b, lo, comps))
    }
}

/// `cone(f)` with `Y → cone(f)` and `cone(f) → X[1]`; `parts[n − lo]` is
/// the module-level sum `X^{n+1} ⊕ Y^n`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: BoundedComplex,
    pub inclusion: ChainMap,
    pub projection: ChainMap,
    pub lo: i64,
    pub parts: Vec<DirectSum>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Quiver, Relation};
    use crate::linalg::Field;
    use crate::rep::{projective, projective_presentation};

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

    fn x_complex() -> BoundedComplex {
        let alg = dual_numbers();
        let p = projective_presentation(&Module::simple(alg.clone(), 0)).p;
        BoundedComplex::new(alg, -1, vec![p.source().clone(), p.target().clone()], vec![p]).unwrap()
    }

    #[test]
    fn rejects_nonzero_square() {
        let alg = dual_numbers();
        let p = projective(&alg, 0);
        let id = ModuleHom::identity(&p);
        let err = BoundedComplex::new(alg, 0, vec![p.clone(), p.clone(), p], vec![id.clone(), id]);
        assert!(matches!(err, Err(Error::NotAComplex(_))));
    }

    #[test]
    fn shifts() {
        let x = x_complex();
        assert_eq!(x.shift(0), x);
        assert_eq!(x.shift(1).shift(-1), x);
        let s = BoundedComplex::stalk(x.term(0), 0).shift(1);
        assert_eq!(s.lo(), -1);
        assert_eq!(s.hi(), -1);
    }

    #[test]
    fn homology_of_multiplication_by_x() {
        let x = x_complex();
        let h: Vec<(i64, Vec<usize>)> = x.homology().into_iter().map(|(n, m)| (n, m.dims().to_vec())).collect();
        assert_eq!(h, vec![(-1, vec![1]), (0, vec![1])]);
    }

    #[test]
    fn cone_of_zero_is_direct_sum() {
        let x = x_complex();
        let c = ChainMap::zero(&x, &x).cone().complex;
        let sum = BoundedComplex::direct_sum(x.algebra(), &[x.shift(1), x.clone()]).sum;
        assert_eq!(c, sum);
    }

    #[test]
    fn cone_of_inclusion_over_a2() {
        let alg = a2();
        let p = projective_presentation(&Module::simple(alg.clone(), 0)).p;
        let x = BoundedComplex::stalk(p.source(), 0);
        let y = BoundedComplex::stalk(p.target(), 0);
        let f = ChainMap::new(&x, &y, |_| p.clone()).unwrap();
        let c = f.cone().complex;
        let h: Vec<(i64, Vec<usize>)> = c.homology().into_iter().map(|(n, m)| (n, m.dims().to_vec())).collect();
        assert_eq!(h, vec![(-1, vec![0, 0]), (0, vec![1, 0])]);
    }

    #[test]
    fn kernel_and_cokernel_complexes() {
        let x = x_complex();
        let id = ChainMap::identity(&x);
        assert!(id.kernel_complex().source().is_zero());
        assert!(id.cokernel_complex().target().is_zero());
        let zero = ChainMap::zero(&x, &x);
        assert_eq!(zero.kernel_complex().source().total_dim(), 4);
    }
}
