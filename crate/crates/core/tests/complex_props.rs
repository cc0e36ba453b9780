mod common;

use proptest::prelude::*;
use serrekb::ar::make_extension;
use serrekb::complex::{BoundedComplex, ChainMap};
use serrekb::double::tot_cone_permutation;
use serrekb::homotopy::{find_homotopy_equivalence, is_nullhomotopic, HomotopyClasses};
use serrekb::module::{submodule_from_bases, HomSpace, ModuleHom};
use serrekb::random::{random_chain_map, random_complex, random_double_map, rng_for, rows_exact_double};
use serrekb::rep::{projective, radical_power};
use serrekb::Error;

use common::{algebra, corpus};

fn homology_dims(x: &BoundedComplex) -> Vec<(i64, Vec<usize>)> {
    x.homology()
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| (n, m.dims().to_vec()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn contractible_summands_do_not_change_hom(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "summand");
        let x = random_complex(&c.algebra, &mut rng, 3).unwrap();
        let y = random_complex(&c.algebra, &mut rng, 3).unwrap();
        let z = random_complex(&c.algebra, &mut rng, 2).unwrap();
        let contractible = ChainMap::identity(&z).cone().complex;
        let x2 = BoundedComplex::direct_sum(&c.algebra, &[x.clone(), contractible.clone()]).sum;
        let y2 = BoundedComplex::direct_sum(&c.algebra, &[y.clone(), contractible]).sum;
        let d = HomotopyClasses::new(&x, &y).unwrap().dim();
        prop_assert_eq!(HomotopyClasses::new(&x2, &y).unwrap().dim(), d);
        prop_assert_eq!(HomotopyClasses::new(&x, &y2).unwrap().dim(), d);
        let eq = find_homotopy_equivalence(&x, &x2, &mut rng, 20).unwrap();
        prop_assert!(eq.is_some());
        prop_assert_eq!(homology_dims(&x), homology_dims(&x2));
    }

    #[test]
    fn nullhomotopy_agrees_with_classes(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "null");
        let x = random_complex(&c.algebra, &mut rng, 3).unwrap();
        let y = random_complex(&c.algebra, &mut rng, 3).unwrap();
        let f = random_chain_map(&x, &y, &mut rng).unwrap();
        let classes = HomotopyClasses::new(&x, &y).unwrap();
        let zero_class = classes.class_of(&f).iter().all(|s| s.is_zero());
        let h = is_nullhomotopic(&f).unwrap();
        prop_assert_eq!(h.is_some(), zero_class);
        if let Some(h) = h {
            prop_assert!(h.witnesses(&f));
        }
        // Boundaries d s + s d of random s are always null-homotopic.
        let g = f.sub(&classes.element(&classes.class_of(&f)));
        prop_assert!(is_nullhomotopic(&g).unwrap().is_some());
    }

    #[test]
    fn tot_of_row_cone_is_cone_of_tot(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "tot");
        let f = random_double_map(&c.algebra, &mut rng).unwrap();
        let (tot, cone, p) = tot_cone_permutation(&f);
        prop_assert!(p.is_chain_map());
        prop_assert_eq!(p.source(), &tot.complex);
        prop_assert_eq!(p.target(), &cone.complex);
        for n in p.source().lo().min(p.target().lo())..=p.source().hi().max(p.target().hi()) {
            for m in p.component(n).maps() {
                prop_assert!(m.rows() == m.cols());
                prop_assert_eq!(m.mul(&m.transpose()), serrekb::linalg::Matrix::identity(m.field(), m.rows()));
            }
        }
    }

    #[test]
    fn exact_rows_give_exact_totals(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "rows");
        let d = rows_exact_double(&c.algebra, &mut rng).unwrap();
        let rows: Vec<i64> = d.positions().map(|p| p.1).collect();
        for j in rows.iter().min().copied().unwrap_or(0)..=rows.iter().max().copied().unwrap_or(-1) {
            prop_assert!(d.row(j).is_acyclic());
        }
        prop_assert!(d.tot().complex.is_acyclic());
    }
}

#[test]
fn square_zero_is_enforced() {
    let c = algebra("a3_q");
    let p = projective(&c.algebra, 0);
    let id = ModuleHom::identity(&p);
    let r = BoundedComplex::new(c.algebra.clone(), 0, vec![p.clone(), p.clone(), p], vec![id.clone(), id]);
    assert!(matches!(r, Err(Error::NotAComplex(_))));
}

/// The nonzero nilpotent endomorphism of `Λ = k[x]/(x²)`, i.e. `·x`.
fn times_x(name: &str) -> ModuleHom {
    let c = algebra(name);
    let lam = projective(&c.algebra, 0);
    let space = HomSpace::new(&lam, &lam).unwrap();
    space
        .basis()
        .iter()
        .find(|f| f.map_at(0).rank() == 1)
        .cloned()
        .expect("·x")
}

#[test]
fn multiplication_by_x_homology() {
    // ·x on a 2-dimensional space has rank 1: kernel and cokernel are S.
    for name in ["dual_numbers_q", "dual_numbers_gf101"] {
        let c = algebra(name);
        let x = times_x(name);
        let lam = x.source().clone();
        let k = BoundedComplex::new(c.algebra.clone(), -1, vec![lam.clone(), lam], vec![x]).unwrap();
        assert_eq!(homology_dims(&k), vec![(-1, vec![1]), (0, vec![1])]);
    }
}

#[test]
fn contractible_homology_and_stalks() {
    let c = algebra("kronecker_q");
    for (_, m) in &c.indecomposables {
        let x = BoundedComplex::stalk(m, 0);
        assert_eq!(homology_dims(&x), vec![(0, m.dims().to_vec())]);
        assert!(ChainMap::identity(&x).cone().complex.is_acyclic());
    }
}

#[test]
fn radical_extension_quotient_is_simple() {
    for name in ["dual_numbers_q", "dual_numbers_gf101"] {
        let c = algebra(name);
        let lam = projective(&c.algebra, 0);
        let spans = radical_power(&lam, 1);
        let inc = submodule_from_bases(&lam, spans.iter().map(|s| s.column_space()).collect());
        let a = BoundedComplex::stalk(inc.source(), 0);
        let b = BoundedComplex::stalk(&lam, 0);
        let iota = ChainMap::new(&a, &b, |_| inc.clone()).unwrap();
        let e = make_extension(&iota).unwrap();
        assert_eq!(e.c().lo(), 0);
        assert_eq!(e.c().hi(), 0);
        assert_eq!(e.c().term(0).dims(), &[1]);
    }
}

#[test]
fn identity_extension_quotient_vanishes() {
    let c = algebra("a3_q");
    let mut rng = rng_for(3, "ext");
    let x = random_complex(&c.algebra, &mut rng, 3).unwrap();
    let e = make_extension(&ChainMap::identity(&x)).unwrap();
    assert!(e.c().is_zero() || e.c().degrees().all(|n| e.c().term(n).is_zero()));
}
