mod common;

use proptest::prelude::*;
use serrekb::linalg::Matrix;
use serrekb::module::{HomSpace, Module};
use serrekb::random::{random_module, rng_for};
use serrekb::rep::{
    classical_tau, find_isomorphism, injective, nakayama_object, projective, projective_presentation,
};
use serrekb::serre::serre_of_module;

use common::{algebra, corpus};

/// Arrow matrices multiplied along the path, first arrow rightmost.
fn path_matrix(m: &Module, arrows: &[usize]) -> Matrix {
    let alg = m.algebra();
    let q = alg.quiver().arrows();
    let start = q[arrows[0]].source;
    let mut acc = Matrix::identity(m.field(), m.dim_at(start));
    for &a in arrows {
        acc = m.arrow(a).mul(&acc);
    }
    acc
}

fn relations_hold(m: &Module) -> bool {
    let alg = m.algebra();
    let q = alg.quiver().arrows();
    alg.relations().iter().all(|r| {
        let Some((_, first)) = r.terms.first() else { return true };
        let (s, t) = (q[first[0]].source, q[*first.last().unwrap()].target);
        let mut sum = Matrix::zeros(m.field(), m.dim_at(t), m.dim_at(s));
        for (c, path) in &r.terms {
            sum = sum.add(&path_matrix(m, path).scale(c));
        }
        sum.is_zero()
    })
}

fn is_projective(m: &Module) -> bool {
    let alg = m.algebra();
    let mut rng = rng_for(0, "projective");
    (0..alg.num_vertices()).any(|v| {
        let p = projective(alg, v);
        p.dims() == m.dims() && find_isomorphism(&p, m, &mut rng, 16).is_some()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_modules_satisfy_relations(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "modules");
        let m = random_module(&c.algebra, &mut rng).unwrap();
        prop_assert!(relations_hold(&m));
        for v in 0..c.algebra.num_vertices() {
            prop_assert!(relations_hold(&projective(&c.algebra, v)));
            prop_assert!(relations_hold(&injective(&c.algebra, v)));
        }
    }

    #[test]
    fn projective_yoneda(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "yoneda");
        let m = random_module(&c.algebra, &mut rng).unwrap();
        for v in 0..c.algebra.num_vertices() {
            prop_assert_eq!(HomSpace::new(&projective(&c.algebra, v), &m).unwrap().dim(), m.dim_at(v));
        }
    }

    #[test]
    fn presentations_are_exact(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "presentation");
        let m = random_module(&c.algebra, &mut rng).unwrap();
        let pres = projective_presentation(&m);
        prop_assert!(pres.epsilon.is_surjective());
        prop_assert!(pres.epsilon.compose(&pres.p).is_zero());
        for v in 0..c.algebra.num_vertices() {
            let image = pres.p.map_at(v).rank();
            let kernel = pres.epsilon.map_at(v).kernel_basis().cols();
            prop_assert_eq!(image, kernel);
        }
    }
}

#[test]
fn nakayama_of_projectives_are_injectives() {
    let mut rng = rng_for(0, "nakayama");
    for c in corpus() {
        for v in 0..c.algebra.num_vertices() {
            let nu = nakayama_object(&projective(&c.algebra, v)).unwrap();
            let i = injective(&c.algebra, v);
            assert_eq!(nu.dims(), i.dims(), "{} vertex {v}", c.name);
            assert!(find_isomorphism(&nu, &i, &mut rng, 16).is_some(), "{} vertex {v}", c.name);
        }
    }
}

#[test]
fn tau_vanishes_exactly_on_projectives() {
    for c in corpus() {
        for (name, m) in &c.indecomposables {
            assert_eq!(classical_tau(m).is_zero(), is_projective(m), "{}: {name}", c.name);
        }
    }
}

#[test]
fn tau_of_simples() {
    // k[x]/(x²): the dual of ·x on Λ* has kernel the socle, one-dimensional.
    for name in ["dual_numbers_q", "dual_numbers_gf101"] {
        let c = algebra(name);
        let s = Module::simple(c.algebra.clone(), 0);
        assert_eq!(classical_tau(&s).dims(), &[1]);
        assert_eq!(serre_of_module(&s).unwrap().term(-2).dims(), &[1]);
    }
    // A₂ (1 → 2): ker(I(2) → I(1)) has dimension vector (0, 1).
    for name in ["a2_q", "a2_gf101"] {
        let c = algebra(name);
        let s1 = Module::simple(c.algebra.clone(), 0);
        assert_eq!(classical_tau(&s1).dims(), &[0, 1]);
        assert_eq!(serre_of_module(&s1).unwrap().term(-2).dims(), &[0, 1]);
        for v in 0..2 {
            assert!(classical_tau(&projective(&c.algebra, v)).is_zero());
        }
    }
}
