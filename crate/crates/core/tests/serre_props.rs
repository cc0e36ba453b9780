mod common;

use proptest::prelude::*;
use serrekb::ar::{chain_maps, verify_duality_dims};
use serrekb::complex::{BoundedComplex, ChainMap};
use serrekb::homotopy::{find_homotopy_equivalence, is_nullhomotopic};
use serrekb::module::HomSpace;
use serrekb::random::{random_chain_map, random_complex, rng_for};
use serrekb::rep::{injective, nakayama, nakayama_object, projective};
use serrekb::serre::{lift_to_presentation, nakayama_chain, serre_of_complex, serre_on_map, SerrePackage};

use common::{algebra, corpus};

fn null(f: &ChainMap) -> bool {
    is_nullhomotopic(f).unwrap().is_some()
}

/// `S f` from an explicitly given lift `f₁: P₁(M) → P₁(N)`.
fn serre_from_lift(f1: &ChainMap, sm: &SerrePackage, sn: &SerrePackage) -> ChainMap {
    nakayama_chain(f1, &sm.nu_p1, &sn.nu_p1)
        .unwrap()
        .restrict(&sm.kernel, &sn.kernel)
        .expect("ν f₁ preserves the kernels")
        .shift(2)
        .retarget(&sm.output, &sn.output)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn functorial_up_to_homotopy(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "functor");
        let x = random_complex(&c.algebra, &mut rng, 3).unwrap();
        let y = BoundedComplex::direct_sum(&c.algebra, &[x.clone(), random_complex(&c.algebra, &mut rng, 3).unwrap()]).sum;
        let z = random_complex(&c.algebra, &mut rng, 3).unwrap();
        let f = random_chain_map(&x, &y, &mut rng).unwrap();
        let g = random_chain_map(&y, &z, &mut rng).unwrap();
        let (sx, sy, sz) = (serre_of_complex(&x).unwrap(), serre_of_complex(&y).unwrap(), serre_of_complex(&z).unwrap());
        let sf = serre_on_map(&f, &sx, &sy).unwrap();
        let sg = serre_on_map(&g, &sy, &sz).unwrap();
        let sgf = serre_on_map(&g.compose(&f), &sx, &sz).unwrap();
        prop_assert!(sf.is_chain_map() && sg.is_chain_map());
        prop_assert!(null(&sgf.sub(&sg.compose(&sf))));
        let sid = serre_on_map(&ChainMap::identity(&x), &sx, &sx).unwrap();
        prop_assert!(null(&sid.sub(&ChainMap::identity(&sx.output))));
    }

    #[test]
    fn independent_of_the_lift(a in 0..10usize, seed: u64) {
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "lift");
        let m = random_complex(&c.algebra, &mut rng, 3).unwrap();
        let n = BoundedComplex::direct_sum(&c.algebra, &[m.clone(), random_complex(&c.algebra, &mut rng, 3).unwrap()]).sum;
        let f = random_chain_map(&m, &n, &mut rng).unwrap();
        let (sm, sn) = (serre_of_complex(&m).unwrap(), serre_of_complex(&n).unwrap());
        let (pm, pn) = (&sm.presentation, &sn.presentation);
        let (_, f1) = lift_to_presentation(&f, pm, &pn.p, &pn.epsilon).unwrap();
        // Other lifts: f₀ + p g with f₁ + g p, and f₁ + k h with p k = 0.
        let g = random_chain_map(&pm.p0.complex, &pn.p1.complex, &mut rng).unwrap();
        let k = pn.p.kernel_complex();
        let h = random_chain_map(&pm.p1.complex, k.source(), &mut rng).unwrap();
        let other = f1.add(&g.compose(&pm.p)).add(&k.compose(&h));
        prop_assert!(pn.p.compose(&other).sub(&pn.p.compose(&f1)).sub(&pn.p.compose(&g).compose(&pm.p)).is_zero());
        let s1 = serre_from_lift(&f1, &sm, &sn);
        let s2 = serre_from_lift(&other, &sm, &sn);
        prop_assert!(s2.is_chain_map());
        prop_assert!(null(&s1.sub(&s2)));
    }

    #[test]
    fn duality_against_projectives(a in 0..10usize, seed: u64) {
        // Hom_K(P(i), X) and Hom_K(X, I(i)) both equal (H⁰X)_i.
        let c = &corpus()[a];
        let mut rng = rng_for(seed, "yoneda");
        let x = random_complex(&c.algebra, &mut rng, 4).unwrap();
        let h0 = x.homology().into_iter().find(|(n, _)| *n == 0).map(|(_, h)| h.dims().to_vec());
        for i in 0..c.algebra.num_vertices() {
            let p = BoundedComplex::stalk(&projective(&c.algebra, i), 0);
            let sp = serre_of_complex(&p).unwrap().output;
            let d = verify_duality_dims(&p, &x, &sp).unwrap();
            let expected = h0.as_ref().map_or(0, |h| h[i]);
            prop_assert_eq!(d.dim_left, expected);
            prop_assert_eq!(d.dim_right, expected);
        }
    }
}

#[test]
fn chain_map_spaces_match_hom_spaces_on_stalks() {
    let c = algebra("kronecker_q");
    for (_, m) in &c.indecomposables {
        for (_, n) in &c.indecomposables {
            let (x, y) = (BoundedComplex::stalk(m, 0), BoundedComplex::stalk(n, 0));
            assert_eq!(chain_maps(&x, &y).unwrap().1.cols(), HomSpace::new(m, n).unwrap().dim());
        }
    }
}

#[test]
fn serre_of_multiplication_by_x_is_its_nakayama_image() {
    for name in ["dual_numbers_q", "dual_numbers_gf101"] {
        let c = algebra(name);
        let lam = projective(&c.algebra, 0);
        let space = HomSpace::new(&lam, &lam).unwrap();
        let x = space.basis().iter().find(|f| f.map_at(0).rank() == 1).cloned().unwrap();
        let stalk = BoundedComplex::stalk(&lam, 0);
        let fx = ChainMap::new(&stalk, &stalk, |_| x.clone()).unwrap();
        let s = serre_of_complex(&stalk).unwrap();
        let sx = serre_on_map(&fx, &s, &s).unwrap();
        let nu_stalk = BoundedComplex::stalk(&nakayama_object(&lam).unwrap(), 0);
        let nu_x = ChainMap::new(&nu_stalk, &nu_stalk, |_| nakayama(&x).unwrap()).unwrap();
        let mut rng = rng_for(0, name);
        let (phi, _) = find_homotopy_equivalence(&s.output, &nu_stalk, &mut rng, 20).unwrap().unwrap();
        // End(DΛ) ≅ Λ is commutative, so any comparison φ transports S(·x) to ν(·x).
        assert!(null(&phi.compose(&sx).sub(&nu_x.compose(&phi))));
        assert!(!null(&nu_x));
        let i = BoundedComplex::stalk(&injective(&c.algebra, 0), 0);
        assert!(find_homotopy_equivalence(&nu_stalk, &i, &mut rng, 20).unwrap().is_some());
    }
}
