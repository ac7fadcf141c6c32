use cyclokit::catcore::{lambda_hom, CyclicMorphism, Modulus};
use cyclokit::cychom::*;
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zlin::{FgAbGroup, IntMatrix};

#[test]
fn four_term_sequence_is_exact_and_natural() {
    let w = build_wheel_functors(6).unwrap();
    assert!(w.exact.values().all(|&e| e), "{:?}", w.exact);
    assert!(w.naturality_failures.is_empty(), "{:?}", w.naturality_failures);
    assert!(w.morphisms_checked > 100);
}

#[test]
fn vertex_and_edge_actions_compose() {
    assert!(check_functoriality(4).is_empty());
}

#[test]
fn edge_action_examples() {
    // The identity acts trivially and rotation by one shifts edges.
    let id = CyclicMorphism::identity(3, Modulus::CYCLIC);
    assert!(edge_action(&id).is_identity());
    let r = CyclicMorphism::rotation(3, 1, Modulus::CYCLIC);
    let e = edge_action(&r);
    let v = vertex_action(&r);
    assert_eq!(e, v);
    // The unique map [2] -> [1] sends exactly one edge of [2] onto the edge of [1].
    for f in lambda_hom(2, 1, 1) {
        let e = edge_action(&f);
        assert_eq!(e.shape(), (2, 1));
        let total: BigInt = (0..2).map(|i| e.get(i, 0).clone()).sum();
        assert_eq!(total, BigInt::from(1));
    }
}

fn trivial_hc(k: usize) -> FgAbGroup {
    if k.is_multiple_of(2) {
        FgAbGroup::free(1)
    } else {
        FgAbGroup::zero()
    }
}

#[test]
fn cyclic_homology_of_the_constant_module() {
    let m = CyclicModule::constant(10, 1);
    m.validate().unwrap();
    let hc = cyclic_homology(&m, 8).unwrap();
    for (k, g) in hc.iter().enumerate() {
        assert_eq!(*g, trivial_hc(k), "HC_{k}");
    }
}

#[test]
fn cyclic_homology_of_the_zero_module() {
    let hc = cyclic_homology(&CyclicModule::zero(5), 3).unwrap();
    assert!(hc.iter().all(FgAbGroup::is_zero));
}

#[test]
fn out_of_range_degree_is_refused() {
    assert!(cyclic_homology(&CyclicModule::constant(4, 1), 6).is_err());
}

#[test]
fn representable_module_has_the_homology_of_a_point() {
    // Edges of [n] are the maps [n] -> [1], so the edge functor is representable
    // and hence projective.
    let m = CyclicModule::from_functor(6, edge_action, |n| n);
    m.validate().unwrap();
    CyclicModule::from_functor(6, vertex_action, |n| n).validate().unwrap();
    let hc = cyclic_homology(&m, 4).unwrap();
    assert_eq!(hc[0], FgAbGroup::free(1));
    for g in &hc[1..] {
        assert!(g.is_zero(), "{g}");
    }
}

#[test]
fn broken_module_is_rejected() {
    let mut m = CyclicModule::constant(4, 1);
    m.cyclic.insert(2, IntMatrix::scalar(1, 2));
    assert!(m.validate().is_err());
}

#[test]
fn periodicity_is_an_isomorphism_for_the_constant_module() {
    let m = CyclicModule::constant(9, 1);
    let s = m.periodicity_map(8).unwrap();
    let cone = s.cone();
    for deg in 3..=8 {
        assert!(cone.homology(deg).unwrap().is_zero(), "degree {deg}");
    }
}

#[test]
fn subdivision_preserves_cohomology_of_constant_and_circle() {
    for p in [2, 3] {
        let c = subdivision_invariance_check(p, &ConstantCosimplicial, 4).unwrap();
        assert!(c.equal, "{c:?}");
        assert_eq!(c.direct[0], FgAbGroup::free(1));
        assert!(c.direct[1..].iter().all(FgAbGroup::is_zero));
        let s = subdivision_invariance_check(p, &CircleCochains, 4).unwrap();
        assert!(s.equal, "{s:?}");
        assert_eq!(s.direct[0], FgAbGroup::free(1));
        assert_eq!(s.direct[1], FgAbGroup::free(1));
        assert!(s.direct[2].is_zero());
    }
}

#[test]
fn circle_cochains_are_functorial() {
    assert!(check_cosimplicial(&CircleCochains, 4).is_empty());
}

#[test]
fn subdivision_preserves_cohomology_of_random_posets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..12 {
        let m = PosetCochains::random(&mut rng, 3, 2);
        assert!(check_cosimplicial(&m, 3).is_empty());
        for p in [2, 3] {
            let r = subdivision_invariance_check(p, &m, 3).unwrap();
            assert!(r.equal, "{r:?}");
        }
    }
}

#[test]
fn monoid_cohomology_examples() {
    // Sign action on Z.
    let r = monoid_cohomology(&IntMatrix::zeros(1, 0), &IntMatrix::scalar(1, -1), None).unwrap();
    assert!(r.h0.is_zero());
    assert_eq!(r.h1, FgAbGroup::cyclic(2));
    // Trivial action on Z/4.
    let r = monoid_cohomology(&IntMatrix::scalar(1, 4), &IntMatrix::identity(1), None).unwrap();
    assert_eq!(r.h0, FgAbGroup::cyclic(4));
    assert_eq!(r.h1, FgAbGroup::cyclic(4));
    // Trivial action on Z, reduced mod 9.
    let r = monoid_cohomology(&IntMatrix::zeros(1, 0), &IntMatrix::identity(1), Some(&BigInt::from(9))).unwrap();
    assert_eq!(r.h0, FgAbGroup::cyclic(9));
    assert_eq!(r.h1, FgAbGroup::cyclic(9));
    // Swap on Z^2.
    let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
    let r = monoid_cohomology(&IntMatrix::zeros(2, 0), &swap, None).unwrap();
    assert_eq!(r.h0, FgAbGroup::free(1));
    assert_eq!(r.h1, FgAbGroup::free(1));
    // A t that does not preserve the relations is refused.
    let rel = IntMatrix::from_rows(&[vec![2], vec![0]]);
    assert!(monoid_cohomology(&rel, &swap, None).is_err());
}

#[test]
fn covering_comparison_commutes() {
    for n in 2..=4 {
        let r = nti_diagram_check(n, 3);
        assert!(r.failures.is_empty(), "{r:?}");
        assert!(r.squares_checked > 0);
    }
}
