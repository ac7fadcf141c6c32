use cyclokit::cychom::monoid_cohomology;
use cyclokit::cyclo::*;
use cyclokit::fdm::{pow, CyclotomicFdm, Expansion, SplitFdm};
use cyclokit::fixtures;
use num_bigint::BigInt;
use zlin::{ChainComplex, FgAbGroup, IntMatrix};

fn build(name: &str, p: u64, precision: u32) -> CyclotomicFdm {
    fixtures::by_name(name).unwrap().build(p, precision).unwrap()
}

fn mod_pj(p: u64, j: u32) -> FgAbGroup {
    FgAbGroup::cyclic(pow(p, j))
}

#[test]
fn syntomic_cohomology_of_the_trivial_module() {
    for p in [2, 3] {
        for j in 1..=3 {
            let syn = syntomic(&build("trivial", p, 3), j, 0..=2).unwrap();
            assert_eq!(syn[&0], mod_pj(p, j));
            assert_eq!(syn[&1], mod_pj(p, j));
            assert!(syn[&2].is_zero());
        }
    }
}

#[test]
fn syntomic_cohomology_of_the_tate_twist_vanishes() {
    for p in [2, 3] {
        for j in 1..=3 {
            let syn = syntomic(&build("tate_twist", p, 3), j, 0..=2).unwrap();
            assert!(syn.values().all(FgAbGroup::is_zero), "p {p} j {j}: {}", render(&syn));
        }
    }
    let zero = zero_fdm(2, 2).unwrap();
    assert!(syntomic(&zero, 2, 0..=2).unwrap().values().all(FgAbGroup::is_zero));
}

#[test]
fn identity_frobenius_gives_constants_and_coinvariants() {
    // Two weight-zero summands with φ = ι.
    let f = SplitFdm { name: "pair".into(), ..fixtures::random(17) };
    let f = SplitFdm { w0: vec![0, 0], frob0: IntMatrix::identity(2), basis0: IntMatrix::identity(2), ..f };
    for p in [2u64, 3] {
        let m = f.build(p, 3).unwrap();
        for j in 1..=3 {
            let syn = syntomic(&m, j, 0..=1).unwrap();
            let q = pow(p, j);
            let mc = monoid_cohomology(&IntMatrix::scalar(2, q.clone()), &IntMatrix::identity(2), None).unwrap();
            assert_eq!(syn[&0], mc.h0);
            assert_eq!(syn[&1], mc.h1);
        }
    }
}

#[test]
fn syntomic_and_tc_are_additive() {
    for (a, b) in [("trivial", "tate_twist"), ("random_3", "random_5"), ("random_1", "trivial")] {
        for p in [2, 3] {
            let (ma, mb) = (build(a, p, 3), build(b, p, 3));
            let sum = ma.direct_sum(&mb).unwrap();
            let (sa, sb, ss) = (syntomic(&ma, 2, 0..=2).unwrap(), syntomic(&mb, 2, 0..=2).unwrap(), syntomic(&sum, 2, 0..=2).unwrap());
            assert_eq!(ss, sum_graded(&sa, &sb), "{a} ⊕ {b} at {p}");
            let tc = |m: &CyclotomicFdm| Pipelines::new(m.clone()).tc(2, 2, 0..=2).unwrap();
            assert_eq!(tc(&sum), sum_graded(&tc(&ma), &tc(&mb)), "{a} ⊕ {b} at {p}");
        }
    }
}

#[test]
fn sections_of_the_expansion_recover_the_strand() {
    for name in ["trivial", "tate_twist", "random_4", "random_14"] {
        let m = build(name, 2, 2);
        let e = Expansion::of(&m.complex, -8, 4);
        let strand = e.strand.complex();
        for n in [2, 4] {
            let s = Sections::compute(&e, n).unwrap();
            for i in -6..=3 {
                assert_eq!(s.complex.rank(i), strand.rank(i), "{name} [{n}] degree {i}");
                assert_eq!(s.complex.homology(i).unwrap(), strand.homology(i).unwrap(), "{name} [{n}] degree {i}");
            }
        }
        // Over the single wheel [1] the edge functions survive as well.
        let one = Sections::compute(&e, 1).unwrap();
        assert!(one.complex.rank(0) >= strand.rank(0));
    }
}

#[test]
fn tower_arrows_commute_and_agree_with_the_diagram_limit() {
    for name in ["trivial", "tate_twist", "random_0", "random_5", "random_14", "random_19"] {
        for p in [2, 3] {
            let mut pipes = Pipelines::new(build(name, p, 3));
            let tower = pipes.tower(2, 3).unwrap();
            for k in 2..=4 {
                assert!(tower.relation_holds(k).unwrap());
            }
            for k in 1..=2 {
                assert_eq!(tower.tc(k, 0..=2).unwrap(), tower.holim(k, 0..=2).unwrap(), "{name} p {p} depth {k}");
            }
        }
    }
}

#[test]
fn holim_over_a_single_level_is_the_fixed_point_term() {
    let mut pipes = Pipelines::new(build("trivial", 2, 2));
    let tower = pipes.tower(1, 2).unwrap();
    let direct = tower.level(0).unwrap();
    let via_limit = tower.holim_complex(0).unwrap();
    for i in -2..=0 {
        assert_eq!(direct.homology(i).unwrap(), via_limit.homology(i).unwrap());
    }
}

#[test]
fn comparison_passes_on_sample_fixtures() {
    for name in ["trivial", "tate_twist", "random_2", "random_7", "random_12"] {
        for p in [2, 3] {
            let m = build(name, p, 3);
            let r = tc_syntomic_compare(name, &m, 3, 2, 0..=2).unwrap();
            assert!(r.passed(), "{}", serde_json::to_string(&r).unwrap());
        }
    }
}

#[test]
fn answers_do_not_depend_on_the_frobenius_representative() {
    for name in ["tate_twist", "random_5", "random_8", "random_16"] {
        for p in [2, 3] {
            let m = build(name, p, 4);
            for j in 1..=3 {
                let base = syntomic_with(&m, j, j, 0..=2).unwrap();
                for rep in j + 1..=4 {
                    assert_eq!(syntomic_with(&m, j, rep, 0..=2).unwrap(), base, "{name} p {p} j {j} rep {rep}");
                }
            }
        }
    }
}

#[test]
fn reduction_rejects_maps_that_are_not_chain_maps() {
    let c = ChainComplex::new(0, vec![1, 1], vec![IntMatrix::scalar(1, BigInt::from(1))]).unwrap();
    let f = [(0, IntMatrix::scalar(1, BigInt::from(1)))].into_iter().collect();
    // d f - f d = 1 in degree 1, so this is a chain map mod 1 only.
    assert!(reduce_map(&c, &c, &f, &BigInt::from(4)).is_err());
    assert!(reduce_map(&c, &c, &f, &BigInt::from(1)).is_ok());
}

#[test]
fn precision_must_be_available() {
    let m = build("trivial", 2, 2);
    assert!(syntomic_with(&m, 3, 3, 0..=2).is_err());
    assert!(syntomic(&m, 0, 0..=2).is_err());
    assert!(tc_syntomic_compare("trivial", &m, 2, 2, 0..=2).is_err());
}

#[test]
fn expansion_of_the_examples() {
    let (e, r) = expand(&build("trivial", 2, 2), 3, 1).unwrap();
    assert!(r.chain_maps && r.locally_constant);
    for n in 1..=3 {
        let c = e.base.at(n);
        assert_eq!(c.homology(0).unwrap(), FgAbGroup::free(1));
        assert!(c.homology(1).unwrap().is_zero() && c.homology(-1).unwrap().is_zero());
    }
    let (e, r) = expand(&build("tate_twist", 3, 2), 3, 1).unwrap();
    assert!(r.chain_maps && r.locally_constant);
    assert_eq!(e.base.at(2).homology(2).unwrap(), FgAbGroup::free(1));
    // φ_0 = p in degree 0 and φ_1 = 1 in degree 2.
    assert_eq!(r.strand_factors[&0], vec!["3".to_string()]);
    assert_eq!(r.strand_factors[&2], vec!["1".to_string()]);
    let (e, r) = expand(&zero_fdm(2, 2).unwrap(), 2, 1).unwrap();
    assert!(r.chain_maps && r.strand_factors.is_empty());
    assert!((-4..=3).all(|i| e.base.at(2).rank(i) == 0));
}
