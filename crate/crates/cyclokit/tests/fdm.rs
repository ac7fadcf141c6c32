use cyclokit::catcore::{lambda_hom, CyclicMorphism, Modulus};
use cyclokit::fdm::*;
use cyclokit::fixtures;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zlin::{ChainMap, FgAbGroup, IntMatrix};

fn cyclic(d: u64) -> FgAbGroup {
    FgAbGroup::cyclic(BigInt::from(d))
}

#[test]
fn expansion_of_tate_twists_is_a_shifted_point() {
    for w in 0..=2 {
        let r = exp_tate_check(w, 4).unwrap();
        assert!(r.values().all(|&ok| ok), "weight {w}: {r:?}");
    }
}

#[test]
fn expansion_of_tate_twist_has_homology_in_degree_twice_the_weight() {
    let v = PeriodicFilteredComplex::tate(1);
    let e = Expansion::of(&v, -4, 4);
    for n in 1..=4 {
        let c = e.at(n);
        for i in -3..=4 {
            let h = c.homology(i).unwrap();
            if i == 2 {
                assert_eq!(h, FgAbGroup::free(1), "[{n}] degree {i}");
            } else {
                assert!(h.is_zero(), "[{n}] degree {i}: {h}");
            }
        }
    }
}

#[test]
fn expansion_is_a_functor_on_the_cyclic_category() {
    for seed in 0..6 {
        let v = fixtures::random(seed).build(2, 2).unwrap().complex;
        let top = v.top_degree().unwrap();
        let e = Expansion::of(&v, top - 5, top + 1);
        assert!(exp_functoriality(&e, 3).is_empty(), "seed {seed}");
        // Composites act contravariantly.
        for f in lambda_hom(2, 3, 1) {
            for g in lambda_hom(3, 2, 1) {
                let gf = g.compose(&f).unwrap();
                let (af, ag, agf) = (e.action(&f), e.action(&g), e.action(&gf));
                for i in e.lo()..=e.hi() {
                    assert_eq!(&af[&i] * &ag[&i], agf[&i]);
                }
            }
        }
    }
}

#[test]
fn expansion_homology_is_the_constant_graded_piece() {
    for seed in 0..12 {
        let v = fixtures::random(seed).build(3, 2).unwrap().complex;
        let top = v.top_degree().unwrap();
        let s = v.strand(top - 8, top + 1);
        let gr = s.graded_complex().unwrap();
        let e = Expansion::new(s);
        for n in 1..=3 {
            let c = e.at(n);
            for i in top - 6..=top + 1 {
                assert_eq!(c.homology(i).unwrap(), gr.homology(i).unwrap(), "seed {seed} [{n}] degree {i}");
            }
        }
        // Every structure map induces an isomorphism on homology.
        for f in [CyclicMorphism::rotation(3, 1, Modulus::CYCLIC)].into_iter().chain(lambda_hom(2, 3, 1).into_iter().take(4)) {
            assert!(e.action_map(&f).unwrap().is_quasi_isomorphism().unwrap(), "seed {seed}");
        }
    }
}

#[test]
fn expansion_commutes_with_direct_sums() {
    let a = fixtures::random(1).build(2, 1).unwrap().complex;
    let b = fixtures::random(2).build(2, 1).unwrap().complex;
    let s = a.direct_sum(&b).unwrap();
    let (lo, hi) = (-6, 7);
    for n in 1..=3 {
        let (ca, cb, cs) = (Expansion::of(&a, lo, hi).at(n), Expansion::of(&b, lo, hi).at(n), Expansion::of(&s, lo, hi).at(n));
        for i in lo + 1..hi {
            assert_eq!(cs.rank(i), ca.rank(i) + cb.rank(i));
            assert_eq!(cs.homology(i).unwrap(), ca.homology(i).unwrap().direct_sum(&cb.homology(i).unwrap()));
        }
    }
}

#[test]
fn expansion_sends_filtered_quasi_isomorphisms_to_quasi_isomorphisms() {
    // V -> V ⊕ [ℤ --1--> ℤ] is a filtered quasi-isomorphism.
    let v = fixtures::random(4).build(2, 1).unwrap().complex;
    let acyclic = PeriodicFilteredComplex::split(&[1], &[1], &IntMatrix::from_rows(&[vec![1]]), &IntMatrix::zeros(1, 1)).unwrap();
    let w = v.direct_sum(&acyclic).unwrap();
    let include = |from: &FilteredGroup, to: &FilteredGroup| {
        FilteredMap::from_fn(from.clone(), to.clone(), Below::Constant, |k| IntMatrix::identity(from.rank(k)).vstack(&IntMatrix::zeros(to.rank(k) - from.rank(k), from.rank(k)))).unwrap()
    };
    let (f0, f1) = (include(&v.v0, &w.v0), include(&v.v1, &w.v1));
    // The complement is acyclic on every graded piece.
    let gr = acyclic.strand(-6, 7).graded_complex().unwrap();
    let (a, b) = gr.reliable_stored_degrees().unwrap();
    assert!(gr.acyclic_in(a, b).unwrap());
    let (lo, hi) = (-6, 7);
    let (ev, ew) = (Expansion::of(&v, lo, hi), Expansion::of(&w, lo, hi));
    let phi = StrandMap::from_filtered(&f0, &f1, lo, hi);
    for n in 1..=4 {
        let map = ChainMap::new(ev.at(n), ew.at(n), ev.map_to(&ew, &phi, n)).unwrap();
        assert!(map.is_quasi_isomorphism().unwrap(), "[{n}]");
    }
}

#[test]
fn subdivision_of_the_expansion_matches_the_invariant_part() {
    let r = exp_div_check(&PeriodicFilteredComplex::tate(0), 2, 3).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    let r = exp_div_check(&PeriodicFilteredComplex::tate(0), 1, 3).unwrap();
    assert!(r.passed(), "{:?}", r.failures);
    for seed in 0..5 {
        let v = fixtures::random(seed).build(2, 1).unwrap().complex;
        for n in [2, 3] {
            let r = exp_div_check(&v, n, 2).unwrap();
            assert!(r.passed(), "seed {seed} n {n}: {:?}", r.failures);
        }
    }
}

#[test]
fn unit_map_into_positive_part_is_a_quasi_isomorphism() {
    for l in 0..=2 {
        let r = eta_check(l, 3).unwrap();
        assert!(r.values().all(|&ok| ok), "l = {l}: {r:?}");
    }
}

#[test]
fn twist_shifts_graded_pieces() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let n = rng.gen_range(1..=3);
        let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
        let m = FilteredGroup::split(&weights);
        let i = rng.gen_range(-3..=3);
        assert_eq!(m.twist(i).twist(-i), m);
        for j in -5..=5 {
            assert_eq!(m.twist(i).gr_groups(j), m.gr_groups(j - i));
        }
        // gr of a split group counts the basis vectors of each weight.
        for j in -4..=4 {
            let count = weights.iter().filter(|&&w| w == j).count();
            assert_eq!(m.gr_groups(j).0, FgAbGroup::free(count));
        }
    }
    assert_eq!(FilteredGroup::pure(0, 1).twist(1), FilteredGroup::pure(1, 1));
}

#[test]
fn subdivision_rescales_structure_maps() {
    let m = FilteredGroup::split(&[-1, 0, 2]);
    assert_eq!(m.div(1), m);
    assert_eq!(m.div(2).div(3), m.div(6));
    // Div_n ℤ(0): F^i = n^i ℤ inside ℤ[1/n].
    for n in [2u64, 3, 5] {
        let d = FilteredGroup::pure(0, 1).div(n);
        let bottom = -4;
        for i in bottom..=0 {
            // 1_i goes to n^{i - bottom} 1_bottom, and 1_bottom is n^bottom.
            assert_eq!(d.transport(i, bottom), IntMatrix::scalar(1, BigInt::from(n).pow((i - bottom) as u32)));
        }
        assert_eq!(d.rank(1), 0);
        assert_eq!(d.gr_groups(-1).0, cyclic(n));
    }
}

#[test]
fn tautological_map_commutes_with_twist_and_subdivision() {
    let tau = |m: &FilteredGroup| FilteredMap::from_fn(m.clone(), m.twist(1), Below::Constant, |k| m.t(k)).unwrap();
    for weights in [vec![0], vec![-1, 1], vec![0, 0, 2]] {
        let m = FilteredGroup::split(&weights);
        for n in [2u64, 3] {
            let lhs = tau(&m.div(n));
            let rhs = tau(&m).div(n).unwrap();
            for k in -3..=4 {
                assert_eq!(lhs.component(k), rhs.component(k).scaled(&BigInt::from(n)));
            }
        }
        for i in [-1, 2] {
            let lhs = tau(&m.twist(i));
            let rhs = tau(&m).twist(i);
            for k in -3..=5 {
                assert_eq!(lhs.component(k), rhs.component(k));
            }
        }
    }
}

fn random_split_map(rng: &mut ChaCha8Rng, src: &[i64], tgt: &[i64]) -> FilteredMap {
    let a = IntMatrix::from_fn(tgt.len(), src.len(), |r, c| if tgt[r] >= src[c] { rng.gen_range(-3i64..=3).into() } else { 0.into() });
    FilteredMap::from_split(src, tgt, &a).unwrap()
}

#[test]
fn twist_div_and_stab_are_functors() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let ws: Vec<Vec<i64>> = (0..3).map(|_| (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(-1..=2)).collect()).collect();
        let f = random_split_map(&mut rng, &ws[0], &ws[1]);
        let g = random_split_map(&mut rng, &ws[1], &ws[2]);
        let gf = g.compose(&f).unwrap();
        assert_eq!(g.twist(1).compose(&f.twist(1)).unwrap().component(0), gf.twist(1).component(0));
        let (dg, df) = (g.div(3).unwrap(), f.div(3).unwrap());
        assert_eq!(dg.compose(&df).unwrap(), gf.div(3).unwrap());
        for p in [2, 3] {
            let (sg, sf, sgf) = (g.stab(p).unwrap(), f.stab(p).unwrap(), gf.stab(p).unwrap());
            assert_eq!(sg.compose(&sf).unwrap(), sgf);
            for k in -2..=2 {
                let composed = sg.gr(k).unwrap().compose(&sf.gr(k).unwrap()).unwrap();
                let direct = sgf.gr(k).unwrap();
                for i in 0..=1 {
                    assert_eq!(composed.component(i), direct.component(i));
                }
            }
            let id = FilteredMap::identity(&f.source);
            assert_eq!(id.stab(p).unwrap(), FilteredMap::identity(&f.source.stab(p).unwrap()));
        }
    }
}

#[test]
fn stabilized_integers_have_graded_pieces_of_order_p() {
    for p in [2u64, 3] {
        for j in 1..=5 {
            let gr = stab_truncated_gr(&FilteredGroup::pure(0, 1), p, j, 3).unwrap();
            assert_eq!(gr.len(), 3 + j as usize + 1);
            let q = p.pow(j);
            // Brute force: the image of multiplication by p on ℤ/p^j.
            let image: std::collections::BTreeSet<u64> = (0..q).map(|x| (p * x) % q).collect();
            for (l, g) in gr {
                assert_eq!(g, cyclic(p), "p {p} j {j} l {l}");
                assert_eq!(g.torsion_order(), BigInt::from(q / image.len() as u64));
            }
        }
    }
    let torsion = FilteredGroup::new(0, vec![1], vec![], IntMatrix::scalar(1, BigInt::from(2))).unwrap();
    assert!(torsion.stab(2).is_err());
}

#[test]
fn stabilized_cones_detect_the_prime() {
    for p in [2u64, 3] {
        for q in [1i64, 2, 3, 5] {
            let v = PeriodicFilteredComplex::split(&[0], &[0], &IntMatrix::from_rows(&[vec![q]]), &IntMatrix::zeros(1, 1)).unwrap();
            let s = v.stab(p).unwrap();
            let gr = s.strand(-6, 6).graded_complex().unwrap();
            let (a, b) = gr.reliable_window();
            let groups: Vec<FgAbGroup> = (a.max(-4)..=b.min(4)).map(|i| gr.homology(i).unwrap()).collect();
            if (q as u64).is_multiple_of(p) {
                // Multiplication by q is zero on each graded piece.
                assert!(groups.iter().all(|g| *g == cyclic(p)), "p {p} q {q}: {groups:?}");
            } else {
                assert!(groups.iter().all(FgAbGroup::is_zero), "p {p} q {q}: {groups:?}");
            }
        }
    }
}

#[test]
fn dieudonne_conditions_hold_for_the_standard_examples() {
    for p in [2u64, 3] {
        let mut trivial = Gfdm::from_split(&[0], &IntMatrix::identity(1), p, 4);
        trivial.classical = true;
        let r = trivial.validate();
        assert!(r.valid && r.classical == Some(true), "{r:?}");

        let tate = Gfdm::from_split(&[1], &IntMatrix::identity(1), p, 4);
        assert!(tate.validate().valid);
        assert_eq!(tate.phi[&p][&0][&4], IntMatrix::scalar(1, BigInt::from(p)));

        // φ_0 ≠ p φ_1 on F^1, injected at precision 2.
        let mut broken = tate.clone();
        broken.set(p, 0, 2, IntMatrix::scalar(1, BigInt::from(1)));
        let r = broken.validate();
        assert!(!r.valid);
        assert!(r.failures.iter().any(|w| w.p == p && w.i == 0 && w.j == 2 && w.condition.contains("p φ")), "{r:?}");
        assert!(r.failures.iter().any(|w| w.i == 0 && w.j == 1 && w.condition.contains("mod")), "{r:?}");

        let mut not_classical = Gfdm::from_split(&[0], &IntMatrix::scalar(1, BigInt::from(p)), p, 2);
        not_classical.classical = true;
        assert_eq!(not_classical.validate().classical, Some(false));
    }
}

#[test]
fn corpus_members_are_valid_cyclotomic_data() {
    for fixture in fixtures::corpus() {
        for p in [2u64, 3] {
            let m = fixture.build(p, 3).unwrap_or_else(|e| panic!("{}: {e}", fixture.name));
            assert!(m.validate().valid(), "{}", fixture.name);
            let lower = m.at_precision(2).unwrap();
            assert!(lower.validate().valid());
        }
    }
}

#[test]
fn filtered_group_json_round_trips() {
    let m = FilteredGroup::split(&[-1, 0, 2]).div(3);
    let s = serde_json::to_string(&m).unwrap();
    assert!(s.contains("\"window\":[-1,2]"));
    let back: FilteredGroup = serde_json::from_str(&s).unwrap();
    assert_eq!(back, m);
    let g = Gfdm::from_split(&[0, 1], &IntMatrix::identity(2), 3, 2);
    let s = serde_json::to_string(&g).unwrap();
    assert!(s.contains("\"phi\":{\"3\":{"));
    let back: Gfdm = serde_json::from_str(&s).unwrap();
    assert_eq!(back.phi, g.phi);
    let parsed: FilteredGroup = serde_json::from_str(r#"{"window":[0,1],"components":{"0":1,"1":1},"t":{"1":[[1]]}}"#).unwrap();
    assert_eq!((parsed.rank(-1), parsed.rank(1), parsed.rank(2)), (1, 1, 0));
    assert!(parsed.tail().is_identity());
}

#[test]
fn stabilization_needs_a_prime() {
    for p in [0, 1, 4, 6, 9] {
        assert!(FilteredGroup::pure(0, 1).stab(p).is_err(), "{p}");
        assert!(fixtures::trivial().build(p, 2).is_err(), "{p}");
    }
    assert!(check_prime(2).is_ok() && check_prime(3).is_ok() && check_prime(7).is_ok());
}
