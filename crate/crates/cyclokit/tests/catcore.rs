use std::collections::HashSet;

use cyclokit::catcore::*;
use proptest::prelude::*;

/// Brute-force orbit count: all monotone degree-one lifts with f(0) in a
/// wide window, identified under f -> f + k*m by explicit closure.
fn orbit_count(n: usize, m: usize, k: i64) -> usize {
    let m = m as i64;
    let mut all = Vec::new();
    let mut cur = Vec::new();
    fn rec(cur: &mut Vec<i64>, n: usize, lo: i64, hi: i64, m: i64, out: &mut Vec<Vec<i64>>) {
        if cur.len() == n {
            if cur[n - 1] <= cur[0] + m {
                out.push(cur.clone());
            }
            return;
        }
        let start = cur.last().copied().unwrap_or(lo);
        let end = if cur.is_empty() { hi } else { cur[0] + m };
        for v in start..=end {
            cur.push(v);
            rec(cur, n, lo, hi, m, out);
            cur.pop();
        }
    }
    rec(&mut cur, n, -2 * k * m, 2 * k * m, m, &mut all);
    let set: HashSet<Vec<i64>> = all.iter().cloned().collect();
    let mut seen = HashSet::new();
    let mut orbits = 0;
    for f in &all {
        if seen.contains(f) {
            continue;
        }
        orbits += 1;
        for s in -4..=4 {
            let g: Vec<i64> = f.iter().map(|x| x + s * k * m).collect();
            if set.contains(&g) {
                seen.insert(g);
            }
        }
    }
    orbits
}

#[test]
fn hom_counts_match_orbit_oracle() {
    for n in 1..=3 {
        for m in 1..=3 {
            for k in 1..=2u64 {
                assert_eq!(lambda_hom(n, m, k).len(), orbit_count(n, m, k as i64), "n={n} m={m} k={k}");
            }
        }
    }
    assert_eq!(lambda_hom(1, 3, 1).len(), 3);
    assert_eq!(lambda_hom(2, 2, 1).len(), 6);
    assert_eq!(lambda_hom(1, 1, 1), vec![CyclicMorphism::identity(1, Modulus::CYCLIC)]);
    for n in 1..=8 {
        assert_eq!(lambda_hom(1, n, 1).len(), n);
        assert_eq!(lambda_hom(n, 1, 1).len(), n);
    }
}

#[test]
fn sigma_squared_on_two_is_identity() {
    let s = CyclicMorphism::sigma(2);
    assert!(s.compose(&s).unwrap().is_identity());
    assert!(!s.is_identity());
}

#[test]
fn composition_checks_objects_and_moduli() {
    let f = &lambda_hom(2, 3, 1)[0];
    let g = &lambda_hom(2, 3, 1)[1];
    assert!(g.compose(f).is_err());
    let h = &lambda_hom(3, 2, 2)[0];
    assert!(h.compose(f).is_err());
}

#[test]
fn dual_examples() {
    for n in 1..=4 {
        let id = CyclicMorphism::identity(n, Modulus::CYCLIC);
        assert_eq!(id.dual().unwrap(), id);
        let s = CyclicMorphism::sigma(n);
        let s_inv = CyclicMorphism::rotation(n, -1, Modulus::CYCLIC);
        assert_eq!(s.dual().unwrap(), s_inv);
    }
    let f = CyclicMorphism::new(2, 3, Modulus::CYCLIC, vec![0, 1]).unwrap();
    assert_eq!(f.dual().unwrap().lift(), &[0, 1, 1]);
    // The max-formula is an involution only up to conjugation by σ.
    let ff = f.dual().unwrap().dual().unwrap();
    assert_eq!(ff.lift(), &[0, 2]);
    assert_ne!(ff, f);
    assert!(lambda_hom(2, 2, 2)[0].dual().is_err());
}

#[test]
fn dual_is_conjugation_involution_and_codual_inverts() {
    for n in 1..=4 {
        for m in 1..=4 {
            for f in lambda_hom(n, m, 1) {
                let d = f.dual().unwrap();
                assert_eq!(d.codual().unwrap(), f);
                assert_eq!(f.codual().unwrap().dual().unwrap(), f);
                let s_n = CyclicMorphism::sigma(n);
                let s_m_inv = CyclicMorphism::rotation(m, -1, Modulus::CYCLIC);
                assert_eq!(d.dual().unwrap(), s_m_inv.compose(&f).unwrap().compose(&s_n).unwrap());
            }
        }
    }
}

#[test]
fn dual_is_contravariant() {
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                for f in lambda_hom(a, b, 1) {
                    for g in lambda_hom(b, c, 1) {
                        let gf = g.compose(&f).unwrap();
                        assert_eq!(gf.dual().unwrap(), f.dual().unwrap().compose(&g.dual().unwrap()).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn lr_counts_and_factorizations() {
    assert_eq!(lr_hom(2, 1, 2).len(), 3);
    for l in 1..=5 {
        assert_eq!(lr_hom(1, 1, l).len(), 1);
    }
    for m in 1..=3 {
        for n in 1..=3 {
            assert_eq!(lr_hom(m, n, 1).len(), lambda_hom(m, n, 1).len());
            for l in 1..=3 {
                assert_eq!(lr_hom(m, n, l).len() * l, lambda_hom(m, n * l, 1).len());
            }
        }
    }
    // The degree-two endomorphism of [1].
    let f = &lr_hom(1, 1, 2)[0];
    let (v, h) = f.factorize();
    assert_eq!(v, LRMorphism::covering(1, 2));
    assert_eq!(v.compose(&h).unwrap(), *f);
    let all = all_factorizations(f);
    assert_eq!(all.iter().filter(|(v2, _)| *v2 == v).count(), 2);
    for other in &all {
        assert_eq!(relating_automorphisms(&(v.clone(), h.clone()), other).len(), 1);
    }
}

#[test]
fn cartesian_square_examples() {
    let h = LRMorphism::identity(1);
    let v = LRMorphism::covering(1, 2);
    let sq = cartesian_square(&h, &v).unwrap();
    assert_eq!(sq.apex, 2);
    assert_eq!(sq.v1, LRMorphism::covering(1, 2));
    let check = check_cartesian(&h, &v, &sq, 6, 2);
    assert!(check.commutes && check.failures.is_empty(), "{:?}", check.failures);
    assert!(check.cones_checked > 0);

    let h = LRMorphism::horizontal(lambda_hom(2, 3, 1)[4].clone());
    let sq = cartesian_square(&h, &LRMorphism::identity(3)).unwrap();
    assert_eq!((sq.apex, &sq.h1, &sq.v1), (2, &h, &LRMorphism::identity(2)));
}

#[test]
fn subdivision_examples() {
    let face = DeltaMorphism::new(1, 2, vec![0]).unwrap();
    assert_eq!(subdivide(2, &face).values, vec![0, 2]);
    let id3 = DeltaMorphism::identity(3);
    assert_eq!(subdivide(2, &id3), DeltaMorphism::identity(6));
    for f in delta_hom(2, 3) {
        assert_eq!(subdivide(1, &f), f);
        for g in delta_hom(3, 3) {
            let gf = g.compose(&f).unwrap();
            assert_eq!(subdivide(3, &gf), subdivide(3, &g).compose(&subdivide(3, &f)).unwrap());
        }
    }
}

#[test]
fn embed_and_project_are_functors() {
    let p = 2;
    for a in 1..=3 {
        assert!(CyclicMorphism::identity(a, Modulus::Finite(p)).embed(p).unwrap().is_identity());
        for b in 1..=3 {
            for c in 1..=3 {
                for f in lambda_hom(a, b, p) {
                    for g in lambda_hom(b, c, p) {
                        let gf = g.compose(&f).unwrap();
                        assert_eq!(gf.embed(p).unwrap(), g.embed(p).unwrap().compose(&f.embed(p).unwrap()).unwrap());
                        assert_eq!(gf.project(), g.project().compose(&f.project()).unwrap());
                    }
                }
            }
        }
    }
    for f in lambda_hom(1, 1, 2) {
        assert!(f.project().is_identity());
    }
    // Modulus-p maps are exactly the equivariant maps after embedding.
    for a in 1..=3 {
        for b in 1..=3 {
            let embedded: HashSet<_> = lambda_hom(a, b, 2).iter().map(|f| f.embed(2).unwrap()).collect();
            let equi: HashSet<_> = equivariant_maps(2 * a, 2 * b, 2).into_iter().collect();
            assert_eq!(embedded, equi);
        }
    }
}

#[test]
fn twt_sweep_has_no_counterexamples() {
    let r = verify_twt(2, 2, 1);
    assert!(r.equivariant_found > 0 && r.counterexamples.is_empty());
    let r = verify_twt(4, 8, 3);
    assert!(r.counterexamples.is_empty(), "{:?}", r.counterexamples);
}

#[test]
fn extended_hom_sets_match_presheaf_count() {
    for n in 1..=2 {
        for n2 in 1..=2 {
            for m in 1..=2 {
                for m2 in 1..=4 {
                    assert_eq!(lz_hom(n, m, n2, m2).len(), lz_hom_count_by_presheaves(n, m, n2, m2), "[{n}|{m}] -> [{n2}|{m2}]");
                }
            }
        }
    }
    assert_eq!(fr_hom(4), vec![(1, 4), (2, 2), (4, 1)]);
}

#[test]
fn base_change_counts() {
    for m in 1..=3 {
        for n in 1..=2 {
            for l in 1..=3 {
                let c = base_change_count(m, n, l);
                assert!(c.free_action, "{c:?}");
                assert_eq!(c.pairs, c.hom_size * c.automorphisms);
            }
        }
    }
}

#[test]
fn json_round_trip() {
    let f = CyclicMorphism::new(2, 3, Modulus::CYCLIC, vec![1, 2]).unwrap();
    let s = serde_json::to_string(&f).unwrap();
    assert_eq!(s, r#"{"src":2,"tgt":3,"mod":1,"lift":[1,2]}"#);
    assert_eq!(serde_json::from_str::<CyclicMorphism>(&s).unwrap(), f);
    let inf = CyclicMorphism::new(1, 1, Modulus::Infinite, vec![5]).unwrap();
    assert!(serde_json::to_string(&inf).unwrap().contains("\"mod\":null"));
}

fn any_cyclic(max: usize, k: u64) -> impl Strategy<Value = (CyclicMorphism, CyclicMorphism, CyclicMorphism)> {
    (1..=max, 1..=max, 1..=max, 1..=max).prop_flat_map(move |(a, b, c, d)| {
        (
            prop::sample::select(lambda_hom(a, b, k)),
            prop::sample::select(lambda_hom(b, c, k)),
            prop::sample::select(lambda_hom(c, d, k)),
        )
    })
}

proptest! {
    #[test]
    fn composition_is_associative((f, g, h) in any_cyclic(4, 3)) {
        prop_assert_eq!(h.compose(&g).unwrap().compose(&f).unwrap(), h.compose(&g.compose(&f).unwrap()).unwrap());
    }

    #[test]
    fn degrees_multiply(m in 1usize..3, n in 1usize..3, k in 1usize..3, l1 in 1usize..3, l2 in 1usize..3, i in 0usize..100, j in 0usize..100) {
        let fs = lr_hom(m, n, l1);
        let gs = lr_hom(n, k, l2);
        let (f, g) = (&fs[i % fs.len()], &gs[j % gs.len()]);
        let gf = g.compose(f).unwrap();
        prop_assert_eq!(gf.degree(), l1 * l2);
        let (v, h) = gf.factorize();
        prop_assert_eq!(v.compose(&h).unwrap(), gf);
    }
}

#[test]
fn twt_matches_composition_oracle() {
    // Small sweep re-derived with explicit compositions.
    let mut found = 0;
    for n in 2..=3 {
        for l in 1..=2 {
            let sl = CyclicMorphism::rotation(n * l, l as i64, Modulus::CYCLIC);
            for m in 1..=6 {
                for f in lambda_hom(n * l, m, 1) {
                    for l1 in 0..m {
                        let rot = CyclicMorphism::rotation(m, l1 as i64, Modulus::CYCLIC);
                        if f.compose(&sl).unwrap() == rot.compose(&f).unwrap() {
                            found += 1;
                            assert_eq!(m, n * l1);
                        }
                    }
                }
            }
        }
    }
    assert_eq!(verify_twt(3, 6, 2).equivariant_found, found);
}

#[test]
fn vertical_maps_are_the_vertical_part_of_the_hom_set() {
    for n in 1..=3 {
        for l in 1..=3 {
            let mut brute: Vec<_> = lr_hom(n * l, n, l).into_iter().filter(LRMorphism::is_vertical).collect();
            brute.sort();
            assert_eq!(vertical_maps(n, l), brute, "n={n} l={l}");
            assert_eq!(brute.len(), n);
        }
    }
}
