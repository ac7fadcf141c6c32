use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;
use zlin::*;

fn m(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_rows(rows)
}

fn int_matrix(rows: usize, cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, rows * cols)
        .prop_map(move |v| IntMatrix::from_fn(rows, cols, |i, j| BigInt::from(v[i * cols + j])))
}

/// Rank over F_p by plain Gaussian elimination, independent of the Smith code.
fn rank_mod_p(a: &IntMatrix, p: i64) -> usize {
    let mut rows: Vec<Vec<i64>> = (0..a.rows())
        .map(|i| a.row(i).iter().map(|x| x.mod_floor(&BigInt::from(p)).try_into().unwrap()).collect())
        .collect();
    let mut rank = 0;
    for c in 0..a.cols() {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = (1..p).find(|x| x * rows[rank][c] % p == 1).unwrap();
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % p;
                for k in 0..a.cols() {
                    rows[r][k] = (rows[r][k] - f * rows[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn count_divisible(g: &FgAbGroup, p: i64) -> usize {
    g.torsion.iter().filter(|d| d.is_multiple_of(&BigInt::from(p))).count()
}

/// A random three-term complex `Z^c --d2--> Z^b --d1--> Z^a`.
fn random_complex() -> impl Strategy<Value = ChainComplex> {
    (1usize..4, 1usize..4, 1usize..4).prop_flat_map(|(a, b, c)| {
        (int_matrix(a, b, 4), prop::collection::vec(-3i64..=3, 16)).prop_map(move |(d1, coeffs)| {
            let k = kernel_basis(&d1);
            let mix = IntMatrix::from_fn(k.cols(), c, |i, j| BigInt::from(coeffs[(i * 4 + j) % 16]));
            let d2 = &k * &mix;
            ChainComplex::new(0, vec![a, b, c], vec![d1, d2]).unwrap()
        })
    })
}

#[test]
fn smith_small_examples() {
    assert_eq!(invariant_factors(&m(&[vec![2, 0], vec![0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
    assert_eq!(invariant_factors(&m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]])), vec![2, 6, 12].into_iter().map(BigInt::from).collect::<Vec<_>>());
    assert_eq!(rank(&m(&[vec![1, 2], vec![2, 4]])), 1);
    assert!(invariant_factors(&IntMatrix::zeros(2, 3)).is_empty());
}

#[test]
fn group_display() {
    assert_eq!(FgAbGroup::zero().to_string(), "0");
    assert_eq!(FgAbGroup::free(1).to_string(), "ℤ");
    assert_eq!(FgAbGroup::from_cyclic_orders(2, &[BigInt::from(4), BigInt::from(6)]).to_string(), "ℤ^2 ⊕ ℤ/2 ⊕ ℤ/12");
    assert_eq!(FgAbGroup::cokernel(&m(&[vec![3]])).to_string(), "ℤ/3");
}

#[test]
fn circle_homology() {
    // Simplicial circle with two vertices and two edges.
    let c = ChainComplex::new(0, vec![2, 2], vec![m(&[vec![-1, 1], vec![1, -1]])]).unwrap();
    assert_eq!(c.homology(0).unwrap(), FgAbGroup::free(1));
    assert_eq!(c.homology(1).unwrap(), FgAbGroup::free(1));
    assert!(c.homology(2).unwrap().is_zero());
}

#[test]
fn invalid_complex_is_rejected() {
    let err = ChainComplex::new(0, vec![1, 1, 1], vec![m(&[vec![1]]), m(&[vec![1]])]).unwrap_err();
    assert!(matches!(err, ZlinError::InvalidComplex(_)));
}

#[test]
fn truncated_window_refuses_edges() {
    let c = ChainComplex::new(0, vec![1, 1, 1], vec![m(&[vec![0]]), m(&[vec![0]])]).unwrap().truncated(Some(0), Some(2));
    assert_eq!(c.reliable_window(), (1, 1));
    assert!(matches!(c.homology(0), Err(ZlinError::Window { .. })));
    assert_eq!(c.homology(1).unwrap(), FgAbGroup::free(1));
}

#[test]
fn mod_reduction_of_z_and_z_mod_4() {
    let z = ChainComplex::concentrated(0, 1);
    let r = z.mod_reduction(&BigInt::from(4));
    assert_eq!(r.homology(0).unwrap(), FgAbGroup::cyclic(4));
    assert!(r.homology(1).unwrap().is_zero());
    // Z --4--> Z in degrees 1, 0 computes Z/4; reducing mod 2 gives Z/2 in degrees 0 and 1.
    let c = ChainComplex::two_term(1, m(&[vec![4]]));
    let r = c.mod_reduction(&BigInt::from(2));
    assert_eq!(r.homology(0).unwrap(), FgAbGroup::cyclic(2));
    assert_eq!(r.homology(1).unwrap(), FgAbGroup::cyclic(2));
}

#[test]
fn cone_of_identity_is_acyclic() {
    let c = ChainComplex::new(0, vec![2, 2], vec![m(&[vec![2, 0], vec![0, 0]])]).unwrap();
    let id = ChainMap::identity(&c);
    assert!(id.is_quasi_isomorphism().unwrap());
    let two = ChainMap::scalar(&c, BigInt::from(2));
    assert!(!two.is_quasi_isomorphism().unwrap());
}

#[test]
fn bad_chain_map_is_rejected() {
    let c = ChainComplex::two_term(1, m(&[vec![1]]));
    let mut maps = BTreeMap::new();
    maps.insert(1, m(&[vec![1]]));
    assert!(matches!(ChainMap::new(c.clone(), c, maps), Err(ZlinError::NotChainMap(_))));
}

#[test]
fn complex_json_round_trip() {
    let c = ChainComplex::new(-1, vec![1, 2], vec![m(&[vec![3, -5]])]).unwrap();
    let s = serde_json::to_string(&c).unwrap();
    let back: ChainComplex = serde_json::from_str(&s).unwrap();
    assert_eq!(back, c);
    let parsed: ChainComplex = serde_json::from_str(r#"{"lo":0,"hi":1,"d":{"1":[["2"]]}}"#).unwrap();
    assert_eq!(parsed.homology(0).unwrap(), FgAbGroup::cyclic(2));
}

#[test]
fn tensor_of_z_mod_2_with_itself() {
    // Künneth: Z/2 ⊗^L Z/2 has Z/2 in degrees 0 and 1.
    let c = ChainComplex::two_term(1, m(&[vec![2]]));
    let t = c.tensor(&c);
    assert_eq!(t.homology(0).unwrap(), FgAbGroup::cyclic(2));
    assert_eq!(t.homology(1).unwrap(), FgAbGroup::cyclic(2));
    assert!(t.homology(2).unwrap().is_zero());
}

proptest! {
    #[test]
    fn smith_transforms_verify(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| int_matrix(r, c, 9))) {
        let s = smith_normal_form(&a);
        prop_assert!(s.verify(&a).is_ok());
        prop_assert_eq!(s.rank(), zlin::rank(&a));
    }

    #[test]
    fn square_determinant_matches_factors(a in (1usize..5).prop_flat_map(|n| int_matrix(n, n, 6))) {
        let f = invariant_factors(&a);
        let prod: BigInt = if f.len() == a.rows() { f.iter().product() } else { BigInt::from(0) };
        let det = a.determinant();
        prop_assert_eq!(prod, if det < BigInt::from(0) { -det } else { det });
    }

    #[test]
    fn universal_coefficients_mod_p(c in random_complex(), p in prop::sample::select(vec![2i64, 3, 5])) {
        // dim H_i(C; F_p) = rank H_i + #p-torsion(H_i) + #p-torsion(H_{i-1}).
        for i in 0..=2 {
            let dim = c.rank(i) - rank_mod_p(&c.d(i), p) - rank_mod_p(&c.d(i + 1), p);
            let hi = c.homology(i).unwrap();
            let below = c.homology(i - 1).unwrap();
            prop_assert_eq!(dim, hi.rank + count_divisible(&hi, p) + count_divisible(&below, p));
        }
    }

    #[test]
    fn mod_reduction_counts_match_field_homology(c in random_complex(), p in prop::sample::select(vec![2i64, 3])) {
        let r = c.mod_reduction(&BigInt::from(p));
        for i in 0..=3 {
            let dim = c.rank(i) - rank_mod_p(&c.d(i), p) - rank_mod_p(&c.d(i + 1), p);
            let h = r.homology(i).unwrap();
            prop_assert_eq!(h.rank, 0);
            prop_assert!(h.torsion.iter().all(|d| *d == BigInt::from(p)));
            prop_assert_eq!(h.torsion.len(), dim);
        }
    }

    #[test]
    fn kunneth_over_a_field(c in random_complex(), d in random_complex()) {
        // Poincaré series over F_2 multiply under tensor product.
        let p = 2;
        let t = c.tensor(&d);
        let dims = |x: &ChainComplex, i: i64| x.rank(i) - rank_mod_p(&x.d(i), p) - rank_mod_p(&x.d(i + 1), p);
        for n in 0..=4 {
            let expected: usize = (0..=n).map(|i| dims(&c, i) * dims(&d, n - i)).sum();
            prop_assert_eq!(dims(&t, n), expected);
        }
    }

    #[test]
    fn shift_moves_homology(c in random_complex(), k in -3i64..4) {
        let s = c.shift(k);
        for i in 0..=2 {
            prop_assert_eq!(s.homology(i + k).unwrap(), c.homology(i).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn solve_recovers_a_solution(a in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| int_matrix(r, c, 5)), x in int_matrix(3, 1, 5)) {
        let x = x.submatrix(0..a.cols(), 0..1);
        let b = &a * &x;
        let sol = solve(&a, &b).expect("consistent system");
        prop_assert_eq!(&a * &sol, b);
    }
}

#[test]
fn solve_detects_inconsistency() {
    assert!(solve(&m(&[vec![2]]), &m(&[vec![3]])).is_none());
    assert!(is_saturated_basis(&m(&[vec![1], vec![2]])));
    assert!(!is_saturated_basis(&m(&[vec![2], vec![4]])));
}

proptest! {
    #[test]
    fn homology_of_direct_sum_splits(c in random_complex(), d in random_complex()) {
        let s = c.direct_sum(&d);
        for i in 0..=2 {
            prop_assert_eq!(s.homology(i).unwrap(), c.homology(i).unwrap().direct_sum(&d.homology(i).unwrap()));
        }
    }

    #[test]
    fn acyclic_cone_means_isomorphic_homology(c in random_complex(), k in prop::sample::select(vec![-1i64, 1, 2, 3])) {
        let f = ChainMap::scalar(&c, BigInt::from(k));
        if f.is_quasi_isomorphism().unwrap() {
            // Multiplication by k is then bijective on every homology group.
            for i in 0..=2 {
                let h = c.homology(i).unwrap();
                if k.abs() != 1 {
                    prop_assert_eq!(h.rank, 0);
                    prop_assert!(h.torsion.iter().all(|d| num_integer::Integer::gcd(d, &BigInt::from(k)) == BigInt::from(1)));
                }
            }
        } else {
            // A non-unit scalar must act non-invertibly on some nonzero homology group.
            prop_assert!(k.abs() != 1);
            prop_assert!((0..=2).any(|i| !c.homology(i).unwrap().is_zero()));
        }
    }
}

#[test]
fn tensor_of_two_and_three_torsion() {
    // Z/2 ⊗^L Z/3 = 0; oracle: the F_p dimensions of both factors never overlap.
    let a = ChainComplex::two_term(1, m(&[vec![2]]));
    let b = ChainComplex::two_term(1, m(&[vec![3]]));
    let t = a.tensor(&b);
    for i in 0..=2 {
        assert!(t.homology(i).unwrap().is_zero(), "degree {i}");
    }
    let unit = ChainComplex::concentrated(0, 1);
    assert_eq!(a.tensor(&unit), a);
    assert!(a.tensor(&ChainComplex::zero()).is_empty());
}
