use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;
use crate::ZlinError;

/// Smith decomposition `u * a * v = d` with `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries of `d`, each dividing the next.
    pub diagonal: Vec<BigInt>,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Re-checks every postcondition: the factorization, unimodularity and divisibility.
    pub fn verify(&self, a: &IntMatrix) -> Result<(), ZlinError> {
        let fail = |what: &str| Err(ZlinError::SmithCheck(what.to_string()));
        if &(&self.u * a) * &self.v != self.d {
            return fail("u*a*v != d");
        }
        if !(&self.u * &self.u_inv).is_identity() || !(&self.v * &self.v_inv).is_identity() {
            return fail("transform is not unimodular");
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                let x = self.d.get(i, j);
                let expected = if i == j && i < self.diagonal.len() { self.diagonal[i].clone() } else { BigInt::zero() };
                if *x != expected {
                    return fail("d is not the recorded diagonal");
                }
            }
        }
        for w in self.diagonal.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return fail("divisibility chain broken");
            }
        }
        if self.diagonal.iter().any(|x| !x.is_positive()) {
            return fail("nonpositive invariant factor");
        }
        Ok(())
    }
}

#[derive(Clone, Copy)]
struct Track {
    left: bool,
    right: bool,
}

struct Work {
    d: IntMatrix,
    u: Option<(IntMatrix, IntMatrix)>,
    v: Option<(IntMatrix, IntMatrix)>,
}

impl Work {
    fn new(a: &IntMatrix, track: Track) -> Self {
        let (m, n) = a.shape();
        Work {
            d: a.clone(),
            u: track.left.then(|| (IntMatrix::identity(m), IntMatrix::identity(m))),
            v: track.right.then(|| (IntMatrix::identity(n), IntMatrix::identity(n))),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some((u, ui)) = &mut self.u {
            u.swap_rows(a, b);
            ui.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let Some((v, vi)) = &mut self.v {
            v.swap_cols(a, b);
            vi.swap_rows(a, b);
        }
    }

    /// row[dst] += c * row[src]
    fn row_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_row_multiple(dst, src, c);
        if let Some((u, ui)) = &mut self.u {
            u.add_row_multiple(dst, src, c);
            ui.add_col_multiple(src, dst, &-c);
        }
    }

    /// col[dst] += c * col[src]
    fn col_op(&mut self, dst: usize, src: usize, c: &BigInt) {
        self.d.add_col_multiple(dst, src, c);
        if let Some((v, vi)) = &mut self.v {
            v.add_col_multiple(dst, src, c);
            vi.add_row_multiple(src, dst, &-c);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        if let Some((u, ui)) = &mut self.u {
            u.negate_row(i);
            ui.negate_col(i);
        }
    }
}

/// Quotient rounded to nearest, so remainders satisfy |r| <= |b|/2.
fn nearest_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * BigInt::from(2);
    if twice.abs() > b.abs() {
        // r has the sign of b, so r - b is the smaller remainder.
        q + 1
    } else {
        q
    }
}

fn reduce(a: &IntMatrix, track: Track) -> Work {
    let mut w = Work::new(a, track);
    let (m, n) = a.shape();
    let mut t = 0;
    while t < m.min(n) {
        // Least-magnitude pivot keeps intermediate entries small.
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = w.d.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.d.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let pivot = w.d.get(t, t).clone();
            for i in t + 1..m {
                if !w.d.get(i, t).is_zero() {
                    let q = nearest_quotient(w.d.get(i, t), &pivot);
                    w.row_op(i, t, &-q);
                }
            }
            for j in t + 1..n {
                if !w.d.get(t, j).is_zero() {
                    let q = nearest_quotient(w.d.get(t, j), &pivot);
                    w.col_op(j, t, &-q);
                }
            }
            // A nonzero remainder is smaller than the pivot: promote it.
            let mut smaller: Option<(usize, usize)> = None;
            for i in t + 1..m {
                let x = w.d.get(i, t);
                if !x.is_zero() && smaller.is_none_or(|(a, b)| x.abs() < w.d.get(a, b).abs()) {
                    smaller = Some((i, t));
                }
            }
            for j in t + 1..n {
                let x = w.d.get(t, j);
                if !x.is_zero() && smaller.is_none_or(|(a, b)| x.abs() < w.d.get(a, b).abs()) {
                    smaller = Some((t, j));
                }
            }
            if let Some((i, j)) = smaller {
                w.swap_rows(t, i);
                w.swap_cols(t, j);
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let pivot = w.d.get(t, t).clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(w.d.get(i, j) % &pivot).is_zero()));
            match offender {
                Some(i) => w.row_op(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.d.get(t, t).is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    w
}

fn diagonal_of(d: &IntMatrix) -> Vec<BigInt> {
    let k = d.rows().min(d.cols());
    (0..k).map(|i| d.get(i, i).clone()).take_while(|x| !x.is_zero()).collect()
}

/// Full Smith normal form with both transforms and their inverses.
///
/// ```
/// use zlin::{IntMatrix, smith_normal_form};
/// let s = smith_normal_form(&IntMatrix::diagonal(&[2, 3]));
/// assert_eq!(s.d, IntMatrix::diagonal(&[1, 6]));
/// ```
pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let w = reduce(a, Track { left: true, right: true });
    let (u, u_inv) = w.u.expect("left transform tracked");
    let (v, v_inv) = w.v.expect("right transform tracked");
    let diagonal = diagonal_of(&w.d);
    let s = Smith { u, u_inv, d: w.d, v, v_inv, diagonal };
    if cfg!(debug_assertions) {
        s.verify(a).expect("Smith normal form postcondition");
    }
    s
}

/// Nonzero invariant factors only (no transforms).
pub fn invariant_factors(a: &IntMatrix) -> Vec<BigInt> {
    diagonal_of(&reduce(a, Track { left: false, right: false }).d)
}

/// Right transform `v`, its inverse and the rank; the last `cols - rank`
/// columns of `v` span the kernel of `a`.
pub(crate) fn right_transform(a: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let w = reduce(a, Track { left: false, right: true });
    let rank = diagonal_of(&w.d).len();
    let (v, vi) = w.v.expect("right transform tracked");
    (v, vi, rank)
}

pub fn rank(a: &IntMatrix) -> usize {
    invariant_factors(a).len()
}

/// An integer solution `x` of `a * x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &IntMatrix) -> Option<IntMatrix> {
    assert_eq!(a.rows(), b.rows(), "solve: row mismatch");
    let s = smith_normal_form(a);
    let ub = &s.u * b;
    let r = s.rank();
    let mut y = IntMatrix::zeros(a.cols(), b.cols());
    for j in 0..b.cols() {
        for i in 0..a.rows() {
            let v = ub.get(i, j);
            if i < r {
                let (q, rem) = v.div_mod_floor(&s.diagonal[i]);
                if !rem.is_zero() {
                    return None;
                }
                y.set(i, j, q);
            } else if !v.is_zero() {
                return None;
            }
        }
    }
    Some(&s.v * &y)
}

/// True when the columns of `a` are independent and span a saturated sublattice.
pub fn is_saturated_basis(a: &IntMatrix) -> bool {
    let f = invariant_factors(a);
    f.len() == a.cols() && f.iter().all(|x| x.is_one())
}
