//! Functors on the cyclic category evaluated wheel by wheel.
//!
//! Vertex `b` of `[n]` is the map `[1] -> [n]` with lift `b`; edge `i` is
//! the map `[n] -> [1]` whose lift jumps at `i + 1`, so it joins vertices
//! `i` and `i + 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use zlin::{ChainComplex, ChainMap, FgAbGroup, IntMatrix};

use crate::catcore::{delta_hom, lambda_hom, subdivide, CyclicMorphism, DeltaMorphism, Modulus};
use crate::error::CycloError;

/// Functions on vertices pulled back along `f: [n] -> [m]`; an `n x m` matrix.
pub fn vertex_action(f: &CyclicMorphism) -> IntMatrix {
    let (n, m) = (f.source(), f.target());
    let mut a = IntMatrix::zeros(n, m);
    for b in 0..n {
        a.set(b, f.eval(b as i64).rem_euclid(m as i64) as usize, 1);
    }
    a
}

/// Edges of `[m]` composed with `f: [n] -> [m]`; an `n x m` matrix.
pub fn edge_action(f: &CyclicMorphism) -> IntMatrix {
    let (n, m) = (f.source() as i64, f.target() as i64);
    let mut a = IntMatrix::zeros(n as usize, m as usize);
    for e in 0..m {
        let jump = e + 1;
        let g = |x: i64| (f.eval(x) - jump).div_euclid(m) + 1;
        let base = g(0);
        let c = (1..=n).find(|&x| g(x) - base == 1).expect("a degree-one map has one jump per turn");
        a.set((c - 1) as usize, e as usize, 1);
    }
    a
}

/// Coboundary from vertex functions to edges: `(Bφ)_i = φ(i+1) - φ(i)`.
pub fn coboundary(n: usize) -> IntMatrix {
    let mut b = IntMatrix::zeros(n, n);
    for i in 0..n {
        *b.entry_mut(i, (i + 1) % n) += 1;
        *b.entry_mut(i, i) -= 1;
    }
    b
}

/// Constant functions inside vertex functions.
pub fn constants(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, 1, |_, _| BigInt::one())
}

/// Sum over edges.
pub fn edge_sum(n: usize) -> IntMatrix {
    IntMatrix::from_fn(1, n, |_, _| BigInt::one())
}

/// Edges to vertex functions through `Z`: the composite of the sum and the constants.
pub fn edge_to_vertex(n: usize) -> IntMatrix {
    &constants(n) * &edge_sum(n)
}

/// `0 -> Z -> vertex functions -> edges -> Z -> 0` at `[n]`, in degrees 3..0.
pub fn four_term_complex(n: usize) -> ChainComplex {
    ChainComplex::new(0, vec![1, n, n, 1], vec![edge_sum(n), coboundary(n), constants(n)]).expect("cellular complex of the wheel")
}

/// The four-term sequence on wheels `[1..=n_max]` with its functoriality checked.
#[derive(Clone, Debug, Serialize)]
pub struct WheelCochainPair {
    pub n_max: usize,
    pub exact: BTreeMap<usize, bool>,
    pub naturality_failures: Vec<String>,
    pub morphisms_checked: usize,
}

impl WheelCochainPair {
    pub fn is_valid(&self) -> bool {
        self.exact.values().all(|&e| e) && self.naturality_failures.is_empty()
    }
}

pub fn build_wheel_functors(n_max: usize) -> Result<WheelCochainPair, CycloError> {
    let mut exact = BTreeMap::new();
    for n in 1..=n_max {
        let c = four_term_complex(n);
        exact.insert(n, c.acyclic_in(-1, 4)?);
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    for n in 1..=n_max {
        for m in 1..=n_max {
            for f in lambda_hom(n, m, 1) {
                checked += 1;
                failures.extend(naturality_failure(&f));
            }
        }
    }
    Ok(WheelCochainPair { n_max, exact, naturality_failures: failures, morphisms_checked: checked })
}

fn naturality_failure(f: &CyclicMorphism) -> Option<String> {
    let (n, m) = (f.source(), f.target());
    let (v, e) = (vertex_action(f), edge_action(f));
    let ok = &v * &constants(m) == constants(n)
        && &e * &coboundary(m) == &coboundary(n) * &v
        && &edge_sum(n) * &e == edge_sum(m);
    (!ok).then(|| format!("square fails for {f}"))
}

/// Functoriality of the vertex and edge actions on composable pairs.
pub fn check_functoriality(n_max: usize) -> Vec<String> {
    let mut out = Vec::new();
    for a in 1..=n_max {
        for b in 1..=n_max {
            for c in 1..=n_max {
                for f in lambda_hom(a, b, 1) {
                    for g in lambda_hom(b, c, 1) {
                        let gf = g.compose(&f).unwrap();
                        if vertex_action(&gf) != &vertex_action(&f) * &vertex_action(&g) || edge_action(&gf) != &edge_action(&f) * &edge_action(&g) {
                            out.push(format!("{g} ∘ {f}"));
                        }
                    }
                }
            }
        }
    }
    out
}

/// A functor on the opposite of the cyclic category presented by its
/// operators. Size `n` carries faces `d_0..d_{n-1}` to size `n - 1`,
/// degeneracies `s_0..s_{n-1}` to size `n + 1` and `t` of order `n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CyclicModule {
    pub max_size: usize,
    pub ranks: Vec<usize>,
    pub faces: BTreeMap<usize, Vec<IntMatrix>>,
    pub degeneracies: BTreeMap<usize, Vec<IntMatrix>>,
    pub cyclic: BTreeMap<usize, IntMatrix>,
}

impl CyclicModule {
    pub fn rank(&self, n: usize) -> usize {
        self.ranks[n - 1]
    }

    /// The constant functor `Z^r`.
    pub fn constant(max_size: usize, r: usize) -> Self {
        Self::from_functor(max_size, |_f| IntMatrix::identity(r), |_| r)
    }

    pub fn zero(max_size: usize) -> Self {
        Self::constant(max_size, 0)
    }

    /// Operators read off a contravariant functor given by its action on maps.
    pub fn from_functor(max_size: usize, action: impl Fn(&CyclicMorphism) -> IntMatrix, rank: impl Fn(usize) -> usize) -> Self {
        let c = Modulus::CYCLIC;
        let mut faces = BTreeMap::new();
        let mut degeneracies = BTreeMap::new();
        let mut cyclic = BTreeMap::new();
        for n in 1..=max_size {
            if n >= 2 {
                let ds = (0..n as i64)
                    .map(|i| {
                        let lift = (0..n as i64 - 1).map(|x| if x < i { x } else { x + 1 }).collect();
                        action(&CyclicMorphism::new(n - 1, n, c, lift).unwrap())
                    })
                    .collect();
                faces.insert(n, ds);
            }
            if n < max_size {
                let ss = (0..n as i64)
                    .map(|i| {
                        let lift = (0..n as i64 + 1).map(|x| if x <= i { x } else { x - 1 }).collect();
                        action(&CyclicMorphism::new(n + 1, n, c, lift).unwrap())
                    })
                    .collect();
                degeneracies.insert(n, ss);
            }
            cyclic.insert(n, action(&CyclicMorphism::rotation(n, -1, c)));
        }
        CyclicModule { max_size, ranks: (1..=max_size).map(rank).collect(), faces, degeneracies, cyclic }
    }

    fn d(&self, n: usize, i: usize) -> &IntMatrix {
        &self.faces[&n][i]
    }

    fn s(&self, n: usize, i: usize) -> &IntMatrix {
        &self.degeneracies[&n][i]
    }

    fn t(&self, n: usize) -> &IntMatrix {
        &self.cyclic[&n]
    }

    /// Every simplicial and cyclic identity as a matrix equation.
    pub fn validate(&self) -> Result<(), CycloError> {
        let fail = |what: String| Err(CycloError::InvalidModule(what));
        if self.ranks.len() != self.max_size {
            return fail("rank list has the wrong length".into());
        }
        for n in 1..=self.max_size {
            let q = n - 1;
            let id = IntMatrix::identity(self.rank(n));
            let t = self.t(n);
            if t.shape() != (self.rank(n), self.rank(n)) {
                return fail(format!("t at size {n} has the wrong shape"));
            }
            let mut power = id.clone();
            for _ in 0..n {
                power = &power * t;
            }
            if power != id {
                return fail(format!("t^{n} ≠ 1 at size {n}"));
            }
            if n >= 2 {
                for i in 0..=q {
                    if self.d(n, i).shape() != (self.rank(n - 1), self.rank(n)) {
                        return fail(format!("d_{i} at size {n} has the wrong shape"));
                    }
                }
                for j in 0..=q {
                    for i in 0..j {
                        if n >= 3 && self.d(n - 1, i) * self.d(n, j) != self.d(n - 1, j - 1) * self.d(n, i) {
                            return fail(format!("d_{i} d_{j} ≠ d_{} d_{i} at size {n}", j - 1));
                        }
                    }
                }
                for i in 1..=q {
                    if self.d(n, i) * t != self.t(n - 1) * self.d(n, i - 1) {
                        return fail(format!("d_{i} t ≠ t d_{} at size {n}", i - 1));
                    }
                }
                if self.d(n, 0) * t != *self.d(n, q) {
                    return fail(format!("d_0 t ≠ d_{q} at size {n}"));
                }
            }
            if n < self.max_size {
                for i in 0..=q {
                    if self.s(n, i).shape() != (self.rank(n + 1), self.rank(n)) {
                        return fail(format!("s_{i} at size {n} has the wrong shape"));
                    }
                }
                let tn1 = self.t(n + 1);
                for i in 1..=q {
                    if self.s(n, i) * t != tn1 * self.s(n, i - 1) {
                        return fail(format!("s_{i} t ≠ t s_{} at size {n}", i - 1));
                    }
                }
                if self.s(n, 0) * t != &(tn1 * tn1) * self.s(n, q) {
                    return fail(format!("s_0 t ≠ t² s_{q} at size {n}"));
                }
                for j in 0..=q {
                    for i in 0..=j {
                        if n + 1 < self.max_size && self.s(n + 1, i) * self.s(n, j) != self.s(n + 1, j + 1) * self.s(n, i) {
                            return fail(format!("s_{i} s_{j} relation at size {n}"));
                        }
                    }
                    // Faces of size n + 1 after degeneracies of size n.
                    for i in 0..=q + 1 {
                        let lhs = self.d(n + 1, i) * self.s(n, j);
                        let rhs = if i < j {
                            self.s(n - 1, j - 1) * self.d(n, i)
                        } else if i == j || i == j + 1 {
                            id.clone()
                        } else {
                            self.s(n - 1, j) * self.d(n, i - 1)
                        };
                        if lhs != rhs {
                            return fail(format!("d_{i} s_{j} relation at size {n}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn signed_t(&self, n: usize) -> IntMatrix {
        // Degree q = n - 1 carries the sign (-1)^q.
        if (n - 1) % 2 == 1 {
            -self.t(n)
        } else {
            self.t(n).clone()
        }
    }

    fn b(&self, n: usize, prime: bool) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rank(n - 1), self.rank(n));
        let top = if prime { n - 1 } else { n };
        for i in 0..top {
            let d = self.d(n, i);
            out = if i % 2 == 0 { &out + d } else { &out - d };
        }
        out
    }

    /// Total complex of the cyclic bicomplex in degrees `0..=top`, with the
    /// top degree marked as a truncation.
    pub fn cyclic_bicomplex(&self, top: usize) -> Result<ChainComplex, CycloError> {
        if top + 1 > self.max_size {
            return Err(CycloError::Window(format!("degree {top} needs sizes up to {}, module stops at {}", top + 1, self.max_size)));
        }
        // Column p, row q sits at size q + 1; blocks of a total degree ordered by p.
        let rank_at = |deg: usize| -> usize { (0..=deg).map(|p| self.rank(deg - p + 1)).sum() };
        let offset = |deg: usize, p: usize| -> usize { (0..p).map(|pp| self.rank(deg - pp + 1)).sum() };
        let ranks: Vec<usize> = (0..=top).map(rank_at).collect();
        let mut diffs = Vec::new();
        for deg in 1..=top {
            let mut m = IntMatrix::zeros(rank_at(deg - 1), rank_at(deg));
            for p in 0..=deg {
                let q = deg - p;
                let n = q + 1;
                let col = offset(deg, p);
                if q >= 1 {
                    let v = if p % 2 == 0 { self.b(n, false) } else { -&self.b(n, true) };
                    if v.rows() * v.cols() > 0 {
                        m.paste(offset(deg - 1, p), col, &v);
                    }
                }
                if p >= 1 {
                    let tau = self.signed_t(n);
                    let h = if p % 2 == 1 {
                        &IntMatrix::identity(self.rank(n)) - &tau
                    } else {
                        let mut norm = IntMatrix::zeros(self.rank(n), self.rank(n));
                        let mut pw = IntMatrix::identity(self.rank(n));
                        for _ in 0..n {
                            norm = &norm + &pw;
                            pw = &pw * &tau;
                        }
                        norm
                    };
                    if h.rows() * h.cols() > 0 {
                        m.paste(offset(deg - 1, p - 1), col, &h);
                    }
                }
            }
            diffs.push(m);
        }
        Ok(ChainComplex::new(0, ranks, diffs)?.truncated(None, Some(top as i64)))
    }

    /// Connes' periodicity map: forget the first two columns.
    pub fn periodicity_map(&self, top: usize) -> Result<ChainMap, CycloError> {
        let tot = self.cyclic_bicomplex(top)?;
        let target = tot.shift(2);
        let mut maps = BTreeMap::new();
        for deg in 2..=top {
            let mut m = IntMatrix::zeros(target.rank(deg as i64), tot.rank(deg as i64));
            let mut src_off = 0;
            let mut tgt_off = 0;
            for p in 0..=deg {
                let r = self.rank(deg - p + 1);
                if p >= 2 {
                    m.paste(tgt_off, src_off, &IntMatrix::identity(r));
                    tgt_off += r;
                }
                src_off += r;
            }
            maps.insert(deg as i64, m);
        }
        Ok(ChainMap::new(tot, target, maps)?)
    }
}

/// `HC_0 .. HC_degree_max`.
pub fn cyclic_homology(m: &CyclicModule, degree_max: usize) -> Result<Vec<FgAbGroup>, CycloError> {
    m.validate()?;
    let tot = m.cyclic_bicomplex(degree_max + 1)?;
    Ok(tot.homology_range(0, degree_max as i64)?)
}

/// A covariant functor on finite ordinals, evaluated lazily.
pub trait Cosimplicial {
    fn rank(&self, size: usize) -> usize;
    fn map(&self, f: &DeltaMorphism) -> IntMatrix;
    fn name(&self) -> String;
}

/// Cochain complex `C^q = M([q+1])` with alternating coface sums, for
/// `q <= top`, returned in homological grading (`C^q` in degree `-q`).
pub fn cochain_complex(m: &dyn Cosimplicial, top: usize) -> Result<ChainComplex, CycloError> {
    cochains_via(m, top, |f| f.clone(), |s| s)
}

/// Cochains of the pulled-back functor `M ∘ r_p`.
pub fn subdivided_cochain_complex(m: &dyn Cosimplicial, p: usize, top: usize) -> Result<ChainComplex, CycloError> {
    cochains_via(m, top, |f| subdivide(p, f), |s| p * s)
}

fn cochains_via(m: &dyn Cosimplicial, top: usize, along: impl Fn(&DeltaMorphism) -> DeltaMorphism, size: impl Fn(usize) -> usize) -> Result<ChainComplex, CycloError> {
    let ranks: Vec<usize> = (0..=top).rev().map(|q| m.rank(size(q + 1))).collect();
    let mut diffs = Vec::new();
    // Homological degree -q for q = top..0; d out of degree -q+1 is the coboundary C^{q-1} -> C^q.
    for q in (1..=top).rev() {
        let mut d = IntMatrix::zeros(m.rank(size(q + 1)), m.rank(size(q)));
        for i in 0..=q {
            let values = (0..q).map(|x| if x < i { x } else { x + 1 }).collect();
            let coface = DeltaMorphism::new(q, q + 1, values)?;
            let piece = m.map(&along(&coface));
            d = if i % 2 == 0 { &d + &piece } else { &d - &piece };
        }
        diffs.push(d);
    }
    let lo = -(top as i64);
    Ok(ChainComplex::new(lo, ranks, diffs)?.truncated(Some(lo), None))
}

/// Constant functor `Z`.
pub struct ConstantCosimplicial;

impl Cosimplicial for ConstantCosimplicial {
    fn rank(&self, _size: usize) -> usize {
        1
    }
    fn map(&self, _f: &DeltaMorphism) -> IntMatrix {
        IntMatrix::identity(1)
    }
    fn name(&self) -> String {
        "constant".into()
    }
}

/// Cochains on a finite poset's nerve with coefficients in a functor on
/// the poset; a simplex of size `k` is a chain `x_0 <= ... <= x_{k-1}` and a
/// cochain takes values in the coefficient group at its last vertex.
#[derive(Clone, Debug)]
pub struct PosetCochains {
    /// `leq[x][y]` for `x <= y`.
    pub leq: Vec<Vec<bool>>,
    pub coeff_rank: usize,
    /// Coefficient maps `A(x) -> A(y)` for every `x <= y`.
    pub coeff: BTreeMap<(usize, usize), IntMatrix>,
}

impl PosetCochains {
    fn chains(&self, k: usize) -> Vec<Vec<usize>> {
        let n = self.leq.len();
        let mut out: Vec<Vec<usize>> = (0..n).map(|x| vec![x]).collect();
        for _ in 1..k {
            out = out
                .into_iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    (0..n).filter(move |&y| self.leq[last][y]).map(move |y| {
                        let mut c2 = c.clone();
                        c2.push(y);
                        c2
                    })
                })
                .collect();
        }
        out
    }

    /// A random poset on at most three points with random compatible coefficients.
    pub fn random(rng: &mut impl rand::Rng, max_points: usize, coeff_rank: usize) -> Self {
        let n = rng.gen_range(1..=max_points);
        // Random order compatible with the index order, closed transitively.
        let mut leq = vec![vec![false; n]; n];
        for (x, row) in leq.iter_mut().enumerate() {
            row[x] = true;
        }
        for x in 0..n {
            for y in x + 1..n {
                leq[x][y] = rng.gen_bool(0.6);
            }
        }
        for k in 0..n {
            for x in 0..n {
                for y in 0..n {
                    if leq[x][k] && leq[k][y] {
                        leq[x][y] = true;
                    }
                }
            }
        }
        // Coefficient maps chosen on covering relations and composed.
        let mut coeff = BTreeMap::new();
        for x in 0..n {
            coeff.insert((x, x), IntMatrix::identity(coeff_rank));
        }
        for gap in 1..n {
            for x in 0..n - gap {
                let y = x + gap;
                if !leq[x][y] {
                    continue;
                }
                let via = (x + 1..y).find(|&z| leq[x][z] && leq[z][y]);
                let m = match via {
                    Some(z) => &coeff[&(z, y)] * &coeff[&(x, z)],
                    None => IntMatrix::from_fn(coeff_rank, coeff_rank, |_, _| BigInt::from(rng.gen_range(-2..=2))),
                };
                coeff.insert((x, y), m);
            }
        }
        PosetCochains { leq, coeff_rank, coeff }
    }
}

impl Cosimplicial for PosetCochains {
    fn rank(&self, size: usize) -> usize {
        self.chains(size).len() * self.coeff_rank
    }

    fn map(&self, f: &DeltaMorphism) -> IntMatrix {
        let src = self.chains(f.source);
        let tgt = self.chains(f.target);
        let index: BTreeMap<&Vec<usize>, usize> = src.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let r = self.coeff_rank;
        let mut out = IntMatrix::zeros(tgt.len() * r, src.len() * r);
        for (j, c) in tgt.iter().enumerate() {
            let restricted: Vec<usize> = f.values.iter().map(|&v| c[v]).collect();
            let i = index[&restricted];
            let from = *restricted.last().unwrap();
            let to = *c.last().unwrap();
            out.paste(j * r, i * r, &self.coeff[&(from, to)]);
        }
        out
    }

    fn name(&self) -> String {
        format!("poset cochains on {} points, coefficients of rank {}", self.leq.len(), self.coeff_rank)
    }
}

/// Cochains on the simplicial circle: simplices of size `k` are the
/// `k + 1` monotone maps `[k] -> [2]`, with the two constant ones glued.
pub struct CircleCochains;

impl CircleCochains {
    fn simplices(k: usize) -> Vec<Option<usize>> {
        // None is the glued basepoint; Some(c) is the map jumping at position c in 1..k.
        std::iter::once(None).chain((1..k).map(Some)).collect()
    }
}

impl Cosimplicial for CircleCochains {
    fn rank(&self, size: usize) -> usize {
        size
    }

    fn map(&self, f: &DeltaMorphism) -> IntMatrix {
        let tgt = Self::simplices(f.target);
        let mut out = IntMatrix::zeros(f.target, f.source);
        for (j, s) in tgt.iter().enumerate() {
            // Restrict along f: the composite jumps where f crosses the jump.
            let restricted = match s {
                None => None,
                Some(c) => {
                    let first = f.values.iter().position(|&v| v >= *c);
                    match first {
                        Some(0) | None => None,
                        Some(x) => Some(x),
                    }
                }
            };
            out.set(j, restricted.unwrap_or(0), 1);
        }
        out
    }

    fn name(&self) -> String {
        "simplicial circle".into()
    }
}

/// Cohomology of `M` and of `M ∘ r_p` in degrees `< depth`.
#[derive(Clone, Debug, Serialize)]
pub struct SubdivisionReport {
    pub module: String,
    pub p: usize,
    pub direct: Vec<FgAbGroup>,
    pub subdivided: Vec<FgAbGroup>,
    pub equal: bool,
}

pub fn subdivision_invariance_check(p: usize, m: &dyn Cosimplicial, depth: usize) -> Result<SubdivisionReport, CycloError> {
    let direct = cochain_complex(m, depth)?;
    let sub = subdivided_cochain_complex(m, p, depth)?;
    let read = |c: &ChainComplex| -> Result<Vec<FgAbGroup>, CycloError> { (0..depth as i64).map(|q| Ok(c.homology(-q)?)).collect() };
    let (a, b) = (read(&direct)?, read(&sub)?);
    Ok(SubdivisionReport { module: m.name(), p, equal: a == b, direct: a, subdivided: b })
}

/// All cofaces and codegeneracies up to `size` satisfy functoriality for `m`.
pub fn check_cosimplicial(m: &dyn Cosimplicial, size: usize) -> Vec<String> {
    let mut out = Vec::new();
    for a in 1..=size {
        for b in 1..=size {
            for f in delta_hom(a, b) {
                for c in 1..=size {
                    for g in delta_hom(b, c) {
                        if m.map(&g.compose(&f).unwrap()) != &m.map(&g) * &m.map(&f) {
                            out.push(format!("{:?} ∘ {:?}", g.values, f.values));
                        }
                    }
                }
            }
        }
    }
    out
}

/// `ker(1 - t)` and `coker(1 - t)` on `M = coker(relations)`, derived, and
/// optionally reduced mod `modulus`.
#[derive(Clone, Debug, Serialize)]
pub struct MonoidCohomology {
    pub h0: FgAbGroup,
    pub h1: FgAbGroup,
}

pub fn monoid_cohomology(relations: &IntMatrix, t: &IntMatrix, modulus: Option<&BigInt>) -> Result<MonoidCohomology, CycloError> {
    let b = relations.rows();
    if t.shape() != (b, b) {
        return Err(CycloError::Input(format!("t must be {b} x {b}")));
    }
    // Replace the relations by an independent generating set of their span.
    let s = zlin::smith_normal_form(relations);
    let r = s.rank();
    let basis = (&s.u_inv * &s.d).submatrix(0..b, 0..r);
    let lifted = zlin::solve(&basis, &(t * &basis)).ok_or_else(|| CycloError::Input("t does not preserve the relations".into()))?;
    let res = ChainComplex::new(0, vec![b, r], vec![basis.clone()])?;
    let mut maps = BTreeMap::new();
    maps.insert(0, &IntMatrix::identity(b) - t);
    maps.insert(1, &IntMatrix::identity(r) - &lifted);
    let f = ChainMap::new(res.clone(), res, maps)?;
    let mut cone = f.cone();
    if let Some(q) = modulus {
        cone = cone.mod_reduction(q);
    }
    Ok(MonoidCohomology { h0: cone.homology(1)?, h1: cone.homology(0)? })
}

/// One square of the covering diagram that fails, or the count of checks.
#[derive(Clone, Debug, Serialize)]
pub struct CoveringReport {
    pub n: usize,
    pub object_bound: usize,
    pub squares_checked: usize,
    pub failures: Vec<String>,
}

/// Periodic pullback of vertex functions along `[nm] -> [m]`.
pub fn covering_vertex_map(n: usize, m: usize) -> IntMatrix {
    IntMatrix::from_fn(n * m, m, |b, a| if b % m == a { BigInt::one() } else { BigInt::zero() })
}

/// Orbit sums: edge `i` of `[m]` goes to the `n` edges of `[nm]` over it.
pub fn covering_edge_map(n: usize, m: usize) -> IntMatrix {
    covering_vertex_map(n, m)
}

/// Chain-level comparison of the four-term sequence pulled back along the
/// covering and along the embedding of modulus-`n` maps: columns `1`,
/// vertex pullback, edge orbit sums, `n`.
pub fn nti_diagram_check(n: usize, object_bound: usize) -> CoveringReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    let nid = IntMatrix::scalar(1, n as i64);
    for m in 1..=object_bound {
        let (v, e) = (covering_vertex_map(n, m), covering_edge_map(n, m));
        let squares = [
            ("constants", &constants(n * m) * &IntMatrix::identity(1), &v * &constants(m)),
            ("coboundary", &coboundary(n * m) * &v, &e * &coboundary(m)),
            ("sum", &edge_sum(n * m) * &e, &nid * &edge_sum(m)),
        ];
        for (name, lhs, rhs) in squares {
            checked += 1;
            if lhs != rhs {
                failures.push(format!("{name} square at [{m}]"));
            }
        }
        for m2 in 1..=object_bound {
            for f in lambda_hom(m, m2, n as u64) {
                let (fi, fp) = (f.embed(n as u64).unwrap(), f.project());
                let (v2, e2) = (covering_vertex_map(n, m2), covering_edge_map(n, m2));
                checked += 2;
                if &v * &vertex_action(&fp) != &vertex_action(&fi) * &v2 {
                    failures.push(format!("vertex naturality for {f}"));
                }
                if &e * &edge_action(&fp) != &edge_action(&fi) * &e2 {
                    failures.push(format!("edge naturality for {f}"));
                }
            }
        }
    }
    CoveringReport { n, object_bound, squares_checked: checked, failures }
}
