use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::group::FgAbGroup;
use crate::matrix::IntMatrix;
use crate::snf::{invariant_factors, right_transform};
use crate::ZlinError;

/// Bounded chain complex of free abelian groups with homological grading,
/// `d_i : C_i -> C_{i-1}`.
///
/// A complex may be the finite window of a longer one. `exact_from` and
/// `exact_to` record where the stored data stops matching that longer
/// complex; `None` means the complex really is zero past that end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    lo: i64,
    ranks: Vec<usize>,
    diffs: BTreeMap<i64, IntMatrix>,
    exact_from: Option<i64>,
    exact_to: Option<i64>,
}

impl ChainComplex {
    /// Complex with terms in degrees `lo..lo+ranks.len()`; `diffs[k]` is the
    /// differential out of degree `lo + k + 1`.
    pub fn new(lo: i64, ranks: Vec<usize>, diffs: Vec<IntMatrix>) -> Result<Self, ZlinError> {
        if !ranks.is_empty() && diffs.len() + 1 != ranks.len() {
            return Err(ZlinError::InvalidComplex(format!(
                "{} terms need {} differentials, got {}",
                ranks.len(),
                ranks.len() - 1,
                diffs.len()
            )));
        }
        let map = diffs.into_iter().enumerate().map(|(k, m)| (lo + k as i64 + 1, m)).collect();
        Self::from_parts(lo, ranks, map)
    }

    pub fn from_parts(lo: i64, ranks: Vec<usize>, diffs: BTreeMap<i64, IntMatrix>) -> Result<Self, ZlinError> {
        let c = ChainComplex { lo, ranks, diffs, exact_from: None, exact_to: None };
        c.validate()?;
        Ok(c)
    }

    pub fn zero() -> Self {
        ChainComplex { lo: 0, ranks: vec![], diffs: BTreeMap::new(), exact_from: None, exact_to: None }
    }

    /// A single free group `Z^rank` in degree `deg`.
    pub fn concentrated(deg: i64, rank: usize) -> Self {
        ChainComplex { lo: deg, ranks: vec![rank], diffs: BTreeMap::new(), exact_from: None, exact_to: None }
    }

    /// `Z^n --a--> Z^m` with source in degree `deg` (so `a` is `m x n`).
    pub fn two_term(deg: i64, a: IntMatrix) -> Self {
        let (m, n) = a.shape();
        ChainComplex::new(deg - 1, vec![m, n], vec![a]).expect("two-term complex is always valid")
    }

    /// Marks the complex as a finite window `[from, to]` of a longer complex;
    /// `None` keeps that end genuinely zero.
    pub fn truncated(mut self, from: Option<i64>, to: Option<i64>) -> Self {
        self.exact_from = from;
        self.exact_to = to;
        self
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn exact_from(&self) -> Option<i64> {
        self.exact_from
    }

    pub fn exact_to(&self) -> Option<i64> {
        self.exact_to
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    /// The differential out of degree `i`; a zero matrix where nothing is stored.
    pub fn d(&self, i: i64) -> IntMatrix {
        self.diffs.get(&i).cloned().unwrap_or_else(|| IntMatrix::zeros(self.rank(i - 1), self.rank(i)))
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    /// Degrees whose homology the stored data determines.
    pub fn reliable_window(&self) -> (i64, i64) {
        (self.exact_from.map_or(i64::MIN, |a| a.saturating_add(1)), self.exact_to.map_or(i64::MAX, |b| b.saturating_sub(1)))
    }

    pub fn is_reliable(&self, i: i64) -> bool {
        let (a, b) = self.reliable_window();
        a <= i && i <= b
    }

    fn validate(&self) -> Result<(), ZlinError> {
        for (&i, m) in &self.diffs {
            if m.shape() != (self.rank(i - 1), self.rank(i)) {
                return Err(ZlinError::InvalidComplex(format!(
                    "d_{i} has shape {:?}, expected {:?}",
                    m.shape(),
                    (self.rank(i - 1), self.rank(i))
                )));
            }
        }
        for (&i, m) in &self.diffs {
            if let Some(next) = self.diffs.get(&(i - 1)) {
                if !(next * m).is_zero() {
                    return Err(ZlinError::InvalidComplex(format!("d_{} ∘ d_{i} ≠ 0", i - 1)));
                }
            }
        }
        Ok(())
    }

    /// `H_i = ker d_i / im d_{i+1}`.
    pub fn homology(&self, i: i64) -> Result<FgAbGroup, ZlinError> {
        if !self.is_reliable(i) {
            let (a, b) = self.reliable_window();
            return Err(ZlinError::Window { degree: i, lo: a, hi: b });
        }
        homology_of_pair(&self.d(i + 1), &self.d(i))
    }

    /// Homology over a degree range, all of which must be reliable.
    pub fn homology_range(&self, from: i64, to: i64) -> Result<Vec<FgAbGroup>, ZlinError> {
        (from..=to).map(|i| self.homology(i)).collect()
    }

    /// True when every reliable degree in `[from, to]` has zero homology.
    pub fn acyclic_in(&self, from: i64, to: i64) -> Result<bool, ZlinError> {
        for i in from..=to {
            if !self.homology(i)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Degrees in which the complex has stored terms and reliable homology.
    pub fn reliable_stored_degrees(&self) -> Option<(i64, i64)> {
        let (a, b) = self.reliable_window();
        let lo = a.max(self.lo - 1);
        let hi = b.min(self.hi() + 1);
        (lo <= hi).then_some((lo, hi))
    }

    /// `C[k]_i = C_{i-k}` with differential multiplied by `(-1)^k`.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let sign = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        let diffs = self.diffs.iter().map(|(&i, m)| (i + k, if sign < 0 { -m } else { m.clone() })).collect();
        ChainComplex {
            lo: self.lo + k,
            ranks: self.ranks.clone(),
            diffs,
            exact_from: self.exact_from.map(|a| a + k),
            exact_to: self.exact_to.map(|b| b + k),
        }
    }

    /// Re-indexes onto the window `[lo, hi]`, padding with zero terms.
    pub fn padded(&self, lo: i64, hi: i64) -> ChainComplex {
        let lo = lo.min(self.lo);
        let hi = hi.max(self.hi());
        let ranks = (lo..=hi).map(|i| self.rank(i)).collect();
        ChainComplex { lo, ranks, diffs: self.diffs.clone(), exact_from: self.exact_from, exact_to: self.exact_to }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let ranks: Vec<usize> = (lo..=hi).map(|i| self.rank(i) + other.rank(i)).collect();
        let diffs = (lo + 1..=hi).map(|i| (i, IntMatrix::block_diag(&[&self.d(i), &other.d(i)]))).collect();
        ChainComplex {
            lo,
            ranks,
            diffs,
            exact_from: max_opt(self.exact_from, other.exact_from),
            exact_to: min_opt(self.exact_to, other.exact_to),
        }
    }

    /// Total complex of the tensor product with Koszul signs,
    /// `d(x ⊗ y) = dx ⊗ y + (-1)^{|x|} x ⊗ dy`.
    pub fn tensor(&self, other: &ChainComplex) -> ChainComplex {
        if self.is_empty() || other.is_empty() {
            return ChainComplex::zero();
        }
        let lo = self.lo + other.lo;
        let hi = self.hi() + other.hi();
        // Blocks of degree n are ordered by the degree of the left factor.
        let blocks = |n: i64| -> Vec<(i64, usize)> {
            let mut out = Vec::new();
            let mut offset = 0;
            for i in self.lo..=self.hi() {
                let j = n - i;
                let size = self.rank(i) * other.rank(j);
                if j >= other.lo && j <= other.hi() {
                    out.push((i, offset));
                    offset += size;
                }
            }
            out
        };
        let rank_at = |n: i64| -> usize { (self.lo..=self.hi()).map(|i| self.rank(i) * other.rank(n - i)).sum() };
        let ranks: Vec<usize> = (lo..=hi).map(rank_at).collect();
        let mut diffs = BTreeMap::new();
        for n in lo + 1..=hi {
            let mut m = IntMatrix::zeros(rank_at(n - 1), rank_at(n));
            let src = blocks(n);
            let tgt: BTreeMap<i64, usize> = blocks(n - 1).into_iter().collect();
            for &(i, col0) in &src {
                let j = n - i;
                if self.rank(i) * other.rank(j) == 0 {
                    continue;
                }
                if let Some(&row0) = tgt.get(&(i - 1)) {
                    let block = self.d(i).kron(&IntMatrix::identity(other.rank(j)));
                    if block.rows() > 0 {
                        m.paste(row0, col0, &block);
                    }
                }
                if let Some(&row0) = tgt.get(&i) {
                    let mut block = IntMatrix::identity(self.rank(i)).kron(&other.d(j));
                    if i.rem_euclid(2) == 1 {
                        block = -&block;
                    }
                    if block.rows() > 0 {
                        m.paste(row0, col0, &block);
                    }
                }
            }
            diffs.insert(n, m);
        }
        let (exact_from, exact_to) = tensor_exactness(self, other);
        ChainComplex { lo, ranks, diffs, exact_from, exact_to }
    }

    /// `C ⊗^L Z/q`, realized as the cone of multiplication by `q`.
    pub fn mod_reduction(&self, q: &BigInt) -> ChainComplex {
        ChainMap::scalar(self, q.clone()).cone()
    }

    /// Structured form `{"lo", "hi", "ranks", "d": {degree: matrix}}`.
    pub fn to_wire(&self) -> ComplexWire {
        ComplexWire {
            lo: self.lo,
            hi: self.hi(),
            ranks: self.ranks.clone(),
            d: self.diffs.iter().map(|(i, m)| (i.to_string(), m.clone())).collect(),
            exact_from: self.exact_from,
            exact_to: self.exact_to,
        }
    }

    pub fn from_wire(w: &ComplexWire) -> Result<Self, ZlinError> {
        let mut diffs = BTreeMap::new();
        for (k, m) in &w.d {
            let i: i64 = k.parse().map_err(|_| ZlinError::InvalidComplex(format!("bad degree key {k:?}")))?;
            diffs.insert(i, m.clone());
        }
        let ranks = if w.ranks.is_empty() && w.hi >= w.lo {
            // Ranks omitted: read them off the differentials.
            (w.lo..=w.hi)
                .map(|i| {
                    diffs.get(&i).map(|m| m.cols()).or_else(|| diffs.get(&(i + 1)).map(|m| m.rows())).unwrap_or(0)
                })
                .collect()
        } else {
            w.ranks.clone()
        };
        let mut c = Self::from_parts(w.lo, ranks, diffs)?;
        c.exact_from = w.exact_from;
        c.exact_to = w.exact_to;
        Ok(c)
    }
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) | (None, x) => x,
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) | (None, x) => x,
    }
}

/// Where a tensor product of windows still agrees with the true tensor product.
fn tensor_exactness(c: &ChainComplex, d: &ChainComplex) -> (Option<i64>, Option<i64>) {
    let unknown_everywhere = (Some(i64::MAX / 4), Some(i64::MIN / 4));
    let mut from = None;
    let mut to = None;
    for (x, y) in [(c, d), (d, c)] {
        if let Some(a) = x.exact_from {
            // x is unknown below a: harmless only when y is bounded above.
            if y.exact_to.is_some() {
                return unknown_everywhere;
            }
            from = max_opt(from, Some(a + y.hi()));
        }
        if let Some(b) = x.exact_to {
            if y.exact_from.is_some() {
                return unknown_everywhere;
            }
            to = min_opt(to, Some(b + y.lo));
        }
    }
    (from, to)
}

/// Homology at the middle of `C_{i+1} --d_in--> C_i --d_out--> C_{i-1}`.
pub fn homology_of_pair(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<FgAbGroup, ZlinError> {
    let n = d_out.cols();
    if d_in.rows() != n {
        return Err(ZlinError::InvalidComplex(format!("adjacent differentials do not compose: {} vs {}", d_in.rows(), n)));
    }
    if d_out.rows() == 0 || d_out.is_zero() {
        return Ok(FgAbGroup::cokernel(d_in));
    }
    let (_v, v_inv, r) = right_transform(d_out);
    // Coordinates of im d_in in the kernel basis given by the last columns of v.
    let coords = &v_inv * d_in;
    for i in 0..r {
        if coords.row(i).iter().any(|x| !x.is_zero()) {
            return Err(ZlinError::InvalidComplex("d ∘ d ≠ 0".into()));
        }
    }
    let k = n - r;
    let x = coords.submatrix(r..n, 0..d_in.cols());
    let factors = invariant_factors(&x);
    Ok(FgAbGroup::from_cyclic_orders(k - factors.len(), &factors))
}

/// Integral basis of the kernel of `a` (as columns).
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let n = a.cols();
    if a.rows() == 0 || a.is_zero() {
        return IntMatrix::identity(n);
    }
    let (v, _vi, r) = right_transform(a);
    v.submatrix(0..n, r..n)
}

/// Degree-zero chain map `f_i : C_i -> D_i`.
#[derive(Clone, Debug)]
pub struct ChainMap {
    pub source: ChainComplex,
    pub target: ChainComplex,
    maps: BTreeMap<i64, IntMatrix>,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, maps: BTreeMap<i64, IntMatrix>) -> Result<Self, ZlinError> {
        let f = ChainMap { source, target, maps };
        f.validate()?;
        Ok(f)
    }

    pub fn identity(c: &ChainComplex) -> Self {
        let maps = c.degrees().map(|i| (i, IntMatrix::identity(c.rank(i)))).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn scalar(c: &ChainComplex, q: BigInt) -> Self {
        let maps = c.degrees().map(|i| (i, IntMatrix::scalar(c.rank(i), q.clone()))).collect();
        ChainMap { source: c.clone(), target: c.clone(), maps }
    }

    pub fn component(&self, i: i64) -> IntMatrix {
        self.maps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| IntMatrix::zeros(self.target.rank(i), self.source.rank(i)))
    }

    fn validate(&self) -> Result<(), ZlinError> {
        let (s, t) = (&self.source, &self.target);
        for (&i, m) in &self.maps {
            if m.shape() != (t.rank(i), s.rank(i)) {
                return Err(ZlinError::NotChainMap(format!("f_{i} has shape {:?}, expected {:?}", m.shape(), (t.rank(i), s.rank(i)))));
            }
        }
        let lo = s.lo().min(t.lo());
        let hi = s.hi().max(t.hi());
        for i in lo..=hi + 1 {
            let left = &t.d(i) * &self.component(i);
            let right = &self.component(i - 1) * &s.d(i);
            if left != right {
                return Err(ZlinError::NotChainMap(format!("square at degree {i} does not commute")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, first: &ChainMap) -> Result<ChainMap, ZlinError> {
        if first.target != self.source {
            return Err(ZlinError::NotChainMap("composition of non-composable maps".into()));
        }
        let maps = first.source.degrees().map(|i| (i, &self.component(i) * &first.component(i))).collect();
        ChainMap::new(first.source.clone(), self.target.clone(), maps)
    }

    /// Mapping cone: `Cone_i = C_{i-1} ⊕ D_i`, `d(c, x) = (-dc, f(c) + dx)`.
    pub fn cone(&self) -> ChainComplex {
        let (c, d) = (&self.source, &self.target);
        if c.is_empty() && d.is_empty() {
            return ChainComplex::zero();
        }
        let lo = (c.lo() + 1).min(d.lo());
        let hi = (c.hi() + 1).max(d.hi());
        let rank = |i: i64| c.rank(i - 1) + d.rank(i);
        let ranks = (lo..=hi).map(rank).collect();
        let mut diffs = BTreeMap::new();
        for i in lo + 1..=hi {
            let mut m = IntMatrix::zeros(rank(i - 1), rank(i));
            let (ca, ct) = (c.rank(i - 1), c.rank(i - 2));
            let neg = -&c.d(i - 1);
            if neg.rows() * neg.cols() > 0 {
                m.paste(0, 0, &neg);
            }
            let f = self.component(i - 1);
            if f.rows() * f.cols() > 0 {
                m.paste(ct, 0, &f);
            }
            let dd = d.d(i);
            if dd.rows() * dd.cols() > 0 {
                m.paste(ct, ca, &dd);
            }
            diffs.insert(i, m);
        }
        ChainComplex {
            lo,
            ranks,
            diffs,
            exact_from: max_opt(c.exact_from.map(|a| a + 1), d.exact_from),
            exact_to: min_opt(c.exact_to.map(|b| b + 1), d.exact_to),
        }
    }

    /// Quasi-isomorphism test: the cone must be acyclic in its reliable window
    /// (restricted to degrees where either complex has terms).
    pub fn is_quasi_isomorphism(&self) -> Result<bool, ZlinError> {
        let cone = self.cone();
        match cone.reliable_stored_degrees() {
            Some((a, b)) => cone.acyclic_in(a, b),
            None => Ok(true),
        }
    }
}

/// Wire format for complexes.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexWire {
    pub lo: i64,
    pub hi: i64,
    #[serde(default)]
    pub ranks: Vec<usize>,
    pub d: BTreeMap<String, IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_from: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_to: Option<i64>,
}

impl Serialize for ChainComplex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ChainComplex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = ComplexWire::deserialize(d)?;
        ChainComplex::from_wire(&w).map_err(serde::de::Error::custom)
    }
}

