//! Filtered abelian groups through their Rees presentations, periodic
//! filtered complexes, and their cyclic expansion over the wheels.
//!
//! A filtered group is stored as graded free components `M_k` (`F^k`) with
//! structure maps `t_k: M_k -> M_{k-1}` on a finite window `[lo, hi]`. Below
//! the window every component equals `M_lo` and `t` is `tail`; above it the
//! components vanish, or repeat `M_hi` with `t = head` when `head` is set.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use zlin::{ChainComplex, ChainMap, FgAbGroup, IntMatrix};

use crate::catcore::{lambda_hom, CyclicMorphism, Modulus};
use crate::cychom::{coboundary, constants, covering_edge_map, covering_vertex_map, edge_action, edge_sum, edge_to_vertex, vertex_action};
use crate::error::CycloError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FilteredGroupWire", into = "FilteredGroupWire")]
pub struct FilteredGroup {
    lo: i64,
    ranks: Vec<usize>,
    t: Vec<IntMatrix>,
    tail: IntMatrix,
    head: Option<IntMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FilteredGroupWire {
    window: [i64; 2],
    components: BTreeMap<String, usize>,
    #[serde(default)]
    t: BTreeMap<String, IntMatrix>,
    #[serde(default)]
    tail: Option<IntMatrix>,
    #[serde(default)]
    head: Option<IntMatrix>,
}

impl TryFrom<FilteredGroupWire> for FilteredGroup {
    type Error = CycloError;

    fn try_from(w: FilteredGroupWire) -> Result<Self, CycloError> {
        let [lo, hi] = w.window;
        if hi < lo {
            return Err(CycloError::Input(format!("empty window [{lo}, {hi}]")));
        }
        let key = |k: i64| k.to_string();
        let ranks: Vec<usize> = (lo..=hi).map(|k| w.components.get(&key(k)).copied().unwrap_or(0)).collect();
        let mut t = Vec::new();
        for k in lo + 1..=hi {
            let m = match w.t.get(&key(k)) {
                Some(m) => m.clone(),
                None => IntMatrix::zeros(ranks[(k - 1 - lo) as usize], ranks[(k - lo) as usize]),
            };
            t.push(m);
        }
        let tail = w.tail.unwrap_or_else(|| IntMatrix::identity(ranks[0]));
        let mut g = FilteredGroup::new(lo, ranks, t, tail)?;
        if let Some(h) = w.head {
            g = g.with_head(h)?;
        }
        Ok(g)
    }
}

impl From<FilteredGroup> for FilteredGroupWire {
    fn from(g: FilteredGroup) -> Self {
        FilteredGroupWire {
            window: [g.lo, g.hi()],
            components: (g.lo..=g.hi()).map(|k| (k.to_string(), g.rank(k))).collect(),
            t: (g.lo + 1..=g.hi()).map(|k| (k.to_string(), g.t(k))).collect(),
            tail: Some(g.tail.clone()),
            head: g.head.clone(),
        }
    }
}

impl FilteredGroup {
    pub fn new(lo: i64, ranks: Vec<usize>, t: Vec<IntMatrix>, tail: IntMatrix) -> Result<Self, CycloError> {
        if ranks.is_empty() || t.len() + 1 != ranks.len() {
            return Err(CycloError::Input("a window needs one structure map per step".into()));
        }
        for (k, m) in t.iter().enumerate() {
            if m.shape() != (ranks[k], ranks[k + 1]) {
                return Err(CycloError::Input(format!("t_{} has shape {:?}", lo + k as i64 + 1, m.shape())));
            }
        }
        if tail.shape() != (ranks[0], ranks[0]) {
            return Err(CycloError::Input("tail map must be square on the bottom component".into()));
        }
        Ok(FilteredGroup { lo, ranks, t, tail, head: None })
    }

    /// Components above the window repeat the top one with structure map `h`.
    pub fn with_head(mut self, h: IntMatrix) -> Result<Self, CycloError> {
        let r = *self.ranks.last().unwrap();
        if h.shape() != (r, r) {
            return Err(CycloError::Input("head map must be square on the top component".into()));
        }
        self.head = Some(h);
        Ok(self)
    }

    pub fn zero() -> Self {
        FilteredGroup::pure(0, 0)
    }

    /// `Z^rank` with `F^weight` everything and `F^{weight+1} = 0`.
    pub fn pure(weight: i64, rank: usize) -> Self {
        FilteredGroup { lo: weight, ranks: vec![rank], t: vec![], tail: IntMatrix::identity(rank), head: None }
    }

    /// `Z^r` with basis vector `e_a` spanning a summand of weight `weights[a]`.
    pub fn split(weights: &[i64]) -> Self {
        if weights.is_empty() {
            return Self::zero();
        }
        let lo = *weights.iter().min().unwrap();
        let hi = *weights.iter().max().unwrap();
        let ranks = (lo..=hi).map(|k| split_basis(weights, k).len()).collect();
        let t = (lo + 1..=hi).map(|k| selection(&split_basis(weights, k - 1), &split_basis(weights, k))).collect();
        FilteredGroup::new(lo, ranks, t, IntMatrix::identity(weights.len())).expect("split filtration is consistent")
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn tail(&self) -> &IntMatrix {
        &self.tail
    }

    pub fn head(&self) -> Option<&IntMatrix> {
        self.head.as_ref()
    }

    pub fn rank(&self, k: i64) -> usize {
        if k < self.lo {
            self.ranks[0]
        } else if k > self.hi() {
            if self.head.is_some() {
                *self.ranks.last().unwrap()
            } else {
                0
            }
        } else {
            self.ranks[(k - self.lo) as usize]
        }
    }

    /// `t_k: M_k -> M_{k-1}`.
    pub fn t(&self, k: i64) -> IntMatrix {
        if k <= self.lo {
            self.tail.clone()
        } else if k > self.hi() {
            match &self.head {
                Some(h) => h.clone(),
                None => IntMatrix::zeros(self.rank(k - 1), 0),
            }
        } else {
            self.t[(k - self.lo - 1) as usize].clone()
        }
    }

    /// Rank of the underlying group, read in the constant bottom region.
    pub fn underlying_rank(&self) -> usize {
        self.ranks[0]
    }

    /// `M(i)`: `F^k M(i) = F^{k-i} M`.
    pub fn twist(&self, i: i64) -> Self {
        FilteredGroup { lo: self.lo + i, ..self.clone() }
    }

    /// Rescales every structure map by `n`.
    pub fn div(&self, n: u64) -> Self {
        let c = BigInt::from(n);
        FilteredGroup {
            lo: self.lo,
            ranks: self.ranks.clone(),
            t: self.t.iter().map(|m| m.scaled(&c)).collect(),
            tail: self.tail.scaled(&c),
            head: self.head.as_ref().map(|h| h.scaled(&c)),
        }
    }

    /// Every component is the underlying group and `t` acts by `p`; this is
    /// the colimit of the subdivisions of the twists, before completion.
    pub fn stab(&self, p: u64) -> Result<Self, CycloError> {
        check_prime(p)?;
        if !self.tail.is_identity() {
            return Err(CycloError::Torsion("stabilization needs a free group with identity structure map below the window".into()));
        }
        let r = self.underlying_rank();
        let pm = IntMatrix::scalar(r, p);
        Ok(FilteredGroup { lo: 0, ranks: vec![r], t: vec![], tail: pm.clone(), head: Some(pm) })
    }

    /// `gr^k` as the two-term complex `M_{k+1} --t--> M_k` in degrees 1, 0.
    pub fn gr(&self, k: i64) -> ChainComplex {
        ChainComplex::two_term(1, self.t(k + 1))
    }

    /// `H_0` and `H_1` of `gr^k`.
    pub fn gr_groups(&self, k: i64) -> (FgAbGroup, FgAbGroup) {
        let g = self.gr(k);
        (g.homology(0).unwrap(), g.homology(1).unwrap())
    }

    /// `M_k -> M_bottom` through the structure maps, for `bottom <= k`.
    pub fn transport(&self, k: i64, bottom: i64) -> IntMatrix {
        let mut m = IntMatrix::identity(self.rank(k));
        for j in (bottom + 1..=k).rev() {
            m = &self.t(j) * &m;
        }
        m
    }
}

fn split_basis(weights: &[i64], k: i64) -> Vec<usize> {
    (0..weights.len()).filter(|&a| weights[a] >= k).collect()
}

/// Inclusion of the coordinate subset `inner` into `outer`.
fn selection(outer: &[usize], inner: &[usize]) -> IntMatrix {
    IntMatrix::from_fn(outer.len(), inner.len(), |r, c| if outer[r] == inner[c] { BigInt::one() } else { BigInt::zero() })
}

/// How a filtered map continues below its stored window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Below {
    /// `f_{k-1} = f_k`.
    Constant,
    /// `f_{k-1} = tail_target * f_k`, for a source whose tail is the identity.
    TargetTail,
}

/// Components `f_k: M_k -> N_k` commuting with `t`, stored on `[lo, hi]`.
/// Above the window the map repeats its top component when both groups
/// continue upward, and is zero otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilteredMap {
    pub source: FilteredGroup,
    pub target: FilteredGroup,
    lo: i64,
    maps: Vec<IntMatrix>,
    below: Below,
}

impl FilteredMap {
    pub fn new(source: FilteredGroup, target: FilteredGroup, lo: i64, maps: Vec<IntMatrix>, below: Below) -> Result<Self, CycloError> {
        let f = FilteredMap { source, target, lo, maps, below };
        f.validate()?;
        Ok(f)
    }

    /// Built from a rule on components over the window spanned by both groups.
    pub fn from_fn(source: FilteredGroup, target: FilteredGroup, below: Below, f: impl Fn(i64) -> IntMatrix) -> Result<Self, CycloError> {
        let lo = source.lo().min(target.lo());
        let hi = source.hi().max(target.hi());
        let maps = (lo..=hi).map(f).collect();
        Self::new(source, target, lo, maps, below)
    }

    pub fn identity(g: &FilteredGroup) -> Self {
        Self::from_fn(g.clone(), g.clone(), Below::Constant, |k| IntMatrix::identity(g.rank(k))).unwrap()
    }

    /// Map of split groups given by a single matrix on the underlying groups.
    pub fn from_split(source_weights: &[i64], target_weights: &[i64], a: &IntMatrix) -> Result<Self, CycloError> {
        let (s, t) = (FilteredGroup::split(source_weights), FilteredGroup::split(target_weights));
        let lo = s.lo().min(t.lo());
        let hi = s.hi().max(t.hi());
        let maps = (lo..=hi)
            .map(|k| {
                let rows = split_basis(target_weights, k);
                let cols = split_basis(source_weights, k);
                a.select_rows(&rows).select_columns(&cols)
            })
            .collect();
        // Entries that leave the filtration show up as a failed square.
        for (b, &wb) in target_weights.iter().enumerate() {
            for (c, &wc) in source_weights.iter().enumerate() {
                if wb < wc && !a.get(b, c).is_zero() {
                    return Err(CycloError::Input(format!("entry ({b}, {c}) lowers the filtration from {wc} to {wb}")));
                }
            }
        }
        Self::new(s, t, lo, maps, Below::Constant)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.maps.len() as i64 - 1
    }

    pub fn component(&self, k: i64) -> IntMatrix {
        if k < self.lo {
            match self.below {
                Below::Constant => self.maps[0].clone(),
                Below::TargetTail => {
                    let mut m = self.maps[0].clone();
                    for _ in k..self.lo {
                        m = self.target.tail() * &m;
                    }
                    m
                }
            }
        } else if k > self.hi() {
            if self.source.rank(k) > 0 && self.target.rank(k) > 0 {
                self.maps.last().unwrap().clone()
            } else {
                IntMatrix::zeros(self.target.rank(k), self.source.rank(k))
            }
        } else {
            self.maps[(k - self.lo) as usize].clone()
        }
    }

    fn validate(&self) -> Result<(), CycloError> {
        if self.maps.is_empty() {
            return Err(CycloError::InvalidMorphism("a filtered map needs at least one component".into()));
        }
        if self.below == Below::TargetTail && !self.source.tail().is_identity() {
            return Err(CycloError::InvalidMorphism("target-tail continuation needs a source with identity tail".into()));
        }
        if self.lo > self.source.lo().min(self.target.lo()) || self.hi() < self.source.hi().max(self.target.hi()) {
            return Err(CycloError::InvalidMorphism("stored window must cover both groups".into()));
        }
        for k in self.lo - 1..=self.hi() + 1 {
            let f = self.component(k);
            if f.shape() != (self.target.rank(k), self.source.rank(k)) {
                return Err(CycloError::InvalidMorphism(format!("component {k} has shape {:?}", f.shape())));
            }
        }
        for k in self.lo..=self.hi() + 1 {
            if &self.target.t(k) * &self.component(k) != &self.component(k - 1) * &self.source.t(k) {
                return Err(CycloError::InvalidMorphism(format!("square with t_{k} does not commute")));
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &FilteredMap) -> Result<FilteredMap, CycloError> {
        if first.target != self.source {
            return Err(CycloError::Composition("filtered maps are not composable".into()));
        }
        let below = match (self.below, first.below) {
            (Below::Constant, Below::Constant) => Below::Constant,
            (Below::TargetTail, Below::Constant) if first.source.tail().is_identity() => Below::TargetTail,
            _ => return Err(CycloError::Unsupported("composite continuation below the window".into())),
        };
        let lo = self.lo.min(first.lo);
        let hi = self.hi().max(first.hi());
        let maps = (lo..=hi).map(|k| &self.component(k) * &first.component(k)).collect();
        FilteredMap::new(first.source.clone(), self.target.clone(), lo, maps, below)
    }

    pub fn twist(&self, i: i64) -> FilteredMap {
        FilteredMap { source: self.source.twist(i), target: self.target.twist(i), lo: self.lo + i, ..self.clone() }
    }

    pub fn div(&self, n: u64) -> Result<FilteredMap, CycloError> {
        FilteredMap::new(self.source.div(n), self.target.div(n), self.lo, self.maps.clone(), self.below)
    }

    /// The induced map of stabilizations: the underlying map in every degree.
    pub fn stab(&self, p: u64) -> Result<FilteredMap, CycloError> {
        let u = self.underlying();
        let (s, t) = (self.source.stab(p)?, self.target.stab(p)?);
        FilteredMap::new(s, t, 0, vec![u], Below::Constant)
    }

    /// Map of underlying groups, read in the constant bottom region.
    pub fn underlying(&self) -> IntMatrix {
        self.component(self.lo.min(self.source.lo()).min(self.target.lo()) - 1)
    }

    /// Induced map on `gr^k`, as a chain map of two-term complexes.
    pub fn gr(&self, k: i64) -> Result<ChainMap, CycloError> {
        let maps = BTreeMap::from([(1, self.component(k + 1)), (0, self.component(k))]);
        Ok(ChainMap::new(self.source.gr(k), self.target.gr(k), maps)?)
    }
}

/// `V_0, V_1` with `d_1: V_1 -> V_0` and `d_0: V_0 -> V_1(1)`, composing to zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PeriodicFilteredComplex {
    pub v0: FilteredGroup,
    pub v1: FilteredGroup,
    pub d1: FilteredMap,
    pub d0: FilteredMap,
}

impl PeriodicFilteredComplex {
    pub fn new(d1: FilteredMap, d0: FilteredMap) -> Result<Self, CycloError> {
        let v0 = d1.target.clone();
        let v1 = d1.source.clone();
        if d0.source != v0 || d0.target != v1.twist(1) {
            return Err(CycloError::Input("d_0 must run from V_0 to V_1(1)".into()));
        }
        let c = PeriodicFilteredComplex { v0, v1, d1, d0 };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CycloError> {
        let lo = self.v0.lo().min(self.v1.lo()) - 2;
        let hi = self.v0.hi().max(self.v1.hi()) + 2;
        for k in lo..=hi {
            // Twisting shifts indices, so d_1 on V_1(1) at k is d_1 at k - 1.
            if !(&self.d0.component(k) * &self.d1.component(k)).is_zero() {
                return Err(CycloError::Input(format!("d_0 d_1 ≠ 0 at {k}")));
            }
            if !(&self.d1.component(k - 1) * &self.d0.component(k)).is_zero() {
                return Err(CycloError::Input(format!("d_1 d_0 ≠ 0 at {k}")));
            }
        }
        Ok(())
    }

    pub fn zero() -> Self {
        let z = FilteredGroup::zero();
        let d1 = FilteredMap::identity(&z);
        let d0 = FilteredMap::identity(&z);
        PeriodicFilteredComplex { v0: z.clone(), v1: z, d1, d0 }
    }

    /// `Z(n)`: `V_0 = Z` of weight `n` and `V_1 = 0`.
    pub fn tate(n: i64) -> Self {
        Self::split(&[n], &[], &IntMatrix::zeros(1, 0), &IntMatrix::zeros(0, 1)).unwrap()
    }

    /// Split weights on both groups with `d_1`, `d_0` given on underlying groups.
    pub fn split(w0: &[i64], w1: &[i64], d1: &IntMatrix, d0: &IntMatrix) -> Result<Self, CycloError> {
        let shifted: Vec<i64> = w1.iter().map(|w| w + 1).collect();
        let d1 = FilteredMap::from_split(w1, w0, d1)?;
        // The target is V_1(1) itself, so that its window is the twisted one.
        FilteredMap::from_split(w0, &shifted, d0)?;
        let d0 = FilteredMap::from_fn(FilteredGroup::split(w0), FilteredGroup::split(w1).twist(1), Below::Constant, |k| {
            d0.select_rows(&split_basis(&shifted, k)).select_columns(&split_basis(w0, k))
        })?;
        Self::new(d1, d0)
    }

    pub fn twist(&self, i: i64) -> Result<Self, CycloError> {
        Self::new(self.d1.twist(i), self.d0.twist(i))
    }

    pub fn div(&self, n: u64) -> Result<Self, CycloError> {
        Self::new(self.d1.div(n)?, self.d0.div(n)?)
    }

    pub fn stab(&self, p: u64) -> Result<Self, CycloError> {
        let d1 = self.d1.stab(p)?;
        // The stabilization absorbs twists, so d_0 lands in Stab(V_1) itself.
        let u0 = self.d0.underlying();
        let d0 = FilteredMap::new(self.v0.stab(p)?, self.v1.stab(p)?.twist(1), 0, vec![u0.clone(), u0], Below::Constant)?;
        Self::new(d1, d0)
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, CycloError> {
        let g0 = sum_groups(&self.v0, &other.v0)?;
        let g1 = sum_groups(&self.v1, &other.v1)?;
        let d1 = FilteredMap::from_fn(g1.clone(), g0.clone(), Below::Constant, |k| IntMatrix::block_diag(&[&self.d1.component(k), &other.d1.component(k)]))?;
        let d0 = FilteredMap::from_fn(g0, g1.twist(1), Below::Constant, |k| IntMatrix::block_diag(&[&self.d0.component(k), &other.d0.component(k)]))?;
        Self::new(d1, d0)
    }

    /// Top nonzero strand degree, or `None` when the groups continue upward.
    pub fn top_degree(&self) -> Option<i64> {
        if self.v0.head().is_some() || self.v1.head().is_some() {
            return None;
        }
        let mut top = i64::MIN;
        for k in self.v0.lo()..=self.v0.hi() {
            if self.v0.rank(k) > 0 {
                top = top.max(2 * k);
            }
        }
        for k in self.v1.lo()..=self.v1.hi() {
            if self.v1.rank(k) > 0 {
                top = top.max(2 * k + 1);
            }
        }
        Some(if top == i64::MIN { 2 * self.v0.lo() - 1 } else { top })
    }

    /// The degree-zero filtration strand on degrees `[lo, hi + 1]`.
    pub fn strand(&self, lo: i64, hi: i64) -> Strand {
        let comp = |i: i64| -> (usize, IntMatrix, IntMatrix) {
            let k = Integer::div_floor(&i, &2);
            if i.is_even() {
                (self.v0.rank(k), self.d0.component(k), self.v0.t(k))
            } else {
                (self.v1.rank(k), self.d1.component(k), self.v1.t(k))
            }
        };
        let mut ranks = Vec::new();
        let mut d = BTreeMap::new();
        let mut u = BTreeMap::new();
        for i in lo..=hi + 1 {
            let (r, di, ui) = comp(i);
            ranks.push(r);
            d.insert(i, di);
            u.insert(i, ui);
        }
        let top_exact = self.top_degree().is_some_and(|t| t <= hi);
        Strand { lo, ranks, d, u, top_exact }
    }
}

fn sum_groups(a: &FilteredGroup, b: &FilteredGroup) -> Result<FilteredGroup, CycloError> {
    let lo = a.lo().min(b.lo());
    let hi = a.hi().max(b.hi());
    let ranks = (lo..=hi).map(|k| a.rank(k) + b.rank(k)).collect();
    let t = (lo + 1..=hi).map(|k| IntMatrix::block_diag(&[&a.t(k), &b.t(k)])).collect();
    let tail = IntMatrix::block_diag(&[a.tail(), b.tail()]);
    let g = FilteredGroup::new(lo, ranks, t, tail)?;
    match (a.head(), b.head()) {
        (None, None) => Ok(g),
        (Some(x), Some(y)) if a.hi() == b.hi() => g.with_head(IntMatrix::block_diag(&[x, y])),
        _ => Err(CycloError::Unsupported("sum of groups with different upper behavior".into())),
    }
}

/// `S_i = F^0 V_i` on degrees `[lo, hi + 1]`, with differential `d_i` and
/// the periodicity `u_i = t ũ: S_i -> S_{i-2}`.
#[derive(Clone, Debug)]
pub struct Strand {
    lo: i64,
    ranks: Vec<usize>,
    d: BTreeMap<i64, IntMatrix>,
    u: BTreeMap<i64, IntMatrix>,
    top_exact: bool,
}

impl Strand {
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Last degree of the complex; one more degree is stored for expansion.
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 2
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() + 1 {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    pub fn d(&self, i: i64) -> IntMatrix {
        self.d.get(&i).cloned().unwrap_or_else(|| IntMatrix::zeros(self.rank(i - 1), self.rank(i)))
    }

    pub fn u(&self, i: i64) -> IntMatrix {
        self.u.get(&i).cloned().unwrap_or_else(|| IntMatrix::zeros(self.rank(i - 2), self.rank(i)))
    }

    pub fn top_exact(&self) -> bool {
        self.top_exact
    }

    pub fn complex(&self) -> ChainComplex {
        let (lo, hi) = (self.lo, self.hi());
        let ranks = (lo..=hi).map(|i| self.rank(i)).collect();
        let diffs = (lo + 1..=hi).map(|i| self.d(i)).collect();
        let c = ChainComplex::new(lo, ranks, diffs).expect("strand differentials compose to zero");
        c.truncated(Some(lo), (!self.top_exact).then_some(hi))
    }

    /// `gr^0` of the periodic complex: the cone of `u` from the strand shifted by two.
    pub fn graded_complex(&self) -> Result<ChainComplex, CycloError> {
        let s = self.complex();
        let src = s.shift(-2);
        let maps = src.degrees().map(|i| (i, self.u(i + 2).submatrix(0..s.rank(i), 0..src.rank(i)))).collect();
        Ok(ChainMap::new(src, s, maps)?.cone())
    }
}

/// A degreewise map of strands commuting with `d` and `u`.
#[derive(Clone, Debug)]
pub struct StrandMap {
    pub components: BTreeMap<i64, IntMatrix>,
}

impl StrandMap {
    pub fn component(&self, i: i64, rows: usize, cols: usize) -> IntMatrix {
        self.components.get(&i).cloned().unwrap_or_else(|| IntMatrix::zeros(rows, cols))
    }

    /// From filtered maps on `V_0` and `V_1`.
    pub fn from_filtered(f0: &FilteredMap, f1: &FilteredMap, lo: i64, hi: i64) -> Self {
        let components = (lo..=hi + 1)
            .map(|i| {
                let k = Integer::div_floor(&i, &2);
                (i, if i.is_even() { f0.component(k) } else { f1.component(k) })
            })
            .collect();
        StrandMap { components }
    }
}

/// Cyclic expansion of a strand: at the wheel `[n]`, degree `i` is
/// `S_i ⊗ (vertex functions) ⊕ S_{i+1} ⊗ (edges)`.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub strand: Strand,
}

impl Expansion {
    pub fn new(strand: Strand) -> Self {
        Expansion { strand }
    }

    pub fn of(v: &PeriodicFilteredComplex, lo: i64, hi: i64) -> Self {
        Self::new(v.strand(lo, hi))
    }

    pub fn lo(&self) -> i64 {
        self.strand.lo()
    }

    pub fn hi(&self) -> i64 {
        self.strand.hi()
    }

    fn block_ranks(&self, i: i64) -> (usize, usize) {
        (self.strand.rank(i), self.strand.rank(i + 1))
    }

    pub fn rank(&self, i: i64, n: usize) -> usize {
        let (a, b) = self.block_ranks(i);
        (a + b) * n
    }

    /// The complex at `[n]`, truncated below and, unless the strand stops, above.
    pub fn at(&self, n: usize) -> ChainComplex {
        let (lo, hi) = (self.lo(), self.hi());
        let ranks = (lo..=hi).map(|i| self.rank(i, n)).collect();
        let bv = coboundary(n);
        let b0b1 = edge_to_vertex(n);
        let idn = IntMatrix::identity(n);
        let mut diffs = Vec::new();
        for i in lo + 1..=hi {
            let (sv, se) = self.block_ranks(i);
            let (tv, te) = self.block_ranks(i - 1);
            debug_assert_eq!(te, sv);
            let mut m = IntMatrix::zeros((tv + te) * n, (sv + se) * n);
            let s = &self.strand;
            let put = |m: &mut IntMatrix, r: usize, c: usize, b: IntMatrix| {
                if b.rows() * b.cols() > 0 {
                    m.paste(r, c, &b);
                }
            };
            put(&mut m, 0, 0, (-&s.d(i)).kron(&idn));
            put(&mut m, tv * n, 0, IntMatrix::identity(sv).kron(&bv));
            put(&mut m, tv * n, sv * n, s.d(i + 1).kron(&idn));
            put(&mut m, 0, sv * n, s.u(i + 1).kron(&b0b1));
            diffs.push(m);
        }
        let c = ChainComplex::new(lo, ranks, diffs).expect("expansion differential squares to zero");
        c.truncated(Some(lo), (!self.strand.top_exact()).then_some(hi))
    }

    /// Action of `f: [n] -> [m]`, from the complex at `[m]` to the one at `[n]`.
    pub fn action(&self, f: &CyclicMorphism) -> BTreeMap<i64, IntMatrix> {
        let (va, ea) = (vertex_action(f), edge_action(f));
        self.blockwise(|i| {
            let (a, b) = self.block_ranks(i);
            (IntMatrix::identity(a).kron(&va), IntMatrix::identity(b).kron(&ea))
        })
    }

    pub fn action_map(&self, f: &CyclicMorphism) -> Result<ChainMap, CycloError> {
        Ok(ChainMap::new(self.at(f.target()), self.at(f.source()), self.action(f))?)
    }

    fn blockwise(&self, f: impl Fn(i64) -> (IntMatrix, IntMatrix)) -> BTreeMap<i64, IntMatrix> {
        (self.lo()..=self.hi())
            .map(|i| {
                let (a, b) = f(i);
                (i, IntMatrix::block_diag(&[&a, &b]))
            })
            .collect()
    }

    /// `Exp(φ)` at `[n]` for a strand map into `other`'s strand.
    pub fn map_to(&self, other: &Expansion, phi: &StrandMap, n: usize) -> BTreeMap<i64, IntMatrix> {
        let idn = IntMatrix::identity(n);
        self.blockwise(|i| {
            let a = phi.component(i, other.strand.rank(i), self.strand.rank(i)).kron(&idn);
            let b = phi.component(i + 1, other.strand.rank(i + 1), self.strand.rank(i + 1)).kron(&idn);
            (a, b)
        })
    }

    /// Degree-`deg` vertex constants: the map `Z[deg] -> Exp` hitting `1 ⊗ e_index`.
    pub fn constant_class(&self, deg: i64, index: usize, n: usize) -> IntMatrix {
        let rows = self.rank(deg, n);
        let mut m = IntMatrix::zeros(rows, 1);
        for b in 0..n {
            m.set(index * n + b, 0, 1);
        }
        m
    }
}

/// `Exp(Z(n))` against `Z[2n]` at the wheels `[1..=m_max]`.
pub fn exp_tate_check(weight: i64, m_max: usize) -> Result<BTreeMap<usize, bool>, CycloError> {
    let v = PeriodicFilteredComplex::tate(weight);
    let e = Expansion::of(&v, 2 * weight - 6, 2 * weight + 2);
    let mut out = BTreeMap::new();
    for m in 1..=m_max {
        let c = e.at(m);
        let src = ChainComplex::concentrated(2 * weight, 1);
        let f = ChainMap::new(src, c, BTreeMap::from([(2 * weight, e.constant_class(2 * weight, 0, m))]))?;
        out.insert(m, f.is_quasi_isomorphism()?);
    }
    Ok(out)
}

/// Functoriality failures of the expansion over all maps among `[1..=n_max]`.
pub fn exp_functoriality(e: &Expansion, n_max: usize) -> Vec<String> {
    let mut out = Vec::new();
    for a in 1..=n_max {
        for b in 1..=n_max {
            for f in lambda_hom(a, b, 1) {
                if let Err(err) = e.action_map(&f) {
                    out.push(format!("{f}: {err}"));
                }
            }
        }
    }
    out
}

/// Outcome of comparing `π_{n*} i_n^* Exp(V)` with `Exp(Div_n V)`.
#[derive(Clone, Debug, Serialize)]
pub struct ExpDivReport {
    pub n: u64,
    pub objects: usize,
    pub chain_maps: bool,
    pub onto_invariants: bool,
    pub natural: bool,
    pub failures: Vec<String>,
}

impl ExpDivReport {
    pub fn passed(&self) -> bool {
        self.chain_maps && self.onto_invariants && self.natural && self.failures.is_empty()
    }
}

/// Comparison map at `[m]`: periodic pullback on vertex blocks, orbit sums on edge blocks.
pub fn exp_div_comparison(div: &Expansion, n: usize, m: usize) -> BTreeMap<i64, IntMatrix> {
    let (cv, ce) = (covering_vertex_map(n, m), covering_edge_map(n, m));
    div.blockwise(|i| {
        let (a, b) = div.block_ranks(i);
        (IntMatrix::identity(a).kron(&cv), IntMatrix::identity(b).kron(&ce))
    })
}

pub fn exp_div_check(v: &PeriodicFilteredComplex, n: u64, m_max: usize) -> Result<ExpDivReport, CycloError> {
    let top = v.top_degree().unwrap_or(4);
    let (lo, hi) = (top - 8, top + 1);
    let base = Expansion::of(v, lo, hi);
    let div = Expansion::of(&v.div(n)?, lo, hi);
    let nn = n as usize;
    let mut failures = Vec::new();
    let (mut chain_maps, mut onto, mut natural) = (true, true, true);
    for m in 1..=m_max {
        let phi = exp_div_comparison(&div, nn, m);
        if let Err(e) = ChainMap::new(div.at(m), base.at(nn * m), phi.clone()) {
            chain_maps = false;
            failures.push(format!("[{m}]: {e}"));
        }
        let rot = base.action(&CyclicMorphism::rotation(nn * m, m as i64, Modulus::CYCLIC));
        for i in lo..=hi {
            let p = &phi[&i];
            let fixed = &rot[&i] - &IntMatrix::identity(p.rows());
            let invariant_rank = p.rows() - zlin::rank(&fixed);
            if !(&fixed * p).is_zero() || zlin::rank(p) != p.cols() || p.cols() != invariant_rank || !zlin::is_saturated_basis(p) {
                onto = false;
                failures.push(format!("[{m}] degree {i}: image is not the invariant lattice"));
            }
        }
        for m2 in 1..=m_max {
            for f in lambda_hom(m, m2, n) {
                let up = f.embed(n)?;
                let down = f.project();
                let phi2 = exp_div_comparison(&div, nn, m2);
                let (a_up, a_down) = (base.action(&up), div.action(&down));
                for i in lo..=hi {
                    if &phi[&i] * &a_down[&i] != &a_up[&i] * &phi2[&i] {
                        natural = false;
                        failures.push(format!("naturality for {f} in degree {i}"));
                    }
                }
            }
        }
    }
    Ok(ExpDivReport { n, objects: m_max, chain_maps, onto_invariants: onto, natural, failures })
}

/// The complex `I` at `[n]` on degrees `[lo, hi]`: vertex functions in even
/// degrees, edges in odd ones.
fn periodic_resolution(n: usize, lo: i64, hi: i64) -> ChainComplex {
    let ranks = (lo..=hi).map(|_| n).collect();
    let diffs = (lo + 1..=hi).map(|i| if i.is_even() { coboundary(n) } else { edge_to_vertex(n) }).collect();
    ChainComplex::new(lo, ranks, diffs).unwrap().truncated(Some(lo), None)
}

/// `σ_{≤top} P` at `[n]`: constants in degree 0, then `I` in degrees `1..=top`.
pub fn positive_part(n: usize, top: i64) -> ChainComplex {
    let mut ranks = vec![1];
    let mut diffs = Vec::new();
    for i in 1..=top {
        ranks.push(n);
        diffs.push(if i == 1 {
            edge_sum(n)
        } else if i.is_even() {
            coboundary(n)
        } else {
            edge_to_vertex(n)
        });
    }
    ChainComplex::new(0, ranks, diffs).unwrap()
}

/// `η: F^{-l} I -> σ_{≤2l} P ⊗ F^0 I` at `[n]`, with `I` cut off at `lo`.
pub fn eta_map(l: i64, n: usize, lo: i64) -> Result<ChainMap, CycloError> {
    if l < 0 {
        return Err(CycloError::Input("η needs l ≥ 0".into()));
    }
    let source = periodic_resolution(n, lo, 2 * l);
    let p = positive_part(n, 2 * l);
    let f0 = periodic_resolution(n, lo, 0);
    let target = p.tensor(&f0);
    let offset = |deg: i64, a: i64| -> usize { (0..a).filter(|&x| deg - x >= lo && deg - x <= 0).map(|x| p.rank(x) * f0.rank(deg - x)).sum() };
    let mut maps = BTreeMap::new();
    for m in lo..=2 * l {
        let mut f = IntMatrix::zeros(target.rank(m), source.rank(m));
        if m <= 0 {
            // 1 ⊗ x in the block with P-degree 0.
            f.paste(offset(m, 0), 0, &IntMatrix::identity(n));
        } else {
            // x ⊗ 1 in the block with I-degree 0.
            f.paste(offset(m, m), 0, &IntMatrix::identity(n).kron(&constants(n)));
        }
        maps.insert(m, f);
    }
    Ok(ChainMap::new(source, target, maps)?)
}

/// Chain-map and quasi-isomorphism status of `η` at every `[n] ≤ n_max`.
pub fn eta_check(l: i64, n_max: usize) -> Result<BTreeMap<usize, bool>, CycloError> {
    let lo = -2 * l - 6;
    (1..=n_max).map(|n| Ok((n, eta_map(l, n, lo)?.is_quasi_isomorphism()?))).collect()
}

/// A generalized filtered Dieudonné module: for each prime `p`, maps
/// `φ_{i,j}: F^i M -> M / p^j` indexed by filtration level `i` and precision `j`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Gfdm {
    #[serde(flatten)]
    pub group: FilteredGroup,
    pub phi: BTreeMap<u64, BTreeMap<i64, BTreeMap<u32, IntMatrix>>>,
    #[serde(default)]
    pub classical: bool,
}

/// One violated condition, located by prime, filtration level and precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GfdmWitness {
    pub p: u64,
    pub i: i64,
    pub j: u32,
    pub condition: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GfdmReport {
    pub valid: bool,
    pub classical: Option<bool>,
    pub failures: Vec<GfdmWitness>,
}

pub fn pow(p: u64, j: u32) -> BigInt {
    BigInt::from(p).pow(j)
}

fn congruent(a: &IntMatrix, b: &IntMatrix, q: &BigInt) -> bool {
    a.shape() == b.shape() && (a - b).divisible_by(q)
}

impl Gfdm {
    /// Split group with `φ_i(e_a) = p^{w_a - i} A e_a`, stored at precisions `1..=precision`.
    pub fn from_split(weights: &[i64], a: &IntMatrix, p: u64, precision: u32) -> Self {
        let group = FilteredGroup::split(weights);
        let mut levels = BTreeMap::new();
        for i in group.lo().min(0)..=group.hi().max(0) {
            let full = split_frobenius(weights, a, p, i);
            levels.insert(i, (1..=precision).map(|j| (j, full.reduced_mod(&pow(p, j)))).collect());
        }
        Gfdm { group, phi: BTreeMap::from([(p, levels)]), classical: false }
    }

    pub fn set(&mut self, p: u64, i: i64, j: u32, m: IntMatrix) {
        self.phi.entry(p).or_default().entry(i).or_default().insert(j, m);
    }

    pub fn validate(&self) -> GfdmReport {
        let mut failures = Vec::new();
        let mut classical_ok = true;
        for (&p, levels) in &self.phi {
            let witness = |i, j, c: &str| GfdmWitness { p, i, j, condition: c.into() };
            for (&i, by_j) in levels {
                for (&j, m) in by_j {
                    let q = pow(p, j);
                    if m.shape() != (self.group.underlying_rank(), self.group.rank(i)) {
                        failures.push(witness(i, j, "shape"));
                        continue;
                    }
                    if let Some(next) = by_j.get(&(j + 1)) {
                        if !congruent(next, m, &q) {
                            failures.push(witness(i, j, "φ_{i,j+1} ≢ φ_{i,j} mod p^j"));
                        }
                    }
                    if let Some(up) = levels.get(&(i + 1)).and_then(|u| u.get(&j)) {
                        let lhs = m * &self.group.t(i + 1);
                        if !congruent(&lhs, &up.scaled(&BigInt::from(p)), &q) {
                            failures.push(witness(i, j, "φ_i ≠ p φ_{i+1} on F^{i+1}"));
                        }
                    }
                }
            }
            if self.classical {
                let js: std::collections::BTreeSet<u32> = levels.values().flat_map(|b| b.keys().copied()).collect();
                for j in js {
                    let r = self.group.underlying_rank();
                    let mut all = IntMatrix::scalar(r, pow(p, j));
                    for by_j in levels.values() {
                        if let Some(m) = by_j.get(&j) {
                            all = all.hstack(m);
                        }
                    }
                    if !FgAbGroup::cokernel(&all).is_zero() {
                        classical_ok = false;
                        failures.push(witness(self.group.lo(), j, "Σ φ_i is not surjective"));
                    }
                }
            }
        }
        GfdmReport { valid: failures.is_empty(), classical: self.classical.then_some(classical_ok), failures }
    }
}

/// `φ_i` on `F^i` of a split group: column `a` is `p^{w_a - i} A e_a`.
pub fn split_frobenius(weights: &[i64], a: &IntMatrix, p: u64, i: i64) -> IntMatrix {
    let cols = split_basis(weights, i);
    let mut m = a.select_columns(&cols);
    for (c, &idx) in cols.iter().enumerate() {
        let s = BigInt::from(p).pow((weights[idx] - i) as u32);
        for r in 0..m.rows() {
            let v = m.get(r, c) * &s;
            m.set(r, c, v);
        }
    }
    m
}

pub fn check_prime(p: u64) -> Result<(), CycloError> {
    if p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d)) {
        Ok(())
    } else {
        Err(CycloError::Input(format!("{p} is not a prime")))
    }
}

/// Truncated stabilization of a free filtered group: every component is the
/// underlying group mod `p^j` and `t` acts by `p`. Returns `gr^l` for `l`
/// in `[-a, j]`, each computed as a quotient of the truncated components.
pub fn stab_truncated_gr(group: &FilteredGroup, p: u64, j: u32, a: i64) -> Result<Vec<(i64, FgAbGroup)>, CycloError> {
    if j == 0 {
        return Err(CycloError::Precision("precision must be at least 1".into()));
    }
    let s = group.stab(p)?;
    let q = pow(p, j);
    let r = s.underlying_rank();
    Ok((-a..=j as i64)
        .map(|l| {
            let rel = s.t(l + 1).hstack(&IntMatrix::scalar(r, q.clone()));
            (l, FgAbGroup::cokernel(&rel))
        })
        .collect())
}

/// A periodic filtered complex with a Frobenius structure into its
/// stabilization at one prime, carried at a fixed precision.
#[derive(Clone, Debug)]
pub struct CyclotomicFdm {
    pub complex: PeriodicFilteredComplex,
    pub p: u64,
    pub precision: u32,
    /// `V_0 -> Stab V_0`.
    pub phi0: FilteredMap,
    /// `V_1 -> Stab V_1`.
    pub phi1: FilteredMap,
}

#[derive(Clone, Debug, Serialize)]
pub struct CyclotomicReport {
    pub chain_map: bool,
    pub components: Vec<GfdmReport>,
}

impl CyclotomicReport {
    pub fn valid(&self) -> bool {
        self.chain_map && self.components.iter().all(|c| c.valid)
    }
}

impl CyclotomicFdm {
    pub fn new(complex: PeriodicFilteredComplex, p: u64, precision: u32, phi0: FilteredMap, phi1: FilteredMap) -> Result<Self, CycloError> {
        if precision == 0 {
            return Err(CycloError::Precision("precision must be at least 1".into()));
        }
        if phi0.source != complex.v0 || phi0.target != complex.v0.stab(p)? || phi1.source != complex.v1 || phi1.target != complex.v1.stab(p)? {
            return Err(CycloError::Input("Frobenius maps must run from V_i to Stab_p V_i".into()));
        }
        let m = CyclotomicFdm { complex, p, precision, phi0, phi1 };
        if !m.validate().valid() {
            return Err(CycloError::Input("Frobenius data fails the Dieudonné conditions".into()));
        }
        Ok(m)
    }

    pub fn modulus(&self) -> BigInt {
        pow(self.p, self.precision)
    }

    pub fn stab(&self) -> Result<PeriodicFilteredComplex, CycloError> {
        self.complex.stab(self.p)
    }

    /// The same data carried at a lower precision.
    pub fn at_precision(&self, j: u32) -> Result<Self, CycloError> {
        if j == 0 || j > self.precision {
            return Err(CycloError::Precision(format!("cannot raise precision {} to {j}", self.precision)));
        }
        Ok(CyclotomicFdm { precision: j, ..self.clone() })
    }

    /// Each Frobenius as a gFDM at precisions `1..=precision`, plus the
    /// chain-map condition mod `p^precision` over the stored window.
    pub fn validate(&self) -> CyclotomicReport {
        let q = self.modulus();
        let st = match self.stab() {
            Ok(s) => s,
            Err(_) => return CyclotomicReport { chain_map: false, components: vec![] },
        };
        let lo = self.complex.v0.lo().min(self.complex.v1.lo()) - 2;
        let hi = self.complex.v0.hi().max(self.complex.v1.hi()) + 2;
        let mut chain_map = true;
        for k in lo..=hi {
            let a = &st.d1.component(k) * &self.phi1.component(k);
            let b = &self.phi0.component(k) * &self.complex.d1.component(k);
            let c = &st.d0.component(k) * &self.phi0.component(k);
            let d = &self.phi1.component(k - 1) * &self.complex.d0.component(k);
            chain_map &= congruent(&a, &b, &q) && congruent(&c, &d, &q);
        }
        let components = [(&self.complex.v0, &self.phi0), (&self.complex.v1, &self.phi1)]
            .into_iter()
            .map(|(g, f)| {
                let mut levels = BTreeMap::new();
                for i in g.lo()..=g.hi() {
                    let m = f.component(i);
                    levels.insert(i, (1..=self.precision).map(|j| (j, m.reduced_mod(&pow(self.p, j)))).collect());
                }
                Gfdm { group: g.clone(), phi: BTreeMap::from([(self.p, levels)]), classical: false }.validate()
            })
            .collect();
        CyclotomicReport { chain_map, components }
    }

    /// The inclusion `Div_p V -> Stab_p V`, identity on underlying groups.
    pub fn inclusion(&self, g: &FilteredGroup) -> Result<FilteredMap, CycloError> {
        let bottom = g.lo() - 1;
        FilteredMap::from_fn(g.div(self.p), g.stab(self.p)?, Below::Constant, |k| g.transport(k, bottom.min(k)))
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, CycloError> {
        if self.p != other.p {
            return Err(CycloError::Input("direct sum needs a common prime".into()));
        }
        let complex = self.complex.direct_sum(&other.complex)?;
        let sum = |a: &FilteredMap, b: &FilteredMap, src: &FilteredGroup| -> Result<FilteredMap, CycloError> {
            FilteredMap::from_fn(src.clone(), src.stab(self.p)?, Below::TargetTail, |k| IntMatrix::block_diag(&[&a.component(k), &b.component(k)]))
        };
        let phi0 = sum(&self.phi0, &other.phi0, &complex.v0)?;
        let phi1 = sum(&self.phi1, &other.phi1, &complex.v1)?;
        CyclotomicFdm::new(complex, self.p, self.precision.min(other.precision), phi0, phi1)
    }
}

/// Serializable description of a cyclotomic FDM on split groups: weights,
/// underlying differentials, Frobenius matrices, and a filtered change of
/// basis applied to the whole structure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitFdm {
    pub name: String,
    pub w0: Vec<i64>,
    pub w1: Vec<i64>,
    pub d1: IntMatrix,
    pub d0: IntMatrix,
    pub frob0: IntMatrix,
    pub frob1: IntMatrix,
    pub basis0: IntMatrix,
    pub basis1: IntMatrix,
}

fn inverse(m: &IntMatrix) -> Result<IntMatrix, CycloError> {
    zlin::solve(m, &IntMatrix::identity(m.rows())).ok_or_else(|| CycloError::Input("change of basis is not invertible over ℤ".into()))
}

fn conjugated_frobenius(weights: &[i64], frob: &IntMatrix, basis: &IntMatrix, inv: &IntMatrix, p: u64, i: i64) -> IntMatrix {
    let sel = split_basis(weights, i);
    &(basis * &split_frobenius(weights, frob, p, i)) * &inv.select_rows(&sel).select_columns(&sel)
}

impl SplitFdm {
    pub fn build(&self, p: u64, precision: u32) -> Result<CyclotomicFdm, CycloError> {
        let (inv0, inv1) = (inverse(&self.basis0)?, inverse(&self.basis1)?);
        let d1 = &(&self.basis0 * &self.d1) * &inv1;
        let d0 = &(&self.basis1 * &self.d0) * &inv0;
        let complex = PeriodicFilteredComplex::split(&self.w0, &self.w1, &d1, &d0)?;
        let phi = |w: &[i64], frob: &IntMatrix, b: &IntMatrix, inv: &IntMatrix, g: &FilteredGroup| -> Result<FilteredMap, CycloError> {
            FilteredMap::from_fn(g.clone(), g.stab(p)?, Below::TargetTail, |i| conjugated_frobenius(w, frob, b, inv, p, i))
        };
        let phi0 = phi(&self.w0, &self.frob0, &self.basis0, &inv0, &complex.v0)?;
        let phi1 = phi(&self.w1, &self.frob1, &self.basis1, &inv1, &complex.v1)?;
        CyclotomicFdm::new(complex, p, precision, phi0, phi1)
    }
}
