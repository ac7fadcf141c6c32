//! Wheels, cyclic maps and their degree-`l` relatives.
//!
//! A map `[n] -> [m]` is stored as the values `f(0), ..., f(n-1)` of a
//! nondecreasing lift `f: Z -> Z` with `f(a + n) = f(a) + m`. Lifts that
//! differ by `a -> a + k*m` are identified when the modulus is `k`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CycloError;

/// How many turns of the target wheel are quotiented out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Modulus {
    Finite(u64),
    Infinite,
}

impl Modulus {
    pub const CYCLIC: Modulus = Modulus::Finite(1);
}

impl Serialize for Modulus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Modulus::Finite(k) => s.serialize_u64(*k),
            Modulus::Infinite => s.serialize_none(),
        }
    }
}

impl<'de> Deserialize<'de> for Modulus {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Option::<u64>::deserialize(d)?;
        match v {
            Some(0) => Err(serde::de::Error::custom("modulus must be positive")),
            Some(k) => Ok(Modulus::Finite(k)),
            None => Ok(Modulus::Infinite),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicMorphism {
    #[serde(rename = "src")]
    source: usize,
    #[serde(rename = "tgt")]
    target: usize,
    #[serde(rename = "mod")]
    modulus: Modulus,
    lift: Vec<i64>,
}

impl CyclicMorphism {
    /// Builds and normalizes a map from its lift values on `0..source`.
    pub fn new(source: usize, target: usize, modulus: Modulus, lift: Vec<i64>) -> Result<Self, CycloError> {
        if source == 0 || target == 0 {
            return Err(CycloError::InvalidMorphism("wheels have at least one vertex".into()));
        }
        if lift.len() != source {
            return Err(CycloError::InvalidMorphism(format!("lift has {} values, source has {source}", lift.len())));
        }
        let top = lift[0] + target as i64;
        if lift.windows(2).any(|w| w[0] > w[1]) || lift[source - 1] > top {
            return Err(CycloError::InvalidMorphism(format!("lift {lift:?} is not monotone of degree one")));
        }
        let mut f = CyclicMorphism { source, target, modulus, lift };
        f.normalize();
        Ok(f)
    }

    pub(crate) fn from_trusted(source: usize, target: usize, modulus: Modulus, lift: Vec<i64>) -> Self {
        let mut f = CyclicMorphism { source, target, modulus, lift };
        f.normalize();
        f
    }

    fn normalize(&mut self) {
        if let Modulus::Finite(k) = self.modulus {
            let period = k as i64 * self.target as i64;
            let shift = self.lift[0].div_euclid(period) * period;
            for x in &mut self.lift {
                *x -= shift;
            }
        }
    }

    pub fn identity(n: usize, modulus: Modulus) -> Self {
        CyclicMorphism { source: n, target: n, modulus, lift: (0..n as i64).collect() }
    }

    /// The rotation `a -> a + r`.
    pub fn rotation(n: usize, r: i64, modulus: Modulus) -> Self {
        CyclicMorphism::from_trusted(n, n, modulus, (0..n as i64).map(|a| a + r).collect())
    }

    pub fn sigma(n: usize) -> Self {
        Self::rotation(n, 1, Modulus::CYCLIC)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn lift(&self) -> &[i64] {
        &self.lift
    }

    /// Value of the lift at any integer.
    pub fn eval(&self, a: i64) -> i64 {
        let n = self.source as i64;
        self.lift[a.rem_euclid(n) as usize] + a.div_euclid(n) * self.target as i64
    }

    pub fn with_modulus(&self, modulus: Modulus) -> Self {
        CyclicMorphism::from_trusted(self.source, self.target, modulus, self.lift.clone())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.source, self.modulus)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &CyclicMorphism) -> Result<CyclicMorphism, CycloError> {
        if f.target != self.source {
            return Err(CycloError::Composition(format!("[{}] -> [{}] then [{}] -> [{}]", f.source, f.target, self.source, self.target)));
        }
        if f.modulus != self.modulus {
            return Err(CycloError::Composition(format!("moduli {:?} and {:?} differ", f.modulus, self.modulus)));
        }
        let lift = f.lift.iter().map(|&x| self.eval(x)).collect();
        Ok(CyclicMorphism::from_trusted(f.source, self.target, self.modulus, lift))
    }

    /// `a -> max { b | f(b) <= a }`, a map `[m] -> [n]`.
    pub fn dual(&self) -> Result<CyclicMorphism, CycloError> {
        self.require_cyclic("dual")?;
        let (n, m) = (self.source as i64, self.target as i64);
        let lift = (0..m)
            .map(|a| {
                let mut b = n * ((a - self.lift[0]).div_euclid(m) - 1);
                while self.eval(b + 1) <= a {
                    b += 1;
                }
                b
            })
            .collect();
        Ok(CyclicMorphism::from_trusted(self.target, self.source, self.modulus, lift))
    }

    /// `a -> min { b | f(b) >= a }`; the inverse operation to [`dual`](Self::dual).
    pub fn codual(&self) -> Result<CyclicMorphism, CycloError> {
        self.require_cyclic("codual")?;
        let (n, m) = (self.source as i64, self.target as i64);
        let lift = (0..m)
            .map(|a| {
                let mut b = n * ((a - self.lift[0]).div_euclid(m) + 2);
                while self.eval(b - 1) >= a {
                    b -= 1;
                }
                b
            })
            .collect();
        Ok(CyclicMorphism::from_trusted(self.target, self.source, self.modulus, lift))
    }

    fn require_cyclic(&self, what: &str) -> Result<(), CycloError> {
        if self.modulus != Modulus::CYCLIC {
            return Err(CycloError::Unsupported(format!("{what} needs modulus 1, got {:?}", self.modulus)));
        }
        Ok(())
    }

    /// The same lift read as a map `[np] -> [mp]` of the cyclic category.
    pub fn embed(&self, p: u64) -> Result<CyclicMorphism, CycloError> {
        if self.modulus != Modulus::Finite(p) {
            return Err(CycloError::Unsupported(format!("embedding by {p} needs modulus {p}")));
        }
        let p = p as usize;
        let f = CyclicMorphism::from_trusted(self.source * p, self.target * p, Modulus::CYCLIC, (0..(self.source * p) as i64).map(|a| self.eval(a)).collect());
        Ok(f)
    }

    /// The lift reduced modulo one turn.
    pub fn project(&self) -> CyclicMorphism {
        self.with_modulus(Modulus::CYCLIC)
    }
}

impl fmt::Display for CyclicMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.modulus {
            Modulus::Finite(k) => k.to_string(),
            Modulus::Infinite => "∞".into(),
        };
        write!(f, "[{}]->[{}] mod {} {:?}", self.source, self.target, m, self.lift)
    }
}

/// All maps `[n] -> [m]` with the given finite modulus.
pub fn lambda_hom(n: usize, m: usize, k: u64) -> Vec<CyclicMorphism> {
    lifts_with_start(n, m, 0..(k as i64 * m as i64))
        .map(|lift| CyclicMorphism { source: n, target: m, modulus: Modulus::Finite(k), lift })
        .collect()
}

/// A finite slice of the infinite hom-set: lifts with `f(0)` in `start`.
pub fn lambda_inf_window(n: usize, m: usize, start: std::ops::Range<i64>) -> Vec<CyclicMorphism> {
    lifts_with_start(n, m, start)
        .map(|lift| CyclicMorphism { source: n, target: m, modulus: Modulus::Infinite, lift })
        .collect()
}

fn lifts_with_start(n: usize, m: usize, start: std::ops::Range<i64>) -> impl Iterator<Item = Vec<i64>> {
    start.flat_map(move |f0| {
        let mut out = Vec::new();
        let mut cur = vec![f0];
        extend_monotone(&mut cur, n, f0 + m as i64, &mut out);
        out
    })
}

fn extend_monotone(cur: &mut Vec<i64>, n: usize, top: i64, out: &mut Vec<Vec<i64>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    let last = *cur.last().unwrap();
    for v in last..=top {
        cur.push(v);
        extend_monotone(cur, n, top, out);
        cur.pop();
    }
}

/// Maps `[n] -> [m]` with `f ∘ σ^n_sub = σ^m_sub ∘ f` for the subgroup
/// generated by `σ^{n/p}`; the cyclic category's picture of modulus `p`.
pub fn equivariant_maps(n: usize, m: usize, p: usize) -> Vec<CyclicMorphism> {
    assert!(n.is_multiple_of(p) && m.is_multiple_of(p));
    let (a, b) = (n / p, m / p);
    let sa = CyclicMorphism::rotation(n, a as i64, Modulus::CYCLIC);
    let sb = CyclicMorphism::rotation(m, b as i64, Modulus::CYCLIC);
    lambda_hom(n, m, 1)
        .into_iter()
        .filter(|f| f.compose(&sa).unwrap() == sb.compose(f).unwrap())
        .collect()
}

/// A map of positive degree `l`, stored through a degree-one witness
/// `[m] -> [nl]` taken up to rotations by multiples of `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LRMorphism {
    #[serde(rename = "src")]
    source: usize,
    #[serde(rename = "tgt")]
    target: usize,
    degree: usize,
    witness: CyclicMorphism,
}

impl LRMorphism {
    pub fn new(target: usize, degree: usize, witness: CyclicMorphism) -> Result<Self, CycloError> {
        if degree == 0 || witness.target != target * degree || witness.modulus != Modulus::CYCLIC {
            return Err(CycloError::InvalidMorphism(format!("witness {witness} does not fit [{target}] with degree {degree}")));
        }
        let mut w = witness;
        // Rotating by n shifts every value; the least representative has f(0) in [0, n).
        let shift = w.lift[0].div_euclid(target as i64) * target as i64;
        for x in &mut w.lift {
            *x -= shift;
        }
        Ok(LRMorphism { source: w.source, target, degree, witness: w })
    }

    pub fn horizontal(f: CyclicMorphism) -> Self {
        let t = f.target;
        LRMorphism::new(t, 1, f.project()).expect("degree-one maps are valid")
    }

    /// The covering `[nl] -> [n]`.
    pub fn covering(n: usize, l: usize) -> Self {
        LRMorphism::new(n, l, CyclicMorphism::identity(n * l, Modulus::CYCLIC)).unwrap()
    }

    pub fn identity(n: usize) -> Self {
        Self::covering(n, 1)
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn witness(&self) -> &CyclicMorphism {
        &self.witness
    }

    pub fn is_horizontal(&self) -> bool {
        self.degree == 1
    }

    /// Vertical maps are coverings precomposed with an automorphism.
    pub fn is_vertical(&self) -> bool {
        let w = &self.witness;
        w.source == w.target && w.lift.windows(2).all(|p| p[1] == p[0] + 1)
    }

    pub fn eval(&self, a: i64) -> i64 {
        self.witness.eval(a)
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &LRMorphism) -> Result<LRMorphism, CycloError> {
        if f.target != self.source {
            return Err(CycloError::Composition(format!("[{}] -> [{}] then [{}] -> [{}]", f.source, f.target, self.source, self.target)));
        }
        let degree = self.degree * f.degree;
        let lift = f.witness.lift.iter().map(|&x| self.eval(x)).collect();
        let w = CyclicMorphism::from_trusted(f.source, self.target * degree, Modulus::CYCLIC, lift);
        LRMorphism::new(self.target, degree, w)
    }

    /// The canonical factorization `covering ∘ horizontal`.
    pub fn factorize(&self) -> (LRMorphism, LRMorphism) {
        (LRMorphism::covering(self.target, self.degree), LRMorphism::horizontal(self.witness.clone()))
    }
}

impl fmt::Display for LRMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}] deg {} via {:?}", self.source, self.target, self.degree, self.witness.lift)
    }
}

/// Degree-`l` maps `[m] -> [n]`.
pub fn lr_hom(m: usize, n: usize, l: usize) -> Vec<LRMorphism> {
    lifts_with_start(m, n * l, 0..n as i64)
        .map(|lift| LRMorphism { source: m, target: n, degree: l, witness: CyclicMorphism { source: m, target: n * l, modulus: Modulus::CYCLIC, lift } })
        .collect()
}

/// Every factorization `v ∘ h = f` with `v` vertical of degree `deg f` and
/// `h` horizontal, found by search over all vertical maps into the target.
pub fn all_factorizations(f: &LRMorphism) -> Vec<(LRMorphism, LRMorphism)> {
    let (n, l) = (f.target, f.degree);
    let mut out = Vec::new();
    for v in &vertical_maps(n, l) {
        for h in lambda_hom(f.source, n * l, 1) {
            let h = LRMorphism::horizontal(h);
            if v.compose(&h).unwrap() == *f {
                out.push((v.clone(), h));
            }
        }
    }
    out
}

/// The distinct vertical maps `[nl] -> [n]`: the covering after each rotation.
pub fn vertical_maps(n: usize, l: usize) -> Vec<LRMorphism> {
    let mut out: Vec<LRMorphism> = (0..(n * l) as i64).map(|s| LRMorphism::new(n, l, CyclicMorphism::rotation(n * l, s, Modulus::CYCLIC)).unwrap()).collect();
    out.sort();
    out.dedup();
    out
}

/// The automorphisms `α` of `[c]` with `v' = v ∘ α` and `h' = α⁻¹ ∘ h`.
pub fn relating_automorphisms(a: &(LRMorphism, LRMorphism), b: &(LRMorphism, LRMorphism)) -> Vec<i64> {
    let c = a.1.target;
    (0..c as i64)
        .filter(|&r| {
            let alpha = LRMorphism::horizontal(CyclicMorphism::sigma(c).pow(r));
            let alpha_inv = LRMorphism::horizontal(CyclicMorphism::sigma(c).pow(c as i64 - r));
            a.0.compose(&alpha).ok().as_ref() == Some(&b.0) && alpha_inv.compose(&a.1).ok().as_ref() == Some(&b.1)
        })
        .collect()
}

impl CyclicMorphism {
    /// `self^r` for an endomorphism, `r >= 0`.
    pub fn pow(&self, r: i64) -> CyclicMorphism {
        assert_eq!(self.source, self.target);
        let mut out = CyclicMorphism::identity(self.source, self.modulus);
        for _ in 0..r {
            out = self.compose(&out).unwrap();
        }
        out
    }
}

/// The Cartesian square over a horizontal `h: [a] -> [m]` and a vertical
/// `v: [ml] -> [m]`: apex `[al]`, `h1: [al] -> [ml]`, `v1: [al] -> [a]`.
#[derive(Clone, Debug, Serialize)]
pub struct CartesianSquare {
    pub apex: usize,
    pub h1: LRMorphism,
    pub v1: LRMorphism,
}

pub fn cartesian_square(h: &LRMorphism, v: &LRMorphism) -> Result<CartesianSquare, CycloError> {
    if !h.is_horizontal() || !v.is_vertical() || h.target != v.target {
        return Err(CycloError::InvalidMorphism("need a horizontal and a vertical map with a common target".into()));
    }
    let (a, l) = (h.source, v.degree);
    let m = h.target;
    // v = covering ∘ σ^s, with s read off the witness.
    let s = v.witness.lift[0];
    let lift = (0..(a * l) as i64).map(|x| h.eval(x) - s).collect();
    let h1 = LRMorphism::horizontal(CyclicMorphism::from_trusted(a * l, m * l, Modulus::CYCLIC, lift));
    Ok(CartesianSquare { apex: a * l, h1, v1: LRMorphism::covering(a, l) })
}

/// Outcome of the bounded universal-property search for one square.
#[derive(Clone, Debug, Serialize)]
pub struct UniversalCheck {
    pub commutes: bool,
    pub cones_checked: usize,
    pub failures: Vec<String>,
}

/// Checks the square against every cone with apex `[j]`, `j <= apex_bound`,
/// whose leg into `[ml]` has degree at most `degree_bound`.
pub fn check_cartesian(h: &LRMorphism, v: &LRMorphism, sq: &CartesianSquare, apex_bound: usize, degree_bound: usize) -> UniversalCheck {
    let commutes = v.compose(&sq.h1).ok() == h.compose(&sq.v1).ok();
    let mut failures = Vec::new();
    let mut cones = 0;
    let l = v.degree;
    for j in 1..=apex_bound {
        for d in 1..=degree_bound {
            // Candidate mediating maps z: [j] -> apex of degree d.
            let mut through: HashMap<(LRMorphism, LRMorphism), usize> = HashMap::new();
            for z in lr_hom(j, sq.apex, d) {
                let key = (sq.v1.compose(&z).unwrap(), sq.h1.compose(&z).unwrap());
                *through.entry(key).or_default() += 1;
            }
            let mut by_bottom: HashMap<LRMorphism, Vec<LRMorphism>> = HashMap::new();
            for y in lr_hom(j, v.source, d) {
                by_bottom.entry(v.compose(&y).unwrap()).or_default().push(y);
            }
            for x in lr_hom(j, h.source, d * l) {
                let Some(ys) = by_bottom.get(&h.compose(&x).unwrap()) else { continue };
                for y in ys {
                    cones += 1;
                    let count = through.get(&(x.clone(), y.clone())).copied().unwrap_or(0);
                    if count != 1 && failures.len() < 5 {
                        failures.push(format!("cone ({x}, {y}) factors {count} times"));
                    }
                }
            }
        }
    }
    UniversalCheck { commutes, cones_checked: cones, failures }
}

/// `r_n` on a nondecreasing map of finite ordinals given by its values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeltaMorphism {
    pub source: usize,
    pub target: usize,
    pub values: Vec<usize>,
}

impl DeltaMorphism {
    pub fn new(source: usize, target: usize, values: Vec<usize>) -> Result<Self, CycloError> {
        if values.len() != source || values.windows(2).any(|w| w[0] > w[1]) || values.iter().any(|&v| v >= target) {
            return Err(CycloError::InvalidMorphism(format!("{values:?} is not a monotone map [{source}] -> [{target}]")));
        }
        Ok(DeltaMorphism { source, target, values })
    }

    pub fn identity(n: usize) -> Self {
        DeltaMorphism { source: n, target: n, values: (0..n).collect() }
    }

    pub fn compose(&self, f: &DeltaMorphism) -> Result<DeltaMorphism, CycloError> {
        if f.target != self.source {
            return Err(CycloError::Composition("delta maps are not composable".into()));
        }
        Ok(DeltaMorphism { source: f.source, target: self.target, values: f.values.iter().map(|&x| self.values[x]).collect() })
    }
}

/// All monotone maps `[n] -> [m]`.
pub fn delta_hom(n: usize, m: usize) -> Vec<DeltaMorphism> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(cur: &mut Vec<usize>, n: usize, m: usize, out: &mut Vec<DeltaMorphism>) {
        if cur.len() == n {
            out.push(DeltaMorphism { source: n, target: m, values: cur.clone() });
            return;
        }
        let start = cur.last().copied().unwrap_or(0);
        for v in start..m {
            cur.push(v);
            rec(cur, n, m, out);
            cur.pop();
        }
    }
    rec(&mut cur, n, m, &mut out);
    out
}

/// Edgewise subdivision: `[n] × [m]` in lexicographic order.
pub fn subdivide(n: usize, f: &DeltaMorphism) -> DeltaMorphism {
    let values = (0..n).flat_map(|i| f.values.iter().map(move |&x| i * f.target + x)).collect();
    DeltaMorphism { source: n * f.source, target: n * f.target, values }
}

/// Equivariant maps `f: [nl] -> [m]` with `f ∘ σ^l = σ^{l1} ∘ f`, `0 <= l1 < m`,
/// that violate `m = n * l1`.
#[derive(Clone, Debug, Serialize)]
pub struct TwtReport {
    pub maps_checked: usize,
    pub equivariant_found: usize,
    pub counterexamples: Vec<String>,
}

pub fn verify_twt(n_max: usize, m_max: usize, l_max: usize) -> TwtReport {
    let mut report = TwtReport { maps_checked: 0, equivariant_found: 0, counterexamples: vec![] };
    for n in 2..=n_max {
        for l in 1..=l_max {
            for m in 1..=m_max {
                for f in lambda_hom(n * l, m, 1) {
                    report.maps_checked += 1;
                    // f ∘ σ^l = σ^{l1} ∘ f in the quotient means f(a + l) - f(a)
                    // is one constant l1 + b*m for every a.
                    let shift = f.eval(l as i64) - f.eval(0);
                    if (0..(n * l) as i64).all(|a| f.eval(a + l as i64) - f.eval(a) == shift) {
                        report.equivariant_found += 1;
                        let l1 = shift.rem_euclid(m as i64) as usize;
                        if m != n * l1 {
                            report.counterexamples.push(format!("n={n} l={l} m={m} l1={l1} f={f}"));
                        }
                    }
                }
            }
        }
    }
    report
}

/// Counts for the base-change identity: every degree-`l` map `[m] -> [n]`
/// arises from exactly `|Aut([nl])|` pairs (horizontal, vertical).
#[derive(Clone, Debug, Serialize)]
pub struct BaseChangeCount {
    pub pairs: usize,
    pub automorphisms: usize,
    pub hom_size: usize,
    pub free_action: bool,
}

pub fn base_change_count(m: usize, n: usize, l: usize) -> BaseChangeCount {
    let verticals: Vec<LRMorphism> = lr_hom(n * l, n, l).into_iter().filter(|v| v.is_vertical()).collect();
    let mut fibres: BTreeMap<LRMorphism, usize> = BTreeMap::new();
    let mut pairs = 0;
    for h in lambda_hom(m, n * l, 1) {
        let h = LRMorphism::horizontal(h);
        for v in &verticals {
            pairs += 1;
            *fibres.entry(v.compose(&h).unwrap()).or_default() += 1;
        }
    }
    let aut = n * l;
    let hom = lr_hom(m, n, l);
    let free_action = fibres.len() == hom.len() && fibres.values().all(|&c| c == aut);
    BaseChangeCount { pairs, automorphisms: aut, hom_size: hom.len(), free_action }
}

/// Maps `[n|m] -> [n'|m']` of the extended cyclic category.
pub fn lz_hom(n: usize, m: usize, n2: usize, m2: usize) -> Vec<LRMorphism> {
    if !m2.is_multiple_of(m) {
        return vec![];
    }
    lr_hom(n, n2, m2 / m)
}

/// The same count through represented presheaves: classes of maps
/// `[nm] -> [n'm']` modulo rotations by `n'`, fixed by rotations by `n`.
pub fn lz_hom_count_by_presheaves(n: usize, m: usize, n2: usize, m2: usize) -> usize {
    let post = CyclicMorphism::rotation(n2 * m2, n2 as i64, Modulus::CYCLIC);
    let pre = CyclicMorphism::rotation(n * m, n as i64, Modulus::CYCLIC);
    let maps = lambda_hom(n * m, n2 * m2, 1);
    let orbit = |f: &CyclicMorphism| -> Vec<CyclicMorphism> {
        let mut out = vec![f.clone()];
        for _ in 1..m2 {
            let next = post.compose(out.last().unwrap()).unwrap();
            out.push(next);
        }
        out
    };
    let mut seen: HashSet<CyclicMorphism> = HashSet::new();
    let mut fixed = 0;
    for f in &maps {
        if seen.contains(f) {
            continue;
        }
        let o = orbit(f);
        seen.extend(o.iter().cloned());
        let moved = f.compose(&pre).unwrap();
        if o.contains(&moved) {
            fixed += 1;
        }
    }
    fixed
}

/// Maps `n -> nk` of the restriction/Frobenius category: pairs `(a, b)` with
/// `ab = k`, read as `F_a ∘ R_b`.
pub fn fr_hom(k: usize) -> Vec<(usize, usize)> {
    (1..=k).filter(|a| k.is_multiple_of(*a)).map(|a| (a, k / a)).collect()
}
