//! Named verification suites. Each one checks a single claim against an
//! independent computation and returns a [`Report`].

use std::collections::HashMap;
use std::thread;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use zlin::{FgAbGroup, IntMatrix};

use crate::catcore::*;
use crate::cychom::*;
use crate::cyclo::{syntomic_with, Graded, Pipelines};
use crate::error::CycloError;
use crate::fdm::{exp_div_check, exp_tate_check, pow, stab_truncated_gr, FilteredGroup, SplitFdm};
use crate::fixtures;
use crate::report::Report;

/// Bounds shared by every suite. `n_max` overrides the suite's main size
/// bound; `seed` offsets the randomized corpora.
#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub n_max: Option<usize>,
    pub seed: u64,
}

impl SuiteConfig {
    fn bound(&self, default: usize) -> usize {
        self.n_max.unwrap_or(default)
    }
}

pub const SUITES: [&str; 14] = [
    "hom_counts",
    "category_laws",
    "factorization",
    "twt",
    "exactness",
    "hc",
    "covering",
    "subdivision",
    "exp_tate",
    "exp_div",
    "stab",
    "monoid",
    "compare",
    "stability",
];

pub fn run(name: &str, cfg: &SuiteConfig) -> Result<Report, CycloError> {
    match name {
        "hom_counts" => Ok(hom_counts(cfg)),
        "category_laws" => Ok(category_laws(cfg)),
        "factorization" => Ok(factorization(cfg)),
        "twt" => Ok(twt(cfg)),
        "exactness" => exactness(cfg),
        "hc" => hc(cfg),
        "covering" => Ok(covering(cfg)),
        "subdivision" => subdivision(cfg),
        "exp_tate" => exp_tate(cfg),
        "exp_div" => exp_div(cfg),
        "stab" => stab(cfg),
        "monoid" => monoid(cfg),
        "compare" => Ok(compare(&corpus_sweep(cfg))),
        "stability" => Ok(stability(&corpus_sweep(cfg))),
        _ => Err(CycloError::Input(format!("unknown suite {name:?}; expected one of {} or all", SUITES.join(", ")))),
    }
}

/// Every suite, in order. Independent suites run on separate threads and the
/// corpus sweep is shared by the last two.
pub fn run_all(cfg: &SuiteConfig) -> Vec<Result<Report, CycloError>> {
    thread::scope(|s| {
        let sweep = s.spawn(|| corpus_sweep(cfg));
        let handles: Vec<_> = SUITES[..12].iter().map(|name| s.spawn(move || run(name, cfg))).collect();
        let mut out: Vec<_> = handles.into_iter().map(|h| h.join().expect("suite panicked")).collect();
        let sweep = sweep.join().expect("sweep panicked");
        out.push(Ok(compare(&sweep)));
        out.push(Ok(stability(&sweep)));
        out
    })
}

/// Representatives of the modulus-`k` classes of lifts `[n] -> [m]`, one per
/// class, found by listing nondecreasing values with `f(0)` in `[0, km)`.
fn brute_hom_count(n: usize, m: usize, k: usize) -> usize {
    fn rec(prefix: &mut Vec<usize>, n: usize, cap: usize, count: &mut usize) {
        if prefix.len() == n {
            *count += 1;
            return;
        }
        let last = *prefix.last().unwrap();
        for v in last..=cap {
            prefix.push(v);
            rec(prefix, n, cap, count);
            prefix.pop();
        }
    }
    let mut count = 0;
    for start in 0..k * m {
        rec(&mut vec![start], n, start + m, &mut count);
    }
    count
}

fn hom_counts(cfg: &SuiteConfig) -> Report {
    let n_max = cfg.bound(8);
    let mut r = Report::new("|Λ([1],[n])| = |Λ([n],[1])| = n, matching brute-force lift enumeration", json!({ "n_max": n_max }));
    for n in 1..=n_max {
        let into = lambda_hom(1, n, 1).len();
        let out = lambda_hom(n, 1, 1).len();
        let (bi, bo) = (brute_hom_count(1, n, 1), brute_hom_count(n, 1, 1));
        r.check(into == n && out == n && bi == n && bo == n, || json!({ "n": n, "into": into, "out_of": out, "brute_into": bi, "brute_out_of": bo }));
    }
    // The same oracle on the remaining small hom-sets, all moduli up to 3.
    for a in 1..=n_max.min(4) {
        for b in 1..=n_max.min(4) {
            for k in 1..=3 {
                let (got, want) = (lambda_hom(a, b, k as u64).len(), brute_hom_count(a, b, k));
                r.check(got == want, || json!({ "src": a, "tgt": b, "mod": k, "got": got, "brute": want }));
            }
        }
    }
    r
}

/// Composition as index tables, so that associativity over every composable
/// triple is a table lookup.
struct HomTables {
    homs: HashMap<(usize, usize), Vec<CyclicMorphism>>,
    /// `(a, b, c) -> table[f][g] = index of g ∘ f` in `hom(a, c)`.
    comp: HashMap<(usize, usize, usize), Vec<Vec<usize>>>,
}

fn hom_tables(bound: usize, k: u64, r: &mut Report) -> HomTables {
    let homs: HashMap<_, _> = (1..=bound).flat_map(|a| (1..=bound).map(move |b| ((a, b), lambda_hom(a, b, k)))).collect();
    let index: HashMap<_, HashMap<&CyclicMorphism, usize>> = homs.iter().map(|(key, h)| (*key, h.iter().enumerate().map(|(i, f)| (f, i)).collect())).collect();
    let mut comp = HashMap::new();
    for a in 1..=bound {
        for b in 1..=bound {
            for c in 1..=bound {
                let table = homs[&(a, b)]
                    .iter()
                    .map(|f| {
                        homs[&(b, c)]
                            .iter()
                            .map(|g| match g.compose(f) {
                                Ok(gf) => index[&(a, c)].get(&gf).copied().unwrap_or_else(|| {
                                    r.fail(json!({ "mod": k, "not_in_hom_set": gf.to_string() }));
                                    0
                                }),
                                Err(e) => {
                                    r.fail(json!({ "mod": k, "f": f.to_string(), "g": g.to_string(), "error": e.to_string() }));
                                    0
                                }
                            })
                            .collect()
                    })
                    .collect();
                comp.insert((a, b, c), table);
            }
        }
    }
    HomTables { homs, comp }
}

fn category_laws(cfg: &SuiteConfig) -> Report {
    let bound = cfg.bound(4);
    let mut r = Report::new("Λ, Λ_2, Λ_3 are categories; duality on Λ is a contravariant involution up to the canonical conjugation", json!({ "objects": bound, "moduli": [1, 2, 3] }));
    let mut triples = 0u64;
    for k in 1..=3u64 {
        let t = hom_tables(bound, k, &mut r);
        for a in 1..=bound {
            for b in 1..=bound {
                let id_a = CyclicMorphism::identity(a, Modulus::Finite(k));
                let id_b = CyclicMorphism::identity(b, Modulus::Finite(k));
                for f in &t.homs[&(a, b)] {
                    let ok = f.compose(&id_a).ok().as_ref() == Some(f) && id_b.compose(f).ok().as_ref() == Some(f);
                    r.check(ok, || json!({ "mod": k, "unitality": f.to_string() }));
                }
            }
        }
        for a in 1..=bound {
            for b in 1..=bound {
                for c in 1..=bound {
                    for d in 1..=bound {
                        let (fg, gh) = (&t.comp[&(a, b, c)], &t.comp[&(b, c, d)]);
                        let (left, right) = (&t.comp[&(a, c, d)], &t.comp[&(a, b, d)]);
                        for (fi, row) in fg.iter().enumerate() {
                            for (gi, &gf) in row.iter().enumerate() {
                                for (hi, &hg) in gh[gi].iter().enumerate() {
                                    triples += 1;
                                    if left[gf][hi] != right[fi][hg] {
                                        r.fail(json!({ "mod": k, "objects": [a, b, c, d], "triple": [fi, gi, hi] }));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // Duality on the cyclic category itself.
    for a in 1..=bound {
        for b in 1..=bound {
            let s_a = CyclicMorphism::sigma(a);
            let s_b_inv = CyclicMorphism::rotation(b, -1, Modulus::CYCLIC);
            for f in lambda_hom(a, b, 1) {
                let Ok(d) = f.dual() else {
                    r.fail(json!({ "dual_undefined": f.to_string() }));
                    continue;
                };
                let conj = s_b_inv.compose(&f).and_then(|x| x.compose(&s_a)).ok();
                let ok = d.dual().ok() == conj && d.codual().ok().as_ref() == Some(&f) && (d.source(), d.target()) == (b, a);
                r.check(ok, || json!({ "involution": f.to_string() }));
                for c in 1..=bound {
                    for g in lambda_hom(b, c, 1) {
                        let lhs = g.compose(&f).and_then(|gf| gf.dual()).ok();
                        let rhs = g.dual().and_then(|gd| d.compose(&gd)).ok();
                        r.check(lhs.is_some() && lhs == rhs, || json!({ "contravariance": [f.to_string(), g.to_string()] }));
                    }
                }
            }
        }
    }
    r.parameters["triples_checked"] = json!(triples);
    r
}

/// Largest degree of a test cone's leg into the apex.
const CONE_DEGREE: usize = 2;

fn factorization(cfg: &SuiteConfig) -> Report {
    let bound = cfg.bound(4);
    let (max_degree, apex_bound) = (3, 6);
    let mut r = Report::new(
        "every degree-l map factors as vertical ∘ horizontal, uniquely up to automorphisms of the middle wheel; Cartesian squares satisfy the bounded universal property",
        json!({ "objects": bound, "max_degree": max_degree, "apex_bound": apex_bound, "cone_degree": CONE_DEGREE }),
    );
    let mut maps = 0;
    for m in 1..=bound {
        for n in 1..=bound {
            for l in 1..=max_degree {
                // Every composite of a vertical and a horizontal map, grouped by value.
                let mut composites: HashMap<LRMorphism, Vec<(LRMorphism, LRMorphism)>> = HashMap::new();
                for v in vertical_maps(n, l) {
                    for h in lambda_hom(m, n * l, 1) {
                        let h = LRMorphism::horizontal(h);
                        if let Ok(f) = v.compose(&h) {
                            composites.entry(f).or_default().push((v.clone(), h));
                        }
                    }
                }
                for f in lr_hom(m, n, l) {
                    maps += 1;
                    let (v, h) = f.factorize();
                    let exists = v.is_vertical() && h.is_horizontal() && v.degree() == l && v.compose(&h).ok().as_ref() == Some(&f);
                    r.check(exists, || json!({ "no_factorization": f.to_string() }));
                    let all = composites.get(&f).map(Vec::as_slice).unwrap_or_default();
                    // Aut([nl]) acts freely and transitively on factorizations;
                    // those with the same vertical part differ by a deck move.
                    let free = all.iter().all(|other| relating_automorphisms(&(v.clone(), h.clone()), other).len() == 1);
                    let same_vertical = all.iter().filter(|(w, _)| *w == v).count();
                    r.check(free && all.len() == n * l && same_vertical == l, || {
                        json!({ "map": f.to_string(), "factorizations": all.len(), "same_vertical": same_vertical, "free": free })
                    });
                }
            }
        }
    }
    let mut squares = 0;
    for target in 1..=bound.min(3) {
        for l in 2..=3 {
            let verticals = vertical_maps(target, l);
            for a in 1..=bound {
                if a * l > apex_bound {
                    continue;
                }
                for h in lambda_hom(a, target, 1) {
                    let h = LRMorphism::horizontal(h);
                    for v in &verticals {
                        squares += 1;
                        match cartesian_square(&h, v) {
                            Ok(sq) => {
                                let c = check_cartesian(&h, v, &sq, apex_bound, CONE_DEGREE);
                                r.check(c.commutes && c.failures.is_empty(), || json!({ "h": h.to_string(), "v": v.to_string(), "failures": c.failures }));
                            }
                            Err(e) => r.fail(json!({ "h": h.to_string(), "v": v.to_string(), "error": e.to_string() })),
                        }
                    }
                }
            }
        }
    }
    r.parameters["maps_checked"] = json!(maps);
    r.parameters["squares_checked"] = json!(squares);
    r
}

fn twt(cfg: &SuiteConfig) -> Report {
    let n_max = cfg.bound(4);
    let (m_max, l_max) = (8, 3);
    let t = verify_twt(n_max, m_max, l_max);
    let mut r = Report::new("an equivariant f: [nl] -> [m] with f∘σ^l = σ^{l1}∘f forces m = n·l1", json!({ "n_max": n_max, "m_max": m_max, "l_max": l_max, "maps_checked": t.maps_checked, "equivariant": t.equivariant_found }));
    for c in t.counterexamples {
        r.fail(json!(c));
    }
    r.check(t.equivariant_found > 0, || json!("no equivariant maps found, sweep is vacuous"));
    r
}

fn exactness(cfg: &SuiteConfig) -> Result<Report, CycloError> {
    let n_max = cfg.bound(6);
    let w = build_wheel_functors(n_max)?;
    let mut r = Report::new("0 -> ℤ -> ℤ[V] -> ℤ[E] -> ℤ -> 0 is exact and natural at every wheel", json!({ "n_max": n_max, "morphisms_checked": w.morphisms_checked }));
    for (n, ok) in &w.exact {
        r.check(*ok, || json!({ "not_exact_at": n }));
    }
    for f in w.naturality_failures {
        r.fail(json!({ "naturality": f }));
    }
    Ok(r)
}

fn hc(cfg: &SuiteConfig) -> Result<Report, CycloError> {
    let top = cfg.bound(8);
    let mut r = Report::new("HC of the constant cyclic module ℤ is ℤ in even degrees and 0 in odd degrees", json!({ "degree_max": top }));
    let m = CyclicModule::constant(top + 2, 1);
    m.validate()?;
    for (k, g) in cyclic_homology(&m, top)?.iter().enumerate() {
        let want = if k % 2 == 0 { FgAbGroup::free(1) } else { FgAbGroup::zero() };
        r.check(*g == want, || json!({ "degree": k, "got": g.to_string(), "want": want.to_string() }));
    }
    Ok(r)
}

fn covering(cfg: &SuiteConfig) -> Report {
    let bound = cfg.bound(4);
    let mut r = Report::new("the covering comparison of the four-term sequence commutes with n·id on the right", json!({ "n": [2, 3, 4], "objects": bound }));
    let mut squares = 0;
    for n in 2..=4 {
        let c = nti_diagram_check(n, bound);
        squares += c.squares_checked;
        for f in c.failures {
            r.fail(json!({ "n": n, "failure": f }));
        }
    }
    r.parameters["squares_checked"] = json!(squares);
    r
}

const POSET_CORPUS: usize = 12;

fn subdivision(cfg: &SuiteConfig) -> Result<Report, CycloError> {
    let depth = cfg.bound(4);
    let mut r = Report::new("cochains of M and of its edgewise subdivision have the same cohomology", json!({ "depth": depth, "primes": [2, 3], "seed": cfg.seed }));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut corpus: Vec<Box<dyn Cosimplicial + Send + Sync>> = vec![Box::new(ConstantCosimplicial), Box::new(CircleCochains)];
    for _ in 0..POSET_CORPUS {
        corpus.push(Box::new(PosetCochains::random(&mut rng, 3, 2)));
    }
    for m in &corpus {
        for p in [2, 3] {
            let s = subdivision_invariance_check(p, m.as_ref(), depth)?;
            r.check(s.equal, || {
                let show = |v: &[FgAbGroup]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
                json!({ "module": s.module, "p": p, "direct": show(&s.direct), "subdivided": show(&s.subdivided) })
            });
        }
    }
    r.parameters["modules"] = json!(corpus.len());
    Ok(r)
}

fn exp_tate(cfg: &SuiteConfig) -> Result<Report, CycloError> {
    let m_max = cfg.bound(4);
    let mut r = Report::new("Exp(ℤ(n)) is quasi-isomorphic to ℤ[2n], certified by an acyclic cone", json!({ "weights": [0, 1, 2], "wheels": m_max }));
    for n in 0..=2 {
        for (m, ok) in exp_tate_check(n, m_max)? {
            r.check(ok, || json!({ "weight": n, "wheel": m }));
        }
    }
    Ok(r)
}

fn exp_div(cfg: &SuiteConfig) -> Result<Report, CycloError> {
    let m_max = cfg.bound(3);
    let seeds = cfg.seed..cfg.seed + fixtures::RANDOM_CORPUS_SIZE;
    let mut r = Report::new(
        "Exp(Div_n V)([m]) maps isomorphically onto the σ^m-invariants of Exp(V)([nm]), naturally in [m]",
        json!({ "n": [2, 3], "wheels": m_max, "seeds": [seeds.start, seeds.end] }),
    );
    for seed in seeds {
        let v = fixtures::random(seed).build(2, 1)?.complex;
        for n in [2, 3] {
            let e = exp_div_check(&v, n, m_max)?;
            r.check(e.passed(), || json!({ "seed": seed, "n": n, "report": e }));
        }
    }
    Ok(r)
}

fn stab(cfg: &SuiteConfig) -> Result<Report, CycloError> {
    let j_max = cfg.bound(5) as u32;
    let window = 3;
    let mut r = Report::new("every graded piece of the truncated Stab_p(ℤ) is ℤ/p", json!({ "primes": [2, 3], "precision_max": j_max, "window": window }));
    for p in [2u64, 3] {
        // Independent count: ℤ/p^j modulo the image of multiplication by p.
        let expected = FgAbGroup::cyclic(BigInt::from(p));
        for j in 1..=j_max {
            let q = p.pow(j);
            let image: std::collections::BTreeSet<u64> = (0..q).map(|x| (x * p) % q).collect();
            let brute = q / image.len() as u64;
            r.check(brute == p, || json!({ "p": p, "j": j, "brute_index": brute }));
            for (l, g) in stab_truncated_gr(&FilteredGroup::pure(0, 1), p, j, window)? {
                r.check(g == expected, || json!({ "p": p, "j": j, "level": l, "gr": g.to_string() }));
            }
        }
    }
    Ok(r)
}

/// `|ker(1 - t)|` and `|coker(1 - t)|` of `x ↦ t·x` on `ℤ/q` by enumeration.
fn brute_monoid(q: u64, t: u64) -> (u64, u64) {
    let f = |x: u64| (x + q * q - (t * x) % q) % q;
    let kernel = (0..q).filter(|&x| f(x) == 0).count() as u64;
    let image: std::collections::BTreeSet<u64> = (0..q).map(f).collect();
    (kernel, q / image.len() as u64)
}

fn monoid(cfg: &SuiteConfig) -> Result<Report, CycloError> {
    let j_max = cfg.bound(5) as u32;
    let mut r = Report::new("the two-term monoid complex of t ≡ 0 mod p on a ℤ/p^j-module is acyclic", json!({ "primes": [2, 3], "precision_max": j_max, "seed": cfg.seed }));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for p in [2u64, 3] {
        for j in 1..=j_max {
            let q = pow(p, j);
            let qn = p.pow(j);
            let mut cases = Vec::new();
            for x in 0..p.pow(j - 1).min(27) {
                cases.push(IntMatrix::scalar(1, BigInt::from(x * p)));
            }
            for _ in 0..4 {
                let entries: Vec<i64> = (0..4).map(|_| rng.gen_range(-5i64..=5) * p as i64).collect();
                cases.push(IntMatrix::from_rows(&[entries[..2].to_vec(), entries[2..].to_vec()]));
            }
            for t in cases {
                let n = t.rows();
                let h = monoid_cohomology(&IntMatrix::scalar(n, q.clone()), &t, None)?;
                let brute = if n == 1 { Some(brute_monoid(qn, u64::try_from(t.get(0, 0)).unwrap())) } else { None };
                let ok = h.h0.is_zero() && h.h1.is_zero() && brute.is_none_or(|b| b == (1, 1));
                r.check(ok, || json!({ "p": p, "j": j, "t": format!("{t:?}"), "h0": h.h0.to_string(), "h1": h.h1.to_string(), "brute": brute }));
            }
        }
    }
    Ok(r)
}

/// Syntomic cohomology and TC for one fixture at one prime and precision.
#[derive(Clone, Debug)]
struct SweepCase {
    fixture: String,
    p: u64,
    j: u32,
    syntomic: Graded,
    /// Depths `1..=max_depth + 1`.
    tc: Vec<Graded>,
    relation_holds: bool,
    /// Both invariants recomputed from Frobenius data at precision `j + 1`.
    escalated_syntomic: Graded,
    escalated_tc: Vec<Graded>,
}

pub struct CorpusSweep {
    max_depth: usize,
    cases: Vec<SweepCase>,
    errors: Vec<serde_json::Value>,
}

const SWEEP_DEGREES: std::ops::RangeInclusive<i64> = 0..=2;

fn sweep_case(fixture: &SplitFdm, p: u64, j: u32, max_depth: usize) -> Result<SweepCase, CycloError> {
    let m = fixture.build(p, j + 1)?;
    let mut pipes = Pipelines::new(m.clone());
    let tower = pipes.tower(j, j)?;
    let tc = (1..=max_depth + 1).map(|k| tower.tc(k, SWEEP_DEGREES)).collect::<Result<Vec<_>, _>>()?;
    let mut relation_holds = true;
    for k in 2..=max_depth.max(2) {
        relation_holds &= tower.relation_holds(k)?;
    }
    let escalated = pipes.tower(j, j + 1)?;
    let escalated_tc = (1..=max_depth).map(|k| escalated.tc(k, SWEEP_DEGREES)).collect::<Result<Vec<_>, _>>()?;
    Ok(SweepCase {
        fixture: fixture.name.clone(),
        p,
        j,
        syntomic: syntomic_with(&m, j, j, SWEEP_DEGREES)?,
        tc,
        relation_holds,
        escalated_syntomic: syntomic_with(&m, j, j + 1, SWEEP_DEGREES)?,
        escalated_tc,
    })
}

pub fn corpus_sweep(cfg: &SuiteConfig) -> CorpusSweep {
    let max_depth = cfg.bound(4);
    let mut corpus = vec![fixtures::trivial(), fixtures::tate_twist()];
    corpus.extend((cfg.seed..cfg.seed + fixtures::RANDOM_CORPUS_SIZE).map(fixtures::random));
    let jobs: Vec<_> = corpus.iter().flat_map(|f| [2u64, 3].into_iter().flat_map(move |p| (1..=3).map(move |j| (f, p, j)))).collect();
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    let results: Vec<_> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let jobs = &jobs;
                s.spawn(move || jobs.iter().enumerate().filter(|(i, _)| i % workers == w).map(|(i, &(f, p, j))| (i, sweep_case(f, p, j, max_depth).map_err(|e| json!({ "fixture": f.name, "p": p, "j": j, "error": e.to_string() })))).collect::<Vec<_>>())
            })
            .collect();
        let mut all: Vec<_> = handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect();
        all.sort_by_key(|(i, _)| *i);
        all.into_iter().map(|(_, r)| r).collect()
    });
    let mut sweep = CorpusSweep { max_depth, cases: vec![], errors: vec![] };
    for r in results {
        match r {
            Ok(c) => sweep.cases.push(c),
            Err(e) => sweep.errors.push(e),
        }
    }
    sweep
}

fn show(g: &Graded) -> serde_json::Value {
    g.iter().map(|(d, h)| (d.to_string(), json!(h.to_string()))).collect::<serde_json::Map<_, _>>().into()
}

fn sweep_parameters(s: &CorpusSweep) -> serde_json::Value {
    json!({ "fixtures": 2 + fixtures::RANDOM_CORPUS_SIZE, "primes": [2, 3], "precision": [1, 2, 3], "max_depth": s.max_depth, "degrees": [0, 2], "cases": s.cases.len() })
}

pub fn compare(s: &CorpusSweep) -> Report {
    let mut r = Report::new("truncated TC agrees with syntomic cohomology in degrees 0..2", sweep_parameters(s));
    for e in &s.errors {
        r.fail(e.clone());
    }
    for c in &s.cases {
        for k in 1..=s.max_depth {
            let tc = &c.tc[k - 1];
            r.check(*tc == c.syntomic, || json!({ "fixture": c.fixture, "p": c.p, "j": c.j, "depth": k, "syntomic": show(&c.syntomic), "tc": show(tc) }));
        }
        r.check(c.relation_holds, || json!({ "fixture": c.fixture, "p": c.p, "j": c.j, "tower_relation": false }));
    }
    r
}

pub fn stability(s: &CorpusSweep) -> Report {
    let mut r = Report::new("TC answers are unchanged by one more tower level and by Frobenius data at one more digit of precision", sweep_parameters(s));
    for e in &s.errors {
        r.fail(e.clone());
    }
    for c in &s.cases {
        for k in 1..=s.max_depth {
            let (here, deeper, escalated) = (&c.tc[k - 1], &c.tc[k], &c.escalated_tc[k - 1]);
            r.check(here == deeper, || json!({ "fixture": c.fixture, "p": c.p, "j": c.j, "depth": k, "tc": show(here), "deeper": show(deeper) }));
            r.check(here == escalated, || json!({ "fixture": c.fixture, "p": c.p, "j": c.j, "depth": k, "tc": show(here), "escalated": show(escalated) }));
        }
        r.check(c.syntomic == c.escalated_syntomic, || json!({ "fixture": c.fixture, "p": c.p, "j": c.j, "syntomic": show(&c.syntomic), "escalated": show(&c.escalated_syntomic) }));
    }
    r
}
