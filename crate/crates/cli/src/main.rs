use std::io::Write;
use std::ops::RangeInclusive;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyclokit::catcore::{lambda_hom, lr_hom, CyclicMorphism, LRMorphism};
use cyclokit::cychom::{cyclic_homology, edge_action, vertex_action, CyclicModule};
use cyclokit::cyclo::{syntomic, tc_syntomic_compare, Graded, Pipelines, STRAND_HI, STRAND_LO};
use cyclokit::fdm::{exp_div_check, stab_truncated_gr, CyclotomicFdm, Expansion, FilteredGroup, SplitFdm};
use cyclokit::fixtures;
use cyclokit::suites::{self, SuiteConfig};
use cyclokit::CycloError;

#[derive(Parser)]
#[command(name = "cyclokit", version, about = "Cyclic categories, cyclic homology and filtered Dieudonné modules, computed exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Category {
    /// Cyclic maps, optionally with a finite modulus.
    Lambda,
    /// Maps of positive degree.
    Lr,
}

#[derive(Args)]
struct FdmArgs {
    /// Fixture name (trivial, tate_twist, zero, random_<seed>) or a JSON file.
    #[arg(long, default_value = "trivial")]
    fixture: String,
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Precision j: answers are reported mod p^j.
    #[arg(long, env = "CYCLOKIT_PRECISION", default_value_t = 2)]
    prec: u32,
    /// Cohomological degrees, as `lo..hi`.
    #[arg(long, default_value = "0..2", value_parser = parse_range)]
    degrees: RangeInclusive<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// List a hom-set.
    Hom {
        #[arg(long, value_enum, default_value = "lambda")]
        cat: Category,
        #[arg(long)]
        src: usize,
        #[arg(long)]
        tgt: usize,
        /// Modulus of a cyclic hom-set.
        #[arg(long = "mod", default_value_t = 1)]
        modulus: u64,
        /// Degree of an `lr` hom-set.
        #[arg(long, default_value_t = 1)]
        degree: usize,
    },
    /// Compose two maps given as JSON, `g ∘ f`.
    Compose {
        #[arg(long, value_enum, default_value = "lambda")]
        cat: Category,
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
    },
    /// Dual of a cyclic map given as JSON.
    Dual {
        #[arg(long)]
        f: String,
    },
    /// Vertical-horizontal factorization of a degree-`l` map given as JSON.
    Factorize {
        #[arg(long)]
        f: String,
    },
    /// Cyclic homology of a cyclic module.
    Hc {
        /// constant, zero, vertex, edge, or a JSON file.
        #[arg(long, default_value = "constant")]
        module: String,
        #[arg(long, default_value_t = 8)]
        degree_max: usize,
    },
    /// Homology of the cyclic expansion at each wheel.
    Exp {
        #[arg(long, default_value = "trivial")]
        fixture: String,
        #[arg(long, default_value_t = 3)]
        nmax: usize,
    },
    /// Subdivision of a fixture and the comparison of expansions.
    Div {
        #[arg(long, default_value = "trivial")]
        fixture: String,
        #[arg(long, default_value_t = 2)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
    },
    /// Graded pieces of the truncated stabilization of `ℤ(w)^r`.
    Stab {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, env = "CYCLOKIT_PRECISION", default_value_t = 2)]
        prec: u32,
        #[arg(long, default_value_t = 3)]
        window: i64,
        #[arg(long, default_value_t = 0)]
        weight: i64,
        #[arg(long, default_value_t = 1)]
        rank: usize,
    },
    /// Syntomic cohomology mod p^j.
    Syn(FdmArgs),
    /// Truncated topological cyclic homology mod p^j.
    Tc {
        #[command(flatten)]
        fdm: FdmArgs,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// TC against syntomic cohomology, with depth and precision stability.
    Compare {
        #[command(flatten)]
        fdm: FdmArgs,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Run a named verification suite, or `all`.
    Verify {
        suite: String,
        /// Overrides the suite's main size bound.
        #[arg(long)]
        nmax: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo: i64 = lo.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: i64 = hi.trim().parse().map_err(|e| format!("{e}"))?;
    if lo > hi {
        return Err("empty range".into());
    }
    Ok(lo..=hi)
}

/// Why a command did not succeed.
enum Failure {
    /// The input was malformed or out of range.
    Usage(String),
    /// The computation ran and a claim did not hold.
    Assertion(Value),
}

impl From<CycloError> for Failure {
    fn from(e: CycloError) -> Self {
        match e {
            CycloError::Input(_) | CycloError::InvalidMorphism(_) | CycloError::Composition(_) | CycloError::Precision(_) | CycloError::Window(_) | CycloError::Torsion(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Assertion(json!({ "error": other.to_string() })),
        }
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Usage(format!("{what}: {e}")))
}

fn read_file(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn load_fixture(name: &str) -> Result<SplitFdm, Failure> {
    if name.ends_with(".json") || Path::new(name).is_file() {
        return parse_json("fixture", &read_file(name)?);
    }
    Ok(fixtures::by_name(name)?)
}

fn load_module(name: &str, max_size: usize) -> Result<CyclicModule, Failure> {
    let m = match name {
        "constant" => CyclicModule::constant(max_size, 1),
        "zero" => CyclicModule::zero(max_size),
        "vertex" => CyclicModule::from_functor(max_size, vertex_action, |n| n),
        "edge" => CyclicModule::from_functor(max_size, edge_action, |n| n),
        path => parse_json("cyclic module", &read_file(path)?)?,
    };
    m.validate()?;
    Ok(m)
}

fn groups(g: &Graded) -> Value {
    g.iter().map(|(d, h)| (d.to_string(), json!(h.to_string()))).collect::<serde_json::Map<_, _>>().into()
}

fn build(args: &FdmArgs, precision: u32) -> Result<CyclotomicFdm, Failure> {
    Ok(load_fixture(&args.fixture)?.build(args.p, precision)?)
}

fn run(command: Command) -> Result<Value, Failure> {
    match command {
        Command::Hom { cat: Category::Lambda, src, tgt, modulus, .. } => {
            if src == 0 || tgt == 0 || modulus == 0 {
                return Err(Failure::Usage("wheels and moduli must be positive".into()));
            }
            let maps = lambda_hom(src, tgt, modulus);
            Ok(json!({ "count": maps.len(), "morphisms": maps }))
        }
        Command::Hom { cat: Category::Lr, src, tgt, degree, .. } => {
            if src == 0 || tgt == 0 || degree == 0 {
                return Err(Failure::Usage("wheels and degrees must be positive".into()));
            }
            let maps = lr_hom(src, tgt, degree);
            Ok(json!({ "count": maps.len(), "morphisms": maps }))
        }
        Command::Compose { cat: Category::Lambda, g, f } => {
            let (g, f): (CyclicMorphism, CyclicMorphism) = (parse_json("g", &g)?, parse_json("f", &f)?);
            Ok(json!(g.compose(&f)?))
        }
        Command::Compose { cat: Category::Lr, g, f } => {
            let (g, f): (LRMorphism, LRMorphism) = (parse_json("g", &g)?, parse_json("f", &f)?);
            Ok(json!(g.compose(&f)?))
        }
        Command::Dual { f } => {
            let f: CyclicMorphism = parse_json("f", &f)?;
            Ok(json!(f.dual()?))
        }
        Command::Factorize { f } => {
            let f: LRMorphism = parse_json("f", &f)?;
            let (v, h) = f.factorize();
            Ok(json!({ "vertical": v, "horizontal": h }))
        }
        Command::Hc { module, degree_max } => {
            let m = load_module(&module, degree_max + 2)?;
            let hc = cyclic_homology(&m, degree_max)?;
            Ok(json!({ "module": module, "hc": hc.iter().map(ToString::to_string).collect::<Vec<_>>() }))
        }
        Command::Exp { fixture, nmax } => {
            let v = load_fixture(&fixture)?.build(2, 1)?.complex;
            let e = Expansion::of(&v, STRAND_LO, STRAND_HI);
            let mut wheels = serde_json::Map::new();
            for n in 1..=nmax {
                let c = e.at(n);
                let h: serde_json::Map<_, _> = (STRAND_LO..=STRAND_HI).filter_map(|i| c.homology(i).ok().map(|g| (i.to_string(), json!(g.to_string())))).collect();
                wheels.insert(n.to_string(), h.into());
            }
            Ok(json!({ "fixture": fixture, "homology": wheels }))
        }
        Command::Div { fixture, n, nmax } => {
            let v = load_fixture(&fixture)?.build(2, 1)?.complex;
            let d = v.div(n)?;
            let report = exp_div_check(&v, n, nmax)?;
            if !report.passed() {
                return Err(Failure::Assertion(json!(report)));
            }
            Ok(json!({ "fixture": fixture, "n": n, "v0": d.v0, "v1": d.v1, "comparison": report }))
        }
        Command::Stab { p, prec, window, weight, rank } => {
            let gr = stab_truncated_gr(&FilteredGroup::pure(weight, rank), p, prec, window)?;
            let gr: serde_json::Map<_, _> = gr.into_iter().map(|(l, g)| (l.to_string(), json!(g.to_string()))).collect();
            Ok(json!({ "p": p, "precision": prec, "window": [-window, prec], "gr": gr }))
        }
        Command::Syn(args) => {
            let m = build(&args, args.prec)?;
            Ok(json!({ "fixture": args.fixture, "p": args.p, "precision": args.prec, "syntomic": groups(&syntomic(&m, args.prec, args.degrees.clone())?) }))
        }
        Command::Tc { fdm: args, depth } => {
            if depth == 0 {
                return Err(Failure::Usage("depth must be positive".into()));
            }
            let m = build(&args, args.prec)?;
            let tc = Pipelines::new(m).tc(depth, args.prec, args.degrees.clone())?;
            Ok(json!({ "fixture": args.fixture, "p": args.p, "precision": args.prec, "depth": depth, "tc": groups(&tc) }))
        }
        Command::Compare { fdm: args, depth } => {
            if depth == 0 {
                return Err(Failure::Usage("depth must be positive".into()));
            }
            let m = build(&args, args.prec + 1)?;
            let r = tc_syntomic_compare(&args.fixture, &m, depth, args.prec, args.degrees.clone())?;
            let mut out = json!(r);
            out["result"] = json!(if r.passed() { "match" } else { "mismatch" });
            if r.passed() {
                Ok(out)
            } else {
                Err(Failure::Assertion(out))
            }
        }
        Command::Verify { suite, nmax, seed } => {
            if nmax == Some(0) {
                return Err(Failure::Usage("--nmax must be positive".into()));
            }
            let cfg = SuiteConfig { n_max: nmax, seed };
            let reports = if suite == "all" { suites::run_all(&cfg) } else { vec![suites::run(&suite, &cfg)] };
            let mut out = Vec::new();
            let mut passed = true;
            for r in reports {
                let r = r?;
                passed &= r.passed();
                out.push(r);
            }
            let out = if suite == "all" { json!({ "status": if passed { "pass" } else { "fail" }, "suites": out }) } else { json!(out[0]) };
            if passed {
                Ok(out)
            } else {
                Err(Failure::Assertion(out))
            }
        }
    }
}

/// Writes a report, ignoring a closed pipe.
fn emit(v: &Value) {
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("reports are valid JSON"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(v) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Assertion(v)) => {
            emit(&v);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
