//! Runs every acceptance criterion, prints one line per criterion and exits
//! non-zero if any of them fails or overruns its time budget.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use cyclokit::report::Report;
use cyclokit::suites::{self, SuiteConfig};
use cyclokit::CycloError;

struct Criterion {
    number: usize,
    suite: &'static str,
    budget: Option<Duration>,
}

const fn criterion(number: usize, suite: &'static str, budget_secs: Option<u64>) -> Criterion {
    let budget = match budget_secs {
        Some(s) => Some(Duration::from_secs(s)),
        None => None,
    };
    Criterion { number, suite, budget }
}

const CRITERIA: [Criterion; 12] = [
    criterion(1, "hom_counts", Some(1)),
    criterion(2, "category_laws", Some(30)),
    criterion(3, "factorization", None),
    criterion(4, "twt", None),
    criterion(5, "exactness", None),
    criterion(6, "hc", Some(10)),
    criterion(7, "covering", None),
    criterion(8, "subdivision", None),
    criterion(9, "exp_tate", None),
    criterion(10, "exp_div", None),
    criterion(11, "stab", None),
    criterion(12, "monoid", None),
];

/// The corpus comparison shares its sweep with the stability check; the
/// budget covers the sweep and both reports.
const CORPUS_BUDGET: Duration = Duration::from_secs(300);

fn line(number: usize, suite: &str, outcome: &Result<Report, CycloError>, elapsed: Duration, budget: Option<Duration>) -> bool {
    let over = budget.is_some_and(|b| elapsed > b);
    let ok = matches!(outcome, Ok(r) if r.passed()) && !over;
    let claim = match outcome {
        Ok(r) => r.claim.clone(),
        Err(e) => format!("error: {e}"),
    };
    let limit = budget.map(|b| format!(" / {}s", b.as_secs())).unwrap_or_default();
    println!("{} {number:>2} {suite:<14} {:>8.2}s{limit}  {claim}", if ok { "PASS" } else { "FAIL" }, elapsed.as_secs_f64());
    if !ok {
        if let Ok(r) = outcome {
            println!("     {}", serde_json::to_string(&r.counterexamples).unwrap());
        }
        if over {
            println!("     over the time budget");
        }
    }
    ok
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failures = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let outcome = suites::run(c.suite, &cfg);
        if !line(c.number, c.suite, &outcome, start.elapsed(), c.budget) {
            failures += 1;
        }
    }
    let start = Instant::now();
    let sweep = suites::corpus_sweep(&cfg);
    let (compare, stability) = (suites::compare(&sweep), suites::stability(&sweep));
    let elapsed = start.elapsed();
    for (number, suite, report) in [(13, "compare", compare), (14, "stability", stability)] {
        if !line(number, suite, &Ok(report), elapsed, Some(CORPUS_BUDGET)) {
            failures += 1;
        }
    }
    if failures == 0 {
        println!("all {} criteria passed", CRITERIA.len() + 2);
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
