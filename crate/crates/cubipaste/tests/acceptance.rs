//! Acceptance run: one line per criterion with its verdict, wall time and
//! time limit. Exits nonzero when any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use cubipaste::runner::{self, RunReport};

const SEED: u64 = 7;

struct Criterion {
    id: u32,
    title: &'static str,
    suites: &'static [&'static str],
    limit: Duration,
}

const CRITERIA: [Criterion; 8] = [
    Criterion { id: 1, title: "cube identities and zigzag normal forms", suites: &["cubical"], limit: secs(30) },
    Criterion { id: 2, title: "congruent links share terminal elements", suites: &["congruence"], limit: secs(30) },
    Criterion { id: 3, title: "divisor axioms, exhaustive and random", suites: &["axioms-cpast"], limit: secs(180) },
    Criterion { id: 4, title: "monad R laws and cartesian squares", suites: &["monad-R"], limit: secs(120) },
    Criterion {
        id: 5,
        title: "monad S laws and cartesian squares, with and without connections",
        suites: &["monad-S", "monad-S-noconn"],
        limit: secs(300),
    },
    Criterion { id: 6, title: "realization against decorations, grid counts", suites: &["realization"], limit: secs(60) },
    Criterion { id: 7, title: "cubical coherator levels over the 3-chain", suites: &["coherator-smoke"], limit: secs(120) },
    Criterion { id: 8, title: "globular sums, models, generation, filtration", suites: &["globular"], limit: secs(120) },
];

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn summary(r: &RunReport) -> String {
    let total: usize = r.checks.iter().map(|c| c.instances).sum();
    let failed: Vec<String> =
        r.checks.iter().filter(|c| !c.passed()).map(|c| format!("{} x{}", c.name, c.failures)).collect();
    if failed.is_empty() {
        format!("{}: {total} checks", r.suite)
    } else {
        format!("{}: {total} checks, failing {}", r.suite, failed.join("; "))
    }
}

fn run_suites(names: &[&str]) -> Result<Vec<RunReport>, String> {
    names.iter().map(|s| runner::run_suite(s, &BTreeMap::new(), SEED, false).map_err(|e| e.to_string())).collect()
}

fn main() {
    if let Err(e) = runner::configure_threads() {
        eprintln!("{e}");
        std::process::exit(2);
    }
    let mut all_ok = true;
    let mut first: Vec<String> = Vec::new();
    for c in &CRITERIA {
        let start = Instant::now();
        let res = run_suites(c.suites);
        let took = start.elapsed();
        let (ok, detail) = match &res {
            Ok(reports) => {
                first.extend(reports.iter().map(|r| r.to_json()));
                let passed = reports.iter().all(|r| r.passed);
                (passed && took <= c.limit, reports.iter().map(summary).collect::<Vec<_>>().join(" | "))
            }
            Err(e) => (false, format!("error: {e}")),
        };
        all_ok &= ok;
        println!(
            "criterion {}: {} {} ({:.1}s, limit {}s) [{}]",
            c.id,
            if ok { "PASS" } else { "FAIL" },
            c.title,
            took.as_secs_f64(),
            c.limit.as_secs(),
            detail
        );
    }
    // a second run of every suite with the same seed
    let start = Instant::now();
    let names: Vec<&str> = CRITERIA.iter().flat_map(|c| c.suites.iter().copied()).collect();
    let (ok, detail) = match run_suites(&names) {
        Ok(reports) => {
            let second: Vec<String> = reports.iter().map(|r| r.to_json()).collect();
            let differing: Vec<&str> = names
                .iter()
                .zip(first.iter().zip(&second))
                .filter(|(_, (a, b))| a != b)
                .map(|(n, _)| *n)
                .collect();
            let bytes: usize = second.iter().map(|s| s.len()).sum();
            if second.len() == first.len() && differing.is_empty() {
                (true, format!("{} reports, {bytes} bytes identical", second.len()))
            } else {
                (false, format!("reports differ: {}", differing.join(", ")))
            }
        }
        Err(e) => (false, format!("error: {e}")),
    };
    all_ok &= ok;
    println!(
        "criterion 9: {} identical reports from two seeded runs ({:.1}s) [{}]",
        if ok { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64(),
        detail
    );
    if !all_ok {
        std::process::exit(1);
    }
}
