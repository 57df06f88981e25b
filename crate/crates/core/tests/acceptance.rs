//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;

use divpow::runner::{report_json, run, Check, ReportEntry, RunConfig};

const SEED: u64 = 2024;

fn config(checks: &[Check], letters: usize, levels: &[u32], maxdeg: u32, strict_z: bool) -> RunConfig {
    RunConfig {
        letters,
        levels: levels.to_vec(),
        maxdeg,
        checks: checks.to_vec(),
        strict_z,
        seed: SEED,
        workers: 8,
        timings: false,
    }
}

struct Criterion {
    name: &'static str,
    configs: Vec<RunConfig>,
    /// Extra condition on the entries beyond "all pass".
    extra: fn(&[ReportEntry]) -> Result<(), String>,
}

fn no_extra(_: &[ReportEntry]) -> Result<(), String> {
    Ok(())
}

fn level_one_counts(entries: &[ReportEntry]) -> Result<(), String> {
    for e in entries.iter().filter(|e| e.n == 1) {
        if e.lhs_rank != 1 {
            return Err(format!("n=1 piece {:?} has rank {}", e.multidegree, e.lhs_rank));
        }
    }
    // commutative monomials of degree k in two letters: k + 1
    for k in 1..=4u32 {
        let total: usize = entries
            .iter()
            .filter(|e| e.n == 1 && e.multidegree.iter().sum::<u32>() == k)
            .map(|e| e.lhs_rank)
            .sum();
        if total != k as usize + 1 {
            return Err(format!("n=1 degree {k}: total rank {total}, expected {}", k + 1));
        }
    }
    let covered = |n: u32, maxdeg: u32| {
        entries.iter().filter(|e| e.n == n).count() == (1..=maxdeg).map(|k| k as usize + 1).sum::<usize>()
    };
    if !(covered(1, 4) && covered(2, 4) && covered(3, 3)) {
        return Err("missing multidegrees".into());
    }
    Ok(())
}

fn nontrivial_kernel(entries: &[ReportEntry]) -> Result<(), String> {
    if entries.iter().any(|e| e.lhs_rank > 0) {
        Ok(())
    } else {
        Err("every kernel piece is zero".into())
    }
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            name: "product axioms on all basis triples, |d| <= 4",
            configs: vec![config(&[Check::TauAxioms], 2, &[1, 2, 3], 4, false)],
            extra: no_extra,
        },
        Criterion {
            name: "evaluation is multiplicative, n in {2,3}, |d| <= 4",
            configs: vec![config(&[Check::PiMult], 2, &[2, 3], 4, false)],
            extra: no_extra,
        },
        Criterion {
            name: "abelianized pieces match invariants, n in {1,2} |d| <= 4, n = 3 |d| <= 3",
            configs: vec![
                config(&[Check::GradedIso], 2, &[1, 2], 4, true),
                config(&[Check::GradedIso], 2, &[3], 3, true),
            ],
            extra: level_one_counts,
        },
        Criterion {
            name: "divided powers of n-th powers via plethysm",
            configs: vec![config(&[Check::Plethysm], 2, &[2, 3], 2, false)],
            extra: no_extra,
        },
        Criterion {
            name: "Cayley-Hamilton elements vanish, n in {1,2,3}",
            configs: vec![config(&[Check::CayleyHamilton], 2, &[1, 2, 3], 2, false)],
            extra: no_extra,
        },
        Criterion {
            name: "projection kernels generated by high divided powers, one letter, d <= 6",
            configs: vec![config(&[Check::TruncationKernel], 1, &[1, 2], 6, false)],
            extra: nontrivial_kernel,
        },
        Criterion {
            name: "division-free characteristic coefficients vs cofactor expansion",
            configs: vec![config(&[Check::Charpoly], 2, &[2, 3, 4], 0, false)],
            extra: no_extra,
        },
        Criterion {
            name: "known closed identities",
            configs: vec![config(&[Check::Identities], 2, &[1], 0, false)],
            extra: no_extra,
        },
        Criterion {
            name: "universal ring of x^2 = 0 at n = 1",
            configs: vec![config(&[Check::Universal], 1, &[1], 0, false)],
            extra: no_extra,
        },
    ]
}

fn evaluate(c: &Criterion) -> (Result<(), String>, String) {
    let mut entries = Vec::new();
    for cfg in &c.configs {
        match run(cfg) {
            Ok(e) => entries.extend(e),
            Err(e) => return (Err(e.to_string()), String::new()),
        }
    }
    let json = report_json(&entries);
    if entries.is_empty() {
        return (Err("no entries".into()), json);
    }
    if let Some(bad) = entries.iter().find(|e| !e.pass) {
        return (Err(format!("failing entry {bad:?}")), json);
    }
    ((c.extra)(&entries), json)
}

fn sequential_json(c: &Criterion) -> Result<String, String> {
    let mut entries = Vec::new();
    for cfg in &c.configs {
        let cfg = RunConfig { workers: 1, ..cfg.clone() };
        entries.extend(run(&cfg).map_err(|e| e.to_string())?);
    }
    Ok(report_json(&entries))
}

fn main() -> ExitCode {
    let list = criteria();
    let mut failures = 0;
    let mut parallel = Vec::new();
    for (i, c) in list.iter().enumerate() {
        let (outcome, json) = evaluate(c);
        match outcome {
            Ok(()) => println!("criterion {}: pass ({})", i + 1, c.name),
            Err(msg) => {
                failures += 1;
                println!("criterion {}: FAIL ({}): {msg}", i + 1, c.name);
            }
        }
        parallel.push(json);
    }
    let mut differing = Vec::new();
    for (i, c) in list.iter().enumerate() {
        match sequential_json(c) {
            Ok(json) if json == parallel[i] => {}
            Ok(_) => differing.push(format!("{}", i + 1)),
            Err(e) => differing.push(format!("{} ({e})", i + 1)),
        }
    }
    if differing.is_empty() {
        println!("criterion 10: pass (reports identical with 1 and 8 workers)");
    } else {
        failures += 1;
        println!("criterion 10: FAIL (reports differ for criteria {})", differing.join(", "));
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
