//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails. All comparisons are exact.

mod common;

use std::io::Write;
use std::time::Instant;

use common::{field, Check};
use fqcensus::commands::{
    conjecture_sweep, equivalence_cell, proper_cells, verify_duality, verify_recurrence, verify_sigma, verify_tau,
    RunOptions,
};
use fqcensus::report::{render, CensusReport, Format, FIXED_TIMING_ENV};
use fqcensus::Result;

const SWEEP_LIMIT: u64 = 1 << 20;

fn opts(jobs: usize) -> RunOptions {
    RunOptions { jobs, budget: fqcensus::census::DEFAULT_BUDGET }
}

/// Every report ran (no skips) and matched.
fn all_match(reports: &[CensusReport]) -> Check {
    if reports.is_empty() {
        return Err("no cases ran".into());
    }
    for r in reports {
        if let Some(why) = &r.skipped {
            return Err(format!("{} {:?} skipped: {why}", r.command, r.params));
        }
        if r.matched != Some(true) {
            return Err(format!("mismatch: {}", r.to_json_line()));
        }
    }
    Ok(())
}

fn equivalence_suite(jobs: usize) -> Result<Vec<CensusReport>> {
    let plan: [(u64, Vec<(usize, usize)>); 4] =
        [(2, proper_cells(4)), (3, proper_cells(3)), (4, proper_cells(3)), (5, vec![(2, 1)])];
    let mut out = Vec::new();
    for (q, cells) in plan {
        let f = field(q);
        for (n, k) in cells {
            out.push(equivalence_cell("verify equivalence", &f, n, k, opts(jobs))?);
        }
    }
    Ok(out)
}

fn sweep(jobs: usize) -> Result<Vec<CensusReport>> {
    let fields: Vec<_> = [2, 3, 4, 5].into_iter().map(field).collect();
    conjecture_sweep(&fields, SWEEP_LIMIT, jobs)
}

type NamedCheck<'a> = (&'a str, fn() -> Check);

fn check_all(checks: &[NamedCheck]) -> Check {
    for (name, check) in checks {
        check().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn lift(r: Result<Vec<CensusReport>>) -> std::result::Result<Vec<CensusReport>, String> {
    r.map_err(|e| e.to_string())
}

#[test]
fn acceptance() {
    std::env::set_var(FIXED_TIMING_ENV, "1");
    let mut failures = 0;
    let mut report = |id: u32, name: &str, started: Instant, outcome: Check| {
        let secs = started.elapsed().as_secs_f64();
        let line = match outcome {
            Ok(()) => format!("criterion {id} [{name}]: PASS ({secs:.1}s)"),
            Err(e) => {
                failures += 1;
                format!("criterion {id} [{name}]: FAIL ({secs:.1}s): {e}")
            }
        };
        // straight to the handle so the line shows even when output is captured
        let _ = writeln!(std::io::stderr(), "{line}");
    };

    let t = Instant::now();
    let equivalence = lift(equivalence_suite(1));
    report(1, "four-problem equivalence", t, equivalence.as_deref().map_err(Clone::clone).and_then(all_match));

    let t = Instant::now();
    let sigma = [2, 3].into_iter().map(|q| lift(verify_sigma(&field(q), 4, opts(2)))).collect::<std::result::Result<Vec<_>, _>>();
    report(2, "sigma formula", t, sigma.and_then(|rs| rs.iter().try_for_each(|r| all_match(r))));

    let t = Instant::now();
    report(3, "tau closed form", t, lift(verify_tau(&field(2), 3, opts(2))).and_then(|r| all_match(&r)));

    let t = Instant::now();
    let rec = [2, 3, 5].into_iter().map(|q| lift(verify_recurrence(&field(q), 30, 12))).collect::<std::result::Result<Vec<_>, _>>();
    report(4, "recurrence certification", t, rec.and_then(|rs| rs.iter().try_for_each(|r| all_match(r))));

    let t = Instant::now();
    report(5, "duality", t, lift(verify_duality(&field(2), &proper_cells(3), opts(2))).and_then(|r| all_match(&r)));

    let t = Instant::now();
    let sweep_base = lift(sweep(1));
    let outcome = sweep_base.as_deref().map_err(Clone::clone).and_then(|reports| {
        if let Some(bad) = reports.iter().find(|r| r.is_mismatch()) {
            return Err(format!("counterexample found: {}", bad.to_json_line()));
        }
        all_match(reports)
    });
    report(6, "conjecture sweep", t, outcome);

    let t = Instant::now();
    report(
        7,
        "kernel self-consistency",
        t,
        check_all(&[
            ("smith invariance", common::check_smith_invariance),
            ("unimodular vs minors", common::check_unimodular_vs_minors),
            ("smith product", common::check_smith_product_is_char_poly),
            ("irreducible counts", common::check_irreducible_counts),
            ("change of basis", common::check_change_of_basis),
        ]),
    );

    let t = Instant::now();
    let determinism = || -> Check {
        let (Ok(eq), Ok(sw)) = (&equivalence, &sweep_base) else {
            return Err("baseline run failed".into());
        };
        let formats = [Format::Json, Format::Csv];
        for jobs in [2, 8] {
            let (eq_j, sw_j) = (lift(equivalence_suite(jobs))?, lift(sweep(jobs))?);
            for format in formats {
                if render(&eq_j, format) != render(eq, format) {
                    return Err(format!("equivalence report differs at jobs={jobs}"));
                }
                if render(&sw_j, format) != render(sw, format) {
                    return Err(format!("sweep report differs at jobs={jobs}"));
                }
            }
        }
        Ok(())
    };
    report(8, "determinism across jobs", t, determinism());

    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
