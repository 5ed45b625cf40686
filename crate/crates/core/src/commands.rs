//! The verification commands behind the `fqcensus` CLI, returning reports.
//!
//! Exit-code contract: 0 when every check agrees, 1 for usage or budget
//! errors (returned as `Err`), 2 when a mathematical mismatch was found.

use std::str::FromStr;

use num_bigint::BigUint;

use crate::census::{
    count_completable, count_reachable_pairs, count_simple_maps, count_unimodular_pencils, duality_check,
    sigma_oracle, tau_oracle, CensusParams,
};
use crate::conjecture::{sweep_cases, verify_conjecture, ConjectureCase};
use crate::error::{Error, Result};
use crate::formulas::{
    delta, gauss_binom, gl_order, mu, psi, psi_from_sum, sigma_formula, tau_closed, tau_psi_relation, TauTable,
};
use crate::gf::{is_prime, FieldCtx};
use crate::linalg::{checked_pow, gaussian_binomial_u64};
use crate::parallel::shard_count;
use crate::report::{fmt_count, fmt_rational, CensusReport, Counterexample, ProblemCounts, ReportParams, Timer};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

/// 2 if any report is a mismatch, else 0.
pub fn exit_code(reports: &[CensusReport]) -> i32 {
    if reports.iter().any(CensusReport::is_mismatch) {
        EXIT_MISMATCH
    } else {
        EXIT_OK
    }
}

/// Exit code for a failed command: internal disagreements are mismatches,
/// everything else is a usage or budget error.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::Disagreement(_) => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

/// `F_q` for a prime power `q`, optionally over an explicit modulus.
pub fn field_for_q(q: u64, modulus: Option<&[u32]>) -> Result<FieldCtx> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q must be a prime power, got {q}")));
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).expect("q >= 2 has a divisor");
    let mut e = 0u32;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    if rest != 1 || !is_prime(p) {
        return Err(Error::InvalidArgument(format!("q must be a prime power, got {q}")));
    }
    match modulus {
        Some(m) => {
            let ctx = FieldCtx::with_modulus(p, m)?;
            if ctx.q() as u64 != q {
                return Err(Error::InvalidArgument(format!("modulus has degree {}, expected {e}", m.len() - 1)));
            }
            Ok(ctx)
        }
        None => FieldCtx::new(p, e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaName {
    Psi,
    Sigma,
    Tau,
    Mu,
    Gauss,
    Gl,
    Delta,
}

impl FromStr for FormulaName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "psi" => FormulaName::Psi,
            "sigma" => FormulaName::Sigma,
            "tau" => FormulaName::Tau,
            "mu" => FormulaName::Mu,
            "gauss" => FormulaName::Gauss,
            "gl" => FormulaName::Gl,
            "delta" => FormulaName::Delta,
            other => return Err(Error::InvalidArgument(format!("unknown formula {other:?}"))),
        })
    }
}

impl FormulaName {
    pub fn as_str(self) -> &'static str {
        match self {
            FormulaName::Psi => "psi",
            FormulaName::Sigma => "sigma",
            FormulaName::Tau => "tau",
            FormulaName::Mu => "mu",
            FormulaName::Gauss => "gauss",
            FormulaName::Gl => "gl",
            FormulaName::Delta => "delta",
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FormulaArgs {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    /// Evaluate `tau` through the recurrence instead of the closed form.
    pub recurrence: bool,
}

fn need(v: Option<usize>, name: &str, formula: FormulaName) -> Result<usize> {
    v.ok_or_else(|| Error::InvalidArgument(format!("formula {} needs --{name}", formula.as_str())))
}

fn reject(v: Option<usize>, name: &str, formula: FormulaName) -> Result<()> {
    match v {
        Some(_) => Err(Error::InvalidArgument(format!("formula {} takes no --{name}", formula.as_str()))),
        None => Ok(()),
    }
}

pub fn cmd_formula(name: FormulaName, field: &FieldCtx, args: FormulaArgs) -> Result<CensusReport> {
    let timer = Timer::start();
    let q = field.q() as u64;
    let mut params = ReportParams::for_field(field);
    let report_value = |v: BigUint| Some(fmt_count(&v));
    let (value, predicted) = match name {
        FormulaName::Psi | FormulaName::Gauss | FormulaName::Delta => {
            let (n, k) = (need(args.n, "n", name)?, need(args.k, "k", name)?);
            reject(args.l, "l", name)?;
            params = params.n(n).k(k);
            match name {
                FormulaName::Psi => (report_value(psi(n as u64, k as u64, q)?), None),
                FormulaName::Gauss => {
                    if k > n {
                        return Err(Error::InvalidArgument(format!("gauss needs k <= n, got n={n}, k={k}")));
                    }
                    (report_value(gauss_binom(n as u64, k as u64, q)?), None)
                }
                _ => (None, Some(fmt_rational(&delta(n as u64, k as u64, q)?))),
            }
        }
        FormulaName::Sigma => {
            let (n, k, l) = (need(args.n, "n", name)?, need(args.k, "k", name)?, need(args.l, "l", name)?);
            params = params.n(n).k(k).l(l);
            (report_value(sigma_formula(n as u64, k as u64, l as u64, q)?), None)
        }
        FormulaName::Tau | FormulaName::Mu => {
            let (k, l) = (need(args.k, "k", name)?, need(args.l, "l", name)?);
            reject(args.n, "n", name)?;
            params = params.k(k).l(l);
            let v = match (name, args.recurrence) {
                (FormulaName::Mu, _) => mu(k as u64, l as u64, q)?,
                (_, true) => TauTable::new(q)?.tau(k as u64, l as u64)?,
                (_, false) => tau_closed(k as u64, l as u64, q)?,
            };
            (report_value(v), None)
        }
        FormulaName::Gl => {
            let k = need(args.k, "k", name)?;
            reject(args.n, "n", name)?;
            reject(args.l, "l", name)?;
            params = params.k(k);
            (report_value(gl_order(k as u64, q)?), None)
        }
    };
    let mut r = CensusReport::new(format!("formula {}", name.as_str()), params);
    r.formula_value = value;
    r.predicted = predicted;
    r.elapsed_ms = timer.elapsed_ms();
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Completable,
    Pencil,
    Reachable,
    Simple,
}

impl FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "completable" => Problem::Completable,
            "pencil" => Problem::Pencil,
            "reachable" => Problem::Reachable,
            "simple" => Problem::Simple,
            other => return Err(Error::InvalidArgument(format!("unknown problem {other:?}"))),
        })
    }
}

impl Problem {
    pub const ALL: [Problem; 4] = [Problem::Completable, Problem::Pencil, Problem::Reachable, Problem::Simple];

    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Completable => "completable",
            Problem::Pencil => "pencil",
            Problem::Reachable => "reachable",
            Problem::Simple => "simple",
        }
    }

    /// Number of field entries the oracle enumerates.
    fn entries(self, n: usize, k: usize) -> usize {
        match self {
            Problem::Completable => n * n,
            _ => n * k,
        }
    }

    pub fn run(self, p: &CensusParams) -> Result<BigUint> {
        match self {
            Problem::Completable => count_completable(p),
            Problem::Pencil => count_unimodular_pencils(p),
            Problem::Reachable => count_reachable_pairs(p),
            Problem::Simple => count_simple_maps(p),
        }
    }
}

fn shards_for(q: u32, entries: usize) -> usize {
    checked_pow(q as u64, entries).map_or(0, shard_count)
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub jobs: usize,
    pub budget: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { jobs: crate::parallel::default_jobs(), budget: crate::census::DEFAULT_BUDGET }
    }
}

fn census_params(field: &FieldCtx, n: usize, k: usize, opts: RunOptions) -> Result<CensusParams> {
    Ok(CensusParams::new(field, n, k)?.with_jobs(opts.jobs).with_budget(opts.budget))
}

pub fn cmd_count(problem: Problem, field: &FieldCtx, n: usize, k: usize, opts: RunOptions) -> Result<CensusReport> {
    let timer = Timer::start();
    if k >= n {
        return Err(Error::InvalidArgument(format!("need k < n, got n={n}, k={k}")));
    }
    let count = problem.run(&census_params(field, n, k, opts)?)?;
    let formula = psi(n as u64, k as u64, field.q() as u64)?;
    let mut r = CensusReport::new(format!("count {}", problem.as_str()), ReportParams::for_field(field).n(n).k(k));
    r.matched = Some(count == formula);
    r.oracle_count = Some(fmt_count(&count));
    r.formula_value = Some(fmt_count(&formula));
    r.shards = shards_for(field.q(), problem.entries(n, k));
    r.elapsed_ms = timer.elapsed_ms();
    Ok(r)
}

fn skipped(mut r: CensusReport, err: &Error) -> CensusReport {
    r.skipped = Some(err.to_string());
    r
}

/// Mismatch record for an internal disagreement between two routes.
fn disagreement(mut r: CensusReport, err: &Error) -> CensusReport {
    r.matched = Some(false);
    r.detail = Some(err.to_string());
    r
}

/// Budget errors become skipped records and disagreements become
/// mismatches; other errors abort.
fn absorb(r: CensusReport, err: Error) -> Result<CensusReport> {
    match err {
        Error::BudgetExceeded { .. } => Ok(skipped(r, &err)),
        Error::Disagreement(_) => Ok(disagreement(r, &err)),
        other => Err(other),
    }
}

/// All four oracle counts for one `(q, n, k)` cell, against `psi`.
pub fn equivalence_cell(command: &str, field: &FieldCtx, n: usize, k: usize, opts: RunOptions) -> Result<CensusReport> {
    let timer = Timer::start();
    let base = CensusReport::new(command, ReportParams::for_field(field).n(n).k(k));
    let p = census_params(field, n, k, opts)?;
    let mut counts = Vec::with_capacity(4);
    for problem in Problem::ALL {
        match problem.run(&p) {
            Ok(c) => counts.push(c),
            Err(e) => return absorb(base, e),
        }
    }
    let formula = psi(n as u64, k as u64, field.q() as u64)?;
    let mut r = base;
    r.matched = Some(counts.iter().all(|c| *c == formula));
    r.oracle_counts = Some(ProblemCounts {
        completable: fmt_count(&counts[0]),
        pencil: fmt_count(&counts[1]),
        reachable: fmt_count(&counts[2]),
        simple: fmt_count(&counts[3]),
    });
    r.formula_value = Some(fmt_count(&formula));
    r.shards = Problem::ALL.iter().map(|pr| shards_for(field.q(), pr.entries(n, k))).sum();
    r.elapsed_ms = timer.elapsed_ms();
    Ok(r)
}

/// `(n, k)` with `1 <= k < n <= max_n`, ascending.
pub fn proper_cells(max_n: usize) -> Vec<(usize, usize)> {
    (2..=max_n).flat_map(|n| (1..n).map(move |k| (n, k))).collect()
}

pub fn verify_equivalence(field: &FieldCtx, max_n: usize, opts: RunOptions) -> Result<Vec<CensusReport>> {
    proper_cells(max_n).into_iter().map(|(n, k)| equivalence_cell("verify equivalence", field, n, k, opts)).collect()
}

pub fn verify_duality(field: &FieldCtx, cells: &[(usize, usize)], opts: RunOptions) -> Result<Vec<CensusReport>> {
    cells
        .iter()
        .map(|&(n, k)| {
            let timer = Timer::start();
            let mut r = CensusReport::new("verify duality", ReportParams::for_field(field).n(n).k(k));
            match duality_check(&census_params(field, n, k, opts)?) {
                Ok(ok) => {
                    r.matched = Some(ok);
                    r.shards = shards_for(field.q(), n * k);
                    r.elapsed_ms = timer.elapsed_ms();
                    Ok(r)
                }
                Err(e) => absorb(r, e),
            }
        })
        .collect()
}

/// `sigma_oracle` against `sigma_formula` for `l <= k < n <= max_n`.
pub fn verify_sigma(field: &FieldCtx, max_n: usize, opts: RunOptions) -> Result<Vec<CensusReport>> {
    let q = field.q();
    let mut out = Vec::new();
    for n in 1..=max_n {
        for k in 0..n {
            for l in 0..=k {
                let timer = Timer::start();
                let mut r = CensusReport::new("verify sigma", ReportParams::for_field(field).n(n).k(k).l(l));
                let p = census_params(field, n, k, opts)?.with_l(l)?;
                match sigma_oracle(&p) {
                    Ok(count) => {
                        let formula = sigma_formula(n as u64, k as u64, l as u64, q as u64)?;
                        r.matched = Some(count == formula);
                        r.oracle_count = Some(fmt_count(&count));
                        r.formula_value = Some(fmt_count(&formula));
                        r.shards = gaussian_binomial_u64(n, k, q as u64).map_or(0, shard_count);
                        r.elapsed_ms = timer.elapsed_ms();
                        out.push(r);
                    }
                    Err(e) => out.push(absorb(r, e)?),
                }
            }
        }
    }
    Ok(out)
}

/// `tau_oracle` against `tau_closed` for `l <= k <= max_k` at ambient
/// dimensions `2k - l` and `2k - l + 1`.
pub fn verify_tau(field: &FieldCtx, max_k: usize, opts: RunOptions) -> Result<Vec<CensusReport>> {
    let q = field.q();
    let mut out = Vec::new();
    for k in 0..=max_k {
        for l in 0..=k {
            for n in [2 * k - l, 2 * k - l + 1] {
                let timer = Timer::start();
                let mut r = CensusReport::new("verify tau", ReportParams::for_field(field).n(n).k(k).l(l));
                let p = census_params(field, n, k, opts)?.with_l(l)?;
                match tau_oracle(&p) {
                    Ok(count) => {
                        let formula = tau_closed(k as u64, l as u64, q as u64)?;
                        r.matched = Some(count == formula);
                        r.oracle_count = Some(fmt_count(&count));
                        r.formula_value = Some(fmt_count(&formula));
                        r.shards = shards_for(q, k * k);
                        r.elapsed_ms = timer.elapsed_ms();
                        out.push(r);
                    }
                    Err(e) => out.push(absorb(r, e)?),
                }
            }
        }
    }
    Ok(out)
}

/// Recurrence against closed form for `l <= k <= max_k`, then the summed
/// form of `psi` and the `tau`/`psi` relation for `k < n <= max_n`.
pub fn verify_recurrence(field: &FieldCtx, max_k: usize, max_n: usize) -> Result<Vec<CensusReport>> {
    let q = field.q() as u64;
    let mut table = TauTable::new(q)?;
    let mut out = Vec::new();
    for k in 0..=max_k {
        for l in 0..=k {
            let timer = Timer::start();
            let rec = table.tau(k as u64, l as u64)?;
            let closed = tau_closed(k as u64, l as u64, q)?;
            let mut r = CensusReport::new("verify recurrence tau", ReportParams::for_field(field).k(k).l(l));
            r.matched = Some(rec == closed);
            r.oracle_count = Some(fmt_count(&rec));
            r.formula_value = Some(fmt_count(&closed));
            r.elapsed_ms = timer.elapsed_ms();
            out.push(r);
        }
    }
    for n in 1..=max_n {
        for k in 0..n {
            let timer = Timer::start();
            let summed = psi_from_sum(n as u64, k as u64, q)?;
            let product = psi(n as u64, k as u64, q)?;
            let mut r = CensusReport::new("verify recurrence psi", ReportParams::for_field(field).n(n).k(k));
            r.matched = Some(summed == product && tau_psi_relation(n as u64, k as u64, q)?);
            r.oracle_count = Some(fmt_count(&summed));
            r.formula_value = Some(fmt_count(&product));
            r.elapsed_ms = timer.elapsed_ms();
            out.push(r);
        }
    }
    Ok(out)
}

pub fn cmd_conjecture(field: &FieldCtx, n: usize, k: usize, m: usize, opts: RunOptions) -> Result<CensusReport> {
    let timer = Timer::start();
    let case = ConjectureCase::new(field, n, k, m)?.with_jobs(opts.jobs).with_budget(opts.budget);
    let total = case.size()?;
    let v = verify_conjecture(&case)?;
    let mut r = CensusReport::new("conjecture", ReportParams::for_field(field).n(n).k(k).m(m));
    let expected = &v.predicted * num_rational::BigRational::from_integer(v.total.clone().into());
    r.oracle_count = Some(fmt_count(&v.unimodular_count));
    r.formula_value = Some(expected.to_integer().to_string());
    r.total = Some(fmt_count(&v.total));
    r.predicted = Some(fmt_rational(&v.predicted));
    r.observed = Some(fmt_rational(&v.observed));
    r.matched = Some(v.matched);
    r.counterexample = v.counterexample.map(|(code, member)| Counterexample { code, entries: member.codes() });
    r.shards = shard_count(total);
    r.elapsed_ms = timer.elapsed_ms();
    Ok(r)
}

/// Every in-budget conjecture case for each field, `q^{nkm} <= limit`.
pub fn conjecture_sweep(fields: &[FieldCtx], limit: u64, jobs: usize) -> Result<Vec<CensusReport>> {
    let mut out = Vec::new();
    for field in fields {
        for (n, k, m) in sweep_cases(field.q(), limit) {
            out.push(cmd_conjecture(field, n, k, m, RunOptions { jobs, budget: limit })?);
        }
    }
    Ok(out)
}

/// One equivalence row per in-budget `(q, n, k)`, ascending. Cells whose
/// largest enumeration exceeds the budget are left out; an empty table is an error.
pub fn cmd_census(fields: &[FieldCtx], max_n: usize, opts: RunOptions) -> Result<Vec<CensusReport>> {
    let mut fields: Vec<&FieldCtx> = fields.iter().collect();
    fields.sort_by_key(|f| f.q());
    let mut out = Vec::new();
    for field in fields {
        for (n, k) in proper_cells(max_n) {
            if checked_pow(field.q() as u64, n * n).is_none_or(|s| s > opts.budget) {
                continue;
            }
            out.push(equivalence_cell("census", field, n, k, opts)?);
        }
    }
    if out.is_empty() {
        return Err(Error::InvalidArgument("no (q, n, k) cell fits in the budget".into()));
    }
    Ok(out)
}
