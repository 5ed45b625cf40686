//! Exhaustive check of the unimodular density of the degree-`m` family
//! `x^m [I_k; 0] + sum_{i<m} x^i A_i`, `A_i in M_{n,k}(F_q)`, against
//! `delta_q(n, k)`.
//!
//! Family members are numbered by concatenating the matrix codes of
//! `A_0, ..., A_{m-1}` (`A_0` most significant), i.e. by the code of the
//! `mn x k` matrix that stacks them.

use std::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

use crate::census::{count_unimodular_pencils, CensusParams, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::formulas::delta;
use crate::gf::FieldCtx;
use crate::linalg::{matrix_range, space_size, MatrixFq, MatrixIter};
use crate::parallel::{default_jobs, run_sharded};
use crate::poly::{build_family_member, stacked_member_is_unimodular, PolyMatrix};

#[derive(Debug, Clone)]
pub struct ConjectureCase {
    pub field: FieldCtx,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub budget: u64,
    pub jobs: usize,
}

impl ConjectureCase {
    pub fn new(field: &FieldCtx, n: usize, k: usize, m: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidArgument(format!("need k < n, got n={n}, k={k}")));
        }
        if k == 0 || m == 0 {
            return Err(Error::InvalidArgument(format!("need k >= 1 and m >= 1, got k={k}, m={m}")));
        }
        Ok(ConjectureCase { field: field.clone(), n, k, m, budget: DEFAULT_BUDGET, jobs: default_jobs() })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    /// `q^{nkm}`, refused when above the budget.
    pub fn size(&self) -> Result<u64> {
        space_size(self.field.q(), self.n * self.k * self.m, self.budget)
    }

    /// The member with the given family code.
    pub fn member(&self, code: u64) -> Result<PolyMatrix> {
        let stacked = MatrixFq::from_code(&self.field, self.m * self.n, self.k, code);
        member_of(&self.field, self.n, self.k, self.m, &stacked)
    }
}

fn member_of(ctx: &FieldCtx, n: usize, k: usize, m: usize, stacked: &MatrixFq) -> Result<PolyMatrix> {
    let coeffs: Vec<MatrixFq> = (0..m).map(|i| stacked.row_block(i * n..(i + 1) * n)).collect();
    build_family_member(ctx, n, k, &coeffs)
}

/// Family members with codes in a range, in code order.
pub struct FamilyIter {
    inner: MatrixIter,
    ctx: FieldCtx,
    n: usize,
    k: usize,
    m: usize,
}

impl Iterator for FamilyIter {
    type Item = PolyMatrix;

    fn next(&mut self) -> Option<PolyMatrix> {
        let stacked = self.inner.next()?;
        Some(member_of(&self.ctx, self.n, self.k, self.m, &stacked).expect("blocks have the family shape"))
    }
}

pub fn family_range(ctx: &FieldCtx, n: usize, k: usize, m: usize, range: Range<u64>) -> FamilyIter {
    FamilyIter { inner: matrix_range(ctx, m * n, k, range), ctx: ctx.clone(), n, k, m }
}

/// All `q^{nkm}` members exactly once.
pub fn enumerate_family(case: &ConjectureCase) -> Result<FamilyIter> {
    let total = case.size()?;
    Ok(family_range(&case.field, case.n, case.k, case.m, 0..total))
}

#[derive(Debug, Clone)]
pub struct ConjectureVerdict {
    pub unimodular_count: BigUint,
    pub total: BigUint,
    pub predicted: BigRational,
    pub observed: BigRational,
    pub matched: bool,
    /// On a mismatch: the first non-unimodular member in code order, with its code.
    pub counterexample: Option<(u64, PolyMatrix)>,
}

/// Counts unimodular members and compares the exact fraction with `delta_q(n, k)`.
/// A mismatch is a result, not an error.
pub fn verify_conjecture(case: &ConjectureCase) -> Result<ConjectureVerdict> {
    let total = case.size()?;
    let (n, k, m) = (case.n, case.k, case.m);
    let parts = run_sharded(&case.field, total, case.jobs, |ctx, range| {
        let mut hits = 0u64;
        let mut first_miss = None;
        let mut stacked = MatrixFq::zeros(ctx, m * n, k);
        for code in range {
            stacked.fill_from_code(code);
            if stacked_member_is_unimodular(ctx, n, k, &stacked) {
                hits += 1;
            } else if first_miss.is_none() {
                first_miss = Some(code);
            }
        }
        Ok((hits, first_miss))
    })?;
    let count: u64 = parts.iter().map(|(h, _)| h).sum();
    let predicted = delta(n as u64, k as u64, case.field.q() as u64)?;
    let observed = BigRational::new(BigInt::from(count), BigInt::from(total));
    let matched = observed == predicted;
    let counterexample = if matched {
        None
    } else {
        match parts.iter().find_map(|(_, miss)| *miss) {
            Some(code) => Some((code, case.member(code)?)),
            None => None,
        }
    };
    Ok(ConjectureVerdict {
        unimodular_count: BigUint::from(count),
        total: BigUint::from(total),
        predicted,
        observed,
        matched,
        counterexample,
    })
}

/// For `m = 1` the family is `{x[I;0] + A_0}`, in bijection with the pencils
/// `x[I;0] - Y` via `A_0 = -Y`; both counts must agree.
pub fn m1_crosscheck(field: &FieldCtx, n: usize, k: usize, jobs: usize, budget: u64) -> Result<bool> {
    let case = ConjectureCase::new(field, n, k, 1)?.with_jobs(jobs).with_budget(budget);
    let verdict = verify_conjecture(&case)?;
    let pencils = count_unimodular_pencils(&CensusParams::new(field, n, k)?.with_jobs(jobs).with_budget(budget))?;
    Ok(verdict.unimodular_count == pencils)
}

/// Every `(n, k, m)` with `1 <= k < n`, `m >= 1` and `q^{nkm} <= limit`, in
/// ascending `(n, k, m)` order.
pub fn sweep_cases(q: u32, limit: u64) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let q = q as u64;
    let fits = |e: usize| crate::linalg::checked_pow(q, e).is_some_and(|v| v <= limit);
    let mut n = 2;
    while fits(n) {
        for k in 1..n {
            let mut m = 1;
            while fits(n * k * m) {
                out.push((n, k, m));
                m += 1;
            }
        }
        n += 1;
    }
    out
}
