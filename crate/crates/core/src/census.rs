//! Exhaustive census oracles.
//!
//! Each count uses its own characterization: irreducible characteristic
//! polynomials for completable blocks, Smith invariant factors for pencils,
//! the Kalman rank for reachable pairs, and invariant-subspace search for
//! simple maps. Agreement between them is evidence, not a tautology.

use std::collections::{BTreeSet, HashSet};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::linalg::{
    enumerate_subspaces, gaussian_binomial_u64, intersection_dim, is_reachable, is_zero_kernel_pair, matrix_range,
    space_size, MatrixFq, SubspaceBasis,
};
use crate::parallel::{default_jobs, run_sharded};
use crate::poly::{build_pencil, is_unimodular};

/// Largest enumeration an oracle will start without an explicit override.
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct CensusParams {
    pub field: FieldCtx,
    pub n: usize,
    pub k: usize,
    pub l: Option<usize>,
    pub jobs: usize,
    pub budget: u64,
}

impl CensusParams {
    /// Requires `k <= n` (the counting oracles further require `k < n`).
    pub fn new(field: &FieldCtx, n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::InvalidArgument(format!("need k <= n, got n={n}, k={k}")));
        }
        Ok(CensusParams { field: field.clone(), n, k, l: None, jobs: default_jobs(), budget: DEFAULT_BUDGET })
    }

    pub fn with_l(mut self, l: usize) -> Result<Self> {
        if l > self.k {
            return Err(Error::InvalidArgument(format!("need l <= k, got k={}, l={l}", self.k)));
        }
        self.l = Some(l);
        Ok(self)
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn require_proper(&self) -> Result<()> {
        if self.k >= self.n {
            return Err(Error::InvalidArgument(format!("need k < n, got n={}, k={}", self.n, self.k)));
        }
        Ok(())
    }

    fn require_l(&self) -> Result<usize> {
        self.l.ok_or_else(|| Error::InvalidArgument("intersection dimension l is required".into()))
    }

    fn q(&self) -> u32 {
        self.field.q()
    }
}

fn sum_counts(parts: Vec<u64>) -> BigUint {
    parts.into_iter().map(BigUint::from).sum()
}

/// Base-`q` code of the first `k` columns of `m`, read row-major.
fn leading_block_code(m: &MatrixFq, k: usize, q: u64) -> u64 {
    let mut code = 0u64;
    for i in 0..m.rows() {
        for j in 0..k {
            code = code * q + m.get(i, j).code() as u64;
        }
    }
    code
}

/// Number of `n x k` blocks that occur as the first `k` columns of some
/// `n x n` matrix with irreducible characteristic polynomial. Enumerates all
/// `q^{n^2}` matrices.
pub fn count_completable(p: &CensusParams) -> Result<BigUint> {
    p.require_proper()?;
    let (n, k) = (p.n, p.k);
    let total = space_size(p.q(), n * n, p.budget)?;
    let q = p.q() as u64;
    let parts = run_sharded(&p.field, total, p.jobs, |ctx, range| {
        let mut seen: HashSet<u64> = HashSet::new();
        for m in matrix_range(ctx, n, n, range) {
            let block = leading_block_code(&m, k, q);
            if seen.contains(&block) {
                continue;
            }
            if m.char_poly()?.is_irreducible()? {
                seen.insert(block);
            }
        }
        Ok(seen)
    })?;
    let merged: BTreeSet<u64> = parts.into_iter().flatten().collect();
    Ok(BigUint::from(merged.len()))
}

/// Number of `Y` in `M_{n,k}(F_q)` whose pencil `x[I_k; 0] - Y` is unimodular.
pub fn count_unimodular_pencils(p: &CensusParams) -> Result<BigUint> {
    p.require_proper()?;
    let (n, k) = (p.n, p.k);
    let total = space_size(p.q(), n * k, p.budget)?;
    let parts = run_sharded(&p.field, total, p.jobs, |ctx, range| {
        let mut hits = 0u64;
        for y in matrix_range(ctx, n, k, range) {
            if is_unimodular(&build_pencil(&y)?)? {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(sum_counts(parts))
}

/// Number of pairs `(A, B)` in `M_k x M_{k,n-k}` with
/// `rank [B AB ... A^{k-1}B] = k`. A pair is coded as the `k x n` matrix `[A | B]`.
pub fn count_reachable_pairs(p: &CensusParams) -> Result<BigUint> {
    p.require_proper()?;
    let (n, k) = (p.n, p.k);
    let total = space_size(p.q(), n * k, p.budget)?;
    let parts = run_sharded(&p.field, total, p.jobs, |ctx, range| {
        let mut hits = 0u64;
        for ab in matrix_range(ctx, k, n, range) {
            if is_reachable(&ab.col_block(0..k), &ab.col_block(k..n))? {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(sum_counts(parts))
}

/// Every nonzero subspace of `F_q^k`, as coordinate subspaces.
pub fn nonzero_subspaces(ctx: &FieldCtx, k: usize, budget: u64) -> Result<Vec<SubspaceBasis>> {
    let mut out = Vec::new();
    for d in 1..=k {
        out.extend(enumerate_subspaces(ctx, k, d, budget)?);
    }
    Ok(out)
}

/// Direct simplicity test for `T: W -> V`. `domain` holds a basis of `W` as
/// columns, `image` holds `T` applied to that basis, and `coords` lists every
/// nonzero subspace of `F_q^k` (coordinates w.r.t. the basis). `T` is simple
/// iff no nonzero `U ⊆ W` has `T(U) ⊆ U`.
pub fn is_simple_direct(domain: &MatrixFq, image: &MatrixFq, coords: &[SubspaceBasis]) -> Result<bool> {
    for u in coords {
        let rows_t = u.basis().transpose();
        let span = domain.mul(&rows_t)?;
        let mapped = image.mul(&rows_t)?;
        if span.hstack(&mapped)?.rank() == u.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Standard basis `e_1..e_k` of `W` inside `F_q^n`, as columns.
fn standard_domain(ctx: &FieldCtx, n: usize, k: usize) -> MatrixFq {
    let mut d = MatrixFq::zeros(ctx, n, k);
    for i in 0..k {
        d.set(i, i, FieldElement::ONE);
    }
    d
}

/// Number of simple maps from `W = span(e_1..e_k)` into `F_q^n`. Every map is
/// judged twice, by invariant-subspace search and by the zero kernel test on
/// its `[A; C]` split; a disagreement is an error.
pub fn count_simple_maps(p: &CensusParams) -> Result<BigUint> {
    p.require_proper()?;
    let (n, k) = (p.n, p.k);
    let total = space_size(p.q(), n * k, p.budget)?;
    let coords = nonzero_subspaces(&p.field, k, p.budget)?;
    let parts = run_sharded(&p.field, total, p.jobs, |ctx, range| {
        let domain = standard_domain(ctx, n, k);
        let coords: Vec<SubspaceBasis> =
            coords.iter().map(|u| SubspaceBasis::span_of_rows(&rebase(u.basis(), ctx))).collect();
        let mut hits = 0u64;
        for t in matrix_range(ctx, n, k, range) {
            let direct = is_simple_direct(&domain, &t, &coords)?;
            let zkp = is_zero_kernel_pair(&t.row_block(k..n), &t.row_block(0..k))?;
            if direct != zkp {
                return Err(Error::Disagreement(format!(
                    "simple-map tests disagree on T={:?}: invariant subspaces say {direct}, zero kernel pair says {zkp}",
                    t.to_nested()
                )));
            }
            if direct {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(sum_counts(parts))
}

/// Copy of `m` over a field handle `ctx` equal to its own.
fn rebase(m: &MatrixFq, ctx: &FieldCtx) -> MatrixFq {
    MatrixFq::from_elements(ctx, m.rows(), m.cols(), m.data().to_vec()).expect("same field")
}

/// Number of simple maps whose domain is the column span of `domain`
/// (`n x k`, full column rank), by invariant-subspace search only.
pub fn count_simple_maps_on_domain(p: &CensusParams, domain: &MatrixFq) -> Result<BigUint> {
    p.require_proper()?;
    let (n, k) = (p.n, p.k);
    if domain.rows() != n || domain.cols() != k || domain.rank() != k {
        return Err(Error::InvalidArgument(format!("domain must be an {n}x{k} matrix of rank {k}")));
    }
    let total = space_size(p.q(), n * k, p.budget)?;
    let coords = nonzero_subspaces(&p.field, k, p.budget)?;
    let parts = run_sharded(&p.field, total, p.jobs, |ctx, range| {
        let domain = rebase(domain, ctx);
        let coords: Vec<SubspaceBasis> =
            coords.iter().map(|u| SubspaceBasis::span_of_rows(&rebase(u.basis(), ctx))).collect();
        let mut hits = 0u64;
        for t in matrix_range(ctx, n, k, range) {
            if is_simple_direct(&domain, &t, &coords)? {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(sum_counts(parts))
}

/// Number of `k`-dimensional `U ⊆ F_q^n` with `dim(U ∩ W) = l`,
/// `W = span(e_1..e_k)`, by full subspace enumeration.
pub fn sigma_oracle(p: &CensusParams) -> Result<BigUint> {
    let l = p.require_l()?;
    let (n, k) = (p.n, p.k);
    let count = gaussian_binomial_u64(n, k, p.q() as u64).unwrap_or(u64::MAX);
    if count > p.budget {
        return Err(Error::BudgetExceeded { needed: count.to_string(), budget: p.budget });
    }
    let subspaces = enumerate_subspaces(&p.field, n, k, p.budget)?;
    let parts = run_sharded(&p.field, subspaces.len() as u64, p.jobs, |ctx, range| {
        let w = SubspaceBasis::coordinate(ctx, n, &(0..k).collect::<Vec<_>>());
        let mut hits = 0u64;
        for idx in range {
            let u = SubspaceBasis::span_of_rows(&rebase(subspaces[idx as usize].basis(), ctx));
            if intersection_dim(&u, &w)? == l {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(sum_counts(parts))
}

/// Number of simple `T: W_1 -> V` with `T(W_1) = W_2`, where
/// `W_1 = span(e_1..e_k)` and `W_2 = span(e_1..e_l, e_{k+1}..e_{2k-l})`
/// inside `F_q^n`. Maps onto `W_2` are `B_2 G` for invertible `G`.
///
/// Simplicity here means no nonzero `U ⊆ W_1` (including `W_1`) has
/// `T(U) ⊆ U`; with `n >= 2k - l` this is well defined even when `n = k`.
pub fn tau_oracle(p: &CensusParams) -> Result<BigUint> {
    let l = p.require_l()?;
    let (n, k) = (p.n, p.k);
    if n < 2 * k - l {
        return Err(Error::InvalidArgument(format!("tau oracle needs n >= 2k - l, got n={n}, k={k}, l={l}")));
    }
    let total = space_size(p.q(), k * k, p.budget)?;
    let coords = nonzero_subspaces(&p.field, k, p.budget)?;
    let parts = run_sharded(&p.field, total, p.jobs, |ctx, range| {
        let domain = standard_domain(ctx, n, k);
        let mut target = MatrixFq::zeros(ctx, n, k);
        for (col, row) in (0..l).chain(k..2 * k - l).enumerate() {
            target.set(row, col, FieldElement::ONE);
        }
        let coords: Vec<SubspaceBasis> =
            coords.iter().map(|u| SubspaceBasis::span_of_rows(&rebase(u.basis(), ctx))).collect();
        let mut hits = 0u64;
        for g in matrix_range(ctx, k, k, range) {
            if g.rank() != k {
                continue;
            }
            let t = target.mul(&g)?;
            if is_simple_direct(&domain, &t, &coords)? {
                hits += 1;
            }
        }
        Ok(hits)
    })?;
    Ok(sum_counts(parts))
}

/// True iff `(C, A)` is a zero kernel pair exactly when `(A^T, C^T)` is
/// reachable, over every `(C, A)` in `M_{n-k,k} x M_k`.
pub fn duality_check(p: &CensusParams) -> Result<bool> {
    p.require_proper()?;
    let (n, k) = (p.n, p.k);
    let total = space_size(p.q(), n * k, p.budget)?;
    let parts = run_sharded(&p.field, total, p.jobs, |ctx, range| {
        for t in matrix_range(ctx, n, k, range) {
            let (a, c) = (t.row_block(0..k), t.row_block(k..n));
            if is_zero_kernel_pair(&c, &a)? != is_reachable(&a.transpose(), &c.transpose())? {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    Ok(parts.into_iter().all(|ok| ok))
}
