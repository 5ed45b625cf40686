//! Dense exact linear algebra over `F_q`.
//!
//! Matrix codes: an `r x c` matrix is numbered by reading its entries in
//! row-major order as the digits of a base-`q` integer, most significant
//! digit first. Code order is therefore lexicographic order of the entry
//! tuple, and enumeration shards are contiguous code ranges.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::poly::{raw, PolyFq};

#[derive(Clone)]
pub struct MatrixFq {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
    ctx: FieldCtx,
}

impl PartialEq for MatrixFq {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data && self.ctx == other.ctx
    }
}

impl Eq for MatrixFq {}

impl Hash for MatrixFq {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixFq {}x{} {:?}", self.rows, self.cols, self.to_nested())
    }
}

/// Checked `base^exp`, `None` on u64 overflow.
pub fn checked_pow(base: u64, exp: usize) -> Option<u64> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

/// Size of a `q^entries` search space, refusing anything above `budget`.
pub fn space_size(q: u32, entries: usize, budget: u64) -> Result<u64> {
    match checked_pow(q as u64, entries) {
        Some(n) if n <= budget => Ok(n),
        other => Err(Error::BudgetExceeded {
            needed: other.map_or_else(|| format!("{q}^{entries}"), |n| n.to_string()),
            budget,
        }),
    }
}

impl MatrixFq {
    pub fn zeros(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        MatrixFq { rows, cols, data: vec![FieldElement::ZERO; rows * cols], ctx: ctx.clone() }
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    pub fn from_elements(ctx: &FieldCtx, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if data.iter().any(|e| e.code() >= ctx.q()) {
            return Err(Error::ContextMismatch);
        }
        Ok(MatrixFq { rows, cols, data, ctx: ctx.clone() })
    }

    pub fn from_codes(ctx: &FieldCtx, rows: usize, cols: usize, codes: &[u32]) -> Result<Self> {
        let data = codes.iter().map(|&c| ctx.element(c as u64)).collect::<Result<Vec<_>>>()?;
        Self::from_elements(ctx, rows, cols, data)
    }

    pub fn from_rows(ctx: &FieldCtx, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let flat: Vec<u32> = rows.concat();
        Self::from_codes(ctx, rows.len(), cols, &flat)
    }

    /// The matrix with the given base-`q` code (see module docs).
    pub fn from_code(ctx: &FieldCtx, rows: usize, cols: usize, code: u64) -> Self {
        let mut m = Self::zeros(ctx, rows, cols);
        m.fill_from_code(code);
        m
    }

    pub fn fill_from_code(&mut self, mut code: u64) {
        let q = self.ctx.q() as u64;
        for slot in self.data.iter_mut().rev() {
            *slot = self.ctx.element(code % q).expect("digit below q");
            code /= q;
        }
    }

    pub fn code(&self) -> u64 {
        let q = self.ctx.q() as u64;
        self.data.iter().fold(0u64, |acc, e| acc * q + e.code() as u64)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_nested(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).code()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ctx, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ctx = &self.ctx;
        let mut out = Self::zeros(ctx, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = ctx.add(out.get(i, j), ctx.mul(a, other.get(l, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Rows `range` as a new matrix.
    pub fn row_block(&self, range: Range<usize>) -> Self {
        let data = self.data[range.start * self.cols..range.end * self.cols].to_vec();
        MatrixFq { rows: range.len(), cols: self.cols, data, ctx: self.ctx.clone() }
    }

    /// Columns `range` as a new matrix.
    pub fn col_block(&self, range: Range<usize>) -> Self {
        let mut m = Self::zeros(&self.ctx, self.rows, range.len());
        for i in 0..self.rows {
            for (jj, j) in range.clone().enumerate() {
                m.set(i, jj, self.get(i, j));
            }
        }
        m
    }

    /// `[self; other]`
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("vstack of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatrixFq { rows: self.rows + other.rows, cols: self.cols, data, ctx: self.ctx.clone() })
    }

    /// `[self other]`
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        Ok(self.transpose().vstack(&other.transpose())?.transpose())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let ctx = &self.ctx;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if pr != r {
                for j in 0..self.cols {
                    m.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = ctx.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..self.cols {
                m.set(r, j, ctx.mul(m.get(r, j), inv));
            }
            for i in 0..self.rows {
                let f = m.get(i, c);
                if i == r || f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = ctx.sub(m.get(i, j), ctx.mul(f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// The RREF and a basis of the right null space, one basis vector per column.
    pub fn rref_and_kernel(&self) -> (Self, Self) {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut kernel = Self::zeros(&self.ctx, self.cols, free.len());
        for (kc, &f) in free.iter().enumerate() {
            kernel.set(f, kc, FieldElement::ONE);
            for (row, &pc) in pivots.iter().enumerate() {
                kernel.set(pc, kc, self.ctx.neg(r.get(row, f)));
            }
        }
        (r, kernel)
    }

    pub fn kernel(&self) -> Self {
        self.rref_and_kernel().1
    }

    pub fn pow(&self, e: usize) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Self::identity(&self.ctx, self.rows);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// `det(xI - A)`, by fraction-free elimination over `F_q[x]`.
    pub fn char_poly(&self) -> Result<PolyFq> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "characteristic polynomial of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let ctx = &self.ctx;
        let grid: Vec<Vec<raw::Raw>> = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        let mut e = vec![ctx.neg(self.get(i, j))];
                        if i == j {
                            e.push(FieldElement::ONE);
                        }
                        raw::trim(&mut e);
                        e
                    })
                    .collect()
            })
            .collect();
        Ok(PolyFq::new(ctx, raw::det(ctx, grid)))
    }

    /// Companion matrix of a monic polynomial of degree >= 1.
    pub fn companion(f: &PolyFq) -> Result<Self> {
        let n = f.degree().filter(|&d| d >= 1).ok_or(Error::ConstantPolynomial)?;
        if !f.is_monic() {
            return Err(Error::InvalidArgument("companion matrix needs a monic polynomial".into()));
        }
        let ctx = f.ctx();
        let mut m = Self::zeros(ctx, n, n);
        for i in 1..n {
            m.set(i, i - 1, FieldElement::ONE);
        }
        for i in 0..n {
            m.set(i, n - 1, ctx.neg(f.coeffs()[i]));
        }
        Ok(m)
    }
}

fn check_pair(a: &MatrixFq, other_dim: usize, what: &str) -> Result<()> {
    if a.rows != a.cols {
        return Err(Error::DimensionMismatch(format!("{what}: A must be square, got {}x{}", a.rows, a.cols)));
    }
    if other_dim != a.rows {
        return Err(Error::DimensionMismatch(format!("{what}: inner dimension {other_dim} vs A of size {}", a.rows)));
    }
    Ok(())
}

/// `[C; CA; ...; CA^{k-1}]` for `A` of size `k`.
pub fn observability_matrix(c: &MatrixFq, a: &MatrixFq) -> Result<MatrixFq> {
    check_pair(a, c.cols, "observability")?;
    if c.ctx != a.ctx {
        return Err(Error::ContextMismatch);
    }
    let k = a.rows;
    let mut out = MatrixFq::zeros(&a.ctx, 0, k);
    let mut block = c.clone();
    for _ in 0..k {
        out = out.vstack(&block)?;
        block = block.mul(a)?;
    }
    Ok(out)
}

pub fn observability_rank(c: &MatrixFq, a: &MatrixFq) -> Result<usize> {
    Ok(observability_matrix(c, a)?.rank())
}

/// `∩_{i<k} ker(C A^i)`, computed by successively restricting a kernel basis.
/// Returns a basis as columns.
pub fn unobservable_subspace(c: &MatrixFq, a: &MatrixFq) -> Result<MatrixFq> {
    check_pair(a, c.cols, "kernel intersection")?;
    if c.ctx != a.ctx {
        return Err(Error::ContextMismatch);
    }
    let k = a.rows;
    let mut basis = MatrixFq::identity(&a.ctx, k);
    let mut cai = c.clone();
    for _ in 0..k {
        if basis.cols == 0 {
            break;
        }
        // vectors basis * y with C A^i basis y = 0
        let coeffs = cai.mul(&basis)?.kernel();
        basis = basis.mul(&coeffs)?;
        cai = cai.mul(a)?;
    }
    Ok(basis)
}

pub fn zero_kernel_by_rank(c: &MatrixFq, a: &MatrixFq) -> Result<bool> {
    Ok(observability_rank(c, a)? == a.rows)
}

pub fn zero_kernel_by_intersection(c: &MatrixFq, a: &MatrixFq) -> Result<bool> {
    Ok(unobservable_subspace(c, a)?.cols == 0)
}

/// `(C, A)` is a zero kernel pair iff `∩ ker(C A^i) = {0}`. Both the rank
/// criterion and the direct kernel intersection are evaluated; a disagreement
/// is reported as an error.
pub fn is_zero_kernel_pair(c: &MatrixFq, a: &MatrixFq) -> Result<bool> {
    let by_rank = zero_kernel_by_rank(c, a)?;
    let by_kernel = zero_kernel_by_intersection(c, a)?;
    if by_rank != by_kernel {
        return Err(Error::Disagreement(format!(
            "zero kernel test: rank says {by_rank}, kernel intersection says {by_kernel} for C={c:?}, A={a:?}"
        )));
    }
    Ok(by_rank)
}

/// `[B AB ... A^{k-1}B]`
pub fn controllability_matrix(a: &MatrixFq, b: &MatrixFq) -> Result<MatrixFq> {
    check_pair(a, b.rows, "reachability")?;
    if a.ctx != b.ctx {
        return Err(Error::ContextMismatch);
    }
    let k = a.rows;
    let mut out = MatrixFq::zeros(&a.ctx, k, 0);
    let mut block = b.clone();
    for _ in 0..k {
        out = out.hstack(&block)?;
        block = a.mul(&block)?;
    }
    Ok(out)
}

pub fn is_reachable(a: &MatrixFq, b: &MatrixFq) -> Result<bool> {
    Ok(controllability_matrix(a, b)?.rank() == a.rows)
}

/// All `rows x cols` matrices with codes in `range`, in code order.
pub struct MatrixIter {
    current: MatrixFq,
    next: u64,
    end: u64,
}

impl Iterator for MatrixIter {
    type Item = MatrixFq;

    fn next(&mut self) -> Option<MatrixFq> {
        if self.next >= self.end {
            return None;
        }
        self.current.fill_from_code(self.next);
        self.next += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

/// Every `rows x cols` matrix exactly once, refusing spaces above `budget`.
pub fn enumerate_matrices(ctx: &FieldCtx, rows: usize, cols: usize, budget: u64) -> Result<MatrixIter> {
    let total = space_size(ctx.q(), rows * cols, budget)?;
    Ok(matrix_range(ctx, rows, cols, 0..total))
}

/// One contiguous shard of the matrix code space.
pub fn matrix_range(ctx: &FieldCtx, rows: usize, cols: usize, range: Range<u64>) -> MatrixIter {
    MatrixIter { current: MatrixFq::zeros(ctx, rows, cols), next: range.start, end: range.end }
}

/// A subspace of `F_q^n`, stored as its RREF basis (a `k x n` matrix of full
/// row rank). Two values are equal iff they span the same subspace.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SubspaceBasis {
    basis: MatrixFq,
}

impl SubspaceBasis {
    /// Row span of `m`.
    pub fn span_of_rows(m: &MatrixFq) -> Self {
        let (r, pivots) = m.rref();
        SubspaceBasis { basis: r.row_block(0..pivots.len()) }
    }

    /// Span of the standard basis vectors `e_i`, `i in idx`.
    pub fn coordinate(ctx: &FieldCtx, n: usize, idx: &[usize]) -> Self {
        let mut m = MatrixFq::zeros(ctx, idx.len(), n);
        for (r, &i) in idx.iter().enumerate() {
            m.set(r, i, FieldElement::ONE);
        }
        Self::span_of_rows(&m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &MatrixFq {
        &self.basis
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let row = MatrixFq::from_elements(&self.basis.ctx, 1, v.len(), v.to_vec()).expect("vector over the same field");
        self.basis.vstack(&row).map(|m| m.rank() == self.dim()).unwrap_or(false)
    }
}

/// Gaussian binomial as a machine integer, `None` on overflow.
pub fn gaussian_binomial_u64(n: usize, k: usize, q: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul((q as u128).checked_pow((n - i) as u32)? - 1)?;
        den = den.checked_mul((q as u128).checked_pow((k - i) as u32)? - 1)?;
    }
    u64::try_from(num / den).ok()
}

/// Each `k`-dimensional subspace of `F_q^n` exactly once, as RREF bases.
/// Order: pivot sets lexicographically, then free entries by base-`q` code.
pub fn enumerate_subspaces(ctx: &FieldCtx, n: usize, k: usize, budget: u64) -> Result<Vec<SubspaceBasis>> {
    if k > n {
        return Err(Error::InvalidArgument(format!("subspace dimension {k} exceeds ambient {n}")));
    }
    let q = ctx.q() as u64;
    match gaussian_binomial_u64(n, k, q) {
        Some(c) if c <= budget => {}
        c => {
            return Err(Error::BudgetExceeded {
                needed: c.map_or_else(|| "> 2^64".into(), |c| c.to_string()),
                budget,
            })
        }
    }
    let mut out = Vec::new();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // free slots: (row, col) right of the row's pivot, not in a pivot column
        let free: Vec<(usize, usize)> = (0..k)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let fills = q.pow(free.len() as u32);
        for code in 0..fills {
            let mut m = MatrixFq::zeros(ctx, k, n);
            for (r, &p) in pivots.iter().enumerate() {
                m.set(r, p, FieldElement::ONE);
            }
            let mut rest = code;
            for &(r, c) in free.iter().rev() {
                m.set(r, c, ctx.element(rest % q).unwrap());
                rest /= q;
            }
            out.push(SubspaceBasis { basis: m });
        }
        if k == 0 {
            break;
        }
        let Some(pos) = (0..k).rev().find(|&i| pivots[i] < n - k + i) else { break };
        pivots[pos] += 1;
        for i in pos + 1..k {
            pivots[i] = pivots[i - 1] + 1;
        }
    }
    Ok(out)
}

/// `dim(U ∩ W) = dim U + dim W - rank [U; W]`
pub fn intersection_dim(u: &SubspaceBasis, w: &SubspaceBasis) -> Result<usize> {
    if u.ambient_dim() != w.ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            u.ambient_dim(),
            w.ambient_dim()
        )));
    }
    let stacked = u.basis.vstack(&w.basis)?;
    Ok(u.dim() + w.dim() - stacked.rank())
}
