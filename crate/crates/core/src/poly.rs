//! Polynomials over `F_q` and matrices over `F_q[x]`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, FieldElement};
use crate::linalg::MatrixFq;

/// Raw coefficient vectors (low-to-high, no trailing zeros). These carry no
/// field handle; the hot loops in Smith reduction and determinant evaluation
/// work on them directly.
pub(crate) mod raw {
    use super::*;

    pub type Raw = Vec<FieldElement>;

    #[inline]
    pub fn trim(v: &mut Raw) {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
    }

    #[inline]
    pub fn deg(a: &[FieldElement]) -> Option<usize> {
        a.len().checked_sub(1)
    }

    pub fn add(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Raw {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut out = long.to_vec();
        for (o, &s) in out.iter_mut().zip(short) {
            *o = ctx.add(*o, s);
        }
        trim(&mut out);
        out
    }

    pub fn neg(ctx: &FieldCtx, a: &[FieldElement]) -> Raw {
        a.iter().map(|&c| ctx.neg(c)).collect()
    }

    pub fn sub(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Raw {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or_default();
            let y = b.get(i).copied().unwrap_or_default();
            out.push(ctx.sub(x, y));
        }
        trim(&mut out);
        out
    }

    pub fn mul(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Raw {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = ctx.add(out[i + j], ctx.mul(x, y));
            }
        }
        // product of nonzero leading coefficients is nonzero over a field
        out
    }

    pub fn scale(ctx: &FieldCtx, a: &[FieldElement], c: FieldElement) -> Raw {
        if c.is_zero() {
            return Vec::new();
        }
        a.iter().map(|&x| ctx.mul(x, c)).collect()
    }

    /// `a - c * b`, reusing `a`'s allocation.
    pub fn sub_mul_assign(ctx: &FieldCtx, a: &mut Raw, c: &[FieldElement], b: &[FieldElement]) {
        if c.is_empty() || b.is_empty() {
            return;
        }
        let need = c.len() + b.len() - 1;
        if a.len() < need {
            a.resize(need, FieldElement::ZERO);
        }
        for (i, &x) in c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                a[i + j] = ctx.sub(a[i + j], ctx.mul(x, y));
            }
        }
        trim(a);
    }

    pub fn divmod(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Result<(Raw, Raw)> {
        let db = deg(b).ok_or(Error::DivisionByZero)?;
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return Ok((Vec::new(), r));
        }
        let lead_inv = ctx.inv(b[db])?;
        let mut quot = vec![FieldElement::ZERO; r.len() - db];
        while let Some(dr) = deg(&r) {
            if dr < db {
                break;
            }
            let c = ctx.mul(r[dr], lead_inv);
            let shift = dr - db;
            quot[shift] = c;
            for (i, &y) in b.iter().enumerate() {
                r[shift + i] = ctx.sub(r[shift + i], ctx.mul(c, y));
            }
            debug_assert!(r[dr].is_zero());
            trim(&mut r);
        }
        trim(&mut quot);
        Ok((quot, r))
    }

    pub fn monic(ctx: &FieldCtx, a: &[FieldElement]) -> Raw {
        match a.last() {
            None => Vec::new(),
            Some(&lead) => scale(ctx, a, ctx.inv(lead).expect("nonzero lead")),
        }
    }

    pub fn gcd(ctx: &FieldCtx, a: &[FieldElement], b: &[FieldElement]) -> Result<Raw> {
        if a.is_empty() && b.is_empty() {
            return Err(Error::GcdOfZeros);
        }
        let mut x = monic(ctx, a);
        let mut y = monic(ctx, b);
        while !y.is_empty() {
            let (_, r) = divmod(ctx, &x, &y)?;
            x = y;
            y = monic(ctx, &r);
        }
        Ok(x)
    }

    pub fn is_one(a: &[FieldElement]) -> bool {
        a.len() == 1 && a[0] == FieldElement::ONE
    }

    /// Determinant by fraction-free (Bareiss) elimination over `F_q[x]`.
    pub fn det(ctx: &FieldCtx, mut m: Vec<Vec<Raw>>) -> Raw {
        let n = m.len();
        if n == 0 {
            return vec![FieldElement::ONE];
        }
        let mut negate = false;
        let mut prev: Raw = vec![FieldElement::ONE];
        for k in 0..n - 1 {
            if m[k][k].is_empty() {
                match (k + 1..n).find(|&i| !m[i][k].is_empty()) {
                    Some(i) => {
                        m.swap(k, i);
                        negate = !negate;
                    }
                    None => return Vec::new(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = sub(ctx, &mul(ctx, &m[k][k], &m[i][j]), &mul(ctx, &m[i][k], &m[k][j]));
                    let (quot, rem) = divmod(ctx, &t, &prev).expect("nonzero Bareiss pivot");
                    debug_assert!(rem.is_empty(), "Bareiss division must be exact");
                    m[i][j] = quot;
                }
            }
            prev = std::mem::take(&mut m[k][k]);
        }
        let d = std::mem::take(&mut m[n - 1][n - 1]);
        if negate {
            neg(ctx, &d)
        } else {
            d
        }
    }
}

/// A univariate polynomial over a finite field. The zero polynomial has an
/// empty coefficient list and `degree() == None`.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyFq {
    coeffs: Vec<FieldElement>,
    ctx: FieldCtx,
}

impl fmt::Debug for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyFq({self})")
    }
}

impl fmt::Display for PolyFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let show_coeff = *c != FieldElement::ONE || i == 0;
            if show_coeff {
                write!(f, "{c}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "{}x", if show_coeff { "*" } else { "" })?,
                _ => write!(f, "{}x^{i}", if show_coeff { "*" } else { "" })?,
            }
        }
        Ok(())
    }
}

impl PolyFq {
    pub fn new(ctx: &FieldCtx, mut coeffs: Vec<FieldElement>) -> Self {
        raw::trim(&mut coeffs);
        PolyFq { coeffs, ctx: ctx.clone() }
    }

    pub fn from_codes(ctx: &FieldCtx, codes: &[u32]) -> Result<Self> {
        let coeffs = codes.iter().map(|&c| ctx.element(c as u64)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(ctx, coeffs))
    }

    pub fn zero(ctx: &FieldCtx) -> Self {
        Self::new(ctx, Vec::new())
    }

    pub fn one(ctx: &FieldCtx) -> Self {
        Self::constant(ctx, FieldElement::ONE)
    }

    pub fn x(ctx: &FieldCtx) -> Self {
        Self::new(ctx, vec![FieldElement::ZERO, FieldElement::ONE])
    }

    pub fn constant(ctx: &FieldCtx, c: FieldElement) -> Self {
        Self::new(ctx, vec![c])
    }

    /// Monic polynomial of degree `deg` whose lower coefficients are the base-q digits of `code`.
    pub fn monic_from_code(ctx: &FieldCtx, deg: usize, mut code: u64) -> Self {
        let q = ctx.q() as u64;
        let mut coeffs = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            coeffs.push(ctx.element(code % q).unwrap());
            code /= q;
        }
        coeffs.push(FieldElement::ONE);
        Self::new(ctx, coeffs)
    }

    pub(crate) fn from_raw(ctx: &FieldCtx, coeffs: raw::Raw) -> Self {
        debug_assert!(coeffs.last().is_none_or(|c| !c.is_zero()));
        PolyFq { coeffs, ctx: ctx.clone() }
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn codes(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.code()).collect()
    }

    pub fn degree(&self) -> Option<usize> {
        raw::deg(&self.coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        raw::is_one(&self.coeffs)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&FieldElement::ONE)
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    fn same_field(&self, other: &Self) {
        assert!(self.ctx == other.ctx, "polynomials over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        Self::from_raw(&self.ctx, raw::add(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        Self::from_raw(&self.ctx, raw::sub(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn neg(&self) -> Self {
        Self::from_raw(&self.ctx, raw::neg(&self.ctx, &self.coeffs))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        Self::from_raw(&self.ctx, raw::mul(&self.ctx, &self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        Self::from_raw(&self.ctx, raw::scale(&self.ctx, &self.coeffs, c))
    }

    pub fn divmod(&self, other: &Self) -> Result<(Self, Self)> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        let (quot, rem) = raw::divmod(&self.ctx, &self.coeffs, &other.coeffs)?;
        Ok((Self::from_raw(&self.ctx, quot), Self::from_raw(&self.ctx, rem)))
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.divmod(self)?.1.is_zero())
    }

    pub fn monic(&self) -> Self {
        Self::from_raw(&self.ctx, raw::monic(&self.ctx, &self.coeffs))
    }

    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.ctx != other.ctx {
            return Err(Error::ContextMismatch);
        }
        Ok(Self::from_raw(&self.ctx, raw::gcd(&self.ctx, &self.coeffs, &other.coeffs)?))
    }

    pub fn eval(&self, at: FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(FieldElement::ZERO, |acc, &c| self.ctx.add(self.ctx.mul(acc, at), c))
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(&self) -> Result<bool> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::ConstantPolynomial),
        };
        let q = self.ctx.q() as u64;
        for dd in 1..=d / 2 {
            for code in 0..q.pow(dd as u32) {
                let g = Self::monic_from_code(&self.ctx, dd, code);
                if raw::divmod(&self.ctx, &self.coeffs, &g.coeffs)?.1.is_empty() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Number of monic irreducibles of degree `n` over `F_q`, by the necklace formula.
pub fn count_irreducibles(n: u32, ctx: &FieldCtx) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let q = BigInt::from(ctx.q());
    let mut sum = BigInt::zero();
    for d in (1..=n).filter(|d| n.is_multiple_of(*d)) {
        match mobius(d) {
            0 => {}
            s => sum += BigInt::from(s) * num_traits::pow(q.clone(), (n / d) as usize),
        }
    }
    let total = sum / BigInt::from(n);
    Ok(total.to_biguint().expect("necklace count is nonnegative"))
}

fn mobius(mut n: u32) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// A dense matrix over `F_q[x]`, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<PolyFq>,
    ctx: FieldCtx,
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl PolyMatrix {
    pub fn new(ctx: &FieldCtx, rows: usize, cols: usize, entries: Vec<PolyFq>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.ctx != *ctx) {
            return Err(Error::ContextMismatch);
        }
        Ok(PolyMatrix { rows, cols, entries, ctx: ctx.clone() })
    }

    pub fn from_fn(ctx: &FieldCtx, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> PolyFq) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { rows, cols, entries, ctx: ctx.clone() }
    }

    /// Builds from nested coefficient-code lists, `codes[i][j]` low-to-high.
    pub fn from_codes(ctx: &FieldCtx, codes: &[Vec<Vec<u32>>]) -> Result<Self> {
        let rows = codes.len();
        let cols = codes.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows * cols);
        for row in codes {
            if row.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for c in row {
                entries.push(PolyFq::from_codes(ctx, c)?);
            }
        }
        Ok(PolyMatrix { rows, cols, entries, ctx: ctx.clone() })
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

    pub fn get(&self, i: usize, j: usize) -> &PolyFq {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: PolyFq) {
        assert!(v.ctx == self.ctx, "entry over a different field");
        self.entries[i * self.cols + j] = v;
    }

    /// Entries as coefficient-code lists, for serialization.
    pub fn codes(&self) -> Vec<Vec<Vec<u32>>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).codes()).collect()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += f * row[src]`
    pub fn add_row_multiple(&mut self, target: usize, src: usize, f: &PolyFq) {
        assert_ne!(target, src);
        for j in 0..self.cols {
            let v = self.get(target, j).add(&self.get(src, j).mul(f));
            self.set(target, j, v);
        }
    }

    /// `col[target] += f * col[src]`
    pub fn add_col_multiple(&mut self, target: usize, src: usize, f: &PolyFq) {
        assert_ne!(target, src);
        for i in 0..self.rows {
            let v = self.get(i, target).add(&self.get(i, src).mul(f));
            self.set(i, target, v);
        }
    }

    pub fn scale_row(&mut self, row: usize, unit: FieldElement) -> Result<()> {
        self.ctx.inv(unit)?;
        for j in 0..self.cols {
            let v = self.get(row, j).scale(unit);
            self.set(row, j, v);
        }
        Ok(())
    }

    pub fn scale_col(&mut self, col: usize, unit: FieldElement) -> Result<()> {
        self.ctx.inv(unit)?;
        for i in 0..self.rows {
            let v = self.get(i, col).scale(unit);
            self.set(i, col, v);
        }
        Ok(())
    }

    fn raw_grid(&self) -> Vec<Vec<raw::Raw>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).coeffs.clone()).collect()).collect()
    }

    /// Determinant of a square polynomial matrix.
    pub fn det(&self) -> Result<PolyFq> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!("det of {}x{}", self.rows, self.cols)));
        }
        Ok(PolyFq::from_raw(&self.ctx, raw::det(&self.ctx, self.raw_grid())))
    }
}

/// The invariant factors `f_1 | f_2 | ...`, `min(rows, cols)` of them.
/// Rank-deficient input gives trailing zero polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_factors: Vec<PolyFq>,
}

impl SmithForm {
    /// Nonzero factors are monic, each divides the next, and zeros only trail.
    pub fn is_valid_chain(&self) -> bool {
        let f = &self.invariant_factors;
        let nonzero = f.iter().take_while(|p| !p.is_zero()).count();
        if f[nonzero..].iter().any(|p| !p.is_zero()) {
            return false;
        }
        if f[..nonzero].iter().any(|p| !p.is_monic()) {
            return false;
        }
        f[..nonzero].windows(2).all(|w| w[0].divides(&w[1]).unwrap_or(false))
    }

    pub fn product(&self) -> PolyFq {
        let ctx = match self.invariant_factors.first() {
            Some(p) => p.ctx().clone(),
            None => unreachable!("product of an empty Smith form needs a field; use product_in"),
        };
        self.product_in(&ctx)
    }

    pub fn product_in(&self, ctx: &FieldCtx) -> PolyFq {
        self.invariant_factors.iter().fold(PolyFq::one(ctx), |acc, f| acc.mul(f))
    }

    pub fn all_one(&self) -> bool {
        self.invariant_factors.iter().all(PolyFq::is_one)
    }
}

fn min_degree_entry(a: &[Vec<raw::Raw>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, e) in row.iter().enumerate().skip(t) {
            if let Some(d) = raw::deg(e) {
                if best.is_none_or(|(bd, _, _)| d < bd) {
                    best = Some((d, i, j));
                    if d == 0 {
                        return Some((i, j));
                    }
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// With `unimodular_only`, returns `None` as soon as a cleared pivot is not a
/// unit: every maximal minor is then a multiple of it.
fn smith_raw(
    ctx: &FieldCtx,
    mut a: Vec<Vec<raw::Raw>>,
    rows: usize,
    cols: usize,
    unimodular_only: bool,
) -> Option<Vec<raw::Raw>> {
    let r = rows.min(cols);
    let mut factors = Vec::with_capacity(r);
    for t in 0..r {
        loop {
            let Some((pi, pj)) = min_degree_entry(&a, t) else {
                if unimodular_only {
                    return None;
                }
                factors.resize(r, Vec::new());
                return Some(factors);
            };
            a.swap(t, pi);
            if pj != t {
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
            }
            let pivot = a[t][t].clone();
            let unit = pivot.len() == 1;
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_empty() {
                    continue;
                }
                let (quot, rem) = raw::divmod(ctx, &a[i][t], &pivot).expect("nonzero pivot");
                let (head, tail) = a.split_at_mut(i);
                let (prow, row) = (&head[t], &mut tail[0]);
                for j in t + 1..cols {
                    raw::sub_mul_assign(ctx, &mut row[j], &quot, &prow[j]);
                }
                dirty |= !rem.is_empty();
                row[t] = rem;
            }
            for j in t + 1..cols {
                if a[t][j].is_empty() {
                    continue;
                }
                let (quot, rem) = raw::divmod(ctx, &a[t][j], &pivot).expect("nonzero pivot");
                for row in a.iter_mut().skip(t + 1) {
                    let src = row[t].clone();
                    raw::sub_mul_assign(ctx, &mut row[j], &quot, &src);
                }
                dirty |= !rem.is_empty();
                a[t][j] = rem;
            }
            if dirty {
                continue;
            }
            if unit {
                break;
            }
            if unimodular_only {
                return None;
            }
            // pivot must divide the whole trailing block
            let bad_row = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !raw::divmod(ctx, &a[i][j], &pivot).expect("nonzero pivot").1.is_empty())
            });
            match bad_row {
                Some(i) => {
                    let (head, tail) = a.split_at_mut(i);
                    for (dst, src) in head[t].iter_mut().zip(&tail[0]).skip(t + 1) {
                        *dst = raw::add(ctx, dst, src);
                    }
                }
                None => break,
            }
        }
        factors.push(raw::monic(ctx, &a[t][t]));
    }
    Some(factors)
}

/// Invariant factors by elementary row and column operations over `F_q[x]`.
/// Pivots are minimal-degree entries, ties broken by `(row, col)`.
pub fn smith_invariant_factors(m: &PolyMatrix) -> SmithForm {
    let factors = smith_raw(&m.ctx, m.raw_grid(), m.rows, m.cols, false).expect("full reduction");
    let form = SmithForm { invariant_factors: factors.into_iter().map(|f| PolyFq::from_raw(&m.ctx, f)).collect() };
    assert!(form.is_valid_chain(), "Smith reduction produced a broken divisibility chain: {form:?}");
    form
}

/// True iff every invariant factor is 1. Requires `rows >= cols`.
pub fn is_unimodular(m: &PolyMatrix) -> Result<bool> {
    if m.rows < m.cols {
        return Err(Error::DimensionMismatch(format!("unimodularity needs rows >= cols, got {}x{}", m.rows, m.cols)));
    }
    Ok(smith_raw(&m.ctx, m.raw_grid(), m.rows, m.cols, true).is_some())
}

/// Unimodularity of the family member coded by `stacked`, the `mn x k`
/// matrix of `A_0; ...; A_{m-1}`, without building the member.
pub(crate) fn stacked_member_is_unimodular(ctx: &FieldCtx, n: usize, k: usize, stacked: &MatrixFq) -> bool {
    let m = stacked.rows() / n;
    let grid = (0..n)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut c: raw::Raw = (0..m).map(|t| stacked.get(t * n + i, j)).collect();
                    c.push(if i == j { FieldElement::ONE } else { FieldElement::ZERO });
                    raw::trim(&mut c);
                    c
                })
                .collect()
        })
        .collect();
    smith_raw(ctx, grid, n, k, true).is_some()
}

/// Default cap on the number of maximal minors `minors_gcd` will expand.
pub const DEFAULT_MINOR_BUDGET: u64 = 1 << 20;

fn binomial_u64(n: usize, k: usize) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u64)? / (i as u64 + 1);
    }
    Some(acc)
}

/// Monic gcd of all `cols x cols` minors (zero if they all vanish).
pub fn minors_gcd(m: &PolyMatrix, budget: u64) -> Result<PolyFq> {
    let (rows, cols) = (m.rows, m.cols);
    if rows < cols {
        return Err(Error::DimensionMismatch(format!("maximal minors need rows >= cols, got {rows}x{cols}")));
    }
    let count = binomial_u64(rows, cols);
    if count.is_none_or(|c| c > budget) {
        return Err(Error::BudgetExceeded {
            needed: count.map_or_else(|| "> 2^64".to_string(), |c| c.to_string()),
            budget,
        });
    }
    let grid = m.raw_grid();
    let mut g: raw::Raw = Vec::new();
    let mut pick: Vec<usize> = (0..cols).collect();
    loop {
        let sub: Vec<Vec<raw::Raw>> = pick.iter().map(|&i| grid[i].clone()).collect();
        let d = raw::det(&m.ctx, sub);
        if !d.is_empty() {
            g = if g.is_empty() { raw::monic(&m.ctx, &d) } else { raw::gcd(&m.ctx, &g, &d)? };
            if raw::is_one(&g) {
                break;
            }
        }
        // next combination in lexicographic order
        let Some(pos) = (0..cols).rev().find(|&p| pick[p] < rows - cols + p) else { break };
        pick[pos] += 1;
        for p in pos + 1..cols {
            pick[p] = pick[p - 1] + 1;
        }
    }
    Ok(PolyFq::from_raw(&m.ctx, g))
}

/// `x [I_k; 0] - Y` for an `n x k` matrix `Y` with `k < n`.
pub fn build_pencil(y: &MatrixFq) -> Result<PolyMatrix> {
    let (n, k) = (y.rows(), y.cols());
    if k >= n {
        return Err(Error::InvalidArgument(format!("pencil needs k < n, got n={n}, k={k}")));
    }
    let ctx = y.ctx();
    Ok(PolyMatrix::from_fn(ctx, n, k, |i, j| {
        let c = ctx.neg(y.get(i, j));
        let lin = if i == j { FieldElement::ONE } else { FieldElement::ZERO };
        PolyFq::new(ctx, vec![c, lin])
    }))
}

/// `x^m [I_k; 0] + sum_i x^i A_i` for `coeffs = [A_0, ..., A_{m-1}]`, all `n x k`.
pub fn build_family_member(ctx: &FieldCtx, n: usize, k: usize, coeffs: &[MatrixFq]) -> Result<PolyMatrix> {
    for a in coeffs {
        if a.rows() != n || a.cols() != k {
            return Err(Error::DimensionMismatch(format!("coefficient is {}x{}, expected {n}x{k}", a.rows(), a.cols())));
        }
        if a.ctx() != ctx {
            return Err(Error::ContextMismatch);
        }
    }
    let m = coeffs.len();
    Ok(PolyMatrix::from_fn(ctx, n, k, |i, j| {
        let mut c: Vec<FieldElement> = coeffs.iter().map(|a| a.get(i, j)).collect();
        c.push(if i == j { FieldElement::ONE } else { FieldElement::ZERO });
        debug_assert_eq!(c.len(), m + 1);
        PolyFq::new(ctx, c)
    }))
}
