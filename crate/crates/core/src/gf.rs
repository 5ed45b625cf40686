//! Finite fields `F_q`, `q = p^e`.
//!
//! Elements are integer codes in `[0, q)`: the code `sum c_i p^i` stands for
//! `sum c_i a^i`, where `a` is a root of the field's defining modulus. Code 0
//! is the additive identity and code 1 the multiplicative identity.
//!
//! For `q <= 256` addition and multiplication go through precomputed tables;
//! larger fields use schoolbook multiplication followed by reduction.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::PolyFq;

/// Largest field size accepted by [`FieldCtx::new`].
pub const DEFAULT_MAX_Q: u64 = 1 << 16;

const TABLE_LIMIT: u32 = 256;

/// `p`, `e` and the monic degree-`e` modulus (coefficients low-to-high).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    pub p: u32,
    pub e: u32,
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn q(&self) -> u32 {
        self.p.pow(self.e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u8>,
    mul: Vec<u8>,
}

struct FieldInner {
    spec: FieldSpec,
    q: u32,
    neg: Vec<u32>,
    inv: Vec<u32>,
    tables: Option<Tables>,
}

/// An immutable finite field. Cloning is cheap (shared handle).
#[derive(Clone)]
pub struct FieldCtx(Arc<FieldInner>);

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("p", &self.0.spec.p)
            .field("e", &self.0.spec.e)
            .field("modulus", &self.0.spec.modulus)
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for FieldCtx {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_size(p: u64, e: u32, bound: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e < 1 {
        return Err(Error::BadDegree(e));
    }
    let q = p
        .checked_pow(e)
        .filter(|&q| q <= bound && q <= u32::MAX as u64)
        .ok_or(Error::FieldTooLarge { p, e, bound })?;
    Ok(q as u32)
}

impl FieldCtx {
    /// `F_{p^e}` with the lexicographically smallest monic irreducible modulus.
    pub fn new(p: u64, e: u32) -> Result<Self> {
        Self::with_bound(p, e, DEFAULT_MAX_Q)
    }

    pub fn with_bound(p: u64, e: u32, bound: u64) -> Result<Self> {
        check_size(p, e, bound)?;
        let p = p as u32;
        let modulus = if e == 1 {
            vec![0, 1]
        } else {
            smallest_irreducible(p, e)?
        };
        Ok(Self::build(FieldSpec { p, e, modulus }))
    }

    /// Field built on an explicit modulus (low-to-high coefficients over `F_p`).
    pub fn with_modulus(p: u64, modulus: &[u32]) -> Result<Self> {
        if modulus.len() < 2 {
            return Err(Error::BadModulus("degree must be at least 1".into()));
        }
        let e = (modulus.len() - 1) as u32;
        check_size(p, e, DEFAULT_MAX_Q)?;
        let p = p as u32;
        if *modulus.last().unwrap() != 1 {
            return Err(Error::BadModulus("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::BadModulus(format!("coefficient not reduced mod {p}")));
        }
        if e == 1 {
            // every monic linear defines the same prime field; keep the canonical one
            return Ok(Self::build(FieldSpec { p, e, modulus: vec![0, 1] }));
        }
        let base = FieldCtx::new(p as u64, 1)?;
        let f = PolyFq::from_codes(&base, modulus)?;
        if !f.is_irreducible()? {
            return Err(Error::BadModulus("modulus is reducible".into()));
        }
        Ok(Self::build(FieldSpec { p, e, modulus: modulus.to_vec() }))
    }

    fn build(spec: FieldSpec) -> Self {
        let q = spec.q();
        let mut inner = FieldInner { spec, q, neg: Vec::new(), inv: Vec::new(), tables: None };
        inner.neg = (0..q).map(|a| slow_neg(&inner.spec, a)).collect();
        if q <= TABLE_LIMIT {
            let mut add = vec![0u8; (q * q) as usize];
            let mut mul = vec![0u8; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = slow_add(&inner.spec, a, b) as u8;
                    mul[(a * q + b) as usize] = slow_mul(&inner.spec, a, b) as u8;
                }
            }
            inner.tables = Some(Tables { add, mul });
        }
        let mut inv = vec![0u32; q as usize];
        if q <= TABLE_LIMIT {
            let t = inner.tables.as_ref().unwrap();
            for a in 1..q {
                inv[a as usize] = (1..q).find(|&b| t.mul[(a * q + b) as usize] == 1).unwrap();
            }
        } else {
            // a^(q-2)
            for a in 1..q {
                inv[a as usize] = slow_pow(&inner.spec, a, (q - 2) as u64);
            }
        }
        inner.inv = inv;
        FieldCtx(Arc::new(inner))
    }

    /// A copy with its own allocation, so per-thread clones do not contend
    /// on one reference count.
    pub fn detach(&self) -> Self {
        let inner = &*self.0;
        FieldCtx(Arc::new(FieldInner {
            spec: inner.spec.clone(),
            q: inner.q,
            neg: inner.neg.clone(),
            inv: inner.inv.clone(),
            tables: inner.tables.as_ref().map(|t| Tables { add: t.add.clone(), mul: t.mul.clone() }),
        }))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn e(&self) -> u32 {
        self.0.spec.e
    }

    pub fn element(&self, code: u64) -> Result<FieldElement> {
        if code < self.q() as u64 {
            Ok(FieldElement(code as u32))
        } else {
            Err(Error::ElementOutOfRange { code, q: self.q() as u64 })
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p() as i64) as u32)
    }

    /// All `q` elements in increasing code order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q()).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.q() && b.0 < self.q());
        match &self.0.tables {
            Some(t) => FieldElement(t.add[(a.0 * self.0.q + b.0) as usize] as u32),
            None => FieldElement(slow_add(&self.0.spec, a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.0.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.q() && b.0 < self.q());
        match &self.0.tables {
            Some(t) => FieldElement(t.mul[(a.0 * self.0.q + b.0) as usize] as u32),
            None => FieldElement(slow_mul(&self.0.spec, a.0, b.0)),
        }
    }

    #[inline]
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::ZeroInverse)
        } else {
            Ok(FieldElement(self.0.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

fn digits(spec: &FieldSpec, mut code: u32) -> Vec<u32> {
    let mut d = vec![0u32; spec.e as usize];
    for slot in d.iter_mut() {
        *slot = code % spec.p;
        code /= spec.p;
    }
    d
}

fn undigits(spec: &FieldSpec, d: &[u32]) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * spec.p + c)
}

fn slow_add(spec: &FieldSpec, a: u32, b: u32) -> u32 {
    if spec.e == 1 {
        return (a + b) % spec.p;
    }
    let (da, db) = (digits(spec, a), digits(spec, b));
    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % spec.p).collect();
    undigits(spec, &s)
}

fn slow_neg(spec: &FieldSpec, a: u32) -> u32 {
    let p = spec.p;
    let d: Vec<u32> = digits(spec, a).iter().map(|&x| (p - x) % p).collect();
    undigits(spec, &d)
}

fn slow_mul(spec: &FieldSpec, a: u32, b: u32) -> u32 {
    let p = spec.p as u64;
    if spec.e == 1 {
        return ((a as u64 * b as u64) % p) as u32;
    }
    let e = spec.e as usize;
    let (da, db) = (digits(spec, a), digits(spec, b));
    let mut prod = vec![0u64; 2 * e - 1];
    for (i, &x) in da.iter().enumerate() {
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
        }
    }
    // reduce by the monic modulus from the top down
    for top in (e..prod.len()).rev() {
        let c = prod[top];
        if c == 0 {
            continue;
        }
        prod[top] = 0;
        for (i, &m) in spec.modulus[..e].iter().enumerate() {
            let idx = top - e + i;
            prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
        }
    }
    let out: Vec<u32> = prod[..e].iter().map(|&c| c as u32).collect();
    undigits(spec, &out)
}

fn slow_pow(spec: &FieldSpec, a: u32, mut exp: u64) -> u32 {
    let mut base = a;
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = slow_mul(spec, acc, base);
        }
        base = slow_mul(spec, base, base);
        exp >>= 1;
    }
    acc
}

/// First monic irreducible of degree `e` over `F_p`, comparing the lower
/// coefficient tuples `(c_0, ..., c_{e-1})` lexicographically.
fn smallest_irreducible(p: u32, e: u32) -> Result<Vec<u32>> {
    let base = FieldCtx::new(p as u64, 1)?;
    let count = (p as u64).pow(e);
    for t in 0..count {
        // c_0 is the most significant digit of t
        let mut coeffs = vec![0u32; e as usize + 1];
        let mut rest = t;
        for i in (0..e as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[e as usize] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        let f = PolyFq::from_codes(&base, &coeffs)?;
        if f.is_irreducible()? {
            return Ok(coeffs);
        }
    }
    Err(Error::BadModulus(format!("no irreducible of degree {e} over F_{p}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(ctx: &FieldCtx, c: u64) -> FieldElement {
        ctx.element(c).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.spec().modulus, vec![0, 1]);
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(f4.spec().modulus, vec![1, 1, 1]);
        assert_eq!(FieldCtx::new(3, 1).unwrap().q(), 3);
    }

    #[test]
    fn make_field_errors() {
        assert_eq!(FieldCtx::new(4, 1).unwrap_err(), Error::NotPrime(4));
        assert_eq!(FieldCtx::new(2, 0).unwrap_err(), Error::BadDegree(0));
        assert!(matches!(FieldCtx::with_bound(2, 10, 512), Err(Error::FieldTooLarge { .. })));
    }

    #[test]
    fn extension_moduli() {
        // (1,0,1) precedes (1,1,0): x^3 + x^2 + 1 wins over x^3 + x + 1
        assert_eq!(FieldCtx::new(2, 3).unwrap().spec().modulus, vec![1, 0, 1, 1]);
        assert_eq!(FieldCtx::new(3, 2).unwrap().spec().modulus, vec![1, 0, 1]);
        assert_eq!(FieldCtx::new(2, 4).unwrap().spec().modulus, vec![1, 0, 0, 1, 1]);
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        assert_eq!(f2.add(el(&f2, 1), el(&f2, 1)), FieldElement::ZERO);
        let f5 = FieldCtx::new(5, 1).unwrap();
        assert_eq!(f5.inv(el(&f5, 2)).unwrap(), el(&f5, 3));
        let f4 = FieldCtx::new(2, 2).unwrap();
        // alpha = code 2, alpha + 1 = code 3
        assert_eq!(f4.mul(el(&f4, 2), el(&f4, 2)), el(&f4, 3));
        assert_eq!(f4.inv(FieldElement::ZERO).unwrap_err(), Error::ZeroInverse);
    }

    #[test]
    fn enumerate_elements_in_code_order() {
        for (p, e, q) in [(2, 1, 2u32), (3, 1, 3), (2, 2, 4)] {
            let ctx = FieldCtx::new(p, e).unwrap();
            let codes: Vec<u32> = ctx.elements().map(FieldElement::code).collect();
            assert_eq!(codes, (0..q).collect::<Vec<_>>());
        }
    }

    #[test]
    fn explicit_modulus_override() {
        let f9 = FieldCtx::with_modulus(3, &[2, 1, 1]).unwrap();
        assert_eq!(f9.q(), 9);
        assert!(matches!(FieldCtx::with_modulus(2, &[1, 0, 1]), Err(Error::BadModulus(_))));
        assert!(matches!(FieldCtx::with_modulus(2, &[1, 1, 0]), Err(Error::BadModulus(_))));
        assert_ne!(f9, FieldCtx::new(3, 2).unwrap());
    }

    fn all_small_fields() -> Vec<FieldCtx> {
        let mut v = Vec::new();
        for (p, e) in [(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1), (2, 2), (2, 3), (3, 2), (2, 4)] {
            v.push(FieldCtx::new(p, e).unwrap());
        }
        v.push(FieldCtx::with_modulus(3, &[2, 2, 1]).unwrap());
        v.push(FieldCtx::with_modulus(2, &[1, 1, 0, 0, 1]).unwrap());
        v
    }

    #[test]
    fn field_axioms_exhaustive() {
        for ctx in all_small_fields() {
            let els: Vec<_> = ctx.elements().collect();
            for &a in &els {
                assert_eq!(ctx.add(a, ctx.neg(a)), FieldElement::ZERO);
                assert_eq!(ctx.mul(a, FieldElement::ONE), a);
                if !a.is_zero() {
                    assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), FieldElement::ONE);
                }
                for &b in &els {
                    assert_eq!(ctx.add(a, b), ctx.add(b, a));
                    assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
                    for &c in &els {
                        assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
                        assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
                        assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_fixes_every_element() {
        for ctx in all_small_fields() {
            for a in ctx.elements() {
                assert_eq!(ctx.pow(a, ctx.q() as u64), a);
            }
        }
    }

    #[test]
    fn untabled_path_agrees_with_tables() {
        // 17^2 = 289 > TABLE_LIMIT, so this field uses the schoolbook path
        let big = FieldCtx::new(17, 2).unwrap();
        assert_eq!(big.q(), 289);
        for a in (0..289).step_by(7) {
            let a = el(&big, a);
            if !a.is_zero() {
                assert_eq!(big.mul(a, big.inv(a).unwrap()), FieldElement::ONE);
            }
            assert_eq!(big.pow(a, 289), a);
        }
    }
}
