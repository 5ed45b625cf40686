#![allow(dead_code)]

use fqcensus::census::{count_simple_maps_on_domain, CensusParams};
use fqcensus::formulas::psi;
use fqcensus::linalg::{enumerate_matrices, MatrixFq};
use fqcensus::poly::{
    build_pencil, count_irreducibles, is_unimodular, minors_gcd, smith_invariant_factors, DEFAULT_MINOR_BUDGET,
};
use fqcensus::{FieldCtx, FieldElement, PolyFq, PolyMatrix};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Check = Result<(), String>;

pub fn field(q: u64) -> FieldCtx {
    fqcensus::commands::field_for_q(q, None).unwrap()
}

pub fn random_poly(ctx: &FieldCtx, rng: &mut StdRng, max_deg: usize) -> PolyFq {
    let len = rng.gen_range(0..=max_deg + 1);
    let codes: Vec<u32> = (0..len).map(|_| rng.gen_range(0..ctx.q())).collect();
    PolyFq::from_codes(ctx, &codes).unwrap()
}

pub fn random_poly_matrix(ctx: &FieldCtx, rng: &mut StdRng, rows: usize, cols: usize, max_deg: usize) -> PolyMatrix {
    PolyMatrix::from_fn(ctx, rows, cols, |_, _| random_poly(ctx, rng, max_deg))
}

fn random_unit(ctx: &FieldCtx, rng: &mut StdRng) -> FieldElement {
    ctx.element(rng.gen_range(1..ctx.q() as u64)).unwrap()
}

/// One random elementary row or column operation.
pub fn scramble_step(m: &mut PolyMatrix, rng: &mut StdRng) {
    let ctx = m.ctx().clone();
    let (rows, cols) = (m.rows(), m.cols());
    match rng.gen_range(0..6) {
        0 if rows > 1 => {
            let (a, b) = (rng.gen_range(0..rows), rng.gen_range(0..rows));
            m.swap_rows(a, b);
        }
        1 if cols > 1 => {
            let (a, b) = (rng.gen_range(0..cols), rng.gen_range(0..cols));
            m.swap_cols(a, b);
        }
        2 if rows > 1 => {
            let a = rng.gen_range(0..rows);
            let b = (a + rng.gen_range(1..rows)) % rows;
            let f = random_poly(&ctx, rng, 2);
            m.add_row_multiple(a, b, &f);
        }
        3 if cols > 1 => {
            let a = rng.gen_range(0..cols);
            let b = (a + rng.gen_range(1..cols)) % cols;
            let f = random_poly(&ctx, rng, 2);
            m.add_col_multiple(a, b, &f);
        }
        4 => {
            let u = random_unit(&ctx, rng);
            m.scale_row(rng.gen_range(0..rows), u).unwrap();
        }
        _ => {
            let u = random_unit(&ctx, rng);
            m.scale_col(rng.gen_range(0..cols), u).unwrap();
        }
    }
}

/// Smith invariance under 100 random scramble sequences per fixed matrix.
pub fn check_smith_invariance() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for q in [2u64, 3] {
        let ctx = field(q);
        for rows in 1..=3 {
            for cols in 1..=3 {
                let base = random_poly_matrix(&ctx, &mut rng, rows, cols, 2);
                let want = smith_invariant_factors(&base);
                for _ in 0..100 {
                    let mut m = base.clone();
                    for _ in 0..rng.gen_range(1..=12) {
                        scramble_step(&mut m, &mut rng);
                    }
                    let got = smith_invariant_factors(&m);
                    if got != want {
                        return Err(format!("q={q} {rows}x{cols}: {:?} became {:?}", want, got));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `is_unimodular` agrees with `minors_gcd == 1` on every pencil, q = 2, n <= 3.
pub fn check_unimodular_vs_minors() -> Check {
    let ctx = field(2);
    for n in 2..=3 {
        for k in 1..n {
            for y in enumerate_matrices(&ctx, n, k, 1 << 20).unwrap() {
                let pencil = build_pencil(&y).unwrap();
                let a = is_unimodular(&pencil).unwrap();
                let b = minors_gcd(&pencil, DEFAULT_MINOR_BUDGET).unwrap().is_one();
                if a != b {
                    return Err(format!("n={n} k={k} Y={:?}: smith {a}, minors {b}", y.to_nested()));
                }
            }
        }
    }
    Ok(())
}

fn x_minus(a: &MatrixFq) -> PolyMatrix {
    let ctx = a.ctx();
    PolyMatrix::from_fn(ctx, a.rows(), a.cols(), |i, j| {
        let lin = if i == j { FieldElement::ONE } else { FieldElement::ZERO };
        PolyFq::new(ctx, vec![ctx.neg(a.get(i, j)), lin])
    })
}

/// Product of the invariant factors of `xI - A` is `char_poly(A)`, q = 2, n <= 3.
pub fn check_smith_product_is_char_poly() -> Check {
    let ctx = field(2);
    for n in 1..=3 {
        for a in enumerate_matrices(&ctx, n, n, 1 << 20).unwrap() {
            let form = smith_invariant_factors(&x_minus(&a));
            let cp = a.char_poly().unwrap();
            if form.product() != cp {
                return Err(format!("A={:?}: product {} vs char poly {cp}", a.to_nested(), form.product()));
            }
        }
    }
    Ok(())
}

/// `count_irreducibles` against trial division over all monic polynomials.
pub fn check_irreducible_counts() -> Check {
    for q in [2u64, 3] {
        let ctx = field(q);
        for d in 1..=4u32 {
            let brute = (0..q.pow(d))
                .filter(|&code| PolyFq::monic_from_code(&ctx, d as usize, code).is_irreducible().unwrap())
                .count();
            let formula = count_irreducibles(d, &ctx).unwrap();
            if formula != BigUint::from(brute) {
                return Err(format!("q={q} d={d}: formula {formula}, brute force {brute}"));
            }
        }
    }
    Ok(())
}

pub fn random_invertible(ctx: &FieldCtx, rng: &mut StdRng, n: usize) -> MatrixFq {
    let space = (ctx.q() as u64).pow((n * n) as u32);
    loop {
        let m = MatrixFq::from_code(ctx, n, n, rng.gen_range(0..space));
        if m.rank() == n {
            return m;
        }
    }
}

/// Simple-map counts do not depend on the choice of domain: 20 random `S`,
/// domain `S * [e_1 .. e_k]`, q = 2, n = 3, k = 2.
pub fn check_change_of_basis() -> Check {
    let ctx = field(2);
    let (n, k) = (3, 2);
    let want = psi(n as u64, k as u64, 2).unwrap();
    let mut rng = StdRng::seed_from_u64(20);
    let mut e = MatrixFq::zeros(&ctx, n, k);
    for i in 0..k {
        e.set(i, i, FieldElement::ONE);
    }
    let params = CensusParams::new(&ctx, n, k).unwrap().with_jobs(2);
    for _ in 0..20 {
        let s = random_invertible(&ctx, &mut rng, n);
        let domain = s.mul(&e).unwrap();
        let got = count_simple_maps_on_domain(&params, &domain).unwrap();
        if got != want {
            return Err(format!("S={:?}: {got} simple maps, expected {want}", s.to_nested()));
        }
    }
    Ok(())
}
