use fqcensus::formulas::{gauss_binom, psi, psi_from_sum, sigma_formula, tau_closed, TauTable};
use fqcensus::linalg::{is_reachable, is_zero_kernel_pair, MatrixFq};
use fqcensus::poly::{build_pencil, is_unimodular, smith_invariant_factors};
use fqcensus::{FieldCtx, PolyFq, PolyMatrix};
use num_bigint::BigUint;
use proptest::prelude::*;

fn field(q: u64) -> FieldCtx {
    fqcensus::commands::field_for_q(q, None).unwrap()
}

fn q_strategy() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9])
}

fn matrix(q: u64, rows: usize, cols: usize) -> impl Strategy<Value = MatrixFq> {
    prop::collection::vec(0..q as u32, rows * cols)
        .prop_map(move |codes| MatrixFq::from_codes(&field(q), rows, cols, &codes).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rank_is_transpose_invariant(m in (q_strategy(), 1usize..5, 1usize..5).prop_flat_map(|(q, r, c)| matrix(q, r, c))) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
        prop_assert_eq!(m.rank() + m.kernel().cols(), m.cols());
    }

    #[test]
    fn duality_on_random_pairs(
        (a, c) in (q_strategy(), 1usize..4, 1usize..3)
            .prop_flat_map(|(q, k, r)| (matrix(q, k, k), matrix(q, r, k)))
    ) {
        prop_assert_eq!(is_zero_kernel_pair(&c, &a).unwrap(), is_reachable(&a.transpose(), &c.transpose()).unwrap());
    }

    #[test]
    fn pencil_unimodular_iff_reachable(
        (q, n, k, codes) in (q_strategy(), 2usize..5)
            .prop_flat_map(|(q, n)| (Just(q), Just(n), 1..n))
            .prop_flat_map(|(q, n, k)| (Just(q), Just(n), Just(k), prop::collection::vec(0..q as u32, n * k)))
    ) {
        let ctx = field(q);
        let y = MatrixFq::from_codes(&ctx, n, k, &codes).unwrap();
        let pencil = build_pencil(&y).unwrap();
        // [xI - A; -C] has full rank at every point iff (C, A) is observable
        let (a, c) = (y.row_block(0..k), y.row_block(k..n));
        prop_assert_eq!(is_unimodular(&pencil).unwrap(), is_zero_kernel_pair(&c, &a).unwrap());
    }

    #[test]
    fn smith_chain_and_determinant(
        (q, n, coeffs) in (prop::sample::select(vec![2u64, 3, 5]), 1usize..4)
            .prop_flat_map(|(q, n)| (Just(q), Just(n), prop::collection::vec(prop::collection::vec(0..q as u32, 0..4), n * n)))
    ) {
        let ctx = field(q);
        let m = PolyMatrix::from_fn(&ctx, n, n, |i, j| PolyFq::from_codes(&ctx, &coeffs[i * n + j]).unwrap());
        let form = smith_invariant_factors(&m);
        prop_assert!(form.is_valid_chain());
        let det = m.det().unwrap();
        prop_assert_eq!(form.product(), if det.is_zero() { det } else { det.monic() });
    }

    #[test]
    fn closed_forms_agree(q in prop::sample::select(vec![2u64, 3, 4, 5, 7]), n in 1u64..14, k in 0u64..14, l in 0u64..14) {
        prop_assume!(l <= k);
        if k < n {
            prop_assert_eq!(psi_from_sum(n, k, q).unwrap(), psi(n, k, q).unwrap());
            let total: BigUint = (0..=k).map(|j| sigma_formula(n, k, j, q).unwrap()).sum();
            prop_assert_eq!(total, gauss_binom(n, k, q).unwrap());
        }
        prop_assert_eq!(TauTable::new(q).unwrap().tau(k, l).unwrap(), tau_closed(k, l, q).unwrap());
    }
}
