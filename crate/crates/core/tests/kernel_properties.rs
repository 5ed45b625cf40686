mod common;

#[test]
fn smith_invariant_under_scrambles() {
    common::check_smith_invariance().unwrap();
}

#[test]
fn unimodular_iff_minors_gcd_is_one() {
    common::check_unimodular_vs_minors().unwrap();
}

#[test]
fn smith_product_is_characteristic_polynomial() {
    common::check_smith_product_is_char_poly().unwrap();
}

#[test]
fn irreducible_counts_match_brute_force() {
    common::check_irreducible_counts().unwrap();
}

#[test]
fn simple_map_count_is_basis_independent() {
    common::check_change_of_basis().unwrap();
}
