mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn wedge_is_graded_commutative_and_associative(input in three_forms()) {
        check_wedge(input)?;
    }

    #[test]
    fn monomial_rank_roundtrips(input in rank_input()) {
        check_rank_roundtrip(input)?;
    }

    #[test]
    fn rational_and_float_betti_agree(shape in semidirect(7)) {
        check_backends_agree(shape)?;
    }

    #[test]
    fn log_embedding_of_units_sums_to_zero(poly in unit_cubic()) {
        check_log_sums(poly)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn differentials_square_to_zero(input in shape_with_theta(7)) {
        check_d_squared(input)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn twisted_euler_characteristic_vanishes(input in shape_with_theta(7)) {
        check_twisted_complex(input)?;
    }

    #[test]
    fn unimodular_betti_numbers_are_palindromic(shape in semidirect(6)) {
        check_poincare_duality(shape)?;
    }

    #[test]
    fn harmonic_forms_count_cohomology(shape in semidirect(6)) {
        check_harmonic_counts(shape)?;
    }

    #[test]
    fn nijenhuis_tensor_is_antisymmetric(shape in semidirect(6)) {
        check_nijenhuis_antisymmetry(shape)?;
    }

    #[test]
    fn ot_complex_structure_is_integrable(params in ot_params()) {
        check_ot_integrable(params)?;
    }

    #[test]
    fn trivial_character_complex_recovers_b1(shape in semidirect(6)) {
        check_trivial_character(shape)?;
    }

    #[test]
    fn ot_lee_form_is_sum_of_alphas(c in lee_input()) {
        check_lee_form(c)?;
    }
}
