//! Algebraic laws of the ring and operator layers on seeded random
//! instances.

mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(config())]

    #[test]
    fn ring_axioms_hold(a in scalar(), b in scalar(), c in scalar()) {
        common::ring_axioms(&a, &b, &c)?;
    }

    #[test]
    fn mixed_partials_commute(a in scalar()) {
        common::mixed_partials(&a)?;
    }

    #[test]
    fn partial_derivative_is_a_derivation(a in scalar(), b in scalar()) {
        common::leibniz(&a, &b)?;
    }

    #[test]
    fn commutator_satisfies_jacobi(a in light_operator(), b in light_operator(), c in light_operator()) {
        common::jacobi(&a, &b, &c)?;
    }

    #[test]
    fn adjoint_reverses_products(a in operator(), b in operator()) {
        common::adjoint_anti_homomorphism(&a, &b)?;
    }

    #[test]
    fn normal_form_is_stable(a in operator()) {
        common::normal_ordering_idempotent(&a)?;
    }
}
