//! Property tests for the polynomial ring laws and the two rewriting
//! engines: random canonical-form equalities, swap involution, exact
//! division round trips, reduction congruence and symmetrization fidelity.

use binomial_moments::poly::{Poly, VarId};
use proptest::prelude::*;

fn arb_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(
        ((0u32..=3, 0u32..=3, 0u32..=3, 0u32..=3), -9i64..=9),
        0..6,
    )
    .prop_map(|terms| {
        let tuples: Vec<(i64, [u32; 4])> = terms
            .into_iter()
            .map(|((n, s, p, q), c)| (c, [n, s, p, q]))
            .collect();
        Poly::from_terms(&tuples)
    })
}

fn variance_ideal() -> Poly {
    // p^2 - p + s2
    Poly::from_terms(&[(1, [0, 0, 2, 0]), (-1, [0, 0, 1, 0]), (1, [0, 1, 0, 0])])
}

proptest! {
    #[test]
    fn addition_is_associative_and_commutative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
    }

    #[test]
    fn multiplication_is_associative_and_commutative(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
    }

    #[test]
    fn multiplication_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn swap_is_an_involution(a in arb_poly()) {
        prop_assert_eq!(a.swap_pq().swap_pq(), a);
    }

    #[test]
    fn symmetry_predicates_are_exclusive(a in arb_poly()) {
        if a.is_symmetric_pq() && a.is_antisymmetric_pq() {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn exact_division_inverts_multiplication(a in arb_poly(), b in arb_poly()) {
        prop_assume!(!b.is_zero());
        let product = &a * &b;
        prop_assert_eq!(product.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn reduction_is_congruent_mod_the_variance_ideal(a in arb_poly()) {
        let nf = a.reduce_mod_variance();
        prop_assert!(nf.max_exponent(VarId::P) <= 1);
        let diff = &nf - &a;
        if !diff.is_zero() {
            prop_assert!(diff.exact_div(&variance_ideal()).is_ok());
        }
    }

    #[test]
    fn symmetrization_expands_back(a in arb_poly()) {
        let symmetric = &a + &a.swap_pq();
        let rep = symmetric.symmetrize_pq().unwrap();
        prop_assert_eq!(rep.expand(), symmetric);
    }

    #[test]
    fn reduction_preserves_values_on_the_variety(a in arb_poly()) {
        use binomial_moments::numeric::parse_rational;
        use binomial_moments::poly::VarValues;
        // points with s2 = p(1-p), q = 1-p
        for (n, p) in [(3u64, "1/3"), (5, "1/2"), (7, "2/7")] {
            let p = parse_rational(p).unwrap();
            let at = VarValues::binomial_point(n, &p);
            prop_assert_eq!(a.eval(&at), a.reduce_mod_variance().eval(&at));
        }
    }

    #[test]
    fn formula_json_round_trips_bytes(a in arb_poly(), odd in any::<bool>()) {
        use binomial_moments::moments::{FormulaDoc, FormulaJson, MomentQuery, MomentKind, Basis, Provenance};
        let doc = FormulaDoc {
            query: MomentQuery { kind: MomentKind::Central, d: 5, basis: Basis::P, method: None },
            body: a,
            odd_factor: odd,
            provenance: Provenance::Parsed,
        };
        let json = doc.to_json_string();
        let parsed: FormulaJson = serde_json::from_str(&json).unwrap();
        let doc2 = parsed.into_doc().unwrap();
        prop_assert_eq!(&doc2.body, &doc.body);
        prop_assert_eq!(doc2.to_json_string(), json);
    }
}
