use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rustc_hash::FxHashMap;

use canring::ring::{monomial_basis, Coeff, Monomial, Polynomial, SigmaSign, Sign, VariableTable, WeightedDegree};

fn table() -> Arc<VariableTable> {
    VariableTable::builder()
        .with_geometric_vars()
        .parameters(["a", "b"])
        .algebraic("i")
        .rule("i", 2, "-1")
        .build()
        .unwrap()
}

thread_local! {
    static TABLE: Arc<VariableTable> = table();
}

fn t() -> Arc<VariableTable> {
    TABLE.with(|t| t.clone())
}

/// Variables used by random polynomials: x, y1, y2, z1, a, b.
fn vars(t: &VariableTable) -> Vec<usize> {
    ["x", "y1", "y2", "z1", "a", "b"]
        .iter()
        .map(|n| t.var(n).unwrap())
        .collect()
}

fn coeff() -> impl Strategy<Value = Coeff> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| Coeff::new(BigInt::from(n), BigInt::from(d)))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..=2, 6), coeff()), 0..5).prop_map(|terms| {
        let t = t();
        let v = vars(&t);
        let terms = terms
            .into_iter()
            .map(|(e, c)| (Monomial::from_pairs(v.iter().copied().zip(e)), c));
        Polynomial::from_terms(&t, terms)
    })
}

/// Like [`poly`], with the algebraic `i` appearing up to the third power.
fn gaussian_poly() -> impl Strategy<Value = Polynomial> {
    (poly(), poly(), 0u32..=3).prop_map(|(p, q, k)| {
        let t = t();
        let i = Polynomial::parse(&t, "i").unwrap().pow(k);
        &p + &(&q * &i)
    })
}

/// Weighted-homogeneous polynomial of a fixed degree and sign in x, y1, y2, y3.
fn homogeneous() -> impl Strategy<Value = (Polynomial, u32, Sign)> {
    (1u32..=5, prop::bool::ANY, prop::collection::vec(coeff(), 12)).prop_filter_map("empty basis", |(d, plus, cs)| {
        let t = t();
        let sign = if plus { Sign::Plus } else { Sign::Minus };
        let v: Vec<usize> = ["x", "y1", "y2", "y3"].iter().map(|n| t.var(n).unwrap()).collect();
        let basis = monomial_basis(&t, d, sign, &v);
        let p = Polynomial::from_terms(&t, basis.into_iter().zip(cs));
        (!p.is_zero()).then_some((p, d, sign))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p * &Polynomial::one(p.table()), p.clone());
        prop_assert_eq!(-(-&p), p);
    }

    #[test]
    fn rewriting_is_confluent(p in gaussian_poly(), q in gaussian_poly(), r in gaussian_poly()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        let i = t().var("i").unwrap();
        prop_assert!((&p * &q).degree_in(i) < 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn degree_and_sign_are_multiplicative((p, dp, sp) in homogeneous(), (q, dq, sq) in homogeneous()) {
        prop_assert_eq!(p.weighted_degree().unwrap(), WeightedDegree::Homogeneous(dp));
        prop_assert_eq!(p.sigma_sign(), if sp == Sign::Plus { SigmaSign::Plus } else { SigmaSign::Minus });
        let pq = &p * &q;
        prop_assert_eq!(pq.weighted_degree().unwrap(), WeightedDegree::Homogeneous(dp + dq));
        prop_assert_eq!(pq.sigma_sign().pure(), Some(Sign::from_i32(sp.as_i32() * sq.as_i32())));
    }

    #[test]
    fn exact_division_inverts_multiplication(p in poly(), q in poly()) {
        prop_assume!(!q.is_zero());
        prop_assert_eq!((&p * &q).exact_divide(&q).unwrap(), p);
    }

    #[test]
    fn square_root_of_square(p in poly()) {
        let s = (&p * &p).sqrt().unwrap();
        prop_assert!(s == p || s == -&p);
    }

    #[test]
    fn non_square_is_rejected(p in poly()) {
        let t = t();
        // y1 * p^2 has odd degree in y1 whenever p != 0
        prop_assume!(!p.is_zero());
        let q = &Polynomial::parse(&t, "y1").unwrap() * &(&p * &p);
        prop_assert!(q.sqrt().is_err());
    }

    #[test]
    fn substitution_is_a_homomorphism(p in poly(), q in poly(), s1 in poly(), s2 in poly()) {
        let t = t();
        let mut b = FxHashMap::default();
        b.insert(t.var("x").unwrap(), s1);
        b.insert(t.var("a").unwrap(), s2);
        let sub = |p: &Polynomial| p.substitute_resolved(&b);
        prop_assert_eq!(sub(&(&p * &q)), &sub(&p) * &sub(&q));
        prop_assert_eq!(sub(&(&p + &q)), &sub(&p) + &sub(&q));
    }

    #[test]
    fn text_round_trip(p in gaussian_poly()) {
        prop_assert_eq!(Polynomial::parse(p.table(), &p.to_text()).unwrap(), p);
    }

    #[test]
    fn transfer_round_trip(p in poly()) {
        let other = VariableTable::builder()
            .with_geometric_vars()
            .parameters(["b", "a", "c"])
            .build()
            .unwrap();
        let moved = p.transfer(&other).unwrap();
        prop_assert_eq!(moved.to_text().len(), p.to_text().len());
        prop_assert_eq!(moved.transfer(p.table()).unwrap(), p);
    }
}
