use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use canring::alpha::{build_ansatz, check_central_minors, even_in_x, AlphaCase, PolyMatrix};
use canring::ring::{Coeff, Monomial, Polynomial, VariableTable};

fn table() -> Arc<VariableTable> {
    VariableTable::builder()
        .with_geometric_vars()
        .parameter("a")
        .build()
        .unwrap()
}

fn entry(t: Arc<VariableTable>) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0u32..=1, 0u32..=1, 0u32..=1, -3i64..=3), 0..3).prop_map(move |terms| {
        let v: Vec<usize> = ["y1", "y2", "a"].iter().map(|n| t.var(n).unwrap()).collect();
        let terms = terms.into_iter().map(|(e1, e2, e3, c)| {
            (
                Monomial::from_pairs([(v[0], e1), (v[1], e2), (v[2], e3)]),
                Coeff::from_integer(BigInt::from(c)),
            )
        });
        Polynomial::from_terms(&t, terms)
    })
}

fn matrix(n: usize) -> impl Strategy<Value = PolyMatrix> {
    let t = table();
    prop::collection::vec(entry(t), n * n)
        .prop_map(move |es| PolyMatrix::from_rows(es.chunks(n).map(|r| r.to_vec()).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn congruence_scales_determinant(m in matrix(4), p in matrix(4)) {
        let dp = p.determinant();
        let lhs = m.congruence(&p).unwrap().determinant();
        prop_assert_eq!(lhs, &(&dp * &dp) * &m.determinant());
    }

    #[test]
    fn laplace_expansion_along_any_row(m in matrix(4), row in 0usize..4) {
        let mut sum = Polynomial::zero(m.table());
        for j in 0..4 {
            sum = &sum + &(m.get(row, j) * &m.cofactor(row, j));
        }
        prop_assert_eq!(sum, m.determinant());
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(3), b in matrix(3)) {
        prop_assert_eq!(a.mul(&b).unwrap().determinant(), &a.determinant() * &b.determinant());
    }

    #[test]
    fn symmetric_matrix_has_symmetric_cofactors(m in matrix(4)) {
        let s = m.mul(&m.transpose()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                prop_assert_eq!(s.cofactor(i, j), s.cofactor(j, i));
            }
        }
    }
}

#[test]
fn every_ansatz_has_the_pattern() {
    for case in AlphaCase::all() {
        let a = build_ansatz(case).unwrap();
        a.matrix.check_pattern().unwrap();
        assert!(a.matrix.matrix().is_symmetric());
        assert_eq!(a.params.len(), if case.uses_d() { 23 } else { 22 });
        check_central_minors(&a.matrix, a.q()).unwrap();
        // det α is invariant under x -> -x
        assert!(even_in_x(&a.matrix.determinant()), "{case}");
    }
}
