use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use canring::elim::{self, DriverConfig, EliminationState};
use canring::ring::{Polynomial, VariableTable};

fn table(k: usize) -> Arc<VariableTable> {
    VariableTable::builder()
        .with_geometric_vars()
        .parameters(["g", "h"])
        .parameters((1..=k).map(|i| format!("r{i}")))
        .build()
        .unwrap()
}

/// Rank of the coefficient matrix, or `None` when the system is inconsistent.
fn oracle(mut rows: Vec<Vec<BigRational>>, k: usize) -> Option<usize> {
    let mut rank = 0;
    for col in 0..k {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &rows[rank][col];
                for c in 0..=k {
                    let v = &rows[rank][c] * &f;
                    rows[i][c] = &rows[i][c] - &v;
                }
            }
        }
        rank += 1;
    }
    rows[rank..].iter().all(|r| r[k].is_zero()).then_some(rank)
}

fn system() -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1usize..=10).prop_flat_map(|k| {
        let row = prop::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..=4], k + 1);
        (Just(k), prop::collection::vec(row, 1..=12))
    })
}

fn polys(t: &Arc<VariableTable>, rows: &[Vec<i64>], tail: &Polynomial) -> Vec<Polynomial> {
    let k = rows[0].len() - 1;
    rows.iter()
        .map(|row| {
            let mut p = tail.scale(&BigRational::from_integer(BigInt::from(row[k])));
            for (j, &c) in row[..k].iter().enumerate() {
                let r = Polynomial::named(t, &format!("r{}", j + 1)).unwrap();
                p = &p + &r.scale(&BigRational::from_integer(BigInt::from(c)));
            }
            p
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lin_elim_agrees_with_gaussian_elimination((k, rows) in system()) {
        let t = table(k);
        let vars: Vec<usize> = (1..=k).map(|i| t.var(&format!("r{i}")).unwrap()).collect();
        let f = polys(&t, &rows, &Polynomial::one(&t));
        let mut state = EliminationState::new(f.clone());
        let eliminated = elim::lin_elim(&mut state, |_| true, &vars, k);
        let q: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
            .collect();
        match oracle(q, k) {
            Some(rank) => {
                prop_assert!(state.f.is_empty());
                prop_assert_eq!(eliminated, rank);
                let resolved = elim::resolve(&state.deps);
                prop_assert!(elim::soundness_failures(&f, &resolved).is_empty());
            }
            None => prop_assert!(state.f.iter().any(|p| p.is_constant() && !p.is_zero())),
        }
    }

    /// With parametric constants (`g`, `h`) the solution is a polynomial in them.
    #[test]
    fn parametric_right_hand_sides((k, rows) in system()) {
        let t = table(k);
        let vars: Vec<usize> = (1..=k).map(|i| t.var(&format!("r{i}")).unwrap()).collect();
        let tail = Polynomial::parse(&t, "g - 2*h").unwrap();
        let f = polys(&t, &rows, &tail);
        let mut state = EliminationState::new(f.clone());
        elim::lin_elim(&mut state, |_| true, &vars, k);
        let resolved = elim::resolve(&state.deps);
        for p in &f {
            let rest = p.substitute_resolved(&resolved);
            // what remains is a multiple of the tail, i.e. a condition on g and h only
            prop_assert!(rest.variables().iter().all(|v| !vars.contains(v)));
        }
    }

    #[test]
    fn driver_is_deterministic((k, rows) in system()) {
        let t = table(k);
        let vars: Vec<usize> = (1..=k).map(|i| t.var(&format!("r{i}")).unwrap()).collect();
        let gh = vec![t.var("g").unwrap(), t.var("h").unwrap()];
        let f = polys(&t, &rows, &Polynomial::parse(&t, "g*h + 1").unwrap());
        let a = elim::driver(f.clone(), &vars, &gh, &DriverConfig::default());
        let b = elim::driver(f, &vars, &gh, &DriverConfig::default());
        prop_assert_eq!(&a.state.deps, &b.state.deps);
        prop_assert_eq!(&a.state.f, &b.state.f);
    }
}

#[test]
fn non_constant_pivots_make_no_progress() {
    let t = table(3);
    let vars: Vec<usize> = (1..=3).map(|i| t.var(&format!("r{i}")).unwrap()).collect();
    let f: Vec<Polynomial> = ["g*r1 + r2*h", "g*r2 - 1", "h*r3 + g"]
        .iter()
        .map(|s| Polynomial::parse(&t, s).unwrap())
        .collect();
    let mut state = EliminationState::new(f.clone());
    assert_eq!(elim::lin_elim(&mut state, |_| true, &vars, 3), 0);
    assert_eq!(state.f, f);
}
