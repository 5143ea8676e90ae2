//! Exact sparse multivariate polynomial arithmetic.
//!
//! Every polynomial lives over a [`VariableTable`] that fixes variable order
//! (and with it the graded reverse lexicographic monomial order), weights for
//! the geometric grading, involution signs, and optional power rewrite rules
//! used to adjoin algebraic constants.

mod monomial;
mod parse;
mod poly;
mod table;

pub use monomial::Monomial;
pub use poly::{format_coeff, rational_sqrt, resolve_bindings, Polynomial, SigmaSign, WeightedDegree};
pub use table::{RewriteRule, Sign, TableBuilder, VarEntry, VarKind, VariableTable, GEOMETRIC_VARS};

use num_bigint::BigInt;

pub type Coeff = num_rational::BigRational;

pub fn coeff(n: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Coeff {
    Coeff::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("polynomials belong to different variable tables")]
    TableMismatch,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("invalid variable table: {0}")]
    InvalidTable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("zero polynomial has no degree")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("division leaves a nonzero remainder")]
    DivisionFails,
    #[error("polynomial is not a perfect square")]
    NotASquare,
    #[error("cyclic substitution through {0}")]
    CyclicBindings(String),
}

/// All monomials in `vars` of weighted degree `degree` and the given sign,
/// in descending canonical order. Variables of weight zero are ignored.
pub fn monomial_basis(table: &VariableTable, degree: u32, sign: Sign, vars: &[usize]) -> Vec<Monomial> {
    let mut vars: Vec<usize> = vars.iter().copied().filter(|&v| table.entry(v).weight > 0).collect();
    vars.sort_unstable();
    vars.dedup();
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate(table, &vars, 0, degree, &mut current, &mut out);
    out.retain(|m| m.sign(table) == sign);
    out.sort_unstable_by(|a, b| table.cmp(b, a));
    out
}

fn enumerate(
    table: &VariableTable,
    vars: &[usize],
    k: usize,
    remaining: u32,
    current: &mut Vec<(usize, u32)>,
    out: &mut Vec<Monomial>,
) {
    if k == vars.len() {
        if remaining == 0 {
            out.push(Monomial::from_pairs(current.iter().copied()));
        }
        return;
    }
    let w = table.entry(vars[k]).weight;
    let mut e = 0;
    while e * w <= remaining {
        current.push((vars[k], e));
        enumerate(table, vars, k + 1, remaining - e * w, current, out);
        current.pop();
        e += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(t: &VariableTable, ms: &[Monomial]) -> Vec<String> {
        ms.iter().map(|m| m.format(t)).collect()
    }

    #[test]
    fn basis_matches_q_ansatz() {
        let t = VariableTable::builder().with_geometric_vars().build().unwrap();
        let a: Vec<usize> = ["x", "y1", "y2", "y3"].iter().map(|n| t.var(n).unwrap()).collect();
        let minus = monomial_basis(&t, 4, Sign::Minus, &a);
        assert_eq!(names(&t, &minus), ["x^2*y1", "x^2*y3", "y1*y2", "y2*y3"]);
        let plus = monomial_basis(&t, 4, Sign::Plus, &a);
        assert_eq!(plus.len(), 6);
        let mut got = names(&t, &plus);
        got.sort();
        let mut want = vec!["x^4", "x^2*y2", "y1^2", "y1*y3", "y2^2", "y3^2"];
        want.sort();
        assert_eq!(got, want);
        let unit = monomial_basis(&t, 0, Sign::Plus, &a);
        assert_eq!(unit, vec![Monomial::one()]);
        assert!(monomial_basis(&t, 0, Sign::Minus, &a).is_empty());
    }
}
