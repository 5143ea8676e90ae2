//! The symmetric 6×6 matrix families `α_j` and their linear algebra.
//!
//! Indices are 0-based in code; row/column 0 is the border row carrying
//! `x^2*G`, `x*q_k` and `Q`, rows 1..=4 are the central block, and row 5 is
//! `(Q, x, 0, 0, 0, 0)`.

mod matrix;

use std::sync::Arc;

pub use matrix::PolyMatrix;

use crate::ring::{Polynomial, RingError, SigmaSign, Sign, VariableTable, WeightedDegree};

/// Row degrees `s` and column degrees `e`: `deg α_ij = s_i - e_j`.
pub const ROW_DEGREES: [u32; 6] = [8, 5, 5, 5, 5, 4];
pub const COL_DEGREES: [u32; 6] = [0, 3, 3, 3, 3, 4];
/// Involution signs of the module generators `(1, z1, z2, z3, z4, t)`.
pub const GENERATOR_SIGNS: [i32; 6] = [1, -1, -1, 1, 1, -1];

pub fn entry_degree(i: usize, j: usize) -> u32 {
    ROW_DEGREES[i] - COL_DEGREES[j]
}

pub fn entry_sign(i: usize, j: usize) -> Sign {
    Sign::from_i32(-GENERATOR_SIGNS[i] * GENERATOR_SIGNS[j])
}

/// Degree of the cofactor `β_ij`; `det α` has degree 16.
pub fn cofactor_degree(i: usize, j: usize) -> u32 {
    16 - entry_degree(i, j)
}

pub fn cofactor_sign(i: usize, j: usize) -> Sign {
    entry_sign(i, j)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlphaError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("entry ({i}, {j}) = {text}: {problem}")]
    Pattern {
        i: usize,
        j: usize,
        text: String,
        problem: String,
    },
    #[error("invalid case j={0}, c={1}")]
    InvalidCase(u8, u8),
}

/// A 6×6 symmetric polynomial matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymPolyMatrix(PolyMatrix);

impl SymPolyMatrix {
    pub fn new(m: PolyMatrix) -> Result<Self, AlphaError> {
        assert_eq!(m.size(), 6);
        for i in 0..6 {
            for j in 0..i {
                if m.get(i, j) != m.get(j, i) {
                    return Err(AlphaError::NotSymmetric(i, j));
                }
            }
        }
        Ok(SymPolyMatrix(m))
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        self.0.get(i, j)
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        self.0.table()
    }

    /// Checks weighted degrees and involution signs of every nonzero entry.
    pub fn check_pattern(&self) -> Result<(), AlphaError> {
        for i in 0..6 {
            for j in i..6 {
                let p = self.get(i, j);
                if p.is_zero() {
                    continue;
                }
                let err = |problem: String| AlphaError::Pattern {
                    i,
                    j,
                    text: p.to_text(),
                    problem,
                };
                match p.weighted_degree()? {
                    WeightedDegree::Homogeneous(d) if d == entry_degree(i, j) => {}
                    other => {
                        return Err(err(format!("degree {other:?}, expected {}", entry_degree(i, j))));
                    }
                }
                if p.sigma_sign() != SigmaSign::from(entry_sign(i, j)) {
                    return Err(err(format!("sign {:?}", p.sigma_sign())));
                }
            }
        }
        Ok(())
    }

    pub fn determinant(&self) -> Polynomial {
        self.0.determinant()
    }

    pub fn cofactor(&self, i: usize, j: usize) -> Polynomial {
        self.0.cofactor(i, j)
    }

    /// Substitutes `x -> 0` in every entry.
    pub fn restrict_x0(&self) -> Self {
        let x = self.table().var("x").expect("geometric table");
        let zero = Polynomial::zero(self.table());
        let bind = [(x, zero)].into_iter().collect();
        SymPolyMatrix(self.0.map(|p| p.substitute_resolved(&bind)))
    }

    pub fn congruence(&self, p: &PolyMatrix) -> Result<Self, AlphaError> {
        SymPolyMatrix::new(self.0.congruence(p)?)
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        SymPolyMatrix(self.0.map(f))
    }

    pub fn try_map<E>(&self, f: impl Fn(&Polynomial) -> Result<Polynomial, E>) -> Result<Self, E> {
        Ok(SymPolyMatrix(self.0.try_map(f)?))
    }

    pub fn transfer(&self, table: &Arc<VariableTable>) -> Result<Self, RingError> {
        Ok(SymPolyMatrix(self.0.transfer(table)?))
    }

    /// The central 4×4 block (rows/columns 1..=4).
    pub fn central_block(&self) -> PolyMatrix {
        self.0.submatrix(&[1, 2, 3, 4], &[1, 2, 3, 4])
    }
}

/// The families `α_1, α_2, α_3` with `c ∈ {0, 1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AlphaCase {
    pub j: u8,
    pub c: u8,
}

impl AlphaCase {
    pub fn new(j: u8, c: u8) -> Result<Self, AlphaError> {
        if !(1..=3).contains(&j) || c > 1 {
            return Err(AlphaError::InvalidCase(j, c));
        }
        Ok(AlphaCase { j, c })
    }

    pub fn all() -> impl Iterator<Item = AlphaCase> {
        (1..=3).flat_map(|j| (0..=1).map(move |c| AlphaCase { j, c }))
    }

    /// Whether the modulus `d` occurs in the matrix.
    pub fn uses_d(&self) -> bool {
        self.j != 3
    }

    /// `(Y1, Y3, Y4)`: what the central block's `y1`, `y3`, `y4` become.
    ///
    /// j=1: `y4 = d*y3`. j=2: `y1 = -y3/(2d)` with the old `y3` renamed to
    /// `-2d*y1` and `y4` renamed `y3`, keeping entries polynomial. j=3: `y3 = 0`
    /// and `y4` renamed `y3`.
    pub fn y_policy(&self) -> [&'static str; 3] {
        match self.j {
            1 => ["y1", "y3", "d*y3"],
            2 => ["y1", "-2*d*y1", "y3"],
            _ => ["y1", "0", "y3"],
        }
    }

    /// Monomials removed from `q1..q4` by the border normalization.
    pub fn dropped_monomials(&self) -> [&'static [&'static str]; 4] {
        match self.j {
            1 => [
                &["x^2*y1", "x^2*y3"],
                &[],
                &["y1^2", "y1*y3", "y3^2"],
                &["x^2*y2", "y1^2", "y2^2"],
            ],
            _ => [
                &["x^2*y1", "x^2*y3", "y2*y3"],
                &[],
                &["y1^2"],
                &["x^2*y2", "y1^2", "y2^2", "y3^2"],
            ],
        }
    }

    /// Parameters of the ansatz: `d` (when used), `g1..g10`, `b1..b12`.
    pub fn parameter_names(&self) -> Vec<String> {
        let mut v = Vec::new();
        if self.uses_d() {
            v.push("d".to_string());
        }
        v.extend((1..=10).map(|k| format!("g{k}")));
        v.extend((1..=12).map(|k| format!("b{k}")));
        v
    }

    /// Geometric variables followed by the ansatz parameters and `extra`.
    pub fn table_with(&self, extra: &[String]) -> Result<Arc<VariableTable>, RingError> {
        VariableTable::builder()
            .with_geometric_vars()
            .parameters(self.parameter_names())
            .parameters(extra)
            .build()
    }
}

impl std::fmt::Display for AlphaCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "alpha{} c={}", self.j, self.c)
    }
}

/// Anti-invariant degree-6 monomials of `G`, in the order of `g1..g10`.
pub const G_MONOMIALS: [&str; 10] = [
    "x^4*y1",
    "x^4*y3",
    "x^2*y1*y2",
    "x^2*y2*y3",
    "y1^3",
    "y1^2*y3",
    "y1*y2^2",
    "y1*y3^2",
    "y2^2*y3",
    "y3^3",
];
/// Anti-invariant degree-4 monomials (for `q1`, `q2`).
pub const Q_MINUS_MONOMIALS: [&str; 4] = ["x^2*y1", "x^2*y3", "y1*y2", "y2*y3"];
/// Invariant degree-4 monomials (for `q3`, `q4`).
pub const Q_PLUS_MONOMIALS: [&str; 6] = ["x^4", "x^2*y2", "y1^2", "y1*y3", "y2^2", "y3^2"];

#[derive(Clone, Debug)]
pub struct Alpha {
    pub case: AlphaCase,
    pub matrix: SymPolyMatrix,
    pub params: Vec<String>,
}

impl Alpha {
    pub fn table(&self) -> &Arc<VariableTable> {
        self.matrix.table()
    }

    /// `Q`, the (0, 5) entry.
    pub fn q(&self) -> &Polynomial {
        self.matrix.get(0, 5)
    }

    /// `G = α_00 / x^2`.
    pub fn g_poly(&self) -> Result<Polynomial, RingError> {
        let x2 = Polynomial::parse(self.table(), "x^2")?;
        self.matrix.get(0, 0).exact_divide(&x2)
    }

    /// `q_k = α_0k / x` for k = 1..=4.
    pub fn q_poly(&self, k: usize) -> Result<Polynomial, RingError> {
        let x = Polynomial::parse(self.table(), "x")?;
        self.matrix.get(0, k).exact_divide(&x)
    }
}

/// Builds `α_j` over a fresh table holding only the ansatz parameters.
pub fn build_ansatz(case: AlphaCase) -> Result<Alpha, AlphaError> {
    let table = case.table_with(&[])?;
    build_ansatz_in(case, &table)
}

/// Builds `α_j` over `table`, which must contain the case's parameters.
pub fn build_ansatz_in(case: AlphaCase, table: &Arc<VariableTable>) -> Result<Alpha, AlphaError> {
    let p = |s: &str| Polynomial::parse(table, s);
    let [y1, y3, y4] = case.y_policy().map(p);
    let (y1, y3, y4) = (y1?, y3?, y4?);
    let y2 = p("y2")?;
    let x = p("x")?;
    let cx2 = p(&format!("{}*x^2", case.c))?;
    let zero = Polynomial::zero(table);
    let q = &(&(&y1 * &y1) - &(&y2 * &y2)) - &(&y3 * &y4);

    let mut g = zero.clone();
    for (k, m) in G_MONOMIALS.iter().enumerate() {
        g = &g + &p(&format!("g{}*{m}", k + 1))?;
    }
    let dropped = case.dropped_monomials();
    let mut qs = Vec::new();
    let mut b = 0;
    for (k, drop) in dropped.iter().enumerate() {
        let basis: &[&str] = if k < 2 { &Q_MINUS_MONOMIALS } else { &Q_PLUS_MONOMIALS };
        let mut qk = zero.clone();
        for m in basis.iter().filter(|m| !drop.contains(m)) {
            b += 1;
            qk = &qk + &p(&format!("b{b}*{m}"))?;
        }
        qs.push(qk);
    }
    debug_assert_eq!(b, 12);

    let x2 = &x * &x;
    let border = [&x2 * &g, &x * &qs[0], &x * &qs[1], &x * &qs[2], &x * &qs[3], q.clone()];
    let mut rows = vec![vec![zero.clone(); 6]; 6];
    let central = [
        [y4.clone(), y1.clone(), y2.clone(), zero.clone()],
        [y1.clone(), y3.clone(), cx2.clone(), y2.clone()],
        [y2.clone(), cx2, -&y3, y1.clone()],
        [zero.clone(), y2.clone(), y1, -&y4],
    ];
    for k in 0..6 {
        rows[0][k] = border[k].clone();
        rows[k][0] = border[k].clone();
    }
    for (a, row) in central.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            rows[a + 1][c + 1] = e.clone();
        }
    }
    rows[1][5] = x.clone();
    rows[5][1] = x;
    let matrix = SymPolyMatrix::new(PolyMatrix::from_rows(rows)?)?;
    matrix.check_pattern()?;
    Ok(Alpha {
        case,
        matrix,
        params: case.parameter_names(),
    })
}

/// True when every monomial has an even exponent of `x`.
pub fn even_in_x(p: &Polynomial) -> bool {
    let x = p.table().var("x").expect("geometric table");
    p.terms().iter().all(|(m, _)| m.exponent(x) % 2 == 0)
}

/// Checks that modulo `x` every 3×3 minor of the central block is divisible
/// by `q` and its determinant by `q^2`. Returns the first failing minor.
pub fn check_central_minors(m: &SymPolyMatrix, q: &Polynomial) -> Result<(), String> {
    let restricted = m.restrict_x0();
    let block = restricted.central_block();
    let x = m.table().var("x").expect("geometric table");
    let q0 = q.substitute_resolved(&[(x, Polynomial::zero(m.table()))].into_iter().collect());
    for ((r, c), minor) in block.minors_of_size(3) {
        if minor.exact_divide(&q0).is_err() {
            return Err(format!("3x3 minor rows {r:?} cols {c:?} = {}", minor.to_text()));
        }
    }
    let det = block.determinant();
    if det.exact_divide(&(&q0 * &q0)).is_err() {
        return Err(format!("central determinant {}", det.to_text()));
    }
    Ok(())
}


#[cfg(test)]
mod determinant_tests {
    use super::*;
    use crate::ring::WeightedDegree;

    #[test]
    fn det_is_octic_in_y0() {
        let a = build_ansatz(AlphaCase::new(1, 1).unwrap()).unwrap();
        let det = a.matrix.determinant();
        assert_eq!(det.weighted_degree().unwrap(), WeightedDegree::Homogeneous(16));
        assert!(even_in_x(&det));
        // expansion along a different first row
        let by_row0: Polynomial = (0..6)
            .map(|j| a.matrix.get(0, j) * &a.matrix.cofactor(0, j))
            .fold(Polynomial::zero(a.table()), |s, t| &s + &t);
        assert_eq!(by_row0, det);
    }
}
