//! Self-contained identities: the excluded double-line matrix, cofactors of
//! the central block, and the congruence transforms between normal forms.

use std::sync::Arc;

use crate::alpha::AlphaCase;
use crate::alpha::{PolyMatrix, SymPolyMatrix, G_MONOMIALS, Q_MINUS_MONOMIALS, Q_PLUS_MONOMIALS};
use crate::ring::{Monomial, Polynomial, RingError, VariableTable};

use super::{bind, expect_zero, matrix_difference, run_check, CheckReport, Outcome};

fn s(e: RingError) -> String {
    e.to_string()
}

fn parse_matrix(table: &Arc<VariableTable>, rows: &[[&str; 6]; 6]) -> Result<PolyMatrix, String> {
    let rows: Vec<&[&str]> = rows.iter().map(|r| &r[..]).collect();
    PolyMatrix::parse(table, &rows).map_err(s)
}

const CONIC_D2: &str = "y1^2 - y2^2 - d^2*y3^2";

/// The excluded matrix with diagonal blocks `y1 + d*y3`, `y1 - d*y3`.
pub fn lemma2_matrix(table: &Arc<VariableTable>) -> Result<PolyMatrix, String> {
    let q = CONIC_D2;
    parse_matrix(
        table,
        &[
            ["0", "0", "0", "0", "0", q],
            ["0", "y1 + d*y3", "0", "y2", "0", "0"],
            ["0", "0", "y1 + d*y3", "0", "y2", "0"],
            ["0", "y2", "0", "y1 - d*y3", "0", "0"],
            ["0", "0", "y2", "0", "y1 - d*y3", "0"],
            [q, "0", "0", "0", "0", "0"],
        ],
    )
}

/// The multipliers `l_ij^6` solving the rank condition for [`lemma2_matrix`].
pub const LEMMA2_L: [[&str; 6]; 6] = [
    ["0", "0", "0", "0", "0", "1"],
    ["0", "y1 - d*y3", "0", "-y2", "0", "0"],
    ["0", "0", "y1 - d*y3", "0", "-y2", "0"],
    ["0", "-y2", "0", "y1 + d*y3", "0", "0"],
    ["0", "0", "-y2", "0", "y1 + d*y3", "0"],
    ["1", "0", "0", "0", "0", "0"],
];

fn d_table() -> Arc<VariableTable> {
    VariableTable::builder()
        .with_geometric_vars()
        .parameter("d")
        .build()
        .expect("static table")
}

/// `β_ij - l_ij^6 β_16` for all 36 entries; `perturb` replaces `l_22`.
pub fn lemma2_outcome(perturb: Option<&str>) -> Outcome {
    let t = d_table();
    let m = lemma2_matrix(&t)?;
    let mut l_rows = LEMMA2_L;
    if let Some(p) = perturb {
        l_rows[1][1] = p;
    }
    let l = parse_matrix(&t, &l_rows)?;
    let b16 = m.cofactor(0, 5);
    for i in 0..6 {
        for j in 0..6 {
            let r = &m.cofactor(i, j) - &(l.get(i, j) * &b16);
            expect_zero(&format!("residual ({}, {})", i + 1, j + 1), &r)?;
        }
    }
    Ok(Some(format!("beta_16 = {}", b16.to_text())))
}

pub fn verify_lemma2() -> CheckReport {
    run_check("lemma2", || lemma2_outcome(None))
}

fn prop3_table() -> Arc<VariableTable> {
    let mut names: Vec<String> = vec!["d".into()];
    names.extend((1..=6).map(|k| format!("a{k}")));
    names.extend((1..=6).map(|k| format!("b{k}")));
    names.extend((1..=4).map(|k| format!("r{k}")));
    VariableTable::builder()
        .with_geometric_vars()
        .parameters(names)
        .build()
        .expect("static table")
}

/// Central 4×4 block `N` with `m_k = a_k y1 + b_k y3`. `None` for the generic
/// block with symbolic `r1..r4`; otherwise case 1, 2 or 3 with `r1 = r4 = 1`,
/// `r2 = r3 = 0`.
pub fn prop3_block(table: &Arc<VariableTable>, case: Option<u8>) -> Result<PolyMatrix, String> {
    let m = |k: usize| format!("a{k}*y1 + b{k}*y3");
    let (m2, m3, r) = match case {
        None => (m(2), m(3), ["r1*y2", "r2*y2", "r3*y2", "r4*y2"]),
        Some(1) => ("y1".into(), "y3".into(), ["y2", "0", "0", "y2"]),
        Some(2) => ("y3".into(), "y1".into(), ["y2", "0", "0", "y2"]),
        Some(3) => ("0".into(), m(3), ["y2", "0", "0", "y2"]),
        Some(c) => return Err(format!("no case {c}")),
    };
    let rows = [
        [m(1).as_str(), m2.as_str(), r[0], r[1]],
        [m2.as_str(), m3.as_str(), r[2], r[3]],
        [r[0], r[2], m(4).as_str(), m(5).as_str()],
        [r[1], r[3], m(5).as_str(), m(6).as_str()],
    ]
    .map(|row| row.map(str::to_string));
    let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(|x| x.as_str()).collect()).collect();
    let rows: Vec<&[&str]> = rows.iter().map(|r| &r[..]).collect();
    PolyMatrix::parse(table, &rows).map_err(s)
}

/// `(sign, (i, j) 1-based, right-hand side)`: `sign * C_ij / y2 = rhs`.
type CofactorClaim = (i64, (usize, usize), &'static str);

/// The expected cofactor formulas. The third case-2 formula is the `(2, 4)`
/// cofactor.
pub fn prop3_claims(case: u8) -> [CofactorClaim; 3] {
    match case {
        1 => [
            (-1, (1, 3), "a5*y1^2 + (b5 + a6)*y1*y3 - y2^2 + b6*y3^2"),
            (1, (1, 4), "a4*y1^2 + (b4 + a5)*y1*y3 + b5*y3^2"),
            (1, (2, 3), "(a1*a5 + a6)*y1^2 + (a1*b5 + b1*a5 + b6)*y1*y3 + b1*b5*y3^2"),
        ],
        2 => [
            (-1, (1, 3), "a6*y1^2 + (a5 + b6)*y1*y3 - y2^2 + b5*y3^2"),
            (1, (1, 4), "a5*y1^2 + (a4 + b5)*y1*y3 + b4*y3^2"),
            (
                -1,
                (2, 4),
                "a1*a4*y1^2 + (a1*b4 + b1*a4 + a5)*y1*y3 - y2^2 + (b1*b4 + b5)*y3^2",
            ),
        ],
        _ => [
            (-1, (1, 2), "y2*(a5*y1 + b5*y3)"),
            (-1, (1, 3), "a3*a6*y1^2 + (b3*a6 + a3*b6)*y1*y3 - y2^2 + b3*b6*y3^2"),
            (-1, (2, 4), "a1*a4*y1^2 + (b1*a4 + a1*b4)*y1*y3 - y2^2 + b1*b4*y3^2"),
        ],
    }
}

fn signed_cofactor_over_y2(n: &PolyMatrix, sign: i64, (i, j): (usize, usize)) -> Result<Polynomial, String> {
    let t = n.table();
    let c = n.cofactor(i - 1, j - 1).scale(&crate::ring::coeff(sign));
    let y2 = Polynomial::parse(t, "y2").map_err(s)?;
    c.exact_divide(&y2)
        .map_err(|_| format!("C_({i},{j}) not divisible by y2: {}", c.to_text()))
}

pub fn prop3_outcome(case: u8, claims: &[CofactorClaim]) -> Outcome {
    let t = prop3_table();
    let n = prop3_block(&t, Some(case))?;
    for &(sign, ij, rhs) in claims {
        let lhs = signed_cofactor_over_y2(&n, sign, ij)?;
        let rhs = Polynomial::parse(&t, rhs).map_err(s)?;
        expect_zero(&format!("C_{:?} difference", ij), &(&lhs - &rhs))?;
    }
    Ok(if case == 2 {
        Some("third formula checked as the (2,4) cofactor".into())
    } else {
        None
    })
}

pub fn verify_prop3_cofactors(case: u8) -> CheckReport {
    run_check(&format!("prop3_case{case}"), || {
        prop3_outcome(case, &prop3_claims(case))
    })
}

/// The conclusion values of case 1 turn the three constraints into `(Q, 0, 0)`.
pub const PROP3_CASE1_VALUES: [(&str, &str); 8] = [
    ("a1", "0"),
    ("b1", "d^2"),
    ("a4", "0"),
    ("b4", "-1"),
    ("a5", "1"),
    ("b5", "0"),
    ("a6", "0"),
    ("b6", "-d^2"),
];

pub fn verify_prop3_case1_values() -> CheckReport {
    run_check("prop3_case1_values", || {
        let t = prop3_table();
        let n = prop3_block(&t, Some(1))?;
        let vals: Vec<(&str, &str)> = PROP3_CASE1_VALUES.to_vec();
        let expected = [CONIC_D2, "0", "0"];
        for (&(sign, ij, _), e) in prop3_claims(1).iter().zip(expected) {
            let lhs = signed_cofactor_over_y2(&n, sign, ij)?
                .substitute_named(&vals)
                .map_err(s)?;
            let e = Polynomial::parse(&t, e).map_err(s)?;
            expect_zero(&format!("C_{ij:?} at the case-1 values"), &(&lhs - &e))?;
        }
        Ok(None)
    })
}

/// Coefficient of `y2^4` in the determinant of the generic block.
pub fn prop3_y24_coefficient() -> Result<Polynomial, String> {
    let t = prop3_table();
    let n = prop3_block(&t, None)?;
    let det = n.determinant();
    let vars: Vec<usize> = ["y1", "y2", "y3"].iter().map(|v| t.var(v).unwrap()).collect();
    Ok(det.coefficient_of(&Monomial::var_pow(vars[1], 4), &vars))
}

pub fn verify_prop3_y24() -> CheckReport {
    run_check("prop3_y24", || {
        let c = prop3_y24_coefficient()?;
        let expected = Polynomial::parse(c.table(), "(r1*r4 - r2*r3)^2").map_err(s)?;
        expect_zero("coefficient difference", &(&c - &expected))?;
        Ok(Some(format!("coefficient = {}", c.to_text())))
    })
}

/// Divides out `d^k e^k` from every term, `e` standing for `1/d`.
pub fn cancel_inverse(p: &Polynomial, d: usize, e: usize) -> Polynomial {
    let terms = p.terms().iter().map(|(m, c)| {
        let k = m.exponent(d).min(m.exponent(e));
        let m = if k == 0 {
            m.clone()
        } else {
            m.div(&Monomial::from_pairs([(d, k), (e, k)])).expect("divides")
        };
        (m, c.clone())
    });
    Polynomial::from_terms(p.table(), terms)
}

fn case2_table(d_value: Option<&str>, with_rule: bool) -> Result<Arc<VariableTable>, String> {
    let mut b = VariableTable::builder()
        .with_geometric_vars()
        .parameters(["d", "e"])
        .algebraic("r");
    if with_rule {
        let rhs = match d_value {
            None => "-d^2".to_string(),
            Some(v) => format!("-({v})^2"),
        };
        b = b.rule("r", 4, &rhs);
    }
    b.build().map_err(s)
}

/// Both sides of the case-2 change of variables, multiplied by `d^4`, with
/// `e = 1/d` cancelled. `d_value` replaces `d` (and `1/d_value` replaces `e`).
pub fn prop3_case2_sides(d_value: Option<(&str, &str)>, with_rule: bool) -> Result<(PolyMatrix, PolyMatrix), String> {
    let t = case2_table(d_value.map(|v| v.0), with_rule)?;
    let (d, e) = d_value.unwrap_or(("d", "e"));
    let q = format!("y1^2 - y2^2 - ({d})^2*y3^2");
    let text = |rows: [[String; 6]; 6]| -> Result<PolyMatrix, String> {
        let rows: Vec<Vec<&str>> = rows.iter().map(|r| r.iter().map(|x| x.as_str()).collect()).collect();
        let rows: Vec<&[&str]> = rows.iter().map(|r| &r[..]).collect();
        PolyMatrix::parse(&t, &rows).map_err(s)
    };
    let z = || "0".to_string();
    let matrix1 = text([
        [z(), z(), z(), z(), z(), q.clone()],
        [z(), format!("({d})^2*y3"), "y1".into(), "y2".into(), z(), z()],
        [z(), "y1".into(), "y3".into(), z(), "y2".into(), z()],
        [z(), "y2".into(), z(), "-y3".into(), "y1".into(), z()],
        [z(), z(), "y2".into(), "y1".into(), format!("-({d})^2*y3"), z()],
        [q.clone(), z(), z(), z(), z(), z()],
    ])?;
    let m = text([
        [z(), z(), z(), z(), z(), q.clone()],
        [z(), format!("({e})^2*y1"), "y3".into(), "y2".into(), z(), z()],
        [z(), "y3".into(), "y1".into(), z(), "y2".into(), z()],
        [
            z(),
            "y2".into(),
            z(),
            format!("({d})^2*y1"),
            format!("-({d})^2*y3"),
            z(),
        ],
        [z(), z(), "y2".into(), format!("-({d})^2*y3"), "y1".into(), z()],
        [q.clone(), z(), z(), z(), z(), z()],
    ])?;
    let p = PolyMatrix::diagonal(
        &["1", "r^3", &format!("r^3*({e})^2"), &format!("-r*({e})^2"), "-r", "1"]
            .map(|x| Polynomial::parse(&t, x))
            .into_iter()
            .collect::<Result<Vec<_>, _>>()
            .map_err(s)?,
    );
    let images = [("y1", "-r^2*y3".to_string()), ("y3", format!("-r^2*({e})^2*y1"))];
    let mut b = rustc_hash::FxHashMap::default();
    for (v, img) in &images {
        b.insert(t.var(v).map_err(s)?, Polynomial::parse(&t, img).map_err(s)?);
    }
    let lhs = matrix1.map(|x| x.substitute_resolved(&b));
    let rhs = m.congruence(&p).map_err(s)?;
    let d4 = Polynomial::parse(&t, &format!("({d})^4")).map_err(s)?;
    let (dv, ev) = (t.var("d").map_err(s)?, t.var("e").map_err(s)?);
    let clear = |x: &Polynomial| cancel_inverse(&(x * &d4), dv, ev);
    Ok((lhs.map(clear), rhs.map(clear)))
}

pub fn prop3_case2_outcome(with_rule: bool) -> Outcome {
    let (lhs, rhs) = prop3_case2_sides(None, with_rule)?;
    matrix_difference(&lhs, &rhs)?;
    let e = lhs.table().var("e").map_err(s)?;
    if lhs.entries().iter().chain(rhs.entries()).any(|p| p.involves(e)) {
        return Err("1/d survives clearing by d^4".into());
    }
    let (l1, r1) = prop3_case2_sides(Some(("1", "1")), with_rule)?;
    matrix_difference(&l1, &r1).map_err(|w| format!("at d = 1: {w}"))?;
    Ok(Some("both sides multiplied by d^4; r^4 = -d^2; also at d = 1".into()))
}

pub fn verify_prop3_case2_transform() -> CheckReport {
    run_check("prop3_case2_transform", || prop3_case2_outcome(true))
}

fn i_table() -> Arc<VariableTable> {
    VariableTable::builder()
        .with_geometric_vars()
        .parameter("d")
        .algebraic("i")
        .rule("i", 2, "-1")
        .build()
        .expect("static table")
}

/// `M_j` of case 3 (diagonal blocks `y1 ± d*y3`).
pub fn prop3_mj(table: &Arc<VariableTable>, j: u8) -> Result<PolyMatrix, String> {
    let (p, m) = if j == 1 {
        ("y1 + d*y3", "y1 - d*y3")
    } else {
        ("y1 - d*y3", "y1 + d*y3")
    };
    let q = CONIC_D2;
    parse_matrix(
        table,
        &[
            ["0", "0", "0", "0", "0", q],
            ["0", "y1 + d*y3", "0", "y2", "0", "0"],
            ["0", "0", p, "0", "y2", "0"],
            ["0", "y2", "0", "y1 - d*y3", "0", "0"],
            ["0", "0", "y2", "0", m, "0"],
            [q, "0", "0", "0", "0", "0"],
        ],
    )
}

/// `2d R`, the case-3 transform with denominators cleared.
pub const CASE3_R_CLEARED: [[&str; 6]; 6] = [
    ["2*d", "0", "0", "0", "0", "0"],
    ["0", "2*d*i", "d^2", "0", "0", "0"],
    ["0", "-2*i", "d", "0", "0", "0"],
    ["0", "0", "0", "-d*i", "2", "0"],
    ["0", "0", "0", "i*d^2", "2*d", "0"],
    ["0", "0", "0", "0", "0", "2*d"],
];

/// `4d^2 Y1` and `4d^2 Y3` for the new variables of case 3.
pub const CASE3_Y1: &str = "-d^4*y3 + d^3*y1 + 4*d^2*y3 + 4*d*y1";
pub const CASE3_Y3: &str = "-d^3*y3 + d^2*y1 - 4*d*y3 - 4*y1";

/// `(2dR) M_2 (2dR)^T = 4d^2 * matrix (1)` in the variables `Y1, Y3`, and
/// the conic is unchanged: `Y1^2 - d^2 Y3^2 = y1^2 - d^2 y3^2`.
pub fn prop3_case3_outcome(r_rows: &[[&str; 6]; 6]) -> Outcome {
    let t = i_table();
    let m2 = prop3_mj(&t, 2)?;
    let r = parse_matrix(&t, r_rows)?;
    let lhs = m2.congruence(&r).map_err(s)?;
    let (a, b) = (CASE3_Y1, CASE3_Y3);
    let q4 = format!("4*d^2*({CONIC_D2})");
    let y2 = "4*d^2*y2";
    let db = format!("d^2*({b})");
    let target = parse_matrix(
        &t,
        &[
            ["0", "0", "0", "0", "0", &q4],
            ["0", &db, a, y2, "0", "0"],
            ["0", a, b, "0", y2, "0"],
            ["0", y2, "0", &format!("-({b})"), a, "0"],
            ["0", "0", y2, a, &format!("-({db})"), "0"],
            [&q4, "0", "0", "0", "0", "0"],
        ],
    )?;
    matrix_difference(&lhs, &target)?;
    let conic = Polynomial::parse(&t, &format!("({a})^2 - d^2*({b})^2 - 16*d^4*(y1^2 - d^2*y3^2)")).map_err(s)?;
    expect_zero("conic change", &conic)?;
    // the excluded matrix M_1 is the double-line shape
    matrix_difference(&prop3_mj(&t, 1)?, &lemma2_matrix(&t)?).map_err(|w| format!("M_1 vs excluded shape: {w}"))?;
    Ok(Some(
        "cleared by 2d (target scaled by 4d^2); i^2 = -1; M_1 is the excluded shape".into(),
    ))
}

pub fn verify_prop3_case3() -> CheckReport {
    run_check("prop3_case3_transform", || prop3_case3_outcome(&CASE3_R_CLEARED))
}

pub const THM4_P: [[&str; 6]; 6] = [
    ["1", "0", "0", "0", "0", "0"],
    ["0", "0", "1", "0", "0", "0"],
    ["0", "1", "-d", "0", "0", "0"],
    ["0", "0", "0", "d", "1", "0"],
    ["0", "0", "0", "1", "0", "0"],
    ["0", "0", "0", "0", "0", "1"],
];

fn thm4_table() -> Arc<VariableTable> {
    let mut names: Vec<String> = vec!["d".into(), "c2".into()];
    names.extend((1..=10).map(|k| format!("g{k}")));
    names.extend((1..=20).map(|k| format!("b{k}")));
    VariableTable::builder()
        .with_geometric_vars()
        .parameters(names)
        .build()
        .expect("static table")
}

/// The matrix before the case-3 transform, with generic border.
pub fn thm4_case3_alpha(t: &Arc<VariableTable>) -> Result<PolyMatrix, String> {
    let sum = |mons: &[&str], first: usize| -> String {
        mons.iter()
            .enumerate()
            .map(|(k, m)| format!("b{}*{m}", first + k))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    let g: String = G_MONOMIALS
        .iter()
        .enumerate()
        .map(|(k, m)| format!("g{}*{m}", k + 1))
        .collect::<Vec<_>>()
        .join(" + ");
    let q = [
        sum(&Q_MINUS_MONOMIALS, 1),
        sum(&Q_MINUS_MONOMIALS, 5),
        sum(&Q_PLUS_MONOMIALS, 9),
        sum(&Q_PLUS_MONOMIALS, 15),
    ];
    let g = format!("x^2*({g})");
    let xq: Vec<String> = q.iter().map(|p| format!("x*({p})")).collect();
    parse_matrix(
        t,
        &[
            [&g, &xq[0], &xq[1], &xq[2], &xq[3], CONIC_D2],
            [&xq[0], "d^2*y3", "y1", "y2", "c2*x^2", "d*x"],
            [&xq[1], "y1", "y3", "0", "y2", "x"],
            [&xq[2], "y2", "0", "-y3", "y1", "0"],
            [&xq[3], "c2*x^2", "y2", "y1", "-d^2*y3", "0"],
            [CONIC_D2, "d*x", "x", "0", "0", "0"],
        ],
    )
}

/// Central block, `Q` and last row of `α_j` with `c` symbolic (`c2`).
fn alpha_template(t: &Arc<VariableTable>, case: AlphaCase) -> Result<PolyMatrix, String> {
    let [y1, y3, y4] = case.y_policy();
    let q = format!("({y1})^2 - y2^2 - ({y3})*({y4})");
    parse_matrix(
        t,
        &[
            ["0", "0", "0", "0", "0", &q],
            ["0", y4, y1, "y2", "0", "x"],
            ["0", y1, y3, "c2*x^2", "y2", "0"],
            ["0", "y2", "c2*x^2", &format!("-({y3})"), y1, "0"],
            ["0", "0", "y2", y1, &format!("-({y4})"), "0"],
            [&q, "x", "0", "0", "0", "0"],
        ],
    )
}

fn strip_border(m: &PolyMatrix) -> PolyMatrix {
    let mut out = m.clone();
    let zero = Polynomial::zero(m.table());
    for k in 0..5 {
        out.set(0, k, zero.clone());
        out.set(k, 0, zero.clone());
    }
    out
}

pub fn thm4_case3_outcome(p_rows: &[[&str; 6]; 6]) -> Outcome {
    let t = thm4_table();
    let p = parse_matrix(&t, p_rows)?;
    let det = p.determinant();
    if det.constant_value().map(|c| num_traits::Signed::abs(&c)) != Some(crate::ring::coeff(1)) {
        return Err(format!("det P' = {}", det.to_text()));
    }
    let alpha = thm4_case3_alpha(&t)?;
    let x = alpha.congruence(&p).map_err(s)?;
    // back to the variables of α2: y1 -> y1 + d*y3
    let shift = bind(&[(t.var("y1").unwrap(), Polynomial::parse(&t, "y1 + d*y3").unwrap())]);
    let x = x.map(|e| e.substitute_resolved(&shift));
    let sym = SymPolyMatrix::new(x.clone()).map_err(|e| e.to_string())?;
    sym.check_pattern().map_err(|e| e.to_string())?;
    let two = AlphaCase::new(2, 1).unwrap();
    matrix_difference(&strip_border(&x), &alpha_template(&t, two)?).map_err(|w| format!("alpha2 shape: {w}"))?;
    let d0 = bind(&[(t.var("d").unwrap(), Polynomial::zero(&t))]);
    let x0 = x.map(|e| e.substitute_resolved(&d0));
    let three = AlphaCase::new(3, 1).unwrap();
    matrix_difference(&strip_border(&x0), &alpha_template(&t, three)?)
        .map_err(|w| format!("alpha3 shape at d = 0: {w}"))?;
    Ok(Some(format!(
        "det P' = {}; alpha2 shape after y1 -> y1 + d*y3",
        det.to_text()
    )))
}

pub fn verify_thm4_case3() -> CheckReport {
    run_check("thm4_case3", || thm4_case3_outcome(&THM4_P))
}
