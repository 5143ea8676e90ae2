//! Checks on pipeline outputs: the printed final `α1`, scaling, squareness,
//! the `α2` basepoint, `r` removal and the two special surfaces.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::alpha::{build_ansatz, build_ansatz_in, check_central_minors, AlphaCase, SymPolyMatrix};
use crate::elim::{self, DriverConfig};
use crate::rc;
use crate::ring::{coeff, Coeff, Polynomial, VariableTable};
use crate::surface::{self, random_rational, Membership, MembershipConfig, SurfaceEquations};

use super::{bind, expect_zero, matrix_difference, run_check, CheckReport, Context, Outcome};

/// Printed final `G` of `α1, c=1`.
pub const PRINTED_G: &str = "(-2*b9*b6*d+2*b9*b8*d+4*b9*d^2+2*b6*b11-2*b8*b11-4*d*b11)*x^4*y1 \
    + (-2*b5*b9*d^2+b5*d*b11-2*b9^2*d^2-b9*d*b11+2*b6*d^2+b6*b12+b8^2*d+2*b8*d^2+d*g9+2*d*b12+b11^2)*x^4*y3 \
    + (-2*b5*b9*d-2*b9^2*d-2*b9*b11+2*b6*d+2*g9+4*b12)*x^2*y1*y2 \
    + (-2*b5*d^2-b5*b12-2*b9*b6*d+2*b9*b8*d-b9*b12+b6*b11+2*d*b2-2*d*b11)*x^2*y2*y3 \
    + (2*b9*d-2*b11)*y1^3 + (b5*b11+b9^2*d+b9*b11-2*b6*d-g9-4*b12)*y1^2*y3 \
    + (-2*b5*d-4*b9*d+4*b2-2*b11)*y1*y2^2 + (b5*b12-2*b9*d^2+b9*b12+b6*b11)*y1*y3^2 \
    + g9*y2^2*y3 + (-b9^2*d^2+2*b6*d^2+b6*b12+d*g9+2*d*b12)*y3^3";

/// Printed final `q1..q4` of `α1, c=1`.
pub const PRINTED_Q: [&str; 4] = [
    "b2*y2*y3",
    "(b6-b8-2*d)*x^2*y1 + (b5*d+b11)*x^2*y3 + b5*y1*y2 + b6*y2*y3",
    "(-b9*d+b11)*x^4 + b8*x^2*y2 + b9*y2^2",
    "(b8*d+d^2+b12)*x^4 + b11*y1*y3 + b12*y3^2",
];

/// Printed final conic of `α1, c=1`.
pub const PRINTED_CONIC: &str = "y1^2 - y2^2 - d*y3^2";

/// Expected border of the final `α1, c=1` as text.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Golden {
    pub g: String,
    pub q: [String; 4],
    pub conic: String,
}

impl Default for Golden {
    fn default() -> Self {
        Golden {
            g: PRINTED_G.to_string(),
            q: PRINTED_Q.map(str::to_string),
            conic: PRINTED_CONIC.to_string(),
        }
    }
}

/// Parameters of the final `α1, c=1`.
pub const SURVIVORS: [&str; 9] = ["d", "g9", "b2", "b5", "b6", "b8", "b9", "b11", "b12"];

/// Weights `w` with `D(x^2/u, y1, y2, y3/u, u^w p) = D`.
pub const SCALING_WEIGHTS: [(&str, u32); 9] = [
    ("b5", 1),
    ("b9", 1),
    ("b6", 2),
    ("b8", 2),
    ("d", 2),
    ("b2", 3),
    ("b11", 3),
    ("g9", 4),
    ("b12", 4),
];

fn s(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// `α1, c=1` over `table` with the border given by `golden`.
pub fn printed_alpha(table: &Arc<VariableTable>, golden: &Golden) -> Result<SymPolyMatrix, String> {
    let case = AlphaCase::new(1, 1).map_err(s)?;
    let mut m = build_ansatz_in(case, table).map_err(s)?.matrix.matrix().clone();
    let p = |t: &str| Polynomial::parse(table, t).map_err(s);
    let border = [
        p(&format!("x^2*({})", golden.g))?,
        p(&format!("x*({})", golden.q[0]))?,
        p(&format!("x*({})", golden.q[1]))?,
        p(&format!("x*({})", golden.q[2]))?,
        p(&format!("x*({})", golden.q[3]))?,
        p(&golden.conic)?,
    ];
    for (k, e) in border.into_iter().enumerate() {
        m.set(0, k, e.clone());
        m.set(k, 0, e);
    }
    SymPolyMatrix::new(m).map_err(s)
}

/// Rank condition of the printed matrix: the coefficient system in the
/// `r`'s alone must be solved by linear elimination, and the residuals must
/// vanish after back-substitution.
pub fn verify_printed_alpha_rc() -> CheckReport {
    run_check("printed_alpha_rc", || {
        let case = AlphaCase::new(1, 1).map_err(s)?;
        let table = case.table_with(&rc::r_names(rc::r_count())).map_err(s)?;
        let alpha = printed_alpha(&table, &Golden::default())?;
        alpha.check_pattern().map_err(s)?;
        let l = rc::build_l_ansatz(&table).map_err(s)?;
        let residuals = rc::rc_residuals(&alpha, &l).map_err(s)?;
        let system = rc::extract_system(residuals.clone()).map_err(s)?;
        let n = system.f.len();
        let out = elim::driver(system.f, l.r_vars(), &[], &DriverConfig::default());
        if !out.solved {
            let first = out.state.f.first().map(|p| p.to_text()).unwrap_or_default();
            return Err(format!("{} of {n} equations left; first: {first}", out.state.f.len()));
        }
        let resolved = elim::resolve(&out.state.deps);
        for ((i, j), r) in &residuals {
            let r = elim::back_substitute(r, &resolved);
            expect_zero(&format!("residual ({}, {})", i + 1, j + 1), &r)?;
        }
        Ok(Some(format!(
            "{n} equations solved in the r's; {} r's fixed",
            out.state.deps.len()
        )))
    })
}

/// Border of the pipeline's final `α1, c=1` against the printed one.
pub fn verify_printed_alpha_golden(ctx: &Context) -> CheckReport {
    run_check("printed_alpha_golden", || {
        let run = ctx.main_run()?;
        let t = run.alpha.table();
        let printed = printed_alpha(t, &ctx.golden)?;
        matrix_difference(run.alpha.matrix(), printed.matrix())?;
        Ok(Some("G, q1..q4 and Q match the printed text".into()))
    })
}

pub fn verify_final_alpha_minors(ctx: &Context) -> CheckReport {
    run_check("final_alpha_minors", || {
        let run = ctx.main_run()?;
        run.alpha.check_pattern().map_err(s)?;
        check_central_minors(&run.alpha, run.alpha.get(0, 5))?;
        let det = run.alpha.determinant();
        if det.is_zero() {
            return Err("det alpha = 0".into());
        }
        Ok(Some(format!("det alpha has {} terms", det.len())))
    })
}

/// `D(x^2/u, y1, y2, y3/u, u^w p) - D`, zero when the weights are right.
pub fn scaling_defect(det: &Polynomial, weights: &[(&str, u32)], u: &Coeff) -> Result<Polynomial, String> {
    let t = det.table();
    let x = t.var("x").map_err(s)?;
    let inv = Coeff::from_integer(1.into()) / u;
    let mut terms = Vec::with_capacity(det.len());
    for (m, c) in det.terms() {
        let e = m.exponent(x);
        if e % 2 == 1 {
            return Err(format!("odd power of x in {}", m.format(t)));
        }
        terms.push((m.clone(), c * num_traits::pow(inv.clone(), (e / 2) as usize)));
    }
    let halved = Polynomial::from_terms(t, terms);
    let mut b = vec![(
        t.var("y3").map_err(s)?,
        Polynomial::parse(t, "y3").map_err(s)?.scale(&inv),
    )];
    for &(name, w) in weights {
        let v = t.var(name).map_err(s)?;
        b.push((v, Polynomial::var(t, v).scale(&num_traits::pow(u.clone(), w as usize))));
    }
    Ok(&halved.substitute_resolved(&bind(&b)) - det)
}

fn scaling_values(seed: u64) -> Vec<Coeff> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![coeff(1), coeff(2), coeff(3), random_rational(&mut rng)]
}

pub fn verify_scaling_all(ctx: &Context) -> CheckReport {
    run_check("scaling", || {
        let run = ctx.main_run()?;
        let det = run.alpha.determinant();
        let us = scaling_values(ctx.seed);
        for u in &us {
            let defect = scaling_defect(&det, &SCALING_WEIGHTS, u)?;
            expect_zero(&format!("u = {u}"), &defect)?;
        }
        let shown: Vec<String> = us.iter().map(|u| u.to_string()).collect();
        Ok(Some(format!("u in {{{}}}", shown.join(", "))))
    })
}

/// Table with the case parameters and `i^2 = -1`.
fn gaussian_table(case: AlphaCase) -> Result<Arc<VariableTable>, String> {
    VariableTable::builder()
        .with_geometric_vars()
        .parameters(case.parameter_names())
        .algebraic("i")
        .rule("i", 2, "-1")
        .build()
        .map_err(s)
}

/// A square root of `det` over `ℚ(i)`: `Ok((root text, over ℚ))`.
pub fn square_root_over_qi(det: &Polynomial, case: AlphaCase, seed: u64) -> Result<(String, bool), String> {
    if let Ok(root) = det.sqrt() {
        let back = &(&root * &root) - det;
        expect_zero("root^2 - det", &back)?;
        return Ok((root.to_text(), true));
    }
    let neg = det.scale(&coeff(-1));
    let root = neg
        .sqrt()
        .map_err(|_| "neither det nor -det is a square over Q".to_string())?;
    let t = gaussian_table(case)?;
    let det_i = det.transfer(&t).map_err(s)?;
    let i_root = &Polynomial::parse(&t, "i").map_err(s)? * &root.transfer(&t).map_err(s)?;
    expect_zero("(i*s)^2 - det", &(&(&i_root * &i_root) - &det_i))?;
    // independent evaluation at random points
    let vars: Vec<usize> = (0..det.table().len()).collect();
    for k in 0..3 {
        let pt = surface::random_point(det.table(), &vars, seed.wrapping_add(k));
        let dv = det
            .substitute_resolved(&pt)
            .constant_value()
            .unwrap_or_else(|| coeff(0));
        let rv = root
            .substitute_resolved(&pt)
            .constant_value()
            .unwrap_or_else(|| coeff(0));
        if dv != -(&rv * &rv) {
            return Err(format!("point {k}: det = {dv}, s = {rv}"));
        }
    }
    Ok((format!("i*({})", root.to_text()), false))
}

pub fn verify_alpha3_square(ctx: &Context) -> CheckReport {
    run_check("alpha3_square", || {
        let case = AlphaCase::new(3, 0).map_err(s)?;
        let raw = build_ansatz(case).map_err(s)?;
        let (_, rational) = square_root_over_qi(&raw.matrix.determinant(), case, ctx.seed)?;
        let run = ctx.run(3, 0)?;
        if !run.solved() {
            return Err(format!("alpha3 c=0 left {} equations", run.outcome.state.f.len()));
        }
        let (root, final_rational) = square_root_over_qi(&run.alpha.determinant(), case, ctx.seed)?;
        let field = |q: bool| if q { "Q" } else { "Q(i)" };
        Ok(Some(format!(
            "raw det square over {}, final det square over {}; final root {}",
            field(rational),
            field(final_rational),
            root
        )))
    })
}

fn basepoint(table: &Arc<VariableTable>, one: &str) -> Result<FxHashMap<usize, Polynomial>, String> {
    let mut b = Vec::new();
    for v in 0..table.geometric_count() {
        let val = if table.name(v) == one { 1 } else { 0 };
        b.push((v, Polynomial::int(table, val)));
    }
    if !b.iter().any(|(v, _)| table.name(*v) == one) {
        return Err(format!("no variable {one}"));
    }
    Ok(bind(&b))
}

/// Nonzero equations at the point with `one = 1` and all other geometric
/// coordinates zero.
pub fn nonvanishing_at(eqs: &SurfaceEquations, one: &str) -> Result<Vec<String>, String> {
    let t = eqs.eqs.first().ok_or("no equations")?.poly.table().clone();
    let pt = basepoint(&t, one)?;
    Ok(eqs
        .eqs
        .iter()
        .filter(|e| !e.poly.substitute_resolved(&pt).is_zero())
        .map(|e| e.origin.to_string())
        .collect())
}

/// `α2, c=0` vanishes at `(0:0:0:1:0:...:0)`. When the system is only
/// partially solved the equations of the partially solved family are used;
/// vanishing identically in the remaining parameters covers every solution.
pub fn verify_alpha2_basepoint(ctx: &Context) -> CheckReport {
    run_check("alpha2_basepoint", || {
        let run = ctx.run(2, 0)?;
        let bad = nonvanishing_at(&run.equations, "y3")?;
        if !bad.is_empty() {
            return Err(format!("nonzero at the point: {}", bad.join(", ")));
        }
        let control = nonvanishing_at(&run.equations, "t")?;
        if control.is_empty() {
            return Err("every equation also vanishes at t = 1 (control)".into());
        }
        let status = if run.solved() {
            "solved".to_string()
        } else {
            format!("partially solved, {} equations left", run.outcome.state.f.len())
        };
        Ok(Some(format!(
            "all {} equations vanish identically ({status}); {} nonzero at t = 1",
            run.equations.len(),
            control.len()
        )))
    })
}

pub fn verify_r_removal(ctx: &Context) -> CheckReport {
    run_check("r_removal", || {
        let run = ctx.main_run()?;
        let gm = surface::collect_gm(&run.equations, &run.free_r).map_err(s)?;
        let generators: Vec<Polynomial> = run
            .final_equations
            .up_to_degree(5)
            .iter()
            .map(|e| e.poly.clone())
            .collect();
        let targets: Vec<Polynomial> = gm.iter().map(|g| g.g.clone()).collect();
        let config = MembershipConfig::new(ctx.seed, 3);
        let verdicts = surface::membership_check_all(&targets, &generators, &run.survivor_vars(), &config);
        for (entry, v) in gm.iter().zip(&verdicts) {
            let what = format!(
                "{} in {}",
                run.alpha.table().name(entry.r),
                run.equations.eqs[entry.equation].origin
            );
            match v {
                Membership::Verified => {}
                Membership::Refuted { seed, remainder } => {
                    return Err(format!(
                        "{what}: not in the ideal at seed {seed}, remainder {remainder}"
                    ))
                }
                Membership::Inconclusive { seed, reason } => {
                    return Err(format!("{what}: inconclusive at seed {seed} ({reason})"))
                }
            }
        }
        Ok(Some(format!(
            "{} coefficients over {} free r's in the ideal of {} equations; seeds {:?}",
            gm.len(),
            run.free_r.len(),
            generators.len(),
            config.seeds
        )))
    })
}

pub fn verify_survivors(ctx: &Context) -> CheckReport {
    run_check("survivors", || {
        let run = ctx.main_run()?;
        let got: BTreeSet<&str> = run.survivors.iter().map(|n| n.as_str()).collect();
        let want: BTreeSet<&str> = SURVIVORS.into_iter().collect();
        if got != want {
            return Err(format!("survivors {got:?}"));
        }
        let t = run.alpha.table();
        let used: BTreeSet<&str> = run.final_equations.parameters().iter().map(|&v| t.name(v)).collect();
        if used != want {
            return Err(format!("final equations use {used:?}"));
        }
        Ok(Some(format!(
            "{} equations in {} parameters; {} free r's",
            run.setup.system.f.len(),
            run.setup.system.param_count(),
            run.free_r.len()
        )))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecialSurface {
    By,
    Bf,
}

impl SpecialSurface {
    pub fn name(self) -> &'static str {
        match self {
            SpecialSurface::By => "by",
            SpecialSurface::Bf => "bf",
        }
    }

    /// Values of `(b5, b9, b6, b8, d, b2, b11, g9, b12)`, with `r^2 = -15`.
    pub fn values(self) -> [(&'static str, &'static str); 9] {
        match self {
            SpecialSurface::By => [
                ("b5", "-60"),
                ("b9", "40"),
                ("b6", "-120"),
                ("b8", "-302"),
                ("d", "9"),
                ("b2", "252"),
                ("b11", "360"),
                ("g9", "15903"),
                ("b12", "648"),
            ],
            SpecialSurface::Bf => [
                ("b5", "36*r + 36"),
                ("b9", "64"),
                ("b6", "-360*r + 1752"),
                ("b8", "360*r + 4392"),
                ("d", "-30*r - 366"),
                ("b2", "-10176*r - 45504"),
                ("b11", "20976*r + 78960"),
                ("g9", "238008*r + 1635576"),
                ("b12", "-383328*r + 867744"),
            ],
        }
    }
}

impl std::str::FromStr for SpecialSurface {
    type Err = String;
    fn from_str(v: &str) -> Result<Self, String> {
        match v {
            "by" => Ok(SpecialSurface::By),
            "bf" => Ok(SpecialSurface::Bf),
            _ => Err(format!("unknown surface {v}")),
        }
    }
}

/// The final `α1, c=1` and its equations at one special parameter point.
#[derive(Clone, Debug)]
pub struct SpecialInstance {
    pub alpha: SymPolyMatrix,
    pub equations: SurfaceEquations,
}

fn special_table(run_table: &VariableTable) -> Result<Arc<VariableTable>, String> {
    let names: Vec<String> = (0..run_table.len())
        .filter(|&v| !run_table.is_geometric(v))
        .map(|v| run_table.name(v).to_string())
        .filter(|n| n != "r")
        .collect();
    VariableTable::builder()
        .with_geometric_vars()
        .parameters(names)
        .algebraic("r")
        .rule("r", 2, "-15")
        .build()
        .map_err(s)
}

/// Specializes the main run at `values`.
pub fn special_instance(ctx: &Context, values: &[(&str, &str)]) -> Result<SpecialInstance, String> {
    let run = ctx.main_run()?;
    let t = special_table(run.alpha.table())?;
    let mut b = Vec::new();
    for (name, val) in values {
        b.push((t.var(name).map_err(s)?, Polynomial::parse(&t, val).map_err(s)?));
    }
    let b = bind(&b);
    let spec =
        |p: &Polynomial| -> Result<Polynomial, String> { Ok(p.transfer(&t).map_err(s)?.substitute_resolved(&b)) };
    let alpha = run.alpha.try_map(|p| spec(p)).map_err(s)?;
    let alpha = SymPolyMatrix::new(alpha.matrix().clone()).map_err(s)?;
    let mut eqs = run.final_equations.clone();
    for e in &mut eqs.eqs {
        e.poly = spec(&e.poly)?;
    }
    Ok(SpecialInstance { alpha, equations: eqs })
}

/// Nondegeneracy at one parameter point; `Err` names the first failure.
pub fn special_outcome(ctx: &Context, values: &[(&str, &str)]) -> Outcome {
    let run = ctx.main_run()?;
    let inst = special_instance(ctx, values)?;
    let t = inst.alpha.table().clone();
    if let Some(p) = t
        .entries()
        .iter()
        .enumerate()
        .filter(|(v, _)| !t.is_geometric(*v) && t.name(*v) != "r")
        .find(|(v, _)| inst.alpha.matrix().entries().iter().any(|p| p.involves(*v)))
    {
        return Err(format!("parameter {} left unspecialized", p.1.name));
    }
    inst.alpha.check_pattern().map_err(s)?;
    let q = inst.alpha.get(0, 5).clone();
    let d = Polynomial::parse(&t, values.iter().find(|(n, _)| *n == "d").map(|v| v.1).unwrap_or("d")).map_err(s)?;
    if d.is_zero() {
        return Err(format!("conic degenerate: d = 0, Q = {}", q.to_text()));
    }
    check_central_minors(&inst.alpha, &q)?;
    let det = inst.alpha.determinant();
    if det.is_zero() {
        return Err("det alpha = 0".into());
    }
    for (e, orig) in inst.equations.eqs.iter().zip(&run.final_equations.eqs) {
        if e.poly.is_zero() {
            return Err(format!("equation {} vanishes", e.origin));
        }
        let deg = e.poly.weighted_degree().map_err(s)?;
        if deg != orig.poly.weighted_degree().map_err(s)? {
            return Err(format!("equation {} changes degree", e.origin));
        }
    }
    Ok(Some(format!(
        "Q = {}; {} equations nonzero",
        q.to_text(),
        inst.equations.len()
    )))
}

pub fn verify_special(ctx: &Context, surface: SpecialSurface) -> CheckReport {
    run_check(&format!("special_{}", surface.name()), || {
        special_outcome(ctx, &surface.values())
    })
}

/// Each control must fail; the check passes when all of them do.
pub fn verify_negative_controls(ctx: &Context) -> CheckReport {
    run_check("negative_controls", || {
        let mut case1 = super::identities::prop3_claims(1);
        case1[1].2 = "a4*y1^2 + (b4 - a5)*y1*y3 + b5*y3^2";
        let mut r_bad = super::identities::CASE3_R_CLEARED;
        r_bad[1][2] = "-d^2";
        let mut p_bad = super::identities::THM4_P;
        p_bad[2][2] = "d";
        let mut weights = SCALING_WEIGHTS;
        weights[0].1 = 2;
        let mut by_d0 = SpecialSurface::By.values();
        by_d0[4].1 = "0";

        let mut controls: Vec<(&str, Outcome)> = vec![
            (
                "lemma2 with l_22 = y1 + d*y3",
                super::identities::lemma2_outcome(Some("y1 + d*y3")),
            ),
            (
                "prop3 case 1 with a sign flipped",
                super::identities::prop3_outcome(1, &case1),
            ),
            (
                "case-2 transform without r^4 = -d^2",
                super::identities::prop3_case2_outcome(false),
            ),
            (
                "case-3 transform with a sign flipped",
                super::identities::prop3_case3_outcome(&r_bad),
            ),
            (
                "case-3 normal-form transform with P'_33 = d",
                super::identities::thm4_case3_outcome(&p_bad),
            ),
        ];
        let one = AlphaCase::new(1, 1).map_err(s)?;
        let det1 = build_ansatz(one).map_err(s)?.matrix.determinant();
        controls.push((
            "det alpha1 c=1 as a square",
            square_root_over_qi(&det1, one, ctx.seed).map(|_| None),
        ));
        let run = ctx.main_run()?;
        let det = run.alpha.determinant();
        controls.push((
            "scaling with weight(b5) = 2",
            scaling_defect(&det, &weights, &coeff(2)).and_then(|p| expect_zero("defect", &p).map(|_| None)),
        ));
        controls.push(("special surface with d = 0", special_outcome(ctx, &by_d0)));
        controls.push(("r removal without the low-degree equations", {
            let gm = surface::collect_gm(&run.equations, &run.free_r).map_err(s)?;
            let g: Vec<Polynomial> = gm.iter().take(1).map(|e| e.g.clone()).collect();
            let v = surface::membership_check_all(&g, &[], &run.survivor_vars(), &MembershipConfig::new(ctx.seed, 1));
            match v.first() {
                Some(Membership::Verified) => Ok(None),
                other => Err(format!("{other:?}")),
            }
        }));
        let passed: Vec<&str> = controls.iter().filter(|(_, o)| o.is_ok()).map(|(n, _)| *n).collect();
        if !passed.is_empty() {
            return Err(format!("controls not detected: {}", passed.join("; ")));
        }
        Ok(Some(format!("{} perturbations all rejected", controls.len())))
    })
}
