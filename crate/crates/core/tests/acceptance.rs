//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use canring::elim::{self, EliminationState};
use canring::resources::peak_memory_kb;
use canring::ring::{Polynomial, VariableTable};
use canring::verify::{self, Context, Status};

type Verdict = Result<String, String>;

fn checks(ctx: &Context, names: &[&str]) -> Verdict {
    let mut notes = Vec::new();
    for n in names {
        let r = verify::run_named(n, ctx).expect("known check");
        match r.status {
            Status::Pass => notes.push(n.to_string()),
            Status::Skipped => notes.push(format!("{n} (skipped)")),
            Status::Fail => return Err(format!("{n}: {}", r.witness.unwrap_or_default())),
        }
    }
    Ok(notes.join(", "))
}

fn criterion1(ctx: &Context) -> Verdict {
    let run = ctx.run(1, 1)?;
    let f = run.setup.system.f.len();
    let params = run.setup.system.param_count();
    let r = run.setup.l.r_count();
    let abcd = run.setup.alpha.params.len();
    let msg = format!("{f} coefficients over {params} parameters ({r} r + {abcd})");
    if (f, params, r, abcd) == (876, 394, 371, 23) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion2(ctx: &Context) -> Verdict {
    let run = ctx.run(1, 1)?;
    if !run.solved() {
        return Err(format!("{} equations left", run.outcome.state.f.len()));
    }
    let got: BTreeSet<&str> = run.survivors.iter().map(String::as_str).collect();
    let want: BTreeSet<&str> = verify::SURVIVORS.into_iter().collect();
    let msg = format!("survivors {{{}}}", run.survivors.join(", "));
    if got == want {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion3(ctx: &Context) -> Verdict {
    let run = ctx.run(1, 1)?;
    let f = &run.setup.system.f;
    let bad = elim::soundness_failures(f, &run.resolved);
    if !bad.is_empty() {
        return Err(format!("{} of {} nonzero, first index {}", bad.len(), f.len(), bad[0]));
    }
    let gone = run.outcome.state.eliminated();
    if run
        .resolved
        .values()
        .any(|e| e.variables().iter().any(|v| gone.contains(v)))
    {
        return Err("a resolved expression mentions an eliminated variable".into());
    }
    Ok(format!(
        "{} coefficients vanish after {} dependencies",
        f.len(),
        run.outcome.state.deps.len()
    ))
}

/// Dense row reduction over ℚ. Returns `None` when inconsistent, otherwise
/// the rank.
fn gauss_rank(mut rows: Vec<Vec<BigRational>>, k: usize) -> Option<usize> {
    let mut rank = 0;
    for col in 0..k {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != rank && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in 0..=k {
                    let v = &rows[rank][c] * &factor;
                    rows[i][c] = &rows[i][c] - &v;
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[k].is_zero()) {
        None
    } else {
        Some(rank)
    }
}

fn affine_table(k: usize) -> Arc<VariableTable> {
    VariableTable::builder()
        .with_geometric_vars()
        .parameter("b")
        .parameters((1..=k).map(|i| format!("r{i}")))
        .build()
        .unwrap()
}

/// Random sparse integer system; row `i` is `Σ a_ij r_j + a_i0`. Most
/// systems are made consistent by choosing the constants from a random point.
fn random_system(rng: &mut ChaCha8Rng, k: usize, m: usize) -> Vec<Vec<BigRational>> {
    let entry = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.45) {
            BigRational::from_integer(rng.gen_range(-4i64..=4).into())
        } else {
            BigRational::zero()
        }
    };
    let point: Option<Vec<BigRational>> = rng.gen_bool(0.7).then(|| {
        (0..k)
            .map(|_| BigRational::from_integer(rng.gen_range(-5i64..=5).into()))
            .collect()
    });
    (0..m)
        .map(|_| {
            let mut row: Vec<BigRational> = (0..=k).map(|_| entry(rng)).collect();
            if let Some(pt) = &point {
                row[k] = -(0..k).map(|j| &row[j] * &pt[j]).sum::<BigRational>();
            }
            row
        })
        .collect()
}

fn to_polys(t: &Arc<VariableTable>, rows: &[Vec<BigRational>], scale: Option<&Polynomial>) -> Vec<Polynomial> {
    let k = rows[0].len() - 1;
    rows.iter()
        .map(|row| {
            let mut p = Polynomial::constant(t, row[k].clone());
            for j in 0..k {
                let mut term = Polynomial::named(t, &format!("r{}", j + 1)).unwrap().scale(&row[j]);
                if let Some(s) = scale {
                    term = &term * s;
                }
                p = &p + &term;
            }
            p
        })
        .collect()
}

fn criterion13(seed: u64) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut consistent, mut inconsistent, mut stalled) = (0, 0, 0);
    for case in 0..120 {
        let k = rng.gen_range(1..=10);
        let m = rng.gen_range(1..=12);
        let rows = random_system(&mut rng, k, m);
        let t = affine_table(k);
        let vars: Vec<usize> = (1..=k).map(|i| t.var(&format!("r{i}")).unwrap()).collect();
        let f = to_polys(&t, &rows, None);
        let mut state = EliminationState::new(f.clone());
        let mut total = 0;
        loop {
            let e = elim::lin_elim(&mut state, |_| true, &vars, k);
            total += e;
            if e == 0 {
                break;
            }
        }
        match gauss_rank(rows.clone(), k) {
            Some(rank) => {
                if !state.f.is_empty() || total != rank {
                    return Err(format!(
                        "case {case}: rank {rank}, {total} eliminated, {} left",
                        state.f.len()
                    ));
                }
                let resolved = elim::resolve(&state.deps);
                if !elim::soundness_failures(&f, &resolved).is_empty() {
                    return Err(format!("case {case}: solution does not satisfy the system"));
                }
                consistent += 1;
            }
            None => {
                if !state.f.iter().any(|p| p.is_constant()) {
                    return Err(format!("case {case}: inconsistent system not detected"));
                }
                inconsistent += 1;
            }
        }
        // the same system with every r-coefficient multiplied by a parameter
        let b = Polynomial::named(&t, "b").unwrap();
        let g = to_polys(&t, &rows, Some(&b));
        let mut state = EliminationState::new(g);
        let before = state.f.clone();
        if elim::lin_elim(&mut state, |_| true, &vars, k) != 0 || state.f.len() != before.len() {
            return Err(format!("case {case}: progress with non-constant pivots"));
        }
        stalled += 1;
    }
    Ok(format!(
        "{} systems: {consistent} solved like the oracle, {inconsistent} inconsistent detected, {stalled} parametric stalled",
        consistent + inconsistent
    ))
}

fn criterion11(ctx: &Context) -> Verdict {
    let run = ctx.run(1, 1)?;
    let low = run.equations.up_to_degree(5);
    if let Some(e) = low.iter().find(|e| run.free_r.iter().any(|&r| e.poly.involves(r))) {
        return Err(format!("{} has degree {} and involves r", e.origin, e.degree));
    }
    let r = verify::verify_r_removal(ctx);
    match r.status {
        Status::Pass => Ok(format!(
            "{} r-free low-degree equations; {}",
            low.len(),
            r.note.unwrap_or_default()
        )),
        _ => Err(r.witness.unwrap_or_default()),
    }
}

fn criterion12(ctx: &Context) -> Verdict {
    let t = Instant::now();
    let run = ctx.run(1, 1)?;
    let wall = t.elapsed().as_secs_f64().max(run.seconds);
    let peak = peak_memory_kb().ok_or("peak memory unavailable")?;
    let msg = format!("{wall:.2}s, peak {:.1} MiB", peak as f64 / 1024.0);
    if wall < 900.0 && peak < 2 * 1024 * 1024 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() -> ExitCode {
    let ctx = Context::new(0);
    // criterion 12 first so it times a fresh run
    let c12 = criterion12(&ctx);
    let results: Vec<(u8, &str, Verdict)> = vec![
        (1, "system size", criterion1(&ctx)),
        (2, "termination and survivors", criterion2(&ctx)),
        (3, "elimination soundness", criterion3(&ctx)),
        (
            4,
            "printed alpha satisfies the rank condition",
            checks(&ctx, &["printed_alpha_rc"]),
        ),
        (
            5,
            "golden match of the final alpha (soft)",
            checks(&ctx, &["printed_alpha_golden"]),
        ),
        (
            6,
            "identity suite with negative controls",
            checks(
                &ctx,
                &[
                    "lemma2",
                    "prop3_case1",
                    "prop3_case2",
                    "prop3_case3",
                    "prop3_case1_values",
                    "prop3_y24",
                    "prop3_case2_transform",
                    "prop3_case3_transform",
                    "thm4_case3",
                    "negative_controls",
                ],
            ),
        ),
        (7, "scaling identity", checks(&ctx, &["scaling"])),
        (
            8,
            "emptiness witnesses",
            checks(&ctx, &["alpha3_square", "alpha2_basepoint"]),
        ),
        (
            9,
            "central minors of the final alpha",
            checks(&ctx, &["final_alpha_minors"]),
        ),
        (10, "special surfaces", checks(&ctx, &["special_by", "special_bf"])),
        (11, "r removal", criterion11(&ctx)),
        (12, "performance envelope", c12),
        (13, "LinElim against a Gaussian oracle", criterion13(0)),
    ];
    let mut failed = 0;
    for (id, title, v) in &results {
        match v {
            Ok(note) => println!("criterion {id:>2} PASS  {title}: {note}"),
            Err(w) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {title}: {w}");
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
