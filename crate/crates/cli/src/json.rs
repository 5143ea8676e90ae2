//! JSON forms of polynomials, matrices, equations and run statistics.

use serde_json::{json, Map, Value};

use canring::alpha::PolyMatrix;
use canring::pipeline::PipelineRun;
use canring::ring::{format_coeff, Polynomial, Sign};
use canring::surface::SurfaceEquations;

pub fn polynomial(p: &Polynomial) -> Value {
    let t = p.table();
    let terms: Vec<Value> = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let exps: Map<String, Value> = m.iter().map(|(v, e)| (t.name(v).to_string(), json!(e))).collect();
            json!({ "coeff": format_coeff(c), "exps": exps })
        })
        .collect();
    json!({ "text": p.to_text(), "terms": terms })
}

pub fn matrix(m: &PolyMatrix) -> Value {
    Value::Array(
        (0..m.size())
            .map(|i| Value::Array(m.row(i).iter().map(polynomial).collect()))
            .collect(),
    )
}

fn sign(s: Sign) -> &'static str {
    if s == Sign::Plus {
        "+"
    } else {
        "-"
    }
}

pub fn equations(eqs: &SurfaceEquations) -> Value {
    Value::Array(
        eqs.eqs
            .iter()
            .map(|e| {
                json!({
                    "origin": e.origin.to_string(),
                    "degree": e.degree,
                    "sign": sign(e.sign),
                    "poly": polynomial(&e.poly),
                })
            })
            .collect(),
    )
}

fn case(run: &PipelineRun) -> Value {
    let c = run.setup.alpha.case;
    json!({ "j": c.j, "c": c.c })
}

pub fn alpha_file(run: &PipelineRun) -> Value {
    json!({
        "case": case(run),
        "parameters": run.survivors,
        "matrix": matrix(run.alpha.matrix()),
    })
}

pub fn equations_file(run: &PipelineRun) -> Value {
    let t = run.alpha.table();
    let free_r: Vec<&str> = run.free_r.iter().map(|&v| t.name(v)).collect();
    json!({
        "case": case(run),
        "parameters": run.survivors,
        "free_r": free_r,
        "equations": equations(&run.final_equations),
        "equations_with_r": equations(&run.equations),
    })
}

pub fn stats_file(run: &PipelineRun, wall_seconds: f64, peak_memory_kb: Option<u64>) -> Value {
    let rounds: Vec<Value> = run
        .outcome
        .state
        .round_log
        .iter()
        .map(|r| {
            json!({
                "stage": format!("{:?}", r.stage),
                "n": r.n,
                "eliminated": r.eliminated,
                "f_len": r.f_len,
                "seconds": r.seconds,
                "peak_memory_kb": r.peak_memory_kb,
            })
        })
        .collect();
    let r_count = run.setup.l.r_count();
    json!({
        "case": case(run),
        "f_initial": run.setup.system.f.len(),
        "parameters": run.setup.system.param_count(),
        "r_parameters": r_count,
        "ansatz_parameters": run.setup.alpha.params.len(),
        "solved": run.solved(),
        "f_remaining": run.outcome.state.f.len(),
        "dependencies": run.outcome.state.deps.len(),
        "rounds": rounds,
        "survivors": run.survivors,
        "free_r": run.free_r.len(),
        "setup_seconds": run.setup_seconds,
        "wall_seconds": wall_seconds,
        "peak_memory_kb": peak_memory_kb,
    })
}
