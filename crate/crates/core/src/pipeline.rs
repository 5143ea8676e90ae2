//! End-to-end run for one case: ansatz, rank-condition system, staged
//! elimination, back-substitution and surface equations.

use std::time::Instant;

use rustc_hash::FxHashMap;

use crate::alpha::{build_ansatz, AlphaCase, AlphaError, SymPolyMatrix};
use crate::elim::{self, DriverConfig, DriverOutcome};
use crate::rc::{self, LAnsatz, RcError, RcSetup};
use crate::ring::{Polynomial, RingError};
use crate::surface::{self, SurfaceEquations, SurfaceError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
    #[error(transparent)]
    Rc(#[from] RcError),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    pub case: AlphaCase,
    pub max_rounds: usize,
}

impl PipelineConfig {
    pub fn new(case: AlphaCase) -> Self {
        PipelineConfig { case, max_rounds: 10 }
    }
}

/// Names of the stage-B variables `g1..g10, b1..b12`.
pub fn stage_b_names() -> Vec<String> {
    let mut v: Vec<String> = (1..=10).map(|k| format!("g{k}")).collect();
    v.extend((1..=12).map(|k| format!("b{k}")));
    v
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub setup: RcSetup,
    pub outcome: DriverOutcome,
    pub resolved: FxHashMap<usize, Polynomial>,
    /// `α` and `l` with every dependency substituted.
    pub alpha: SymPolyMatrix,
    pub l: LAnsatz,
    /// Ansatz parameters (`d`, `g`, `b`) never eliminated, in table order.
    pub survivors: Vec<String>,
    /// `r` parameters never eliminated.
    pub free_r: Vec<usize>,
    /// Equations before `r` removal.
    pub equations: SurfaceEquations,
    /// Equations with every free `r` set to zero.
    pub final_equations: SurfaceEquations,
    pub setup_seconds: f64,
    pub seconds: f64,
}

impl PipelineRun {
    pub fn solved(&self) -> bool {
        self.outcome.solved
    }

    pub fn survivor_vars(&self) -> Vec<usize> {
        let t = self.alpha.table();
        self.survivors
            .iter()
            .map(|n| t.var(n).expect("survivor in table"))
            .collect()
    }
}

/// Runs the whole pipeline. An unsolved system is not an error: `solved()`
/// is false and the residual equations are in `outcome.state.f`.
pub fn run(config: &PipelineConfig) -> Result<PipelineRun, PipelineError> {
    let t0 = Instant::now();
    let ansatz = build_ansatz(config.case)?;
    let setup = rc::setup(&ansatz)?;
    let setup_seconds = t0.elapsed().as_secs_f64();
    let table = setup.l.table().clone();

    let b_vars = elim::vars_named(&table, &stage_b_names());
    // for α2 the conic itself requires d != 0
    let nonzero = if config.case.j == 2 {
        vec![table.var("d")?]
    } else {
        Vec::new()
    };
    let driver_config = DriverConfig {
        max_rounds: config.max_rounds,
        nonzero,
        ..DriverConfig::default()
    };
    let outcome = elim::driver(setup.system.f.clone(), setup.l.r_vars(), &b_vars, &driver_config);

    let resolved = elim::resolve(&outcome.state.deps);
    let alpha = setup.alpha.matrix.map(|p| elim::back_substitute(p, &resolved));
    let l = setup.l.map(|p| elim::back_substitute(p, &resolved));
    let gone = outcome.state.eliminated();
    let survivors: Vec<String> = setup
        .alpha
        .params
        .iter()
        .filter(|n| !gone.contains(&table.var(n).expect("parameter in table")))
        .cloned()
        .collect();
    let free_r: Vec<usize> = setup.l.r_vars().iter().copied().filter(|v| !gone.contains(v)).collect();

    let equations = surface::generate_equations(&alpha, &l)?;
    let final_equations = surface::remove_r(&equations, &free_r)?;
    Ok(PipelineRun {
        setup,
        outcome,
        resolved,
        alpha,
        l,
        survivors,
        free_r,
        equations,
        final_equations,
        setup_seconds,
        seconds: t0.elapsed().as_secs_f64(),
    })
}
