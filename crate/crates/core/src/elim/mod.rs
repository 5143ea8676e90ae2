//! Staged linear elimination: the `LinElim` primitive, the two-stage driver,
//! dependency bookkeeping and back-substitution.

use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::ring::{Polynomial, VariableTable};

/// One elimination `var := expr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dependency {
    pub var: usize,
    pub expr: Polynomial,
}

impl Dependency {
    pub fn to_line(&self) -> String {
        format!("{} := {}", self.expr.table().name(self.var), self.expr.to_text())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    /// Elimination of the `r` parameters.
    A,
    /// Elimination among `g`/`b` parameters using `r`-free equations.
    B,
}

#[derive(Clone, Debug)]
pub struct RoundLog {
    pub stage: Stage,
    pub n: usize,
    pub eliminated: usize,
    pub f_len: usize,
    pub seconds: f64,
    pub peak_memory_kb: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct EliminationState {
    pub f: Vec<Polynomial>,
    pub deps: Vec<Dependency>,
    pub round_log: Vec<RoundLog>,
    nonzero: Vec<usize>,
}

impl EliminationState {
    pub fn new(f: Vec<Polynomial>) -> Self {
        Self::with_nonzero(f, &[])
    }

    /// Like [`EliminationState::new`], with `nonzero` parameters whose powers
    /// are divided out of every equation.
    pub fn with_nonzero(f: Vec<Polynomial>, nonzero: &[usize]) -> Self {
        let mut s = EliminationState {
            f: Vec::new(),
            deps: Vec::new(),
            round_log: Vec::new(),
            nonzero: nonzero.to_vec(),
        };
        let flags = vec![true; f.len()];
        let (f, _) = normalize(f, flags, nonzero);
        s.f = f;
        s
    }

    pub fn eliminated(&self) -> FxHashSet<usize> {
        self.deps.iter().map(|d| d.var).collect()
    }
}

/// If `p = c*r + h` with `c` a nonzero rational and `h` free of `r`, returns `(c, h)`.
pub fn isolate(p: &Polynomial, r: usize) -> Option<(crate::ring::Coeff, Polynomial)> {
    let mut found = None;
    for (m, c) in p.terms() {
        if m.exponent(r) > 0 {
            if found.is_some() || m.len() != 1 || m.exponent(r) != 1 {
                return None;
            }
            found = Some(c.clone());
        }
    }
    let c = found?;
    let h = p - &Polynomial::monomial(p.table(), crate::ring::Monomial::var(r), c.clone());
    Some((c, h))
}

/// Finds the variable `p` can be solved for: the first `r` in `var` order
/// such that `p = c*r + h` and `h` involves at most `n` variables of `var`.
fn eliminable(p: &Polynomial, position: &FxHashMap<usize, usize>, n: usize) -> Option<(usize, Polynomial)> {
    let mut present: Vec<(usize, usize)> = p
        .variables()
        .into_iter()
        .filter_map(|v| position.get(&v).map(|&k| (k, v)))
        .collect();
    if present.is_empty() || present.len() - 1 > n {
        return None;
    }
    present.sort_unstable();
    for (_, r) in present {
        if let Some((c, h)) = isolate(p, r) {
            let expr = h.scale(&(-c.recip()));
            return Some((r, expr));
        }
    }
    None
}

/// Drops zeros and repeats up to a rational factor; among repeats the first
/// position is kept with the shorter canonical text. `in_g` flags are merged.
/// Common powers of the `nonzero` variables are divided out first.
fn normalize(f: Vec<Polynomial>, in_g: Vec<bool>, nonzero: &[usize]) -> (Vec<Polynomial>, Vec<bool>) {
    let mut out: Vec<Polynomial> = Vec::with_capacity(f.len());
    let mut flags: Vec<bool> = Vec::with_capacity(f.len());
    let mut index: FxHashMap<Polynomial, usize> = FxHashMap::default();
    for (p, g) in f.into_iter().zip(in_g) {
        if p.is_zero() {
            continue;
        }
        let p = strip_content(p, nonzero);
        let key = p.monic();
        match index.get(&key) {
            Some(&k) => {
                flags[k] |= g;
                if text_key(&p) < text_key(&out[k]) {
                    out[k] = p;
                }
            }
            None => {
                index.insert(key, out.len());
                out.push(p);
                flags.push(g);
            }
        }
    }
    (out, flags)
}

fn strip_content(p: Polynomial, nonzero: &[usize]) -> Polynomial {
    let pairs: Vec<(usize, u32)> = nonzero
        .iter()
        .map(|&v| (v, p.terms().iter().map(|(m, _)| m.exponent(v)).min().unwrap_or(0)))
        .filter(|&(_, e)| e > 0)
        .collect();
    if pairs.is_empty() {
        return p;
    }
    let content = crate::ring::Monomial::from_pairs(pairs);
    let terms: Vec<_> = p
        .terms()
        .iter()
        .map(|(m, c)| (m.div(&content).expect("content divides"), c.clone()))
        .collect();
    Polynomial::from_terms(p.table(), terms)
}

fn text_key(p: &Polynomial) -> (usize, String) {
    let t = p.to_text();
    (t.len(), t)
}

fn substitute_one(p: &Polynomial, r: usize, expr: &Polynomial) -> Polynomial {
    if !p.involves(r) {
        return p.clone();
    }
    let bind: FxHashMap<usize, Polynomial> = [(r, expr.clone())].into_iter().collect();
    p.substitute_resolved(&bind)
}

/// One `LinElim` call. `in_g` selects the subsequence `g` of `state.f` that
/// is scanned; every elimination is applied to all of `f`. After each hit the
/// scan restarts from the beginning; returns the number of eliminations.
pub fn lin_elim(state: &mut EliminationState, in_g: impl Fn(&Polynomial) -> bool, var: &[usize], n: usize) -> usize {
    let mut position: FxHashMap<usize, usize> = var.iter().enumerate().map(|(k, &v)| (v, k)).collect();
    let mut flags: Vec<bool> = state.f.iter().map(&in_g).collect();
    let mut count = 0;
    'scan: loop {
        for k in 0..state.f.len() {
            if !flags[k] {
                continue;
            }
            if let Some((r, expr)) = eliminable(&state.f[k], &position, n) {
                let f = std::mem::take(&mut state.f);
                let f: Vec<Polynomial> = f.par_iter().map(|p| substitute_one(p, r, &expr)).collect();
                let (f, fl) = normalize(f, flags, &state.nonzero);
                state.f = f;
                flags = fl;
                position.remove(&r);
                state.deps.push(Dependency { var: r, expr });
                count += 1;
                continue 'scan;
            }
        }
        return count;
    }
}

#[derive(Clone, Debug)]
pub struct DriverConfig {
    /// Largest `n` used by stage A.
    pub max_rounds: usize,
    /// Variable budget of stage B.
    pub stage_b_budget: usize,
    /// Parameters assumed nonzero; their common powers are divided out of equations.
    pub nonzero: Vec<usize>,
}

impl Default for DriverConfig {
    fn default() -> Self {
        DriverConfig {
            max_rounds: 10,
            stage_b_budget: 22,
            nonzero: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DriverOutcome {
    pub state: EliminationState,
    pub solved: bool,
}

/// Alternates stage A (`r` variables, budget `n = 1, 2, ...`) and stage B
/// (`stage_b_vars` on the `r`-free equations, fixed budget) until `f` is
/// empty or `n` passes `max_rounds`.
pub fn driver(f: Vec<Polynomial>, r_vars: &[usize], stage_b_vars: &[usize], config: &DriverConfig) -> DriverOutcome {
    let mut state = EliminationState::with_nonzero(f, &config.nonzero);
    let r_set: FxHashSet<usize> = r_vars.iter().copied().collect();
    let mut n = 1;
    while !state.f.is_empty() && n <= config.max_rounds {
        let t = Instant::now();
        let live: Vec<usize> = live_vars(&state, r_vars);
        let e = lin_elim(&mut state, |_| true, &live, n);
        log_round(&mut state, Stage::A, n, e, t);

        let t = Instant::now();
        let live: Vec<usize> = live_vars(&state, stage_b_vars);
        let e = lin_elim(
            &mut state,
            |p| p.variables().iter().all(|v| !r_set.contains(v)),
            &live,
            config.stage_b_budget,
        );
        log_round(&mut state, Stage::B, n, e, t);
        n += 1;
    }
    let solved = state.f.is_empty();
    DriverOutcome { state, solved }
}

fn live_vars(state: &EliminationState, vars: &[usize]) -> Vec<usize> {
    let gone = state.eliminated();
    vars.iter().copied().filter(|v| !gone.contains(v)).collect()
}

fn log_round(state: &mut EliminationState, stage: Stage, n: usize, eliminated: usize, t: Instant) {
    state.round_log.push(RoundLog {
        stage,
        n,
        eliminated,
        f_len: state.f.len(),
        seconds: t.elapsed().as_secs_f64(),
        peak_memory_kb: crate::resources::peak_memory_kb(),
    });
}

/// Resolves every dependency into the never-eliminated variables.
pub fn resolve(deps: &[Dependency]) -> FxHashMap<usize, Polynomial> {
    let mut resolved: FxHashMap<usize, Polynomial> = FxHashMap::default();
    for d in deps.iter().rev() {
        let e = d.expr.substitute_resolved(&resolved);
        resolved.insert(d.var, e);
    }
    resolved
}

/// Applies the dependency chain to one polynomial.
pub fn back_substitute(p: &Polynomial, resolved: &FxHashMap<usize, Polynomial>) -> Polynomial {
    p.substitute_resolved(resolved)
}

/// Indices (into `f`) of polynomials that do not vanish after back-substitution.
pub fn soundness_failures(f: &[Polynomial], resolved: &FxHashMap<usize, Polynomial>) -> Vec<usize> {
    f.par_iter()
        .enumerate()
        .filter(|(_, p)| !p.substitute_resolved(resolved).is_zero())
        .map(|(k, _)| k)
        .collect()
}

/// Variables named in `names`, in that order.
pub fn vars_named(table: &Arc<VariableTable>, names: &[String]) -> Vec<usize> {
    names.iter().filter_map(|n| table.index_of(n)).collect()
}
