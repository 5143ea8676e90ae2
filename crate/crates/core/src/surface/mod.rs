//! Surface equations `v_i v_j = Σ_k l_ij^k v_k` and `Σ_j α_ij v_j = 0` with
//! `v = (1, z1, z2, z3, z4, t)`, removal of the free `r` parameters, and
//! ideal membership at random rational specializations.

pub mod groebner;

use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::alpha::SymPolyMatrix;
use crate::rc::{residual_pairs, LAnsatz};
use crate::ring::{Coeff, Polynomial, RingError, Sign, WeightedDegree};
use groebner::{buchberger, GbError, GbLimits, GbRing};

/// Module generators, `v_0 = 1`.
pub const V_NAMES: [&str; 6] = ["1", "z1", "z2", "z3", "z4", "t"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    /// `v_i v_j - Σ_k l_ij^k v_k` (0-based).
    Product(usize, usize),
    /// `Σ_j α_ij v_j` (0-based row).
    Row(usize),
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Product(i, j) => write!(f, "v{}v{}", i + 1, j + 1),
            Origin::Row(i) => write!(f, "row{}", i + 1),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceEquation {
    pub origin: Origin,
    pub poly: Polynomial,
    pub degree: u32,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceEquations {
    pub eqs: Vec<SurfaceEquation>,
}

impl SurfaceEquations {
    pub fn len(&self) -> usize {
        self.eqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eqs.is_empty()
    }

    pub fn polys(&self) -> Vec<Polynomial> {
        self.eqs.iter().map(|e| e.poly.clone()).collect()
    }

    /// Equations of weighted degree at most `d`.
    pub fn up_to_degree(&self, d: u32) -> Vec<&SurfaceEquation> {
        self.eqs.iter().filter(|e| e.degree <= d).collect()
    }

    /// Non-geometric variables occurring anywhere, in table order.
    pub fn parameters(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .eqs
            .iter()
            .flat_map(|e| {
                e.poly
                    .variables()
                    .into_iter()
                    .filter(|&v| !e.poly.table().is_geometric(v))
            })
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> SurfaceEquations {
        SurfaceEquations {
            eqs: self
                .eqs
                .iter()
                .map(|e| SurfaceEquation {
                    poly: f(&e.poly),
                    ..e.clone()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("equation {origin} is not weighted- and σ-homogeneous: {text}")]
    NotHomogeneous { origin: Origin, text: String },
    #[error("equation {origin} of degree <= 5 involves {var}: {text}")]
    RInLowDegree { origin: Origin, var: String, text: String },
    #[error("{var} occurs nonlinearly in {origin}")]
    NonlinearR { origin: Origin, var: String },
}

fn v_polys(alpha: &SymPolyMatrix) -> Result<Vec<Polynomial>, RingError> {
    V_NAMES.iter().map(|n| Polynomial::parse(alpha.table(), n)).collect()
}

fn classify(origin: Origin, poly: Polynomial) -> Result<SurfaceEquation, SurfaceError> {
    let bad = || SurfaceError::NotHomogeneous {
        origin,
        text: poly.to_text(),
    };
    let degree = match poly.weighted_degree() {
        Ok(WeightedDegree::Homogeneous(d)) => d,
        _ => return Err(bad()),
    };
    let sign = poly.sigma_sign().pure().ok_or_else(bad)?;
    Ok(SurfaceEquation {
        origin,
        poly,
        degree,
        sign,
    })
}

/// The 15 product relations (pairs `1 <= i <= j <= 5`) followed by the 6 rows.
pub fn generate_equations(alpha: &SymPolyMatrix, l: &LAnsatz) -> Result<SurfaceEquations, SurfaceError> {
    let alpha = alpha.transfer(l.table())?;
    let v = v_polys(&alpha)?;
    let mut eqs = Vec::with_capacity(21);
    for (i, j) in residual_pairs() {
        let mut p = &v[i] * &v[j];
        for (k, vk) in v.iter().enumerate() {
            let lk = l.get(i, j, k);
            if !lk.is_zero() {
                p = &p - &(&lk * vk);
            }
        }
        eqs.push(classify(Origin::Product(i, j), p)?);
    }
    for i in 0..6 {
        let mut p = Polynomial::zero(alpha.table());
        for (j, vj) in v.iter().enumerate() {
            p = &p + &(alpha.get(i, j) * vj);
        }
        eqs.push(classify(Origin::Row(i), p)?);
    }
    Ok(SurfaceEquations { eqs })
}

/// Checks that equations of degree <= 5 are free of `r_vars`, then sets every
/// `r` to zero.
pub fn remove_r(eqs: &SurfaceEquations, r_vars: &[usize]) -> Result<SurfaceEquations, SurfaceError> {
    for e in eqs.up_to_degree(5) {
        if let Some(&r) = r_vars.iter().find(|&&r| e.poly.involves(r)) {
            return Err(SurfaceError::RInLowDegree {
                origin: e.origin,
                var: e.poly.table().name(r).to_string(),
                text: e.poly.to_text(),
            });
        }
    }
    let Some(first) = eqs.eqs.first() else {
        return Ok(eqs.clone());
    };
    let zero = Polynomial::zero(first.poly.table());
    let bind: FxHashMap<usize, Polynomial> = r_vars.iter().map(|&r| (r, zero.clone())).collect();
    Ok(eqs.map(|p| p.substitute_resolved(&bind)))
}

/// The coefficient `G_m` of one `r_m` in one equation of degree > 5.
#[derive(Clone, Debug, PartialEq)]
pub struct GmEntry {
    pub r: usize,
    pub equation: usize,
    pub g: Polynomial,
}

pub fn collect_gm(eqs: &SurfaceEquations, r_vars: &[usize]) -> Result<Vec<GmEntry>, SurfaceError> {
    let mut out = Vec::new();
    for (k, e) in eqs.eqs.iter().enumerate().filter(|(_, e)| e.degree > 5) {
        for &r in r_vars {
            if !e.poly.involves(r) {
                continue;
            }
            let nonlinear = || SurfaceError::NonlinearR {
                origin: e.origin,
                var: e.poly.table().name(r).to_string(),
            };
            let (g, _) = e.poly.linear_split(r).ok_or_else(nonlinear)?;
            if r_vars.iter().any(|&s| g.involves(s)) {
                return Err(nonlinear());
            }
            out.push(GmEntry { r, equation: k, g });
        }
    }
    Ok(out)
}

/// Outcome of one membership test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Verified,
    /// Nonzero normal form at `seed`, a proof of non-membership.
    Refuted {
        seed: u64,
        remainder: String,
    },
    Inconclusive {
        seed: u64,
        reason: String,
    },
}

/// A random nonzero rational with numerator and denominator in `[-50, 50] \ {0}`.
pub fn random_rational(rng: &mut impl Rng) -> Coeff {
    let mut draw = || loop {
        let k: i64 = rng.gen_range(-50..=50);
        if k != 0 {
            return k;
        }
    };
    let (n, d) = (draw(), draw());
    Coeff::new(BigInt::from(n), BigInt::from(d))
}

/// Random values for `params`, determined by `seed`.
pub fn random_point(
    table: &std::sync::Arc<crate::ring::VariableTable>,
    params: &[usize],
    seed: u64,
) -> FxHashMap<usize, Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    params
        .iter()
        .map(|&v| (v, Polynomial::constant(table, random_rational(&mut rng))))
        .collect()
}

#[derive(Clone, Debug)]
pub struct MembershipConfig {
    pub seeds: Vec<u64>,
    pub limits: GbLimits,
}

impl MembershipConfig {
    /// `k` consecutive seeds starting at `seed`, default caps.
    pub fn new(seed: u64, k: usize) -> Self {
        MembershipConfig {
            seeds: (0..k as u64).map(|i| seed.wrapping_add(i)).collect(),
            limits: GbLimits::default(),
        }
    }
}

/// Per-seed result for every target: `Ok(true)` zero remainder, `Ok(false)`
/// with the remainder text otherwise.
fn check_at_seed(
    targets: &[Polynomial],
    generators: &[Polynomial],
    params: &[usize],
    seed: u64,
    limits: &GbLimits,
) -> Result<Vec<Option<String>>, GbError> {
    let table = generators[0].table();
    let point = random_point(table, params, seed);
    let ring = GbRing::geometric(table);
    let gens = generators
        .iter()
        .map(|g| ring.from_polynomial(&g.substitute_resolved(&point)))
        .collect::<Result<Vec<_>, _>>()?;
    let specialized = targets
        .iter()
        .map(|g| ring.from_polynomial(&g.substitute_resolved(&point)))
        .collect::<Result<Vec<_>, _>>()?;
    let homogeneous = gens.iter().chain(&specialized).all(|g| ring.is_homogeneous(g));
    let mut limits = limits.clone();
    if homogeneous && limits.max_degree.is_none() {
        limits.max_degree = specialized.iter().filter_map(|g| ring.lead_degree(g)).max();
    }
    let gb = buchberger(&ring, &gens, &limits)?;
    if !gb.self_check() {
        return Err(GbError::Cap("S-pair self-check failed".into()));
    }
    Ok(specialized
        .iter()
        .map(|g| {
            let r = gb.reduce(g);
            (!r.is_zero()).then(|| ring.to_polynomial(&r).to_text())
        })
        .collect())
}

/// Tests each target for membership in the ideal of `generators` after
/// specializing `params` at every seed. Refutation at any seed wins; a cap
/// at any seed without refutation gives `Inconclusive`.
pub fn membership_check_all(
    targets: &[Polynomial],
    generators: &[Polynomial],
    params: &[usize],
    config: &MembershipConfig,
) -> Vec<Membership> {
    if generators.is_empty() {
        return targets
            .iter()
            .map(|g| {
                if g.is_zero() {
                    Membership::Verified
                } else {
                    Membership::Refuted {
                        seed: 0,
                        remainder: g.to_text(),
                    }
                }
            })
            .collect();
    }
    let per_seed: Vec<(u64, Result<Vec<Option<String>>, GbError>)> = config
        .seeds
        .par_iter()
        .map(|&s| (s, check_at_seed(targets, generators, params, s, &config.limits)))
        .collect();
    (0..targets.len())
        .map(|k| {
            let mut verdict = Membership::Verified;
            for (seed, res) in &per_seed {
                match res {
                    Ok(rems) => {
                        if let Some(rem) = &rems[k] {
                            return Membership::Refuted {
                                seed: *seed,
                                remainder: rem.clone(),
                            };
                        }
                    }
                    Err(e) => {
                        if verdict == Membership::Verified {
                            verdict = Membership::Inconclusive {
                                seed: *seed,
                                reason: e.to_string(),
                            };
                        }
                    }
                }
            }
            verdict
        })
        .collect()
}

pub fn membership_check(g: &Polynomial, generators: &[Polynomial], params: &[usize], seed: u64) -> Membership {
    let config = MembershipConfig::new(seed, 3);
    membership_check_all(std::slice::from_ref(g), generators, params, &config).remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::PolyMatrix;
    use crate::ring::VariableTable;
    use std::collections::BTreeMap;

    fn table() -> std::sync::Arc<VariableTable> {
        VariableTable::builder()
            .with_geometric_vars()
            .parameters(["a", "r1"])
            .build()
            .unwrap()
    }

    #[test]
    fn degenerate_input() {
        let t = table();
        let diag: Vec<Polynomial> = ["x^8", "y1*x", "y2*x", "x*y3", "y2*x", "1"]
            .iter()
            .map(|s| Polynomial::parse(&t, s).unwrap())
            .collect();
        let m = SymPolyMatrix::new(PolyMatrix::diagonal(&diag)).unwrap();
        let l = LAnsatz::from_polys(&t, BTreeMap::new());
        let eqs = generate_equations(&m, &l).unwrap();
        assert_eq!(eqs.len(), 21);
        assert_eq!(eqs.eqs[0].origin, Origin::Product(1, 1));
        assert_eq!(eqs.eqs[0].poly.to_text(), "z1^2");
        assert_eq!(eqs.eqs[20].poly.to_text(), "t");
        assert_eq!(remove_r(&eqs, &[]).unwrap(), eqs);
        assert!(collect_gm(&eqs, &[]).unwrap().is_empty());
    }

    #[test]
    fn membership_basics() {
        let t = table();
        let p = |s: &str| Polynomial::parse(&t, s).unwrap();
        let gens = [p("y1"), p("y2")];
        assert_eq!(membership_check(&gens[0], &gens, &[], 0), Membership::Verified);
        assert!(matches!(
            membership_check(&p("1"), &gens, &[], 0),
            Membership::Refuted { .. }
        ));
        // parameters are specialized before the basis is computed
        let a = t.var("a").unwrap();
        let gens = [p("y1 - a*y3"), p("y2^2 - y1*y3")];
        assert_eq!(
            membership_check(&p("y2^2 - a*y3^2"), &gens, &[a], 5),
            Membership::Verified
        );
        assert!(matches!(
            membership_check(&p("y2^2 + a*y3^2"), &gens, &[a], 5),
            Membership::Refuted { .. }
        ));
    }

    #[test]
    fn random_rationals_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let q = random_rational(&mut rng);
            assert!(!num_traits::Zero::is_zero(&q));
            assert!(q.numer().magnitude() <= &50u32.into() && q.denom().magnitude() <= &50u32.into());
        }
    }
}
