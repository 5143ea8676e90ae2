//! Rank-condition ansatz `l_ij^k`, residuals `β_ij - Σ_k l_ij^k β_0k` and the
//! flattened coefficient system.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::alpha::{cofactor_degree, cofactor_sign, Alpha, AlphaError, SymPolyMatrix};
use crate::ring::{monomial_basis, Polynomial, RingError, SigmaSign, VarKind, VariableTable};

/// Geometric variables of the ring the `l_ij^k` live in.
pub const RC_VARS: [&str; 4] = ["x", "y1", "y2", "y3"];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RcError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
    #[error("cofactor ({0}, {1}) has mixed involution sign")]
    MixedCofactor(usize, usize),
    #[error("coefficient {0} of residual ({1}, {2}) involves a geometric variable")]
    GeometricCoefficient(String, usize, usize),
}

/// The unordered pairs `(i, j)`, `1 <= i <= j <= 5`, whose rank condition is imposed.
pub fn residual_pairs() -> Vec<(usize, usize)> {
    (1..6).flat_map(|i| (i..6).map(move |j| (i, j))).collect()
}

/// Forced weighted degree of `l_ij^k`, or `None` when it would be negative.
pub fn l_degree(i: usize, j: usize, k: usize) -> Option<u32> {
    cofactor_degree(i, j).checked_sub(cofactor_degree(0, k))
}

/// Sizes of the monomial bases of every `l_ij^k`, in generation order.
pub fn l_shape(table: &VariableTable) -> Result<Vec<((usize, usize, usize), usize)>, RingError> {
    let vars = RC_VARS.iter().map(|v| table.var(v)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::new();
    for (i, j) in residual_pairs() {
        for k in 0..6 {
            if let Some(deg) = l_degree(i, j, k) {
                let sign = cofactor_sign(i, j) * cofactor_sign(0, k);
                out.push(((i, j, k), monomial_basis(table, deg, sign, &vars).len()));
            }
        }
    }
    Ok(out)
}

/// Total number of `r` parameters of the generic ansatz.
pub fn r_count() -> usize {
    let t = VariableTable::builder()
        .with_geometric_vars()
        .build()
        .expect("static table");
    l_shape(&t).expect("geometric table").iter().map(|(_, n)| n).sum()
}

pub fn r_names(count: usize) -> Vec<String> {
    (1..=count).map(|m| format!("r{m}")).collect()
}

/// The generic `l_ij^k` with one fresh `r` per basis monomial.
#[derive(Clone, Debug)]
pub struct LAnsatz {
    table: Arc<VariableTable>,
    polys: BTreeMap<(usize, usize, usize), Polynomial>,
    r_vars: Vec<usize>,
}

impl LAnsatz {
    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn r_count(&self) -> usize {
        self.r_vars.len()
    }

    pub fn r_vars(&self) -> &[usize] {
        &self.r_vars
    }

    /// `l_ij^k` (symmetric in `i, j`); zero when not part of the ansatz.
    pub fn get(&self, i: usize, j: usize, k: usize) -> Polynomial {
        let key = (i.min(j), i.max(j), k);
        self.polys
            .get(&key)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(&self.table))
    }

    pub fn polys(&self) -> &BTreeMap<(usize, usize, usize), Polynomial> {
        &self.polys
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> LAnsatz {
        LAnsatz {
            table: self.table.clone(),
            polys: self.polys.iter().map(|(k, p)| (*k, f(p))).collect(),
            r_vars: self.r_vars.clone(),
        }
    }

    pub fn try_map<E>(&self, f: impl Fn(&Polynomial) -> Result<Polynomial, E>) -> Result<LAnsatz, E> {
        let mut polys = BTreeMap::new();
        for (k, p) in &self.polys {
            polys.insert(*k, f(p)?);
        }
        Ok(LAnsatz {
            table: self.table.clone(),
            polys,
            r_vars: self.r_vars.clone(),
        })
    }

    /// An ansatz with explicitly given polynomials (no `r` parameters).
    pub fn from_polys(table: &Arc<VariableTable>, polys: BTreeMap<(usize, usize, usize), Polynomial>) -> LAnsatz {
        LAnsatz {
            table: table.clone(),
            polys,
            r_vars: Vec::new(),
        }
    }
}

/// The table of `alpha` extended by `r1..rN`.
pub fn rc_table(alpha: &Alpha) -> Result<Arc<VariableTable>, RingError> {
    alpha.case.table_with(&r_names(r_count()))
}

/// Builds the generic ansatz over `table`, which must contain `r1..rN`.
pub fn build_l_ansatz(table: &Arc<VariableTable>) -> Result<LAnsatz, RcError> {
    let vars = RC_VARS.iter().map(|v| table.var(v)).collect::<Result<Vec<_>, _>>()?;
    let mut polys = BTreeMap::new();
    let mut r_vars = Vec::new();
    for (i, j) in residual_pairs() {
        for k in 0..6 {
            let Some(deg) = l_degree(i, j, k) else {
                continue;
            };
            let sign = cofactor_sign(i, j) * cofactor_sign(0, k);
            let mut terms = Vec::new();
            for m in monomial_basis(table, deg, sign, &vars) {
                let r = table.var(&format!("r{}", r_vars.len() + 1))?;
                r_vars.push(r);
                terms.push((m.mul(&crate::ring::Monomial::var(r)), crate::ring::coeff(1)));
            }
            polys.insert((i, j, k), Polynomial::from_terms(table, terms));
        }
    }
    Ok(LAnsatz {
        table: table.clone(),
        polys,
        r_vars,
    })
}

/// The cofactors `β_0k` (k = 0..5) and `β_ij` for the residual pairs.
#[derive(Clone, Debug)]
pub struct Cofactors {
    pub first_row: Vec<Polynomial>,
    pub pairs: BTreeMap<(usize, usize), Polynomial>,
}

pub fn cofactors(m: &SymPolyMatrix, check_signs: bool) -> Result<Cofactors, RcError> {
    let mut wanted: Vec<(usize, usize)> = (0..6).map(|k| (0, k)).collect();
    wanted.extend(residual_pairs());
    let computed: Vec<((usize, usize), Polynomial)> =
        wanted.par_iter().map(|&(i, j)| ((i, j), m.cofactor(i, j))).collect();
    let mut first_row = Vec::new();
    let mut pairs = BTreeMap::new();
    for ((i, j), p) in computed {
        if check_signs && p.sigma_sign() == SigmaSign::Mixed {
            return Err(RcError::MixedCofactor(i, j));
        }
        if i == 0 {
            first_row.push(p);
        } else {
            pairs.insert((i, j), p);
        }
    }
    Ok(Cofactors { first_row, pairs })
}

/// The 15 residuals `β_ij - Σ_k l_ij^k β_0k`, in [`residual_pairs`] order.
pub fn rc_residuals(alpha: &SymPolyMatrix, l: &LAnsatz) -> Result<Vec<((usize, usize), Polynomial)>, RcError> {
    let alpha = alpha.transfer(l.table())?;
    let cof = cofactors(&alpha, true)?;
    Ok(residuals_from(&cof, l))
}

pub fn residuals_from(cof: &Cofactors, l: &LAnsatz) -> Vec<((usize, usize), Polynomial)> {
    residual_pairs()
        .par_iter()
        .map(|&(i, j)| {
            let mut acc = cof.pairs[&(i, j)].clone();
            for k in 0..6 {
                let lk = l.get(i, j, k);
                if !lk.is_zero() {
                    acc = &acc - &(&lk * &cof.first_row[k]);
                }
            }
            ((i, j), acc)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RcSystem {
    pub residuals: Vec<((usize, usize), Polynomial)>,
    pub f: Vec<Polynomial>,
    /// Distinct non-geometric variables occurring in `f`.
    pub params: Vec<usize>,
}

impl RcSystem {
    pub fn param_count(&self) -> usize {
        self.params.len()
    }
}

/// Flattens residuals into their coefficients with respect to the geometric
/// variables: residual order, then descending monomial order. Exact repeats
/// are kept once, at their first occurrence.
pub fn extract_system(residuals: Vec<((usize, usize), Polynomial)>) -> Result<RcSystem, RcError> {
    let mut f = Vec::new();
    let mut distinct = rustc_hash::FxHashSet::default();
    let mut seen = std::collections::BTreeSet::new();
    for ((i, j), r) in &residuals {
        let table = r.table();
        for (m, c) in r.coefficients_by(|v| table.entry(v).kind == VarKind::Geometric) {
            if c.variables().iter().any(|&v| table.entry(v).kind == VarKind::Geometric) {
                return Err(RcError::GeometricCoefficient(m.format(table), *i, *j));
            }
            seen.extend(c.variables());
            if distinct.insert(c.clone()) {
                f.push(c);
            }
        }
    }
    Ok(RcSystem {
        residuals,
        f,
        params: seen.into_iter().collect(),
    })
}

/// Table, transferred matrix, ansatz and coefficient system for one case.
#[derive(Clone, Debug)]
pub struct RcSetup {
    pub alpha: Alpha,
    pub l: LAnsatz,
    pub system: RcSystem,
}

pub fn setup(alpha: &Alpha) -> Result<RcSetup, RcError> {
    let table = rc_table(alpha)?;
    let l = build_l_ansatz(&table)?;
    let matrix = alpha.matrix.transfer(&table)?;
    let residuals = rc_residuals(&matrix, &l)?;
    let system = extract_system(residuals)?;
    Ok(RcSetup {
        alpha: Alpha {
            case: alpha.case,
            matrix,
            params: alpha.params.clone(),
        },
        l,
        system,
    })
}
