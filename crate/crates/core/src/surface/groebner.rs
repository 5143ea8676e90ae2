//! Buchberger's algorithm over ℚ in the geometric variables, with the product
//! and chain criteria, optional degree truncation and resource caps.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Zero};
use rustc_hash::FxHashSet;

use crate::ring::{Coeff, Monomial, Polynomial, VariableTable};

type Exps = Vec<u16>;

/// Polynomial ring `ℚ[v_0, ..., v_{n-1}]` with weighted grevlex order.
#[derive(Clone, Debug)]
pub struct GbRing {
    weights: Vec<u32>,
    /// Table index of each ring variable.
    vars: Vec<usize>,
    table: Arc<VariableTable>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GbError {
    #[error("variable {0} is not a ring variable")]
    ForeignVariable(String),
    #[error("resource cap reached: {0}")]
    Cap(String),
}

/// Terms in descending order, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPoly {
    terms: Vec<(Exps, Coeff)>,
}

impl GPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &(Exps, Coeff) {
        &self.terms[0]
    }
}

impl GbRing {
    /// The ring on the geometric variables of `table`.
    pub fn geometric(table: &Arc<VariableTable>) -> GbRing {
        let vars: Vec<usize> = (0..table.geometric_count()).collect();
        GbRing {
            weights: vars.iter().map(|&v| table.entry(v).weight).collect(),
            vars,
            table: table.clone(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    fn degree(&self, e: &[u16]) -> u32 {
        e.iter().zip(&self.weights).map(|(&a, &w)| a as u32 * w).sum()
    }

    /// Weighted degree first, then reverse lexicographic.
    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        self.degree(a).cmp(&self.degree(b)).then_with(|| {
            for k in (0..a.len()).rev() {
                if a[k] != b[k] {
                    return b[k].cmp(&a[k]);
                }
            }
            Ordering::Equal
        })
    }

    pub fn from_polynomial(&self, p: &Polynomial) -> Result<GPoly, GbError> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut e = vec![0u16; self.nvars()];
            for (v, k) in m.iter() {
                let pos = self
                    .vars
                    .iter()
                    .position(|&w| w == v)
                    .ok_or_else(|| GbError::ForeignVariable(self.table.name(v).to_string()))?;
                e[pos] = k as u16;
            }
            terms.push((e, c.clone()));
        }
        terms.sort_by(|a, b| self.cmp(&b.0, &a.0));
        Ok(GPoly { terms })
    }

    pub fn to_polynomial(&self, p: &GPoly) -> Polynomial {
        let terms = p.terms.iter().map(|(e, c)| {
            let m = Monomial::from_pairs(
                e.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| (self.vars[i], k as u32)),
            );
            (m, c.clone())
        });
        Polynomial::from_terms(&self.table, terms)
    }

    /// Weighted degree of the leading term; the input is assumed homogeneous.
    pub fn lead_degree(&self, p: &GPoly) -> Option<u32> {
        p.terms.first().map(|(e, _)| self.degree(e))
    }

    pub fn is_homogeneous(&self, p: &GPoly) -> bool {
        let mut it = p.terms.iter().map(|(e, _)| self.degree(e));
        match it.next() {
            None => true,
            Some(d) => it.all(|k| k == d),
        }
    }

    /// `p - c * x^m * g`.
    fn sub_mul(&self, p: &GPoly, c: &Coeff, m: &[u16], g: &GPoly) -> GPoly {
        let mut out = Vec::with_capacity(p.terms.len() + g.terms.len());
        let shifted = g.terms.iter().map(|(e, gc)| (mul_exps(e, m), -(c * gc)));
        let mut a = p.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (Some(x), Some(y)) => self.cmp(&x.0, &y.0),
            };
            match ord {
                Ordering::Greater => out.push(a.next().unwrap()),
                Ordering::Less => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let (e, c1) = a.next().unwrap();
                    let (_, c2) = b.next().unwrap();
                    let s = c1 + c2;
                    if !s.is_zero() {
                        out.push((e, s));
                    }
                }
            }
        }
        GPoly { terms: out }
    }

    fn monic(&self, p: GPoly) -> GPoly {
        if p.is_zero() || p.lead().1.is_one() {
            return p;
        }
        let inv = p.lead().1.recip();
        GPoly {
            terms: p.terms.into_iter().map(|(e, c)| (e, c * &inv)).collect(),
        }
    }

    /// Full normal form of `p` modulo `basis`.
    pub fn reduce(&self, p: &GPoly, basis: &[GPoly]) -> GPoly {
        let mut p = p.clone();
        let mut rem: Vec<(Exps, Coeff)> = Vec::new();
        while let Some((m, c)) = p.terms.first().cloned() {
            let hit = basis.iter().find(|g| divides(&g.lead().0, &m));
            match hit {
                Some(g) => {
                    let q = div_exps(&m, &g.lead().0);
                    let f = &c / &g.lead().1;
                    p = self.sub_mul(&p, &f, &q, g);
                }
                None => {
                    rem.push((m, c));
                    p.terms.remove(0);
                }
            }
        }
        GPoly { terms: rem }
    }

    fn s_poly(&self, f: &GPoly, g: &GPoly) -> GPoly {
        let l = lcm_exps(&f.lead().0, &g.lead().0);
        let mf = div_exps(&l, &f.lead().0);
        let mg = div_exps(&l, &g.lead().0);
        let zero = GPoly { terms: Vec::new() };
        let a = self.sub_mul(&zero, &(-f.lead().1.recip()), &mf, f);
        self.sub_mul(&a, &g.lead().1.recip(), &mg, g)
    }
}

fn mul_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn div_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn lcm_exps(a: &[u16], b: &[u16]) -> Exps {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn coprime(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

#[derive(Clone, Debug)]
pub struct GbLimits {
    pub max_pairs: usize,
    pub max_seconds: f64,
    /// Pairs whose lcm has larger weighted degree are never formed. Only
    /// meaningful for homogeneous generators.
    pub max_degree: Option<u32>,
}

impl Default for GbLimits {
    fn default() -> Self {
        GbLimits {
            max_pairs: 20_000,
            max_seconds: 60.0,
            max_degree: None,
        }
    }
}

/// A (possibly degree-truncated) Gröbner basis.
#[derive(Clone, Debug)]
pub struct Groebner {
    pub ring: GbRing,
    pub basis: Vec<GPoly>,
    pub max_degree: Option<u32>,
    pub pairs_processed: usize,
}

impl Groebner {
    pub fn reduce(&self, p: &GPoly) -> GPoly {
        self.ring.reduce(p, &self.basis)
    }

    /// Every S-polynomial within the degree bound reduces to zero.
    pub fn self_check(&self) -> bool {
        let n = self.basis.len();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                let (f, g) = (&self.basis[i], &self.basis[j]);
                let l = lcm_exps(&f.lead().0, &g.lead().0);
                if self.max_degree.is_some_and(|d| self.ring.degree(&l) > d) {
                    return true;
                }
                self.reduce(&self.ring.s_poly(f, g)).is_zero()
            })
        })
    }
}

pub fn buchberger(ring: &GbRing, generators: &[GPoly], limits: &GbLimits) -> Result<Groebner, GbError> {
    let start = Instant::now();
    let mut basis: Vec<GPoly> = Vec::new();
    // (lcm degree, i, j); BTreeSet gives lowest degree first, then index order
    let mut queue: BTreeSet<(u32, usize, usize)> = BTreeSet::new();
    let mut pending: FxHashSet<(usize, usize)> = FxHashSet::default();
    let mut processed = 0usize;

    let add = |p: GPoly, basis: &mut Vec<GPoly>, queue: &mut BTreeSet<_>, pending: &mut FxHashSet<_>| {
        let j = basis.len();
        for (i, g) in basis.iter().enumerate() {
            let l = lcm_exps(&g.lead().0, &p.lead().0);
            let d = ring.degree(&l);
            pending.insert((i, j));
            if limits.max_degree.is_none_or(|m| d <= m) {
                queue.insert((d, i, j));
            }
        }
        basis.push(p);
    };

    for g in generators {
        let r = ring.monic(ring.reduce(g, &basis));
        if !r.is_zero() {
            add(r, &mut basis, &mut queue, &mut pending);
        }
    }

    while let Some((_, i, j)) = queue.pop_first() {
        processed += 1;
        if processed > limits.max_pairs {
            return Err(GbError::Cap(format!("more than {} S-pairs", limits.max_pairs)));
        }
        if start.elapsed().as_secs_f64() > limits.max_seconds {
            return Err(GbError::Cap(format!("more than {} s", limits.max_seconds)));
        }
        pending.remove(&(i, j));
        let (li, lj) = (&basis[i].lead().0, &basis[j].lead().0);
        if coprime(li, lj) {
            continue;
        }
        let l = lcm_exps(li, lj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && divides(&basis[k].lead().0, &l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = ring.s_poly(&basis[i], &basis[j]);
        let r = ring.monic(ring.reduce(&s, &basis));
        if !r.is_zero() {
            add(r, &mut basis, &mut queue, &mut pending);
        }
    }
    Ok(Groebner {
        ring: ring.clone(),
        basis,
        max_degree: limits.max_degree,
        pairs_processed: processed,
    })
}
