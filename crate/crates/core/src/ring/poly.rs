//! Sparse polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rustc_hash::{FxHashMap, FxHashSet};

use super::monomial::Monomial;
use super::parse;
use super::table::{Sign, VariableTable};
use super::{Coeff, RingError};

/// Common weighted degree of all terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(u32),
    Inhomogeneous,
}

/// Behaviour under the involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SigmaSign {
    Plus,
    Minus,
    Mixed,
}

impl SigmaSign {
    pub fn pure(self) -> Option<Sign> {
        match self {
            SigmaSign::Plus => Some(Sign::Plus),
            SigmaSign::Minus => Some(Sign::Minus),
            SigmaSign::Mixed => None,
        }
    }
}

impl From<Sign> for SigmaSign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Plus => SigmaSign::Plus,
            Sign::Minus => SigmaSign::Minus,
        }
    }
}

/// Terms are kept sorted by descending monomial order with no zero
/// coefficients; algebraic rewrite rules of the table are always applied.
#[derive(Clone)]
pub struct Polynomial {
    table: Arc<VariableTable>,
    terms: Vec<(Monomial, Coeff)>,
}

pub(crate) fn same_table(a: &Arc<VariableTable>, b: &Arc<VariableTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

type TermMap = FxHashMap<Monomial, Coeff>;

fn accumulate(map: &mut TermMap, m: Monomial, c: Coeff) {
    use std::collections::hash_map::Entry;
    match map.entry(m) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

fn sorted_terms(table: &VariableTable, map: TermMap) -> Vec<(Monomial, Coeff)> {
    let mut terms: Vec<(Monomial, Coeff)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    terms.sort_unstable_by(|a, b| table.cmp(&b.0, &a.0));
    terms
}

impl Polynomial {
    pub fn zero(table: &Arc<VariableTable>) -> Self {
        Polynomial {
            table: table.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(table: &Arc<VariableTable>) -> Self {
        Self::constant(table, Coeff::one())
    }

    pub fn constant(table: &Arc<VariableTable>, c: Coeff) -> Self {
        Self::monomial(table, Monomial::one(), c)
    }

    pub fn int(table: &Arc<VariableTable>, n: i64) -> Self {
        Self::constant(table, Coeff::from_integer(BigInt::from(n)))
    }

    pub fn monomial(table: &Arc<VariableTable>, m: Monomial, c: Coeff) -> Self {
        let p = Polynomial {
            table: table.clone(),
            terms: if c.is_zero() { Vec::new() } else { vec![(m, c)] },
        };
        p.reduced()
    }

    pub fn var(table: &Arc<VariableTable>, v: usize) -> Self {
        Self::monomial(table, Monomial::var(v), Coeff::one())
    }

    pub fn named(table: &Arc<VariableTable>, name: &str) -> Result<Self, RingError> {
        Ok(Self::var(table, table.var(name)?))
    }

    /// Parses the text syntax (`+ - * / ^`, parentheses, integer literals).
    pub fn parse(table: &Arc<VariableTable>, text: &str) -> Result<Self, RingError> {
        let terms = parse::parse_terms(table, text)?;
        Ok(Self::from_terms(table, terms))
    }

    pub fn from_terms<I>(table: &Arc<VariableTable>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Coeff)>,
    {
        let mut map = TermMap::default();
        for (m, c) in terms {
            accumulate(&mut map, m, c);
        }
        Polynomial {
            table: table.clone(),
            terms: sorted_terms(table, map),
        }
        .reduced()
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        &self.table
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        match self.terms.as_slice() {
            [] => Some(Coeff::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn check_table(&self, other: &Polynomial) -> Result<(), RingError> {
        if same_table(&self.table, &other.table) {
            Ok(())
        } else {
            Err(RingError::TableMismatch)
        }
    }

    /// Applies the table's rewrite rules.
    fn reduced(self) -> Self {
        if !self.table.has_rules() {
            return self;
        }
        let needs = self.terms.iter().any(|(m, _)| self.needs_rewrite(m));
        if !needs {
            return self;
        }
        let table = self.table.clone();
        let mut map = TermMap::default();
        for (m, c) in self.terms {
            for (m2, c2) in rewrite_term(&table, m, c) {
                accumulate(&mut map, m2, c2);
            }
        }
        let terms = sorted_terms(&table, map);
        Polynomial { table, terms }
    }

    fn needs_rewrite(&self, m: &Monomial) -> bool {
        m.iter()
            .any(|(v, e)| self.table.rule_for(v).is_some_and(|r| e >= r.power))
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_table(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_table(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                self.table.cmp(&a[i].0, &b[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            table: self.table.clone(),
            terms: out,
        }
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_table(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.table);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        let mut map = TermMap::default();
        map.reserve(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                accumulate(&mut map, ma.mul(mb), ca * cb);
            }
        }
        Polynomial {
            table: self.table.clone(),
            terms: sorted_terms(&self.table, map),
        }
        .reduced()
    }

    /// Multiplication by a single term keeps the order, so no re-sort is needed.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(a, ca)| (a.mul(m), ca * c)).collect(),
        }
        .reduced()
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.table);
        }
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut result = Polynomial::one(&self.table);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Divides every coefficient by the leading one.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    pub fn weighted_degree(&self) -> Result<WeightedDegree, RingError> {
        let mut it = self.terms.iter().map(|(m, _)| m.weighted_degree(&self.table));
        let first = it.next().ok_or(RingError::ZeroPolynomial)?;
        if it.all(|d| d == first) {
            Ok(WeightedDegree::Homogeneous(first))
        } else {
            Ok(WeightedDegree::Inhomogeneous)
        }
    }

    /// The zero polynomial counts as invariant.
    pub fn sigma_sign(&self) -> SigmaSign {
        let mut it = self.terms.iter().map(|(m, _)| m.sign(&self.table));
        let Some(first) = it.next() else {
            return SigmaSign::Plus;
        };
        if it.all(|s| s == first) {
            first.into()
        } else {
            SigmaSign::Mixed
        }
    }

    pub fn variables(&self) -> Vec<usize> {
        let mut seen: FxHashSet<usize> = FxHashSet::default();
        for (m, _) in &self.terms {
            seen.extend(m.vars());
        }
        let mut v: Vec<usize> = seen.into_iter().collect();
        v.sort_unstable();
        v
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponent(v) > 0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Degree counting only the variables selected by `pred`.
    pub fn degree_in_set(&self, pred: impl Fn(usize) -> bool) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.iter().filter(|&(v, _)| pred(v)).map(|(_, e)| e).sum())
            .max()
            .unwrap_or(0)
    }

    /// Writes `self = coeff * v + rest` when `self` has degree at most one in `v`.
    pub fn linear_split(&self, v: usize) -> Option<(Polynomial, Polynomial)> {
        let mut lin = Vec::new();
        let mut rest = Vec::new();
        for (m, c) in &self.terms {
            match m.exponent(v) {
                0 => rest.push((m.clone(), c.clone())),
                1 => lin.push((m.without(v).0, c.clone())),
                _ => return None,
            }
        }
        lin.sort_unstable_by(|a, b| self.table.cmp(&b.0, &a.0));
        Some((
            Polynomial {
                table: self.table.clone(),
                terms: lin,
            },
            Polynomial {
                table: self.table.clone(),
                terms: rest,
            },
        ))
    }

    /// Simultaneous substitution. Bindings may refer to each other as long as
    /// the dependency graph is acyclic; images are resolved transitively first.
    pub fn substitute(&self, bindings: &FxHashMap<usize, Polynomial>) -> Result<Polynomial, RingError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let resolved = resolve_bindings(bindings)?;
        Ok(self.substitute_resolved(&resolved))
    }

    /// Substitution that trusts `bindings` to be free of bound variables.
    pub fn substitute_resolved(&self, bindings: &FxHashMap<usize, Polynomial>) -> Polynomial {
        if bindings.is_empty() || self.is_zero() {
            return self.clone();
        }
        if !self
            .terms
            .iter()
            .any(|(m, _)| m.vars().any(|v| bindings.contains_key(&v)))
        {
            return self.clone();
        }
        let mut powers: FxHashMap<(usize, u32), Polynomial> = FxHashMap::default();
        let mut map = TermMap::default();
        for (m, c) in &self.terms {
            let (bound, free) = m.split(|v| bindings.contains_key(&v));
            if bound.is_one() {
                accumulate(&mut map, free, c.clone());
                continue;
            }
            let mut acc = Polynomial::monomial(&self.table, free, c.clone());
            for (v, e) in bound.iter() {
                let p = powers.entry((v, e)).or_insert_with(|| bindings[&v].pow(e));
                acc = &acc * &*p;
                if acc.is_zero() {
                    break;
                }
            }
            for (m2, c2) in acc.terms {
                accumulate(&mut map, m2, c2);
            }
        }
        Polynomial {
            table: self.table.clone(),
            terms: sorted_terms(&self.table, map),
        }
        .reduced()
    }

    pub fn substitute_named(&self, bindings: &[(&str, &str)]) -> Result<Polynomial, RingError> {
        let mut map = FxHashMap::default();
        for (name, text) in bindings {
            map.insert(self.table.var(name)?, Polynomial::parse(&self.table, text)?);
        }
        self.substitute(&map)
    }

    /// Expansion `p = sum m_k * c_k` with `m_k` supported on `vars` and the
    /// coefficients free of them, in descending order of `m_k`.
    pub fn coefficients_wrt(&self, vars: &[usize]) -> Vec<(Monomial, Polynomial)> {
        let set: FxHashSet<usize> = vars.iter().copied().collect();
        self.coefficients_by(|v| set.contains(&v))
    }

    pub fn coefficients_by(&self, pred: impl Fn(usize) -> bool) -> Vec<(Monomial, Polynomial)> {
        let mut groups: FxHashMap<Monomial, Vec<(Monomial, Coeff)>> = FxHashMap::default();
        for (m, c) in &self.terms {
            let (inside, outside) = m.split(&pred);
            groups.entry(inside).or_default().push((outside, c.clone()));
        }
        let mut out: Vec<(Monomial, Polynomial)> = groups
            .into_iter()
            .map(|(k, mut terms)| {
                terms.sort_unstable_by(|a, b| self.table.cmp(&b.0, &a.0));
                (
                    k,
                    Polynomial {
                        table: self.table.clone(),
                        terms,
                    },
                )
            })
            .collect();
        out.sort_unstable_by(|a, b| self.table.cmp(&b.0, &a.0));
        out
    }

    /// The coefficient of `m` (a monomial in `vars`) as a polynomial in the other variables.
    pub fn coefficient_of(&self, m: &Monomial, vars: &[usize]) -> Polynomial {
        self.coefficients_wrt(vars)
            .into_iter()
            .find(|(k, _)| k == m)
            .map(|(_, c)| c)
            .unwrap_or_else(|| Polynomial::zero(&self.table))
    }

    /// Exact quotient `self / divisor` by leading-term division; fails on a
    /// nonzero remainder and re-verifies the product.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Polynomial, RingError> {
        self.check_table(divisor)?;
        let Some((lm, lc)) = divisor.leading().cloned() else {
            return Err(RingError::DivisionByZero);
        };
        let mut rem = self.clone();
        let mut quotient: Vec<(Monomial, Coeff)> = Vec::new();
        while let Some((rm, rc)) = rem.leading().cloned() {
            let Some(qm) = rm.div(&lm) else {
                return Err(RingError::DivisionFails);
            };
            let qc = &rc / &lc;
            let next = rem.merge(&divisor.mul_term(&qm, &qc), true);
            if let Some((nm, _)) = next.leading() {
                if self.table.cmp(nm, &rm) != Ordering::Less {
                    return Err(RingError::DivisionFails);
                }
            }
            quotient.push((qm, qc));
            rem = next;
        }
        let q = Polynomial::from_terms(&self.table, quotient);
        if &(&q * divisor) != self {
            return Err(RingError::DivisionFails);
        }
        Ok(q)
    }

    /// Square root by peeling leading terms; the returned root has a positive
    /// leading coefficient.
    pub fn sqrt(&self) -> Result<Polynomial, RingError> {
        let Some((lm, lc)) = self.leading().cloned() else {
            return Ok(self.clone());
        };
        if lm.iter().any(|(_, e)| e % 2 == 1) {
            return Err(RingError::NotASquare);
        }
        let c0 = rational_sqrt(&lc).ok_or(RingError::NotASquare)?;
        let m0 = Monomial::from_pairs(lm.iter().map(|(v, e)| (v, e / 2)));
        let mut root = Polynomial::monomial(&self.table, m0.clone(), c0.clone());
        let mut rem = self - &(&root * &root);
        let two_c0 = &c0 * Coeff::from_integer(BigInt::from(2));
        let mut last = m0.clone();
        while let Some((rm, rc)) = rem.leading().cloned() {
            let Some(tm) = rm.div(&m0) else {
                return Err(RingError::NotASquare);
            };
            if self.table.cmp(&tm, &last) != Ordering::Less {
                return Err(RingError::NotASquare);
            }
            let tc = &rc / &two_c0;
            let t = Polynomial::monomial(&self.table, tm.clone(), tc);
            // (root + t)^2 - root^2 = 2*root*t + t^2
            let delta = &(&root * &t).scale(&Coeff::from_integer(BigInt::from(2))) + &(&t * &t);
            let next = &rem - &delta;
            if let Some((nm, _)) = next.leading() {
                if self.table.cmp(nm, &rm) != Ordering::Less {
                    return Err(RingError::NotASquare);
                }
            }
            root = &root + &t;
            rem = next;
            last = tm;
        }
        if &(&root * &root) != self {
            return Err(RingError::NotASquare);
        }
        Ok(root)
    }

    /// Re-expresses the polynomial over another table by variable name.
    pub fn transfer(&self, target: &Arc<VariableTable>) -> Result<Polynomial, RingError> {
        if same_table(&self.table, target) {
            return Ok(Polynomial {
                table: target.clone(),
                terms: self.terms.clone(),
            });
        }
        let mut map = Vec::with_capacity(self.table.len());
        for e in self.table.entries() {
            map.push(target.index_of(&e.name));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut pairs = Vec::new();
            for (v, e) in m.iter() {
                let w = map[v].ok_or_else(|| RingError::UnknownVariable(self.table.name(v).to_string()))?;
                pairs.push((w, e));
            }
            terms.push((Monomial::from_pairs(pairs), c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Canonical text: descending terms, `p/q` coefficients, `^` exponents.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if m.is_one() {
                s.push_str(&format_coeff(&a));
            } else if a.is_one() {
                s.push_str(&m.format(&self.table));
            } else {
                s.push_str(&format_coeff(&a));
                s.push('*');
                s.push_str(&m.format(&self.table));
            }
        }
        s
    }
}

fn rewrite_term(table: &VariableTable, m: Monomial, c: Coeff) -> Vec<(Monomial, Coeff)> {
    let mut kept = Vec::new();
    let mut factors: Vec<(&[(Monomial, Coeff)], u32)> = Vec::new();
    for (v, e) in m.iter() {
        match table.rule_for(v) {
            Some(r) if e >= r.power => {
                if e % r.power > 0 {
                    kept.push((v, e % r.power));
                }
                factors.push((&r.replacement, e / r.power));
            }
            _ => kept.push((v, e)),
        }
    }
    let mut acc: Vec<(Monomial, Coeff)> = vec![(Monomial::from_pairs(kept), c)];
    for (repl, times) in factors {
        for _ in 0..times {
            let mut map = TermMap::default();
            for (a, ca) in &acc {
                for (b, cb) in repl {
                    accumulate(&mut map, a.mul(b), ca * cb);
                }
            }
            acc = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        }
    }
    acc
}

/// Resolves bindings transitively; errors on a cycle.
pub fn resolve_bindings(bindings: &FxHashMap<usize, Polynomial>) -> Result<FxHashMap<usize, Polynomial>, RingError> {
    let needs_resolution = bindings
        .values()
        .any(|p| p.terms.iter().any(|(m, _)| m.vars().any(|v| bindings.contains_key(&v))));
    if !needs_resolution {
        return Ok(bindings.clone());
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: FxHashMap<usize, Mark> = FxHashMap::default();
    let mut out: FxHashMap<usize, Polynomial> = FxHashMap::default();
    let mut keys: Vec<usize> = bindings.keys().copied().collect();
    keys.sort_unstable();
    for &start in &keys {
        if marks.contains_key(&start) {
            continue;
        }
        // iterative DFS: (var, children-visited flag)
        let mut stack: Vec<(usize, bool)> = vec![(start, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                let deps: FxHashMap<usize, Polynomial> = bindings[&v]
                    .variables()
                    .into_iter()
                    .filter(|w| bindings.contains_key(w))
                    .map(|w| (w, out[&w].clone()))
                    .collect();
                let img = bindings[&v].substitute_resolved(&deps);
                out.insert(v, img);
                marks.insert(v, Mark::Done);
                continue;
            }
            match marks.get(&v) {
                Some(Mark::Done) => continue,
                Some(Mark::Active) => {
                    let name = bindings[&v].table.name(v).to_string();
                    return Err(RingError::CyclicBindings(name));
                }
                None => {}
            }
            marks.insert(v, Mark::Active);
            stack.push((v, true));
            for w in bindings[&v].variables() {
                if !bindings.contains_key(&w) {
                    continue;
                }
                match marks.get(&w) {
                    Some(Mark::Done) => {}
                    Some(Mark::Active) => {
                        let name = bindings[&w].table.name(w).to_string();
                        return Err(RingError::CyclicBindings(name));
                    }
                    None => stack.push((w, false)),
                }
            }
        }
    }
    Ok(out)
}

pub fn format_coeff(c: &Coeff) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn rational_sqrt(c: &Coeff) -> Option<Coeff> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(Coeff::new(n, d))
    } else {
        None
    }
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self.to_text())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                self.$checked(rhs)
                    .expect("polynomials over different variable tables")
            }
        }
        impl std::ops::$tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl std::ops::Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::VarKind;

    fn table() -> Arc<VariableTable> {
        VariableTable::builder()
            .with_geometric_vars()
            .parameters(["d", "g9", "b2"])
            .algebraic("i")
            .rule("i", 2, "-1")
            .build()
            .unwrap()
    }

    fn p(t: &Arc<VariableTable>, s: &str) -> Polynomial {
        Polynomial::parse(t, s).unwrap()
    }

    #[test]
    fn add_identity_and_cancellation() {
        let t = table();
        let a = p(&t, "y1^2 - y2^2");
        assert_eq!(&a + &Polynomial::zero(&t), a);
        assert!((p(&t, "y1") + p(&t, "-y1")).is_zero());
        let q = a + p(&t, "-d*y3^2");
        assert_eq!(q.to_text(), "y1^2 - y2^2 - d*y3^2");
    }

    #[test]
    fn mul_and_rules() {
        let t = table();
        assert_eq!((p(&t, "i") * p(&t, "i")).to_text(), "-1");
        assert_eq!(p(&t, "(y1-y2)*(y1+y2)"), p(&t, "y1^2 - y2^2"));
        assert_eq!(p(&t, "i^5*x"), p(&t, "i*x"));
        let a = p(&t, "3*x + 1/2");
        assert_eq!(&a * &Polynomial::one(&t), a);
    }

    #[test]
    fn table_mismatch() {
        let t1 = table();
        let t2 = VariableTable::builder().with_geometric_vars().build().unwrap();
        let a = p(&t1, "x");
        let b = p(&t2, "x");
        assert_eq!(a.checked_add(&b), Err(RingError::TableMismatch));
        assert_eq!(a.checked_mul(&b), Err(RingError::TableMismatch));
        assert_eq!(b.transfer(&t1).unwrap(), a);
    }

    #[test]
    fn degrees_and_signs() {
        let t = table();
        assert_eq!(p(&t, "x^2").weighted_degree(), Ok(WeightedDegree::Homogeneous(2)));
        assert_eq!(
            p(&t, "y1^2 - y2^2 - d^2*y3^2").weighted_degree(),
            Ok(WeightedDegree::Homogeneous(4))
        );
        assert_eq!(p(&t, "x + y1").weighted_degree(), Ok(WeightedDegree::Inhomogeneous));
        assert_eq!(Polynomial::zero(&t).weighted_degree(), Err(RingError::ZeroPolynomial));
        assert_eq!(p(&t, "y2").sigma_sign(), SigmaSign::Plus);
        assert_eq!(p(&t, "x*y2").sigma_sign(), SigmaSign::Minus);
        assert_eq!(p(&t, "x + y2").sigma_sign(), SigmaSign::Mixed);
        assert_eq!(Polynomial::zero(&t).sigma_sign(), SigmaSign::Plus);
        assert_eq!(t.entry(t.var("d").unwrap()).kind, VarKind::Parameter);
    }

    #[test]
    fn substitution() {
        let t = VariableTable::builder()
            .with_geometric_vars()
            .geometric("y4", 2, -1)
            .parameter("d")
            .build()
            .unwrap();
        let y4 = t.var("y4").unwrap();
        let mut b = FxHashMap::default();
        b.insert(y4, p(&t, "d*y3"));
        assert_eq!(p(&t, "y4").substitute(&b).unwrap().to_text(), "d*y3");
        let q = p(&t, "y1^2 - y2^2 - y3*y4");
        assert_eq!(q.substitute(&FxHashMap::default()).unwrap(), q);
        let mut b2 = FxHashMap::default();
        b2.insert(y4, p(&t, "d^2*y3"));
        assert_eq!(q.substitute(&b2).unwrap(), p(&t, "y1^2 - y2^2 - d^2*y3^2"));
    }

    #[test]
    fn cyclic_bindings_rejected() {
        let t = table();
        let (a, b) = (t.var("g9").unwrap(), t.var("b2").unwrap());
        let mut m = FxHashMap::default();
        m.insert(a, p(&t, "b2 + 1"));
        m.insert(b, p(&t, "g9"));
        assert!(matches!(p(&t, "g9").substitute(&m), Err(RingError::CyclicBindings(_))));
        // a chain resolves transitively
        let mut chain = FxHashMap::default();
        chain.insert(a, p(&t, "b2 + 1"));
        chain.insert(b, p(&t, "d^2"));
        assert_eq!(p(&t, "g9*x").substitute(&chain).unwrap(), p(&t, "(d^2+1)*x"));
    }

    #[test]
    fn coefficient_extraction() {
        let t = table();
        let geo: Vec<usize> = ["x", "y1", "y2", "y3"].iter().map(|n| t.var(n).unwrap()).collect();
        let c = p(&t, "b2*y2*y3").coefficients_wrt(&geo);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].0.format(&t), "y2*y3");
        assert_eq!(c[0].1.to_text(), "b2");
        assert!(Polynomial::zero(&t).coefficients_wrt(&geo).is_empty());
        let c = p(&t, "(g9+1)*y2^2*y3 + d*x^4*y3").coefficients_wrt(&geo);
        let got: Vec<(String, String)> = c.iter().map(|(m, q)| (m.format(&t), q.to_text())).collect();
        assert_eq!(
            got,
            vec![
                ("x^4*y3".to_string(), "d".to_string()),
                ("y2^2*y3".to_string(), "g9 + 1".to_string())
            ]
        );
    }

    #[test]
    fn division() {
        let t = table();
        let q = p(&t, "y1^2 - y2^2 - d*y3^2");
        assert_eq!((&q * &q).exact_divide(&q).unwrap(), q);
        assert_eq!(
            p(&t, "y1^2-y2^2").exact_divide(&p(&t, "y1+y2")).unwrap(),
            p(&t, "y1-y2")
        );
        assert_eq!(
            p(&t, "y1^2+y2^2").exact_divide(&p(&t, "y1+y2")),
            Err(RingError::DivisionFails)
        );
        assert_eq!(q.exact_divide(&Polynomial::zero(&t)), Err(RingError::DivisionByZero));
    }

    #[test]
    fn square_roots() {
        let t = table();
        assert_eq!(p(&t, "(y1+y2)^2").sqrt().unwrap(), p(&t, "y1+y2"));
        assert_eq!(p(&t, "(-y1+y2)^2").sqrt().unwrap(), p(&t, "y1-y2"));
        assert_eq!(p(&t, "y1^2+y2^2").sqrt(), Err(RingError::NotASquare));
        assert_eq!(
            p(&t, "4/9*(x*d - 3*y1 + g9)^2").sqrt().unwrap(),
            p(&t, "2/3*(x*d - 3*y1 + g9)")
        );
        assert_eq!(p(&t, "-x^2").sqrt(), Err(RingError::NotASquare));
    }

    #[test]
    fn text_form() {
        let t = table();
        assert_eq!(p(&t, "-1/2*x*y1 + 3 - y2").to_text(), "-1/2*x*y1 - y2 + 3");
        assert_eq!(Polynomial::zero(&t).to_text(), "0");
        let s = p(&t, "(x - 2/3*d*y3)^3");
        assert_eq!(p(&t, &s.to_text()), s);
    }
}
