//! Sparse monomials and the block graded reverse lexicographic order.

use std::cmp::Ordering;

use smallvec::SmallVec;

use super::table::{Sign, VariableTable};

/// Sorted `(variable index, exponent)` pairs; zero exponents are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: SmallVec<[(u16, u16); 6]>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: usize) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, e: u32) -> Self {
        let mut m = Monomial::default();
        if e > 0 {
            m.exps.push((v as u16, e as u16));
        }
        m
    }

    /// Builds a monomial from arbitrary `(var, exp)` pairs, merging repeats.
    pub fn from_pairs<I: IntoIterator<Item = (usize, u32)>>(pairs: I) -> Self {
        let mut v: Vec<(u16, u16)> = pairs
            .into_iter()
            .filter(|&(_, e)| e > 0)
            .map(|(a, e)| (a as u16, e as u16))
            .collect();
        v.sort_unstable_by_key(|p| p.0);
        let mut exps: SmallVec<[(u16, u16); 6]> = SmallVec::new();
        for (a, e) in v {
            match exps.last_mut() {
                Some(last) if last.0 == a => last.1 += e,
                _ => exps.push((a, e)),
            }
        }
        Monomial { exps }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (usize, u32)> + '_ {
        self.exps.iter().map(|&(v, e)| (v as usize, e as u32))
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, v: usize) -> u32 {
        match self.exps.binary_search_by_key(&(v as u16), |p| p.0) {
            Ok(k) => self.exps[k].1 as u32,
            Err(_) => 0,
        }
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().map(|p| p.1 as u32).sum()
    }

    pub fn weighted_degree(&self, table: &VariableTable) -> u32 {
        self.iter().map(|(v, e)| table.entry(v).weight * e).sum()
    }

    pub fn sign(&self, table: &VariableTable) -> Sign {
        self.iter().fold(Sign::Plus, |s, (v, e)| s * table.entry(v).sign.pow(e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.exps, &other.exps);
        let mut out: SmallVec<[(u16, u16); 6]> = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { exps: out }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial {
            exps: self.exps.iter().map(|&(v, x)| (v, x * e as u16)).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        let mut j = 0;
        for &(v, e) in &self.exps {
            while j < other.exps.len() && other.exps[j].0 < v {
                j += 1;
            }
            if j == other.exps.len() || other.exps[j].0 != v || other.exps[j].1 < e {
                return false;
            }
        }
        true
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let mut out: SmallVec<[(u16, u16); 6]> = SmallVec::new();
        let mut j = 0;
        for &(v, e) in &self.exps {
            let mut sub = 0;
            if j < other.exps.len() && other.exps[j].0 == v {
                sub = other.exps[j].1;
                j += 1;
            }
            if e > sub {
                out.push((v, e - sub));
            }
        }
        Some(Monomial { exps: out })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut pairs: Vec<(usize, u32)> = Vec::new();
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                pairs.push((a[i].0 as usize, a[i].1 as u32));
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                pairs.push((b[j].0 as usize, b[j].1 as u32));
                j += 1;
            } else {
                pairs.push((a[i].0 as usize, a[i].1.max(b[j].1) as u32));
                i += 1;
                j += 1;
            }
        }
        Monomial {
            exps: pairs.into_iter().map(|(v, e)| (v as u16, e as u16)).collect(),
        }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        let (a, b) = (&self.exps, &other.exps);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    /// Splits into the part supported on `keep` and the rest.
    pub fn split(&self, keep: impl Fn(usize) -> bool) -> (Monomial, Monomial) {
        let mut inside = Monomial::default();
        let mut outside = Monomial::default();
        for &(v, e) in &self.exps {
            if keep(v as usize) {
                inside.exps.push((v, e));
            } else {
                outside.exps.push((v, e));
            }
        }
        (inside, outside)
    }

    /// Removes `v` entirely, returning its former exponent.
    pub fn without(&self, v: usize) -> (Monomial, u32) {
        let mut out = self.clone();
        match out.exps.binary_search_by_key(&(v as u16), |p| p.0) {
            Ok(k) => {
                let e = out.exps.remove(k).1 as u32;
                (out, e)
            }
            Err(_) => (out, 0),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps.iter().map(|p| p.0 as usize)
    }

    /// Non-geometric factors are written first, e.g. `d*y3^2`.
    pub fn format(&self, table: &VariableTable) -> String {
        let split = table.geometric_count();
        let parts: Vec<String> = self
            .iter()
            .filter(|&(v, _)| v >= split)
            .chain(self.iter().filter(|&(v, _)| v < split))
            .map(|(v, e)| {
                if e == 1 {
                    table.name(v).to_string()
                } else {
                    format!("{}^{}", table.name(v), e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Monomial {
    /// Block order: graded reverse lexicographic on the variables below
    /// `split` (the geometric block), ties broken by graded reverse
    /// lexicographic order on the remaining variables.
    pub fn cmp_block(&self, other: &Monomial, split: usize) -> Ordering {
        let split = split as u16;
        let (a1, a2) = self.exps.split_at(self.exps.partition_point(|p| p.0 < split));
        let (b1, b2) = other.exps.split_at(other.exps.partition_point(|p| p.0 < split));
        grevlex(a1, b1).then_with(|| grevlex(a2, b2))
    }
}

fn grevlex(a: &[(u16, u16)], b: &[(u16, u16)]) -> Ordering {
    let da: u32 = a.iter().map(|p| p.1 as u32).sum();
    let db: u32 = b.iter().map(|p| p.1 as u32).sum();
    if da != db {
        return da.cmp(&db);
    }
    let (mut i, mut j) = (a.len(), b.len());
    while i > 0 && j > 0 {
        let (va, ea) = a[i - 1];
        let (vb, eb) = b[j - 1];
        match va.cmp(&vb) {
            Ordering::Equal => {
                if ea != eb {
                    return eb.cmp(&ea);
                }
                i -= 1;
                j -= 1;
            }
            Ordering::Greater => return Ordering::Less,
            Ordering::Less => return Ordering::Greater,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: &[(usize, u32)]) -> Monomial {
        Monomial::from_pairs(p.iter().copied())
    }

    fn gt(a: &Monomial, b: &Monomial, split: usize) -> bool {
        a.cmp_block(b, split) == Ordering::Greater
    }

    #[test]
    fn grevlex_basics() {
        // variables 0 > 1 > 2, one block
        assert!(gt(&m(&[(0, 2)]), &m(&[(0, 1), (1, 1)]), 9));
        assert!(gt(&m(&[(0, 1), (1, 1)]), &m(&[(1, 2)]), 9));
        assert!(gt(&m(&[(2, 3)]), &m(&[(0, 2)]), 9));
        // x0*x2 < x1^2 in grevlex
        assert!(gt(&m(&[(1, 2)]), &m(&[(0, 1), (2, 1)]), 9));
        assert_eq!(m(&[]).cmp_block(&Monomial::one(), 9), Ordering::Equal);
    }

    #[test]
    fn geometric_block_dominates() {
        // variable 3 is outside the block of {0, 1, 2}
        assert!(gt(&m(&[(0, 2)]), &m(&[(3, 5), (1, 1)]), 3));
        assert!(gt(&m(&[(3, 1), (1, 1)]), &m(&[(1, 1)]), 3));
    }

    #[test]
    fn mul_div_lcm() {
        let a = m(&[(0, 2), (3, 1)]);
        let b = m(&[(0, 1), (2, 4)]);
        let p = a.mul(&b);
        assert_eq!(p, m(&[(0, 3), (2, 4), (3, 1)]));
        assert_eq!(p.div(&b), Some(a.clone()));
        assert_eq!(a.div(&b), None);
        assert_eq!(a.lcm(&b), m(&[(0, 2), (2, 4), (3, 1)]));
        assert!(!a.is_coprime(&b));
        assert!(m(&[(1, 1)]).is_coprime(&a));
        assert_eq!(a.pow(3).exponent(0), 6);
        assert_eq!(m(&[(0, 1), (0, 2)]).exponent(0), 3);
    }
}
