//! Square matrices of polynomials: products, congruence, minors and
//! cofactors by memoized Laplace expansion.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::ring::{Polynomial, RingError, VariableTable};

#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    n: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> Result<Self, RingError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            assert_eq!(row.len(), n, "matrix must be square");
            entries.extend(row);
        }
        if let Some(first) = entries.first() {
            for e in &entries {
                first.check_table(e)?;
            }
        }
        Ok(PolyMatrix { n, entries })
    }

    /// Parses a matrix given row by row in the polynomial text syntax.
    pub fn parse(table: &Arc<VariableTable>, rows: &[&[&str]]) -> Result<Self, RingError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| Polynomial::parse(table, s)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Self::from_rows(rows)
    }

    pub fn identity(table: &Arc<VariableTable>, n: usize) -> Self {
        Self::diagonal(&vec![Polynomial::one(table); n])
    }

    pub fn diagonal(diag: &[Polynomial]) -> Self {
        let n = diag.len();
        let table = diag[0].table();
        let mut entries = vec![Polynomial::zero(table); n * n];
        for (k, p) in diag.iter().enumerate() {
            entries[k * n + k] = p.clone();
        }
        PolyMatrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &Arc<VariableTable> {
        self.entries[0].table()
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Polynomial) {
        self.entries[i * self.n + j] = p;
    }

    pub fn row(&self, i: usize) -> &[Polynomial] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<Polynomial>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        PolyMatrix { n, entries }
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Self {
        PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<E>(&self, f: impl Fn(&Polynomial) -> Result<Polynomial, E>) -> Result<Self, E> {
        Ok(PolyMatrix {
            n: self.n,
            entries: self.entries.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    pub fn transfer(&self, table: &Arc<VariableTable>) -> Result<Self, RingError> {
        self.try_map(|p| p.transfer(table))
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<Self, RingError> {
        assert_eq!(self.n, other.n);
        self.table_check(other)?;
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Polynomial::zero(self.table());
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                entries.push(acc);
            }
        }
        Ok(PolyMatrix { n, entries })
    }

    /// `P * self * P^T`.
    pub fn congruence(&self, p: &PolyMatrix) -> Result<Self, RingError> {
        p.mul(self)?.mul(&p.transpose())
    }

    fn table_check(&self, other: &PolyMatrix) -> Result<(), RingError> {
        self.entries[0].check_table(&other.entries[0])
    }

    /// Submatrix on the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        assert_eq!(rows.len(), cols.len());
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        PolyMatrix { n: rows.len(), entries }
    }

    pub fn determinant(&self) -> Polynomial {
        let idx: Vec<usize> = (0..self.n).collect();
        self.minor(&idx, &idx)
    }

    /// Determinant of the submatrix on `rows` x `cols` (in the given orders).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        assert_eq!(rows.len(), cols.len());
        assert!(cols.len() <= 16);
        if rows.is_empty() {
            return Polynomial::one(self.table());
        }
        // Expand the sparsest rows first; track the parity of that reordering.
        let mut order: Vec<usize> = (0..rows.len()).collect();
        let nnz = |r: usize| cols.iter().filter(|&&c| !self.get(rows[r], c).is_zero()).count();
        order.sort_by_key(|&r| (nnz(r), r));
        let negate = permutation_is_odd(&order);
        let ordered: Vec<usize> = order.iter().map(|&r| rows[r]).collect();
        let mut memo = FxHashMap::default();
        let full = (1u32 << cols.len()) - 1;
        let det = self.expand(&ordered, cols, full, &mut memo);
        if negate {
            -det
        } else {
            det
        }
    }

    // Determinant of rows[k..] against the columns in `mask`, k = rows.len() - |mask|.
    fn expand(&self, rows: &[usize], cols: &[usize], mask: u32, memo: &mut FxHashMap<u32, Polynomial>) -> Polynomial {
        if mask == 0 {
            return Polynomial::one(self.table());
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let k = rows.len() - mask.count_ones() as usize;
        let row = rows[k];
        let mut acc = Polynomial::zero(self.table());
        let mut position = 0;
        for (c, &col) in cols.iter().enumerate() {
            if mask & (1 << c) == 0 {
                continue;
            }
            let a = self.get(row, col);
            if !a.is_zero() {
                let sub = self.expand(rows, cols, mask & !(1 << c), memo);
                if !sub.is_zero() {
                    let term = a * &sub;
                    acc = if position % 2 == 0 { &acc + &term } else { &acc - &term };
                }
            }
            position += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    /// Signed cofactor `(-1)^(i+j)` times the minor deleting row `i`, column `j`.
    pub fn cofactor(&self, i: usize, j: usize) -> Polynomial {
        let rows: Vec<usize> = (0..self.n).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.n).filter(|&c| c != j).collect();
        let m = self.minor(&rows, &cols);
        if (i + j) % 2 == 1 {
            -m
        } else {
            m
        }
    }

    /// All `k x k` minors, keyed by (row set, column set) in lexicographic order.
    pub fn minors_of_size(&self, k: usize) -> Vec<((Vec<usize>, Vec<usize>), Polynomial)> {
        let subsets = subsets(self.n, k);
        let mut out = Vec::new();
        for r in &subsets {
            for c in &subsets {
                out.push(((r.clone(), c.clone()), self.minor(r, c)));
            }
        }
        out
    }
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut inversions = 0;
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            if p[a] > p[b] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == k {
            out.push((0..n).filter(|&i| mask & (1 << i) != 0).collect());
        }
    }
    out.sort();
    out
}

impl std::fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.n {
            l.entry(&self.row(i).iter().map(|p| p.to_text()).collect::<Vec<_>>());
        }
        l.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::VariableTable;

    fn table() -> Arc<VariableTable> {
        VariableTable::builder()
            .with_geometric_vars()
            .parameters(["a", "b", "c", "d", "e", "f", "g", "h", "k"])
            .build()
            .unwrap()
    }

    fn leibniz(m: &PolyMatrix) -> Polynomial {
        let n = m.size();
        let mut acc = Polynomial::zero(m.table());
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut t = Polynomial::one(m.table());
            for (i, &j) in perm.iter().enumerate() {
                t = &t * m.get(i, j);
            }
            acc = if permutation_is_odd(&perm) {
                &acc - &t
            } else {
                &acc + &t
            };
            // next permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| perm[i] < perm[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
        acc
    }

    #[test]
    fn determinant_matches_leibniz() {
        let t = table();
        let m = PolyMatrix::parse(
            &t,
            &[
                &["a", "b", "0", "x"],
                &["c", "y1", "d", "0"],
                &["0", "e*x", "f", "g"],
                &["h", "0", "k", "y2"],
            ],
        )
        .unwrap();
        assert_eq!(m.determinant(), leibniz(&m));
        let d = PolyMatrix::diagonal(&["a", "b", "c"].map(|s| Polynomial::parse(&t, s).unwrap()));
        assert_eq!(d.determinant().to_text(), "a*b*c");
        assert_eq!(d.cofactor(0, 0).to_text(), "b*c");
    }

    #[test]
    fn laplace_identity() {
        let t = table();
        let m = PolyMatrix::parse(
            &t,
            &[
                &["a", "x", "b", "0"],
                &["x", "y1", "0", "c"],
                &["b", "0", "d*x^2", "y2"],
                &["0", "c", "y2", "e"],
            ],
        )
        .unwrap();
        let det = m.determinant();
        for i in 0..4 {
            for k in 0..4 {
                let mut s = Polynomial::zero(&t);
                for j in 0..4 {
                    s = &s + &(m.get(i, j) * &m.cofactor(k, j));
                }
                let want = if i == k { det.clone() } else { Polynomial::zero(&t) };
                assert_eq!(s, want, "row {i} against cofactors of row {k}");
            }
        }
    }

    #[test]
    fn congruence_and_transpose() {
        let t = table();
        let m = PolyMatrix::parse(&t, &[&["a", "x"], &["x", "b"]]).unwrap();
        let id = PolyMatrix::identity(&t, 2);
        assert_eq!(m.congruence(&id).unwrap(), m);
        let p = PolyMatrix::parse(&t, &[&["1", "2"], &["0", "3"]]).unwrap();
        let c = m.congruence(&p).unwrap();
        assert!(c.is_symmetric());
        assert_eq!(c.determinant(), &m.determinant() * &Polynomial::int(&t, 9));
        assert_eq!(p.transpose().get(1, 0).to_text(), "2");
    }

    #[test]
    fn minor_counts() {
        let t = table();
        let m = PolyMatrix::identity(&t, 4);
        let ms = m.minors_of_size(3);
        assert_eq!(ms.len(), 16);
        assert_eq!(ms.iter().filter(|(_, p)| !p.is_zero()).count(), 4);
    }
}
