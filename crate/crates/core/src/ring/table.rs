//! Variable tables: names, weights, involution signs and rewrite rules.

use std::sync::Arc;

use rustc_hash::FxHashMap;

use super::monomial::Monomial;
use super::parse;
use super::{Coeff, RingError};

/// Role of a variable in the ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    /// Coordinates of the weighted projective space (x, y's, z's, t).
    Geometric,
    /// Family parameters; weight 0 and invariant under the involution.
    Parameter,
    /// Adjoined algebraic constants such as `i` or a root of `r^2 + 15`.
    Algebraic,
}

/// Eigensign of a monomial or polynomial under the involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i32(s: i32) -> Self {
        if s >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn pow(self, e: u32) -> Self {
        if self == Sign::Minus && e % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarEntry {
    pub name: String,
    pub weight: u32,
    pub sign: Sign,
    pub kind: VarKind,
}

/// `var^power -> replacement`. The replacement never mentions a ruled variable,
/// so a single pass reduces any term completely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub var: usize,
    pub power: u32,
    pub replacement: Vec<(Monomial, Coeff)>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct VariableTable {
    entries: Vec<VarEntry>,
    index: FxHashMap<String, usize>,
    rules: Vec<RewriteRule>,
    // var index -> position in `rules`
    rule_of: FxHashMap<usize, usize>,
    split: usize,
}

impl VariableTable {
    pub fn builder() -> TableBuilder {
        TableBuilder::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[VarEntry] {
        &self.entries
    }

    pub fn entry(&self, var: usize) -> &VarEntry {
        &self.entries[var]
    }

    pub fn name(&self, var: usize) -> &str {
        &self.entries[var].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn var(&self, name: &str) -> Result<usize, RingError> {
        self.index_of(name)
            .ok_or_else(|| RingError::UnknownVariable(name.to_string()))
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    pub fn rule_for(&self, var: usize) -> Option<&RewriteRule> {
        self.rule_of.get(&var).map(|&k| &self.rules[k])
    }

    pub fn has_rules(&self) -> bool {
        !self.rules.is_empty()
    }

    /// Geometric variables occupy indices `0..geometric_count()`.
    pub fn geometric_count(&self) -> usize {
        self.split
    }

    pub fn is_geometric(&self, var: usize) -> bool {
        var < self.split
    }

    /// The canonical monomial order of this table.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        a.cmp_block(b, self.split)
    }

    pub fn vars_of_kind(&self, kind: VarKind) -> Vec<usize> {
        (0..self.entries.len())
            .filter(|&v| self.entries[v].kind == kind)
            .collect()
    }
}

#[derive(Default)]
pub struct TableBuilder {
    entries: Vec<VarEntry>,
    rules: Vec<(String, u32, String)>,
}

impl TableBuilder {
    pub fn var(mut self, name: &str, weight: u32, sign: i32, kind: VarKind) -> Self {
        self.entries.push(VarEntry {
            name: name.to_string(),
            weight,
            sign: Sign::from_i32(sign),
            kind,
        });
        self
    }

    pub fn geometric(self, name: &str, weight: u32, sign: i32) -> Self {
        self.var(name, weight, sign, VarKind::Geometric)
    }

    pub fn parameter(self, name: &str) -> Self {
        self.var(name, 0, 1, VarKind::Parameter)
    }

    pub fn parameters<I, S>(mut self, names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for n in names {
            self = self.parameter(n.as_ref());
        }
        self
    }

    pub fn algebraic(self, name: &str) -> Self {
        self.var(name, 0, 1, VarKind::Algebraic)
    }

    /// Adds `name^power -> replacement`, with the replacement written in the
    /// text syntax accepted by [`parse`](super::parse).
    pub fn rule(mut self, name: &str, power: u32, replacement: &str) -> Self {
        self.rules.push((name.to_string(), power, replacement.to_string()));
        self
    }

    pub fn build(self) -> Result<Arc<VariableTable>, RingError> {
        let mut index = FxHashMap::default();
        for (k, e) in self.entries.iter().enumerate() {
            if e.name.is_empty() || !is_identifier(&e.name) {
                return Err(RingError::InvalidTable(format!("bad name {:?}", e.name)));
            }
            if e.kind != VarKind::Geometric && (e.weight != 0 || e.sign != Sign::Plus) {
                return Err(RingError::InvalidTable(format!(
                    "{} must have weight 0 and sign +1",
                    e.name
                )));
            }
            if index.insert(e.name.clone(), k).is_some() {
                return Err(RingError::InvalidTable(format!("duplicate name {}", e.name)));
            }
        }
        let split = self.entries.iter().take_while(|e| e.kind == VarKind::Geometric).count();
        if self.entries[split..].iter().any(|e| e.kind == VarKind::Geometric) {
            return Err(RingError::InvalidTable(
                "geometric variables must precede all others".to_string(),
            ));
        }
        let mut table = VariableTable {
            entries: self.entries,
            index,
            rules: Vec::new(),
            rule_of: FxHashMap::default(),
            split,
        };
        let ruled: Vec<usize> = self
            .rules
            .iter()
            .map(|(n, _, _)| table.var(n))
            .collect::<Result<_, _>>()?;
        let mut rules = Vec::new();
        for ((name, power, text), &var) in self.rules.iter().zip(&ruled) {
            if *power < 2 {
                return Err(RingError::InvalidTable(format!("rule power for {name} must be >= 2")));
            }
            if table.entries[var].kind != VarKind::Algebraic {
                return Err(RingError::InvalidTable(format!("{name} is not algebraic")));
            }
            if table.rule_of.contains_key(&var) || rules.iter().any(|r: &RewriteRule| r.var == var) {
                return Err(RingError::InvalidTable(format!("two rules for {name}")));
            }
            let terms = parse::parse_terms(&table, text)?;
            if terms.iter().any(|(m, _)| ruled.iter().any(|&v| m.exponent(v) > 0)) {
                return Err(RingError::InvalidTable(format!(
                    "replacement for {name} mentions a ruled variable"
                )));
            }
            rules.push(RewriteRule {
                var,
                power: *power,
                replacement: terms,
            });
        }
        for (k, r) in rules.iter().enumerate() {
            table.rule_of.insert(r.var, k);
        }
        table.rules = rules;
        Ok(Arc::new(table))
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The nine coordinates x, y1..y3, z1..z4, t with their weights and signs.
pub const GEOMETRIC_VARS: [(&str, u32, i32); 9] = [
    ("x", 1, -1),
    ("y1", 2, -1),
    ("y2", 2, 1),
    ("y3", 2, -1),
    ("z1", 3, -1),
    ("z2", 3, -1),
    ("z3", 3, 1),
    ("z4", 3, 1),
    ("t", 4, -1),
];

impl TableBuilder {
    pub fn with_geometric_vars(mut self) -> Self {
        for (n, w, s) in GEOMETRIC_VARS {
            self = self.geometric(n, w, s);
        }
        self
    }
}
