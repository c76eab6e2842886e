//! Finite magmas and the comultiplications they induce on function algebras.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::algebra::MultiMatrixAlgebra;
use crate::axioms::Comultiplication;
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, Tolerances, ONE};

/// A finite set with a binary operation, `table[s][t] = s * t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMagma {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl FiniteMagma {
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidTable("no elements".into()));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidTable(format!("duplicate label {a:?}")));
            }
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidTable(format!("table is not {n} x {n}")));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::InvalidTable("entry out of range".into()));
        }
        Ok(FiniteMagma { labels, table })
    }

    /// Labels `0..n` with the operation `op`.
    pub fn from_fn(n: usize, op: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|s| (0..n).map(|t| op(s, t)).collect()).collect();
        Self::new(labels, table)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn op(&self, s: usize, t: usize) -> usize {
        self.table[s][t]
    }

    /// Renames elements: element `i` becomes element `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let n = self.order();
        let mut labels = vec![String::new(); n];
        let mut table = vec![vec![0; n]; n];
        for s in 0..n {
            labels[perm[s]] = self.labels[s].clone();
            for t in 0..n {
                table[perm[s]][perm[t]] = perm[self.table[s][t]];
            }
        }
        FiniteMagma { labels, table }
    }

    /// Parses the text table format: a line of labels, then one row of result labels per element.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (_, header) = lines.next().ok_or_else(|| parse_error(1, "missing label line"))?;
        let labels: Vec<String> = header.split_whitespace().map(str::to_string).collect();
        let n = labels.len();
        let mut table = Vec::with_capacity(n);
        for (lineno, line) in lines {
            let row: Vec<usize> = line
                .split_whitespace()
                .map(|tok| {
                    labels
                        .iter()
                        .position(|l| l == tok)
                        .ok_or_else(|| parse_error(lineno + 1, &format!("unknown label {tok:?}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(parse_error(lineno + 1, &format!("expected {n} entries, found {}", row.len())));
            }
            table.push(row);
        }
        if table.len() != n {
            return Err(parse_error(
                text.lines().count(),
                &format!("expected {n} rows, found {}", table.len()),
            ));
        }
        Self::new(labels, table)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.labels.join(" ");
        out.push('\n');
        for row in &self.table {
            let names: Vec<&str> = row.iter().map(|&x| self.labels[x].as_str()).collect();
            let _ = writeln!(out, "{}", names.join(" "));
        }
        out
    }
}

fn parse_error(line: usize, message: &str) -> Error {
    Error::ParseError {
        location: format!("line {line}"),
        message: message.to_string(),
    }
}

/// Structural properties of a finite magma.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MagmaReport {
    pub associative: bool,
    /// Every row of the table is a permutation.
    pub left_cancellative: bool,
    /// Every column of the table is a permutation.
    pub right_cancellative: bool,
    pub identity: Option<usize>,
    /// `inverses[s]` is the two-sided inverse of `s`, when every element has one.
    pub inverses: Option<Vec<usize>>,
    pub is_group: bool,
}

impl MagmaReport {
    pub fn cancellative(&self) -> bool {
        self.left_cancellative && self.right_cancellative
    }
}

fn is_permutation(values: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for v in values {
        if seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

pub fn analyze(m: &FiniteMagma) -> MagmaReport {
    let n = m.order();
    let associative = (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| m.op(m.op(a, b), c) == m.op(a, m.op(b, c)))));
    let left_cancellative = (0..n).all(|s| is_permutation((0..n).map(|t| m.op(s, t)), n));
    let right_cancellative = (0..n).all(|t| is_permutation((0..n).map(|s| m.op(s, t)), n));
    let identity = (0..n).find(|&e| (0..n).all(|s| m.op(e, s) == s && m.op(s, e) == s));
    let inverses = identity.and_then(|e| {
        (0..n)
            .map(|s| (0..n).find(|&t| m.op(s, t) == e && m.op(t, s) == e))
            .collect::<Option<Vec<usize>>>()
    });
    let is_group = associative && identity.is_some() && inverses.is_some();
    MagmaReport {
        associative,
        left_cancellative,
        right_cancellative,
        identity,
        inverses,
        is_group,
    }
}

/// `Delta(d_x) = sum over s*t = x of d_s (x) d_t` on the algebra of functions on the magma.
pub fn comult_from_table(m: &FiniteMagma) -> (MultiMatrixAlgebra, Comultiplication) {
    let n = m.order();
    let algebra = MultiMatrixAlgebra::points(n).expect("non-empty magma");
    let mut matrix = CMatrix::zeros(n * n, n);
    // for 1x1 blocks the pair (s, t) sits at s*n + t
    for s in 0..n {
        for t in 0..n {
            matrix[(s * n + t, m.op(s, t))] = ONE;
        }
    }
    let delta = Comultiplication::new(&algebra, matrix).expect("shape by construction");
    (algebra, delta)
}

/// Recovers the magma from a comultiplication on an algebra of functions on points.
///
/// The functional `f -> Delta(f)(s, t)` must be evaluation at a single point.
pub fn extract_operation(delta: &Comultiplication, labels: Option<&[String]>, tol: &Tolerances) -> Result<FiniteMagma> {
    let algebra = delta.algebra();
    if algebra.block_dims().iter().any(|&d| d != 1) {
        return Err(Error::ShapeMismatch(
            "operation extraction needs an algebra of 1 x 1 blocks".into(),
        ));
    }
    let n = algebra.dim();
    let labels: Vec<String> = match labels {
        Some(l) if l.len() == n => l.to_vec(),
        Some(l) => return Err(Error::ShapeMismatch(format!("{} labels for {n} points", l.len()))),
        None => (0..n).map(|i| i.to_string()).collect(),
    };
    let mut table = vec![vec![0; n]; n];
    for s in 0..n {
        for t in 0..n {
            let row = delta.matrix().row(s * n + t);
            let mut support = None;
            for x in 0..n {
                let v = row[x];
                if (v - ONE).norm() <= tol.residual {
                    if support.is_some() {
                        return Err(Error::NotPointwise(s, t));
                    }
                    support = Some(x);
                } else if v.norm() > tol.residual {
                    return Err(Error::NotPointwise(s, t));
                }
            }
            table[s][t] = support.ok_or(Error::NotPointwise(s, t))?;
        }
    }
    FiniteMagma::new(labels, table)
}

/// Cyclic group `Z_n` with labels `0..n`.
pub fn cyclic(n: usize) -> FiniteMagma {
    FiniteMagma::from_fn(n, |a, b| (a + b) % n).expect("n >= 1")
}

/// Direct product `Z_a x Z_b`, element `(i, j)` at index `i*b + j`.
pub fn cyclic_product(a: usize, b: usize) -> FiniteMagma {
    let m = FiniteMagma::from_fn(a * b, |x, y| ((x / b + y / b) % a) * b + (x % b + y % b) % b).expect("non-empty");
    let labels = (0..a * b).map(|x| format!("{}{}", x / b, x % b)).collect();
    FiniteMagma::new(labels, m.table).expect("valid")
}

/// The symmetric group on three letters, composing `(s t)(x) = s(t(x))`.
///
/// Elements are labelled by their one-line notation.
pub fn symmetric3() -> FiniteMagma {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let labels = perms
        .iter()
        .map(|p| p.iter().map(|x| (x + 1).to_string()).collect())
        .collect();
    let table = perms
        .iter()
        .map(|s| {
            perms
                .iter()
                .map(|t| {
                    let st = [s[t[0]], s[t[1]], s[t[2]]];
                    perms.iter().position(|p| *p == st).expect("closed")
                })
                .collect()
        })
        .collect();
    FiniteMagma::new(labels, table).expect("valid")
}

/// `{0, ..., n}` under `min(a + b, n)`: associative with an absorbing top element.
pub fn truncated_monoid(n: usize) -> FiniteMagma {
    FiniteMagma::from_fn(n + 1, |a, b| (a + b).min(n)).expect("non-empty")
}

/// A commutative three-element magma with `(1*1)*2 != 1*(1*2)`.
pub fn nonassociative3() -> FiniteMagma {
    let table = [[0, 1, 2], [1, 2, 0], [2, 0, 0]];
    FiniteMagma::from_fn(3, |a, b| table[a][b]).expect("valid")
}

/// Group tables of every isomorphism type of order at most 6.
pub fn small_groups() -> Vec<FiniteMagma> {
    let mut out: Vec<FiniteMagma> = (1..=6).map(cyclic).collect();
    out.push(cyclic_product(2, 2));
    out.push(symmetric3());
    out
}

/// A group of order at most `max_order`, with its elements shuffled.
pub fn random_group_table<R: Rng>(rng: &mut R, max_order: usize) -> FiniteMagma {
    let groups: Vec<FiniteMagma> = small_groups().into_iter().filter(|g| g.order() <= max_order).collect();
    let g = &groups[rng.random_range(0..groups.len())];
    let mut perm: Vec<usize> = (0..g.order()).collect();
    perm.shuffle(rng);
    g.relabel(&perm)
}
