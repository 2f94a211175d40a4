//! Coxeter matrices, their diagrams, and the decomposition into irreducible
//! components.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

/// An entry of a Coxeter matrix.
///
/// The derived order puts every finite label below infinity, which is the
/// order canonical forms are compared in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinity,
}

impl Label {
    /// Off-diagonal labels of 3 or more draw an edge in the diagram.
    pub fn is_edge(self) -> bool {
        !matches!(self, Label::Finite(0..=2))
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinity => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Finite(m) => s.serialize_u32(*m),
            Label::Infinity => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid label `{0}`: expected a positive integer or `inf`")]
pub struct LabelParseError(pub String);

impl FromStr for Label {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Label::Infinity);
        }
        match s.parse::<u32>() {
            Ok(m) if m >= 1 => Ok(Label::Finite(m)),
            _ => Err(LabelParseError(s.to_owned())),
        }
    }
}

/// One invariant violation reported by [`CoxeterMatrix::validate`].
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValidationError {
    #[error("diagonal must be 1 (entry ({0},{0}) is {1})")]
    Diagonal(usize, Label),
    #[error("asymmetric: entry ({0},{1}) is {2} but ({1},{0}) is {3}")]
    Asymmetric(usize, usize, Label, Label),
    #[error("off-diagonal label must be at least 2 (entry ({0},{1}) is {2})")]
    LabelTooSmall(usize, usize, Label),
    #[error("matrix rows have inconsistent lengths")]
    Shape,
    #[error("expected {expected} generator names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("empty generating set")]
    Empty,
}

/// A Coxeter matrix on `n` generators.
///
/// Constructors that take raw rows do not validate; call
/// [`CoxeterMatrix::validate`] or use [`CoxeterMatrix::new`]. Every other
/// operation assumes a valid matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoxeterMatrix {
    n: usize,
    labels: Vec<Label>,
    names: Option<Vec<String>>,
}

impl CoxeterMatrix {
    /// Builds and validates.
    pub fn new(rows: Vec<Vec<Label>>) -> Result<Self, Vec<ValidationError>> {
        let m = Self::from_rows(rows);
        m.validate()?;
        Ok(m)
    }

    /// Builds without validation. Ragged input is padded with `1` so that
    /// [`CoxeterMatrix::validate`] can still report it.
    pub fn from_rows(rows: Vec<Vec<Label>>) -> Self {
        let n = rows.len();
        let mut labels = Vec::with_capacity(n * n);
        let mut ragged = false;
        for row in &rows {
            ragged |= row.len() != n;
            for j in 0..n {
                labels.push(row.get(j).copied().unwrap_or(Label::Finite(1)));
            }
        }
        let mut m = CoxeterMatrix { n, labels, names: None };
        if ragged {
            // An impossible diagonal value marks the shape error for validate().
            m.labels[0] = Label::Finite(0);
        }
        m
    }

    /// The matrix with every off-diagonal entry 2 except the listed edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Label)]) -> Self {
        let mut m = CoxeterMatrix {
            n,
            labels: vec![Label::Finite(2); n * n],
            names: None,
        };
        for i in 0..n {
            m.labels[i * n + i] = Label::Finite(1);
        }
        for &(s, t, l) in edges {
            m.labels[s * n + t] = l;
            m.labels[t * n + s] = l;
        }
        m
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.names = Some(names);
        self
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn label(&self, s: usize, t: usize) -> Label {
        self.labels[s * self.n + t]
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// User-facing name of generator `s`, defaulting to `s{index}`.
    pub fn name(&self, s: usize) -> String {
        match &self.names {
            Some(names) => names[s].clone(),
            None => format!("s{s}"),
        }
    }

    pub fn rows(&self) -> Vec<Vec<Label>> {
        self.labels.chunks(self.n.max(1)).map(<[Label]>::to_vec).collect()
    }

    /// Every invariant violation; empty means valid.
    pub fn validate(&self) -> Result<(), Vec<ValidationError>> {
        let mut errs = Vec::new();
        if self.n == 0 {
            errs.push(ValidationError::Empty);
        }
        if self.labels.first() == Some(&Label::Finite(0)) {
            errs.push(ValidationError::Shape);
            return Err(errs);
        }
        if let Some(names) = &self.names {
            if names.len() != self.n {
                errs.push(ValidationError::NameCount {
                    expected: self.n,
                    got: names.len(),
                });
            }
        }
        for s in 0..self.n {
            let d = self.label(s, s);
            if d != Label::Finite(1) {
                errs.push(ValidationError::Diagonal(s, d));
            }
            for t in s + 1..self.n {
                let a = self.label(s, t);
                let b = self.label(t, s);
                if a != b {
                    errs.push(ValidationError::Asymmetric(s, t, a, b));
                }
                if a < Label::Finite(2) {
                    errs.push(ValidationError::LabelTooSmall(s, t, a));
                }
                if a != b && b < Label::Finite(2) {
                    errs.push(ValidationError::LabelTooSmall(t, s, b));
                }
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(errs)
        }
    }

    /// Distinct labels occurring anywhere in the matrix.
    pub fn label_set(&self) -> BTreeSet<Label> {
        self.labels.iter().copied().collect()
    }

    /// Strict upper triangle, row by row.
    pub fn upper_triangle(&self) -> Vec<Label> {
        let mut out = Vec::with_capacity(self.n * self.n.saturating_sub(1) / 2);
        for s in 0..self.n {
            for t in s + 1..self.n {
                out.push(self.label(s, t));
            }
        }
        out
    }

    /// Builds from a strict upper triangle.
    pub fn from_upper_triangle(n: usize, upper: &[Label]) -> Self {
        let mut m = Self::from_edges(n, &[]);
        let mut k = 0;
        for s in 0..n {
            for t in s + 1..n {
                m.labels[s * n + t] = upper[k];
                m.labels[t * n + s] = upper[k];
                k += 1;
            }
        }
        m
    }

    pub fn diagram(&self) -> Diagram {
        let mut edges = Vec::new();
        for s in 0..self.n {
            for t in s + 1..self.n {
                let l = self.label(s, t);
                if l.is_edge() {
                    edges.push((s, t, l));
                }
            }
        }
        Diagram { vertices: self.n, edges }
    }

    /// Neighbours of `s` in the diagram.
    pub fn neighbours(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&t| t != s && self.label(s, t).is_edge())
    }

    /// The submatrix on `vertices`, in the given order. Names carry over.
    pub fn induced(&self, vertices: &[usize]) -> Self {
        let k = vertices.len();
        let mut labels = Vec::with_capacity(k * k);
        for &s in vertices {
            for &t in vertices {
                labels.push(self.label(s, t));
            }
        }
        CoxeterMatrix {
            n: k,
            labels,
            names: self
                .names
                .as_ref()
                .map(|names| vertices.iter().map(|&v| names[v].clone()).collect()),
        }
    }

    /// The matrix whose vertex `i` is vertex `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        self.induced(perm)
    }

    /// Connected components of the diagram with their induced matrices,
    /// ordered by smallest vertex. Isolated vertices become `A_1` parts.
    pub fn components(&self) -> Vec<Component> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut vertices = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                vertices.push(v);
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            vertices.sort_unstable();
            let matrix = self.induced(&vertices);
            out.push(Component { vertices, matrix });
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    /// Block-diagonal union of `parts`, generators numbered consecutively.
    pub fn disjoint_union(parts: &[CoxeterMatrix]) -> Self {
        let n: usize = parts.iter().map(|p| p.n).sum();
        let mut m = Self::from_edges(n, &[]);
        let mut names = Vec::new();
        let mut any_names = false;
        let mut off = 0;
        for p in parts {
            for s in 0..p.n {
                for t in 0..p.n {
                    m.labels[(off + s) * n + off + t] = p.label(s, t);
                }
                names.push(p.name(s));
            }
            any_names |= p.names.is_some();
            off += p.n;
        }
        if any_names {
            m.names = Some(names);
        }
        m
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in 0..self.n {
            for t in 0..self.n {
                if t > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.label(s, t))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The labelled graph with an edge exactly where the label is at least 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagram {
    pub vertices: usize,
    /// `(s, t, m)` with `s < t` and `m >= 3`.
    pub edges: Vec<(usize, usize, Label)>,
}

/// One irreducible factor: its vertices in the parent and its induced matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub matrix: CoxeterMatrix,
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{Finite as F, Infinity as Inf};

    #[test]
    fn valid_rank_two() {
        let m = CoxeterMatrix::new(vec![vec![F(1), F(3)], vec![F(3), F(1)]]);
        assert!(m.is_ok());
    }

    #[test]
    fn bad_diagonal() {
        let errs = CoxeterMatrix::new(vec![vec![F(2), F(3)], vec![F(3), F(1)]]).unwrap_err();
        assert_eq!(errs, vec![ValidationError::Diagonal(0, F(2))]);
        assert!(errs[0].to_string().contains("diagonal must be 1"));
    }

    #[test]
    fn asymmetric() {
        let errs = CoxeterMatrix::new(vec![vec![F(1), F(3)], vec![F(4), F(1)]]).unwrap_err();
        assert_eq!(errs, vec![ValidationError::Asymmetric(0, 1, F(3), F(4))]);
        assert!(errs[0].to_string().starts_with("asymmetric"));
    }

    #[test]
    fn label_below_two() {
        let errs = CoxeterMatrix::new(vec![vec![F(1), F(1)], vec![F(1), F(1)]]).unwrap_err();
        assert_eq!(errs, vec![ValidationError::LabelTooSmall(0, 1, F(1))]);
    }

    #[test]
    fn every_violation_reported() {
        let errs = CoxeterMatrix::new(vec![
            vec![F(2), F(3), F(1)],
            vec![F(4), F(1), F(2)],
            vec![F(1), F(2), F(5)],
        ])
        .unwrap_err();
        assert_eq!(errs.len(), 4);
    }

    #[test]
    fn ragged_rows() {
        let errs = CoxeterMatrix::new(vec![vec![F(1), F(3)], vec![F(3)]]).unwrap_err();
        assert_eq!(errs, vec![ValidationError::Shape]);
    }

    #[test]
    fn commuting_pair_splits() {
        let m = CoxeterMatrix::from_edges(2, &[]);
        let comps = m.components();
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.matrix.rank() == 1));
    }

    #[test]
    fn path_is_one_component() {
        let m = CoxeterMatrix::from_edges(3, &[(0, 1, F(3)), (1, 2, F(3))]);
        assert_eq!(m.components().len(), 1);
        assert!(m.is_connected());
    }

    #[test]
    fn two_edges_two_components() {
        let m = CoxeterMatrix::from_edges(4, &[(0, 1, F(3)), (2, 3, F(5))]);
        let comps = m.components();
        assert_eq!(comps.iter().map(|c| c.vertices.clone()).collect::<Vec<_>>(), vec![vec![0, 1], vec![2, 3]]);
        assert_eq!(comps[1].matrix.label(0, 1), F(5));
    }

    #[test]
    fn label_order_puts_infinity_last() {
        assert!(F(2) < F(3) && F(1_000) < Inf);
        assert_eq!("inf".parse::<Label>().unwrap(), Inf);
        assert!("0".parse::<Label>().is_err());
        assert!("x".parse::<Label>().is_err());
    }

    #[test]
    fn upper_triangle_roundtrip() {
        let m = CoxeterMatrix::from_edges(4, &[(0, 3, Inf), (1, 2, F(4))]);
        assert_eq!(CoxeterMatrix::from_upper_triangle(4, &m.upper_triangle()), m);
    }
}
