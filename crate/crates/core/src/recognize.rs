//! Named spherical and affine types, and recognition of connected diagrams
//! against those catalogs up to isomorphism.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::coxeter::{CoxeterMatrix, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    D,
    E,
    F,
    H,
    I2,
    ATilde,
    BTilde,
    CTilde,
    DTilde,
    ETilde,
    FTilde,
    GTilde,
    Unnamed,
}

impl Family {
    pub fn is_spherical(self) -> bool {
        matches!(self, Family::A | Family::B | Family::D | Family::E | Family::F | Family::H | Family::I2)
    }

    pub fn is_affine(self) -> bool {
        matches!(
            self,
            Family::ATilde
                | Family::BTilde
                | Family::CTilde
                | Family::DTilde
                | Family::ETilde
                | Family::FTilde
                | Family::GTilde
        )
    }
}

/// A catalog name such as `B_4`, `I_2(7)` or `Ã_3`.
///
/// For affine families `rank` is the subscript, one less than the number of
/// generators. For `I_2(m)` the rank is 2 and `label` holds `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NamedType {
    pub family: Family,
    pub rank: u32,
    pub label: Option<u32>,
}

impl NamedType {
    pub const UNNAMED: NamedType = NamedType {
        family: Family::Unnamed,
        rank: 0,
        label: None,
    };

    pub fn new(family: Family, rank: u32) -> Self {
        NamedType { family, rank, label: None }
    }

    pub fn dihedral(m: u32) -> Self {
        NamedType {
            family: Family::I2,
            rank: 2,
            label: Some(m),
        }
    }

    pub fn is_spherical(&self) -> bool {
        self.family.is_spherical()
    }

    pub fn is_affine(&self) -> bool {
        self.family.is_affine()
    }

    /// Number of generators of the named group.
    pub fn generators(&self) -> usize {
        if self.is_affine() {
            self.rank as usize + 1
        } else {
            self.rank as usize
        }
    }

    /// Whether the name is admitted by the catalogs (`B_n` needs `n >= 2`, ...).
    pub fn is_catalogued(&self) -> bool {
        let n = self.rank;
        match self.family {
            Family::A => n >= 1,
            Family::B => n >= 2,
            Family::D => n >= 3,
            Family::E => (6..=8).contains(&n),
            Family::F => n == 4,
            Family::H => n == 3 || n == 4,
            Family::I2 => n == 2 && self.label.is_some_and(|m| m >= 3),
            Family::ATilde => n >= 1,
            Family::BTilde => n >= 3,
            Family::CTilde => n >= 2,
            Family::DTilde => n >= 4,
            Family::ETilde => (6..=8).contains(&n),
            Family::FTilde => n == 4,
            Family::GTilde => n == 2,
            Family::Unnamed => false,
        }
    }

    /// The template matrix for a catalogued name.
    pub fn template(&self) -> Option<CoxeterMatrix> {
        if !self.is_catalogued() {
            return None;
        }
        let n = self.rank as usize;
        let three = Label::Finite(3);
        let four = Label::Finite(4);
        let path = |k: usize, labels: &dyn Fn(usize) -> Label| {
            let edges: Vec<_> = (0..k.saturating_sub(1)).map(|i| (i, i + 1, labels(i))).collect();
            CoxeterMatrix::from_edges(k, &edges)
        };
        let m = match self.family {
            Family::A => path(n, &|_| three),
            Family::B => path(n, &|i| if i + 2 == n { four } else { three }),
            Family::D => branched(n - 3, 1, 1),
            Family::E => branched(1, 2, n - 4),
            Family::F => path(4, &|i| if i == 1 { four } else { three }),
            Family::H => path(n, &|i| if i == 0 { Label::Finite(5) } else { three }),
            Family::I2 => path(2, &|_| Label::Finite(self.label.expect("catalogued"))),
            Family::ATilde if n == 1 => path(2, &|_| Label::Infinity),
            Family::ATilde => {
                let edges: Vec<_> = (0..=n).map(|i| (i, (i + 1) % (n + 1), three)).collect();
                CoxeterMatrix::from_edges(n + 1, &edges)
            }
            Family::BTilde => {
                // path v1..vn, v0 hanging off v2, label 4 on the far end
                let mut edges: Vec<_> = (1..n)
                    .map(|i| (i, i + 1, if i + 1 == n { four } else { three }))
                    .collect();
                edges.push((0, 2, three));
                CoxeterMatrix::from_edges(n + 1, &edges)
            }
            Family::CTilde => path(n + 1, &|i| if i == 0 || i + 1 == n { four } else { three }),
            Family::DTilde => {
                let mut edges: Vec<_> = (1..n - 1).map(|i| (i, i + 1, three)).collect();
                edges.push((0, 2, three));
                edges.push((n, n - 2, three));
                CoxeterMatrix::from_edges(n + 1, &edges)
            }
            Family::ETilde => match n {
                6 => branched(2, 2, 2),
                7 => branched(1, 3, 3),
                _ => branched(1, 2, 5),
            },
            Family::FTilde => path(5, &|i| if i == 2 { four } else { three }),
            Family::GTilde => path(3, &|i| if i == 1 { Label::Finite(6) } else { three }),
            Family::Unnamed => return None,
        };
        Some(m)
    }
}

/// A star with a centre (vertex 0) and three arms of the given lengths, all
/// labels 3.
fn branched(a: usize, b: usize, c: usize) -> CoxeterMatrix {
    let n = 1 + a + b + c;
    let mut edges = Vec::new();
    let mut next = 1;
    for arm in [a, b, c] {
        let mut prev = 0;
        for _ in 0..arm {
            edges.push((prev, next, Label::Finite(3)));
            prev = next;
            next += 1;
        }
    }
    CoxeterMatrix::from_edges(n, &edges)
}

impl fmt::Display for NamedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.rank;
        match self.family {
            Family::A => write!(f, "A_{n}"),
            Family::B => write!(f, "B_{n}"),
            Family::D => write!(f, "D_{n}"),
            Family::E => write!(f, "E_{n}"),
            Family::F => write!(f, "F_{n}"),
            Family::H => write!(f, "H_{n}"),
            Family::I2 => write!(f, "I_2({})", self.label.unwrap_or(0)),
            Family::ATilde => write!(f, "Ã_{n}"),
            Family::BTilde => write!(f, "B̃_{n}"),
            Family::CTilde => write!(f, "C̃_{n}"),
            Family::DTilde => write!(f, "D̃_{n}"),
            Family::ETilde => write!(f, "Ẽ_{n}"),
            Family::FTilde => write!(f, "F̃_{n}"),
            Family::GTilde => write!(f, "G̃_{n}"),
            Family::Unnamed => f.write_str("unnamed"),
        }
    }
}

impl Serialize for NamedType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Candidate names for a connected diagram on `k` generators, in the order
/// they are tried.
fn candidates(k: usize) -> Vec<NamedType> {
    let k32 = k as u32;
    let mut out = vec![NamedType::new(Family::A, k32)];
    if k >= 3 {
        out.push(NamedType::new(Family::B, k32));
    }
    // D_3 is A_3 and is already covered.
    if k >= 4 {
        out.push(NamedType::new(Family::D, k32));
    }
    if (6..=8).contains(&k) {
        out.push(NamedType::new(Family::E, k32));
    }
    if k == 4 {
        out.push(NamedType::new(Family::F, 4));
    }
    if k == 3 || k == 4 {
        out.push(NamedType::new(Family::H, k32));
    }
    if k >= 3 {
        let a = k32 - 1;
        out.push(NamedType::new(Family::ATilde, a));
        for fam in [Family::BTilde, Family::CTilde, Family::DTilde, Family::ETilde, Family::FTilde, Family::GTilde] {
            let t = NamedType::new(fam, a);
            if t.is_catalogued() {
                out.push(t);
            }
        }
    }
    out
}

/// Names a connected Coxeter matrix, or returns [`NamedType::UNNAMED`].
///
/// Rank 2 follows the usual redundancies: label 3 is `A_2`, 4 is `B_2`,
/// other finite labels are `I_2(m)` and infinity is `Ã_1`.
pub fn recognize(m: &CoxeterMatrix) -> NamedType {
    match m.rank() {
        0 => return NamedType::UNNAMED,
        1 => return NamedType::new(Family::A, 1),
        2 => {
            return match m.label(0, 1) {
                Label::Finite(3) => NamedType::new(Family::A, 2),
                Label::Finite(4) => NamedType::new(Family::B, 2),
                Label::Finite(l) if l >= 5 => NamedType::dihedral(l),
                Label::Infinity => NamedType::new(Family::ATilde, 1),
                _ => NamedType::UNNAMED,
            }
        }
        _ => {}
    }
    candidates(m.rank())
        .into_iter()
        .find(|t| t.template().is_some_and(|tm| isomorphic(m, &tm)))
        .unwrap_or(NamedType::UNNAMED)
}

/// Sorted multiset of incident edge labels, used to prune the matcher.
fn vertex_profile(m: &CoxeterMatrix, s: usize) -> Vec<Label> {
    let mut p: Vec<Label> = m.neighbours(s).map(|t| m.label(s, t)).collect();
    p.sort_unstable();
    p
}

/// Whether two Coxeter matrices agree up to simultaneous permutation.
///
/// Backtracking over assignments, restricted to vertices with equal
/// incident-label profiles and checked against every earlier assignment.
pub fn isomorphic(a: &CoxeterMatrix, b: &CoxeterMatrix) -> bool {
    let n = a.rank();
    if n != b.rank() {
        return false;
    }
    let pa: Vec<_> = (0..n).map(|s| vertex_profile(a, s)).collect();
    let pb: Vec<_> = (0..n).map(|s| vertex_profile(b, s)).collect();
    let mut sa = pa.clone();
    let mut sb = pb.clone();
    sa.sort();
    sb.sort();
    if sa != sb {
        return false;
    }
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(a, b, &pa, &pb, 0, &mut image, &mut used)
}

fn extend(
    a: &CoxeterMatrix,
    b: &CoxeterMatrix,
    pa: &[Vec<Label>],
    pb: &[Vec<Label>],
    s: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if s == a.rank() {
        return true;
    }
    for t in 0..b.rank() {
        if used[t] || pa[s] != pb[t] {
            continue;
        }
        if (0..s).any(|u| a.label(s, u) != b.label(t, image[u])) {
            continue;
        }
        image[s] = t;
        used[t] = true;
        if extend(a, b, pa, pb, s + 1, image, used) {
            return true;
        }
        used[t] = false;
    }
    false
}

/// Every spherical template with `rank <= max_rank`; dihedral labels run over
/// `5..=max_dihedral`.
pub fn spherical_catalog(max_rank: u32, max_dihedral: u32) -> Vec<(NamedType, CoxeterMatrix)> {
    let mut out = Vec::new();
    for n in 1..=max_rank {
        for fam in [Family::A, Family::B, Family::D, Family::E, Family::F, Family::H] {
            // D_3 duplicates A_3
            if fam == Family::D && n == 3 {
                continue;
            }
            let t = NamedType::new(fam, n);
            if let Some(m) = t.template() {
                out.push((t, m));
            }
        }
        if n == 2 {
            for l in 5..=max_dihedral {
                let t = NamedType::dihedral(l);
                out.push((t, t.template().expect("catalogued")));
            }
        }
    }
    out
}

/// Every affine template with at most `max_generators` generators.
pub fn affine_catalog(max_generators: u32) -> Vec<(NamedType, CoxeterMatrix)> {
    let mut out = Vec::new();
    for n in 1..max_generators {
        for fam in [
            Family::ATilde,
            Family::BTilde,
            Family::CTilde,
            Family::DTilde,
            Family::ETilde,
            Family::FTilde,
            Family::GTilde,
        ] {
            let t = NamedType::new(fam, n);
            if let Some(m) = t.template() {
                out.push((t, m));
            }
        }
    }
    out
}
