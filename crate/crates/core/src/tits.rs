//! The Tits form of a Coxeter matrix: its exact Gram matrix, its signature
//! by congruence diagonalization, and an exact basis of its kernel.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::coxeter::CoxeterMatrix;
use crate::scalar::{FieldContext, Scalar, ScalarError};

/// Square matrix over a single field, row-major.
pub type ScalarMatrix = Vec<Vec<Scalar>>;

pub fn identity(ctx: &Arc<FieldContext>, n: usize) -> ScalarMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Scalar::one(ctx) } else { Scalar::zero(ctx) })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> ScalarMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Scalar::zero(row[0].context());
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&row[k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &[Vec<Scalar>]) -> ScalarMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mat_vec(a: &[Vec<Scalar>], v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(Scalar::zero(v[0].context()), |acc, (x, y)| &acc + &(x * y))
        })
        .collect()
}

/// The Tits form `B(e_s, e_t) = -cos(pi/m_st)` as an exact Gram matrix.
#[derive(Debug, Clone)]
pub struct GramForm {
    ctx: Arc<FieldContext>,
    entries: ScalarMatrix,
    source: CoxeterMatrix,
}

impl GramForm {
    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    pub fn entries(&self) -> &ScalarMatrix {
        &self.entries
    }

    pub fn entry(&self, s: usize, t: usize) -> &Scalar {
        &self.entries[s][t]
    }

    pub fn source(&self) -> &CoxeterMatrix {
        &self.source
    }

    pub fn rank(&self) -> usize {
        self.source.rank()
    }

    /// `B(u, v)`.
    pub fn apply(&self, u: &[Scalar], v: &[Scalar]) -> Scalar {
        let bv = mat_vec(&self.entries, v);
        u.iter()
            .zip(&bv)
            .fold(Scalar::zero(&self.ctx), |acc, (x, y)| &acc + &(x * y))
    }
}

/// Builds the Gram matrix in the field generated by `m`'s labels.
pub fn gram(m: &CoxeterMatrix) -> Result<GramForm, ScalarError> {
    let ctx = FieldContext::from_labels(m.label_set())?;
    gram_in(m, &ctx)
}

/// Builds the Gram matrix in a caller-supplied field.
pub fn gram_in(m: &CoxeterMatrix, ctx: &Arc<FieldContext>) -> Result<GramForm, ScalarError> {
    let n = m.rank();
    let mut entries = Vec::with_capacity(n);
    for s in 0..n {
        let mut row = Vec::with_capacity(n);
        for t in 0..n {
            row.push(Scalar::entry_from_label(m.label(s, t), ctx)?);
        }
        entries.push(row);
    }
    Ok(GramForm {
        ctx: Arc::clone(ctx),
        entries,
        source: m.clone(),
    })
}

/// Positive, negative and zero inertia of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
    pub r: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize, r: usize) -> Self {
        Signature { p, q, r }
    }

    pub fn dimension(&self) -> usize {
        self.p + self.q + self.r
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.p, self.q, self.r)
    }
}

/// Inertia of `g` by symmetric congruence diagonalization.
pub fn signature(g: &GramForm) -> Signature {
    inertia(g.entries())
}

/// Inertia of an arbitrary symmetric matrix over one field.
///
/// Pivots on the first nonzero diagonal entry. When the remaining diagonal
/// vanishes but some `a_ij` does not, adding row/column `j` to `i` makes
/// `a_ii = 2 a_ij` nonzero; the pair then contributes one positive and one
/// negative square.
pub fn inertia(a: &[Vec<Scalar>]) -> Signature {
    let mut a: ScalarMatrix = a.to_vec();
    let mut live: Vec<usize> = (0..a.len()).collect();
    let (mut p, mut q) = (0, 0);
    while !live.is_empty() {
        let pivot = match live.iter().position(|&i| !a[i][i].is_zero()) {
            Some(pos) => pos,
            None => {
                let pair = live.iter().enumerate().find_map(|(x, &i)| {
                    live[x + 1..].iter().find(|&&j| !a[i][j].is_zero()).map(|&j| (x, i, j))
                });
                let Some((x, i, j)) = pair else { break };
                add_congruent(&mut a, &live, i, j);
                x
            }
        };
        let k = live.remove(pivot);
        let d = a[k][k].clone();
        match d.sign() {
            Ordering::Greater => p += 1,
            Ordering::Less => q += 1,
            Ordering::Equal => unreachable!("pivot is nonzero"),
        }
        let dinv = d.inv().expect("nonzero pivot");
        for &i in &live {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] * &dinv;
            for &j in &live {
                if !a[k][j].is_zero() {
                    a[i][j] = &a[i][j] - &(&f * &a[k][j]);
                }
            }
        }
    }
    Signature::new(p, q, live.len())
}

/// Row and column operation `x_i += x_j` restricted to `live`.
fn add_congruent(a: &mut ScalarMatrix, live: &[usize], i: usize, j: usize) {
    for &c in live {
        a[i][c] = &a[i][c] + &a[j][c];
    }
    for &r in live {
        a[r][i] = &a[r][i] + &a[r][j];
    }
}

/// Inertia from the characteristic polynomial.
///
/// A real symmetric matrix has only real eigenvalues, so Descartes' rule of
/// signs is exact: sign changes of `chi(x)` count positive roots and the
/// lowest nonzero coefficient's index is the nullity. Independent of the
/// elimination route in [`inertia`].
pub fn inertia_by_charpoly(a: &[Vec<Scalar>]) -> Signature {
    let n = a.len();
    let coeffs = charpoly(a);
    let r = coeffs.iter().position(|c| !c.is_zero()).unwrap_or(n);
    let signs: Vec<Ordering> = coeffs
        .iter()
        .map(Scalar::sign)
        .filter(|s| *s != Ordering::Equal)
        .collect();
    let p = signs.windows(2).filter(|w| w[0] != w[1]).count();
    Signature::new(p, n - p - r, r)
}

/// Coefficients of `det(xI - A)`, lowest degree first, by Faddeev–LeVerrier.
pub fn charpoly(a: &[Vec<Scalar>]) -> Vec<Scalar> {
    let n = a.len();
    let ctx = Arc::clone(a[0][0].context());
    let mut c = vec![Scalar::zero(&ctx); n + 1];
    c[n] = Scalar::one(&ctx);
    let id = identity(&ctx, n);
    let mut m: ScalarMatrix = vec![vec![Scalar::zero(&ctx); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m);
        for i in 0..n {
            next[i][i] = &next[i][i] + &(&c[n - k + 1] * &id[i][i]);
        }
        m = next;
        let am = mat_mul(a, &m);
        let trace = (0..n).fold(Scalar::zero(&ctx), |acc, i| &acc + &am[i][i]);
        let kq = num_rational::BigRational::from_integer((k as i64).into());
        c[n - k] = -trace.scale(&kq.recip());
    }
    c
}

/// Exact null-space basis of the Gram matrix.
#[derive(Debug, Clone)]
pub struct KernelBasis {
    /// One vector per non-pivot column of the row-reduced Gram matrix.
    pub vectors: Vec<Vec<Scalar>>,
    /// Pivot columns; their coordinate vectors map to a basis of `R^S / Ker(B)`.
    pub complement_index: Vec<usize>,
    /// Nonzero rows of the reduced row echelon form. Row `i` reads off the
    /// quotient coordinate attached to `complement_index[i]`.
    pub projection: ScalarMatrix,
}

impl KernelBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    /// Quotient coordinates of `v` in the basis given by the complement columns.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        mat_vec(&self.projection, v)
    }
}

/// Gauss–Jordan elimination on the Gram matrix.
pub fn kernel(g: &GramForm) -> KernelBasis {
    let (rref, pivots) = row_reduce(g.entries());
    let n = g.rank();
    let ctx = g.context();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let vectors = free
        .iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(ctx); n];
            v[f] = Scalar::one(ctx);
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rref[row][f];
            }
            v
        })
        .collect();
    KernelBasis {
        vectors,
        complement_index: pivots.clone(),
        projection: rref[..pivots.len()].to_vec(),
    }
}

/// Reduced row echelon form and pivot columns.
pub fn row_reduce(a: &[Vec<Scalar>]) -> (ScalarMatrix, Vec<usize>) {
    let mut m: ScalarMatrix = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].inv().expect("nonzero pivot");
        m[r] = m[r].iter().map(|x| x * &inv).collect();
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in 0..cols {
                if !m[r][j].is_zero() {
                    m[i][j] = &m[i][j] - &(&f * &m[r][j]);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}
