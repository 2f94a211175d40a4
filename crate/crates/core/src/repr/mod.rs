//! The Tits representation: reflection matrices, exact enumeration of word
//! balls, the induced action on `R^S / Ker(B)`, and ball-scale checks that
//! no nontrivial element acts as `±I` on that quotient.
//!
//! Matrices act on column vectors and the image of a word `s_1 ... s_k` is
//! `r_{s_1} ... r_{s_k}`, so breadth-first search multiplies on the right and
//! appends letters to words.

mod integral;

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::scalar::{FieldContext, Scalar, ScalarError};
use crate::tits::{identity, mat_mul, mat_vec, transpose, GramForm, KernelBasis, ScalarMatrix};
use integral::{Arith, Coeff, Overflow};

/// Default cap on the number of ball elements.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReprError {
    #[error("ball enumeration exceeded the budget of {budget} elements at length {length}")]
    BudgetExceeded { budget: usize, length: usize },
    #[error("element {word:?} does not fix the kernel of the Tits form pointwise")]
    NotInOrthogonalGroup { word: Vec<usize> },
    #[error("quotient check disagrees with the exact quotient matrix for word {word:?}")]
    InconsistentQuotient { word: Vec<usize> },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Entries {
    Small(Arc<[i64]>),
    Big(Arc<[BigInt]>),
}

/// The image of a group element under the Tits representation, with the
/// ShortLex-least word found for it.
#[derive(Debug, Clone)]
pub struct GroupElement {
    ctx: Arc<FieldContext>,
    n: usize,
    word: Vec<usize>,
    entries: Entries,
}

impl PartialEq for GroupElement {
    /// Equality of matrices; witnessing words are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.ctx == other.ctx && self.big_entries() == other.big_entries()
    }
}

impl GroupElement {
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    fn big_entries(&self) -> Vec<BigInt> {
        match &self.entries {
            Entries::Small(v) => v.iter().map(|&c| BigInt::from(c)).collect(),
            Entries::Big(v) => v.to_vec(),
        }
    }

    /// The exact matrix.
    pub fn matrix(&self) -> ScalarMatrix {
        let d = self.ctx.degree();
        let flat = self.big_entries();
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        let base = (i * self.n + j) * d;
                        Scalar::from_integer_coeffs(&self.ctx, &flat[base..base + d])
                    })
                    .collect()
            })
            .collect()
    }

    /// Canonical dedup key: every entry's coefficient vector, concatenated.
    pub fn key(&self) -> Vec<BigInt> {
        self.big_entries()
    }

    /// `M^T B M = B`, exactly.
    pub fn preserves_form(&self, g: &GramForm) -> bool {
        let m = self.matrix();
        mat_mul(&mat_mul(&transpose(&m), g.entries()), &m) == *g.entries()
    }

    /// `M v = v` for every kernel basis vector.
    pub fn fixes_kernel(&self, k: &KernelBasis) -> bool {
        let m = self.matrix();
        k.vectors.iter().all(|v| mat_vec(&m, v) == *v)
    }

    /// Product `self * other`, with concatenated word (not necessarily reduced).
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        let m = mat_mul(&self.matrix(), &other.matrix());
        let flat: Vec<BigInt> = m
            .iter()
            .flatten()
            .flat_map(|x| {
                x.coeffs().iter().map(|c| {
                    assert!(c.is_integer(), "Tits matrices have integral coefficients");
                    c.to_integer()
                })
            })
            .collect();
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        GroupElement {
            ctx: Arc::clone(&self.ctx),
            n: self.n,
            word,
            entries: Entries::Big(flat.into()),
        }
    }
}

/// `r_s(v) = v - 2B(e_s, v) e_s` as a group element.
pub fn reflection(s: usize, g: &GramForm) -> GroupElement {
    assert!(s < g.rank(), "generator index out of range");
    let arith = Arith::<BigInt>::new(g).expect("BigInt arithmetic does not overflow");
    let m = arith
        .right_mul_generator(&arith.identity(), s)
        .expect("BigInt arithmetic does not overflow");
    GroupElement {
        ctx: Arc::clone(g.context()),
        n: g.rank(),
        word: vec![s],
        entries: Entries::Big(m.into()),
    }
}

/// Knobs for [`enumerate_ball`].
#[derive(Debug, Clone, Copy)]
pub struct BallOptions {
    pub budget: usize,
    /// Compute each level's products on the rayon pool. The element set and
    /// witnessing words do not depend on this.
    pub parallel: bool,
}

impl Default for BallOptions {
    fn default() -> Self {
        BallOptions {
            budget: DEFAULT_BUDGET,
            parallel: false,
        }
    }
}

/// All elements of word length at most `radius`.
#[derive(Debug, Clone)]
pub struct Ball {
    pub radius: usize,
    /// In BFS order: by length, then ShortLex order of words.
    pub elements: Vec<GroupElement>,
    /// `level_sizes[k]` elements have length exactly `k`.
    pub level_sizes: Vec<usize>,
    /// True when some level, possibly the one after `radius`, adds nothing:
    /// the whole (finite) group has been listed.
    pub closed: bool,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

enum RunError {
    Overflow,
    Budget { length: usize },
}

impl From<Overflow> for RunError {
    fn from(_: Overflow) -> Self {
        RunError::Overflow
    }
}

struct RawBall<C> {
    elements: Vec<(Arc<[C]>, Vec<usize>)>,
    level_sizes: Vec<usize>,
    closed: bool,
}

fn run_bfs<C: Coeff>(arith: &Arith<C>, radius: usize, opts: BallOptions) -> Result<RawBall<C>, RunError> {
    let gens = arith.n;
    let id: Arc<[C]> = arith.identity().into();
    let mut seen: HashSet<Arc<[C]>> = HashSet::new();
    seen.insert(Arc::clone(&id));
    let mut elements = vec![(id, Vec::new())];
    let mut level_sizes = vec![1];
    let mut frontier = vec![0usize];
    let mut closed = false;

    let expand = |frontier: &[usize], elements: &[(Arc<[C]>, Vec<usize>)]| -> Result<Vec<Vec<C>>, Overflow> {
        let jobs: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&f| (0..gens).map(move |s| (f, s)))
            .collect();
        let product = |&(f, s): &(usize, usize)| arith.right_mul_generator(&elements[f].0, s);
        if opts.parallel {
            jobs.par_iter().map(product).collect()
        } else {
            jobs.iter().map(product).collect()
        }
    };

    for length in 1..=radius {
        let products = expand(&frontier, &elements)?;
        let mut next = Vec::new();
        for (k, prod) in products.into_iter().enumerate() {
            let (parent, s) = (frontier[k / gens], k % gens);
            let prod: Arc<[C]> = prod.into();
            if seen.insert(Arc::clone(&prod)) {
                let mut word = elements[parent].1.clone();
                word.push(s);
                elements.push((prod, word));
                next.push(elements.len() - 1);
                if elements.len() > opts.budget {
                    return Err(RunError::Budget { length });
                }
            }
        }
        if next.is_empty() {
            closed = true;
            break;
        }
        level_sizes.push(next.len());
        frontier = next;
    }
    if !closed {
        closed = true;
        'probe: for &f in &frontier {
            for s in 0..gens {
                let prod = arith.right_mul_generator(&elements[f].0, s)?;
                if !seen.contains(prod.as_slice()) {
                    closed = false;
                    break 'probe;
                }
            }
        }
    }
    Ok(RawBall {
        elements,
        level_sizes,
        closed,
    })
}

fn wrap<C: Coeff>(raw: RawBall<C>, g: &GramForm, radius: usize, to_entries: impl Fn(Arc<[C]>) -> Entries) -> Ball {
    let ctx = g.context();
    Ball {
        radius,
        elements: raw
            .elements
            .into_iter()
            .map(|(m, word)| GroupElement {
                ctx: Arc::clone(ctx),
                n: g.rank(),
                word,
                entries: to_entries(m),
            })
            .collect(),
        level_sizes: raw.level_sizes,
        closed: raw.closed,
    }
}

/// Breadth-first enumeration of all elements of length at most `radius`,
/// deduplicated by exact matrix equality.
///
/// Generators are tried in index order, so the first word recorded for each
/// element is its ShortLex-least word. Fails rather than returning a partial
/// ball once more than `opts.budget` elements are found.
pub fn enumerate_ball(g: &GramForm, radius: usize, opts: BallOptions) -> Result<Ball, ReprError> {
    let budget_err = |length| ReprError::BudgetExceeded {
        budget: opts.budget,
        length,
    };
    if let Ok(arith) = Arith::<i64>::new(g) {
        match run_bfs(&arith, radius, opts) {
            Ok(raw) => return Ok(wrap(raw, g, radius, Entries::Small)),
            Err(RunError::Budget { length }) => return Err(budget_err(length)),
            Err(RunError::Overflow) => {}
        }
    }
    let arith = Arith::<BigInt>::new(g).map_err(|_| unreachable_overflow())?;
    match run_bfs(&arith, radius, opts) {
        Ok(raw) => Ok(wrap(raw, g, radius, Entries::Big)),
        Err(RunError::Budget { length }) => Err(budget_err(length)),
        Err(RunError::Overflow) => Err(unreachable_overflow()),
    }
}

fn unreachable_overflow() -> ReprError {
    unreachable!("BigInt arithmetic does not overflow")
}

/// An element together with its action on `R^S / Ker(B)`.
#[derive(Debug, Clone)]
pub struct QuotientAction {
    pub element: GroupElement,
    /// In the coordinates of the complement columns of the kernel basis.
    pub qmatrix: ScalarMatrix,
}

/// The induced action of `g` on the quotient by the kernel.
///
/// Column `j` is the projection of `g e_c` for the `j`-th complement
/// coordinate `c`; the projection subtracts the kernel component exactly.
pub fn quotient_action(g: &GroupElement, k: &KernelBasis) -> Result<QuotientAction, ReprError> {
    let m = g.matrix();
    if k.vectors.iter().any(|v| mat_vec(&m, v) != *v) {
        return Err(ReprError::NotInOrthogonalGroup { word: g.word.clone() });
    }
    let pm = mat_mul(&k.projection, &m);
    let qmatrix = pm
        .iter()
        .map(|row| k.complement_index.iter().map(|&c| row[c].clone()).collect())
        .collect();
    Ok(QuotientAction {
        element: g.clone(),
        qmatrix,
    })
}

/// The non-degenerate form induced on the quotient, in complement coordinates.
pub fn quotient_form(g: &GramForm, k: &KernelBasis) -> ScalarMatrix {
    k.complement_index
        .iter()
        .map(|&a| k.complement_index.iter().map(|&b| g.entry(a, b).clone()).collect())
        .collect()
}

fn is_scalar_identity(q: &ScalarMatrix, negate: bool) -> bool {
    q.iter().enumerate().all(|(i, row)| {
        row.iter().enumerate().all(|(j, x)| {
            if i != j {
                x.is_zero()
            } else if negate {
                (-x).is_one()
            } else {
                x.is_one()
            }
        })
    })
}

/// Whether `g` lies in `T_f`: it fixes the kernel and acts trivially on the
/// quotient.
pub fn in_tf(g: &GroupElement, k: &KernelBasis) -> Result<bool, ReprError> {
    Ok(is_scalar_identity(&quotient_action(g, k)?.qmatrix, false))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    /// Quotient matrix is the identity: a nontrivial element of `T_f`.
    #[serde(rename = "identity")]
    Identity,
    /// Quotient matrix is `-I`: trivial in the projective quotient.
    #[serde(rename = "minus_identity")]
    MinusIdentity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub word: Vec<usize>,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaithfulnessReport {
    pub radius: usize,
    /// Non-identity elements examined.
    pub checked: usize,
    pub closed: bool,
    pub violations: Vec<Violation>,
}

fn flag<C: Coeff>(arith: &Arith<C>, m: &[C]) -> Result<Option<ViolationKind>, Overflow> {
    if arith.acts_as_scalar_on_quotient(m, false)? {
        return Ok(Some(ViolationKind::Identity));
    }
    if arith.acts_as_scalar_on_quotient(m, true)? {
        return Ok(Some(ViolationKind::MinusIdentity));
    }
    Ok(None)
}

/// Enumerates the ball of the given radius and reports every non-identity
/// element whose quotient matrix is `I` or `-I`.
///
/// Screening uses the integral test `B (g ∓ I) = 0`; each hit is confirmed
/// against the exact quotient matrix.
pub fn verify_reduced_faithful(
    g: &GramForm,
    k: &KernelBasis,
    radius: usize,
    opts: BallOptions,
) -> Result<FaithfulnessReport, ReprError> {
    let ball = enumerate_ball(g, radius, opts)?;
    let small = Arith::<i64>::new(g).ok();
    let big = Arith::<BigInt>::new(g).map_err(|_| unreachable_overflow())?;
    let mut violations = Vec::new();
    for el in ball.elements.iter().skip(1) {
        let hit = match (&el.entries, &small) {
            (Entries::Small(m), Some(a)) => match flag(a, m) {
                Ok(h) => h,
                Err(Overflow) => flag(&big, &integral::to_big(m)).map_err(|_| unreachable_overflow())?,
            },
            _ => flag(&big, &el.big_entries()).map_err(|_| unreachable_overflow())?,
        };
        if let Some(kind) = hit {
            let q = quotient_action(el, k)?;
            if !is_scalar_identity(&q.qmatrix, kind == ViolationKind::MinusIdentity) {
                return Err(ReprError::InconsistentQuotient { word: el.word.clone() });
            }
            violations.push(Violation {
                word: el.word.clone(),
                kind,
            });
        }
    }
    Ok(FaithfulnessReport {
        radius,
        checked: ball.len() - 1,
        closed: ball.closed,
        violations,
    })
}

/// Multiplicative order of `(r_s r_t)`, searched up to `limit`.
pub fn dihedral_order(g: &GramForm, s: usize, t: usize, limit: usize) -> Option<usize> {
    let rs = reflection(s, g).matrix();
    let rt = reflection(t, g).matrix();
    let prod = mat_mul(&rs, &rt);
    let id = identity(g.context(), g.rank());
    let mut acc = prod.clone();
    for k in 1..=limit {
        if acc == id {
            return Some(k);
        }
        acc = mat_mul(&acc, &prod);
    }
    None
}
