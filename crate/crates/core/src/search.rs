//! Exhaustive enumeration of connected Coxeter diagrams up to isomorphism,
//! and a filtered "hunt" over them.

use std::fmt;
use std::ops::RangeInclusive;

use rayon::prelude::*;

use crate::classify::{classify_component, ComponentClass, Kind};
use crate::coxeter::{CoxeterMatrix, Label};
use crate::scalar::ScalarError;
use crate::tits::{gram, inertia_by_charpoly, Signature};

/// Largest rank [`enumerate`] accepts.
pub const MAX_SEARCH_RANK: usize = 9;

pub fn default_alphabet() -> Vec<Label> {
    [2, 3, 4, 5, 6]
        .into_iter()
        .map(Label::Finite)
        .chain([Label::Infinity])
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("search rank {0} exceeds the maximum of {MAX_SEARCH_RANK}")]
    RankTooLarge(usize),
    #[error("empty rank range")]
    EmptyRange,
    #[error("alphabet needs at least one label of 3 or more")]
    NoEdgeLabel,
    #[error("alphabet label {0} is below 2")]
    LabelTooSmall(Label),
    #[error("invalid worker count 0")]
    NoWorkers,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("signature routes disagree on {upper:?}: {elimination} vs {charpoly}")]
    Inconsistent {
        upper: Vec<Label>,
        elimination: Signature,
        charpoly: Signature,
    },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// Parses a comma-separated label list such as `2,3,inf`. The result is
/// sorted and free of duplicates.
pub fn parse_alphabet(s: &str) -> Result<Vec<Label>, String> {
    let mut out = Vec::new();
    for (i, part) in s.split(',').enumerate() {
        let part = part.trim();
        if part.is_empty() {
            return Err(format!("empty entry at position {}", i + 1));
        }
        let label: Label = part.parse().map_err(|e| format!("{e}"))?;
        if label < Label::Finite(2) {
            return Err(format!("label {label} is below 2"));
        }
        out.push(label);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    P,
    Q,
    R,
    N,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    fn holds<T: Ord>(self, a: T, b: T) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    Count(Var, CmpOp, usize),
    /// Only `==` and `!=` are accepted for kinds.
    Kind(CmpOp, Kind),
}

/// A conjunction of clauses; the empty predicate accepts everything.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Predicate {
    pub clauses: Vec<Clause>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("column {column}: {message}")]
pub struct PredicateError {
    pub column: usize,
    pub message: String,
}

impl Predicate {
    pub fn accepts(&self, n: usize, sig: Signature, kind: Kind) -> bool {
        self.clauses.iter().all(|c| match *c {
            Clause::Count(var, op, v) => {
                let x = match var {
                    Var::P => sig.p,
                    Var::Q => sig.q,
                    Var::R => sig.r,
                    Var::N => n,
                };
                op.holds(x, v)
            }
            Clause::Kind(op, k) => op.holds(kind as u8, k as u8),
        })
    }

    /// Parses `clause (and clause)*` where a clause is `VAR OP INT` with
    /// `VAR` one of `p q r n`, or `kind == KIND`/`kind != KIND`.
    pub fn parse(s: &str) -> Result<Predicate, PredicateError> {
        let toks = tokenize(s)?;
        let mut clauses = Vec::new();
        let mut i = 0;
        let err = |column: usize, message: String| PredicateError { column, message };
        let end = s.chars().count() + 1;
        while i < toks.len() {
            if !clauses.is_empty() {
                match &toks[i] {
                    (Tok::Word(w), _) if w == "and" => i += 1,
                    (t, c) => return Err(err(*c, format!("expected `and`, found {t}"))),
                }
            }
            let (var, vcol) = match toks.get(i) {
                Some((Tok::Word(w), c)) => (w.as_str(), *c),
                Some((t, c)) => return Err(err(*c, format!("expected a variable, found {t}"))),
                None => return Err(err(end, "expected a clause after `and`".into())),
            };
            let (op, ocol) = match toks.get(i + 1) {
                Some((Tok::Op(op), c)) => (*op, *c),
                Some((t, c)) => return Err(err(*c, format!("expected a comparison, found {t}"))),
                None => return Err(err(end, "expected a comparison".into())),
            };
            let (rhs, rcol) = match toks.get(i + 2) {
                Some((t, c)) => (t, *c),
                None => return Err(err(end, "expected a value".into())),
            };
            let clause = if var == "kind" {
                if !matches!(op, CmpOp::Eq | CmpOp::Ne) {
                    return Err(err(ocol, "kind only supports == and !=".into()));
                }
                let kind = match rhs {
                    Tok::Word(w) => match w.to_ascii_lowercase().as_str() {
                        "spherical" => Kind::Spherical,
                        "affine" => Kind::Affine,
                        "nonaffine" | "non-affine" | "non_affine" => Kind::NonAffine,
                        _ => return Err(err(rcol, format!("unknown kind `{w}`"))),
                    },
                    t => return Err(err(rcol, format!("expected a kind, found {t}"))),
                };
                Clause::Kind(op, kind)
            } else {
                let v = match var {
                    "p" => Var::P,
                    "q" => Var::Q,
                    "r" => Var::R,
                    "n" => Var::N,
                    _ => return Err(err(vcol, format!("unknown variable `{var}`"))),
                };
                let value = match rhs {
                    Tok::Num(x) => *x,
                    t => return Err(err(rcol, format!("expected an integer, found {t}"))),
                };
                Clause::Count(v, op, value)
            };
            clauses.push(clause);
            i += 3;
        }
        Ok(Predicate { clauses })
    }
}

impl std::str::FromStr for Predicate {
    type Err = PredicateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Predicate::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Num(usize),
    Op(CmpOp),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::Op(_) => f.write_str("an operator"),
        }
    }
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, PredicateError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '-') {
                i += 1;
            }
            out.push((Tok::Word(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let v = text.parse().map_err(|_| PredicateError {
                column: col,
                message: format!("integer `{text}` is too large"),
            })?;
            out.push((Tok::Num(v), col));
        } else {
            let next = chars.get(i + 1).copied();
            let (op, len) = match (c, next) {
                ('=', Some('=')) => (CmpOp::Eq, 2),
                ('!', Some('=')) => (CmpOp::Ne, 2),
                ('<', Some('=')) => (CmpOp::Le, 2),
                ('>', Some('=')) => (CmpOp::Ge, 2),
                ('=', _) => (CmpOp::Eq, 1),
                ('<', _) => (CmpOp::Lt, 1),
                ('>', _) => (CmpOp::Gt, 1),
                _ => {
                    return Err(PredicateError {
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            };
            out.push((Tok::Op(op), col));
            i += len;
        }
    }
    Ok(out)
}

/// Whether `upper` (the strict upper triangle of an `n`-vertex matrix) is
/// lexicographically minimal among all vertex relabellings.
pub fn is_canonical(n: usize, upper: &[Label]) -> bool {
    let m = CoxeterMatrix::from_upper_triangle(n, upper);
    let mut perm = Vec::with_capacity(n);
    let mut used = vec![false; n];
    // Row 0 of the relabelled triangle is known one entry at a time as the
    // permutation is extended, so it can be compared as a prefix.
    fn extend(m: &CoxeterMatrix, upper: &[Label], perm: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let n = m.rank();
        if perm.len() == n {
            let relabelled = upper_of(m, perm);
            return relabelled.as_slice() >= upper;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            let k = perm.len();
            if k >= 1 {
                let entry = m.label(perm[0], v);
                match entry.cmp(&upper[k - 1]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => continue,
                    std::cmp::Ordering::Equal => {}
                }
            }
            perm.push(v);
            used[v] = true;
            let ok = extend(m, upper, perm, used);
            perm.pop();
            used[v] = false;
            if !ok {
                return false;
            }
        }
        true
    }
    extend(&m, upper, &mut perm, &mut used)
}

fn upper_of(m: &CoxeterMatrix, perm: &[usize]) -> Vec<Label> {
    let n = perm.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(m.label(perm[i], perm[j]));
        }
    }
    out
}

/// Lexicographically minimal strict upper triangle over all relabellings.
pub fn canonical_form(m: &CoxeterMatrix) -> Vec<Label> {
    let n = m.rank();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = m.upper_triangle();
    permutations(&mut perm, 0, &mut |p| {
        let u = upper_of(m, p);
        if u < best {
            best = u;
        }
    });
    best
}

fn permutations(perm: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == perm.len() {
        f(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, f);
        perm.swap(k, i);
    }
}

fn connected(n: usize, upper: &[Label]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let idx = |s: usize, t: usize| {
        let (a, b) = if s < t { (s, t) } else { (t, s) };
        a * (2 * n - a - 1) / 2 + (b - a - 1)
    };
    while let Some(s) = stack.pop() {
        for t in 0..n {
            if !seen[t] && upper[idx(s, t)].is_edge() {
                seen[t] = true;
                stack.push(t);
            }
        }
    }
    seen.into_iter().all(|x| x)
}

/// Nondecreasing sequences of length `len` over `alphabet`.
fn sorted_rows(alphabet: &[Label], len: usize) -> Vec<Vec<Label>> {
    fn go(alphabet: &[Label], from: usize, len: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for i in from..alphabet.len() {
            cur.push(alphabet[i]);
            go(alphabet, i, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(alphabet, 0, len, &mut Vec::new(), &mut out);
    out
}

/// Canonical triangles extending a fixed first row.
fn shard(n: usize, alphabet: &[Label], first: &[Label]) -> Vec<Vec<Label>> {
    let rest = n * (n - 1) / 2 - (n - 1);
    let mut digits = vec![0usize; rest];
    let mut out = Vec::new();
    let mut upper: Vec<Label> = first.to_vec();
    upper.resize(n * (n - 1) / 2, alphabet[0]);
    loop {
        for (k, &d) in digits.iter().enumerate() {
            upper[n - 1 + k] = alphabet[d];
        }
        if connected(n, &upper) && is_canonical(n, &upper) {
            out.push(upper.clone());
        }
        // odometer, last entry fastest
        let mut k = rest;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < alphabet.len() {
                break;
            }
            digits[k] = 0;
        }
    }
}

fn validate_alphabet(alphabet: &[Label]) -> Result<Vec<Label>, SearchError> {
    if let Some(&l) = alphabet.iter().find(|l| **l < Label::Finite(2)) {
        return Err(SearchError::LabelTooSmall(l));
    }
    if !alphabet.iter().any(|l| l.is_edge()) {
        return Err(SearchError::NoEdgeLabel);
    }
    let mut a = alphabet.to_vec();
    a.sort();
    a.dedup();
    Ok(a)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool, SearchError> {
    if workers == 0 {
        return Err(SearchError::NoWorkers);
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SearchError::Pool(e.to_string()))
}

/// One representative per isomorphism class of connected `n`-vertex
/// matrices with off-diagonal labels drawn from `alphabet`, each given by its
/// canonical form and sorted by it. The output does not depend on `workers`.
pub fn enumerate(n: usize, alphabet: &[Label], workers: usize) -> Result<Vec<CoxeterMatrix>, SearchError> {
    if n > MAX_SEARCH_RANK {
        return Err(SearchError::RankTooLarge(n));
    }
    let alphabet = validate_alphabet(alphabet)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![CoxeterMatrix::from_edges(1, &[])]);
    }
    let rows = sorted_rows(&alphabet, n - 1);
    let found: Vec<Vec<Vec<Label>>> =
        pool(workers)?.install(|| rows.par_iter().map(|r| shard(n, &alphabet, r)).collect());
    let mut all: Vec<Vec<Label>> = found.into_iter().flatten().collect();
    all.sort();
    Ok(all
        .into_iter()
        .map(|u| CoxeterMatrix::from_upper_triangle(n, &u))
        .collect())
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub ranks: RangeInclusive<usize>,
    pub alphabet: Vec<Label>,
    pub predicate: Predicate,
    pub limit: Option<usize>,
    pub workers: usize,
}

impl SearchSpec {
    pub fn new(ranks: RangeInclusive<usize>) -> Self {
        SearchSpec {
            ranks,
            alphabet: default_alphabet(),
            predicate: Predicate::default(),
            limit: None,
            workers: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Hit {
    pub matrix: CoxeterMatrix,
    pub canonical: Vec<Label>,
    pub class: ComponentClass,
}

#[derive(Debug, Clone)]
pub struct HuntResult {
    /// Sorted by rank, then canonical form.
    pub hits: Vec<Hit>,
    /// Number of candidate classes examined.
    pub examined: usize,
    /// Whether more hits existed than `limit` allowed.
    pub truncated: bool,
}

/// Classifies every enumerated diagram and keeps those satisfying the
/// predicate. Each kept signature is recomputed by the characteristic
/// polynomial route and must agree.
pub fn hunt(spec: &SearchSpec) -> Result<HuntResult, SearchError> {
    if spec.ranks.is_empty() {
        return Err(SearchError::EmptyRange);
    }
    if *spec.ranks.end() > MAX_SEARCH_RANK {
        return Err(SearchError::RankTooLarge(*spec.ranks.end()));
    }
    let pool = pool(spec.workers)?;
    let mut hits = Vec::new();
    let mut examined = 0;
    for n in spec.ranks.clone() {
        let candidates = enumerate(n, &spec.alphabet, spec.workers)?;
        examined += candidates.len();
        let results: Vec<Result<Option<Hit>, SearchError>> = pool.install(|| {
            candidates
                .into_par_iter()
                .map(|m| {
                    let class = classify_component(&m)?;
                    if !spec.predicate.accepts(n, class.signature, class.kind) {
                        return Ok(None);
                    }
                    let check = inertia_by_charpoly(gram(&m)?.entries());
                    if check != class.signature {
                        return Err(SearchError::Inconsistent {
                            upper: m.upper_triangle(),
                            elimination: class.signature,
                            charpoly: check,
                        });
                    }
                    Ok(Some(Hit {
                        canonical: m.upper_triangle(),
                        matrix: m,
                        class,
                    }))
                })
                .collect()
        });
        for r in results {
            if let Some(hit) = r? {
                hits.push(hit);
            }
        }
    }
    let mut truncated = false;
    if let Some(limit) = spec.limit {
        if hits.len() > limit {
            hits.truncate(limit);
            truncated = true;
        }
    }
    Ok(HuntResult {
        hits,
        examined,
        truncated,
    })
}
