//! Matrices over `Z[gamma]` for the enumeration hot path.
//!
//! Reflection matrices have entries `0`, `±1` and `2cos(pi/m)`, all algebraic
//! integers, so every group element has integer power-basis coefficients.
//! Elements are stored flat as `n * n * degree` coefficients. The `i64`
//! instantiation reports overflow, and callers retry with `BigInt`.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::poly;
use crate::tits::GramForm;

pub(crate) trait Coeff: Clone + Eq + Hash + Debug + Send + Sync {
    fn zero() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
}

impl Coeff for i64 {
    fn zero() -> Self {
        0
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i64()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
}

impl Coeff for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
}

/// Multiplication by a fixed element of `Z[gamma]`.
#[derive(Debug, Clone)]
pub(crate) enum Multiplier<C> {
    /// A rational integer.
    Integer(C),
    /// Row-major `degree x degree` matrix of the multiplication map.
    Matrix(Vec<C>),
}

impl<C: Coeff> Multiplier<C> {
    fn new(value: &[BigInt], minpoly: &[BigInt]) -> Option<Self> {
        let d = value.len();
        if value[1..].iter().all(Zero::is_zero) {
            return Some(Multiplier::Integer(C::from_big(&value[0])?));
        }
        // column l holds value * gamma^l
        let mut m = vec![C::zero(); d * d];
        for l in 0..d {
            let mut shifted = vec![<BigInt as Zero>::zero(); l];
            shifted.extend_from_slice(value);
            let col = poly::reduce_integer(shifted, minpoly);
            for k in 0..d {
                m[k * d + l] = C::from_big(&col[k])?;
            }
        }
        Some(Multiplier::Matrix(m))
    }

    /// `acc += self * x`, coefficient slices of length `d`.
    fn mul_add(&self, x: &[C], acc: &mut [C]) -> Option<()> {
        match self {
            Multiplier::Integer(c) => {
                if c.is_zero() {
                    return Some(());
                }
                for (a, v) in acc.iter_mut().zip(x) {
                    if !v.is_zero() {
                        *a = a.add(&c.mul(v)?)?;
                    }
                }
            }
            Multiplier::Matrix(m) => {
                let d = x.len();
                for (l, v) in x.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    for k in 0..d {
                        let c = &m[k * d + l];
                        if !c.is_zero() {
                            acc[k] = acc[k].add(&c.mul(v)?)?;
                        }
                    }
                }
            }
        }
        Some(())
    }
}

/// Precomputed data for right multiplication by generators and for the
/// kernel-of-quotient test.
#[derive(Debug, Clone)]
pub(crate) struct Arith<C> {
    pub n: usize,
    pub d: usize,
    /// For generator `s`: `(t, 2cos(pi/m_st))` over neighbours `t`.
    neighbours: Vec<Vec<(usize, Multiplier<C>)>>,
    /// `2B` entry by entry.
    two_b: Vec<Multiplier<C>>,
}

/// Raised when an `i64` computation would overflow.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Overflow;

impl<C: Coeff> Arith<C> {
    pub fn new(g: &GramForm) -> Result<Self, Overflow> {
        let m = g.source();
        let ctx = g.context();
        let n = m.rank();
        let d = ctx.degree();
        let mut neighbours = Vec::with_capacity(n);
        let mut two_b = Vec::with_capacity(n * n);
        for s in 0..n {
            let mut nb = Vec::new();
            for t in 0..n {
                let two_cos = ctx
                    .two_cos_label(m.label(s, t))
                    .expect("gram form was built in this field");
                if s != t && m.label(s, t).is_edge() {
                    nb.push((t, Multiplier::new(&two_cos, ctx.minpoly()).ok_or(Overflow)?));
                }
                // 2B(e_s, e_t) = -2cos(pi/m_st); the diagonal label 1 gives 2
                let neg: Vec<BigInt> = two_cos.iter().map(|c| -c).collect();
                two_b.push(Multiplier::new(&neg, ctx.minpoly()).ok_or(Overflow)?);
            }
            neighbours.push(nb);
        }
        Ok(Arith { n, d, neighbours, two_b })
    }

    pub fn identity(&self) -> Vec<C> {
        let mut out = vec![C::zero(); self.n * self.n * self.d];
        let one = C::from_big(&BigInt::from(1)).expect("1 fits");
        for i in 0..self.n {
            out[(i * self.n + i) * self.d] = one.clone();
        }
        out
    }

    fn at(&self, i: usize, j: usize) -> std::ops::Range<usize> {
        let base = (i * self.n + j) * self.d;
        base..base + self.d
    }

    /// `m * r_s`: column `s` negates and each neighbour column `t` gains
    /// `2cos(pi/m_st)` times the old column `s`.
    pub fn right_mul_generator(&self, m: &[C], s: usize) -> Result<Vec<C>, Overflow> {
        let mut out = m.to_vec();
        for i in 0..self.n {
            let col_s = &m[self.at(i, s)];
            for (t, mult) in &self.neighbours[s] {
                let range = self.at(i, *t);
                mult.mul_add(col_s, &mut out[range]).ok_or(Overflow)?;
            }
            let range = self.at(i, s);
            for k in range {
                out[k] = m[k].neg().ok_or(Overflow)?;
            }
        }
        Ok(out)
    }

    /// Whether `B (m - sign * I) = 0`, i.e. `m` acts as `sign * I` on the
    /// quotient by the kernel.
    pub fn acts_as_scalar_on_quotient(&self, m: &[C], negate: bool) -> Result<bool, Overflow> {
        let one = C::from_big(&BigInt::from(1)).expect("1 fits");
        let mut w = vec![C::zero(); self.n * self.d];
        let mut acc = vec![C::zero(); self.d];
        for j in 0..self.n {
            // w = column j of m, minus (or plus) e_j
            for k in 0..self.n {
                w[k * self.d..(k + 1) * self.d].clone_from_slice(&m[self.at(k, j)]);
            }
            let c = &mut w[j * self.d];
            *c = if negate { c.add(&one) } else { c.sub(&one) }.ok_or(Overflow)?;
            for i in 0..self.n {
                acc.iter_mut().for_each(|a| *a = C::zero());
                for k in 0..self.n {
                    self.two_b[i * self.n + k]
                        .mul_add(&w[k * self.d..(k + 1) * self.d], &mut acc)
                        .ok_or(Overflow)?;
                }
                if acc.iter().any(|a| !a.is_zero()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

pub(crate) fn to_big<C: Coeff>(m: &[C]) -> Vec<BigInt> {
    m.iter().map(Coeff::to_big).collect()
}
