//! Dense univariate polynomials, coefficients stored lowest degree first.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Exact quotient of `num` by the monic integer polynomial `den`.
///
/// Panics if the division leaves a remainder; callers only divide when the
/// divisor is known to be a factor.
fn div_exact_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().is_some_and(One::is_one), "divisor must be monic");
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let lead = rem[i + dd].clone();
        if lead.is_zero() {
            continue;
        }
        for (j, c) in den.iter().enumerate() {
            rem[i + j] -= &lead * c;
        }
        quot[i] = lead;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// The k-th cyclotomic polynomial, by dividing `x^k - 1` by every proper
/// divisor's cyclotomic factor.
pub(crate) fn cyclotomic(k: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); k as usize + 1];
    p[0] = BigInt::from(-1);
    p[k as usize] = BigInt::one();
    for d in 1..k {
        if k.is_multiple_of(d) {
            p = div_exact_monic(&p, &cyclotomic(d));
        }
    }
    p
}

/// Given a palindromic `P(z)` of degree `2m`, returns `f` with
/// `P(z) = z^m f(z + 1/z)`.
///
/// Uses `z^k + z^-k = D_k(z + 1/z)` with `D_0 = 2`, `D_1 = x`,
/// `D_{k+1} = x D_k - D_{k-1}`.
pub(crate) fn fold_palindromic(p: &[BigInt]) -> Vec<BigInt> {
    assert!(p.len() % 2 == 1, "palindromic polynomial must have even degree");
    let m = (p.len() - 1) / 2;
    let mut f = vec![BigInt::zero(); m + 1];
    f[0] = p[m].clone();
    let mut prev: Vec<BigInt> = vec![BigInt::from(2)];
    let mut cur: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for k in 1..=m {
        let c = &p[m + k];
        for (i, d) in cur.iter().enumerate() {
            f[i] += c * d;
        }
        let mut next = vec![BigInt::zero(); cur.len() + 1];
        for (i, d) in cur.iter().enumerate() {
            next[i + 1] += d;
        }
        for (i, d) in prev.iter().enumerate() {
            next[i] -= d;
        }
        prev = cur;
        cur = next;
    }
    f
}

/// Chebyshev-style polynomials `D_0..=D_k` as integer coefficient vectors.
pub(crate) fn dickson_upto(k: usize) -> Vec<Vec<BigInt>> {
    let mut out = vec![vec![BigInt::from(2)], vec![BigInt::zero(), BigInt::one()]];
    while out.len() <= k {
        let a = &out[out.len() - 1];
        let b = &out[out.len() - 2];
        let mut next = vec![BigInt::zero(); a.len() + 1];
        for (i, d) in a.iter().enumerate() {
            next[i + 1] += d;
        }
        for (i, d) in b.iter().enumerate() {
            next[i] -= d;
        }
        out.push(next);
    }
    out.truncate(k + 1);
    out
}

/// Remainder of `p` modulo the monic polynomial `m`, padded to `deg(m)` terms.
pub(crate) fn reduce_rational(mut p: Vec<BigRational>, m: &[BigInt]) -> Vec<BigRational> {
    let d = m.len() - 1;
    while p.len() > d {
        let lead = p.pop().expect("non-empty");
        if lead.is_zero() {
            continue;
        }
        let base = p.len() - d;
        for (j, c) in m[..d].iter().enumerate() {
            p[base + j] -= &lead * BigRational::from_integer(c.clone());
        }
    }
    p.resize(d, BigRational::zero());
    p
}

/// Integer analogue of [`reduce_rational`].
pub(crate) fn reduce_integer(mut p: Vec<BigInt>, m: &[BigInt]) -> Vec<BigInt> {
    let d = m.len() - 1;
    while p.len() > d {
        let lead = p.pop().expect("non-empty");
        if lead.is_zero() {
            continue;
        }
        let base = p.len() - d;
        for (j, c) in m[..d].iter().enumerate() {
            p[base + j] -= &lead * c;
        }
    }
    p.resize(d, BigInt::zero());
    p
}

pub(crate) fn mul_rational(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `a * b mod m`, computed over a common denominator so that only the final
/// coefficients pay for a gcd.
pub(crate) fn mul_mod_rational(a: &[BigRational], b: &[BigRational], m: &[BigInt]) -> Vec<BigRational> {
    let (na, da) = clear_denominators(a);
    let (nb, db) = clear_denominators(b);
    let mut out = vec![BigInt::zero(); (a.len() + b.len()).saturating_sub(1)];
    for (i, x) in na.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in nb.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    let den = da * db;
    let out = reduce_integer(out, m);
    if den.is_one() {
        return out.into_iter().map(BigRational::from_integer).collect();
    }
    out.into_iter().map(|c| BigRational::new(c, den.clone())).collect()
}

fn clear_denominators(a: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    use num_integer::Integer;
    let den = a.iter().fold(BigInt::one(), |acc, c| {
        if c.denom().is_one() {
            acc
        } else {
            acc.lcm(c.denom())
        }
    });
    let nums = a.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (nums, den)
}

fn sub_scaled(a: &mut Vec<BigRational>, b: &[BigRational], scale: &BigRational, shift: usize) {
    if a.len() < b.len() + shift {
        a.resize(b.len() + shift, BigRational::zero());
    }
    for (i, y) in b.iter().enumerate() {
        a[i + shift] -= scale * y;
    }
    trim(a);
}

fn divmod_rational(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b.last().expect("non-zero divisor").clone();
    let mut quot = vec![BigRational::zero(); rem.len().saturating_sub(db)];
    while rem.len() > db {
        let shift = rem.len() - 1 - db;
        let q = rem.last().expect("non-empty") / &lead;
        sub_scaled(&mut rem, b, &q, shift);
        quot[shift] = q;
    }
    (quot, rem)
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm over Q.
///
/// Returns `None` when `a` shares a factor with `m`, which for an irreducible
/// modulus means `a` is zero.
pub(crate) fn inverse_mod(a: &[BigRational], m: &[BigInt]) -> Option<Vec<BigRational>> {
    let mut r0: Vec<BigRational> = m.iter().cloned().map(BigRational::from_integer).collect();
    let mut r1 = a.to_vec();
    trim(&mut r1);
    if r1.is_empty() {
        return None;
    }
    let mut t0: Vec<BigRational> = Vec::new();
    let mut t1: Vec<BigRational> = vec![BigRational::one()];
    while !r1.is_empty() {
        let (q, r) = divmod_rational(&r0, &r1);
        let qt = mul_rational(&q, &t1);
        let mut t2 = t0.clone();
        if t2.len() < qt.len() {
            t2.resize(qt.len(), BigRational::zero());
        }
        for (i, c) in qt.iter().enumerate() {
            t2[i] -= c;
        }
        trim(&mut t2);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t2;
    }
    // r0 is the gcd; it must be a nonzero constant.
    if r0.len() != 1 {
        return None;
    }
    let c = r0[0].clone();
    Some(t0.into_iter().map(|x| x / &c).collect())
}

/// Value of an integer polynomial at a rational point.
pub(crate) fn eval_integer_at(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// Interval image of `p` over `[lo, hi]` by interval Horner evaluation.
pub(crate) fn eval_interval(
    p: &[BigRational],
    lo: &BigRational,
    hi: &BigRational,
) -> (BigRational, BigRational) {
    let mut a = BigRational::zero();
    let mut b = BigRational::zero();
    for c in p.iter().rev() {
        let products = [&a * lo, &a * hi, &b * lo, &b * hi];
        let mut min = products[0].clone();
        let mut max = products[0].clone();
        for v in &products[1..] {
            if *v < min {
                min = v.clone();
            }
            if *v > max {
                max = v.clone();
            }
        }
        a = min + c;
        b = max + c;
    }
    (a, b)
}

pub(crate) fn is_monic_integer(p: &[BigInt]) -> bool {
    p.last().is_some_and(One::is_one)
}
