//! Fixtures and independent oracles shared by the integration tests.
//!
//! Nothing here calls into the library's arithmetic: the float and
//! fixed-point oracles rebuild the Tits form from the labels directly.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::path::PathBuf;

use coxforge::coxeter::{CoxeterMatrix, Label};
use coxforge::dsl;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub const FIXTURES: &[&str] = &[
    "triangle_inf",
    "hexagon_inf",
    "five_vertex",
    "path_inf_3_inf",
    "a_tilde_1",
    "a_tilde_2",
    "product",
    "h3",
];

/// The irreducible non-affine fixtures.
pub const NON_AFFINE: &[&str] = &["triangle_inf", "hexagon_inf", "five_vertex", "path_inf_3_inf"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.cox"))
}

pub fn fixture(name: &str) -> CoxeterMatrix {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    dsl::parse(&text).expect("fixture parses")
}

/// The five-vertex family: top-left `v0`, bottom row `v1 v2 v3`, top-right `v4`.
pub fn five_vertex(a: Label, b: Label, c: Label, d: Label) -> CoxeterMatrix {
    CoxeterMatrix::from_edges(
        5,
        &[
            (0, 1, Label::Infinity),
            (1, 2, c),
            (2, 3, d),
            (3, 4, Label::Infinity),
            (0, 2, a),
            (2, 4, b),
        ],
    )
}

pub fn cycle(n: usize, label: Label) -> CoxeterMatrix {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, label)).collect();
    CoxeterMatrix::from_edges(n, &edges)
}

pub fn path(labels: &[Label]) -> CoxeterMatrix {
    let edges: Vec<_> = labels.iter().enumerate().map(|(i, &l)| (i, i + 1, l)).collect();
    CoxeterMatrix::from_edges(labels.len() + 1, &edges)
}

/// Affine `Ã_n`: a cycle of `n + 1` threes, or a single `inf` edge for `n = 1`.
pub fn a_tilde(n: usize) -> CoxeterMatrix {
    if n == 1 {
        path(&[Label::Infinity])
    } else {
        cycle(n + 1, Label::Finite(3))
    }
}

// ---------------------------------------------------------------------------
// Float oracle: cyclic Jacobi eigenvalues of the Gram matrix.

pub fn float_gram(m: &CoxeterMatrix) -> Vec<Vec<f64>> {
    let n = m.rank();
    (0..n)
        .map(|s| {
            (0..n)
                .map(|t| match m.label(s, t) {
                    Label::Infinity => -1.0,
                    Label::Finite(k) => -(std::f64::consts::PI / k as f64).cos(),
                })
                .collect()
        })
        .collect()
}

pub fn jacobi_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// `(p, q, r)` from float eigenvalues, or `None` when some eigenvalue sits
/// too close to the zero threshold to call.
pub fn float_signature(m: &CoxeterMatrix) -> Option<(usize, usize, usize)> {
    let eig = jacobi_eigenvalues(&float_gram(m));
    let (mut p, mut q, mut r) = (0, 0, 0);
    for e in eig {
        if e.abs() < 1e-9 {
            r += 1;
        } else if e.abs() < 1e-6 {
            return None;
        } else if e > 0.0 {
            p += 1;
        } else {
            q += 1;
        }
    }
    Some((p, q, r))
}

// ---------------------------------------------------------------------------
// Fixed-point oracle with `DIGITS` decimal digits.

pub const DIGITS: u32 = 110;

/// A real number `v / 10^DIGITS`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed(pub BigInt);

pub fn scale() -> BigInt {
    BigInt::from(10).pow(DIGITS)
}

impl Fixed {
    pub fn from_ratio(p: &BigInt, q: &BigInt) -> Fixed {
        Fixed((p * scale()).div_floor(q))
    }

    pub fn from_int(v: i64) -> Fixed {
        Fixed(BigInt::from(v) * scale())
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0).div_floor(&scale()))
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * scale()).div_floor(&o.0))
    }

    /// Sign, treating magnitudes below `10^-digits` as zero.
    pub fn sign_at(&self, digits: u32) -> Ordering {
        let eps = BigInt::from(10).pow(DIGITS - digits);
        if self.0.abs() < eps {
            Ordering::Equal
        } else if self.0.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

fn atan_inv(x: i64) -> Fixed {
    // atan(1/x) = sum (-1)^k / ((2k+1) x^(2k+1))
    let s = scale() * BigInt::from(1000);
    let x = BigInt::from(x);
    let x2 = &x * &x;
    let mut power = &s / &x;
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    Fixed(sum / BigInt::from(1000))
}

pub fn pi() -> Fixed {
    let a = atan_inv(5);
    let b = atan_inv(239);
    Fixed(a.0 * 16 - b.0 * 4)
}

pub fn cos(x: &Fixed) -> Fixed {
    let x2 = x.mul(x);
    let mut term = Fixed::from_int(1);
    let mut sum = term.clone();
    let mut k = 1i64;
    while !term.0.is_zero() {
        term = Fixed(-(term.mul(&x2).0) / BigInt::from((2 * k - 1) * (2 * k)));
        sum = sum.add(&term);
        k += 1;
    }
    sum
}

/// `2cos(pi/n)`.
pub fn two_cos_pi_over(n: u64) -> Fixed {
    let x = Fixed(pi().0 / BigInt::from(n));
    let c = cos(&x);
    Fixed(c.0 * 2)
}

/// Value of the power-basis coefficients `(num_i / den_i)` at `gamma`.
pub fn eval_coeffs(coeffs: &[(BigInt, BigInt)], gamma: &Fixed) -> Fixed {
    let mut acc = Fixed::from_int(0);
    let mut power = Fixed::from_int(1);
    for (p, q) in coeffs {
        let term = Fixed((&power.0 * p).div_floor(q));
        acc = acc.add(&term);
        power = power.mul(gamma);
    }
    acc
}

pub fn one() -> BigInt {
    BigInt::one()
}
