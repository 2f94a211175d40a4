//! Exact arithmetic in the real cyclotomic field `Q(2cos(pi/N))`.
//!
//! A [`FieldContext`] fixes `N` and the minimal polynomial of the generator
//! `gamma = 2cos(pi/N)`. A [`Scalar`] is a polynomial in `gamma` of degree
//! below `deg(minpoly)` with rational coefficients, so equality is equality
//! of coefficient vectors. Signs are certified by interval refinement around
//! `gamma`.

pub(crate) mod poly;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coxeter::Label;

/// Largest `N` accepted by [`FieldContext::for_order`].
pub const DEFAULT_MAX_ORDER: u64 = 2520;

/// Refinement rounds allowed before sign determination gives up.
pub const DEFAULT_PRECISION_CAP: u32 = 12;

/// Environment variable overriding [`DEFAULT_PRECISION_CAP`].
pub const PRECISION_CAP_ENV: &str = "COXFORGE_PRECISION_CAP";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("field order N = {order} exceeds the exact-mode bound {bound}")]
    OrderTooLarge { order: u64, bound: u64 },
    #[error("label {label} does not divide the field order N = {order}")]
    LabelNotInField { label: u32, order: u64 },
    #[error("label set is empty")]
    NoLabels,
    #[error("scalars belong to different fields (N = {0} and N = {1})")]
    ContextMismatch(u64, u64),
}

/// The precision cap in effect: the environment override if it parses,
/// otherwise [`DEFAULT_PRECISION_CAP`].
pub fn precision_cap_from_env() -> u32 {
    static CAP: OnceLock<u32> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(PRECISION_CAP_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_PRECISION_CAP)
    })
}

/// The field `Q(gamma)` with `gamma = 2cos(pi/N)`.
#[derive(Debug)]
pub struct FieldContext {
    order: u64,
    minpoly: Vec<BigInt>,
    // Certified isolating interval for gamma; equal endpoints when gamma is rational.
    gamma_lo: BigRational,
    gamma_hi: BigRational,
    precision_cap: u32,
}

impl PartialEq for FieldContext {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
    }
}

impl Eq for FieldContext {}

impl FieldContext {
    /// Context for the field generated by every `-cos(pi/m)` with `m` in `labels`.
    pub fn from_labels<I>(labels: I) -> Result<Arc<Self>, ScalarError>
    where
        I: IntoIterator<Item = Label>,
    {
        let mut order: u64 = 1;
        let mut any = false;
        for label in labels {
            any = true;
            if let Label::Finite(m) = label {
                if m >= 3 {
                    order = order.lcm(&u64::from(m));
                    if order > DEFAULT_MAX_ORDER {
                        return Err(ScalarError::OrderTooLarge {
                            order,
                            bound: DEFAULT_MAX_ORDER,
                        });
                    }
                }
            }
        }
        if !any {
            return Err(ScalarError::NoLabels);
        }
        Self::for_order(order)
    }

    /// Context with an explicit `N`.
    pub fn for_order(order: u64) -> Result<Arc<Self>, ScalarError> {
        Self::with_options(order, DEFAULT_MAX_ORDER, precision_cap_from_env())
    }

    pub fn with_options(order: u64, max_order: u64, precision_cap: u32) -> Result<Arc<Self>, ScalarError> {
        assert!(order >= 1, "field order must be positive");
        if order > max_order {
            return Err(ScalarError::OrderTooLarge {
                order,
                bound: max_order,
            });
        }
        let minpoly = if order == 1 {
            // gamma = 2cos(pi) = -2
            vec![BigInt::from(2), BigInt::one()]
        } else {
            poly::fold_palindromic(&poly::cyclotomic(2 * order))
        };
        debug_assert!(poly::is_monic_integer(&minpoly));
        let (gamma_lo, gamma_hi) = isolate_gamma(order, &minpoly);
        Ok(Arc::new(FieldContext {
            order,
            minpoly,
            gamma_lo,
            gamma_hi,
            precision_cap,
        }))
    }

    /// `N`, the lcm of the finite labels.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Minimal polynomial of `gamma`, lowest degree coefficient first.
    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn precision_cap(&self) -> u32 {
        self.precision_cap
    }

    /// Certified interval containing `gamma`.
    pub fn gamma_bracket(&self) -> (&BigRational, &BigRational) {
        (&self.gamma_lo, &self.gamma_hi)
    }

    /// Whether `-cos(pi/m)` lies in this field under the one-context-per-matrix rule.
    pub fn contains_label(&self, label: Label) -> bool {
        match label {
            Label::Infinity => true,
            Label::Finite(m) => m <= 2 || self.order.is_multiple_of(u64::from(m)),
        }
    }

    /// `2cos(k pi / N)` as an integer coefficient vector in the power basis of gamma.
    pub fn two_cos_multiple(&self, k: u64) -> Vec<BigInt> {
        let d = poly::dickson_upto(k as usize).pop().expect("k+1 polynomials");
        poly::reduce_integer(d, &self.minpoly)
    }

    /// `2cos(pi/m)` as integer coefficients, for a label admitted by this field.
    /// Infinity maps to `2` and `m = 1` to `-2`.
    pub fn two_cos_label(&self, label: Label) -> Result<Vec<BigInt>, ScalarError> {
        let d = self.degree();
        let constant = |c: i64| {
            let mut v = vec![BigInt::zero(); d];
            v[0] = BigInt::from(c);
            v
        };
        match label {
            Label::Infinity => Ok(constant(2)),
            Label::Finite(1) => Ok(constant(-2)),
            Label::Finite(2) => Ok(constant(0)),
            Label::Finite(m) => {
                if !self.contains_label(label) {
                    return Err(ScalarError::LabelNotInField {
                        label: m,
                        order: self.order,
                    });
                }
                Ok(self.two_cos_multiple(self.order / u64::from(m)))
            }
        }
    }
}

/// Brackets the largest real root of `minpoly`, which is `2cos(pi/N)`.
///
/// The other roots are `2cos(k pi/N)` with `k` odd and coprime to `N`, so the
/// nearest one sits at least `4 sin(2pi/N) sin(pi/N)` away; for `N` within the
/// exact-mode bound that dwarfs the few-ulp padding, and a sign change of the
/// minimal polynomial across the bracket certifies the root.
fn isolate_gamma(order: u64, minpoly: &[BigInt]) -> (BigRational, BigRational) {
    if minpoly.len() == 2 {
        let root = BigRational::from_integer(-minpoly[0].clone());
        return (root.clone(), root);
    }
    let approx = 2.0 * (std::f64::consts::PI / order as f64).cos();
    let mut pad = f64::EPSILON * approx.abs().max(1.0) * 4.0;
    loop {
        let lo = BigRational::from_float(approx - pad).expect("finite");
        let hi = BigRational::from_float(approx + pad).expect("finite");
        let flo = poly::eval_integer_at(minpoly, &lo);
        let fhi = poly::eval_integer_at(minpoly, &hi);
        if flo.signum() * fhi.signum() < BigRational::zero() {
            return (lo, hi);
        }
        pad *= 2.0;
        assert!(pad < 1e-3, "failed to isolate 2cos(pi/{order})");
    }
}

/// An element of a [`FieldContext`].
#[derive(Clone)]
pub struct Scalar {
    ctx: Arc<FieldContext>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.order == other.ctx.order && self.coeffs == other.coeffs
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl Scalar {
    pub fn zero(ctx: &Arc<FieldContext>) -> Self {
        Scalar {
            ctx: Arc::clone(ctx),
            coeffs: vec![BigRational::zero(); ctx.degree()],
        }
    }

    pub fn one(ctx: &Arc<FieldContext>) -> Self {
        Self::from_rational(ctx, BigRational::one())
    }

    pub fn from_integer(ctx: &Arc<FieldContext>, v: i64) -> Self {
        Self::from_rational(ctx, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(ctx: &Arc<FieldContext>, v: BigRational) -> Self {
        let mut s = Self::zero(ctx);
        s.coeffs[0] = v;
        s
    }

    /// Builds a scalar from arbitrary-length power-basis coefficients, reducing
    /// modulo the minimal polynomial.
    pub fn from_coeffs(ctx: &Arc<FieldContext>, coeffs: Vec<BigRational>) -> Self {
        Scalar {
            ctx: Arc::clone(ctx),
            coeffs: poly::reduce_rational(coeffs, &ctx.minpoly),
        }
    }

    pub fn from_integer_coeffs(ctx: &Arc<FieldContext>, coeffs: &[BigInt]) -> Self {
        Self::from_coeffs(ctx, coeffs.iter().cloned().map(BigRational::from_integer).collect())
    }

    /// The generator `gamma = 2cos(pi/N)`.
    pub fn gamma(ctx: &Arc<FieldContext>) -> Self {
        Self::from_coeffs(ctx, vec![BigRational::zero(), BigRational::one()])
    }

    /// The exact Tits form entry `-cos(pi/m)`.
    ///
    /// `m = 1` gives `1` and infinity gives `-1`.
    pub fn entry_from_label(label: Label, ctx: &Arc<FieldContext>) -> Result<Self, ScalarError> {
        let two_cos = ctx.two_cos_label(label)?;
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        Ok(Scalar {
            ctx: Arc::clone(ctx),
            coeffs: two_cos
                .into_iter()
                .map(|c| BigRational::from_integer(c) * &half)
                .collect(),
        })
    }

    pub fn context(&self) -> &Arc<FieldContext> {
        &self.ctx
    }

    /// Canonical power-basis coefficients, length `ctx.degree()`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the scalar lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then_some(&self.coeffs[0])
    }

    fn check_ctx(&self, other: &Self) -> Result<(), ScalarError> {
        if self.ctx.order == other.ctx.order {
            Ok(())
        } else {
            Err(ScalarError::ContextMismatch(self.ctx.order, other.ctx.order))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_ctx(other)?;
        Ok(Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_ctx(other)?;
        Ok(Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, ScalarError> {
        self.check_ctx(other)?;
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        Ok(Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs: poly::mul_mod_rational(&self.coeffs, &other.coeffs, &self.ctx.minpoly),
        })
    }

    /// Multiplies by a rational.
    pub fn scale(&self, r: &BigRational) -> Self {
        Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if let Some(r) = self.as_rational() {
            if r.is_zero() {
                return None;
            }
            return Some(Self::from_rational(&self.ctx, r.recip()));
        }
        let inv = poly::inverse_mod(&self.coeffs, &self.ctx.minpoly)?;
        Some(Self::from_coeffs(&self.ctx, inv))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Option<Self>, ScalarError> {
        self.check_ctx(other)?;
        Ok(other.inv().map(|i| self * &i))
    }

    /// Certified sign of the real value.
    ///
    /// # Panics
    ///
    /// If the precision cap is exhausted before the value is separated from
    /// zero. Nonzero scalars always separate eventually, so this only fires
    /// under an unreasonably low cap.
    pub fn sign(&self) -> Ordering {
        match self.try_sign() {
            Some(s) => s,
            None => panic!(
                "sign refinement exhausted {} rounds for a nonzero scalar in Q(2cos(pi/{}))",
                self.ctx.precision_cap, self.ctx.order
            ),
        }
    }

    /// Like [`Scalar::sign`], returning `None` when the precision cap runs out.
    pub fn try_sign(&self) -> Option<Ordering> {
        if self.is_zero() {
            return Some(Ordering::Equal);
        }
        if let Some(r) = self.as_rational() {
            return Some(r.cmp(&BigRational::zero()));
        }
        let minpoly = &self.ctx.minpoly;
        let mut lo = self.ctx.gamma_lo.clone();
        let mut hi = self.ctx.gamma_hi.clone();
        let lo_sign = poly::eval_integer_at(minpoly, &lo).signum();
        let two = BigRational::from_integer(BigInt::from(2));
        let mut steps = 52usize;
        for _ in 0..=self.ctx.precision_cap {
            let (a, b) = poly::eval_interval(&self.coeffs, &lo, &hi);
            if a.is_positive() {
                return Some(Ordering::Greater);
            }
            if b.is_negative() {
                return Some(Ordering::Less);
            }
            for _ in 0..steps {
                let mid = (&lo + &hi) / &two;
                if poly::eval_integer_at(minpoly, &mid).signum() == lo_sign {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            steps *= 2;
        }
        None
    }

    /// Floating-point approximation, for display only.
    pub fn to_f64(&self) -> f64 {
        let gamma = 2.0 * (std::f64::consts::PI / self.ctx.order as f64).cos();
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * gamma + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar[N={}](", self.ctx.order)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{r}");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})g")?,
                _ => write!(f, "({c})g^{i}")?,
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;

            /// # Panics
            ///
            /// If the operands come from different fields.
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $tr<Scalar> for Scalar {
            type Output = Scalar;

            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        -&self
    }
}
