//! The small algebraic interface the recurrences and identity checks are
//! written against.
//!
//! A [`Ring`] is where weighted Fibonacci numbers live (polynomials,
//! integers, complex numbers, ...). Identities with quotients are assembled
//! in the ring's [`Field`] of fractions, `Ring::Frac`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::rational::RationalFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("division by zero")]
pub struct DivisionByZero;

pub trait Ring: Clone + fmt::Debug + Send + Sync + 'static {
    /// The field the identities are assembled in.
    type Frac: Field + From<Self>;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_integer(n: &BigInt) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn render(&self) -> String;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(&BigInt::from(n))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// `(-1)^k`.
    fn sign(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            Self::one()
        } else {
            Self::one().neg()
        }
    }
}

pub trait Field: Ring<Frac = Self> {
    /// Exact fields decide equality; numeric ones compare with a tolerance.
    const EXACT: bool;

    fn try_div(&self, rhs: &Self) -> Result<Self, DivisionByZero>;

    /// Nonnegative discrepancy between two values: always `0` for exact
    /// fields, relative difference `|l - r| / max(|l|, |r|)` otherwise.
    fn residual(&self, other: &Self) -> f64;

    /// Whether two values agree: exact equality, or `residual <= tol`.
    fn agrees(&self, other: &Self, tol: f64) -> bool;

    fn recip(&self) -> Result<Self, DivisionByZero> {
        Self::one().try_div(self)
    }
}

impl Ring for BigInt {
    type Frac = BigRational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_integer(n: &BigInt) -> Self {
        n.clone()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Ring for BigRational {
    type Frac = BigRational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_integer(n: &BigInt) -> Self {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Field for BigRational {
    const EXACT: bool = true;

    fn try_div(&self, rhs: &Self) -> Result<Self, DivisionByZero> {
        if Zero::is_zero(rhs) {
            Err(DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
    fn residual(&self, _other: &Self) -> f64 {
        0.0
    }
    fn agrees(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Ring for Complex64 {
    type Frac = Complex64;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_integer(n: &BigInt) -> Self {
        use num_traits::ToPrimitive;
        Complex64::new(n.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn render(&self) -> String {
        render_complex(*self)
    }
}

impl Field for Complex64 {
    const EXACT: bool = false;

    fn try_div(&self, rhs: &Self) -> Result<Self, DivisionByZero> {
        if Ring::is_zero(rhs) || !rhs.is_finite() {
            Err(DivisionByZero)
        } else {
            Ok(self / rhs)
        }
    }
    fn residual(&self, other: &Self) -> f64 {
        relative_residual(*self, *other)
    }
    fn agrees(&self, other: &Self, tol: f64) -> bool {
        self.residual(other) <= tol
    }
}

/// `|l - r| / max(|l|, |r|)`, zero when both vanish.
pub fn relative_residual(l: Complex64, r: Complex64) -> f64 {
    let scale = l.norm().max(r.norm());
    if scale == 0.0 {
        0.0
    } else {
        (l - r).norm() / scale
    }
}

/// Shortest round-trip decimal form, `re`, `re+imi` or `re-imi`.
pub fn render_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

impl Ring for Poly {
    type Frac = RationalFn;

    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn from_integer(n: &BigInt) -> Self {
        Poly::constant(n.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        Poly::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Poly::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Poly::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        Poly::neg(self)
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn pow(&self, e: u32) -> Self {
        Poly::pow(self, e)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}
