//! Quotients of polynomials, compared by cross-multiplication.
//!
//! There is no polynomial GCD. Numerator and denominator are kept as
//! products of non-constant polynomial factors times a rational scale, and
//! syntactically identical factors cancel on multiplication. Sums use the
//! factor-wise least common multiple of the denominators. This keeps the
//! quotients that appear in the identities (products of weights, of
//! `(1 + w_j)` and of shifted Fibonacci numbers) small without any
//! factorization.
//!
//! Equality is exact: `a/b == c/d` iff `a*d == c*b` as polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::Poly;
use crate::ring::{self, DivisionByZero, Field};

/// A multiset of non-constant polynomial factors; the empty set is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Factors(BTreeMap<Poly, u32>);

impl Factors {
    fn single(p: Poly) -> Self {
        let mut m = BTreeMap::new();
        m.insert(p, 1);
        Factors(m)
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn union(&self, other: &Factors) -> Factors {
        let mut out = self.0.clone();
        for (p, e) in &other.0 {
            *out.entry(p.clone()).or_insert(0) += e;
        }
        Factors(out)
    }

    /// Multiset minimum.
    fn common(&self, other: &Factors) -> Factors {
        Factors(
            self.0
                .iter()
                .filter_map(|(p, e)| other.0.get(p).map(|f| (p.clone(), (*e).min(*f))))
                .collect(),
        )
    }

    /// Multiset maximum.
    fn lcm(&self, other: &Factors) -> Factors {
        let mut out = self.0.clone();
        for (p, e) in &other.0 {
            let slot = out.entry(p.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        Factors(out)
    }

    /// Multiset difference; `other` must be contained in `self`.
    fn minus(&self, other: &Factors) -> Factors {
        let mut out = self.0.clone();
        for (p, e) in &other.0 {
            if let Some(slot) = out.get_mut(p) {
                *slot -= (*slot).min(*e);
                if *slot == 0 {
                    out.remove(p);
                }
            }
        }
        Factors(out)
    }

    fn expand(&self) -> Poly {
        let powers: Vec<Poly> = self.0.iter().map(|(p, e)| p.pow(*e)).collect();
        Poly::product(powers.iter())
    }

    fn render(&self, f: &mut fmt::Formatter<'_>, lead: Option<&BigInt>) -> fmt::Result {
        let mut first = true;
        if let Some(c) = lead {
            write!(f, "{c}")?;
            first = false;
        }
        for (p, e) in &self.0 {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if p.len() == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "({p})")?;
            }
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A quotient `num / den` of polynomials with `den != 0`.
#[derive(Clone, Debug)]
pub struct RationalFn {
    scale: BigRational,
    num: Factors,
    den: Factors,
}

impl RationalFn {
    pub fn zero() -> Self {
        RationalFn {
            scale: BigRational::zero(),
            num: Factors::default(),
            den: Factors::default(),
        }
    }

    pub fn one() -> Self {
        RationalFn::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            return RationalFn::zero();
        }
        RationalFn {
            scale: c,
            num: Factors::default(),
            den: Factors::default(),
        }
    }

    pub fn new(num: Poly, den: Poly) -> Result<Self, DivisionByZero> {
        RationalFn::from(num).try_div(&RationalFn::from(den))
    }

    pub fn from_poly(p: Poly) -> Self {
        match p.as_constant() {
            Some(c) => RationalFn::constant(BigRational::from_integer(c)),
            None => RationalFn {
                scale: BigRational::one(),
                num: Factors::single(p),
                den: Factors::default(),
            },
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    /// The expanded numerator.
    pub fn num(&self) -> Poly {
        self.num.expand().scale(self.scale.numer())
    }

    /// The expanded denominator, never zero.
    pub fn den(&self) -> Poly {
        self.den.expand().scale(self.scale.denom())
    }

    /// True when the denominator is a constant, i.e. the value is a
    /// polynomial with rational coefficients.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// Cross-multiplication test `self.num * other.den == other.num * self.den`.
    /// Factors shared by both sides are removed before expanding.
    pub fn rf_eq(&self, other: &RationalFn) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let left = self.num.union(&other.den);
        let right = other.num.union(&self.den);
        let shared = left.common(&right);
        let left = left.minus(&shared);
        let right = right.minus(&shared);
        let lc = self.scale.numer() * other.scale.denom();
        let rc = other.scale.numer() * self.scale.denom();
        if left.is_empty() && right.is_empty() {
            return lc == rc;
        }
        left.expand().scale(&lc) == right.expand().scale(&rc)
    }

    fn normalized(scale: BigRational, num: Factors, den: Factors) -> Self {
        if scale.is_zero() {
            return RationalFn::zero();
        }
        let shared = num.common(&den);
        RationalFn {
            scale,
            num: num.minus(&shared),
            den: den.minus(&shared),
        }
    }

    pub fn mul(&self, rhs: &RationalFn) -> RationalFn {
        RationalFn::normalized(
            &self.scale * &rhs.scale,
            self.num.union(&rhs.num),
            self.den.union(&rhs.den),
        )
    }

    pub fn recip(&self) -> Result<RationalFn, DivisionByZero> {
        if self.is_zero() {
            return Err(DivisionByZero);
        }
        Ok(RationalFn {
            scale: self.scale.recip(),
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn try_div(&self, rhs: &RationalFn) -> Result<RationalFn, DivisionByZero> {
        Ok(self.mul(&rhs.recip()?))
    }

    pub fn neg(&self) -> RationalFn {
        RationalFn {
            scale: -&self.scale,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, rhs: &RationalFn) -> RationalFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // Pull out numerator factors common to both summands.
        let shared_num = self.num.common(&rhs.num);
        let a_rest = self.num.minus(&shared_num);
        let b_rest = rhs.num.minus(&shared_num);
        let den = self.den.lcm(&rhs.den);
        let a_fill = den.minus(&self.den);
        let b_fill = den.minus(&rhs.den);

        // Integer cofactors from the rational scales.
        let (an, ad) = (self.scale.numer(), self.scale.denom());
        let (bn, bd) = (rhs.scale.numer(), rhs.scale.denom());
        let l = ad.lcm(bd);
        let a_coef = an * (&l / ad);
        let b_coef = bn * (&l / bd);

        let sum = Poly::add(
            &a_rest.union(&a_fill).expand().scale(&a_coef),
            &b_rest.union(&b_fill).expand().scale(&b_coef),
        );
        if sum.is_zero() {
            return RationalFn::zero();
        }
        let mut scale = BigRational::new(BigInt::one(), l);
        let mut num = shared_num;
        match sum.as_constant() {
            Some(c) => scale *= BigRational::from_integer(c),
            None => {
                // Keep the leading coefficient positive so equal sums render alike.
                let (mag, s) = content_sign(&sum);
                scale *= BigRational::from_integer(s);
                num = num.union(&Factors::single(mag));
            }
        }
        RationalFn::normalized(scale, num, den)
    }

    pub fn sub(&self, rhs: &RationalFn) -> RationalFn {
        self.add(&rhs.neg())
    }

    pub fn pow(&self, e: i32) -> Result<RationalFn, DivisionByZero> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        Ok(ring::Ring::pow(&base, e.unsigned_abs()))
    }

    /// Evaluates numerator and denominator under the substitution and
    /// divides in the target field.
    pub fn eval<F, A>(&self, assign: A) -> Result<F, crate::Error>
    where
        F: Field,
        A: Fn(crate::poly::Var) -> Option<F>,
    {
        let n: F = self.num().eval(&assign)?;
        let d: F = self.den().eval(&assign)?;
        Ok(n.try_div(&d)?)
    }

    /// Applies a polynomial substitution (e.g. `w_i -> q^i`) to every factor.
    pub fn substitute<A>(&self, assign: A) -> Result<RationalFn, crate::Error>
    where
        A: Fn(crate::poly::Var) -> Option<Poly>,
    {
        let n: Poly = self.num().eval(&assign)?;
        let d: Poly = self.den().eval(&assign)?;
        Ok(RationalFn::new(n, d)?)
    }

    /// Rendering with each polynomial factor capped at `limit` characters.
    pub fn render_limited(&self, limit: usize) -> String {
        let s = self.to_string();
        if s.len() <= limit {
            return s;
        }
        let mut cut = limit;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        format!("{} ... ({} chars)", &s[..cut], s.len())
    }
}

/// Splits off the sign of the leading (graded-lex last) coefficient.
fn content_sign(p: &Poly) -> (Poly, BigInt) {
    let lead_negative = p.terms().last().is_some_and(|(_, c)| c.is_negative());
    if lead_negative {
        (p.neg(), BigInt::from(-1))
    } else {
        (p.clone(), BigInt::one())
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.rf_eq(other)
    }
}

impl From<Poly> for RationalFn {
    fn from(p: Poly) -> Self {
        RationalFn::from_poly(p)
    }
}

impl From<i64> for RationalFn {
    fn from(c: i64) -> Self {
        RationalFn::constant(BigRational::from_integer(c.into()))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let numer = self.scale.numer();
        let denom = self.scale.denom();
        let minus_one = -BigInt::one();
        let lead = if self.num.is_empty() {
            Some(numer)
        } else if numer.is_one() {
            None
        } else if *numer == minus_one {
            f.write_str("-")?;
            None
        } else {
            Some(numer)
        };
        self.num.render(f, lead)?;
        if !self.den.is_empty() || !denom.is_one() {
            f.write_str(" / ")?;
            let multi = (self.den.0.len() + usize::from(!denom.is_one())) > 1;
            if multi {
                f.write_str("(")?;
            }
            self.den.render(f, (!denom.is_one()).then_some(denom))?;
            if multi {
                f.write_str(")")?;
            }
        }
        Ok(())
    }
}

impl ring::Ring for RationalFn {
    type Frac = RationalFn;

    fn zero() -> Self {
        RationalFn::zero()
    }
    fn one() -> Self {
        RationalFn::one()
    }
    fn from_integer(n: &BigInt) -> Self {
        RationalFn::constant(BigRational::from_integer(n.clone()))
    }
    fn add(&self, rhs: &Self) -> Self {
        RationalFn::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        RationalFn::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        RationalFn::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        RationalFn::neg(self)
    }
    fn is_zero(&self) -> bool {
        RationalFn::is_zero(self)
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

impl Field for RationalFn {
    const EXACT: bool = true;

    fn try_div(&self, rhs: &Self) -> Result<Self, DivisionByZero> {
        RationalFn::try_div(self, rhs)
    }
    fn residual(&self, _other: &Self) -> f64 {
        0.0
    }
    fn agrees(&self, other: &Self, _tol: f64) -> bool {
        self.rf_eq(other)
    }
}

impl Add for &RationalFn {
    type Output = RationalFn;
    fn add(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::add(self, rhs)
    }
}

impl Sub for &RationalFn {
    type Output = RationalFn;
    fn sub(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::sub(self, rhs)
    }
}

impl Mul for &RationalFn {
    type Output = RationalFn;
    fn mul(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::mul(self, rhs)
    }
}

/// Panics on division by zero; use [`RationalFn::try_div`] to handle it.
impl Div for &RationalFn {
    type Output = RationalFn;
    fn div(self, rhs: &RationalFn) -> RationalFn {
        RationalFn::try_div(self, rhs).expect("division by zero rational function")
    }
}

impl Neg for &RationalFn {
    type Output = RationalFn;
    fn neg(self) -> RationalFn {
        RationalFn::neg(self)
    }
}
