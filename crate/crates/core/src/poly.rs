//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients.
//!
//! Indeterminates are the weights `w0, w1, ...` plus three reserved atoms:
//! the base `q` and the free parameters `a` and `b`. Keeping all of them in
//! one ring means the q-case is a substitution `w_i -> q^i`, not a new type.
//!
//! Terms are stored in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic. Equality is plain map equality; the order only
//! fixes how polynomials print.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ring;

/// An indeterminate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    /// The weight `w_i`.
    W(u32),
    /// The base `q`.
    Q,
    /// The free parameter `a`.
    A,
    /// The free parameter `b`.
    B,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::W(i) => write!(f, "w{i}"),
            Var::Q => f.write_str("q"),
            Var::A => f.write_str("a"),
            Var::B => f.write_str("b"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("no value assigned to indeterminate {0}")]
    Unbound(Var),
}

/// A power product. Exponents are positive; the empty product is `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs, merging
    /// repeated variables and dropping zero exponents.
    pub fn from_powers<I: IntoIterator<Item = (Var, u32)>>(powers: I) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in powers {
            *map.entry(v).or_insert(0) += e;
        }
        Monomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| u64::from(e)).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(x, _)| x.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn powers(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }

    fn expanded(&self) -> impl Iterator<Item = Var> + '_ {
        self.0
            .iter()
            .flat_map(|&(v, e)| std::iter::repeat_n(v, e as usize))
    }

    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the sorted variable
    /// sequences compared left to right.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.expanded().cmp(other.expanded()))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (idx, (v, e)) in self.0.iter().enumerate() {
            if idx > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in canonical form: no zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Poly::term(c, Monomial::one())
    }

    pub fn term<T: Into<BigInt>>(c: T, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn var(v: Var) -> Self {
        Poly::term(1, Monomial::var(v))
    }

    /// The weight indeterminate `w_i`.
    pub fn w(i: u32) -> Self {
        Poly::var(Var::W(i))
    }

    /// `q^e`.
    pub fn q_pow(e: u32) -> Self {
        Poly::term(1, Monomial::from_powers([(Var::Q, e)]))
    }

    /// Builds a polynomial from `(coefficient, monomial)` pairs, summing
    /// repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (BigInt, Monomial)>>(terms: I) -> Self {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (c, m) in terms {
            *map.entry(m).or_insert_with(BigInt::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        Poly { terms: map }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The coefficient if this polynomial has no indeterminates.
    pub fn as_constant(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Every indeterminate occurring in the polynomial, sorted.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|m| m.vars()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.get_mut(m) {
                Some(v) => {
                    *v += c;
                    if v.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Poly { terms }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(
            self.terms
                .len()
                .saturating_mul(rhs.terms.len())
                .min(1 << 20),
        );
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                match acc.get_mut(&m) {
                    Some(v) => *v += ca * cb,
                    None => {
                        acc.insert(m, ca * cb);
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = Poly::mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = Poly::mul(&base, &base);
            }
        }
        acc
    }

    /// Product of a sequence of polynomials; smallest operands are
    /// multiplied first.
    pub fn product<'a, I: IntoIterator<Item = &'a Poly>>(factors: I) -> Poly {
        let mut fs: Vec<&Poly> = factors.into_iter().collect();
        fs.sort_by_key(|p| p.len());
        fs.into_iter()
            .fold(Poly::one(), |acc, p| Poly::mul(&acc, p))
    }

    /// Evaluates into any [`Ring`](ring::Ring), looking up each indeterminate through
    /// `assign`. Fails on the first indeterminate without a value.
    pub fn eval<R, F>(&self, assign: F) -> Result<R, EvalError>
    where
        R: ring::Ring,
        F: Fn(Var) -> Option<R>,
    {
        let mut values: HashMap<Var, R> = HashMap::new();
        for v in self.vars() {
            values.insert(v, assign(v).ok_or(EvalError::Unbound(v))?);
        }
        let mut acc = R::zero();
        for (m, c) in &self.terms {
            let mut t = R::from_integer(c);
            for &(v, e) in m.powers() {
                t = t.mul(&values[&v].pow(e));
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Evaluates with an explicit map; convenience over [`Poly::eval`].
    pub fn eval_map<R: ring::Ring>(&self, assignment: &HashMap<Var, R>) -> Result<R, EvalError> {
        self.eval(|v| assignment.get(&v).cloned())
    }

    /// Renders at most roughly `limit` characters, summarizing the rest.
    pub fn render_limited(&self, limit: usize) -> String {
        let full = self.to_string();
        if full.len() <= limit {
            return full;
        }
        let mut cut = limit;
        while !full.is_char_boundary(cut) {
            cut -= 1;
        }
        format!("{} ... ({} terms)", &full[..cut], self.len())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl From<i64> for Poly {
    fn from(c: i64) -> Self {
        Poly::constant(c)
    }
}

impl From<BigInt> for Poly {
    fn from(c: BigInt) -> Self {
        Poly::constant(c)
    }
}

impl From<Var> for Poly {
    fn from(v: Var) -> Self {
        Poly::var(v)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        Poly::add(&self, &rhs)
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        Poly::sub(&self, &rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        Poly::mul(&self, &rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(&self)
    }
}
