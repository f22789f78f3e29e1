//! Weighted Fibonacci numbers by recurrence.
//!
//! * `f_0 = 0`, `f_1 = 1`, `f_{n+2} = f_{n+1} + w_n f_n`
//! * `f^{(m)}_0 = 0`, `f^{(m)}_1 = 1`, `f^{(m)}_{n+2} = f^{(m)}_{n+1} + w_{n+m} f^{(m)}_n`
//! * `g^n_0 = 1`, `g^n_k = 0` for `k < 0` or `k > n`,
//!   `g^n_k = w_{n+k-1} g^{n-1}_{k-1} + g^{n-1}_k`
//!
//! A [`FibEngine`] binds one [`WeightSource`] and memoizes all three tables,
//! so caches of different backends never mix.

use std::collections::HashMap;
use std::path::Path;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::poly::{Poly, Var};
use crate::rational::RationalFn;
use crate::ring::{Field, Ring};
use crate::theta::{self, EllipticError, EllipticParams, SpecialCase};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum WeightError {
    #[error("explicit weight list has no entry for w{index} (entries cover 0..{len})")]
    Exhausted { index: i64, len: usize },
    #[error("weight index {0} is negative")]
    NegativeIndex(i64),
    #[error("weight w{index}: {source}")]
    Elliptic {
        index: i64,
        #[source]
        source: EllipticError,
    },
    #[error("cannot read weight file: {0}")]
    File(String),
}

impl WeightError {
    pub fn is_numeric(&self) -> bool {
        matches!(self, WeightError::Elliptic { .. })
    }
}

/// A sequence `n -> w_n` with values in some ring.
pub trait WeightSource: Send + Sync {
    type Value: Ring;

    fn weight(&self, n: i64) -> Result<Self::Value, WeightError>;

    /// Short identifier recorded in reports, e.g. `symbolic` or `q`.
    fn descriptor(&self) -> String;
}

impl<W: WeightSource + ?Sized> WeightSource for &W {
    type Value = W::Value;
    fn weight(&self, n: i64) -> Result<Self::Value, WeightError> {
        (**self).weight(n)
    }
    fn descriptor(&self) -> String {
        (**self).descriptor()
    }
}

fn nonnegative(n: i64) -> Result<u32, WeightError> {
    u32::try_from(n).map_err(|_| WeightError::NegativeIndex(n))
}

/// `w_n -> ` the indeterminate `w_n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Symbolic;

impl WeightSource for Symbolic {
    type Value = Poly;
    fn weight(&self, n: i64) -> Result<Poly, WeightError> {
        Ok(Poly::w(nonnegative(n)?))
    }
    fn descriptor(&self) -> String {
        "symbolic".into()
    }
}

/// `w_n -> q^n`.
#[derive(Clone, Copy, Debug, Default)]
pub struct QPower;

impl WeightSource for QPower {
    type Value = Poly;
    fn weight(&self, n: i64) -> Result<Poly, WeightError> {
        Ok(Poly::q_pow(nonnegative(n)?))
    }
    fn descriptor(&self) -> String {
        "q".into()
    }
}

/// All weights `1`: the classical Fibonacci numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct Unit;

impl WeightSource for Unit {
    type Value = BigInt;
    fn weight(&self, n: i64) -> Result<BigInt, WeightError> {
        nonnegative(n)?;
        Ok(BigInt::from(1))
    }
    fn descriptor(&self) -> String {
        "unit".into()
    }
}

/// A finite list `w_0, w_1, ...`.
#[derive(Clone, Debug)]
pub struct Explicit<T> {
    values: Vec<T>,
    label: String,
}

impl<T: Ring> Explicit<T> {
    /// `values[i]` is `w_i`.
    pub fn new(values: Vec<T>, label: impl Into<String>) -> Self {
        Explicit {
            values,
            label: label.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl Explicit<BigRational> {
    /// Parses the weight file format: one rational per line (`3`, `-2`,
    /// `5/7`) giving `w_1, w_2, ...`; blank lines and `#` comments are
    /// skipped. An optional first entry of the form `w0 = value` (or
    /// `w0: value`) sets `w_0`, which otherwise defaults to `0`; it only
    /// ever multiplies `f_0 = 0`.
    pub fn parse(text: &str, label: impl Into<String>) -> Result<Self, WeightError> {
        let mut values = vec![BigRational::from_integer(0.into())];
        let mut seen_data = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let header = line
                .strip_prefix("w0")
                .map(|rest| rest.trim_start().trim_start_matches(['=', ':']).trim());
            match header {
                Some(v) if !seen_data => values[0] = parse_rational(v, lineno + 1)?,
                Some(_) => {
                    return Err(WeightError::File(format!(
                        "line {}: w0 header must come before the weights",
                        lineno + 1
                    )))
                }
                None => values.push(parse_rational(line, lineno + 1)?),
            }
            seen_data = true;
        }
        Ok(Explicit::new(values, label))
    }

    pub fn from_file(path: &Path) -> Result<Self, WeightError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WeightError::File(format!("{}: {e}", path.display())))?;
        Explicit::parse(&text, format!("explicit:{}", path.display()))
    }
}

fn parse_rational(s: &str, lineno: usize) -> Result<BigRational, WeightError> {
    let bad = || WeightError::File(format!("line {lineno}: `{s}` is not a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl<T: Ring> WeightSource for Explicit<T> {
    type Value = T;
    fn weight(&self, n: i64) -> Result<T, WeightError> {
        let i = nonnegative(n)? as usize;
        self.values.get(i).cloned().ok_or(WeightError::Exhausted {
            index: n,
            len: self.values.len(),
        })
    }
    fn descriptor(&self) -> String {
        self.label.clone()
    }
}

/// The elliptic weights `w_n(a, b; q, p)`, evaluated numerically.
#[derive(Clone, Copy, Debug)]
pub struct EllipticNumeric {
    pub params: EllipticParams,
    pub seed: Option<u64>,
}

impl EllipticNumeric {
    pub fn new(params: EllipticParams) -> Self {
        EllipticNumeric { params, seed: None }
    }

    pub fn seeded(params: EllipticParams, seed: u64) -> Self {
        EllipticNumeric {
            params,
            seed: Some(seed),
        }
    }
}

impl WeightSource for EllipticNumeric {
    type Value = Complex64;
    fn weight(&self, n: i64) -> Result<Complex64, WeightError> {
        theta::weight_elliptic(n, &self.params)
            .map_err(|source| WeightError::Elliptic { index: n, source })
    }
    fn descriptor(&self) -> String {
        let p = &self.params;
        format!(
            "elliptic:a={},b={},q={},p={}",
            crate::ring::render_complex(p.a),
            crate::ring::render_complex(p.b),
            crate::ring::render_complex(p.q),
            crate::ring::render_complex(p.p)
        )
    }
}

/// One of the degenerate closed-form weights at complex parameters.
#[derive(Clone, Copy, Debug)]
pub struct SpecialNumeric {
    pub case: SpecialCase,
    pub a: Complex64,
    pub b: Complex64,
    pub q: Complex64,
}

impl WeightSource for SpecialNumeric {
    type Value = Complex64;
    fn weight(&self, n: i64) -> Result<Complex64, WeightError> {
        theta::weight_special(self.case, n, self.a, self.b, self.q)
            .map_err(|source| WeightError::Elliptic { index: n, source })
    }
    fn descriptor(&self) -> String {
        format!("special:{:?}", self.case).to_lowercase()
    }
}

/// One of the degenerate weights as an exact rational function of
/// `a`, `b`, `q`.
#[derive(Clone, Copy, Debug)]
pub struct SpecialExact(pub SpecialCase);

impl WeightSource for SpecialExact {
    type Value = RationalFn;
    fn weight(&self, n: i64) -> Result<RationalFn, WeightError> {
        Ok(theta::weight_special_exact(self.0, n))
    }
    fn descriptor(&self) -> String {
        format!("exact:{:?}", self.0).to_lowercase()
    }
}

/// Weights given by a closure.
pub struct FnWeights<T, F> {
    f: F,
    label: String,
    _value: std::marker::PhantomData<fn() -> T>,
}

impl<T, F> FnWeights<T, F>
where
    T: Ring,
    F: Fn(i64) -> T + Send + Sync,
{
    pub fn new(label: impl Into<String>, f: F) -> Self {
        FnWeights {
            f,
            label: label.into(),
            _value: std::marker::PhantomData,
        }
    }
}

impl<T, F> WeightSource for FnWeights<T, F>
where
    T: Ring,
    F: Fn(i64) -> T + Send + Sync,
{
    type Value = T;
    fn weight(&self, n: i64) -> Result<T, WeightError> {
        Ok((self.f)(n))
    }
    fn descriptor(&self) -> String {
        self.label.clone()
    }
}

/// Memoized `f_n`, `f^{(m)}_n` and `g^n_k` over one weight backend.
///
/// Tables live behind mutexes, so one engine can serve a parallel sweep.
pub struct FibEngine<W: WeightSource> {
    weights: W,
    // m -> [f^{(m)}_0, f^{(m)}_1, ...]
    shifted: Mutex<HashMap<usize, Vec<W::Value>>>,
    // (n, k) -> g^n_k for 1 <= k <= n
    binom: Mutex<HashMap<(usize, usize), W::Value>>,
}

impl<W: WeightSource> FibEngine<W> {
    pub fn new(weights: W) -> Self {
        FibEngine {
            weights,
            shifted: Mutex::new(HashMap::new()),
            binom: Mutex::new(HashMap::new()),
        }
    }

    pub fn weights(&self) -> &W {
        &self.weights
    }

    pub fn descriptor(&self) -> String {
        self.weights.descriptor()
    }

    pub fn weight(&self, n: i64) -> Result<W::Value, WeightError> {
        self.weights.weight(n)
    }

    /// `f_n`.
    pub fn fib(&self, n: usize) -> Result<W::Value, WeightError> {
        self.fib_shifted(n, 0)
    }

    /// `f^{(m)}_n`.
    pub fn fib_shifted(&self, n: usize, m: usize) -> Result<W::Value, WeightError> {
        let mut tables = self.shifted.lock().expect("fib cache poisoned");
        let row = tables
            .entry(m)
            .or_insert_with(|| vec![W::Value::zero(), W::Value::one()]);
        while row.len() <= n {
            let j = row.len();
            // f_j = f_{j-1} + w_{j-2+m} f_{j-2}; the j = 2 step adds w_m * f_0 = 0.
            let next = if j == 2 {
                row[1].clone()
            } else {
                let w = self.weights.weight((j - 2 + m) as i64)?;
                row[j - 1].add(&w.mul(&row[j - 2]))
            };
            row.push(next);
        }
        Ok(row[n].clone())
    }

    /// `g^n_k`, total weight of tilings with `n` tiles of which `k` are
    /// dominoes.
    pub fn gnk(&self, n: i64, k: i64) -> Result<W::Value, WeightError> {
        if k < 0 || k > n {
            return Ok(W::Value::zero());
        }
        if k == 0 {
            return Ok(W::Value::one());
        }
        let (n, k) = (n as usize, k as usize);
        let mut memo = self.binom.lock().expect("binomial cache poisoned");
        if let Some(v) = memo.get(&(n, k)) {
            return Ok(v.clone());
        }
        let lookup = |memo: &HashMap<(usize, usize), W::Value>, r: usize, c: usize| -> W::Value {
            if c == 0 {
                W::Value::one()
            } else if c > r {
                W::Value::zero()
            } else {
                memo[&(r, c)].clone()
            }
        };
        // Fill rows 1..=n for columns 1..=min(row, k) that are missing.
        for r in 1..=n {
            let lo = k.saturating_sub(n - r).max(1);
            for c in lo..=r.min(k) {
                if memo.contains_key(&(r, c)) {
                    continue;
                }
                let w = self.weights.weight((r + c - 1) as i64)?;
                let v = w
                    .mul(&lookup(&memo, r - 1, c - 1))
                    .add(&lookup(&memo, r - 1, c));
                memo.insert((r, c), v);
            }
        }
        Ok(memo[&(n, k)].clone())
    }

    /// `[n, k]_w = g^n_k / (w_1 w_3 ... w_{2k-1})`.
    pub fn bracket_w(&self, n: i64, k: i64) -> Result<<W::Value as Ring>::Frac, crate::Error> {
        let g: <W::Value as Ring>::Frac = self.gnk(n, k)?.into();
        let mut den = <W::Value as Ring>::Frac::one();
        for t in 1..=k.max(0) {
            den = den.mul(&self.weight(2 * t - 1)?.into());
        }
        Ok(g.try_div(&den)?)
    }
}

impl FibEngine<Symbolic> {
    pub fn symbolic() -> Self {
        FibEngine::new(Symbolic)
    }
}

/// Substitutes `w_i -> q^i` into a polynomial in the weights.
pub fn specialize_q(p: &Poly) -> Poly {
    p.eval(|v| match v {
        Var::W(i) => Some(Poly::q_pow(i)),
        other => Some(Poly::var(other)),
    })
    .expect("every indeterminate has a value")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::qbinom;
    use crate::tiling;

    fn w(i: u32) -> Poly {
        Poly::w(i)
    }

    #[test]
    fn initial_values() {
        let e = FibEngine::symbolic();
        assert!(e.fib(0).unwrap().is_zero());
        assert_eq!(e.fib(1).unwrap(), Poly::one());
        assert_eq!(e.fib(2).unwrap(), Poly::one());
    }

    #[test]
    fn f5_symbolic() {
        let e = FibEngine::symbolic();
        assert_eq!(
            e.fib(5).unwrap(),
            Poly::one() + w(1) + w(2) + w(3) + w(1) * w(3)
        );
        assert_eq!(e.fib(5).unwrap(), tiling::total_weight(4, 0).unwrap());
    }

    #[test]
    fn classical_values() {
        let e = FibEngine::new(Unit);
        assert_eq!(e.fib(10).unwrap(), BigInt::from(55));
        let seq: Vec<BigInt> = (0..=10).map(|n| e.fib(n).unwrap()).collect();
        let expect: Vec<BigInt> = [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
            .iter()
            .map(|&v| BigInt::from(v))
            .collect();
        assert_eq!(seq, expect);
    }

    #[test]
    fn symbolic_coefficients_are_one() {
        let e = FibEngine::symbolic();
        let f = e.fib(12).unwrap();
        assert!(f.terms().all(|(_, c)| *c == BigInt::from(1)));
    }

    #[test]
    fn shifted_values() {
        let e = FibEngine::symbolic();
        for n in 0..=12 {
            assert_eq!(e.fib_shifted(n, 0).unwrap(), e.fib(n).unwrap());
        }
        assert_eq!(
            e.fib_shifted(5, 3).unwrap(),
            Poly::one() + w(4) + w(5) + w(6) + w(4) * w(6)
        );
        assert_eq!(e.fib_shifted(2, 7).unwrap(), Poly::one());
    }

    #[test]
    fn gnk_edge_cases() {
        let e = FibEngine::symbolic();
        assert_eq!(e.gnk(4, 1).unwrap(), w(1) + w(2) + w(3) + w(4));
        assert_eq!(e.gnk(3, 3).unwrap(), w(1) * w(3) * w(5));
        assert_eq!(e.gnk(5, 0).unwrap(), Poly::one());
        assert!(e.gnk(2, 3).unwrap().is_zero());
        assert!(e.gnk(2, -1).unwrap().is_zero());
    }

    #[test]
    fn gnk_q_reduction() {
        let e = FibEngine::new(QPower);
        for n in 0..=8i64 {
            for k in 0..=n {
                let expect = Poly::q_pow((k * k) as u32) * qbinom(n, k);
                assert_eq!(e.gnk(n, k).unwrap(), expect, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn gnk_order_independent() {
        // Querying a deep entry first and a shallow one later must agree
        // with a fresh engine.
        let e = FibEngine::symbolic();
        let deep = e.gnk(7, 3).unwrap();
        let shallow = e.gnk(4, 2).unwrap();
        let fresh = FibEngine::symbolic();
        assert_eq!(shallow, fresh.gnk(4, 2).unwrap());
        assert_eq!(deep, FibEngine::symbolic().gnk(7, 3).unwrap());
    }

    #[test]
    fn bracket_edges_and_recurrence() {
        let e = FibEngine::symbolic();
        for n in 0..=5 {
            assert!(e.bracket_w(n, 0).unwrap().rf_eq(&RationalFn::one()));
            assert!(e.bracket_w(n, n).unwrap().rf_eq(&RationalFn::one()));
        }
        let wr = |i: i64| RationalFn::from(Poly::w(i as u32));
        let (n, k) = (4, 2);
        let lhs = e.bracket_w(n, k).unwrap();
        let rhs = wr(n + k - 1)
            .try_div(&wr(2 * k - 1))
            .unwrap()
            .mul(&e.bracket_w(n - 1, k - 1).unwrap())
            .add(&e.bracket_w(n - 1, k).unwrap());
        assert!(lhs.rf_eq(&rhs));
    }

    #[test]
    fn bracket_zero_weight_errors() {
        let e = FibEngine::new(Explicit::new(
            vec![
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
            ],
            "zeros",
        ));
        assert!(matches!(e.bracket_w(2, 1), Err(crate::Error::Division(_))));
    }

    #[test]
    fn explicit_exhaustion() {
        let e = FibEngine::new(Explicit::new(
            vec![BigInt::from(0), BigInt::from(2)],
            "short",
        ));
        assert_eq!(e.fib(3).unwrap(), BigInt::from(3));
        assert_eq!(e.fib(4), Err(WeightError::Exhausted { index: 2, len: 2 }));
    }

    #[test]
    fn weight_file_parsing() {
        let ex = Explicit::parse("# weights\nw0 = 5\n2\n-1/3\n\n4 # trailing\n", "t").unwrap();
        assert_eq!(ex.len(), 4);
        assert_eq!(ex.weight(0).unwrap(), BigRational::from_integer(5.into()));
        assert_eq!(
            ex.weight(2).unwrap(),
            BigRational::new((-1).into(), 3.into())
        );
        let no_header = Explicit::parse("1\n1\n", "t").unwrap();
        assert_eq!(
            no_header.weight(0).unwrap(),
            BigRational::from_integer(0.into())
        );
        assert!(Explicit::parse("1\nw0 = 2\n", "t").is_err());
        assert!(Explicit::parse("x\n", "t").is_err());
        assert!(Explicit::parse("1/0\n", "t").is_err());
    }

    #[test]
    fn cache_matches_recomputation() {
        let e = FibEngine::symbolic();
        for n in (0..14).rev() {
            let cached = e.fib_shifted(n, 2).unwrap();
            assert_eq!(cached, FibEngine::symbolic().fib_shifted(n, 2).unwrap());
        }
    }

    #[test]
    fn q_specialization() {
        let f = FibEngine::symbolic().fib(6).unwrap();
        assert_eq!(specialize_q(&f), FibEngine::new(QPower).fib(6).unwrap());
    }
}
