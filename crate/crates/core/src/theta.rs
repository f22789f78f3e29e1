//! The modified Jacobi theta function and the elliptic weights built from
//! it.
//!
//! `theta(x; p) = prod_{j>=0} (1 - x p^j)(1 - p^{j+1}/x)`, for `x != 0` and
//! `|p| < 1`. The product is truncated at the first index `J` for which the
//! geometric tail bound `(|x| + 1/|x| + 2) |p|^{J+1} / (1 - |p|)` drops below
//! the requested tolerance. At `p = 0` it is exactly `1 - x`.
//!
//! Every theta quotient checks its denominator factors against a floor and
//! reports the vanishing one by name instead of returning a huge number.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{Poly, Var};
use crate::qseries;
use crate::rational::RationalFn;

/// Default truncation tolerance for the theta product.
pub const DEFAULT_TOL: f64 = 1e-17;
/// Denominator theta values below this modulus are treated as poles.
pub const POLE_FLOOR: f64 = 1e-13;
/// Hard limit on the number of product factors.
pub const MAX_TERMS: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EllipticError {
    #[error("theta is undefined at argument 0")]
    ZeroArgument,
    #[error("nome |p| = {0} must be < 1")]
    Divergent(f64),
    #[error("truncation needs more than {MAX_TERMS} factors for |p| = {0}")]
    TruncationLimit(f64),
    #[error("pole: denominator factor {factor} vanishes (|value| = {modulus:e})")]
    Pole { factor: String, modulus: f64 },
    #[error("invalid elliptic parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: Complex64,
    /// Index `J` of the last factor pair used; `0` at `p = 0`.
    pub truncation_terms: usize,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Smallest `J` with `(|x| + 1/|x| + 2) |p|^{J+1} / (1 - |p|) < tol`.
fn truncation_index(x: Complex64, p_abs: f64, tol: f64) -> Result<usize, EllipticError> {
    if p_abs == 0.0 {
        return Ok(0);
    }
    let ax = x.norm();
    let lead = (ax + 1.0 / ax + 2.0) / (1.0 - p_abs);
    let mut bound = lead * p_abs;
    let mut j = 0usize;
    while bound >= tol {
        j += 1;
        bound *= p_abs;
        if j > MAX_TERMS {
            return Err(EllipticError::TruncationLimit(p_abs));
        }
    }
    Ok(j)
}

/// `theta(x; p)` truncated to tolerance `tol`.
pub fn theta(x: Complex64, p: Complex64, tol: f64) -> Result<ThetaValue, EllipticError> {
    if x.norm() == 0.0 {
        return Err(EllipticError::ZeroArgument);
    }
    let p_abs = p.norm();
    if p_abs >= 1.0 || !p_abs.is_finite() {
        return Err(EllipticError::Divergent(p_abs));
    }
    if p_abs == 0.0 {
        return Ok(ThetaValue {
            value: c(1.0) - x,
            truncation_terms: 0,
        });
    }
    let j_max = truncation_index(x, p_abs, tol)?;
    Ok(ThetaValue {
        value: theta_terms(x, p, j_max),
        truncation_terms: j_max,
    })
}

/// `prod_{j=0}^{j_max} (1 - x p^j)(1 - p^{j+1}/x)`.
pub fn theta_terms(x: Complex64, p: Complex64, j_max: usize) -> Complex64 {
    let mut acc = c(1.0);
    let mut pj = c(1.0);
    let inv = x.inv();
    for _ in 0..=j_max {
        let next = pj * p;
        acc *= (c(1.0) - x * pj) * (c(1.0) - next * inv);
        pj = next;
    }
    acc
}

/// `theta(x_1, ..., x_r; p)`, the product of the individual thetas.
pub fn theta_multi(args: &[Complex64], p: Complex64, tol: f64) -> Result<Complex64, EllipticError> {
    args.iter()
        .try_fold(c(1.0), |acc, &x| Ok(acc * theta(x, p, tol)?.value))
}

/// Nome, base and the two free parameters of the elliptic weights.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticParams {
    pub a: Complex64,
    pub b: Complex64,
    pub q: Complex64,
    pub p: Complex64,
    pub tol: f64,
    pub pole_floor: f64,
}

impl EllipticParams {
    pub fn new(
        a: Complex64,
        b: Complex64,
        q: Complex64,
        p: Complex64,
    ) -> Result<Self, EllipticError> {
        let params = EllipticParams {
            a,
            b,
            q,
            p,
            tol: DEFAULT_TOL,
            pole_floor: POLE_FLOOR,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_ab(self, a: Complex64, b: Complex64) -> Result<Self, EllipticError> {
        let mut out = self;
        out.a = a;
        out.b = b;
        out.validate()?;
        Ok(out)
    }

    pub fn validate(&self) -> Result<(), EllipticError> {
        for (name, v) in [("a", self.a), ("b", self.b), ("q", self.q)] {
            if v.norm() == 0.0 || !v.is_finite() {
                return Err(EllipticError::InvalidParams(format!(
                    "{name} must be a nonzero finite number"
                )));
            }
        }
        let pa = self.p.norm();
        if pa >= 1.0 || !pa.is_finite() {
            return Err(EllipticError::Divergent(pa));
        }
        if self.tol <= 0.0 || !self.tol.is_finite() {
            return Err(EllipticError::InvalidParams(
                "tolerance must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Draws parameters from `rng`: `|p|` in `[0.05, 0.4]`, `q` near the
    /// unit circle, `a`, `b` with moduli in `[0.4, 2.5]`. Draws whose
    /// weights `w_n` for `0 <= n <= max_index` come near a pole (any
    /// denominator theta below `1e-4`) are rejected and redrawn.
    pub fn sample<R: Rng>(rng: &mut R, max_index: i64) -> Self {
        loop {
            let polar = |rng: &mut R, lo: f64, hi: f64| {
                Complex64::from_polar(
                    rng.random_range(lo..hi),
                    rng.random_range(-std::f64::consts::PI..std::f64::consts::PI),
                )
            };
            let a = polar(rng, 0.4, 2.5);
            let b = polar(rng, 0.4, 2.5);
            let q = Complex64::from_polar(rng.random_range(0.85..1.0), rng.random_range(-0.6..0.6));
            let p = polar(rng, 0.05, 0.4);
            let Ok(params) = EllipticParams::new(a, b, q, p) else {
                continue;
            };
            let guarded = EllipticParams {
                pole_floor: 1e-4,
                ..params
            };
            if (0..=max_index).all(|n| weight_elliptic(n, &guarded).is_ok()) {
                return params;
            }
        }
    }

    /// [`sample`](Self::sample) driven by a ChaCha8 stream seeded with
    /// `seed`, so a seed names one parameter point on every platform.
    pub fn seeded(seed: u64, max_index: i64) -> Self {
        EllipticParams::sample(&mut ChaCha8Rng::seed_from_u64(seed), max_index)
    }

    fn theta(&self, x: Complex64) -> Result<Complex64, EllipticError> {
        Ok(theta(x, self.p, self.tol)?.value)
    }

    /// `prod theta(num) / prod theta(den)`, with pole checks on `den`.
    fn quotient(
        &self,
        num: &[Complex64],
        den: &[(&str, Complex64)],
    ) -> Result<Complex64, EllipticError> {
        let mut d = c(1.0);
        for &(label, x) in den {
            if x.norm() == 0.0 {
                return Err(EllipticError::Pole {
                    factor: format!("theta({label}) at zero argument"),
                    modulus: 0.0,
                });
            }
            let t = self.theta(x)?;
            if t.norm() < self.pole_floor || !t.is_finite() {
                return Err(EllipticError::Pole {
                    factor: format!("theta({label})"),
                    modulus: t.norm(),
                });
            }
            d *= t;
        }
        let mut n = c(1.0);
        for &x in num {
            n *= self.theta(x)?;
        }
        Ok(n / d)
    }
}

fn qp(q: Complex64, e: i64) -> Complex64 {
    q.powi(e as i32)
}

/// The elliptic Fibonacci weight
/// `w_n = theta(aq, aq^2, bq^{1-2n}, aq/b, a/b) / theta(aq^{1-n}, aq^{2-n}, bq, aq^{1+n}/b, aq^n/b) * q^n`.
pub fn weight_elliptic(n: i64, params: &EllipticParams) -> Result<Complex64, EllipticError> {
    let EllipticParams { a, b, q, .. } = *params;
    let num = [a * q, a * qp(q, 2), b * qp(q, 1 - 2 * n), a * q / b, a / b];
    let den = [
        ("aq^(1-n)", a * qp(q, 1 - n)),
        ("aq^(2-n)", a * qp(q, 2 - n)),
        ("bq", b * q),
        ("aq^(1+n)/b", a * qp(q, 1 + n) / b),
        ("aq^n/b", a * qp(q, n) / b),
    ];
    Ok(params.quotient(&num, &den)? * qp(q, n))
}

/// The weight `W_{a,b;q,p}(k)` of the elliptic numbers:
/// `theta(aq^{2k+1}, bq, bq^2, aq^{-1}/b, a/b) / theta(aq, bq^{k+1}, bq^{k+2}, aq^{k-1}/b, aq^k/b) * q^k`.
pub fn weight_sy(k: i64, params: &EllipticParams) -> Result<Complex64, EllipticError> {
    let EllipticParams { a, b, q, .. } = *params;
    let num = [
        a * qp(q, 2 * k + 1),
        b * q,
        b * qp(q, 2),
        a / (q * b),
        a / b,
    ];
    let den = [
        ("aq", a * q),
        ("bq^(k+1)", b * qp(q, k + 1)),
        ("bq^(k+2)", b * qp(q, k + 2)),
        ("aq^(k-1)/b", a * qp(q, k - 1) / b),
        ("aq^k/b", a * qp(q, k) / b),
    ];
    Ok(params.quotient(&num, &den)? * qp(q, k))
}

/// The elliptic number
/// `[n]_{a,b} = theta(q^n, aq^n, bq^2, a/b) / theta(q, aq, bq^{n+1}, aq^{n-1}/b)`.
pub fn elliptic_number(n: i64, params: &EllipticParams) -> Result<Complex64, EllipticError> {
    let EllipticParams { a, b, q, .. } = *params;
    let num = [qp(q, n), a * qp(q, n), b * qp(q, 2), a / b];
    let den = [
        ("q", q),
        ("aq", a * q),
        ("bq^(n+1)", b * qp(q, n + 1)),
        ("aq^(n-1)/b", a * qp(q, n - 1) / b),
    ];
    params.quotient(&num, &den)
}

/// The degenerate weights at `p = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SpecialCase {
    /// `p = 0`.
    Abq,
    /// `p = 0`, then `b -> 0` or `b -> infinity`.
    Aq,
    /// `p = 0`, then `a -> 0` or `a -> infinity`.
    Bq,
    /// Both limits: `w_n = q^n`.
    Q,
}

impl std::str::FromStr for SpecialCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "abq" => Ok(SpecialCase::Abq),
            "aq" => Ok(SpecialCase::Aq),
            "bq" => Ok(SpecialCase::Bq),
            "q" => Ok(SpecialCase::Q),
            other => Err(format!(
                "unknown special case `{other}` (expected abq, aq, bq or q)"
            )),
        }
    }
}

fn one_minus_checked(label: &str, x: Complex64) -> Result<Complex64, EllipticError> {
    let v = c(1.0) - x;
    if v.norm() < POLE_FLOOR {
        return Err(EllipticError::Pole {
            factor: format!("(1-{label})"),
            modulus: v.norm(),
        });
    }
    Ok(v)
}

/// Closed forms of the weight in the four degenerate cases.
pub fn weight_special(
    case: SpecialCase,
    n: i64,
    a: Complex64,
    b: Complex64,
    q: Complex64,
) -> Result<Complex64, EllipticError> {
    let one = c(1.0);
    match case {
        SpecialCase::Abq => {
            let num = (one - a * q)
                * (one - a * qp(q, 2))
                * (one - b * qp(q, 1 - 2 * n))
                * (one - a * q / b)
                * (one - a / b);
            let den = one_minus_checked("aq^(1-n)", a * qp(q, 1 - n))?
                * one_minus_checked("aq^(2-n)", a * qp(q, 2 - n))?
                * one_minus_checked("bq", b * q)?
                * one_minus_checked("aq^(1+n)/b", a * qp(q, 1 + n) / b)?
                * one_minus_checked("aq^n/b", a * qp(q, n) / b)?;
            Ok(num / den * qp(q, n))
        }
        SpecialCase::Aq => {
            let num = (one - a * q) * (one - a * qp(q, 2));
            let den = one_minus_checked("aq^(1-n)", a * qp(q, 1 - n))?
                * one_minus_checked("aq^(2-n)", a * qp(q, 2 - n))?;
            Ok(num / den * qp(q, -n))
        }
        SpecialCase::Bq => {
            let den = one_minus_checked("bq", b * q)?;
            Ok((one - b * qp(q, 1 - 2 * n)) / den * qp(q, n))
        }
        SpecialCase::Q => Ok(qp(q, n)),
    }
}

/// `coeff * a^ea * b^eb * q^eq` with possibly negative exponents.
fn monomial_rf(ea: i64, eb: i64, eq: i64) -> RationalFn {
    let mut up = Vec::new();
    let mut down = Vec::new();
    for (v, e) in [(Var::A, ea), (Var::B, eb), (Var::Q, eq)] {
        if e > 0 {
            up.push((v, e as u32));
        } else if e < 0 {
            down.push((v, (-e) as u32));
        }
    }
    let num = Poly::term(1, crate::poly::Monomial::from_powers(up));
    let den = Poly::term(1, crate::poly::Monomial::from_powers(down));
    RationalFn::new(num, den).expect("monomial denominators are nonzero")
}

fn one_minus(x: RationalFn) -> RationalFn {
    RationalFn::one().sub(&x)
}

/// The degenerate weights as exact rational functions of `a`, `b`, `q`.
pub fn weight_special_exact(case: SpecialCase, n: i64) -> RationalFn {
    let mono = monomial_rf;
    match case {
        SpecialCase::Abq => {
            let num = [
                one_minus(mono(1, 0, 1)),
                one_minus(mono(1, 0, 2)),
                one_minus(mono(0, 1, 1 - 2 * n)),
                one_minus(mono(1, -1, 1)),
                one_minus(mono(1, -1, 0)),
            ];
            let den = [
                one_minus(mono(1, 0, 1 - n)),
                one_minus(mono(1, 0, 2 - n)),
                one_minus(mono(0, 1, 1)),
                one_minus(mono(1, -1, 1 + n)),
                one_minus(mono(1, -1, n)),
            ];
            quotient_exact(&num, &den).mul(&mono(0, 0, n))
        }
        SpecialCase::Aq => {
            let num = [one_minus(mono(1, 0, 1)), one_minus(mono(1, 0, 2))];
            let den = [one_minus(mono(1, 0, 1 - n)), one_minus(mono(1, 0, 2 - n))];
            quotient_exact(&num, &den).mul(&mono(0, 0, -n))
        }
        SpecialCase::Bq => {
            let num = [one_minus(mono(0, 1, 1 - 2 * n))];
            let den = [one_minus(mono(0, 1, 1))];
            quotient_exact(&num, &den).mul(&mono(0, 0, n))
        }
        SpecialCase::Q => mono(0, 0, n),
    }
}

fn quotient_exact(num: &[RationalFn], den: &[RationalFn]) -> RationalFn {
    let n = num.iter().fold(RationalFn::one(), |acc, x| acc.mul(x));
    let d = den.iter().fold(RationalFn::one(), |acc, x| acc.mul(x));
    n.try_div(&d)
        .expect("factors (1 - monomial) with nonzero exponent never vanish identically")
}

/// The `a;q` bracket `(q^{k-1}/a; q)_k / (q^{n-1}/a; q)_k * [n choose k]_q`.
pub fn bracket_aq(n: i64, k: i64, a: Complex64, q: Complex64) -> Result<Complex64, EllipticError> {
    if k < 0 || k > n {
        return Ok(c(0.0));
    }
    let ku = k as usize;
    let top = qseries::qpochhammer(qp(q, k - 1) / a, q, ku);
    let bottom = qseries::qpochhammer(qp(q, n - 1) / a, q, ku);
    if bottom.norm() < POLE_FLOOR {
        return Err(EllipticError::Pole {
            factor: "(q^(n-1)/a; q)_k".into(),
            modulus: bottom.norm(),
        });
    }
    Ok(top / bottom * qseries::qbinom_at(n, k, q))
}

/// The `a;q` bracket as an exact rational function of `a` and `q`.
pub fn bracket_aq_exact(n: i64, k: i64) -> RationalFn {
    if k < 0 || k > n {
        return RationalFn::zero();
    }
    let ku = k as usize;
    let q = monomial_rf(0, 0, 1);
    let top = qseries::qpochhammer_exact(&monomial_rf(-1, 0, k - 1), &q, ku);
    let bottom = qseries::qpochhammer_exact(&monomial_rf(-1, 0, n - 1), &q, ku);
    top.try_div(&bottom)
        .expect("(q^(n-1)/a; q)_k is a nonzero rational function")
        .mul(&RationalFn::from(qseries::qbinom(n, k)))
}
