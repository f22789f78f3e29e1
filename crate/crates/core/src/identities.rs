//! Parametrized identity checks.
//!
//! Each [`IdentityId`] names one identity between weighted Fibonacci
//! numbers. [`evaluate`] assembles both sides from engine values in the
//! backend's field of fractions; [`verify`] compares them and packages a
//! [`IdentityReport`]. With the symbolic backend a pass is a polynomial
//! identity in the `w_i`, so it holds for every choice of weights at that
//! index point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fib::{FibEngine, Unit, WeightSource};
use crate::ring::{DivisionByZero, Field, Ring};

/// Relative tolerance for numeric backends.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Rendered sides longer than this are cut short in reports.
pub const DEFAULT_RENDER_LIMIT: usize = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    SumWf,
    Fib71,
    Fib81,
    Fib21,
    Fib31,
    Fib41,
    Fib61,
    Fib61b,
    TelescopeGeneric,
    Fib5,
    Fib6,
    Fib11,
    VajdaClassical,
    Cassini,
    Catalan,
}

/// One index an identity takes, with its smallest admissible value and the
/// largest value of the default sweep.
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub min: i64,
    pub default_max: i64,
}

/// A `&'static [ParamSpec]` from `(name, min, default_max)` triples.
macro_rules! specs {
    ($(($name:literal, $min:literal, $max:literal)),* $(,)?) => {{
        const S: &[ParamSpec] = &[$(ParamSpec { name: $name, min: $min, default_max: $max }),*];
        S
    }};
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::SumWf,
        IdentityId::Fib71,
        IdentityId::Fib81,
        IdentityId::Fib21,
        IdentityId::Fib31,
        IdentityId::Fib41,
        IdentityId::Fib61,
        IdentityId::Fib61b,
        IdentityId::TelescopeGeneric,
        IdentityId::Fib5,
        IdentityId::Fib6,
        IdentityId::Fib11,
        IdentityId::VajdaClassical,
        IdentityId::Cassini,
        IdentityId::Catalan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::SumWf => "SUM_WF",
            IdentityId::Fib71 => "FIB71",
            IdentityId::Fib81 => "FIB81",
            IdentityId::Fib21 => "FIB21",
            IdentityId::Fib31 => "FIB31",
            IdentityId::Fib41 => "FIB41",
            IdentityId::Fib61 => "FIB61",
            IdentityId::Fib61b => "FIB61B",
            IdentityId::TelescopeGeneric => "TELESCOPE_GENERIC",
            IdentityId::Fib5 => "FIB5",
            IdentityId::Fib6 => "FIB6",
            IdentityId::Fib11 => "FIB11",
            IdentityId::VajdaClassical => "VAJDA_CLASSICAL",
            IdentityId::Cassini => "CASSINI",
            IdentityId::Catalan => "CATALAN",
        }
    }

    /// Indices in sweep order.
    pub fn params(self) -> &'static [ParamSpec] {
        match self {
            IdentityId::SumWf => specs![("n", 1, 10)],
            IdentityId::Fib71 => specs![("n", 1, 6), ("m", 1, 6)],
            IdentityId::Fib81 => specs![("n", 1, 5), ("i", 0, 4), ("j", 0, 4)],
            IdentityId::Fib21 => specs![("n", 1, 8)],
            IdentityId::Fib31 | IdentityId::Fib41 => specs![("n", 0, 8)],
            IdentityId::Fib61 => specs![("n", 1, 6)],
            IdentityId::Fib61b => specs![("n", 0, 6)],
            IdentityId::TelescopeGeneric => specs![("n", 1, 8)],
            IdentityId::Fib5 | IdentityId::Fib6 => specs![("n", 1, 8)],
            IdentityId::Fib11 => specs![("n", 1, 4), ("r", 0, 3), ("s", 0, 3)],
            IdentityId::VajdaClassical => specs![("n", 0, 20), ("i", 0, 20), ("j", 0, 20)],
            IdentityId::Cassini => specs![("n", 1, 20)],
            IdentityId::Catalan => specs![("n", 0, 20), ("i", 0, 20)],
        }
    }

    /// Identities about the classical numbers; always evaluated with unit
    /// weights whatever backend is requested.
    pub fn is_classical(self) -> bool {
        matches!(
            self,
            IdentityId::VajdaClassical | IdentityId::Cassini | IdentityId::Catalan
        )
    }

    /// The default sweep: every index from its minimum to its default max.
    pub fn default_grid(self) -> Grid {
        self.params()
            .iter()
            .map(|s| (s.name.to_string(), (s.min, s.default_max)))
            .collect()
    }

    /// Every index from its minimum up to `max`.
    pub fn grid_up_to(self, max: i64) -> Grid {
        self.params()
            .iter()
            .map(|s| (s.name.to_string(), (s.min, max)))
            .collect()
    }

    /// Checks names and ranges, including constraints between indices.
    pub fn check(self, params: &Params) -> Result<()> {
        let id = self.name();
        for name in params.0.keys() {
            if !self.params().iter().any(|s| s.name == name) {
                return Err(Error::UnexpectedParam {
                    id,
                    name: name.clone(),
                });
            }
        }
        for spec in self.params() {
            let value = params.get(spec.name).ok_or(Error::MissingParam {
                id,
                name: spec.name,
            })?;
            if value < spec.min {
                return Err(Error::OutOfRange {
                    id,
                    name: spec.name,
                    value,
                    min: spec.min,
                });
            }
        }
        if self == IdentityId::Catalan && params.get("i") > params.get("n") {
            return Err(Error::Invalid(format!(
                "CATALAN needs i <= n, got i={} n={}",
                params.get("i").unwrap_or_default(),
                params.get("n").unwrap_or_default()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == upper)
            .ok_or_else(|| Error::Invalid(format!("unknown identity `{s}`")))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Index assignment, e.g. `n=3, i=0, j=2`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Params(pub BTreeMap<String, i64>);

impl Params {
    pub fn new() -> Self {
        Params::default()
    }

    pub fn with(mut self, name: &str, value: i64) -> Self {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn get(&self, name: &str) -> Option<i64> {
        self.0.get(name).copied()
    }

    /// Values in the identity's declared order.
    fn tuple(&self, id: IdentityId) -> Vec<i64> {
        id.params()
            .iter()
            .map(|s| self.get(s.name).unwrap_or(i64::MIN))
            .collect()
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(","))
    }
}

impl<S: Into<String>> FromIterator<(S, i64)> for Params {
    fn from_iter<I: IntoIterator<Item = (S, i64)>>(iter: I) -> Self {
        Params(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// Inclusive range per index name.
pub type Grid = BTreeMap<String, (i64, i64)>;

/// Both sides of an identity at one index point.
#[derive(Clone, Debug)]
pub struct Evaluation<F> {
    pub lhs: F,
    pub rhs: F,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub params: Params,
    pub backend: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub residual: f64,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub tol: f64,
    pub seed: Option<u64>,
    pub render_limit: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: DEFAULT_TOL,
            seed: None,
            render_limit: DEFAULT_RENDER_LIMIT,
        }
    }
}

type Frac<W> = <<W as WeightSource>::Value as Ring>::Frac;

/// Values of one engine lifted to its field of fractions.
struct Ctx<'a, W: WeightSource> {
    e: &'a FibEngine<W>,
}

impl<W: WeightSource> Ctx<'_, W> {
    fn f(&self, n: i64) -> Result<Frac<W>> {
        Ok(self.e.fib(index(n)?)?.into())
    }

    fn fs(&self, n: i64, m: i64) -> Result<Frac<W>> {
        Ok(self.e.fib_shifted(index(n)?, index(m)?)?.into())
    }

    fn w(&self, i: i64) -> Result<Frac<W>> {
        Ok(self.e.weight(i)?.into())
    }

    fn g(&self, n: i64, k: i64) -> Result<Frac<W>> {
        Ok(self.e.gnk(n, k)?.into())
    }

    /// `w_{start} w_{start+step} ...`, `count` factors.
    fn wprod(&self, start: i64, step: i64, count: i64) -> Result<Frac<W>> {
        let mut acc = Frac::<W>::one();
        for t in 0..count.max(0) {
            acc = acc.mul(&self.w(start + step * t)?);
        }
        Ok(acc)
    }
}

fn index(n: i64) -> Result<usize> {
    usize::try_from(n).map_err(|_| Error::Invalid(format!("negative index {n}")))
}

fn div<F: Field>(a: &F, b: &F) -> Result<F> {
    Ok(a.try_div(b)?)
}

/// Both sides of the telescoping lemma
/// `sum_{k=1}^n (u_k - v_k) u_1...u_{k-1} / (v_1...v_k) = u_1...u_n / (v_1...v_n) - 1`,
/// with `u[k-1] = u_k`.
pub fn telescope<F: Field>(u: &[F], v: &[F]) -> std::result::Result<Evaluation<F>, DivisionByZero> {
    assert_eq!(
        u.len(),
        v.len(),
        "telescope needs sequences of equal length"
    );
    let mut lhs = F::zero();
    let mut uprod = F::one();
    let mut vprod = F::one();
    for (uk, vk) in u.iter().zip(v) {
        vprod = vprod.mul(vk);
        lhs = lhs.add(&uk.sub(vk).mul(&uprod).try_div(&vprod)?);
        uprod = uprod.mul(uk);
    }
    let rhs = uprod.try_div(&vprod)?.sub(&F::one());
    Ok(Evaluation { lhs, rhs })
}

/// Both sides of `id` at `params`.
///
/// Classical identities ignore `engine` and use unit weights.
pub fn evaluate<W: WeightSource>(
    id: IdentityId,
    params: &Params,
    engine: &FibEngine<W>,
) -> Result<Evaluation<Frac<W>>> {
    id.check(params)?;
    let x = Ctx { e: engine };
    let n = params.get("n").unwrap_or(0);
    let get = |name: &str| params.get(name).unwrap_or(0);
    let one = Frac::<W>::one;

    let (lhs, rhs) = match id {
        IdentityId::SumWf => {
            let mut lhs = Frac::<W>::zero();
            for k in 1..=n {
                lhs = lhs.add(&x.w(k)?.mul(&x.f(k)?));
            }
            (lhs, x.f(n + 2)?.sub(&one()))
        }
        IdentityId::Fib71 => {
            let m = get("m");
            let lhs = x.f(m + n + 1)?;
            let rhs = x
                .f(m + 1)?
                .mul(&x.fs(n + 1, m)?)
                .add(&x.w(m)?.mul(&x.f(m)?).mul(&x.fs(n, m + 1)?));
            (lhs, rhs)
        }
        IdentityId::Fib81 => {
            let (i, j) = (get("i"), get("j"));
            let lhs = x.f(n + i + 1)?.mul(&x.fs(n + j + 1, i + 1)?);
            let tail = Frac::<W>::sign(n)
                .mul(&x.wprod(i + 1, 1, n)?)
                .mul(&x.f(i + 1)?)
                .mul(&x.fs(j + 1, n + i + 1)?);
            let rhs = x.f(n + i + j + 2)?.mul(&x.fs(n, i + 1)?).add(&tail);
            (lhs, rhs)
        }
        IdentityId::Fib21 => {
            let full = x.wprod(1, 2, n)?;
            let mut lhs = Frac::<W>::zero();
            for k in 1..=n {
                let ratio = div(&full, &x.wprod(1, 2, k)?)?;
                lhs = lhs.add(&ratio.mul(&x.f(2 * k)?));
            }
            (lhs, x.f(2 * n + 1)?.sub(&full))
        }
        IdentityId::Fib31 => {
            let full = x.wprod(2, 2, n)?;
            let mut lhs = Frac::<W>::zero();
            for k in 0..=n {
                let ratio = div(&full, &x.wprod(2, 2, k)?)?;
                lhs = lhs.add(&ratio.mul(&x.f(2 * k + 1)?));
            }
            (lhs, x.f(2 * n + 2)?)
        }
        IdentityId::Fib41 => {
            let full = x.wprod(1, 1, n)?;
            let mut lhs = Frac::<W>::zero();
            for k in 0..=n {
                let ratio = div(&full, &x.wprod(1, 1, k)?)?;
                let fk = x.f(k + 1)?;
                lhs = lhs.add(&ratio.mul(&fk).mul(&fk));
            }
            (lhs, x.f(n + 1)?.mul(&x.f(n + 2)?))
        }
        IdentityId::Fib61 | IdentityId::Fib61b => {
            let lift = i64::from(id == IdentityId::Fib61b);
            let mut lhs = Frac::<W>::zero();
            for k in 0..=n {
                lhs = lhs.add(&x.g(n, n - k)?.mul(&x.fs(k + lift, 2 * n - k)?));
            }
            (lhs, x.f(2 * n + lift)?)
        }
        IdentityId::TelescopeGeneric => {
            let mut u = Vec::new();
            let mut v = Vec::new();
            for k in 1..=n {
                u.push(x.w(2 * k)?);
                v.push(x.w(2 * k - 1)?);
            }
            let ev = telescope(&u, &v)?;
            (ev.lhs, ev.rhs)
        }
        IdentityId::Fib5 => {
            let mut lhs = Frac::<W>::zero();
            for k in 1..=n {
                let term = Frac::<W>::sign(k).mul(&div(&x.f(k + 2)?, &x.wprod(1, 1, k)?)?);
                lhs = lhs.add(&term);
            }
            let rhs = Frac::<W>::sign(n)
                .mul(&div(&x.f(n + 1)?, &x.wprod(1, 1, n)?)?)
                .sub(&one());
            (lhs, rhs)
        }
        IdentityId::Fib6 => {
            // prod_{j<=k} 1/(1 + w_j)
            let damp = |k: i64| -> Result<Frac<W>> {
                let mut acc = one();
                for j in 1..=k {
                    acc = div(&acc, &one().add(&x.w(j)?))?;
                }
                Ok(acc)
            };
            let mut lhs = Frac::<W>::zero();
            for k in 1..=n {
                let term = x.w(k - 1)?.mul(&x.w(k)?).mul(&damp(k)?).mul(&x.f(k - 1)?);
                lhs = lhs.add(&term);
            }
            (lhs, one().sub(&damp(n)?.mul(&x.f(n + 2)?)))
        }
        IdentityId::Fib11 => {
            let (r, s) = (get("r"), get("s"));
            let base = x.f(r + 1)?.mul(&x.fs(s + 1, r)?);
            let mut lhs = Frac::<W>::zero();
            let mut up = one();
            let mut down = one();
            for k in 1..=n {
                up = up.mul(&x.fs(s + k, r + k - 1)?);
                down = down.mul(&x.fs(s + k, r + k + 1)?);
                let term = Frac::<W>::sign(k)
                    .mul(&div(&one(), &x.wprod(r + 1, 1, k)?)?)
                    .mul(&div(&x.f(r + s + 2 * k + 1)?, &base)?)
                    .mul(&div(&up, &down)?);
                lhs = lhs.add(&term);
            }
            let mut up = one();
            for t in 1..=n {
                up = up.mul(&x.fs(s + t + 1, r + t)?);
            }
            let rhs = Frac::<W>::sign(n)
                .mul(&div(&one(), &x.wprod(r + 1, 1, n)?)?)
                .mul(&div(&x.f(r + n + 1)?, &x.f(r + 1)?)?)
                .mul(&div(&up, &down)?)
                .sub(&one());
            (lhs, rhs)
        }
        IdentityId::VajdaClassical | IdentityId::Cassini | IdentityId::Catalan => {
            let ev = classical(id, params)?;
            let lift = |v: num_rational::BigRational| -> Frac<W> {
                let n = Frac::<W>::from_integer(v.numer());
                let d = Frac::<W>::from_integer(v.denom());
                n.try_div(&d).expect("rational denominators are nonzero")
            };
            (lift(ev.lhs), lift(ev.rhs))
        }
    };
    Ok(Evaluation { lhs, rhs })
}

fn classical(id: IdentityId, params: &Params) -> Result<Evaluation<num_rational::BigRational>> {
    let e = FibEngine::new(Unit);
    let big = |n: i64| -> Result<num_rational::BigRational> { Ok(e.fib(index(n)?)?.into()) };
    type Q = num_rational::BigRational;
    let n = params.get("n").unwrap_or(0);
    let (lhs, rhs) = match id {
        IdentityId::VajdaClassical => {
            let (i, j) = (params.get("i").unwrap_or(0), params.get("j").unwrap_or(0));
            let lhs = big(n + i)? * big(n + j)? - big(n)? * big(n + i + j)?;
            (lhs, <Q as Ring>::sign(n) * big(i)? * big(j)?)
        }
        IdentityId::Cassini => {
            let lhs = big(n)? * big(n)? - big(n - 1)? * big(n + 1)?;
            (lhs, <Q as Ring>::sign(n - 1))
        }
        IdentityId::Catalan => {
            let i = params.get("i").unwrap_or(0);
            let lhs = big(n)? * big(n)? - big(n - i)? * big(n + i)?;
            (lhs, <Q as Ring>::sign(n - i) * big(i)? * big(i)?)
        }
        _ => unreachable!("not a classical identity"),
    };
    Ok(Evaluation { lhs, rhs })
}

/// FIB5, FIB6 and FIB11 routed through [`telescope`] with the sequences
/// `u`, `v` that produce them, oriented like [`evaluate`]'s sides.
pub fn evaluate_by_telescope<W: WeightSource>(
    id: IdentityId,
    params: &Params,
    engine: &FibEngine<W>,
) -> Result<Evaluation<Frac<W>>> {
    id.check(params)?;
    let x = Ctx { e: engine };
    let n = params.get("n").unwrap_or(0);
    let mut u = Vec::new();
    let mut v = Vec::new();
    let mut negate = false;
    for k in 1..=n {
        match id {
            IdentityId::Fib5 => {
                u.push(x.f(k + 1)?);
                v.push(x.w(k)?.mul(&x.f(k)?).neg());
            }
            IdentityId::Fib6 => {
                u.push(x.f(k + 2)?);
                v.push(Frac::<W>::one().add(&x.w(k)?).mul(&x.f(k + 1)?));
                negate = true;
            }
            IdentityId::Fib11 => {
                let (r, s) = (params.get("r").unwrap_or(0), params.get("s").unwrap_or(0));
                u.push(x.f(r + k + 1)?.mul(&x.fs(s + k + 1, r + k)?));
                v.push(
                    x.w(r + k)?
                        .mul(&x.f(r + k)?)
                        .mul(&x.fs(s + k, r + k + 1)?)
                        .neg(),
                );
            }
            other => {
                return Err(Error::Invalid(format!(
                    "{other} is not derived from the telescoping lemma"
                )))
            }
        }
    }
    let ev = telescope(&u, &v)?;
    Ok(if negate {
        Evaluation {
            lhs: ev.lhs.neg(),
            rhs: ev.rhs.neg(),
        }
    } else {
        ev
    })
}

fn clip(s: String, limit: usize) -> String {
    if s.len() <= limit {
        return s;
    }
    let mut cut = limit;
    while !s.is_char_boundary(cut) {
        cut -= 1;
    }
    format!("{}... ({} chars)", &s[..cut], s.len())
}

/// Checks `id` at `params` and reports the outcome.
pub fn verify<W: WeightSource>(
    id: IdentityId,
    params: &Params,
    engine: &FibEngine<W>,
    opts: &VerifyOptions,
) -> Result<IdentityReport> {
    let ev = evaluate(id, params, engine)?;
    let (pass, residual) = if <Frac<W> as Field>::EXACT {
        (ev.lhs.agrees(&ev.rhs, 0.0), 0.0)
    } else {
        let r = ev.lhs.residual(&ev.rhs);
        (r <= opts.tol, r)
    };
    let backend = if id.is_classical() {
        Unit.descriptor()
    } else {
        engine.descriptor()
    };
    Ok(IdentityReport {
        id,
        params: params.clone(),
        backend,
        lhs: clip(ev.lhs.render(), opts.render_limit),
        rhs: clip(ev.rhs.render(), opts.render_limit),
        pass,
        residual,
        seed: opts.seed,
    })
}

/// Outcome of a sweep: reports and per-point errors, both in sweep order.
#[derive(Debug, Default)]
pub struct GridOutcome {
    pub reports: Vec<IdentityReport>,
    pub errors: Vec<(Params, Error)>,
}

impl GridOutcome {
    /// Every point produced a passing report.
    pub fn all_pass(&self) -> bool {
        self.errors.is_empty() && self.reports.iter().all(|r| r.pass)
    }
}

/// All index points of `grid`, in lexicographic order of the identity's
/// parameter tuple. Points violating a cross-index constraint are skipped.
pub fn grid_points(id: IdentityId, grid: &Grid) -> Result<Vec<Params>> {
    let mut points = vec![Params::new()];
    for spec in id.params() {
        let &(lo, hi) = grid.get(spec.name).ok_or(Error::MissingParam {
            id: id.name(),
            name: spec.name,
        })?;
        points = points
            .into_iter()
            .flat_map(|pt| (lo..=hi).map(move |v| pt.clone().with(spec.name, v)))
            .collect();
    }
    for name in grid.keys() {
        if !id.params().iter().any(|s| s.name == name) {
            return Err(Error::UnexpectedParam {
                id: id.name(),
                name: name.clone(),
            });
        }
    }
    points.retain(|pt| !matches!(id.check(pt), Err(Error::Invalid(_))));
    points.sort_by_key(|pt| pt.tuple(id));
    Ok(points)
}

/// Verifies every point of `grid`; points run in parallel, results come
/// back in sweep order.
pub fn verify_grid<W: WeightSource>(
    id: IdentityId,
    grid: &Grid,
    engine: &FibEngine<W>,
    opts: &VerifyOptions,
) -> Result<GridOutcome> {
    let points = grid_points(id, grid)?;
    let results: Vec<(Params, Result<IdentityReport>)> = points
        .into_par_iter()
        .map(|pt| {
            let r = verify(id, &pt, engine, opts);
            (pt, r)
        })
        .collect();
    let mut out = GridOutcome::default();
    for (pt, r) in results {
        match r {
            Ok(rep) => out.reports.push(rep),
            Err(e) => out.errors.push((pt, e)),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fib::{Explicit, Symbolic};
    use crate::poly::Poly;
    use crate::rational::RationalFn;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn pts(pairs: &[(&str, i64)]) -> Params {
        pairs.iter().map(|&(k, v)| (k, v)).collect()
    }

    #[test]
    fn sum_wf_smallest() {
        let e = FibEngine::symbolic();
        let rep = verify(
            IdentityId::SumWf,
            &pts(&[("n", 1)]),
            &e,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(rep.pass);
        assert_eq!(rep.lhs, "w1");
        assert_eq!(rep.rhs, "w1");
        assert_eq!(rep.residual, 0.0);
        assert_eq!(rep.backend, "symbolic");
    }

    #[test]
    fn fib81_both_parities() {
        let e = FibEngine::symbolic();
        for n in [2, 3] {
            let rep = verify(
                IdentityId::Fib81,
                &pts(&[("n", n), ("i", 0), ("j", 0)]),
                &e,
                &VerifyOptions::default(),
            )
            .unwrap();
            assert!(rep.pass, "n={n}");
        }
    }

    #[test]
    fn fib41_unit_weights() {
        let e = FibEngine::new(Unit);
        let ev = evaluate(IdentityId::Fib41, &pts(&[("n", 3)]), &e).unwrap();
        assert_eq!(ev.lhs, BigRational::from_integer(BigInt::from(15)));
        assert_eq!(ev.rhs, BigRational::from_integer(BigInt::from(15)));
    }

    #[test]
    fn fib21_n2() {
        let e = FibEngine::symbolic();
        let ev = evaluate(IdentityId::Fib21, &pts(&[("n", 2)]), &e).unwrap();
        let w = |i| RationalFn::from(Poly::w(i));
        let f5 = RationalFn::from(e.fib(5).unwrap());
        assert!(ev.rhs.rf_eq(&f5.sub(&w(1).mul(&w(3)))));
        assert!(ev.lhs.rf_eq(&ev.rhs));
    }

    #[test]
    fn range_and_name_errors() {
        let e = FibEngine::symbolic();
        let o = VerifyOptions::default();
        assert!(matches!(
            verify(IdentityId::SumWf, &pts(&[("n", 0)]), &e, &o),
            Err(Error::OutOfRange { name: "n", .. })
        ));
        assert!(matches!(
            verify(IdentityId::Fib71, &pts(&[("n", 1)]), &e, &o),
            Err(Error::MissingParam { name: "m", .. })
        ));
        assert!(matches!(
            verify(IdentityId::SumWf, &pts(&[("n", 1), ("k", 2)]), &e, &o),
            Err(Error::UnexpectedParam { .. })
        ));
        assert!(matches!(
            verify(IdentityId::Fib61, &pts(&[("n", 0)]), &e, &o),
            Err(Error::OutOfRange { .. })
        ));
        assert!(
            verify(IdentityId::Fib61b, &pts(&[("n", 0)]), &e, &o)
                .unwrap()
                .pass
        );
        assert!(matches!(
            verify(IdentityId::Catalan, &pts(&[("n", 2), ("i", 3)]), &e, &o),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn telescope_examples() {
        let q = |v: i64| BigRational::from_integer(v.into());
        let ev = telescope(&[q(2), q(2), q(2)], &[q(1), q(1), q(1)]).unwrap();
        assert_eq!(ev.lhs, q(7));
        assert_eq!(ev.rhs, q(7));
        let same = telescope(&[q(3), q(-5)], &[q(3), q(-5)]).unwrap();
        assert_eq!(same.lhs, q(0));
        assert_eq!(same.rhs, q(0));
        assert!(telescope(&[q(1)], &[q(0)]).is_err());
    }

    #[test]
    fn telescope_route_matches_direct() {
        let e = FibEngine::symbolic();
        let cases = [
            (IdentityId::Fib5, pts(&[("n", 3)])),
            (IdentityId::Fib6, pts(&[("n", 3)])),
            (IdentityId::Fib11, pts(&[("n", 2), ("r", 0), ("s", 0)])),
            (IdentityId::Fib11, pts(&[("n", 2), ("r", 1), ("s", 2)])),
        ];
        for (id, p) in cases {
            let direct = evaluate(id, &p, &e).unwrap();
            let tele = evaluate_by_telescope(id, &p, &e).unwrap();
            assert!(tele.lhs.rf_eq(&tele.rhs), "{id} {p}");
            assert!(tele.lhs.rf_eq(&direct.lhs), "{id} {p}");
            assert!(tele.rhs.rf_eq(&direct.rhs), "{id} {p}");
        }
        assert!(evaluate_by_telescope(IdentityId::SumWf, &pts(&[("n", 1)]), &e).is_err());
    }

    #[test]
    fn classical_ignores_backend() {
        let e = FibEngine::new(Symbolic);
        let rep = verify(
            IdentityId::Cassini,
            &pts(&[("n", 5)]),
            &e,
            &VerifyOptions::default(),
        )
        .unwrap();
        assert!(rep.pass);
        assert_eq!(rep.backend, "unit");
        assert_eq!(rep.lhs, "1");
    }

    #[test]
    fn grid_order_and_counts() {
        let e = FibEngine::symbolic();
        let mut g = Grid::new();
        g.insert("n".into(), (1, 6));
        g.insert("m".into(), (1, 6));
        let out = verify_grid(IdentityId::Fib71, &g, &e, &VerifyOptions::default()).unwrap();
        assert_eq!(out.reports.len(), 36);
        assert!(out.all_pass());
        let first: Vec<_> = out.reports[..2]
            .iter()
            .map(|r| r.params.to_string())
            .collect();
        assert_eq!(first, ["m=1,n=1", "m=2,n=1"]);

        let cat = grid_points(IdentityId::Catalan, &IdentityId::Catalan.grid_up_to(3)).unwrap();
        assert_eq!(cat.len(), 10);
    }

    #[test]
    fn grid_collects_errors() {
        // Two weights only: larger n exhausts the list.
        let e = FibEngine::new(Explicit::new(
            vec![
                BigRational::from_integer(0.into()),
                BigRational::from_integer(3.into()),
            ],
            "short",
        ));
        let mut g = Grid::new();
        g.insert("n".into(), (1, 3));
        let out = verify_grid(IdentityId::SumWf, &g, &e, &VerifyOptions::default()).unwrap();
        assert!(!out.all_pass());
        assert!(!out.errors.is_empty());
        assert_eq!(out.reports.len() + out.errors.len(), 3);
    }

    #[test]
    fn report_json_keys() {
        let e = FibEngine::symbolic();
        let rep = verify(
            IdentityId::SumWf,
            &pts(&[("n", 2)]),
            &e,
            &VerifyOptions::default(),
        )
        .unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        assert!(json.starts_with(r#"{"id":"SUM_WF","params":{"n":2},"backend":"symbolic","lhs":"#));
        assert!(json.ends_with(r#""pass":true,"residual":0.0,"seed":null}"#));
    }

    #[test]
    fn names_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
        }
        assert_eq!("fib61b".parse::<IdentityId>().unwrap(), IdentityId::Fib61b);
        assert!("FIB99".parse::<IdentityId>().is_err());
    }
}
