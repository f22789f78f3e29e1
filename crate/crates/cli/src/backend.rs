use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use wfib::fib::{EllipticNumeric, Explicit};
use wfib::EllipticParams;

use crate::CliError;

/// Largest weight index a seeded elliptic draw is screened against.
const SEED_SCREEN: i64 = 40;

/// Weight backend named on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum BackendSpec {
    Symbolic,
    Q,
    Unit,
    Explicit(PathBuf),
    /// Parameters drawn from the seed given with `--seed`.
    EllipticSeeded,
    Elliptic([Complex64; 4]),
}

impl FromStr for BackendSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "symbolic" => return Ok(BackendSpec::Symbolic),
            "q" => return Ok(BackendSpec::Q),
            "unit" => return Ok(BackendSpec::Unit),
            "elliptic" => return Ok(BackendSpec::EllipticSeeded),
            _ => {}
        }
        if let Some(path) = s.strip_prefix("explicit:") {
            if path.is_empty() {
                return Err("explicit backend needs a file: explicit:FILE".into());
            }
            return Ok(BackendSpec::Explicit(PathBuf::from(path)));
        }
        if let Some(list) = s.strip_prefix("elliptic:") {
            let values: Vec<Complex64> = list
                .split(',')
                .map(parse_complex)
                .collect::<Result<_, _>>()?;
            let values: [Complex64; 4] = values
                .try_into()
                .map_err(|_| "elliptic backend takes four values: elliptic:a,b,q,p".to_string())?;
            return Ok(BackendSpec::Elliptic(values));
        }
        Err(format!(
            "unknown backend `{s}` (expected symbolic, q, unit, explicit:FILE, elliptic or elliptic:a,b,q,p)"
        ))
    }
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    Complex64::from_str(t)
        .map_err(|_| format!("`{t}` is not a number (examples: 2, -0.5, 0.3+0.1i)"))
}

/// A backend ready to drive a [`wfib::FibEngine`].
pub enum Backend {
    Symbolic,
    Q,
    Unit,
    Explicit(Explicit<BigRational>),
    Elliptic(EllipticNumeric),
}

impl Backend {
    pub fn open(spec: &BackendSpec, seed: Option<u64>, tol: Option<f64>) -> Result<Self, CliError> {
        Ok(match spec {
            BackendSpec::Symbolic => Backend::Symbolic,
            BackendSpec::Q => Backend::Q,
            BackendSpec::Unit => Backend::Unit,
            BackendSpec::Explicit(path) => Backend::Explicit(
                Explicit::from_file(path).map_err(|e| CliError::Usage(e.to_string()))?,
            ),
            BackendSpec::EllipticSeeded => {
                let seed = seed.unwrap_or(0);
                let mut params = EllipticParams::seeded(seed, SEED_SCREEN);
                if let Some(tol) = tol {
                    params = params.with_tol(tol);
                }
                Backend::Elliptic(EllipticNumeric::seeded(params, seed))
            }
            BackendSpec::Elliptic([a, b, q, p]) => {
                let mut params = EllipticParams::new(*a, *b, *q, *p)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                if let Some(tol) = tol {
                    params = params.with_tol(tol);
                }
                Backend::Elliptic(match seed {
                    Some(s) => EllipticNumeric::seeded(params, s),
                    None => EllipticNumeric::new(params),
                })
            }
        })
    }

    /// Seed to record in numeric output.
    pub fn seed(&self) -> Option<u64> {
        match self {
            Backend::Elliptic(e) => e.seed,
            _ => None,
        }
    }
}

/// Runs `$body` with `$engine` bound to a [`wfib::FibEngine`] over the
/// selected backend.
macro_rules! with_engine {
    ($backend:expr, |$engine:ident| $body:expr) => {
        match $backend {
            $crate::backend::Backend::Symbolic => {
                let $engine = wfib::FibEngine::new(wfib::fib::Symbolic);
                $body
            }
            $crate::backend::Backend::Q => {
                let $engine = wfib::FibEngine::new(wfib::fib::QPower);
                $body
            }
            $crate::backend::Backend::Unit => {
                let $engine = wfib::FibEngine::new(wfib::fib::Unit);
                $body
            }
            $crate::backend::Backend::Explicit(w) => {
                let $engine = wfib::FibEngine::new(w);
                $body
            }
            $crate::backend::Backend::Elliptic(w) => {
                let $engine = wfib::FibEngine::new(*w);
                $body
            }
        }
    };
}
pub(crate) use with_engine;
