//! Weighted Fibonacci numbers with arbitrary weights, their elliptic
//! specialization, and a harness that checks identities between them.
//!
//! * [`poly`] and [`rational`]: exact polynomials in the weights `w_i` (and
//!   `q`, `a`, `b`) and quotients compared by cross-multiplication.
//! * [`tiling`]: brute-force enumeration of square/domino tilings, the
//!   combinatorial ground truth.
//! * [`fib`]: the recurrences `f_n`, `f_n^(m)`, `g^n_k` over any weight
//!   backend, memoized.
//! * [`theta`]: the modified Jacobi theta function and the elliptic weights.
//! * [`identities`]: parametrized identity checks and sweep reports.

pub mod error;
pub mod fib;
pub mod identities;
pub mod poly;
pub mod qseries;
pub mod rational;
pub mod ring;
pub mod theta;
pub mod tiling;

pub use error::{Error, Result};
pub use fib::{FibEngine, WeightSource};
pub use identities::{IdentityId, IdentityReport, Params};
pub use poly::{Monomial, Poly, Var};
pub use rational::RationalFn;
pub use ring::{Field, Ring};
pub use theta::EllipticParams;
pub use tiling::Tiling;
