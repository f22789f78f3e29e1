//! Gaussian binomials and q-shifted factorials.

use num_complex::Complex64;

use crate::poly::{Poly, Var};
use crate::rational::RationalFn;

/// `[n choose k]_q` as an exact polynomial in `q`, by the Pascal-type rule
/// `[n,k] = [n-1,k-1] + q^k [n-1,k]`. Zero outside `0 <= k <= n`.
pub fn qbinom(n: i64, k: i64) -> Poly {
    if n < 0 || k < 0 || k > n {
        return Poly::zero();
    }
    let k = k as usize;
    // row[j] holds [i, j] for the current i.
    let mut row = vec![Poly::zero(); k + 1];
    row[0] = Poly::one();
    for i in 1..=n as usize {
        for j in (1..=k.min(i)).rev() {
            let shifted = row[j].mul(&Poly::q_pow(j as u32));
            row[j] = row[j - 1].add(&shifted);
        }
    }
    row[k].clone()
}

/// `[n choose k]_q` at a complex base.
pub fn qbinom_at(n: i64, k: i64, q: Complex64) -> Complex64 {
    qbinom(n, k)
        .eval(|v| (v == Var::Q).then_some(q))
        .expect("q-binomial only involves q")
}

/// `(x; q)_k = (1 - x)(1 - xq)...(1 - xq^{k-1})`, numerically.
pub fn qpochhammer(x: Complex64, q: Complex64, k: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut term = x;
    for _ in 0..k {
        acc *= Complex64::new(1.0, 0.0) - term;
        term *= q;
    }
    acc
}

/// `(x; q)_k` for an exact `x`.
pub fn qpochhammer_exact(x: &RationalFn, q: &RationalFn, k: usize) -> RationalFn {
    let mut acc = RationalFn::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc = acc.mul(&RationalFn::one().sub(&term));
        term = term.mul(q);
    }
    acc
}
