//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p wfib-core --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wfib::fib::{EllipticNumeric, QPower, SpecialExact, Symbolic, Unit};
use wfib::identities::{verify_grid, Grid, IdentityId, VerifyOptions};
use wfib::poly::Poly;
use wfib::qseries::qbinom;
use wfib::rational::RationalFn;
use wfib::ring::relative_residual;
use wfib::theta::{
    bracket_aq_exact, elliptic_number, theta, theta_multi, weight_elliptic, weight_special,
    weight_special_exact, weight_sy, EllipticParams, SpecialCase, DEFAULT_TOL,
};
use wfib::tiling::{total_weight, total_weight_by_tiles};
use wfib::FibEngine;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn z(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ac1_definition_equivalence() -> Outcome {
    let e = FibEngine::new(Symbolic);
    let mut count = 0;
    for m in 0..=6usize {
        for n in 0..=14usize {
            let oracle = total_weight(m + n, m).map_err(|e| e.to_string())?;
            let rec = e.fib_shifted(n + 1, m).map_err(|e| e.to_string())?;
            ensure(oracle == rec, || format!("mismatch at n={n} m={m}"))?;
            count += 1;
        }
    }
    Ok(format!("{count} (n, m) pairs"))
}

fn ac2_binomial_oracle() -> Outcome {
    let e = FibEngine::new(Symbolic);
    let mut count = 0;
    for n in 0..=10i64 {
        for k in 0..=n {
            let oracle = total_weight_by_tiles(n as usize, k).map_err(|e| e.to_string())?;
            let rec = e.gnk(n, k).map_err(|e| e.to_string())?;
            ensure(oracle == rec, || format!("g^{n}_{k} mismatch"))?;
            count += 1;
        }
        if n >= 1 {
            let row1: Poly = (1..=n as u32).map(Poly::w).fold(Poly::zero(), |a, b| a + b);
            let diag = Poly::product(
                &(1..=n as u32)
                    .map(|t| Poly::w(2 * t - 1))
                    .collect::<Vec<_>>(),
            );
            ensure(e.gnk(n, 1).unwrap() == row1, || {
                format!("g^{n}_1 closed form")
            })?;
            ensure(e.gnk(n, n).unwrap() == diag, || {
                format!("g^{n}_{n} closed form")
            })?;
        }
    }
    Ok(format!("{count} entries, row-1 and diagonal closed forms"))
}

fn ac3_exact_suite() -> Outcome {
    let e = FibEngine::new(Symbolic);
    let opts = VerifyOptions::default();
    let ids = [
        IdentityId::SumWf,
        IdentityId::Fib71,
        IdentityId::Fib81,
        IdentityId::Fib21,
        IdentityId::Fib31,
        IdentityId::Fib41,
        IdentityId::Fib61,
        IdentityId::Fib61b,
        IdentityId::Fib5,
        IdentityId::Fib6,
        IdentityId::Fib11,
        IdentityId::TelescopeGeneric,
    ];
    let mut total = 0;
    for id in ids {
        let out = verify_grid(id, &id.default_grid(), &e, &opts).map_err(|e| e.to_string())?;
        if let Some((p, err)) = out.errors.first() {
            return Err(format!("{id} at {p}: {err}"));
        }
        if let Some(r) = out.reports.iter().find(|r| !r.pass) {
            return Err(format!("{id} fails at {}", r.params));
        }
        total += out.reports.len();
    }
    let parities: Vec<bool> = {
        let mut g = Grid::new();
        g.insert("n".into(), (1, 2));
        g.insert("i".into(), (0, 0));
        g.insert("j".into(), (0, 0));
        let out = verify_grid(IdentityId::Fib81, &g, &e, &opts).map_err(|e| e.to_string())?;
        out.reports.iter().map(|r| r.pass).collect()
    };
    ensure(parities == [true, true], || "FIB81 parity check".into())?;
    Ok(format!("{total} index points, all rf_eq"))
}

fn ac4_q_reduction() -> Outcome {
    let e = FibEngine::new(QPower);
    for n in 0..=10i64 {
        for k in 0..=n {
            let expect = Poly::q_pow((k * k) as u32) * qbinom(n, k);
            ensure(e.gnk(n, k).unwrap() == expect, || {
                format!("q-reduction at n={n} k={k}")
            })?;
        }
    }
    let w = |i: i64| weight_special_exact(SpecialCase::Aq, i);
    let aq = FibEngine::new(SpecialExact(SpecialCase::Aq));
    let mut checked = 0;
    for n in 1..=8i64 {
        for k in 1..=n {
            let lhs = bracket_aq_exact(n, k);
            let rhs = w(n + k - 1)
                .try_div(&w(2 * k - 1))
                .map_err(|e| e.to_string())?
                .mul(&bracket_aq_exact(n - 1, k - 1))
                .add(&bracket_aq_exact(n - 1, k));
            ensure(lhs.rf_eq(&rhs), || {
                format!("a;q bracket recurrence at n={n} k={k}")
            })?;
            checked += 1;
        }
    }
    for n in 0..=5i64 {
        for k in 0..=n {
            let via_engine: RationalFn = aq.bracket_w(n, k).map_err(|e| e.to_string())?;
            ensure(via_engine.rf_eq(&bracket_aq_exact(n, k)), || {
                format!("a;q bracket closed form vs g/prod w at n={n} k={k}")
            })?;
        }
    }
    Ok(format!(
        "q-binomials n <= 10, a;q recurrence at {checked} points"
    ))
}

fn ac5_classical() -> Outcome {
    let e = FibEngine::new(Unit);
    ensure(e.fib(10).unwrap() == 55.into(), || "F_10 != 55".into())?;
    let opts = VerifyOptions::default();
    let mut total = 0;
    for id in [
        IdentityId::VajdaClassical,
        IdentityId::Cassini,
        IdentityId::Catalan,
    ] {
        let out = verify_grid(id, &id.grid_up_to(20), &e, &opts).map_err(|e| e.to_string())?;
        ensure(out.all_pass(), || format!("{id} fails"))?;
        total += out.reports.len();
    }
    Ok(format!("F_10 = 55, {total} classical points"))
}

fn ac6_theta() -> Outcome {
    let mut r = rng(6);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = EllipticParams::sample(&mut r, 0).p;
        let params = EllipticParams::sample(&mut r, 0);
        let (x, y, u, v) = (params.a, params.b, params.q, params.a * params.b);
        let th = |args: &[Complex64]| theta_multi(args, p, DEFAULT_TOL).unwrap();
        let t = th(&[x]);
        worst = worst.max(relative_residual(t, th(&[p / x])));
        worst = worst.max(relative_residual(t, -x * th(&[x.inv()])));
        let lhs = th(&[x * y, x / y, u * v, u / v]) - th(&[x * v, x / v, u * y, u / y]);
        let rhs = u / y * th(&[y * v, y / v, x * u, x / u]);
        let scale = 1f64.max(lhs.norm()).max(rhs.norm());
        worst = worst.max((lhs - rhs).norm() / scale);
    }
    ensure(worst < 1e-10, || format!("worst residual {worst:e}"))?;
    for a in [z(2.0, 0.0), z(-0.3, 1.7), z(1e-3, 0.0)] {
        let t = theta(a, z(0.0, 0.0), DEFAULT_TOL).unwrap().value;
        ensure(t == z(1.0, 0.0) - a, || format!("theta({a}, 0) != 1 - a"))?;
    }
    Ok(format!("100 draws, worst residual {worst:.1e}"))
}

fn ac7_elliptic_structure() -> Outcome {
    let mut r = rng(7);
    let (mut rel, mut rec, mut per): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..20 {
        let params = EllipticParams::sample(&mut r, 6);
        let swapped = params
            .with_ab(params.b, params.a)
            .map_err(|e| e.to_string())?;
        for n in -3..=6 {
            let (Ok(w), Ok(sy)) = (weight_elliptic(n, &params), weight_sy(-n, &swapped)) else {
                continue;
            };
            rel = rel.max(relative_residual(w, sy));
        }
        for m in 1..=5i64 {
            for n in 0..=m {
                let shifted = params
                    .with_ab(
                        params.a * params.q.powi(2 * n as i32),
                        params.b * params.q.powi(n as i32),
                    )
                    .map_err(|e| e.to_string())?;
                let (Ok(en), Ok(wn), Ok(tail), Ok(em)) = (
                    elliptic_number(n, &params),
                    weight_sy(n, &params),
                    elliptic_number(m - n, &shifted),
                    elliptic_number(m, &params),
                ) else {
                    continue;
                };
                let lhs = en + wn * tail;
                rec = rec.max((lhs - em).norm() / 1f64.max(em.norm()));
            }
        }
        let pa = params
            .with_ab(params.a * params.p, params.b)
            .map_err(|e| e.to_string())?;
        let pb = params
            .with_ab(params.a, params.b * params.p)
            .map_err(|e| e.to_string())?;
        for n in 0..=6 {
            let base = weight_elliptic(n, &params).map_err(|e| e.to_string())?;
            for moved in [&pa, &pb] {
                if let Ok(w) = weight_elliptic(n, moved) {
                    per = per.max(relative_residual(base, w));
                }
            }
        }
    }
    ensure(rel < 1e-10, || format!("relation residual {rel:e}"))?;
    ensure(rec < 1e-9, || {
        format!("elliptic-number recurrence residual {rec:e}")
    })?;
    ensure(per < 1e-9, || format!("quasi-periodicity residual {per:e}"))?;
    Ok(format!(
        "relation {rel:.1e}, recurrence {rec:.1e}, periodicity {per:.1e}"
    ))
}

fn ac8_degeneration_ladder() -> Outcome {
    let mut r = rng(8);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let s = EllipticParams::sample(&mut r, 6);
        let p0 = EllipticParams::new(s.a, s.b, s.q, z(0.0, 0.0)).map_err(|e| e.to_string())?;
        for n in 0..=6 {
            let e = weight_elliptic(n, &p0).map_err(|e| e.to_string())?;
            let c =
                weight_special(SpecialCase::Abq, n, s.a, s.b, s.q).map_err(|e| e.to_string())?;
            worst = worst.max(relative_residual(e, c));
        }
    }
    ensure(worst < 1e-12, || format!("p = 0 residual {worst:e}"))?;

    let (a, b, q) = (z(0.7, 0.2), z(1.3, -0.4), z(0.8, 0.3));
    let probe = |target: SpecialCase,
                 scale: &dyn Fn(i32) -> (Complex64, Complex64)|
     -> Result<Vec<f64>, String> {
        (0..4)
            .map(|step| {
                let (aa, bb) = scale(step);
                let mut res: f64 = 0.0;
                for n in 1..=4 {
                    let abq = weight_special(SpecialCase::Abq, n, aa, bb, q)
                        .map_err(|e| e.to_string())?;
                    let lim = weight_special(target, n, aa, bb, q).map_err(|e| e.to_string())?;
                    res = res.max(relative_residual(abq, lim));
                }
                Ok(res)
            })
            .collect()
    };
    let to_aq = probe(SpecialCase::Aq, &|k| (a, b * 1e3f64.powi(k)))?;
    let to_bq = probe(SpecialCase::Bq, &|k| (a * 1e-3f64.powi(k), b))?;
    for (name, seq) in [("b -> infinity", &to_aq), ("a -> 0", &to_bq)] {
        ensure(seq.windows(2).all(|w| w[1] < w[0]), || {
            format!("{name} residuals not shrinking: {seq:?}")
        })?;
    }
    Ok(format!(
        "p = 0 residual {worst:.1e}; aq probe {:.0e} -> {:.0e}; bq probe {:.0e} -> {:.0e}",
        to_aq[0], to_aq[3], to_bq[0], to_bq[3]
    ))
}

fn ac9_numeric_suite() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut total = 0;
    for seed in 0..5u64 {
        let params = EllipticParams::sample(&mut rng(seed), 20);
        let e = FibEngine::new(EllipticNumeric::seeded(params, seed));
        let opts = VerifyOptions {
            seed: Some(seed),
            ..VerifyOptions::default()
        };
        for id in [IdentityId::Fib71, IdentityId::Fib81] {
            let out = verify_grid(id, &id.default_grid(), &e, &opts).map_err(|e| e.to_string())?;
            if let Some((p, err)) = out.errors.first() {
                return Err(format!("{id} seed {seed} at {p}: {err}"));
            }
            for rep in &out.reports {
                worst = worst.max(rep.residual);
            }
            total += out.reports.len();
        }
    }
    ensure(worst < 1e-8, || format!("worst residual {worst:e}"))?;
    Ok(format!(
        "{total} points over 5 draws, worst residual {worst:.1e}"
    ))
}

struct Criterion {
    label: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            label: "AC1 definition equivalence",
            budget: secs(10),
            run: ac1_definition_equivalence,
        },
        Criterion {
            label: "AC2 g^n_k oracle",
            budget: secs(5),
            run: ac2_binomial_oracle,
        },
        Criterion {
            label: "AC3 exact identity suite",
            budget: secs(120),
            run: ac3_exact_suite,
        },
        Criterion {
            label: "AC4 q-reduction",
            budget: secs(60),
            run: ac4_q_reduction,
        },
        Criterion {
            label: "AC5 classical degenerations",
            budget: secs(60),
            run: ac5_classical,
        },
        Criterion {
            label: "AC6 theta properties",
            budget: secs(60),
            run: ac6_theta,
        },
        Criterion {
            label: "AC7 elliptic weight structure",
            budget: secs(60),
            run: ac7_elliptic_structure,
        },
        Criterion {
            label: "AC8 degeneration ladder",
            budget: secs(60),
            run: ac8_degeneration_ladder,
        },
        Criterion {
            label: "AC9 numeric identity suite",
            budget: secs(60),
            run: ac9_numeric_suite,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > c.budget => Err(format!("{detail}; over budget {:?}", c.budget)),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS {} ({detail}) [{:.2}s]", c.label, took.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {} ({why}) [{:.2}s]", c.label, took.as_secs_f64());
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
