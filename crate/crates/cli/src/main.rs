//! `wfib`: weighted Fibonacci numbers, tilings, theta values and identity
//! sweeps from the command line.
//!
//! Exit status: 0 all good, 1 an identity failed, 2 usage or parameter
//! error, 3 pole or resource error. Data goes to stdout, diagnostics to
//! stderr.

mod backend;
mod output;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use wfib::identities::{self, Grid, IdentityId, IdentityReport, VerifyOptions};
use wfib::ring::{render_complex, Ring};
use wfib::theta::{self, SpecialCase};
use wfib::tiling;
use wfib::{EllipticParams, FibEngine, WeightSource};

use backend::{parse_complex, with_engine, Backend, BackendSpec};
use output::{Format, Table};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<wfib::Error> for CliError {
    fn from(e: wfib::Error) -> Self {
        if e.is_numeric_or_resource() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<wfib::fib::WeightError> for CliError {
    fn from(e: wfib::fib::WeightError) -> Self {
        wfib::Error::from(e).into()
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Numeric(format!("write failed: {e}"))
    }
}

#[derive(Parser)]
#[command(
    name = "wfib",
    version,
    about = "Weighted and elliptic Fibonacci numbers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print f_n, or the shifted f^(m)_n, for one n or a range `a..b`.
    Fib(FibArgs),
    /// List square/domino tilings of an n-board with weights and faults.
    Tile(TileArgs),
    /// Evaluate theta(x_1, ..., x_r; p).
    Theta(ThetaArgs),
    /// Evaluate an elliptic weight, elliptic number or degenerate weight.
    Weight(WeightArgs),
    /// Verify identities over index grids.
    Verify(VerifyArgs),
    /// Tabulate g^n_k, the brackets [n, k]_w, or f^(m)_n.
    Table(TableArgs),
}

#[derive(Args)]
struct BackendArgs {
    /// symbolic | q | unit | explicit:FILE | elliptic | elliptic:a,b,q,p
    #[arg(long, default_value = "symbolic")]
    backend: BackendSpec,
    /// Seed for `--backend elliptic` parameter draws; recorded in output.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct FibArgs {
    /// Index or inclusive range, e.g. `5` or `0..10`.
    #[arg(long)]
    n: String,
    /// Shift m of f^(m)_n.
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct TileArgs {
    /// Board length.
    #[arg(long)]
    n: usize,
    /// Forbid dominoes at positions 1..=m.
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Keep only tilings with this many dominoes.
    #[arg(long)]
    dominoes: Option<usize>,
    /// Largest board to enumerate; defaults to $WFIB_TILE_CAP or 32.
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct ThetaArgs {
    /// Theta argument; repeat for a product theta(x_1, ..., x_r; p).
    #[arg(long = "a", visible_alias = "x", required = true, value_parser = parse_complex, allow_hyphen_values = true)]
    args: Vec<Complex64>,
    /// Nome, |p| < 1.
    #[arg(long, default_value = "0", value_parser = parse_complex, allow_hyphen_values = true)]
    p: Complex64,
    /// Truncation tolerance.
    #[arg(long, default_value_t = theta::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WeightKind {
    /// The elliptic Fibonacci weight w_n(a, b; q, p).
    Elliptic,
    /// The elliptic-number weight W_{a,b;q,p}(n).
    Sy,
    /// The elliptic number [n]_{a,b;q,p}.
    Number,
    /// Degenerate weight at p = 0.
    Abq,
    /// Degenerate weight with b -> infinity.
    Aq,
    /// Degenerate weight with a -> 0.
    Bq,
    /// The weight q^n.
    Q,
}

#[derive(Args)]
struct WeightArgs {
    #[arg(long, value_enum)]
    kind: WeightKind,
    /// Index or inclusive range; negative values allowed.
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    /// Complex parameters, e.g. `0.7` or `0.3+0.1i`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    b: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    q: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    p: Option<Complex64>,
    /// Draw a, b, q, p from this seed instead of passing them.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity name (e.g. FIB81) or `all`.
    #[arg(long)]
    id: String,
    /// Range for index n, e.g. `3` or `1..5`; likewise for m, i, j, r and s.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    i: Option<String>,
    #[arg(long)]
    j: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    s: Option<String>,
    /// Cut every declared index range off at this value; explicit index
    /// ranges are not affected.
    #[arg(long)]
    max: Option<i64>,
    #[command(flatten)]
    backend: BackendArgs,
    /// Relative tolerance for numeric backends.
    #[arg(long, default_value_t = identities::DEFAULT_TOL)]
    tol: f64,
    /// Longest rendered side kept in reports.
    #[arg(long, default_value_t = identities::DEFAULT_RENDER_LIMIT)]
    render_limit: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableKind {
    Gnk,
    Bracket,
    Fib,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    kind: TableKind,
    /// Last row index.
    #[arg(long)]
    n: usize,
    /// Shifts for `--kind fib`, e.g. `0..3`.
    #[arg(long, default_value = "0")]
    m: String,
    #[command(flatten)]
    backend: BackendArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// `5` or `2..7`, both ends inclusive.
fn parse_range(s: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::Usage(format!("`{s}` is not an index or range like 0..10"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?,
        ),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(CliError::Usage(format!("empty range `{s}`")));
    }
    Ok((lo, hi))
}

fn nonnegative_range(s: &str) -> Result<std::ops::RangeInclusive<usize>, CliError> {
    let (lo, hi) = parse_range(s)?;
    if lo < 0 {
        return Err(CliError::Usage(format!("indices must be >= 0, got `{s}`")));
    }
    Ok(lo as usize..=hi as usize)
}

fn seed_value(seed: Option<u64>) -> Value {
    seed.map_or(Value::Null, Value::from)
}

fn cmd_fib(args: &FibArgs, out: &mut impl Write) -> Result<(), CliError> {
    let ns = nonnegative_range(&args.n)?;
    let single = ns.start() == ns.end();
    let backend = Backend::open(&args.backend.backend, args.backend.seed, None)?;
    let values: Vec<String> = with_engine!(&backend, |e| {
        ns.clone()
            .map(|n| e.fib_shifted(n, args.m).map(|v| v.render()))
            .collect::<Result<_, _>>()?
    });
    let descriptor = with_engine!(&backend, |e| e.descriptor());
    match args.format {
        Format::Text if single => writeln!(out, "{}", values[0])?,
        Format::Text => writeln!(out, "{}", values.join(","))?,
        format => {
            let mut t = Table::new(&["n", "m", "value", "backend", "seed"]);
            for (n, v) in ns.zip(values) {
                t.push(vec![
                    n.into(),
                    args.m.into(),
                    v.into(),
                    descriptor.clone().into(),
                    seed_value(backend.seed()),
                ]);
            }
            t.write(format, out)?;
        }
    }
    Ok(())
}

fn cmd_tile(args: &TileArgs, out: &mut impl Write) -> Result<(), CliError> {
    let cap = args.cap.unwrap_or_else(tiling::cap_from_env);
    let tilings =
        tiling::enumerate_tilings_capped(args.n, args.m, cap).map_err(wfib::Error::from)?;
    let mut t = Table::new(&["tiles", "dominoes", "weight", "faults"]);
    let mut weights = Vec::new();
    for tl in tilings
        .iter()
        .filter(|tl| args.dominoes.is_none_or(|k| tl.domino_count() == k))
    {
        let w = tl.weight();
        t.push(vec![
            tl.to_string().into(),
            json!(tl.domino_positions()),
            w.to_string().into(),
            json!(tiling::faults(tl).positions()),
        ]);
        weights.extend(w.terms().map(|(m, c)| (c.clone(), m.clone())));
    }
    let total = wfib::Poly::from_terms(weights);
    t.write(args.format, out)?;
    eprintln!(
        "{} tilings, total weight {}",
        t.rows.len(),
        total.render_limited(identities::DEFAULT_RENDER_LIMIT)
    );
    Ok(())
}

fn cmd_theta(args: &ThetaArgs, out: &mut impl Write) -> Result<(), CliError> {
    let mut value = Complex64::new(1.0, 0.0);
    let mut terms = Vec::new();
    for &x in &args.args {
        let t = theta::theta(x, args.p, args.tol).map_err(wfib::Error::from)?;
        value *= t.value;
        terms.push(t.truncation_terms);
    }
    match args.format {
        Format::Text => writeln!(out, "{}", render_complex(value))?,
        format => {
            let mut t = Table::new(&["args", "p", "value", "truncation_terms"]);
            let rendered: Vec<String> = args.args.iter().map(|&x| render_complex(x)).collect();
            t.push(vec![
                json!(rendered),
                render_complex(args.p).into(),
                render_complex(value).into(),
                json!(terms),
            ]);
            t.write(format, out)?;
        }
    }
    Ok(())
}

fn need(name: &str, v: Option<Complex64>, kind: WeightKind) -> Result<Complex64, CliError> {
    v.ok_or_else(|| {
        CliError::Usage(format!("--kind {kind:?} needs --{name} (or --seed)").to_lowercase())
    })
}

fn cmd_weight(args: &WeightArgs, out: &mut impl Write) -> Result<(), CliError> {
    let (lo, hi) = parse_range(&args.n)?;
    let special = match args.kind {
        WeightKind::Abq => Some(SpecialCase::Abq),
        WeightKind::Aq => Some(SpecialCase::Aq),
        WeightKind::Bq => Some(SpecialCase::Bq),
        WeightKind::Q => Some(SpecialCase::Q),
        _ => None,
    };
    let numbers_given =
        args.a.is_some() || args.b.is_some() || args.q.is_some() || args.seed.is_some();
    let mut rows: Vec<(i64, String)> = Vec::new();
    match special {
        Some(case) if !numbers_given => {
            for n in lo..=hi {
                rows.push((n, theta::weight_special_exact(case, n).to_string()));
            }
        }
        Some(case) => {
            let drawn = args.seed.map(|s| EllipticParams::seeded(s, 0));
            let pick = |name: &str, given: Option<Complex64>, drawn: Option<Complex64>| match given
                .or(drawn)
            {
                Some(v) => Ok(v),
                None if case == SpecialCase::Q && name != "q" => Ok(Complex64::new(1.0, 0.0)),
                None => need(name, None, args.kind),
            };
            let a = pick("a", args.a, drawn.map(|d| d.a))?;
            let b = pick("b", args.b, drawn.map(|d| d.b))?;
            let q = pick("q", args.q, drawn.map(|d| d.q))?;
            for n in lo..=hi {
                let v = theta::weight_special(case, n, a, b, q).map_err(wfib::Error::from)?;
                rows.push((n, render_complex(v)));
            }
        }
        None => {
            let params = match args.seed {
                Some(s)
                    if args.a.is_none()
                        && args.b.is_none()
                        && args.q.is_none()
                        && args.p.is_none() =>
                {
                    EllipticParams::seeded(s, hi.max(0))
                }
                _ => EllipticParams::new(
                    need("a", args.a, args.kind)?,
                    need("b", args.b, args.kind)?,
                    need("q", args.q, args.kind)?,
                    need("p", args.p, args.kind)?,
                )
                .map_err(|e| CliError::Usage(e.to_string()))?,
            };
            for n in lo..=hi {
                let v = match args.kind {
                    WeightKind::Elliptic => theta::weight_elliptic(n, &params),
                    WeightKind::Sy => theta::weight_sy(n, &params),
                    _ => theta::elliptic_number(n, &params),
                }
                .map_err(wfib::Error::from)?;
                rows.push((n, render_complex(v)));
            }
        }
    }
    match args.format {
        Format::Text => {
            for (_, v) in &rows {
                writeln!(out, "{v}")?;
            }
        }
        format => {
            let kind = format!("{:?}", args.kind).to_lowercase();
            let mut t = Table::new(&["kind", "n", "value", "seed"]);
            for (n, v) in rows {
                t.push(vec![
                    kind.clone().into(),
                    n.into(),
                    v.into(),
                    seed_value(args.seed),
                ]);
            }
            t.write(format, out)?;
        }
    }
    Ok(())
}

/// Sweep grid for one identity: the declared range, cut off at `--max`,
/// with any explicitly given index ranges on top.
fn verify_grid_for(id: IdentityId, args: &VerifyArgs, strict: bool) -> Result<Grid, CliError> {
    let mut grid = id.default_grid();
    if let Some(max) = args.max {
        for range in grid.values_mut() {
            range.1 = range.1.min(max);
        }
    }
    let flags = [
        ("n", &args.n),
        ("m", &args.m),
        ("i", &args.i),
        ("j", &args.j),
        ("r", &args.r),
        ("s", &args.s),
    ];
    for (name, flag) in flags {
        let Some(text) = flag else { continue };
        if grid.contains_key(name) {
            grid.insert(name.to_string(), parse_range(text)?);
        } else if strict {
            return Err(wfib::Error::UnexpectedParam {
                id: id.name(),
                name: name.to_string(),
            }
            .into());
        }
    }
    Ok(grid)
}

#[derive(Default)]
struct Tally {
    reports: usize,
    failures: usize,
    usage_errors: usize,
    numeric_errors: usize,
}

impl Tally {
    fn exit_code(&self) -> u8 {
        if self.numeric_errors > 0 {
            3
        } else if self.usage_errors > 0 {
            2
        } else if self.failures > 0 {
            1
        } else {
            0
        }
    }
}

fn report_row(r: &IdentityReport) -> Vec<Value> {
    let params: Vec<String> = r.params.0.iter().map(|(k, v)| format!("{k}={v}")).collect();
    vec![
        r.id.name().into(),
        params.join(";").into(),
        r.backend.clone().into(),
        r.lhs.clone().into(),
        r.rhs.clone().into(),
        r.pass.into(),
        r.residual.into(),
        seed_value(r.seed),
    ]
}

const REPORT_COLUMNS: [&str; 8] = [
    "id", "params", "backend", "lhs", "rhs", "pass", "residual", "seed",
];

fn sweep<W: WeightSource>(
    ids: &[IdentityId],
    args: &VerifyArgs,
    engine: &FibEngine<W>,
    opts: &VerifyOptions,
    out: &mut impl Write,
) -> Result<Tally, CliError> {
    let mut tally = Tally::default();
    let mut csv = (args.format == Format::Csv).then(|| csv::Writer::from_writer(Vec::new()));
    if let Some(w) = csv.as_mut() {
        w.write_record(REPORT_COLUMNS).map_err(io::Error::from)?;
    }
    for &id in ids {
        let grid = verify_grid_for(id, args, ids.len() == 1)?;
        let outcome = identities::verify_grid(id, &grid, engine, opts)?;
        for r in &outcome.reports {
            tally.reports += 1;
            if !r.pass {
                tally.failures += 1;
            }
            match args.format {
                Format::Json => writeln!(
                    out,
                    "{}",
                    serde_json::to_string(r).expect("reports serialize")
                )?,
                Format::Csv => {
                    let row: Vec<String> = report_row(r).iter().map(output::plain).collect();
                    csv.as_mut()
                        .expect("csv writer")
                        .write_record(&row)
                        .map_err(io::Error::from)?;
                }
                Format::Text => writeln!(
                    out,
                    "{} {} {} residual={:e}",
                    if r.pass { "PASS" } else { "FAIL" },
                    r.id,
                    r.params,
                    r.residual
                )?,
            }
        }
        for (params, err) in &outcome.errors {
            if err.is_numeric_or_resource() {
                tally.numeric_errors += 1;
            } else {
                tally.usage_errors += 1;
            }
            eprintln!("error: {id} at {params}: {err}");
        }
    }
    if let Some(w) = csv {
        let bytes = w
            .into_inner()
            .map_err(|e| io::Error::other(e.to_string()))?;
        out.write_all(&bytes)?;
    }
    Ok(tally)
}

fn cmd_verify(args: &VerifyArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let ids: Vec<IdentityId> = if args.id.eq_ignore_ascii_case("all") {
        IdentityId::ALL.to_vec()
    } else {
        vec![args.id.parse::<IdentityId>()?]
    };
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    let backend = Backend::open(&args.backend.backend, args.backend.seed, None)?;
    let opts = VerifyOptions {
        tol: args.tol,
        seed: backend.seed(),
        render_limit: args.render_limit,
    };
    let tally = with_engine!(&backend, |e| sweep(&ids, args, &e, &opts, out)?);
    eprintln!(
        "{} reports, {} failed, {} errors",
        tally.reports,
        tally.failures,
        tally.usage_errors + tally.numeric_errors
    );
    Ok(tally.exit_code())
}

fn table_rows<W: WeightSource>(
    args: &TableArgs,
    e: &FibEngine<W>,
    t: &mut Table,
) -> Result<(), CliError> {
    let n_max = args.n as i64;
    match args.kind {
        TableKind::Gnk => {
            for n in 0..=n_max {
                for k in 0..=n {
                    t.push(vec![n.into(), k.into(), e.gnk(n, k)?.render().into()]);
                }
            }
        }
        TableKind::Bracket => {
            for n in 0..=n_max {
                for k in 0..=n {
                    let v = e.bracket_w(n, k)?;
                    t.push(vec![n.into(), k.into(), v.render().into()]);
                }
            }
        }
        TableKind::Fib => {
            for m in nonnegative_range(&args.m)? {
                for n in 0..=args.n {
                    t.push(vec![
                        n.into(),
                        m.into(),
                        e.fib_shifted(n, m)?.render().into(),
                    ]);
                }
            }
        }
    }
    Ok(())
}

fn cmd_table(args: &TableArgs, out: &mut impl Write) -> Result<(), CliError> {
    let backend = Backend::open(&args.backend.backend, args.backend.seed, None)?;
    let columns: &[&str] = match args.kind {
        TableKind::Fib => &["n", "m", "value"],
        _ => &["n", "k", "value"],
    };
    let mut t = Table::new(columns);
    with_engine!(&backend, |e| table_rows(args, &e, &mut t)?);
    t.write(args.format, out)?;
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match &cli.command {
        Command::Fib(a) => cmd_fib(a, &mut out).map(|_| 0),
        Command::Tile(a) => cmd_tile(a, &mut out).map(|_| 0),
        Command::Theta(a) => cmd_theta(a, &mut out).map(|_| 0),
        Command::Weight(a) => cmd_weight(a, &mut out).map(|_| 0),
        Command::Verify(a) => cmd_verify(a, &mut out),
        Command::Table(a) => cmd_table(a, &mut out).map(|_| 0),
    }?;
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Numeric(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}
