//! Command-line surface: `compute` for single quantities, `verify` for the
//! identity suites, `table` for families of values.

mod output;

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use eulersum::zeta::float_to_decimal;
use eulersum::{
    bell_complete, bell_harmonic, gen_hh_direct, gen_hh_star, hyperharmonic, mhn, mhsn,
    mzv_height_one, mzv_truncated, riemann_zeta, run_suite, s_closed, s_truncated, stirling1,
    u_closed, u_truncated, v_truncated, CompositionIndex, EulerSumKey, Float, GridLimits,
    HyperharmonicKey, Rational, SeriesValue, Suite, SuiteConfig,
};

use output::{Format, Grid};

#[derive(Parser)]
#[command(
    name = "eulersum",
    version,
    about = "Exact and high-precision evaluation of harmonic-type nested sums, \
             hyperharmonic numbers, height-one multiple zeta values, and the \
             Euler-type series built from them, with a verification harness."
)]
struct Cli {
    /// Significant decimal digits for series values (minimum 15)
    #[arg(long, global = true, env = "EULERSUM_PRECISION", default_value_t = 50)]
    precision: u32,

    /// Truncation cutoff for series partial sums (minimum 10)
    #[arg(long, global = true, default_value_t = 1_000_000)]
    terms: u64,

    /// Safety factor applied on top of heuristic error bounds
    #[arg(long, global = true, default_value_t = 4.0)]
    margin: f64,

    /// Seed for deterministic randomized checks
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single quantity
    Compute {
        #[command(subcommand)]
        kind: ComputeKind,
    },
    /// Run the identity verification suites and optionally write a JSON report
    Verify(VerifyArgs),
    /// Tabulate a family of values with method and bound columns
    Table {
        #[command(subcommand)]
        target: TableTarget,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodChoice {
    Closed,
    Truncated,
}

#[derive(Subcommand)]
enum ComputeKind {
    /// Multiple harmonic number over strictly decreasing indices
    Mhn {
        #[arg(long, visible_alias = "limit")]
        n: u32,
        /// Comma-separated exponents, e.g. "2,1,1"; empty for the empty index
        #[arg(long, default_value = "")]
        s: String,
    },
    /// Multiple harmonic star number over weakly decreasing indices
    Mhsn {
        #[arg(long, visible_alias = "limit")]
        n: u32,
        #[arg(long, default_value = "")]
        s: String,
    },
    /// Classical hyperharmonic number
    Hyperharmonic {
        #[arg(long, visible_alias = "limit")]
        n: u32,
        #[arg(long, visible_alias = "order")]
        m: u32,
    },
    /// Generalized hyperharmonic number (star variant with --star)
    GenHh {
        #[arg(long, visible_alias = "limit")]
        n: u32,
        #[arg(long, visible_alias = "order")]
        m: u32,
        #[arg(long, visible_alias = "depth")]
        k: u32,
        /// Fully weak nested sum instead of the strict inner block
        #[arg(long)]
        star: bool,
    },
    /// Unsigned Stirling number of the first kind
    Stirling {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
    },
    /// Complete exponential Bell polynomial; harmonic arguments with --n,
    /// explicit arguments with --x
    Bell {
        #[arg(long, visible_alias = "depth")]
        k: u32,
        #[arg(long, visible_alias = "limit", conflicts_with = "x")]
        n: Option<u32>,
        /// Comma-separated rational arguments, e.g. "1/2,3,-2/5"
        #[arg(long)]
        x: Option<String>,
    },
    /// Riemann zeta value at an integer argument >= 2
    Zeta {
        #[arg(long, visible_alias = "exponent")]
        s: u32,
    },
    /// Multiple zeta value: height-one (--q/--j, closed form) or a general
    /// index (--s, truncated)
    Mzv {
        #[arg(long, conflicts_with = "s")]
        q: Option<u32>,
        #[arg(long, requires = "q")]
        j: Option<u32>,
        #[arg(long)]
        s: Option<String>,
        /// Star variant of the truncated sum (only with --s)
        #[arg(long, requires = "s")]
        star: bool,
    },
    /// Shifted ones series U_{m,r}(p)
    #[command(name = "U", alias = "u")]
    USeries {
        #[arg(long, visible_alias = "order")]
        m: u32,
        #[arg(long, visible_alias = "shift")]
        r: u32,
        #[arg(long, visible_alias = "exponent")]
        p: u32,
        #[arg(long, value_enum, default_value_t = MethodChoice::Closed)]
        method: MethodChoice,
    },
    /// Shifted star series V_{m,r}(p) (truncated evaluation only)
    #[command(name = "V", alias = "v")]
    VSeries {
        #[arg(long, visible_alias = "order")]
        m: u32,
        #[arg(long, visible_alias = "shift")]
        r: u32,
        #[arg(long, visible_alias = "exponent")]
        p: u32,
    },
    /// Euler sum S(k,m;p) of generalized hyperharmonic numbers
    #[command(name = "S", alias = "s")]
    SSeries {
        #[arg(long, visible_alias = "depth")]
        k: u32,
        #[arg(long, visible_alias = "order")]
        m: u32,
        #[arg(long, visible_alias = "exponent")]
        p: u32,
        #[arg(long, value_enum, default_value_t = MethodChoice::Closed)]
        method: MethodChoice,
    },
}

#[derive(Args)]
struct VerifyArgs {
    /// Which suite to run
    #[arg(long, default_value = "all")]
    suite: String,
    /// Write the JSON report to this path
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Grid ceiling for upper summation limits (1..=30)
    #[arg(long, default_value_t = 30)]
    grid_n: u32,
    /// Grid ceiling for index depths (1..=6)
    #[arg(long, default_value_t = 6)]
    grid_depth: u32,
    /// Grid ceiling for order/shift parameters (0..=6)
    #[arg(long, default_value_t = 6)]
    grid_shift: u32,
}

#[derive(Subcommand)]
enum TableTarget {
    /// Euler sums S(k,m;p): closed and truncated values side by side
    #[command(name = "S-sums", alias = "s-sums")]
    SSums {
        #[arg(long, visible_alias = "depth", default_value = "1..2")]
        k: RangeArg,
        #[arg(long, visible_alias = "order", default_value = "1..2")]
        m: RangeArg,
        #[arg(long, visible_alias = "exponent", default_value = "3..5")]
        p: RangeArg,
    },
    /// Shifted ones series U_{m,r}(p): closed and truncated values
    #[command(name = "U-sums", alias = "u-sums")]
    USums {
        #[arg(long, visible_alias = "order", default_value = "1..2")]
        m: RangeArg,
        #[arg(long, visible_alias = "shift", default_value = "0..2")]
        r: RangeArg,
        #[arg(long, visible_alias = "exponent", default_value = "2..4")]
        p: RangeArg,
    },
    /// Height-one multiple zeta values up to a total weight
    #[command(name = "mzv-height-one")]
    MzvHeightOne {
        #[arg(long, default_value_t = 8)]
        max_weight: u32,
    },
}

/// Inclusive integer range "a..b", or a single "a".
#[derive(Debug, Clone, Copy)]
struct RangeArg {
    lo: u32,
    hi: u32,
}

impl RangeArg {
    fn iter(self) -> impl Iterator<Item = u32> {
        self.lo..=self.hi
    }
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse_end = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| format!("invalid range endpoint {t:?}"))
        };
        if let Some((lo, hi)) = s.split_once("..") {
            let lo = parse_end(lo)?;
            let hi = parse_end(hi)?;
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok(RangeArg { lo, hi })
        } else {
            let v = parse_end(s)?;
            Ok(RangeArg { lo: v, hi: v })
        }
    }
}

enum CliError {
    /// Domain/usage error: a named precondition was violated.
    Usage(String),
    /// Filesystem error, distinct from verification failures.
    Io(String),
}

impl From<eulersum::Error> for CliError {
    fn from(e: eulersum::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Io(message)) => {
            eprintln!("i/o error: {message}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> CliResult<ExitCode> {
    if cli.precision < 15 {
        return Err(CliError::Usage(format!(
            "precision must be >= 15 (got {})",
            cli.precision
        )));
    }
    if cli.terms < 10 {
        return Err(CliError::Usage(format!(
            "terms must be >= 10 (got {})",
            cli.terms
        )));
    }
    if cli.margin <= 0.0 || cli.margin.is_nan() {
        return Err(CliError::Usage(format!(
            "margin must be > 0 (got {})",
            cli.margin
        )));
    }
    match &cli.command {
        Command::Compute { kind } => {
            let grid = compute(cli, kind)?;
            print!("{}", render_compute(&grid, cli.format));
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify(args) => verify(cli, args),
        Command::Table { target } => {
            let grid = table(cli, target)?;
            print!("{}", grid.render(cli.format));
            Ok(ExitCode::SUCCESS)
        }
    }
}

// ---------------------------------------------------------------------------
// compute
// ---------------------------------------------------------------------------

fn parse_composition(s: &str) -> CliResult<CompositionIndex> {
    if s.trim().is_empty() {
        return Ok(CompositionIndex::empty());
    }
    let parts: Result<Vec<u32>, _> = s.split(',').map(|t| t.trim().parse::<u32>()).collect();
    parts
        .map(CompositionIndex::new)
        .map_err(|_| CliError::Usage(format!("invalid composition {s:?}; expected e.g. \"2,1,1\"")))
}

fn parse_rationals(s: &str) -> CliResult<Vec<Rational>> {
    s.split(',')
        .map(|t| {
            Rational::from_str(t.trim())
                .map_err(|_| CliError::Usage(format!("invalid rational {t:?}")))
        })
        .collect()
}

/// A computed value plus the parameter echo, as grid columns.
fn value_grid(params: Vec<(&str, String)>, value_cols: Vec<(&str, String)>) -> Grid {
    let mut headers: Vec<&str> = params.iter().map(|(k, _)| *k).collect();
    headers.extend(value_cols.iter().map(|(k, _)| *k));
    let mut grid = Grid::new(&headers);
    let mut row: Vec<String> = params.into_iter().map(|(_, v)| v).collect();
    row.extend(value_cols.into_iter().map(|(_, v)| v));
    grid.push_row(row);
    grid
}

fn series_cols(value: &SeriesValue, digits: u32) -> Vec<(&'static str, String)> {
    vec![
        ("value", value.to_decimal_string(digits)),
        ("error_bound", float_to_decimal(value.error_bound(), 3)),
        ("method", value.method().to_string()),
    ]
}

fn compute(cli: &Cli, kind: &ComputeKind) -> CliResult<Grid> {
    let digits = cli.precision;
    let grid = match kind {
        ComputeKind::Mhn { n, s } => {
            let idx = parse_composition(s)?;
            let v = mhn(*n, &idx)?;
            value_grid(
                vec![("n", n.to_string()), ("s", idx.to_string())],
                vec![("value", v.to_string())],
            )
        }
        ComputeKind::Mhsn { n, s } => {
            let idx = parse_composition(s)?;
            let v = mhsn(*n, &idx)?;
            value_grid(
                vec![("n", n.to_string()), ("s", idx.to_string())],
                vec![("value", v.to_string())],
            )
        }
        ComputeKind::Hyperharmonic { n, m } => {
            let v = hyperharmonic(*n, *m)?;
            value_grid(
                vec![("n", n.to_string()), ("m", m.to_string())],
                vec![("value", v.to_string())],
            )
        }
        ComputeKind::GenHh { n, m, k, star } => {
            let v = if *star {
                gen_hh_star(*n, *m, *k)?
            } else {
                gen_hh_direct(&HyperharmonicKey::new(*n, *m, *k)?)?
            };
            value_grid(
                vec![
                    ("n", n.to_string()),
                    ("m", m.to_string()),
                    ("k", k.to_string()),
                    ("star", star.to_string()),
                ],
                vec![("value", v.to_string())],
            )
        }
        ComputeKind::Stirling { n, k } => value_grid(
            vec![("n", n.to_string()), ("k", k.to_string())],
            vec![("value", stirling1(*n, *k).to_string())],
        ),
        ComputeKind::Bell { k, n, x } => {
            let v = match (n, x) {
                (Some(n), None) => bell_harmonic(*k as usize, *n),
                (None, Some(x)) => bell_complete(*k as usize, &parse_rationals(x)?)?,
                _ => {
                    return Err(CliError::Usage(
                        "bell requires exactly one of --n (harmonic arguments) or --x".to_owned(),
                    ))
                }
            };
            value_grid(
                vec![("k", k.to_string())],
                vec![("value", v.to_string())],
            )
        }
        ComputeKind::Zeta { s } => {
            let v = riemann_zeta(*s, digits)?;
            value_grid(vec![("s", s.to_string())], series_cols(&v, digits))
        }
        ComputeKind::Mzv { q, j, s, star } => match (q, s) {
            (Some(q), None) => {
                let j = j.unwrap_or(0);
                let v = mzv_height_one(*q, j, digits)?;
                value_grid(
                    vec![("q", q.to_string()), ("j", j.to_string())],
                    series_cols(&v, digits),
                )
            }
            (None, Some(s)) => {
                let idx = parse_composition(s)?;
                let v = if *star {
                    eulersum::mzsv_truncated(&idx, cli.terms, digits)?
                } else {
                    mzv_truncated(&idx, cli.terms, digits)?
                };
                value_grid(
                    vec![
                        ("s", idx.to_string()),
                        ("star", star.to_string()),
                        ("terms", cli.terms.to_string()),
                    ],
                    series_cols(&v, digits),
                )
            }
            _ => {
                return Err(CliError::Usage(
                    "mzv requires either --q [--j] (height-one closed form) or --s (truncated)"
                        .to_owned(),
                ))
            }
        },
        ComputeKind::USeries { m, r, p, method } => {
            let v = match method {
                MethodChoice::Closed => u_closed(*m, *r, *p, digits)?,
                MethodChoice::Truncated => u_truncated(*m, *r, *p, cli.terms, digits)?,
            };
            value_grid(
                vec![
                    ("m", m.to_string()),
                    ("r", r.to_string()),
                    ("p", p.to_string()),
                ],
                series_cols(&v, digits),
            )
        }
        ComputeKind::VSeries { m, r, p } => {
            let v = v_truncated(*m, *r, *p, cli.terms, digits)?;
            value_grid(
                vec![
                    ("m", m.to_string()),
                    ("r", r.to_string()),
                    ("p", p.to_string()),
                    ("terms", cli.terms.to_string()),
                ],
                series_cols(&v.direct, digits),
            )
        }
        ComputeKind::SSeries { k, m, p, method } => {
            let key = EulerSumKey::new(*k, *m, *p)?;
            let v = match method {
                MethodChoice::Closed => s_closed(*k, *m - 1, *p, digits)?,
                MethodChoice::Truncated => s_truncated(&key, cli.terms, digits)?,
            };
            value_grid(
                vec![
                    ("k", k.to_string()),
                    ("m", m.to_string()),
                    ("p", p.to_string()),
                ],
                series_cols(&v, digits),
            )
        }
    };
    Ok(grid)
}

/// Single-value rendering: the plain value (plus bound and method for
/// series results) in table mode, full grid in JSON/CSV.
fn render_compute(grid: &Grid, format: Format) -> String {
    if format != Format::Table {
        return grid.render(format);
    }
    let row = &grid.rows[0];
    let value_idx = grid
        .headers
        .iter()
        .position(|h| h == "value")
        .expect("compute grids carry a value column");
    if grid.headers.iter().any(|h| h == "method") {
        let bound_idx = grid.headers.iter().position(|h| h == "error_bound").unwrap();
        let method_idx = grid.headers.iter().position(|h| h == "method").unwrap();
        format!(
            "{} ± {} ({})\n",
            row[value_idx], row[bound_idx], row[method_idx]
        )
    } else {
        format!("{}\n", row[value_idx])
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn verify(cli: &Cli, args: &VerifyArgs) -> CliResult<ExitCode> {
    let suite = Suite::from_str(&args.suite).map_err(|e| CliError::Usage(e.to_string()))?;
    let config = SuiteConfig {
        suite,
        grid: GridLimits {
            max_n: args.grid_n,
            max_depth: args.grid_depth,
            max_shift: args.grid_shift,
            series_terms: cli.terms,
        },
        seed: cli.seed,
        margin: cli.margin,
        precision: cli.precision,
    };
    let run = run_suite(&config)?;
    if let Some(path) = &args.out {
        std::fs::write(path, run.to_json())
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
    }
    match cli.format {
        Format::Json => print!("{}", run.to_json()),
        _ => {
            let mut grid = Grid::new(&["identity", "cases", "failures", "verdict"]);
            let mut ids: Vec<_> = run.reports.iter().map(|r| r.case.id).collect();
            ids.dedup();
            for id in ids {
                let total = run.reports.iter().filter(|r| r.case.id == id).count();
                let failures = run
                    .reports
                    .iter()
                    .filter(|r| r.case.id == id && !r.passed())
                    .count();
                grid.push_row(vec![
                    id.as_str().to_owned(),
                    total.to_string(),
                    failures.to_string(),
                    if failures == 0 { "pass" } else { "FAIL" }.to_owned(),
                ]);
            }
            print!("{}", grid.render(cli.format));
            println!(
                "{}: {} cases, {} failures",
                run.run_id,
                run.reports.len(),
                run.failures()
            );
        }
    }
    if run.all_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

// ---------------------------------------------------------------------------
// table
// ---------------------------------------------------------------------------

fn agreement_flag(
    closed: &SeriesValue,
    truncated: &SeriesValue,
    margin: f64,
) -> (String, String) {
    let diff = closed.abs_diff(truncated);
    let budget = Float::with_val(
        64,
        Float::with_val(64, closed.error_bound() + truncated.error_bound()) * margin,
    );
    let flag = if diff <= budget { "ok" } else { "DISAGREE" };
    (float_to_decimal(&diff, 3), flag.to_owned())
}

fn table(cli: &Cli, target: &TableTarget) -> CliResult<Grid> {
    let digits = cli.precision;
    match target {
        TableTarget::SSums { k, m, p } => {
            // validate the whole request before computing anything
            for m_v in m.iter() {
                for p_v in p.iter() {
                    for k_v in k.iter() {
                        EulerSumKey::new(k_v, m_v, p_v)?;
                        if p_v < m_v + 1 {
                            return Err(CliError::Usage(format!(
                                "S({k_v},{m_v};{p_v}) requires p >= m+1"
                            )));
                        }
                    }
                }
            }
            let mut grid = Grid::new(&[
                "k", "m", "p", "closed", "truncated", "bound", "method", "diff", "agree",
            ]);
            for k_v in k.iter() {
                for m_v in m.iter() {
                    for p_v in p.iter() {
                        let closed = s_closed(k_v, m_v - 1, p_v, digits)?;
                        let key = EulerSumKey::new(k_v, m_v, p_v)?;
                        let trunc = s_truncated(&key, cli.terms, digits)?;
                        let (diff, flag) = agreement_flag(&closed, &trunc, cli.margin);
                        grid.push_row(vec![
                            k_v.to_string(),
                            m_v.to_string(),
                            p_v.to_string(),
                            closed.to_decimal_string(digits),
                            trunc.to_decimal_string(digits),
                            float_to_decimal(trunc.error_bound(), 3),
                            format!("{}/{}", closed.method(), trunc.method()),
                            diff,
                            flag,
                        ]);
                    }
                }
            }
            Ok(grid)
        }
        TableTarget::USums { m, r, p } => {
            for m_v in m.iter() {
                if m_v == 0 {
                    return Err(CliError::Usage("U-series require m >= 1".to_owned()));
                }
            }
            for p_v in p.iter() {
                if p_v < 2 {
                    return Err(CliError::Usage("U-series require p >= 2".to_owned()));
                }
            }
            let mut grid = Grid::new(&[
                "m", "r", "p", "closed", "truncated", "bound", "method", "diff", "agree",
            ]);
            for m_v in m.iter() {
                for r_v in r.iter() {
                    for p_v in p.iter() {
                        let closed = u_closed(m_v, r_v, p_v, digits)?;
                        let trunc = u_truncated(m_v, r_v, p_v, cli.terms, digits)?;
                        let (diff, flag) = agreement_flag(&closed, &trunc, cli.margin);
                        grid.push_row(vec![
                            m_v.to_string(),
                            r_v.to_string(),
                            p_v.to_string(),
                            closed.to_decimal_string(digits),
                            trunc.to_decimal_string(digits),
                            float_to_decimal(trunc.error_bound(), 3),
                            format!("{}/{}", closed.method(), trunc.method()),
                            diff,
                            flag,
                        ]);
                    }
                }
            }
            Ok(grid)
        }
        TableTarget::MzvHeightOne { max_weight } => {
            if *max_weight < 2 {
                return Err(CliError::Usage(
                    "mzv-height-one requires max-weight >= 2".to_owned(),
                ));
            }
            let mut grid = Grid::new(&["q", "j", "value", "bound", "method"]);
            for weight in 2..=*max_weight {
                for q in 2..=weight {
                    let j = weight - q;
                    let v = mzv_height_one(q, j, digits)?;
                    grid.push_row(vec![
                        q.to_string(),
                        j.to_string(),
                        v.to_decimal_string(digits),
                        float_to_decimal(v.error_bound(), 3),
                        v.method().to_string(),
                    ]);
                }
            }
            Ok(grid)
        }
    }
}
