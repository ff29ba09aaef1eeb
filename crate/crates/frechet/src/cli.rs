//! The `frechet` command line.
//!
//! Exit codes: 0 success, 2 bad flags, 3 unreadable or malformed files,
//! 4 internal contract violations.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::baseline::{continuous_decide, continuous_frechet};
use crate::curves::{gen_cpacked, gen_cpacked_pair, read_curve, write_curve, Curve};
use crate::error::Error;
use crate::freespace::{approximate_decide, complexity_stats, ComplexityStats, SweepCounters};
use crate::onedim::trace;
use crate::search::approximate_frechet;
use crate::svg::plot_freespace;

#[derive(Debug, Parser)]
#[command(
    name = "frechet",
    version,
    about = "Approximate and exact Fréchet distance between polygonal curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Approximate decision: GT means d_F > delta, LE means d_F <= (1+eps)·delta.
    Decide {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        eps: f64,
        /// Dump greedy steps of the block solver as JSON lines.
        #[arg(long)]
        trace: bool,
    },
    /// (1+eps)-approximate distance: prints `value lower upper decider_calls`.
    Approx {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        eps: f64,
    },
    /// Exact quadratic oracle: the decision at --delta, or the distance.
    Exact {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long, default_value_t = 1e-9)]
        rel_tol: f64,
    },
    /// Write a synthetic c-packed curve.
    Gen {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Complexity and decider wall time on a generated family, one JSON line per size.
    Bench {
        #[arg(long)]
        family: String,
        #[arg(long)]
        c: f64,
        /// Comma separated; `k` and `m` suffixes multiply by 10^3 and 10^6.
        #[arg(long, value_parser = parse_sizes)]
        sizes: Sizes,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 4.0)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Render the free-space diagram as SVG.
    PlotFreespace {
        #[command(flatten)]
        pair: Pair,
        #[arg(long)]
        delta: f64,
        /// Only sets the piece size of the outlined rectangles.
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct Pair {
    a: PathBuf,
    b: PathBuf,
}

#[derive(Debug, Clone)]
struct Sizes(Vec<usize>);

fn parse_sizes(text: &str) -> std::result::Result<Sizes, String> {
    let mut out = Vec::new();
    for tok in text.split(',') {
        let tok = tok.trim();
        let (digits, scale) = match tok.as_bytes().last() {
            Some(b'k' | b'K') => (&tok[..tok.len() - 1], 1_000),
            Some(b'm' | b'M') => (&tok[..tok.len() - 1], 1_000_000),
            _ => (tok, 1),
        };
        let n: usize = digits.parse().map_err(|_| format!("bad size {tok:?}"))?;
        if n == 0 {
            return Err("sizes must be positive".into());
        }
        out.push(n * scale);
    }
    Ok(Sizes(out))
}

enum Failure {
    Usage(String),
    File(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::File(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let msg = e.to_string();
        match e {
            Error::ParameterDomain { .. } => Failure::Usage(msg),
            Error::Io { .. } | Error::Parse { .. } | Error::EmptyCurve | Error::NonFinite(_) => {
                Failure::File(msg)
            }
            Error::DimensionMismatch(..) => Failure::File(msg),
            Error::Contract(_) | Error::Generation(_) => Failure::Internal(msg),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Failure {
        Failure::File(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn positive(name: &str, v: f64) -> Outcome {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--{name} must be positive and finite, got {v}"
        )))
    }
}

fn epsilon(v: f64) -> Outcome {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--eps must lie in (0, 1], got {v}")))
    }
}

fn read_pair(pair: &Pair) -> std::result::Result<(Curve, Curve), Failure> {
    let read = |p: &Path| read_curve(p).map_err(|e| Failure::File(format!("{}: {e}", p.display())));
    let (a, b) = (read(&pair.a)?, read(&pair.b)?);
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()).into());
    }
    Ok((a, b))
}

#[derive(Serialize)]
struct DecideStats {
    #[serde(flatten)]
    bound: ComplexityStats,
    /// Units of `N` the sweep actually spent.
    work: usize,
    #[serde(flatten)]
    counters: SweepCounters,
}

#[derive(Serialize)]
struct BenchLine {
    n: usize,
    m: usize,
    delta: f64,
    epsilon: f64,
    #[serde(flatten)]
    stats: ComplexityStats,
    wall_time_ns: u128,
}

fn json(value: &impl Serialize) -> std::result::Result<String, Failure> {
    serde_json::to_string(value).map_err(|e| Failure::Internal(e.to_string()))
}

fn execute(command: Command, out: &mut impl Write) -> Outcome {
    match command {
        Command::Decide {
            pair,
            delta,
            eps,
            trace: tracing,
        } => {
            positive("delta", delta)?;
            epsilon(eps)?;
            let (a, b) = read_pair(&pair)?;
            if tracing {
                trace::enable();
            }
            let outcome = approximate_decide(&a, &b, delta, eps);
            let steps = trace::take();
            let outcome = outcome?;
            let bound = complexity_stats(&a, &b, delta, eps)?;
            writeln!(out, "{}", outcome.verdict)?;
            let stats = DecideStats {
                bound,
                work: outcome.stats.total,
                counters: outcome.counters,
            };
            writeln!(out, "{}", json(&stats)?)?;
            for step in &steps {
                writeln!(out, "{}", json(step)?)?;
            }
        }
        Command::Approx { pair, eps } => {
            epsilon(eps)?;
            let (a, b) = read_pair(&pair)?;
            let r = approximate_frechet(&a, &b, eps)?;
            writeln!(
                out,
                "{} {} {} {}",
                r.value, r.lower, r.upper, r.decider_calls
            )?;
        }
        Command::Exact {
            pair,
            delta,
            rel_tol,
        } => {
            if let Some(d) = delta {
                if !(d >= 0.0 && d.is_finite()) {
                    return Err(Failure::Usage(format!(
                        "--delta must be nonnegative and finite, got {d}"
                    )));
                }
            }
            positive("rel-tol", rel_tol)?;
            let (a, b) = read_pair(&pair)?;
            match delta {
                Some(d) => writeln!(out, "{}", continuous_decide(&a, &b, d)?)?,
                None => {
                    let v = continuous_frechet(&a, &b, rel_tol)?;
                    if v.capped {
                        log::warn!(
                            "bisection stopped at its iteration cap before reaching the tolerance"
                        );
                    }
                    writeln!(out, "{}", v.value)?;
                }
            }
        }
        Command::Gen {
            c,
            n,
            seed,
            out: path,
        } => {
            if !(c >= 2.0 && c.is_finite()) {
                return Err(Failure::Usage(format!("--c must be at least 2, got {c}")));
            }
            if n == 0 {
                return Err(Failure::Usage("--n must be positive".into()));
            }
            let curve = gen_cpacked(c, n, seed)?;
            write_curve(&path, &curve)?;
        }
        Command::Bench {
            family,
            c,
            sizes,
            eps,
            delta,
            seed,
        } => {
            if family != "cpacked" {
                return Err(Failure::Usage(format!(
                    "unknown family {family:?}; available: cpacked"
                )));
            }
            if !(c >= 2.0 && c.is_finite()) {
                return Err(Failure::Usage(format!("--c must be at least 2, got {c}")));
            }
            epsilon(eps)?;
            positive("delta", delta)?;
            let largest = sizes.0.iter().copied().max().unwrap_or(1);
            // one pair, read by prefixes, so that sizes share their geometry
            let (a, b) = gen_cpacked_pair(c, largest, seed)?;
            for &n in &sizes.0 {
                let (p, q) = (a.slice(0, n - 1), b.slice(0, n - 1));
                let stats = complexity_stats(&p, &q, delta, eps)?;
                let start = Instant::now();
                let outcome = approximate_decide(&p, &q, delta, eps)?;
                let wall_time_ns = start.elapsed().as_nanos();
                log::info!("n={n}: {} in {wall_time_ns} ns", outcome.verdict);
                let line = BenchLine {
                    n,
                    m: n,
                    delta,
                    epsilon: eps,
                    stats,
                    wall_time_ns,
                };
                writeln!(out, "{}", json(&line)?)?;
                out.flush()?;
            }
        }
        Command::PlotFreespace {
            pair,
            delta,
            eps,
            out: path,
        } => {
            positive("delta", delta)?;
            epsilon(eps)?;
            let (a, b) = read_pair(&pair)?;
            let svg = plot_freespace(&a, &b, delta, eps)?;
            std::fs::write(&path, svg)
                .map_err(|e| Failure::File(format!("{}: {e}", path.display())))?;
        }
    }
    Ok(())
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match execute(cli.command, &mut out) {
        Ok(()) => 0,
        Err(failure) => {
            let (Failure::Usage(msg) | Failure::File(msg) | Failure::Internal(msg)) = &failure;
            eprintln!("error: {msg}");
            failure.code()
        }
    }
}
