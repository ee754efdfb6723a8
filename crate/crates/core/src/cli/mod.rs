//! Command-line front end.

mod config;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};

use clap::{Parser, Subcommand};
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeration::{alternate_representation, digits_of, value_of, DigitSeq, NumerationSystem};
use crate::salem::{
    branch_points, cdf_eta, continuity_class, eval_h, integral_closed_form, integral_exact,
    integral_riemann, ks_distance, one_sided_values, sample_eta, Continuity, MAX_RIEMANN_CELLS,
};
use crate::text::format_rational;
use crate::Rational;

pub use config::{ConfigArgs, ConfigFile, RunConfig, Weight, DEFAULT_DEPTH, DEFAULT_TOL, MAX_Q};
pub use verify::{run_suite, Check, Status, Suite};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "negasalem", version, about = "Nega-q-ary numeration and Salem-type functions")]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Print the nega-q-ary expansion of x as `pre:period`.
    Digits { x: String },
    /// Evaluate h at x (rational, decimal or `pre:period`).
    Eval { x: String },
    /// Write `x,h,err` rows on an equally spaced grid over the domain.
    Scan {
        #[arg(long, default_value_t = 101)]
        points: usize,
    },
    /// One-sided limits at a branch point, or a table of all branch points
    /// up to `--rank` when x is omitted.
    Continuity {
        x: Option<String>,
        #[arg(long, default_value_t = 3)]
        rank: usize,
    },
    /// Closed forms and a cylinder Riemann sum for the integral of h.
    Integral {
        /// Defaults to the largest rank <= 12 the cell limit allows.
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Distribution function at x and/or a seeded KS comparison.
    Cdf {
        x: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

/// Parses a point given as `a/b`, a decimal, or a `pre:period` expansion.
pub fn parse_point(text: &str, sys: &NumerationSystem) -> Result<(Rational, DigitSeq)> {
    if text.contains(':') {
        let seq: DigitSeq = text.parse()?;
        let x = value_of(&seq, sys)?;
        Ok((x, seq))
    } else {
        let x = crate::text::parse_rational(text)?;
        let seq = digits_of(&x, sys)?;
        Ok((x, seq))
    }
}

fn decimal(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    let cfg = match RunConfig::resolve(&cli.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("negasalem: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match &cfg.out {
        Some(path) => File::create(path)
            .map_err(|e| Error::Argument(format!("cannot write {}: {e}", path.display())))
            .and_then(|f| {
                let mut w = BufWriter::new(f);
                let r = execute(&cli.command, &cfg, &mut w);
                w.flush().map_err(io_error)?;
                r
            }),
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            execute(&cli.command, &cfg, &mut w)
        }
    };
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(e) => {
            eprintln!("negasalem: {e}");
            EXIT_USAGE
        }
    }
}

fn io_error(e: io::Error) -> Error {
    Error::Argument(format!("write failed: {e}"))
}

/// Executes one command; `Ok(false)` means a check ran and failed.
pub fn execute(command: &Command, cfg: &RunConfig, w: &mut dyn Write) -> Result<bool> {
    match command {
        Command::Digits { x } => cmd_digits(x, cfg, w).map(|_| true),
        Command::Eval { x } => cmd_eval(x, cfg, w).map(|_| true),
        Command::Scan { points } => cmd_scan(*points, cfg, w).map(|_| true),
        Command::Continuity { x, rank } => cmd_continuity(x.as_deref(), *rank, cfg, w).map(|_| true),
        Command::Integral { rank } => cmd_integral(*rank, cfg, w).map(|_| true),
        Command::Cdf { x, samples } => cmd_cdf(x.as_deref(), *samples, cfg, w).map(|_| true),
        Command::Verify { suite } => {
            let checks = run_suite(cfg, *suite)?;
            for c in &checks {
                writeln!(w, "{c}").map_err(io_error)?;
            }
            let passed = checks.iter().all(|c| c.status != Status::Fail);
            writeln!(w, "{}", if passed { "PASS" } else { "FAIL" }).map_err(io_error)?;
            Ok(passed)
        }
    }
}

fn cmd_digits(x: &str, cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let sys = cfg.system();
    let x = crate::text::parse_rational(x)?;
    let seq = digits_of(&x, sys)?;
    writeln!(w, "{seq}").map_err(io_error)?;
    if let Some(other) = alternate_representation(&seq, sys) {
        writeln!(w, "also {other}").map_err(io_error)?;
    }
    Ok(())
}

fn cmd_eval(x: &str, cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let (x, seq) = parse_point(x, cfg.system())?;
    let h = eval_h(&cfg.params, &cfg.perm, &seq, cfg.tol)?;
    writeln!(w, "x = {} ({})", format_rational(&x), decimal(&x)).map_err(io_error)?;
    writeln!(w, "digits = {seq}").map_err(io_error)?;
    writeln!(w, "h = {h}").map_err(io_error)
}

/// Equally spaced grid `dom_inf + i/(n-1)`; the domain has unit length.
pub fn scan_grid(sys: &NumerationSystem, points: usize) -> Result<Vec<Rational>> {
    if points < 2 {
        return Err(Error::Argument("scan needs at least 2 points".into()));
    }
    let lo = sys.dom_inf();
    let step = Rational::new(1.into(), (points - 1).into());
    Ok((0..points)
        .map(|i| &lo + &step * Rational::from_integer(i.into()))
        .collect())
}

fn cmd_scan(points: usize, cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let grid = scan_grid(cfg.system(), points)?;
    let rows = grid
        .par_iter()
        .map(|x| {
            let h = crate::salem::eval_h_at(&cfg.params, &cfg.perm, x, cfg.tol)?;
            Ok(format!("{},{},{:e}", format_rational(x), h.value, h.err))
        })
        .collect::<Result<Vec<String>>>()?;
    writeln!(w, "x,h,err").map_err(io_error)?;
    for row in rows {
        writeln!(w, "{row}").map_err(io_error)?;
    }
    Ok(())
}

fn cmd_continuity(x: Option<&str>, rank: usize, cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let sys = cfg.system();
    let Some(x) = x else {
        writeln!(w, "x0,expansion,rank,condition,class").map_err(io_error)?;
        for x0 in branch_points(sys.q(), rank) {
            let m = x0.preperiod().len();
            let class = match continuity_class(&cfg.params, &cfg.perm, &x0, cfg.tol) {
                Ok(Continuity::Jump(j)) => format!("jump {j}"),
                Ok(_) => "continuous".to_string(),
                Err(Error::NotApplicable(_)) => "not-covered".to_string(),
                Err(e) => return Err(e),
            };
            let x = value_of(&x0, sys)?;
            writeln!(
                w,
                "{},\"{x0}\",{m},{},{class}",
                format_rational(&x),
                cfg.perm.continuity_condition(m)
            )
            .map_err(io_error)?;
        }
        return Ok(());
    };
    let (x, seq) = parse_point(x, sys)?;
    writeln!(w, "x0 = {} ({})", format_rational(&x), decimal(&x)).map_err(io_error)?;
    match alternate_representation(&seq, sys) {
        None => {
            writeln!(w, "expansion {seq} is unique").map_err(io_error)?;
            writeln!(w, "class: continuous").map_err(io_error)?;
        }
        Some(_) => {
            let lim = one_sided_values(&cfg.params, &cfg.perm, &seq, cfg.tol)?;
            let m = lim.branch_position;
            writeln!(w, "branch position {m}").map_err(io_error)?;
            writeln!(w, "left  {} via {}", lim.left, lim.left_repr).map_err(io_error)?;
            writeln!(w, "right {} via {}", lim.right, lim.right_repr).map_err(io_error)?;
            writeln!(w, "jump {}", lim.jump()).map_err(io_error)?;
            writeln!(w, "condition {}", cfg.perm.continuity_condition(m)).map_err(io_error)?;
            let class = if lim.jump() <= 2.0 * cfg.tol { "continuous" } else { "jump" };
            writeln!(w, "class: {class}").map_err(io_error)?;
        }
    }
    Ok(())
}

/// Largest rank `<= 12` whose cylinder count fits the Riemann limit.
pub fn default_riemann_rank(q: u32) -> usize {
    (1..=12)
        .rev()
        .find(|&r| u64::from(q).checked_pow(r as u32).is_some_and(|c| c <= MAX_RIEMANN_CELLS))
        .unwrap_or(1)
}

fn cmd_integral(rank: Option<usize>, cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    let p = &cfg.params;
    let rank = rank.unwrap_or_else(|| default_riemann_rank(p.q()));
    let closed = integral_closed_form(p);
    let exact = integral_exact(p);
    let riemann = integral_riemann(p, &cfg.perm, rank, cfg.tol)?;
    writeln!(w, "sum(beta)/(q+1) = {} ({})", format_rational(&closed), decimal(&closed))
        .map_err(io_error)?;
    writeln!(w, "sum(beta)/(q-1) = {} ({})", format_rational(&exact), decimal(&exact))
        .map_err(io_error)?;
    writeln!(w, "riemann rank {rank} = {riemann}").map_err(io_error)
}

/// 1% critical value of the one-sample KS statistic.
pub fn ks_critical(n: usize) -> f64 {
    1.63 / (n as f64).sqrt()
}

fn cmd_cdf(x: Option<&str>, samples: Option<usize>, cfg: &RunConfig, w: &mut dyn Write) -> Result<()> {
    if x.is_none() && samples.is_none() {
        return Err(Error::Argument("cdf needs a point, --samples, or both".into()));
    }
    if let Some(x) = x {
        let x = crate::text::parse_rational(x)?;
        let f = cdf_eta(&cfg.params, &cfg.perm, &x, cfg.tol)?;
        writeln!(w, "F({}) = {f}", format_rational(&x)).map_err(io_error)?;
    }
    if let Some(n) = samples {
        let d = ks_statistic(cfg, n)?;
        writeln!(
            w,
            "ks n={n} seed={} D={d} critical(1%)={}",
            cfg.seed,
            ks_critical(n)
        )
        .map_err(io_error)?;
    }
    Ok(())
}

/// KS distance between `n` seeded samples of `η` and the distribution
/// function, each sample evaluated at its exact binary value.
pub fn ks_statistic(cfg: &RunConfig, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Argument("need at least one sample".into()));
    }
    let mut samples = sample_eta(&cfg.params, &cfg.perm, cfg.seed, n)?;
    samples.sort_by(|a, b| a.total_cmp(b));
    let values = samples
        .par_iter()
        .map(|&v| {
            let x = Rational::from_float(v)
                .ok_or_else(|| Error::Argument(format!("non-finite sample {v}")))?;
            Ok((v, cdf_eta(&cfg.params, &cfg.perm, &x, cfg.tol)?.value))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let table: std::collections::HashMap<u64, f64> =
        values.into_iter().map(|(v, f)| (v.to_bits(), f)).collect();
    Ok(ks_distance(&samples, |v| table[&v.to_bits()]))
}
