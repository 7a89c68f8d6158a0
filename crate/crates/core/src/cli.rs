//! The `jbounds` command line.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::arith::cyclotomic::min_poly_2cos;
use crate::arith::poly::RationalPoly;
use crate::bounds::lower::{lower_bound_from_points, sophie_lower_bound};
use crate::bounds::oracle::{bundled_class_groups, ClassGroupStore, RankStore};
use crate::bounds::report::{parse_bound_lines, BoundReport, Hypothesis};
use crate::bounds::washington::{in_family, washington_base_point, washington_bound, washington_poly};
use crate::bounds::{parse_intervals, sharpness_stats, sophie_upper_bound, DEFAULT_SCAN_BOUND};
use crate::error::{Error, Result};
use crate::field::IndependenceOptions;
use crate::signatures::scan_sophie_germain;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CERTIFICATION: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "jbounds", version, about = "Mordell-Weil rank bounds for two families of hyperelliptic jacobians")]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Print a readable block after each report line.
    #[arg(long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bounds for y^2 = x^3 + m x^2 - (m+3) x + 1 over a range of m.
    Washington {
        /// `a..b` or a single value.
        #[arg(long)]
        m: String,
        /// Class-group file (default: the bundled fixtures).
        #[arg(long)]
        clgroups: Option<PathBuf>,
        /// Also compute the lower bound from the points with y = 1.
        #[arg(long)]
        lower: bool,
    },
    /// Bounds for the curves attached to Sophie Germain primes q = 2p + 1.
    Sophie {
        /// Comma separated primes q.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
        /// Also compute the lower bound from the points with y = 1.
        #[arg(long)]
        lower: bool,
        /// Summary table of p, genus, upper and lower bounds.
        #[arg(long)]
        table: bool,
        /// Take the class number of Q(zeta_q)^+ to be odd when no record is available.
        #[arg(long)]
        assume_davis_taussky: bool,
        /// Use the signature certificate for q up to this value.
        #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
        scan_bound: u64,
        /// Class-group file (default: the bundled data).
        #[arg(long)]
        clgroups: Option<PathBuf>,
        /// Largest number of classes passed to the independence test.
        #[arg(long, default_value_t = 16)]
        cap: usize,
    },
    /// Certify that totally positive units are squares for every pair with q <= max-q.
    ScanRho {
        /// Largest q scanned.
        #[arg(long)]
        max_q: u64,
    },
    /// Lower bound from the points with y = y0 on y^2 = f(x).
    LowerBound {
        /// Ascending integer coefficients, comma separated, e.g. `1,-2,-1,1`.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        /// An integer or fraction `a/b`.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        y0: String,
        /// Largest number of classes passed to the independence test.
        #[arg(long, default_value_t = 16)]
        cap: usize,
    },
    /// Sharpness of the Washington bound against computed ranks.
    Stats {
        /// File in the `ranks v1` format.
        #[arg(long)]
        ranks: PathBuf,
        /// File of report lines.
        #[arg(long, conflicts_with = "clgroups", required_unless_present = "clgroups")]
        bounds: Option<PathBuf>,
        /// Derive the bounds from a class-group file instead.
        #[arg(long)]
        clgroups: Option<PathBuf>,
        /// `a..b` items separated by commas; `a..b:w` splits into blocks of width w.
        #[arg(long, default_value = "1..20000:1000")]
        intervals: String,
    },
    /// Minimal polynomial of zeta_q + zeta_q^-1, or of its negative.
    Minpoly {
        #[arg(long)]
        q: u64,
        /// Use -(zeta_q + zeta_q^-1).
        #[arg(long)]
        negate: bool,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CertificateFailed(_) => EXIT_CERTIFICATION,
        Error::ClassGroupUnknown(_) | Error::CapExceeded { .. } | Error::Undetermined(_) => EXIT_PARTIAL,
        _ => EXIT_INVALID,
    }
}

fn load_store(path: &Option<PathBuf>) -> Result<ClassGroupStore> {
    match path {
        Some(p) => ClassGroupStore::load(p),
        None => Ok(bundled_class_groups()),
    }
}

fn parse_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::InvalidArgument(format!("expected a..b or an integer, got {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn parse_poly(s: &str) -> Result<RationalPoly> {
    let coeffs = s
        .split(',')
        .map(|c| c.trim().parse::<BigInt>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidArgument(format!("expected comma-separated integers, got {s:?}")))?;
    Ok(RationalPoly::from_bigints(&coeffs))
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("expected an integer or a/b, got {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().map_err(|_| bad())?;
            let b: BigInt = b.trim().parse().map_err(|_| bad())?;
            if b == BigInt::from(0) {
                return Err(Error::DivisionByZero);
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
    verbose: bool,
    pool: Option<rayon::ThreadPool>,
}

impl Io<'_> {
    fn compute<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(p) => p.install(f),
            None => f(),
        }
    }

    fn report(&mut self, r: &BoundReport) {
        let _ = writeln!(self.out, "{}", r.line());
        if self.verbose {
            let _ = write!(self.out, "{}", r.verbose_block());
        }
    }

    fn error(&mut self, what: &str, e: &Error) {
        let _ = writeln!(self.err, "error: {what}: {e}");
    }
}

/// Attaches a lower bound; a lower bound above an unconditional upper bound is a failure.
fn attach_lower(r: &mut BoundReport, lower: usize, partial: bool) -> Result<()> {
    r.lower_bound = Some(lower as u64);
    if partial {
        r.hypotheses.push(Hypothesis::LowerPartial);
    }
    if lower as u64 > r.upper_bound && !r.is_conditional() {
        return Err(Error::CertificateFailed(format!(
            "{}: lower bound {lower} exceeds upper bound {}",
            r.curve, r.upper_bound
        )));
    }
    Ok(())
}

fn cmd_washington(io: &mut Io, m: &str, clgroups: &Option<PathBuf>, lower: bool) -> Result<i32> {
    let (a, b) = parse_range(m)?;
    let store = load_store(clgroups)?;
    let ms: Vec<i64> = (a.max(0)..=b).filter(|&m| in_family(m)).collect();
    let opts = IndependenceOptions::default();
    let results: Vec<(i64, Result<BoundReport>)> = io.compute(|| ms
        .par_iter()
        .map(|&m| {
            let r = washington_bound(m, &store).and_then(|mut r| {
                if lower {
                    let lb = lower_bound_from_points(&washington_poly(m), &washington_base_point(), &opts)?;
                    attach_lower(&mut r, lb.lower, lb.partial)?;
                }
                Ok(r)
            });
            (m, r)
        })
        .collect());
    let mut code = EXIT_OK;
    let mut missing = Vec::new();
    for (m, r) in results {
        match r {
            Ok(r) => io.report(&r),
            Err(Error::ClassGroupUnknown(key)) => missing.push(format!("m={m} poly={key}")),
            Err(e) => {
                io.error(&format!("m={m}"), &e);
                code = code.max(exit_code(&e));
            }
        }
    }
    if !missing.is_empty() {
        let _ = writeln!(io.err, "missing class groups for {} curves:", missing.len());
        for s in &missing {
            let _ = writeln!(io.err, "  {s}");
        }
        code = code.max(EXIT_PARTIAL);
    }
    Ok(code)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sophie(
    io: &mut Io,
    qs: &[u64],
    lower: bool,
    table: bool,
    assume_dt: bool,
    scan_bound: u64,
    clgroups: &Option<PathBuf>,
    cap: usize,
) -> Result<i32> {
    let store = load_store(clgroups)?;
    let opts = IndependenceOptions { cap, ..Default::default() };
    let results: Vec<(u64, Result<BoundReport>)> = io.compute(|| qs
        .par_iter()
        .map(|&q| {
            let r = sophie_upper_bound(q, &store, assume_dt, scan_bound).and_then(|mut r| {
                if lower {
                    let lb = sophie_lower_bound(q, &opts)?;
                    attach_lower(&mut r, lb.lower, lb.partial)?;
                }
                Ok(r)
            });
            (q, r)
        })
        .collect());
    let mut code = EXIT_OK;
    let mut rows = Vec::new();
    for (q, r) in results {
        match r {
            Ok(r) => {
                io.report(&r);
                if r.hypotheses.contains(&Hypothesis::LowerPartial) {
                    code = code.max(EXIT_PARTIAL);
                }
                rows.push(((q - 1) / 2, r));
            }
            Err(e) => {
                io.error(&format!("q={q}"), &e);
                code = code.max(exit_code(&e));
            }
        }
    }
    if table {
        let _ = writeln!(io.out, "{:>8}{:>8}{:>8}{:>8}", "p", "g", "upper", "lower");
        for (p, r) in &rows {
            let lower = r.lower_bound.map_or("-".to_string(), |l| l.to_string());
            let _ = writeln!(io.out, "{p:>8}{:>8}{:>8}{lower:>8}", r.genus, r.upper_bound);
        }
    }
    Ok(code)
}

fn cmd_scan_rho(io: &mut Io, max_q: u64, threads: Option<usize>) -> Result<i32> {
    let certs = scan_sophie_germain(max_q, threads);
    if certs.is_empty() {
        return Ok(EXIT_OK);
    }
    let mut failed = 0;
    for c in &certs {
        let _ = writeln!(io.out, "{}", c.line());
        if !c.rho_infty_zero {
            failed += 1;
        }
    }
    let _ = writeln!(
        io.out,
        "# pairs={} certified={} failed={failed}",
        certs.len(),
        certs.len() - failed
    );
    Ok(if failed > 0 { EXIT_CERTIFICATION } else { EXIT_OK })
}

fn cmd_lower_bound(io: &mut Io, poly: &str, y0: &str, cap: usize) -> Result<i32> {
    let f = parse_poly(poly)?;
    let y0 = parse_rational(y0)?;
    let opts = IndependenceOptions { cap, ..Default::default() };
    let lb = io.compute(|| lower_bound_from_points(&f, &y0, &opts))?;
    let factors: Vec<String> = lb.factors.iter().map(|g| g.to_string()).collect();
    let _ = writeln!(
        io.out,
        "lower={} classes={} partial={} factors=[{}]",
        lb.lower,
        lb.classes.len(),
        lb.partial,
        factors.join("; ")
    );
    if io.verbose {
        for (g, c) in lb.factors.iter().zip(lb.classes.representatives()) {
            let _ = writeln!(io.out, "  {g}: class {}", c.to_poly().to_string().replace('x', "theta"));
        }
    }
    Ok(if lb.partial { EXIT_PARTIAL } else { EXIT_OK })
}

fn read_bounds(path: &Path) -> Result<BTreeMap<i64, u64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    let mut out = BTreeMap::new();
    for l in parse_bound_lines(&text)? {
        if let Some(m) = l.washington_m() {
            if out.insert(m, l.upper_bound).is_some_and(|old| old != l.upper_bound) {
                return Err(Error::InvalidArgument(format!("conflicting bounds for m={m}")));
            }
        }
    }
    Ok(out)
}

fn cmd_stats(
    io: &mut Io,
    ranks: &Path,
    bounds: &Option<PathBuf>,
    clgroups: &Option<PathBuf>,
    intervals: &str,
) -> Result<i32> {
    let ranks = RankStore::load(ranks)?;
    let intervals = parse_intervals(intervals)?;
    let mut code = EXIT_OK;
    let bounds = match (bounds, clgroups) {
        (Some(b), _) => read_bounds(b)?,
        (None, Some(c)) => {
            let store = ClassGroupStore::load(c)?;
            let ms: Vec<i64> = ranks.records().map(|r| r.m).filter(|&m| in_family(m)).collect();
            let reports: Vec<(i64, Result<BoundReport>)> =
                io.compute(|| ms.par_iter().map(|&m| (m, washington_bound(m, &store))).collect());
            let mut out = BTreeMap::new();
            let mut missing = 0;
            for (m, r) in reports {
                match r {
                    Ok(r) => {
                        out.insert(m, r.upper_bound);
                    }
                    Err(Error::ClassGroupUnknown(_)) => missing += 1,
                    Err(e) => return Err(e),
                }
            }
            if missing > 0 {
                let _ = writeln!(io.err, "missing class groups for {missing} curves; they are left out");
                code = EXIT_PARTIAL;
            }
            out
        }
        (None, None) => return Err(Error::InvalidArgument("one of --bounds or --clgroups is required".into())),
    };
    let stats = sharpness_stats(&ranks, &bounds, &intervals)?;
    let _ = write!(io.out, "{}", stats.render());
    Ok(code)
}

fn cmd_minpoly(io: &mut Io, q: u64, negate: bool) -> Result<i32> {
    let f = min_poly_2cos(q, negate)?;
    let _ = writeln!(io.out, "{f}");
    Ok(EXIT_OK)
}

fn dispatch(cli: &Cli, io: &mut Io) -> Result<i32> {
    match &cli.command {
        Command::Washington { m, clgroups, lower } => cmd_washington(io, m, clgroups, *lower),
        Command::Sophie { q, lower, table, assume_davis_taussky, scan_bound, clgroups, cap } => {
            cmd_sophie(io, q, *lower, *table, *assume_davis_taussky, *scan_bound, clgroups, *cap)
        }
        Command::ScanRho { max_q } => cmd_scan_rho(io, *max_q, cli.threads),
        Command::LowerBound { poly, y0, cap } => cmd_lower_bound(io, poly, y0, *cap),
        Command::Stats { ranks, bounds, clgroups, intervals } => cmd_stats(io, ranks, bounds, clgroups, intervals),
        Command::Minpoly { q, negate } => cmd_minpoly(io, *q, *negate),
    }
}

/// Runs the command line `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INVALID
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    if cli.threads == Some(0) {
        let _ = writeln!(err, "error: --threads must be positive");
        return EXIT_INVALID;
    }
    let pool = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(p) => Some(p),
            Err(e) => {
                let _ = writeln!(err, "error: thread pool: {e}");
                return EXIT_INVALID;
            }
        },
        None => None,
    };
    let mut io = Io { out, err, verbose: cli.verbose, pool };
    match dispatch(&cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            exit_code(&e)
        }
    }
}
