//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure or internal error,
//! 2 generation infeasible, 64 usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::artifact;
use crate::error::{Error, Result};
use crate::formats::FPFormat;
use crate::funcgen::{generate, rno_results, GenConfig};
use crate::intervals::{calc_odd_intervals, write_constraints};
use crate::oracle::{singleton_census, Func};
use crate::polygen::{CegisConfig, TermStructure};
use crate::rational::format_rational;
use crate::reduction::RangeReduction;
use crate::rounding::RoundingMode;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "oddlibm", version, about = "Correctly rounded minifloat functions from one round-to-odd polynomial")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an artifact for one function and target format.
    Generate(GenerateArgs),
    /// Check an artifact against the reference for every target and mode.
    Verify(VerifyArgs),
    /// List the inputs whose result is exactly representable.
    Singletons(TargetArgs),
    /// Print the odd interval of every input (`x lo hi` in hex).
    Intervals(IntervalArgs),
    /// Check that rounding through round-to-odd in T_{n+2} is innocuous for
    /// every narrower target.
    Composition(CompositionArgs),
}

#[derive(Args, Debug)]
struct TargetArgs {
    #[arg(long)]
    func: Func,
    /// Total bits of T_n.
    #[arg(long)]
    n: u32,
    /// Exponent bits shared by every target.
    #[arg(long)]
    ebits: u32,
}

#[derive(Args, Debug)]
struct EvalFormatArgs {
    /// Total bits of the evaluation format H.
    #[arg(long, default_value_t = 64)]
    h_bits: u32,
    /// Exponent bits of H.
    #[arg(long, default_value_t = 11)]
    h_ebits: u32,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[command(flatten)]
    h: EvalFormatArgs,
    /// Range reduction: identity, log2_family or exp2_family.
    #[arg(long, default_value = "identity")]
    rr: String,
    #[arg(long, default_value_t = 6)]
    max_degree: u32,
    /// Largest piece count tried; a power of two.
    #[arg(long, default_value_t = 64)]
    max_pieces: usize,
    /// Constraints per LP before counterexamples are added.
    #[arg(long, default_value_t = 384)]
    sample_cap: usize,
    /// H ulps kept clear of each end of the pulled-back intervals, per
    /// rounded compensation step.
    #[arg(long, default_value_t = 2)]
    guard_ulps: u32,
    /// Powers used: all, odd or even.
    #[arg(long, default_value = "all")]
    terms: TermStructure,
    /// Artifact path (defaults to `<func>-<n>-<ebits>.artifact`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the generation log here as well as to standard output.
    #[arg(long)]
    log: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    artifact: PathBuf,
    /// `all`, or a comma list of widths and ranges such as `k=5` or `7..12`.
    #[arg(long, default_value = "all")]
    targets: String,
    /// `all`, or a comma list of rn, ra, rz, ru, rd.
    #[arg(long, default_value = "all")]
    modes: String,
    /// Machine-readable summary path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct IntervalArgs {
    #[command(flatten)]
    target: TargetArgs,
    #[command(flatten)]
    h: EvalFormatArgs,
}

#[derive(Args, Debug)]
struct CompositionArgs {
    /// Total bits of T_n; the intermediate format has n + 2.
    #[arg(long)]
    n: u32,
    #[arg(long)]
    ebits: u32,
    #[arg(long, default_value = "all")]
    targets: String,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Parses `all` or `k=5,7..9` into widths within `lo..=hi`.
pub fn parse_targets(spec: &str, lo: u32, hi: u32) -> Result<Vec<u32>> {
    if spec.trim() == "all" {
        return Ok((lo..=hi).collect());
    }
    let mut ks = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        let item = item.strip_prefix("k=").unwrap_or(item);
        let num = |s: &str| s.trim().parse::<u32>().map_err(|_| Error::Parse(format!("invalid width `{s}`")));
        match item.split_once("..") {
            Some((a, b)) => ks.extend(num(a)?..=num(b.trim_start_matches('='))?),
            None => ks.push(num(item)?),
        }
    }
    if let Some(k) = ks.iter().find(|k| !(lo..=hi).contains(*k)) {
        return Err(usage(format!("target width {k} outside {lo}..={hi}")));
    }
    ks.sort_unstable();
    ks.dedup();
    Ok(ks)
}

pub fn parse_modes(spec: &str) -> Result<Vec<RoundingMode>> {
    if spec.trim() == "all" {
        return Ok(RoundingMode::STANDARD.to_vec());
    }
    let modes: Vec<RoundingMode> = spec.split(',').map(str::parse).collect::<Result<_>>()?;
    if modes.contains(&RoundingMode::Ro) {
        return Err(usage("ro is not a target rounding mode"));
    }
    Ok(modes)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidFormat { .. } | Error::Config(_) | Error::Parse(_) | Error::TargetFormat { .. } => EXIT_USAGE,
        Error::Infeasible(_) | Error::EmptyReducedInterval { .. } => EXIT_INFEASIBLE,
        _ => EXIT_VERIFY_FAILED,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_VERIFY_FAILED;
        }
    };
    match pool.install(|| dispatch(cli.command, out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command, out: &mut (dyn Write + Send)) -> Result<i32> {
    match cmd {
        Command::Generate(a) => cmd_generate(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Singletons(a) => cmd_singletons(a, out),
        Command::Intervals(a) => cmd_intervals(a, out),
        Command::Composition(a) => cmd_composition(a, out),
    }
}

fn cmd_generate(a: GenerateArgs, out: &mut dyn Write) -> Result<i32> {
    let tn = FPFormat::new(a.target.n, a.target.ebits)?;
    let h = FPFormat::new(a.h.h_bits, a.h.h_ebits)?;
    if !a.max_pieces.is_power_of_two() {
        return Err(usage(format!("--max-pieces {} is not a power of two", a.max_pieces)));
    }
    if a.max_degree == 0 {
        return Err(usage("--max-degree must be at least 1"));
    }
    let func = a.target.func;
    let cfg = GenConfig {
        h,
        rr: RangeReduction::parse_for(&a.rr, func)?,
        max_degree: a.max_degree,
        max_pieces: a.max_pieces,
        terms: a.terms,
        guard_ulps: a.guard_ulps,
        cegis: CegisConfig {
            sample_cap: a.sample_cap.max(a.max_degree as usize + 1),
            ..CegisConfig::default()
        },
        ..GenConfig::new(func, tn)
    };
    let (g, log) = match generate(&cfg) {
        Ok(r) => r,
        Err(Error::Infeasible(f)) => {
            writeln!(out, "generation failed: {f}")?;
            writeln!(out, "most constrained piece: {} of {} with {} constraints", f.piece, f.pieces, f.constraints)?;
            return Ok(EXIT_INFEASIBLE);
        }
        Err(e) => return Err(e),
    };
    let path = a
        .out
        .unwrap_or_else(|| PathBuf::from(format!("{}-{}-{}.artifact", func, tn.total_bits(), tn.exponent_bits())));
    artifact::save(&g, &path)?;
    let text = format!(
        "{func} T_n = {tn} T_n+2 = {} H = {h} reduction {}\n{log}artifact {}\n",
        g.t2,
        g.rr(),
        path.display()
    );
    out.write_all(text.as_bytes())?;
    if let Some(l) = a.log {
        std::fs::write(l, &text)?;
    }
    Ok(EXIT_OK)
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let g = artifact::load(&a.artifact)?;
    let range = g.target_range();
    let ks = parse_targets(&a.targets, *range.start(), *range.end())?;
    let modes = parse_modes(&a.modes)?;
    let report = verify::check(&g, &ks, &modes)?;
    write!(out, "{report}")?;
    if let Some(p) = a.report {
        std::fs::write(p, report.to_json())?;
    }
    Ok(if report.all_pass() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_singletons(a: TargetArgs, out: &mut dyn Write) -> Result<i32> {
    let tn = FPFormat::new(a.n, a.ebits)?;
    let t2 = tn.widened(2)?;
    let census = singleton_census(a.func, tn, t2);
    writeln!(out, "# {} on {tn}, results in {t2}", a.func)?;
    for e in &census {
        writeln!(
            out,
            "{} {} -> {} {}",
            e.x.to_hex(),
            format_rational(&e.x.finite_value().unwrap()),
            e.y.to_hex(),
            format_rational(&e.y.finite_value().unwrap())
        )?;
    }
    writeln!(out, "{} inputs", census.len())?;
    Ok(EXIT_OK)
}

fn cmd_intervals(a: IntervalArgs, out: &mut dyn Write) -> Result<i32> {
    let tn = FPFormat::new(a.target.n, a.target.ebits)?;
    let h = FPFormat::new(a.h.h_bits, a.h.h_ebits)?;
    let t2 = tn.widened(2)?;
    let results = rno_results(a.target.func, tn, t2)?;
    let (constraints, singles) = calc_odd_intervals(&results, t2, h)?;
    writeln!(out, "# {} on {tn}: x ({tn}) lo hi ({h})", a.target.func)?;
    out.write_all(write_constraints(&constraints).as_bytes())?;
    for s in &singles {
        writeln!(out, "{} singleton {}", s.x.to_hex(), s.y.to_hex())?;
    }
    writeln!(out, "# {} intervals, {} singletons", constraints.len(), singles.len())?;
    Ok(EXIT_OK)
}

fn cmd_composition(a: CompositionArgs, out: &mut dyn Write) -> Result<i32> {
    let tn = FPFormat::new(a.n, a.ebits)?;
    let t2 = tn.widened(2)?;
    let ks = parse_targets(&a.targets, a.ebits + 2, a.n)?;
    let r = verify::check_odd_composition(t2, &ks)?;
    writeln!(
        out,
        "{t2} -> k in {:?}: {} representatives, {} of {} classes, {} checks, {} violations",
        r.ks, r.representatives, r.distinct_classes, r.realizable_classes, r.checks, r.violations
    )?;
    for w in &r.witnesses {
        writeln!(out, "  v = {} k = {} {}: direct {} via {}", w.v, w.k, w.mode, w.direct, w.via)?;
    }
    Ok(if r.pass() { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
