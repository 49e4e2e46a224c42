use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use hardy_calculus::moebius::{maps_commute, AutomorphismKind};
use hardy_calculus::oracle::VerificationReport;
use hardy_calculus::symbol::spectrum::spectrum_csv;
use hardy_calculus::verify::{self, VerifyConfig};
use hardy_calculus::{normalize, parse, render, to_composition_sum, Error, MapClass, MoebiusMap};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hardy", version, about = "Symbol calculus for C*(T_z, C_phi) on the Hardy space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the map and report contact data, Krein adjoint and translation number.
    Analyze(Common),
    /// Canonical decomposition of an expression modulo the compacts.
    Normalize(WithExpr),
    /// Essential spectrum sample as CSV (re,im,source).
    Spectrum(WithExpr),
    /// Essential norm with refinement.
    Norm(WithExpr),
    /// Run the built-in claim battery.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Map as JSON: {"a":[re,im],"b":[re,im],"c":[re,im],"d":[re,im]}.
    #[arg(long, value_name = "FILE")]
    map: PathBuf,
    /// Write the result here (atomically) instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WithExpr {
    #[command(flatten)]
    common: Common,
    /// Operator expression, e.g. "T{z} + C + C'".
    #[arg(long)]
    expr: String,
    /// Grid points on the circle and on the interval.
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
    resolution: u64,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(2..))]
    resolution: u64,
    /// Truncation size for the compression oracle.
    #[arg(long = "N", default_value_t = 512, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// Number of leading columns in vanishing sequences; at most N/2.
    #[arg(long, default_value_t = 64)]
    window: u64,
    /// Comma-separated criterion ids to run (default: all).
    #[arg(long, value_delimiter = ',')]
    only: Option<Vec<u8>>,
}

fn complex(z: num_complex::Complex64) -> Value {
    json!([z.re, z.im])
}

fn load_map(path: &Path) -> anyhow::Result<MoebiusMap> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing map JSON in {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a file in {}", dir.display()))?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(())
}

fn pretty(value: &Value) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn analyze(args: &Common) -> anyhow::Result<()> {
    let map = load_map(&args.map)?;
    let (contact, parabolic) = match map.classify() {
        MapClass::Contact { contact, parabolic } => (contact, parabolic),
        MapClass::Automorphism(kind) => {
            let kind = match kind {
                AutomorphismKind::Elliptic => "elliptic",
                AutomorphismKind::Parabolic => "parabolic",
                AutomorphismKind::Hyperbolic => "hyperbolic",
            };
            return Err(Error::Automorphism).context(format!("{kind} automorphism"));
        }
        MapClass::NotSelfMap => return Err(Error::NotSelfMap.into()),
        MapClass::StrictContraction => return Err(Error::NoBoundaryContact).context("strict contraction"),
    };
    let sigma = map.krein_adjoint().normalized();
    let tau = map.compose(&sigma);
    let report = json!({
        "class": "contact",
        "parabolic": parabolic,
        "zeta": complex(contact.zeta),
        "eta": complex(contact.eta),
        "dphi": complex(contact.dphi),
        "s": contact.s,
        "sigma_coeffs": serde_json::to_value(sigma)?,
        "tau_translation": tau.parabolic_translation().ok().map(complex),
        "krein_commutes": maps_commute(&map, &map.krein_adjoint()),
    });
    emit(args.out.as_deref(), &pretty(&report)?)
}

fn normalize_cmd(args: &WithExpr) -> anyhow::Result<()> {
    let map = load_map(&args.common.map)?;
    let contact = map.quotient_contact()?;
    let expr = parse(&args.expr)?;
    if expr.mentions_compact() {
        eprintln!("warning: explicit K terms are compact and drop out of the canonical form");
    }
    let b = normalize(&expr, &contact)?;
    let report = json!({
        "canonical": to_composition_sum(&b)?,
        "quintuple": render(&b),
        "element": serde_json::to_value(&b)?,
    });
    emit(args.common.out.as_deref(), &pretty(&report)?)
}

fn spectrum_cmd(args: &WithExpr) -> anyhow::Result<()> {
    let map = load_map(&args.common.map)?;
    let contact = map.quotient_contact()?;
    let expr = parse(&args.expr)?;
    let b = normalize(&expr, &contact)?;
    let points = b.essential_spectrum(args.resolution as usize)?;
    emit(args.common.out.as_deref(), &spectrum_csv(&points)?)
}

fn norm_cmd(args: &WithExpr) -> anyhow::Result<()> {
    let map = load_map(&args.common.map)?;
    let contact = map.quotient_contact()?;
    let b = normalize(&parse(&args.expr)?, &contact)?;
    let est = b.essential_norm(args.resolution as usize)?;
    eprintln!("grid spacing {:e}, estimated accuracy {:e}", est.spacing, est.accuracy);
    match &args.common.out {
        None => emit(None, &format!("{}\n", est.value)),
        Some(path) => {
            let report = json!({"norm": est.value, "spacing": est.spacing, "accuracy": est.accuracy});
            emit(Some(path), &pretty(&report)?)
        }
    }
}

fn verify_cmd(args: &VerifyArgs) -> anyhow::Result<bool> {
    if args.window > args.n / 2 {
        bail!(Error::WindowTooLarge {
            window: args.window as usize,
            n: args.n as usize
        });
    }
    let map = load_map(&args.common.map)?;
    let config = VerifyConfig {
        resolution: args.resolution as usize,
        n: args.n as usize,
        window: args.window as usize,
        ..VerifyConfig::default()
    };
    let results = verify::run(&map, &config, args.only.as_deref())?;
    let mut reports: Vec<&VerificationReport> = Vec::new();
    for r in &results {
        eprintln!("[{}] criterion {:>2}: {}", if r.pass() { "PASS" } else { "FAIL" }, r.id, r.title);
        for c in &r.checks {
            eprintln!("       {} {} = {:e}", if c.pass { "ok  " } else { "FAIL" }, c.claim, c.floor_or_fill);
            reports.push(c);
        }
    }
    emit(args.common.out.as_deref(), &(serde_json::to_string_pretty(&reports)? + "\n"))?;
    Ok(results.iter().all(|r| r.pass()))
}

/// Standing-assumption failures exit with 2, everything else with 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Automorphism | Error::NotSelfMap | Error::NoBoundaryContact | Error::FixedContact) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Analyze(a) => analyze(a).map(|_| true),
        Command::Normalize(a) => normalize_cmd(a).map(|_| true),
        Command::Spectrum(a) => spectrum_cmd(a).map(|_| true),
        Command::Norm(a) => norm_cmd(a).map(|_| true),
        Command::Verify(a) => verify_cmd(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: some claims failed");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
