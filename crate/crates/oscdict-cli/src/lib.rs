//! Command-line front end: generate dictionaries into interchange files,
//! verify files against the correlation/structure properties, and inspect
//! the torus bookkeeping for a prime.
//!
//! Exit codes: 0 success / all checks pass; 1 at least one check failed
//! (the report is still written); 2 usage or malformed input; 3 internal
//! generation failure.

pub mod formats;
pub mod report;

use clap::{Parser, Subcommand, ValueEnum};
use formats::Format;
use oscdict_core::field::{is_prime, legendre, FpElem};
use oscdict_core::tori::{build_s, canonical_torus};
use oscdict_core::verify::{run_checks, CheckId};
use oscdict_core::weil::CharacterTable;
use oscdict_core::{DictKind, VerifyOpts};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Environment variable naming the directory for default output paths.
pub const OUTPUT_DIR_VAR: &str = "OSCDICT_OUTPUT_DIR";

#[derive(Parser)]
#[command(
    name = "oscdict",
    version,
    about = "Generate, verify and inspect finite oscillator dictionaries over F_p"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a dictionary and write it to a file
    Generate {
        /// The prime p (odd, > 3)
        #[arg(long)]
        p: u64,
        /// Which family to generate
        #[arg(long, value_enum, default_value_t = KindArg::Both)]
        kind: KindArg,
        /// Override the non-split discriminant (must be a non-square mod p)
        #[arg(long)]
        d: Option<u64>,
        /// Output path; defaults to oscdict_p{p}_{kind}.{ext} in
        /// $OSCDICT_OUTPUT_DIR or the working directory
        #[arg(long)]
        output: Option<PathBuf>,
        /// File format
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Verify a dictionary file and emit a report
    Verify {
        /// Dictionary file (json, csv or oscd; detected by extension)
        dict: PathBuf,
        /// Comma-separated subset of checks
        /// (autocorrelation, crosscorrelation, supremum, fourier, structure)
        #[arg(long)]
        checks: Option<String>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        report: Option<PathBuf>,
        /// Absolute tolerance added to the bounds
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Cross-correlation pair budget before sampling kicks in
        #[arg(long, default_value_t = 100_000)]
        sample_limit: u64,
        /// Seed for the sampled cross-correlation draws
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Record wall-clock runtime in the report (off by default so
        /// repeated runs are byte-identical)
        #[arg(long)]
        timing: bool,
    },
    /// Print torus bookkeeping for a prime
    Inspect {
        /// The prime p (odd, > 3)
        #[arg(long)]
        p: u64,
        /// Override the non-split discriminant
        #[arg(long)]
        d: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Split,
    Nonsplit,
    Both,
}

impl From<KindArg> for DictKind {
    fn from(k: KindArg) -> DictKind {
        match k {
            KindArg::Split => DictKind::Split,
            KindArg::Nonsplit => DictKind::Nonsplit,
            KindArg::Both => DictKind::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    #[value(name = "raw-f64")]
    RawF64,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::RawF64 => Format::RawF64,
        }
    }
}

fn validate_p(p: u64) -> Result<(), String> {
    if p <= 3 || !is_prime(p) {
        return Err("p must be an odd prime > 3".into());
    }
    Ok(())
}

fn validate_d(p: u64, d: Option<u64>) -> Result<(), String> {
    if let Some(d) = d {
        if d % p == 0 || legendre(FpElem::new(d, p)) != -1 {
            return Err(format!("D = {d} must be a non-square modulo {p}"));
        }
    }
    Ok(())
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Generate {
            p,
            kind,
            d,
            output,
            format,
        } => cmd_generate(p, kind.into(), d, output, format.into()),
        Command::Verify {
            dict,
            checks,
            report,
            tol,
            sample_limit,
            seed,
            timing,
        } => cmd_verify(
            &dict,
            checks.as_deref(),
            report.as_deref(),
            tol,
            sample_limit,
            seed,
            timing,
        ),
        Command::Inspect { p, d } => cmd_inspect(p, d),
    }
}

fn default_output_path(p: u64, kind: DictKind, format: Format) -> PathBuf {
    let name = format!("oscdict_p{p}_{}.{}", kind.as_str(), format.extension());
    match std::env::var_os(OUTPUT_DIR_VAR) {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir).join(name),
        _ => PathBuf::from(name),
    }
}

fn cmd_generate(
    p: u64,
    kind: DictKind,
    d: Option<u64>,
    output: Option<PathBuf>,
    format: Format,
) -> i32 {
    if let Err(m) = validate_p(p).and_then(|()| validate_d(p, d)) {
        return usage_error(&m);
    }
    let dict = match oscdict_core::gen_dictionary(p, kind, d) {
        Ok(dict) => dict,
        Err(e) => {
            eprintln!("error: generation failed: {e}");
            return EXIT_INTERNAL;
        }
    };
    let path = output.unwrap_or_else(|| default_output_path(p, kind, format));
    let bytes = formats::encode(&dict, format);
    if let Err(e) = std::fs::write(&path, bytes) {
        eprintln!("error: cannot write {}: {e}", path.display());
        return EXIT_USAGE;
    }
    println!(
        "wrote {} entries (p = {p}, kind = {}) to {}",
        dict.entries.len(),
        kind.as_str(),
        path.display()
    );
    EXIT_OK
}

fn parse_checks(arg: Option<&str>) -> Result<Vec<CheckId>, String> {
    let Some(arg) = arg else {
        return Ok(CheckId::ALL.to_vec());
    };
    let mut out = Vec::new();
    for name in arg.split(',') {
        let name = name.trim();
        if name.is_empty() {
            continue;
        }
        let id = CheckId::parse(name).ok_or_else(|| format!("unknown check name: {name}"))?;
        if !out.contains(&id) {
            out.push(id);
        }
    }
    if out.is_empty() {
        return Err("no checks selected".into());
    }
    Ok(out)
}

fn cmd_verify(
    dict_path: &Path,
    checks: Option<&str>,
    report_path: Option<&Path>,
    tol: f64,
    sample_limit: u64,
    seed: u64,
    timing: bool,
) -> i32 {
    let selected = match parse_checks(checks) {
        Ok(sel) => sel,
        Err(m) => return usage_error(&m),
    };
    if !tol.is_finite() || tol <= 0.0 {
        return usage_error("tol must be a positive finite number");
    }
    let bytes = match std::fs::read(dict_path) {
        Ok(b) => b,
        Err(e) => return usage_error(&format!("cannot read {}: {e}", dict_path.display())),
    };
    let format = Format::detect(dict_path, &bytes);
    let dict = match formats::decode(&bytes, format) {
        Ok(d) => d,
        Err(e) => return usage_error(&format!("{}: {e}", dict_path.display())),
    };
    if let Err(m) = validate_p(dict.p) {
        return usage_error(&format!("{}: {m}", dict_path.display()));
    }

    let started = Instant::now();
    let ct = CharacterTable::new(dict.p);
    let opts = VerifyOpts {
        tol,
        sample_limit,
        seed,
    };
    let outcome = run_checks(&ct, &dict, &opts, &selected);
    let runtime = if timing {
        started.elapsed().as_secs_f64()
    } else {
        0.0
    };
    let text = report::report_json(&dict, &outcome, &opts, &selected, runtime);

    match report_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{text}"),
    }
    for c in &outcome.checks {
        eprintln!(
            "{}: {} (worst {:.6e}, checked {})",
            c.name,
            c.status.as_str(),
            c.worst_value,
            c.count_checked
        );
    }
    if outcome.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn cmd_inspect(p: u64, d: Option<u64>) -> i32 {
    if let Err(m) = validate_p(p).and_then(|()| validate_d(p, d)) {
        return usage_error(&m);
    }
    let (dd, (s, t), gd) = match canonical_torus(p, d) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INTERNAL;
        }
    };
    println!("p = {p}");
    println!("split tori: {}", p * (p + 1) / 2);
    println!("nonsplit tori: {}", p * (p - 1) / 2);
    println!("D = {}", dd.value());
    println!("(s, t) = ({}, {})", s.value(), t.value());
    println!(
        "g_D = [[{}, {}], [{}, {}]]  (order {})",
        gd.a().value(),
        gd.b().value(),
        gd.c().value(),
        gd.d().value(),
        p + 1
    );
    println!("|N_D| = {}", 2 * (p + 1));
    println!(
        "coset reps: {} split, {} nonsplit",
        p * (p + 1) / 2,
        p * (p - 1) / 2
    );
    if p % 4 == 1 {
        match build_s(p) {
            Ok(set) => {
                let items: Vec<String> = set.iter().map(|a| a.value().to_string()).collect();
                println!("S = {{{}}}", items.join(", "));
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_INTERNAL;
            }
        }
    }
    EXIT_OK
}
