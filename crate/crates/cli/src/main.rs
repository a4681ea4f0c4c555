//! `sumfold` — generate the sequences of the sum-free-set machinery and run
//! its verification suites.
//!
//! Exit codes: 0 when everything requested passed, 1 when any check failed
//! (or was unstable), 2 for usage or configuration errors.

mod report;
mod suite;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::json;

use sumfold::complexity::{check_conjecture, ConjectureOutcome};
use sumfold::folding::FoldingFamily;
use sumfold::sturmian::{find_intercept, mechanical_stream, SlopeSpec};
use sumfold::sumfree::SumFreeTrace;
use sumfold::surd::Surd;
use sumfold::wnum::{
    check_construction, check_w_identities, is_valid, kernel_subsequence, KernelSpec, WCodec,
    WExpansion,
};
use sumfold::words::render_letters;

use report::{emit, params, run_cell, CheckReport};
use suite::{run_suite, SuiteName, SuiteOptions};

#[derive(Parser)]
#[command(name = "sumfold", version, about = "Sum-free sets from folding and Sturmian sequences: generators and exact verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a prefix of one of the library's sequences.
    Gen(GenArgs),
    /// Run a verification suite; one JSONL record per check cell.
    Verify(VerifyArgs),
    /// Numeration-system utilities.
    Wnum {
        #[command(subcommand)]
        cmd: WnumCmd,
    },
    /// Sturmian pipeline checks for one slope.
    Sturmian {
        #[command(subcommand)]
        cmd: SturmianCmd,
    },
    /// Subword-complexity profile and run-length recurrences.
    Complexity(ComplexityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SequenceName {
    Pkf,
    Tau,
    Mu,
    Alpha,
    V,
    Sumfree,
    Diff,
    Sturmian,
    #[value(name = "what-complement")]
    WhatComplement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenFormat {
    Plain,
    Csv,
}

#[derive(Args)]
struct GenArgs {
    /// Which sequence to emit.
    sequence: SequenceName,
    #[arg(long, default_value_t = 1)]
    k: u32,
    /// Prefix length (letters, counters, or set elements, as appropriate).
    #[arg(long, default_value_t = 32)]
    len: usize,
    /// Slope as p,q,r,D (sturmian only).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Intercept as p,q,r,D (sturmian only; scanned for when omitted).
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    /// plain: one line; csv: "index,letter" lines honoring the sequence's
    /// index base.
    #[arg(long, value_enum, default_value_t = GenFormat::Plain)]
    format: GenFormat,
}

#[derive(Args)]
struct VerifyArgs {
    suite: SuiteName,
    /// Folding parameters, e.g. "2", "1..4", or "1,3,5" (default 1..4).
    #[arg(long)]
    k: Option<String>,
    /// Prefix length / term count driving each check (default 10000).
    #[arg(long)]
    n: Option<u64>,
    /// Run-length count for conjecture cells (default 6).
    #[arg(long)]
    m: Option<usize>,
    /// Also write the JSONL records to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (parallel builds only).
    #[arg(long)]
    jobs: Option<usize>,
    /// TOML or JSON file with the same keys; flags set on the command line win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum WnumCmd {
    /// Valid expansion of a positive integer.
    Encode {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: String,
    },
    /// Value of a digit word (validity not required).
    Decode {
        #[arg(long)]
        k: u32,
        /// Comma-separated digits, most-significant first.
        #[arg(long)]
        digits: String,
    },
    /// Is a digit word a valid expansion?
    Validate {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        digits: String,
    },
    /// Place-value identities in exact arithmetic.
    CheckIdentities {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 30)]
        n_max: u32,
    },
    /// The b/c construction clauses for one parameter cell.
    CheckConstruction {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        r: u32,
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
    /// One kernel subsequence, letters via the numeration system.
    Kernel {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u64,
        #[arg(long, default_value_t = 32)]
        len: usize,
    },
}

#[derive(Subcommand)]
enum SturmianCmd {
    /// Hypothesis, star parity, and the difference-sequence pipeline.
    Check {
        /// Slope as p,q,r,D.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        /// Intercept as p,q,r,D; scanned for when omitted.
        #[arg(long, allow_hyphen_values = true)]
        rho: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        /// Complexity-certificate depth.
        #[arg(long, default_value_t = 50)]
        n_max: usize,
    },
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long, default_value_t = 3)]
    k: u32,
    /// Number of complete run lengths to extract and verify.
    #[arg(long, default_value_t = 8)]
    m: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen(args) => gen(args),
        Command::Verify(args) => verify(args),
        Command::Wnum { cmd } => wnum(cmd),
        Command::Sturmian { cmd } => sturmian(cmd),
        Command::Complexity(args) => complexity(args),
    }
}

fn parse_surd(text: &str) -> Result<Surd, String> {
    text.parse::<Surd>().map_err(|e| e.to_string())
}

/// "3", "1..4" (inclusive), or "1,3,5".
fn parse_k_range(text: &str) -> Result<Vec<u32>, String> {
    let text = text.trim();
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| format!("bad range start {lo:?}"))?;
        let hi: u32 = hi.trim().parse().map_err(|_| format!("bad range end {hi:?}"))?;
        if lo < 1 || hi < lo {
            return Err(format!("empty or invalid k range {text:?}"));
        }
        return Ok((lo..=hi).collect());
    }
    let ks: Result<Vec<u32>, _> = text.split(',').map(|p| p.trim().parse::<u32>()).collect();
    let ks = ks.map_err(|_| format!("cannot parse k selection {text:?}"))?;
    if ks.is_empty() || ks.iter().any(|&k| k < 1) {
        return Err(format!("invalid k selection {text:?}"));
    }
    Ok(ks)
}

fn default_slopes() -> Vec<(Surd, Option<Surd>)> {
    vec![
        // (sqrt(5) - 1) / 2
        (Surd::new(-1, 1, 2, 5).expect("valid surd"), None),
        // 2 - sqrt(2)
        (Surd::new(2, -1, 1, 2).expect("valid surd"), None),
        // sqrt(2) / 2
        (Surd::new(0, 1, 2, 2).expect("valid surd"), None),
        // sqrt(3) / 3
        (Surd::new(0, 1, 3, 3).expect("valid surd"), None),
    ]
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteConfig {
    k: Option<String>,
    n: Option<u64>,
    m: Option<usize>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    slopes: Option<Vec<SlopeEntry>>,
}

#[derive(Debug, Deserialize)]
struct SlopeEntry {
    alpha: String,
    rho: Option<String>,
}

fn load_config(path: &PathBuf) -> Result<SuiteConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    if path.extension().is_some_and(|ext| ext == "json") {
        serde_json::from_str(&text).map_err(|e| format!("bad JSON config: {e}"))
    } else {
        toml::from_str(&text).map_err(|e| format!("bad TOML config: {e}"))
    }
}

fn verify(args: VerifyArgs) -> Result<ExitCode, String> {
    let config = match &args.config {
        Some(path) => load_config(path)?,
        None => SuiteConfig::default(),
    };
    // command-line flags win over the config file, which wins over defaults
    let k_text = args.k.or(config.k).unwrap_or_else(|| "1..4".into());
    let ks = parse_k_range(&k_text)?;
    let n = args.n.or(config.n).unwrap_or(10_000);
    let m = args.m.or(config.m).unwrap_or(6);
    let out = args.out.or(config.out);
    let jobs = args.jobs.or(config.jobs);

    if let Some(jobs) = jobs {
        configure_jobs(jobs)?;
    }

    let slopes = match config.slopes {
        Some(entries) => {
            let mut slopes = Vec::new();
            for entry in entries {
                let alpha = parse_surd(&entry.alpha)?;
                let rho = entry.rho.as_deref().map(parse_surd).transpose()?;
                slopes.push((alpha, rho));
            }
            slopes
        }
        None => default_slopes(),
    };

    let opts = SuiteOptions { ks, n, m, slopes };
    let reports = run_suite(args.suite, &opts);
    if reports.is_empty() {
        return Err("suite selection produced no check cells".into());
    }
    emit(&reports, out.as_deref())?;
    Ok(exit_for(&reports))
}

#[cfg(feature = "parallel")]
fn configure_jobs(jobs: usize) -> Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| format!("cannot configure {jobs} workers: {e}"))
}

#[cfg(not(feature = "parallel"))]
fn configure_jobs(_jobs: usize) -> Result<(), String> {
    eprintln!("note: built without the parallel feature; --jobs ignored");
    Ok(())
}

fn exit_for(reports: &[CheckReport]) -> ExitCode {
    if reports.iter().all(|r| r.passed()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn gen(args: GenArgs) -> Result<ExitCode, String> {
    let k = args.k;
    let len = args.len;
    // (lines, index_base): plain output is joined by `sep` below
    let (values, index_base, sep) = match args.sequence {
        SequenceName::Pkf => {
            let fam = family(k)?;
            (letters_to_strings(fam.pkf().prefix_letters(len)), 0, "")
        }
        SequenceName::Tau => {
            let fam = family(k)?;
            (
                letters_to_strings(fam.tau_stream().prefix_letters(len)),
                0,
                "",
            )
        }
        SequenceName::WhatComplement => {
            let fam = family(k)?;
            (
                letters_to_strings(fam.sigma_hat_stream().prefix_letters(len)),
                0,
                "",
            )
        }
        SequenceName::V => {
            let fam = family(k)?;
            let mut trace = SumFreeTrace::new(fam.pkf());
            trace.extend_to_frontier(len as u64);
            let chars: Vec<String> = trace.v_string().chars().map(String::from).collect();
            (chars, 1, "")
        }
        SequenceName::Sumfree => {
            let fam = family(k)?;
            let trace = fam.trace_with_terms(len);
            let lines: Vec<String> = trace.members().iter().map(u64::to_string).collect();
            (lines, 1, "\n")
        }
        SequenceName::Mu | SequenceName::Alpha | SequenceName::Diff => {
            let fam = family(k)?;
            let trace = fam.trace_with_terms(len + 1);
            let counters = sumfold::sumfree::gap_counters(&trace).map_err(|e| e.to_string())?;
            let series = match args.sequence {
                SequenceName::Mu => counters.mu,
                SequenceName::Alpha => counters.alpha,
                _ => counters.d,
            };
            let lines: Vec<String> = series.iter().take(len).map(u64::to_string).collect();
            (lines, 1, ",")
        }
        SequenceName::Sturmian => {
            let alpha = parse_surd(args.alpha.as_deref().ok_or("--alpha is required")?)?;
            let rho = match args.rho.as_deref() {
                Some(text) => parse_surd(text)?,
                None => find_intercept(&alpha, 1_000).map_err(|e| e.to_string())?,
            };
            let spec = SlopeSpec::new(alpha, rho).map_err(|e| e.to_string())?;
            let mut stream = mechanical_stream(&spec).map_err(|e| e.to_string())?;
            (letters_to_strings(stream.prefix_letters(len)), 0, "")
        }
    };
    match args.format {
        GenFormat::Plain => println!("{}", values.join(sep)),
        GenFormat::Csv => {
            for (i, value) in values.iter().enumerate() {
                println!("{},{}", i as u64 + index_base as u64, value);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn family(k: u32) -> Result<FoldingFamily, String> {
    FoldingFamily::new(k).map_err(|e| e.to_string())
}

fn letters_to_strings(letters: &[u32]) -> Vec<String> {
    letters.iter().map(|l| l.to_string()).collect()
}

fn parse_digits(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| format!("bad digit {p:?}")))
        .collect()
}

fn wnum(cmd: WnumCmd) -> Result<ExitCode, String> {
    match cmd {
        WnumCmd::Encode { k, n } => {
            let n: BigInt = n.parse().map_err(|_| format!("not an integer: {n:?}"))?;
            let expansion = WCodec::new(k)
                .and_then(|mut c| c.encode(&n))
                .map_err(|e| e.to_string())?;
            println!(
                "{}",
                json!({"op": "encode", "k": k, "n": n.to_string(), "digits": expansion.render()})
            );
            Ok(ExitCode::SUCCESS)
        }
        WnumCmd::Decode { k, digits } => {
            let digits = parse_digits(&digits)?;
            let value = WCodec::new(k)
                .and_then(|mut c| c.decode(&digits))
                .map_err(|e| e.to_string())?;
            println!(
                "{}",
                json!({"op": "decode", "k": k, "digits": WExpansion::new(digits).render(), "value": value.to_string()})
            );
            Ok(ExitCode::SUCCESS)
        }
        WnumCmd::Validate { k, digits } => {
            let digits = parse_digits(&digits)?;
            let valid = is_valid(k, &digits);
            println!(
                "{}",
                json!({"op": "validate", "k": k, "digits": WExpansion::new(digits).render(), "valid": valid})
            );
            Ok(ExitCode::SUCCESS)
        }
        WnumCmd::CheckIdentities { k, n_max } => {
            let report = run_cell(
                "wnum-identities",
                params(&[("k", json!(k)), ("N", json!(n_max))]),
                || check_w_identities(k, n_max),
            );
            emit(std::slice::from_ref(&report), None)?;
            Ok(exit_for(&[report]))
        }
        WnumCmd::CheckConstruction { k, l, r, n } => {
            let report = run_cell(
                "construction",
                params(&[
                    ("k", json!(k)),
                    ("l", json!(l)),
                    ("r", json!(r)),
                    ("N", json!(n)),
                ]),
                || check_construction(k, l, r, n),
            );
            emit(std::slice::from_ref(&report), None)?;
            Ok(exit_for(&[report]))
        }
        WnumCmd::Kernel { k, a, b, len } => {
            let letters =
                kernel_subsequence(k, KernelSpec { a, b }, len).map_err(|e| e.to_string())?;
            println!(
                "{}",
                json!({"op": "kernel", "k": k, "a": a, "b": b, "letters": render_letters(&letters)})
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn sturmian(cmd: SturmianCmd) -> Result<ExitCode, String> {
    match cmd {
        SturmianCmd::Check { alpha, rho, n, n_max } => {
            let alpha = parse_surd(&alpha)?;
            let rho = match rho.as_deref() {
                Some(text) => parse_surd(text)?,
                None => find_intercept(&alpha, 1_000).map_err(|e| e.to_string())?,
            };
            let spec = SlopeSpec::new(alpha, rho).map_err(|e| e.to_string())?;
            let mut p = params(&[
                ("alpha", json!(alpha.to_string())),
                ("rho", json!(rho.to_string())),
                ("N", json!(n)),
            ]);
            p.insert("n_max".into(), json!(n_max));
            let parity = run_cell("star-parity", p.clone(), || {
                sumfold::sturmian::check_star_parity(&spec, n)
            });
            let pipeline = run_cell("sturmian", p, || {
                sumfold::sturmian::check_theorem_d(&spec, n, n_max)
            });
            let reports = vec![parity, pipeline];
            emit(&reports, None)?;
            Ok(exit_for(&reports))
        }
    }
}

fn complexity(args: ComplexityArgs) -> Result<ExitCode, String> {
    let report = check_conjecture(args.k, args.m).map_err(|e| e.to_string())?;
    let conjecture = match &report.outcome {
        ConjectureOutcome::Pass => "pass",
        ConjectureOutcome::Fail { .. } => "fail",
        ConjectureOutcome::Unstable => "unstable",
    };
    let mut record = BTreeMap::from([
        ("f".to_string(), json!(report.f)),
        ("d".to_string(), json!(report.d)),
        ("a".to_string(), json!(report.a)),
        ("stabilized".to_string(), json!(report.stabilized)),
        ("prefix_len".to_string(), json!(report.prefix_len)),
        ("conjecture".to_string(), json!(conjecture)),
    ]);
    if let ConjectureOutcome::Fail { index, detail } = &report.outcome {
        record.insert("fail_index".into(), json!(index));
        record.insert("detail".into(), json!(detail));
    }
    println!("{}", serde_json::to_string(&record).map_err(|e| e.to_string())?);
    Ok(match report.outcome {
        ConjectureOutcome::Pass => ExitCode::SUCCESS,
        _ => ExitCode::from(1),
    })
}
