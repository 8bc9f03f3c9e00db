//! Command-line front end.
//!
//! Exit codes: `0` success, `1` a check or engine cross-check failed,
//! `2` invalid arguments or an unwritable output path.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::bounds::{log_of_count, theorem1_rhs, BoundParams};
use crate::counting::{count_bruteforce, count_dp, count_recurrence, table_for, DEFAULT_ORACLE_CEILING};
use crate::partset::{parts_up_to, PartSetVariant, ResidueSpec};
use crate::report::{fmt_real, write_rows, Format, TableRow};
use crate::verify::{run_checks, CheckName, SpecGrid, SweepConfig};

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "PARTLAB_THREADS";

#[derive(Parser, Debug)]
#[command(name = "partlab", version)]
#[command(about = "Exact restricted partition counts and bound verification for residue-class part sets")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count partitions of n with the DP and recurrence engines and compare them
    Count {
        #[arg(long)]
        m: usize,
        /// Comma-separated residues, e.g. `1,3` (empty for R = {})
        #[arg(long = "r")]
        residues: String,
        #[arg(long, value_enum, default_value = "a-plus")]
        variant: VariantArg,
        #[arg(long)]
        n: usize,
    },
    /// Per-n table of p_A, p_A+, p_R+, the A+ bound, its slack and the ratio
    Table {
        #[arg(long)]
        m: usize,
        #[arg(long = "r")]
        residues: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output file (standard output when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run checks and print one summary line per check
    Verify(SweepArgs),
    /// Run checks and emit every report row
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Checks to run (default: all)
    #[arg(long, value_enum, value_delimiter = ',')]
    checks: Vec<CheckName>,
    #[arg(long, default_value_t = 4)]
    m_max: usize,
    #[arg(long, default_value_t = 200)]
    n_max: usize,
    /// Modulus for a single spec; requires `--r` with an explicit list
    #[arg(long)]
    m: Option<usize>,
    /// `all` sweeps every nonempty subset, otherwise a comma-separated list
    #[arg(long = "r", default_value = "all")]
    residues: String,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Report file (`sweep`: standard output when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    FullA,
    APlus,
    RPlus,
    AllNaturals,
}

impl From<VariantArg> for PartSetVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::FullA => Self::FullA,
            VariantArg::APlus => Self::APlus,
            VariantArg::RPlus => Self::RPlus,
            VariantArg::AllNaturals => Self::AllNaturals,
        }
    }
}

/// Errors that map to exit code 2.
#[derive(Debug)]
struct ConfigError(anyhow::Error);

impl<E: Into<anyhow::Error>> From<E> for ConfigError {
    fn from(e: E) -> Self {
        Self(e.into())
    }
}

enum Outcome {
    Ok,
    Failed,
}

pub fn parse_residues(s: &str) -> anyhow::Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<usize>().with_context(|| format!("bad residue `{p}`")))
        .collect()
}

fn make_spec(m: usize, residues: &str) -> Result<ResidueSpec, ConfigError> {
    if residues.trim() == "all" {
        return Err(anyhow!("`--r all` is only accepted by verify and sweep").into());
    }
    Ok(ResidueSpec::new(m, &parse_residues(residues)?)?)
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, ConfigError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct CountOutput {
    m: usize,
    #[serde(rename = "R")]
    residues: String,
    variant: String,
    n: usize,
    count: String,
    dp: String,
    recurrence: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bruteforce: Option<String>,
    agree: bool,
}

fn cmd_count(m: usize, residues: &str, variant: VariantArg, n: usize) -> Result<Outcome, ConfigError> {
    let spec = make_spec(m, residues)?;
    let variant = PartSetVariant::from(variant);
    let parts = parts_up_to(&spec, &variant, n);
    let dp = count_dp::<BigUint>(&parts, n)?.into_values().pop().unwrap();
    let rec = count_recurrence::<BigUint>(&parts, n)
        .map(|t| t.into_values().pop().unwrap().to_string())
        .unwrap_or_else(|e| format!("error: {e}"));
    let brute = (n <= DEFAULT_ORACLE_CEILING).then(|| count_bruteforce(&parts, n).map(|b| b.to_string()).unwrap_or_default());
    let dp = dp.to_string();
    let agree = rec == dp && brute.as_ref().map_or(true, |b| *b == dp);
    let out = CountOutput {
        m,
        residues: spec.residues_label(),
        variant: variant.label(),
        n,
        count: dp.clone(),
        dp,
        recurrence: rec,
        bruteforce: brute,
        agree,
    };
    println!("{}", serde_json::to_string(&out)?);
    Ok(if agree { Outcome::Ok } else { Outcome::Failed })
}

fn cmd_table(
    m: usize,
    residues: &str,
    n_max: usize,
    format: Format,
    output: Option<&PathBuf>,
) -> Result<Outcome, ConfigError> {
    let spec = make_spec(m, residues)?;
    let full = table_for(&spec, &PartSetVariant::FullA, n_max);
    let plus = table_for(&spec, &PartSetVariant::APlus, n_max);
    let small = table_for(&spec, &PartSetVariant::RPlus, n_max);
    let params = BoundParams::<f64>::new(&spec).ok();
    let rows: Vec<TableRow> = (0..=n_max)
        .map(|n| {
            let mut row = TableRow::new(n, &full[n], &plus[n], &small[n]);
            if let Some(p) = &params {
                let bound = theorem1_rhs(n, p);
                row.theorem1_bound = Some(bound);
                row.slack = log_of_count(&plus[n]).ok().map(|l| bound - l);
                row.ratio = (n > 0)
                    .then(|| log_of_count(&full[n]).ok())
                    .flatten()
                    .map(|l| l / bound);
            }
            row
        })
        .collect();
    let out = open_output(output)?;
    write_rows(out, &rows, format)?;
    Ok(Outcome::Ok)
}

fn sweep_config(args: &SweepArgs) -> Result<SweepConfig, ConfigError> {
    let grid = match (args.m, args.residues.trim()) {
        (None, "all") => {
            if args.m_max == 0 {
                return Err(anyhow!("--m-max must be at least 1").into());
            }
            SpecGrid::AllSubsets { m_max: args.m_max }
        }
        (Some(m), "all") => {
            if m == 0 {
                return Err(anyhow!("--m must be at least 1").into());
            }
            SpecGrid::AllSubsets { m_max: m }
        }
        (Some(m), list) => {
            let spec = ResidueSpec::new(m, &parse_residues(list)?)?;
            if spec.rsize() == 0 {
                return Err(anyhow!("checks need a nonempty residue set").into());
            }
            SpecGrid::Single(spec)
        }
        (None, _) => return Err(anyhow!("an explicit --r list needs --m").into()),
    };
    let mut checks = if args.checks.is_empty() {
        CheckName::ALL.to_vec()
    } else {
        args.checks.clone()
    };
    checks.dedup();
    Ok(SweepConfig {
        grid,
        n_max: args.n_max,
        checks,
    })
}

fn cmd_sweep(args: &SweepArgs, emit_rows: bool) -> Result<Outcome, ConfigError> {
    let cfg = sweep_config(args)?;
    // Open the output before running so a bad path fails fast.
    let out = match (&args.output, emit_rows) {
        (Some(p), _) => Some(open_output(Some(p))?),
        (None, true) => Some(open_output(None)?),
        (None, false) => None,
    };
    let outcomes = run_checks(&cfg);
    if let Some(out) = out {
        let rows: Vec<_> = outcomes.iter().flat_map(|o| o.rows.iter().cloned()).collect();
        write_rows(out, &rows, args.format)?;
    }
    let mut summary = String::new();
    for o in &outcomes {
        summary.push_str(&o.summary.to_string());
        summary.push('\n');
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.summary.passed).collect();
    let worst = outcomes
        .iter()
        .filter_map(|o| o.summary.worst)
        .fold(f64::INFINITY, f64::min);
    summary.push_str(&format!(
        "verify: {} ({} checks, {} failed, {} rows, min worst={})\n",
        if failed.is_empty() { "PASS" } else { "FAIL" },
        outcomes.len(),
        failed.len(),
        outcomes.iter().map(|o| o.rows.len()).sum::<usize>(),
        if worst.is_finite() { fmt_real(worst) } else { "-".into() },
    ));
    if emit_rows && args.output.is_none() {
        eprint!("{summary}");
    } else {
        print!("{summary}");
    }
    Ok(if failed.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Failed
    })
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        // A second call in the same process keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let result = match &cli.command {
        Command::Count {
            m,
            residues,
            variant,
            n,
        } => cmd_count(*m, residues, *variant, *n),
        Command::Table {
            m,
            residues,
            n_max,
            format,
            output,
        } => cmd_table(*m, residues, *n_max, *format, output.as_ref()),
        Command::Verify(args) => cmd_sweep(args, false),
        Command::Sweep(args) => cmd_sweep(args, true),
    };
    match result {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Failed) => 1,
        Err(ConfigError(e)) => {
            eprintln!("error: {e:#}");
            2
        }
    }
}
