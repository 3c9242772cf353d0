use std::path::PathBuf;
use std::process::ExitCode;

use a1tower::field::parse_rational;
use a1tower::poly::{BUDGET_ENV, DEFAULT_BUDGET};
use a1tower::verifier::{emit_report, run_suite, write_report, BreakId, Config, Format};
use anyhow::{anyhow, Context};
use clap::{Parser, ValueEnum};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Md,
}

/// Certify the construction of the tower X_n exactly and report per check.
#[derive(Debug, Parser)]
#[command(name = "verify", version)]
struct Args {
    /// Top level N of the tower.
    #[arg(long, default_value_t = 3)]
    n: usize,

    /// Roots of f, comma separated rationals such as `1,2,3` or `-1,2,1/2`.
    #[arg(long, default_value = "1,2,3", allow_hyphen_values = true)]
    lambdas: String,

    /// Degree bound for the rigidity certificates.
    #[arg(long, default_value_t = 4)]
    degree_bound: u32,

    /// Run only these checks (comma separated ids, e.g. C1,C8).
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,

    #[arg(long, value_enum, default_value = "json")]
    report: ReportFormat,

    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Gröbner reduction-step budget per computation.
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    /// Inject a fault: retain-lambda1, keep-origin, corrupt-rho,
    /// exclude-plus-lambda, repeat-lambda. Repeatable.
    #[arg(long = "break", value_delimiter = ',')]
    faults: Vec<String>,

    /// Dump every constructed object into the report.
    #[arg(long)]
    verbose: bool,
}

fn config(args: &Args) -> anyhow::Result<Config> {
    let parts: Vec<&str> = args.lambdas.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(anyhow!(
            "--lambdas needs exactly three values, got {}",
            parts.len()
        ));
    };
    let lambdas = [
        parse_rational(a).with_context(|| format!("bad lambda `{a}`"))?,
        parse_rational(b).with_context(|| format!("bad lambda `{b}`"))?,
        parse_rational(c).with_context(|| format!("bad lambda `{c}`"))?,
    ];
    let breaks = args
        .faults
        .iter()
        .map(|f| f.parse::<BreakId>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Config {
        lambdas,
        n: args.n,
        degree_bound: args.degree_bound,
        checks: args.check.clone(),
        budget: args.budget,
        breaks,
        verbose: args.verbose,
    })
}

fn run(args: &Args) -> anyhow::Result<bool> {
    let cfg = config(args)?;
    let report = run_suite(&cfg)?;
    let format = match args.report {
        ReportFormat::Json => Format::Json,
        ReportFormat::Md => Format::Markdown,
    };
    match &args.out {
        Some(path) => write_report(&report, format, path)?,
        None => print!("{}", emit_report(&report, format)),
    }
    for c in &report.checks {
        eprintln!(
            "{:>4}  {:<8} {}",
            c.id,
            format!("{:?}", c.status).to_lowercase(),
            c.title
        );
    }
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
