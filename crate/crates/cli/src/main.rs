mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Failure, Report};

/// Periodic and twisted Deligne cohomology of finite simplicial complexes.
#[derive(Parser, Debug)]
#[command(name = "deligne-lab", version)]
struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simplicial cohomology with integral, rational or Q/Z coefficients.
    Cohomology(CohomologyArgs),
    /// Deligne cohomology of one weight, or periodic Deligne cohomology.
    Deligne(DeligneArgs),
    /// Twisted periodic cohomology (integral, sign or differential twist).
    Twisted(TwistedArgs),
    /// Pages of the twisted Atiyah-Hirzebruch spectral sequence.
    Ahss(AhssArgs),
    /// Twisted cohomology of a CDGA model.
    Cdga(CdgaArgs),
    /// Run an invariant suite.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum Coeff {
    Z,
    Q,
    Qz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum ParityArg {
    Ev,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
enum Via {
    /// Direct when the twist squares to zero on cochains, otherwise the AHSS.
    Auto,
    Direct,
    Ahss,
    Both,
}

#[derive(Args, Debug)]
struct CohomologyArgs {
    /// Space file or builder expression such as `sphere(2)`.
    space: String,
    #[arg(long, value_enum, default_value = "z")]
    coeff: Coeff,
    #[arg(long, conflicts_with = "periodic")]
    degree: Option<usize>,
    #[arg(long, value_enum)]
    periodic: Option<ParityArg>,
}

#[derive(Args, Debug)]
struct DeligneArgs {
    space: String,
    #[arg(long, conflicts_with = "periodic", required_unless_present = "periodic")]
    weight: Option<usize>,
    #[arg(long, value_enum)]
    periodic: Option<ParityArg>,
    /// Also verify the exact diamond (periodic only).
    #[arg(long, requires = "periodic")]
    check_diamond: bool,
}

#[derive(Args, Debug)]
struct TwistedArgs {
    space: String,
    /// Twist file or builtin name such as `h3_scale2`.
    #[arg(long)]
    twist: String,
    #[arg(long, value_enum, default_value = "auto")]
    via: Via,
}

#[derive(Args, Debug)]
struct AhssArgs {
    space: String,
    #[arg(long)]
    twist: String,
    /// Include every page entry and differential.
    #[arg(long)]
    pages: bool,
}

#[derive(Args, Debug)]
struct CdgaArgs {
    /// Model file or `sphere(n)`.
    model: String,
    /// Closed odd element to twist by.
    #[arg(long)]
    twist_form: Option<String>,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// d2, leibniz, mv, gauge, parity-shift, cech, splitting, diamond or all
    suite: String,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("DELIGNE_LAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("DELIGNE_LAB_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::usage(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let (name, outcome) = match configure_threads() {
        Err(f) => ("setup", Err(f)),
        Ok(()) => match &cli.command {
            Command::Cohomology(a) => ("cohomology", commands::cohomology(a)),
            Command::Deligne(a) => ("deligne", commands::deligne(a)),
            Command::Twisted(a) => ("twisted", commands::twisted(a)),
            Command::Ahss(a) => ("ahss", commands::ahss(a)),
            Command::Cdga(a) => ("cdga", commands::cdga(a)),
            Command::Check(a) => ("check", commands::check(a)),
        },
    };
    let report = Report::finish(name, outcome, start.elapsed());
    if cli.json {
        use std::io::Write;
        // a closed pipe is not an error of the computation
        let _ =
            writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        report.print_text();
    }
    ExitCode::from(report.exit_code())
}
