mod args;

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use momentum_core::{
    derive_from_snapshots, frontier_bruteforce, frontier_sortscan, momentousness,
    parse_gains_table, parse_leader_terms, parse_snapshot, rank_leaders, run_study, runners_up,
    verify_bound, write_report, DeltaSystem, Error, FrontierReport, MomentousnessScore, Report,
    StudyConfig, SystemComparison,
};

use args::{AlgorithmArg, Cli, Command, InputArgs};

/// Exit code and message for a failed invocation.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        // Everything the library rejects comes from the user's input.
        Self::usage(err.to_string())
    }
}

fn load_input(input: &InputArgs) -> Result<DeltaSystem, Failure> {
    match (&input.gains, &input.before, &input.after) {
        (Some(gains), None, None) => Ok(parse_gains_table(gains)?),
        (None, Some(before), Some(after)) => {
            let before = parse_snapshot(before)?;
            let after = parse_snapshot(after)?;
            let derived = derive_from_snapshots(&before, &after, input.mode.into())?;
            for warning in &derived.warnings {
                eprintln!("warning: {warning}");
            }
            Ok(derived.system)
        }
        _ => Err(Failure::usage(
            "exactly one input is required: --gains, or --before with --after",
        )),
    }
}

fn load_score(gains: Option<&Path>, leaders: Option<&Path>, side: &str) -> Result<MomentousnessScore, Failure> {
    match (gains, leaders) {
        (Some(path), None) => Ok(momentousness(&parse_gains_table(path)?)?),
        (None, Some(path)) => Ok(MomentousnessScore::from_terms(parse_leader_terms(path)?)),
        _ => Err(Failure::usage(format!(
            "system {side} needs exactly one of --gains-{side} or --leaders-csv-{side}"
        ))),
    }
}

fn run(command: Command) -> Result<String, Failure> {
    let out = match command {
        Command::Leaders {
            input,
            layers,
            algorithm,
            format,
        } => {
            let ds = load_input(&input)?;
            let frontier = match algorithm {
                AlgorithmArg::Sortscan => frontier_sortscan(&ds)?,
                AlgorithmArg::Bruteforce => frontier_bruteforce(&ds)?,
            };
            let mut report = FrontierReport::new(&ds, &frontier);
            if layers > 1 {
                report.runners_up = runners_up(&ds, layers as usize)?.split_off(1);
            }
            write_report(&Report::Frontier(report), format.into())
        }
        Command::Rank { input, format } => {
            let ds = load_input(&input)?;
            write_report(&Report::Ranking(rank_leaders(&ds)?), format.into())
        }
        Command::Momentousness {
            input,
            leaders_csv,
            format,
        } => {
            let score = match leaders_csv {
                Some(path) => MomentousnessScore::from_terms(parse_leader_terms(&path)?),
                None => momentousness(&load_input(&input)?)?,
            };
            write_report(&Report::Momentousness(score), format.into())
        }
        Command::Compare {
            gains_a,
            leaders_csv_a,
            gains_b,
            leaders_csv_b,
            format,
        } => {
            let a = load_score(gains_a.as_deref(), leaders_csv_a.as_deref(), "a")?;
            let b = load_score(gains_b.as_deref(), leaders_csv_b.as_deref(), "b")?;
            write_report(&Report::Comparison(SystemComparison::new(a, b)), format.into())
        }
        Command::Simulate {
            n,
            trials,
            seed,
            alpha,
            x_min,
            x_max,
            coupling,
            percentiles,
            format,
        } => {
            let mut config = StudyConfig::new(n, trials, seed);
            config.alpha = alpha;
            config.x_min = x_min;
            config.x_max = x_max.unwrap_or(n as f64 * x_min);
            config.coupling = coupling.into();
            config.percentiles = percentiles;
            write_report(&Report::Study(run_study(&config)?), format.into())
        }
        Command::VerifyBound { input, format } => {
            let ds = load_input(&input)?;
            write_report(&Report::Bound(verify_bound(&ds)), format.into())
        }
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(err) = stdout.write_all(report.as_bytes()).and_then(|_| stdout.flush()) {
                if err.kind() == std::io::ErrorKind::BrokenPipe {
                    return ExitCode::SUCCESS;
                }
                eprintln!("error: writing report: {err}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
