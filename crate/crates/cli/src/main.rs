//! `tcore`: exact t-core counts, saddle points, certified estimates and
//! verification of `c_t(N) ≤ c_{t+1}(N)`, with JSON-lines output.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commands::{Exit, LevelArg, Outcome, RegimeArg, VerifyArgs};
use output::{round_floats, OutputRecord, VERSION};

#[derive(Parser)]
#[command(
    name = "tcore",
    version,
    about = "Exact counts and certified asymptotics for t-core partitions"
)]
struct Cli {
    /// Worker threads for parallel commands (default: logical cores).
    #[arg(long, global = true, env = "TCORE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact c_T(N), or the series c_T(0..=B).
    Count {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        max_n: Option<u64>,
    },
    /// Solve the saddle-point equation for y(T, N).
    Saddle {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        n: u64,
    },
    /// Log-space estimate of c_T(N) with its error bound.
    Estimate {
        #[arg(long)]
        t: u32,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "auto")]
        regime: RegimeArg,
    },
    /// Check c_t(N) ≤ c_{t+1}(N) for 4 ≤ t < N - 1, N ≤ B.
    VerifyStanton {
        #[arg(long)]
        max_n: u64,
        #[arg(long)]
        max_t: Option<u32>,
        /// Raise the cap on --max-n.
        #[arg(long)]
        max_n_cap: Option<u64>,
        /// Also certify the pair T:N (repeatable).
        #[arg(long, value_name = "T:N")]
        certify: Vec<String>,
        /// Write the full report as JSON.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, hide = true, value_name = "T:N")]
        inject_fault: Option<String>,
    },
    /// The constants v, A(κ), B(κ).
    Kappa {
        #[arg(long, required = true, num_args = 1..)]
        kappa: Vec<f64>,
        /// Write the constants as a CSV table.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, value_enum, default_value = "quick")]
        level: LevelArg,
    },
}

fn emit(cmd: &str, args: Value, outcome: Outcome, start: Instant) -> Exit {
    let record = OutputRecord {
        cmd: cmd.to_string(),
        args,
        result: round_floats(outcome.result),
        flags: outcome.flags,
        timing_ms: output::sig15(start.elapsed().as_secs_f64() * 1e3),
        version: VERSION.to_string(),
    };
    println!("{}", record.to_line());
    outcome.exit
}

fn settle(result: commands::CmdResult) -> Outcome {
    result.unwrap_or_else(|e| Outcome::failed(&e))
}

fn run(cli: Cli) -> Exit {
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("tcore: cannot configure {threads} threads: {e}");
            return Exit::Usage;
        }
    }
    let start = Instant::now();
    match cli.command {
        Command::Count { t, n, max_n } => emit(
            "count",
            json!({ "t": t, "n": n, "max_n": max_n }),
            settle(commands::count(t, n, max_n)),
            start,
        ),
        Command::Saddle { t, n } => emit(
            "saddle",
            json!({ "t": t, "n": n }),
            settle(commands::saddle(t, n)),
            start,
        ),
        Command::Estimate { t, n, regime } => {
            let args = json!({ "t": t, "n": n, "regime": value_name(regime) });
            emit(
                "estimate",
                args,
                settle(commands::estimate_cmd(t, n, regime)),
                start,
            )
        }
        Command::VerifyStanton {
            max_n,
            max_t,
            max_n_cap,
            certify,
            report,
            inject_fault,
        } => {
            let args = json!({
                "max_n": max_n,
                "max_t": max_t,
                "max_n_cap": max_n_cap,
                "certify": certify,
                "report": report.as_ref().map(|p| p.display().to_string()),
            });
            let outcome = settle(commands::verify_stanton(VerifyArgs {
                max_n,
                max_t,
                max_n_cap,
                certify: &certify,
                report: report.as_deref(),
                inject_fault: inject_fault.as_deref(),
            }));
            emit("verify-stanton", args, outcome, start)
        }
        Command::Kappa { kappa, csv } => {
            let mut worst = Exit::Ok;
            let mut rows = Vec::new();
            for k in kappa {
                let result = commands::kappa(k);
                if let Ok(outcome) = &result {
                    rows.push(
                        serde_json::from_value(outcome.result.clone())
                            .expect("constants round-trip"),
                    );
                }
                let exit = emit("kappa", json!({ "kappa": k }), settle(result), start);
                worst = worse(worst, exit);
            }
            if let Some(path) = csv {
                if let Err(e) = commands::write_kappa_csv(&path, &rows) {
                    worst = worse(
                        worst,
                        emit("kappa", json!({ "csv": path }), Outcome::failed(&e), start),
                    );
                }
            }
            worst
        }
        Command::Selftest { level } => {
            let args = json!({ "level": value_name(level) });
            emit("selftest", args, settle(commands::selftest(level)), start)
        }
    }
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value()
        .map_or_else(String::new, |p| p.get_name().to_string())
}

fn worse(a: Exit, b: Exit) -> Exit {
    if a == Exit::Ok {
        b
    } else {
        a
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli) as u8)
}
