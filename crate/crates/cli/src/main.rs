use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use risk_odds::stats::DEFAULT_THRESHOLD_LIMIT;
use risk_odds::waves_for_troops;
use risk_odds_cli::api::{self, ApiError, Command, ErrorKind, Query};
use risk_odds_cli::figures::figure;
use risk_odds_cli::render::Table;
use risk_odds_cli::server::{self, DEFAULT_PORT, PORT_ENV};

/// Exact odds for Risk-style dice combat.
#[derive(Debug, Parser)]
#[command(name = "risk-odds", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct RuleArgs {
    /// Attacker may roll one extra die (still comparing the best two).
    #[arg(long)]
    bonus_attack_die: bool,
    /// Defender may roll one extra die (still comparing the best two).
    #[arg(long)]
    bonus_defense_die: bool,
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Attacking troops from one territory; repeat for further waves, in order.
    #[arg(long = "attack", required = true)]
    attack: Vec<u32>,
    /// Defending troops.
    #[arg(long = "defend")]
    defend: u32,
    #[command(flatten)]
    rules: RuleArgs,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Conquest and repel probabilities.
    Odds(PlanArgs),
    /// Full outcome distributions.
    Dist(PlanArgs),
    /// Expected attacker losses with their spread.
    Expect(PlanArgs),
    /// Expected surviving defenders with their spread.
    Survivors(PlanArgs),
    /// Smallest garrisons that hold against an attack.
    Threshold {
        /// Attacking troops per wave, in order.
        #[arg(
            long = "attack",
            required_unless_present = "troops",
            conflicts_with = "troops"
        )]
        attack: Vec<u32>,
        /// Total attacking troops, split into waves of three.
        #[arg(long)]
        troops: Option<u32>,
        /// Largest defender count to try.
        #[arg(long, default_value_t = DEFAULT_THRESHOLD_LIMIT)]
        limit: u32,
        #[command(flatten)]
        rules: RuleArgs,
    },
    /// Data series behind result figure ID (1-5).
    Figure { id: u8 },
    /// Seeded Monte Carlo run compared with the exact value.
    Simulate {
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long, default_value_t = api::DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = api::DEFAULT_SEED)]
        seed: u64,
        /// Worker threads; each uses its own ChaCha stream.
        #[arg(long, default_value_t = 1)]
        partitions: u32,
    },
    /// Serve the JSON API (and UI assets, if given).
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        #[arg(long, env = PORT_ENV, default_value_t = DEFAULT_PORT)]
        port: u16,
        /// Directory of built UI assets to host at `/`.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

fn plan_query(plan: PlanArgs) -> Query {
    Query {
        waves: plan.attack,
        defenders: Some(plan.defend),
        bonus_attack_die: plan.rules.bonus_attack_die,
        bonus_defense_die: plan.rules.bonus_defense_die,
        ..Query::default()
    }
}

/// Flag a query field came from.
fn flag_for(field: &str) -> String {
    match field {
        "waves" => "--attack".into(),
        "defenders" => "--defend".into(),
        "figure" => "ID".into(),
        other => format!("--{}", other.replace('_', "-")),
    }
}

fn emit(
    format: Format,
    heading: &str,
    table: &Table,
    json: &serde_json::Value,
) -> Result<(), ApiError> {
    let text = match format {
        Format::Table => format!("{heading}\n{}", table.to_text()),
        Format::Csv => table.to_csv(),
        Format::Json => serde_json::to_string_pretty(json).expect("serializable") + "\n",
    };
    let mut stdout = std::io::stdout().lock();
    match stdout
        .write_all(text.as_bytes())
        .and_then(|()| stdout.flush())
    {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(ApiError::internal(format!("cannot write output: {e}")))
        }
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<(), ApiError> {
    let (command, query) = match cli.command {
        Cmd::Odds(p) => (Command::Odds, plan_query(p)),
        Cmd::Dist(p) => (Command::Dist, plan_query(p)),
        Cmd::Expect(p) => (Command::Expect, plan_query(p)),
        Cmd::Survivors(p) => (Command::Survivors, plan_query(p)),
        Cmd::Threshold {
            attack,
            troops,
            limit,
            rules,
        } => {
            let waves = match troops {
                Some(total) => waves_for_troops(total, 3)?,
                None => attack,
            };
            let query = Query {
                waves,
                limit: Some(limit),
                bonus_attack_die: rules.bonus_attack_die,
                bonus_defense_die: rules.bonus_defense_die,
                ..Query::default()
            };
            (Command::Threshold, query)
        }
        Cmd::Simulate {
            plan,
            trials,
            seed,
            partitions,
        } => {
            let query = Query {
                trials: Some(trials),
                seed: Some(seed),
                partitions: Some(partitions),
                ..plan_query(plan)
            };
            (Command::Simulate, query)
        }
        Cmd::Figure { id } => {
            let fig = figure(id)?;
            return emit(cli.format, fig.title, &fig.table(), &fig.to_json());
        }
        Cmd::Serve { bind, port, ui_dir } => {
            let addr = SocketAddr::new(bind, port);
            let runtime = tokio::runtime::Runtime::new()
                .map_err(|e| ApiError::internal(format!("cannot start runtime: {e}")))?;
            eprintln!("listening on http://{addr}");
            return runtime
                .block_on(server::serve(addr, ui_dir))
                .map_err(|e| ApiError::internal(format!("server on {addr} failed: {e}")));
        }
    };
    let response = api::execute(command, &query)?;
    let json = serde_json::to_value(&response).expect("serializable");
    emit(cli.format, &response.heading(), &response.table(), &json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            match err.kind {
                ErrorKind::BadRequest => {
                    eprintln!("error: {}: {}", flag_for(&err.field), err.message)
                }
                ErrorKind::Internal => eprintln!("error: {}", err.message),
            }
            ExitCode::from(if err.kind == ErrorKind::BadRequest {
                2
            } else {
                1
            })
        }
    }
}
