use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use netexp::commands::{self, CliError, SimulateArgs};
use netexp::graphfile::GraphFile;
use netexp::parallel::thread_limit;
use netexp_core::analysis::{Decoder, MessageMode, DEFAULT_P_GRID};
use netexp_core::protocol::Likelihood;
use netexp_core::Weights;

#[derive(Parser)]
#[command(name = "netexp", version, about = "Error-exponent bounds and relay simulation for channel networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    Tilde,
    Two,
    Zero,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderArg {
    Heuristic,
    Exact,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Worst,
    Uniform,
}

#[derive(Clone, Copy, ValueEnum)]
enum LikelihoodArg {
    Uniform,
    Exact,
}

impl From<LikelihoodArg> for Likelihood {
    fn from(l: LikelihoodArg) -> Self {
        match l {
            LikelihoodArg::Uniform => Likelihood::Uniform,
            LikelihoodArg::Exact => Likelihood::Exact,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Maxflow bounds and per-edge exponents as JSON.
    Analyze {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        messages: usize,
        #[arg(long, value_enum, default_value = "tilde")]
        weights: WeightsArg,
        /// Print the graph file with explicit edge ids instead.
        #[arg(long)]
        dump_normalized: bool,
    },
    /// Monte Carlo error rates of the relay protocol as CSV.
    Simulate {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        messages: usize,
        #[arg(long, default_value_t = 2)]
        block: usize,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        horizons: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "heuristic")]
        decoder: DecoderArg,
        #[arg(long, value_enum, default_value = "worst")]
        mode: ModeArg,
        #[arg(long, value_enum, default_value = "uniform")]
        likelihood: LikelihoodArg,
        /// Edge-splitting resolution (defaults to the number of paths).
        #[arg(long)]
        split: Option<usize>,
    },
    /// Exponent table of the three-message counterexample as CSV.
    Counterexample {
        /// Comma-separated crossover probabilities in (0, 1/3).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        p_grid: Option<Vec<f64>>,
    },
    /// Flow decomposition of the exponent-weighted graph.
    Decompose {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        messages: usize,
        #[arg(long, value_enum, default_value = "tilde")]
        weights: WeightsArg,
    },
    /// Exact block divergences per path, or one-hop ML error with --horizon.
    Oracle {
        graph: PathBuf,
        #[arg(long, default_value_t = 2)]
        messages: usize,
        #[arg(long, default_value_t = 2)]
        block: usize,
        #[arg(long, value_enum, default_value = "uniform")]
        likelihood: LikelihoodArg,
        #[arg(long)]
        horizon: Option<usize>,
    },
}

fn weights(w: WeightsArg, messages: usize) -> Weights {
    match w {
        WeightsArg::Tilde => Weights::Tilde(messages),
        WeightsArg::Two => Weights::Two,
        WeightsArg::Zero => Weights::ZeroRate,
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Analyze {
            graph,
            messages,
            weights: w,
            dump_normalized,
        } => {
            let file = GraphFile::load(&graph)?;
            if dump_normalized {
                file.to_graph()?;
                return Ok(file.normalized().to_json());
            }
            commands::cmd_analyze(&file, messages, weights(w, messages))
        }
        Command::Simulate {
            graph,
            messages,
            block,
            horizons,
            trials,
            seed,
            decoder,
            mode,
            likelihood,
            split,
        } => {
            let file = GraphFile::load(&graph)?;
            let args = SimulateArgs {
                messages,
                block,
                horizons,
                trials,
                seed,
                decoder: match decoder {
                    DecoderArg::Heuristic => Decoder::Heuristic,
                    DecoderArg::Exact => Decoder::Exact,
                },
                mode: match mode {
                    ModeArg::Worst => MessageMode::WorstCase,
                    ModeArg::Uniform => MessageMode::Uniform,
                },
                likelihood: likelihood.into(),
                split,
                threads: thread_limit(),
            };
            let (csv, fit) = commands::cmd_simulate(&file, &args)?;
            match fit {
                Some(f) => eprintln!("fitted exponent {:.6} ± {:.6} nats/use", f.slope, f.stderr),
                None => eprintln!("fitted exponent unavailable: fewer than 3 horizons with errors"),
            }
            Ok(csv)
        }
        Command::Counterexample { p_grid } => {
            let grid = p_grid.unwrap_or_else(|| DEFAULT_P_GRID.to_vec());
            commands::cmd_counterexample(&grid)
        }
        Command::Decompose {
            graph,
            messages,
            weights: w,
        } => commands::cmd_decompose(&GraphFile::load(&graph)?, weights(w, messages)),
        Command::Oracle {
            graph,
            messages,
            block,
            likelihood,
            horizon,
        } => commands::cmd_oracle(&GraphFile::load(&graph)?, messages, block, likelihood.into(), horizon),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
