use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use slabwidth::error::Error;
use slabwidth::exec::Execution;
use slabwidth::harness::{
    self, AuditConfig, BuildConfig, Command, ExperimentConfig, Format, GraphSource, LemmaConfig, PartitionSource,
    SearchConfig, SeparatorMode, TreewidthConfig,
};

const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

#[derive(Parser)]
#[command(name = "slabwidth", version, about = "Treewidth experiments on the triangulated grid")]
struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Largest graph handed to exact treewidth.
    #[arg(long, global = true, default_value_t = 40)]
    guard_vertices: usize,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeparatorArg {
    Plane,
    MinCut,
    Sampled,
}

#[derive(Subcommand)]
enum Cmd {
    /// Property suites for the walk calculus, separations and enlargements.
    Lemmas {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        samples: usize,
    },
    /// Audit separators of a box slab.
    Audit {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        length: Option<u32>,
        #[arg(long, value_enum, default_value_t = SeparatorArg::Sampled)]
        separator: SeparatorArg,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        /// Shrink sampled separators to minimal ones.
        #[arg(long)]
        minimal: bool,
        /// Certify treewidth at least this value on the separator.
        #[arg(long)]
        certify_width: Option<i64>,
        #[arg(long)]
        no_pipeline: bool,
    },
    /// Minimise the larger class treewidth over 2-colourings.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        heuristic: bool,
        #[arg(long, default_value_t = 200)]
        iterations: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
    },
    /// Find a blocked staircase or a bramble for a partition.
    Build(BuildArgs),
    /// Exact treewidth, or decide `tw <= k`.
    Treewidth {
        #[arg(long, conflicts_with_all = ["plane", "graph"])]
        grid: Option<u32>,
        #[arg(long, conflicts_with = "graph")]
        plane: Option<u32>,
        /// Graph JSON file.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        decide: Option<i64>,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    t: u32,
    #[arg(long)]
    b: u32,
    /// Grid side; defaults to the required side.
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    colour: u8,
    /// Put every vertex in this class.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2), conflicts_with_all = ["partition", "bias"])]
    uniform: Option<u8>,
    /// Partition JSON file.
    #[arg(long, conflicts_with = "bias")]
    partition: Option<PathBuf>,
    /// Probability of class 1 for a random partition.
    #[arg(long, default_value_t = 0.5)]
    bias: f64,
    /// Run below the required side.
    #[arg(long = "override")]
    override_schedule: bool,
}

fn config(cli: Cli) -> Result<(ExperimentConfig, Option<PathBuf>), Error> {
    let command = match cli.command {
        Cmd::Lemmas { n, exhaustive, samples } => Command::Lemmas(LemmaConfig { n, exhaustive, samples }),
        Cmd::Audit {
            n,
            length,
            separator,
            samples,
            minimal,
            certify_width,
            no_pipeline,
        } => Command::Audit(AuditConfig {
            n,
            length,
            separator: match separator {
                SeparatorArg::Plane => SeparatorMode::Plane,
                SeparatorArg::MinCut => SeparatorMode::MinCut,
                SeparatorArg::Sampled => SeparatorMode::Sampled,
            },
            samples,
            minimal,
            certify_width,
            pipeline: !no_pipeline,
        }),
        Cmd::Search {
            n,
            heuristic,
            iterations,
            restarts,
        } => Command::Search(SearchConfig {
            n,
            heuristic,
            iterations,
            restarts,
        }),
        Cmd::Build(a) => Command::Build(BuildConfig {
            n: a.n,
            t: a.t,
            b: a.b,
            colour: a.colour,
            partition: match (a.uniform, a.partition) {
                (Some(i), _) => PartitionSource::Uniform(i),
                (None, Some(path)) => PartitionSource::File(path),
                (None, None) => PartitionSource::Random { bias: a.bias },
            },
            override_schedule: a.override_schedule,
        }),
        Cmd::Treewidth {
            grid,
            plane,
            graph,
            decide,
            budget,
        } => {
            let source = match (grid, plane, graph) {
                (Some(n), _, _) => GraphSource::Grid(n),
                (_, Some(m), _) => GraphSource::Plane(m),
                (_, _, Some(p)) => GraphSource::File(p),
                _ => return Err(Error::Usage("pass one of --grid, --plane or --graph".into())),
            };
            Command::Treewidth(TreewidthConfig { source, decide, budget })
        }
    };
    let cfg = ExperimentConfig {
        command,
        seed: cli.seed,
        guard_vertices: cli.guard_vertices,
        format: match cli.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        },
        exec: if cli.sequential { Execution::Sequential } else { Execution::best() },
    };
    Ok((cfg, cli.out))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = config(cli).and_then(|(cfg, out)| {
        let output = harness::run(&cfg)?;
        match out {
            Some(path) => std::fs::write(path, &output.text)?,
            None => print!("{}", output.text),
        }
        Ok(output.status)
    });
    match result {
        Ok(status) => ExitCode::from(status.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Usage(_) => EXIT_USAGE,
                Error::GuardExceeded { .. } => EXIT_INCONCLUSIVE,
                _ => 1,
            })
        }
    }
}
