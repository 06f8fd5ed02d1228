mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "gaitrec",
    version,
    about = "Person recognition from accelerometer gait data"
)]
pub struct Cli {
    /// Worker threads for tree and fold training. Output does not depend
    /// on this value.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic recording corpus.
    Synth(SynthArgs),
    /// Window and featurize a recording corpus into a feature CSV.
    Featurize(FeaturizeArgs),
    /// Train a model on a feature CSV and write the model document.
    Train(TrainArgs),
    /// Cross-validate a model on a feature CSV.
    Evaluate(EvaluateArgs),
    /// Sweep the tree count and record training time and accuracy.
    Bench(BenchArgs),
    /// Render one or more report documents as tables.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 10)]
    pub users: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Windows per user at the default window geometry.
    #[arg(long, default_value_t = 360, conflicts_with = "duration")]
    pub windows_per_user: usize,
    /// Recording length in seconds (overrides --windows-per-user).
    #[arg(long)]
    pub duration: Option<f64>,
    #[arg(long, default_value_t = 50.0)]
    pub rate: f64,
}

#[derive(Debug, Clone, Args)]
pub struct WindowArgs {
    #[arg(long, default_value_t = 100)]
    pub width: usize,
    #[arg(long, default_value_t = 0.5)]
    pub overlap: f64,
    #[arg(long, default_value_t = 50.0)]
    pub rate: f64,
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    /// Corpus root laid out as `<root>/<user>/<recording>.csv`.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub window: WindowArgs,
    /// Also write the per-window series of this feature.
    #[arg(long)]
    pub plot_feature: Option<String>,
    /// Users to include in the plot series, comma separated.
    #[arg(long, value_delimiter = ',', requires = "plot_feature")]
    pub users: Vec<String>,
    /// Plot series path (default: `<out stem>.<feature>.csv`).
    #[arg(long, requires = "plot_feature")]
    pub plot_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Random forest.
    Rf,
    /// Single decision tree over all features, no bagging.
    Dt,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value_t = ModelKind::Rf)]
    pub model: ModelKind,
    #[arg(long, default_value_t = 64)]
    pub trees: usize,
    /// Features sampled per node; `all` for every feature.
    #[arg(long, default_value = "5")]
    pub k_try: String,
    #[arg(long)]
    pub max_depth: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub min_samples_split: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Write the report document here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub features: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 10)]
    pub folds: usize,
    /// Largest tree count; the sweep doubles from 1 up to it.
    #[arg(long, default_value_t = 128)]
    pub max_trees: usize,
    /// Training runs per tree count; the median time is reported.
    #[arg(long, default_value_t = 3)]
    pub repeats: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report documents written by `evaluate --out`.
    #[arg(long = "input", required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let causes: Vec<String> = err.chain().skip(1).map(ToString::to_string).collect();
            let doc = serde_json::json!({
                "status": "error",
                "message": err.to_string(),
                "causes": causes,
            });
            eprintln!("{doc}");
            ExitCode::FAILURE
        }
    }
}
