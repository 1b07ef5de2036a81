use std::path::PathBuf;

use bifold_core::Method;
use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "bifold", version, about = "Joint embedding of both classes of a binary bipartite dataset")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a dataset and write coordinates and/or a plot.
    Embed(EmbedArgs),
    /// Embed once per dimension and report the final stresses as JSON.
    Sweep(SweepArgs),
    /// Run the HTTP API over a directory of datasets.
    Serve(ServeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Csv,
    Json,
    /// Decide by file extension, then by content.
    Auto,
}

fn method_parser() -> impl TypedValueParser<Value = Method> {
    PossibleValuesParser::new(Method::ALL.map(Method::as_str)).map(|s| s.parse::<Method>().expect("listed method"))
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    /// Dataset file (CSV matrix with labels, or the JSON dataset format).
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub format: InputFormat,
    #[arg(long, short, value_parser = method_parser(), default_value = "bernoulli-jeffreys")]
    pub method: Method,
    /// Scale of the row-row block [default: method preset]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_x: Option<f64>,
    /// Scale of the column-column block [default: method preset]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_y: Option<f64>,
    /// Scale of the row-column block [default: method preset]
    #[arg(long, allow_negative_numbers = true)]
    pub alpha_xy: Option<f64>,
    /// Shift added to weighted row-column entries [default: method preset]
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Stop once the relative stress decrease falls below this.
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
    /// Extra randomly perturbed starts besides the classical one.
    #[arg(long, default_value_t = 0)]
    pub restarts: usize,
    /// Weight row-column membership pairs by 1 - b instead of b.
    #[arg(long)]
    pub inverted_membership_weights: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EmbedArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, short, default_value_t = 2)]
    pub dim: usize,
    /// Write the coordinates JSON here. With no output flag it goes to stdout.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write coordinates as CSV (label,class,category,x1..xd).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write a scatter plot of the first two axes.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Leave row-column relation lines out of the SVG.
    #[arg(long)]
    pub no_edges: bool,
    /// Leave object labels out of the SVG.
    #[arg(long)]
    pub no_labels: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Dimensions to try: an inclusive range `a:b` or a single integer.
    #[arg(long, value_parser = parse_dims, default_value = "1:6")]
    pub dims: Dims,
    /// Write the JSON here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ServeArgs {
    #[arg(long, short, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: std::net::IpAddr,
    /// Directory holding dataset files; uploads are stored here too.
    #[arg(long, default_value = "datasets")]
    pub data_dir: PathBuf,
    /// Per-request time limit in seconds.
    #[arg(long, default_value_t = 60)]
    pub timeout: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dims(pub Vec<usize>);

pub fn parse_dims(s: &str) -> Result<Dims, String> {
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?} is not a dimension: {e}"));
    let dims: Vec<usize> = match s.split_once(':') {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if a > b {
                return Err(format!("empty range {a}:{b}"));
            }
            (a..=b).collect()
        }
        None => vec![num(s)?],
    };
    if dims.contains(&0) {
        return Err("dimensions start at 1".into());
    }
    Ok(Dims(dims))
}
