//! The `bifold` command line: `embed`, `sweep` and `serve`.
//!
//! Failures print one line to stderr, `error: CODE: stage: message`, and
//! exit with 2 (usage), 3 (data or method precondition) or 4 (numeric).
//! `BIFOLD_THREADS` caps the worker threads used for restarts.

mod args;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use bifold_core::render::{to_coordinates_csv, to_coordinates_json, to_svg, PlotSpec};
use bifold_core::{default_params, embed, sweep, Dataset, EmbeddingConfig, ErrorKind, MethodOptions, ScalingParams};
use clap::Parser;

pub use args::{parse_dims, Cli, Command, Dims, EmbedArgs, InputFormat, ProblemArgs, ServeArgs, SweepArgs};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{stage}: {path}: {source}")]
    Io {
        stage: &'static str,
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{stage}: {source}")]
    Engine {
        stage: &'static str,
        source: bifold_core::Error,
    },
    #[error("serve: {0}")]
    Serve(std::io::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "USAGE",
            CliError::Io { .. } | CliError::Serve(_) => "IO_ERROR",
            CliError::Engine { source, .. } => source.code(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } | CliError::Serve(_) => EXIT_DATA,
            CliError::Engine { source, .. } => match source.kind() {
                ErrorKind::Usage => EXIT_USAGE,
                ErrorKind::Data | ErrorKind::Precondition => EXIT_DATA,
                ErrorKind::Numeric => EXIT_NUMERIC,
            },
        }
    }
}

fn at(stage: &'static str) -> impl FnOnce(bifold_core::Error) -> CliError {
    move |source| CliError::Engine { stage, source }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return 0;
        }
        Err(e) => return report(&CliError::Usage(clap_message(&e))),
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> i32 {
    let line = e.to_string().replace('\n', " ");
    eprintln!("error: {}: {}", e.code(), line);
    e.exit_code()
}

/// The first line of clap's rendering, without its `error: ` prefix.
fn clap_message(e: &clap::Error) -> String {
    let rendered = e.render().to_string();
    let first = rendered.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
    first.trim_start_matches("error: ").trim().to_string()
}

fn execute(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Embed(a) => run_embed(&a),
        Command::Sweep(a) => run_sweep(&a),
        Command::Serve(a) => run_serve(&a),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("BIFOLD_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("BIFOLD_THREADS must be a positive integer, got {raw:?}")))?;
    // Fails only if a pool already exists, which happens when `run` is called
    // twice in one process; the first setting stays in force.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

fn read_dataset(path: &Path, format: InputFormat) -> Result<Dataset, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        stage: "reading input",
        path: path.to_path_buf(),
        source,
    })?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase);
    let parsed = match (format, ext.as_deref()) {
        (InputFormat::Csv, _) | (InputFormat::Auto, Some("csv")) => Dataset::from_csv(name, &text),
        (InputFormat::Json, _) | (InputFormat::Auto, Some("json")) => Dataset::parse_auto(name, &text),
        (InputFormat::Auto, _) => Dataset::parse_auto(name, &text),
    };
    parsed.map_err(at("parsing input"))
}

struct Prepared {
    dataset: Dataset,
    params: ScalingParams,
    options: MethodOptions,
    cfg: EmbeddingConfig,
}

fn prepare(a: &ProblemArgs, dim: usize) -> Result<Prepared, CliError> {
    let dataset = read_dataset(&a.input, a.format)?;
    let defaults = default_params(a.method, dataset.matrix().m(), dataset.matrix().n());
    let params = ScalingParams {
        alpha_x: a.alpha_x.unwrap_or(defaults.alpha_x),
        alpha_y: a.alpha_y.unwrap_or(defaults.alpha_y),
        alpha_xy: a.alpha_xy.unwrap_or(defaults.alpha_xy),
        beta: a.beta.unwrap_or(defaults.beta),
    };
    params.validate().map_err(at("checking parameters"))?;
    let cfg = EmbeddingConfig {
        dim,
        max_iter: a.max_iter,
        rel_tol: a.rel_tol,
        restarts: a.restarts,
    };
    cfg.validate().map_err(at("checking parameters"))?;
    let options = MethodOptions {
        inverted_membership_weights: a.inverted_membership_weights,
    };
    Ok(Prepared { dataset, params, options, cfg })
}

fn run_embed(a: &EmbedArgs) -> Result<(), CliError> {
    let p = prepare(&a.problem, a.dim)?;
    let method = a.problem.method;
    let result = embed(&p.dataset, method, p.params, p.options, &p.cfg).map_err(at("embedding"))?;

    let json = to_coordinates_json(&result, &p.dataset, method, p.params).map_err(at("rendering"))?;
    let mut outputs: Vec<(&Path, String)> = Vec::new();
    if let Some(path) = &a.csv {
        outputs.push((path, to_coordinates_csv(&result, &p.dataset).map_err(at("rendering"))?));
    }
    if let Some(path) = &a.svg {
        let mut spec = PlotSpec {
            show_labels: !a.no_labels,
            ..PlotSpec::default()
        };
        if !a.no_edges {
            spec = spec.with_all_edges(&p.dataset);
        }
        outputs.push((path, to_svg(&result, &p.dataset, &spec).map_err(at("rendering"))?));
    }
    match &a.json {
        Some(path) => outputs.push((path, json)),
        None if outputs.is_empty() => println!("{json}"),
        None => {}
    }
    write_all_atomic(&outputs)
}

fn run_sweep(a: &SweepArgs) -> Result<(), CliError> {
    let p = prepare(&a.problem, a.dims.0[0])?;
    let result = sweep(&p.dataset, a.problem.method, p.params, p.options, &p.cfg, &a.dims.0).map_err(at("sweeping"))?;
    let json = serde_json::to_string_pretty(&result).expect("sweep result serializes");
    match &a.output {
        Some(path) => write_all_atomic(&[(path.as_path(), json)]),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

/// Stages every output in a temporary file beside its target, then renames
/// them all. A failure before the renames leaves no target touched.
fn write_all_atomic(outputs: &[(&Path, String)]) -> Result<(), CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io {
            stage: "writing output",
            path,
            source,
        }
    };
    let mut staged = Vec::with_capacity(outputs.len());
    for (path, contents) in outputs {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io(path))?;
        tmp.write_all(contents.as_bytes()).map_err(io(path))?;
        tmp.as_file().sync_all().map_err(io(path))?;
        staged.push((tmp, *path));
    }
    for (tmp, path) in staged {
        tmp.persist(path).map_err(|e| io(path)(e.error))?;
    }
    Ok(())
}

fn run_serve(a: &ServeArgs) -> Result<(), CliError> {
    if !a.data_dir.is_dir() {
        return Err(CliError::Usage(format!("data directory {} does not exist", a.data_dir.display())));
    }
    let _ = tracing_subscriber::fmt().with_writer(std::io::stderr).try_init();
    let state = bifold_server::AppState::new(&a.data_dir).with_timeout(Duration::from_secs(a.timeout));
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(CliError::Serve)?;
    runtime
        .block_on(bifold_server::serve((a.host, a.port).into(), state))
        .map_err(CliError::Serve)
}
