//! The `fmaca` command-line front end.
//!
//! [`run`] parses arguments and writes to caller-supplied streams so the
//! whole interface is testable in-process. Exit codes: 0 on success, 1 on a
//! data or model error, 2 on a usage error.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::ca::{default_max_steps, run_to_attractor, FmacaDescriptor, FuzzyConfiguration, DEFAULT_QUANTUM};
use crate::experiment::{
    evaluate_model, majority_baseline, result_row, synthetic_benchmark, train_model, Algorithm,
    EncodingChoice, TrainOptions,
};
use crate::io::{
    load_model, plot_csv, read_dataset, read_fasta, read_results, save_model, split, write_dataset, write_results,
    IoError, Model, ResultRow, SyntheticSpec,
};
use crate::learn::{GaConfig, TreeConfig};
use crate::sequences::{DnaSequence, LabeledWindow};
use crate::Error;

const DEFAULT_SEED: u64 = 7;

#[derive(Debug, Parser)]
#[command(name = "fmaca", version, about = "Fuzzy multiple-attractor CA classifier for DNA coding regions")]
#[command(after_help = "Set FMACA_LOG=error|info|debug for diagnostics on stderr.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve a fuzzy CA and print each configuration.
    Simulate(SimulateArgs),
    /// Write a synthetic coding / non-coding dataset.
    Generate(GenerateArgs),
    /// Train a classifier on a dataset and save it.
    Train(TrainArgs),
    /// Label windows with a saved model.
    Classify(ClassifyArgs),
    /// Train and test algorithms and tabulate their accuracy.
    Evaluate(EvaluateArgs),
    /// Merge results files into per-length tables and plot-ready CSV.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Comma-separated rule codes, one per cell.
    #[arg(long, value_delimiter = ',', required = true)]
    rules: Vec<u32>,
    /// Comma-separated initial cell values in [0, 1].
    #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
    state: Vec<f64>,
    /// Number of steps to print after the initial configuration.
    #[arg(long, default_value_t = 10)]
    steps: usize,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// Window length in bases (a multiple of 3).
    #[arg(long, default_value_t = 54)]
    length: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 250)]
    n_coding: usize,
    #[arg(long, default_value_t = 250)]
    n_noncoding: usize,
    /// Do not append reverse complements.
    #[arg(long)]
    no_revcomp: bool,
    /// Output dataset (TSV); stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum EncodingArg {
    Base,
    Codon,
}

impl From<EncodingArg> for EncodingChoice {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Base => EncodingChoice::Base,
            EncodingArg::Codon => EncodingChoice::Codon,
        }
    }
}

/// Settings shared by every command that trains an FMACA tree.
#[derive(Debug, Args)]
struct TrainFlags {
    /// Seed for every randomized step.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = EncodingArg::Base)]
    encoding: EncodingArg,
    /// GA population size.
    #[arg(long, default_value_t = 50)]
    population: usize,
    /// GA generations per tree node.
    #[arg(long, default_value_t = 50)]
    generations: usize,
    /// Per-gene mutation probability.
    #[arg(long, default_value_t = 0.05)]
    mutation: f64,
    /// Single-point crossover probability.
    #[arg(long, default_value_t = 0.8)]
    crossover: f64,
    /// Tree depth limit; 0 means unlimited.
    #[arg(long, default_value_t = 8)]
    max_depth: usize,
    /// Nodes with fewer examples become leaves.
    #[arg(long, default_value_t = 4)]
    min_node: usize,
}

impl TrainFlags {
    fn options(&self) -> Result<TrainOptions, CliError> {
        if self.min_node == 0 {
            return Err(CliError::Usage("--min-node must be at least 1".into()));
        }
        let ga = GaConfig {
            population_size: self.population,
            generations: self.generations,
            crossover_rate: self.crossover,
            mutation_rate: self.mutation,
            seed: self.seed,
            ..GaConfig::default()
        };
        ga.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        let tree = TreeConfig {
            ga,
            max_depth: (self.max_depth > 0).then_some(self.max_depth),
            min_node: self.min_node,
            ..TreeConfig::default()
        };
        Ok(TrainOptions { encoding: self.encoding.into(), tree })
    }
}

#[derive(Debug, Args)]
struct TrainArgs {
    /// Training dataset (TSV).
    #[arg(long = "in")]
    input: PathBuf,
    /// Where to write the model.
    #[arg(long)]
    model: PathBuf,
    /// fmaca, lp, nb or dicodon.
    #[arg(long, visible_alias = "algorithms", default_value = "fmaca")]
    algorithm: Algorithm,
    #[command(flatten)]
    train: TrainFlags,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    model: PathBuf,
    /// FASTA file (one window per record) or dataset TSV.
    #[arg(long = "in", conflicts_with = "sequence")]
    input: Option<PathBuf>,
    /// Split FASTA records into consecutive windows of the model length;
    /// windows containing N are skipped.
    #[arg(long)]
    tile: bool,
    /// A single window given directly.
    sequence: Option<String>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    /// Training dataset (TSV). Without it a synthetic benchmark is generated.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Test dataset (TSV). Without it the training data is split.
    #[arg(long, requires = "input")]
    test: Option<PathBuf>,
    /// Test share when splitting the training data.
    #[arg(long, default_value_t = 0.3)]
    test_fraction: f64,
    /// Synthetic benchmark window length.
    #[arg(long, default_value_t = 54)]
    length: usize,
    /// Synthetic windows per class for training (before reverse complements).
    #[arg(long, default_value_t = 250)]
    train_size: usize,
    /// Synthetic windows per class for testing (before reverse complements).
    #[arg(long, default_value_t = 100)]
    test_size: usize,
    /// Comma-separated subset of fmaca, lp, nb, dicodon; rows keep this order.
    #[arg(long, value_delimiter = ',', default_value = "lp,nb,dicodon,fmaca")]
    algorithms: Vec<Algorithm>,
    /// Results CSV; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    train: TrainFlags,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Results CSV files to merge (repeat or comma-separate).
    #[arg(long = "in", value_delimiter = ',', required = true)]
    inputs: Vec<PathBuf>,
    /// Plot-ready CSV; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed(Error),
    /// A failure tied to one named input.
    FailedAt(String, Error),
}

impl<E: Into<Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Failed(e.into())
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Failed(IoError::Io(e).into())
}

/// Entry point for the binary: logging from `FMACA_LOG`, real process streams.
pub fn main_entry() -> i32 {
    let env = env_logger::Env::new().filter_or("FMACA_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

/// Parse `args` (including the program name) and execute; returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a, out),
        Command::Generate(a) => generate(a, out, err),
        Command::Train(a) => train(a, out),
        Command::Classify(a) => classify(a, out),
        Command::Evaluate(a) => evaluate(a, out),
        Command::Report(a) => report(a, out),
    };
    let outcome = result.and_then(|()| out.flush().map_err(io_err));
    match outcome {
        Ok(()) => 0,
        Err(CliError::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        // The reader went away (e.g. `| head`); nothing left to report.
        Err(CliError::Failed(Error::Io(IoError::Io(e)))) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(CliError::Failed(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
        Err(CliError::FailedAt(what, e)) => {
            let _ = writeln!(err, "error: {what}: {e}");
            1
        }
    }
}

fn simulate(a: SimulateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if a.rules.len() != a.state.len() {
        return Err(CliError::Usage(format!("{} rules given for {} cells", a.rules.len(), a.state.len())));
    }
    let desc = FmacaDescriptor::from_codes(&a.rules)?;
    let p0 = FuzzyConfiguration::new(a.state)?;
    let mut p = p0.clone();
    writeln!(out, "{p}").map_err(io_err)?;
    for _ in 0..a.steps {
        p = desc.step(&p)?;
        writeln!(out, "{p}").map_err(io_err)?;
    }
    let budget = default_max_steps(desc.n(), &p0);
    match run_to_attractor(&desc, &p0, budget, DEFAULT_QUANTUM) {
        Ok(r) => writeln!(
            out,
            "# attractor {}: transient {}, period {}",
            r.attractor_id, r.transient_length, r.period
        ),
        Err(crate::ca::CaError::NonConvergent { max_steps }) => {
            writeln!(out, "# no attractor within {max_steps} steps")
        }
        Err(e) => return Err(e.into()),
    }
    .map_err(io_err)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Failed(IoError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))).into()))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::Failed(IoError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))).into()))
}

fn load_dataset(path: &Path) -> Result<Vec<LabeledWindow>, CliError> {
    Ok(read_dataset(open(path)?)?)
}

fn generate(a: GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let spec = SyntheticSpec {
        add_revcomp: !a.no_revcomp,
        ..SyntheticSpec::new(a.length, a.n_coding, a.n_noncoding, a.seed)
    };
    let windows = crate::io::generate_synthetic(&spec)?;
    writeln!(err, "coding table divergence from uniform: {:.4} nats", spec.coding_divergence()).map_err(io_err)?;
    match a.out {
        Some(path) => write_dataset(create(&path)?, &windows)?,
        None => write_dataset(&mut *out, &windows)?,
    }
    Ok(())
}

fn train(a: TrainArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let opts = a.train.options()?;
    let windows = load_dataset(&a.input)?;
    let model = train_model(a.algorithm, &windows, &opts)?;
    let report = evaluate_model(&model, &windows)?;
    save_model(&model, &a.model)?;
    writeln!(out, "model: {} ({} windows of length {})", model.model.kind(), windows.len(), model.metadata.length)
        .map_err(io_err)?;
    if let Model::FmacaTree(tree) = &model.model {
        writeln!(out, "tree depth: {}, leaves: {}", tree.depth(), tree.root.leaf_count()).map_err(io_err)?;
    }
    writeln!(out, "training purity: {:.4}", report.overall()).map_err(io_err)?;
    Ok(())
}

/// Windows to classify with their printed ids.
fn classify_inputs(a: &ClassifyArgs, length: usize) -> Result<Vec<(String, String)>, CliError> {
    if let Some(seq) = &a.sequence {
        return Ok(vec![("input".to_string(), seq.trim().to_string())]);
    }
    let Some(path) = &a.input else {
        return Err(CliError::Usage("give a sequence or --in FILE".into()));
    };
    let mut text = String::new();
    open(path)?.read_to_string(&mut text).map_err(io_err)?;
    if !text.trim_start().starts_with('>') {
        return Ok(read_dataset(text.as_bytes())?
            .into_iter()
            .map(|w| (format!("{}:{}:{}", w.origin.seq_id, w.origin.offset, w.origin.strand), w.bases))
            .collect());
    }
    let records = read_fasta(text.as_bytes())?;
    if !a.tile {
        return Ok(records.into_iter().map(|r| (r.id, r.bases)).collect());
    }
    let mut windows = Vec::new();
    for r in records {
        let seq: DnaSequence = r.to_sequence();
        for (k, chunk) in seq.bases().as_bytes().chunks_exact(length).enumerate() {
            if chunk.contains(&b'N') {
                continue;
            }
            let bases = String::from_utf8(chunk.to_vec()).expect("ASCII bases");
            windows.push((format!("{}:{}", r.id, k * length + 1), bases));
        }
    }
    Ok(windows)
}

fn classify(a: ClassifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let model = load_model(&a.model)?;
    let windows = classify_inputs(&a, model.metadata.length)?;
    for (id, bases) in windows {
        let label = model.classify(&bases).map_err(|e| CliError::FailedAt(id.clone(), e))?;
        writeln!(out, "{id}\t{label}").map_err(io_err)?;
    }
    Ok(())
}

fn format_table(out: &mut dyn Write, title: &str, rows: &[(&str, f64, f64, f64)]) -> std::io::Result<()> {
    writeln!(out, "{title}")?;
    writeln!(out, "{:<14}{:>10}{:>12}{:>10}", "Algorithm", "Coding", "Non Coding", "Overall")?;
    for (name, coding, non, overall) in rows {
        writeln!(
            out,
            "{:<14}{:>9.2}%{:>11.2}%{:>9.2}%",
            name,
            100.0 * coding,
            100.0 * non,
            100.0 * overall
        )?;
    }
    Ok(())
}

fn evaluate(a: EvaluateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let opts = a.train.options()?;
    if a.algorithms.is_empty() {
        return Err(CliError::Usage("--algorithms is empty".into()));
    }
    let seed = a.train.seed;
    let (train, test) = match (&a.input, &a.test) {
        (Some(tr), Some(te)) => (load_dataset(tr)?, load_dataset(te)?),
        (Some(tr), None) => {
            if !(a.test_fraction > 0.0 && a.test_fraction < 1.0) {
                return Err(CliError::Usage(format!("--test-fraction {} is not in (0, 1)", a.test_fraction)));
            }
            split(&load_dataset(tr)?, a.test_fraction, seed)?
        }
        (None, _) => {
            let (train, test, divergence) = synthetic_benchmark(a.length, a.train_size, a.test_size, seed)?;
            writeln!(out, "synthetic benchmark: coding table divergence {divergence:.4} nats").map_err(io_err)?;
            (train, test)
        }
    };
    let length = train.first().map_or(0, LabeledWindow::len);
    let mut rows = Vec::new();
    let mut results: Vec<ResultRow> = Vec::new();
    for &alg in &a.algorithms {
        let model = train_model(alg, &train, &opts)?;
        let report = evaluate_model(&model, &test)?;
        results.push(result_row(alg, length, seed, &report));
    }
    for (alg, r) in a.algorithms.iter().zip(&results) {
        rows.push((alg.title(), r.coding_acc, r.noncoding_acc, r.overall_acc));
    }
    let title = format!(
        "Predictive accuracy, window length {length}, {} train / {} test windows (majority baseline {:.2}%)",
        train.len(),
        test.len(),
        100.0 * majority_baseline(&train, &test)
    );
    format_table(out, &title, &rows).map_err(io_err)?;
    match a.out {
        Some(path) => write_results(create(&path)?, &results)?,
        None => {
            writeln!(out).map_err(io_err)?;
            write_results(&mut *out, &results)?
        }
    }
    Ok(())
}

fn report(a: ReportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mut rows = Vec::new();
    for path in &a.inputs {
        rows.extend(read_results(open(path)?)?);
    }
    let plot = plot_csv(&rows);
    // The plot CSV already averages over seeds; reuse it for the tables.
    let mut current = None;
    let mut table: Vec<(String, f64, f64, f64)> = Vec::new();
    let flush = |out: &mut dyn Write, length: Option<usize>, table: &mut Vec<(String, f64, f64, f64)>| {
        if let Some(length) = length {
            let borrowed: Vec<_> = table.iter().map(|(n, c, nc, o)| (display_name(n), *c, *nc, *o)).collect();
            format_table(out, &format!("Predictive accuracy, window length {length}"), &borrowed)?;
            writeln!(out)?;
        }
        table.clear();
        Ok::<(), std::io::Error>(())
    };
    for line in plot.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        let length: usize = f[0].parse().expect("plot_csv writes integers");
        if current != Some(length) {
            flush(out, current, &mut table).map_err(io_err)?;
            current = Some(length);
        }
        let pct = |s: &str| s.parse::<f64>().expect("plot_csv writes numbers") / 100.0;
        table.push((f[1].to_string(), pct(f[2]), pct(f[3]), pct(f[4])));
    }
    flush(out, current, &mut table).map_err(io_err)?;
    match a.out {
        Some(path) => {
            let mut w = create(&path)?;
            w.write_all(plot.as_bytes()).and_then(|()| w.flush()).map_err(io_err)?;
        }
        None => out.write_all(plot.as_bytes()).map_err(io_err)?,
    }
    Ok(())
}

fn display_name(name: &str) -> &str {
    match name.parse::<Algorithm>() {
        Ok(a) => a.title(),
        Err(_) => name,
    }
}
