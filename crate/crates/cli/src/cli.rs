//! The `editwar` command line: argument parsing, subcommand wiring, exit
//! codes.
//!
//! Exit codes: 0 success, 1 malformed or unreadable input, 2 bad arguments
//! or configuration, 3 page not found (revert-map), 4 evaluation errors
//! (unlabeled titles, too few reports).

use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use editwar_core::eval::{precision_at_k, scatter_export, threshold_sweep, EvalError, GroundTruth};
use editwar_core::metrics::{editor_stats, mutual_pairs, weight_reverts};
use editwar_core::report::{revert_map, AnalysisError, DEFAULT_THRESHOLD};
use editwar_core::revert::{detect_text_reverts, CommentMatcher};
use editwar_core::tags::TagConfig;
use editwar_core::{full_report, ControversyReport, Indicator};

use crate::config::{self, CommentPatternSet, ConfigError};
use crate::ingest::{
    stream_pages, IngestError, IngestGauge, NamespaceFilter, StreamFormat, StreamOptions,
};
use crate::reports::{
    read_reports, write_precision_table, write_reports, write_revert_map, write_scatter,
    write_sweep_table, OutputFormat, ReportIoError,
};

#[derive(Debug, Parser)]
#[command(
    name = "editwar",
    version,
    about = "Detect reverts and edit wars in MediaWiki revision histories and rank articles by controversy"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream a dump and write one controversy report row per article,
    /// ranked by M descending.
    Analyze(AnalyzeArgs),
    /// Export the revert map (reverted vs. reverter edit counts) of one
    /// article.
    RevertMap(RevertMapArgs),
    /// Score all ranking indicators against labeled ground truth
    /// (precision in the top k).
    Eval(EvalArgs),
    /// Estimate controversial-page counts across M thresholds from labeled
    /// samples.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Input dump path, or "-" for stdin (already decompressed).
    pub input: String,
    #[arg(long, value_enum, default_value_t = StreamFormat::MediawikiXml)]
    pub format: StreamFormat,
    /// Language code selecting embedded pattern/tag defaults.
    #[arg(long, default_value = "en")]
    pub lang: String,
    /// Controversial cutoff: flag articles with M strictly above this.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: u64,
    /// Revert comment patterns file (overrides the embedded set).
    #[arg(long)]
    pub patterns: Option<PathBuf>,
    /// Dispute tag list file (overrides the embedded set).
    #[arg(long)]
    pub tags: Option<PathBuf>,
    /// Namespaces to analyze: "all" or a comma-separated list.
    #[arg(long, default_value = "0")]
    pub namespaces: NamespaceFilter,
    /// Output file (.csv, or .jsonl/.ndjson for JSON lines); stdout when
    /// omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RevertMapArgs {
    /// Input dump path, or "-" for stdin.
    pub input: String,
    /// Exact title of the article to map.
    pub title: String,
    #[arg(long, value_enum, default_value_t = StreamFormat::MediawikiXml)]
    pub format: StreamFormat,
    #[arg(long, default_value = "0")]
    pub namespaces: NamespaceFilter,
    /// Keep only reverts within mutually reverting editor pairs.
    #[arg(long)]
    pub mutual_only: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Reports file written by `analyze` (CSV or JSON lines).
    pub reports: PathBuf,
    /// Ground truth TSV: title<TAB>c|n per line.
    pub truth: PathBuf,
    /// Rank depth for precision@k.
    #[arg(long, default_value_t = 30)]
    pub top: usize,
    /// Also write the tag-count vs. M scatter rows to this file.
    #[arg(long)]
    pub scatter: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Reports file written by `analyze` (CSV or JSON lines).
    pub reports: PathBuf,
    /// Ground truth TSV: title<TAB>c|n per line.
    pub truth: PathBuf,
    /// Ascending M cutoffs, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "50,100,180,320,560,1000,5600,31000")]
    pub thresholds: Vec<u64>,
    /// Labels drawn per threshold.
    #[arg(long, default_value_t = 30)]
    pub sample_size: usize,
    /// PRNG seed; echoed in the output for reproducibility.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    ReportIo(#[from] ReportIoError),
    #[error("cannot read {path}: {source}")]
    ReadInput {
        path: String,
        source: io::Error,
    },
    #[error("cannot write {path}: {source}")]
    WriteOutput {
        path: String,
        source: io::Error,
    },
    #[error("page {0:?} not found in input")]
    PageNotFound(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Ingest(_)
            | CliError::Analysis(_)
            | CliError::ReportIo(_)
            | CliError::ReadInput { .. }
            | CliError::WriteOutput { .. } => 1,
            CliError::Config(_) => 2,
            CliError::PageNotFound(_) => 3,
            CliError::Eval(_) => 4,
        }
    }
}

/// `Read` wrapper counting consumed bytes, for throughput reporting.
struct CountingReader<R> {
    inner: R,
    bytes: Arc<AtomicU64>,
}

impl<R: Read> Read for CountingReader<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.bytes.fetch_add(n as u64, Ordering::Relaxed);
        Ok(n)
    }
}

fn open_input(path: &str, bytes: &Arc<AtomicU64>) -> Result<Box<dyn BufRead>, CliError> {
    let raw: Box<dyn Read> = if path == "-" {
        Box::new(io::stdin())
    } else {
        Box::new(
            fs::File::open(path).map_err(|source| CliError::ReadInput {
                path: path.to_string(),
                source,
            })?,
        )
    };
    Ok(Box::new(BufReader::with_capacity(
        256 * 1024,
        CountingReader {
            inner: raw,
            bytes: bytes.clone(),
        },
    )))
}

fn with_output<F>(out: Option<&Path>, write: F) -> Result<(), CliError>
where
    F: FnOnce(&mut dyn Write) -> Result<(), ReportIoError>,
{
    let map_io = |path: &Path, source: io::Error| CliError::WriteOutput {
        path: path.display().to_string(),
        source,
    };
    match out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| map_io(path, e))?;
            let mut writer = io::BufWriter::new(file);
            write(&mut writer)?;
            writer.flush().map_err(|e| map_io(path, e))?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
            lock.flush()
                .map_err(|e| map_io(Path::new("stdout"), e))?;
        }
    }
    Ok(())
}

fn load_patterns(lang: &str, file: Option<&Path>) -> Result<CommentPatternSet, CliError> {
    Ok(match file {
        Some(path) => CommentPatternSet::from_file(path)?,
        None => CommentPatternSet::for_language(lang)?,
    })
}

fn load_tags(lang: &str, file: Option<&Path>) -> Result<TagConfig, CliError> {
    Ok(match file {
        Some(path) => config::tags_from_file(lang, path)?,
        None => config::tags_for_language(lang)?,
    })
}

/// Run the full analysis over a stream: one report per page, ranked by M
/// descending with titles breaking ties.
pub fn analyze_stream<R: BufRead>(
    source: R,
    format: StreamFormat,
    options: StreamOptions,
    patterns: &impl CommentMatcher,
    tags: &TagConfig,
    threshold: u64,
) -> Result<Vec<ControversyReport>, CliError> {
    let mut reports = Vec::new();
    for page in stream_pages(source, format, options) {
        let page = page?;
        reports.push(full_report(&page, patterns, tags, threshold)?);
    }
    reports.sort_by(|a, b| {
        b.controversy
            .cmp(&a.controversy)
            .then_with(|| a.title.cmp(&b.title))
    });
    Ok(reports)
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let patterns = load_patterns(&args.lang, args.patterns.as_deref())?;
    let tags = load_tags(&args.lang, args.tags.as_deref())?;
    let gauge = IngestGauge::new();
    let bytes = Arc::new(AtomicU64::new(0));
    let source = open_input(&args.input, &bytes)?;
    let options = StreamOptions {
        filter: args.namespaces.clone(),
        gauge: gauge.clone(),
        ..StreamOptions::default()
    };

    let started = Instant::now();
    let reports = analyze_stream(source, args.format, options, &patterns, &tags, args.threshold)?;
    let elapsed = started.elapsed();

    let format = args
        .out
        .as_deref()
        .map(OutputFormat::for_path)
        .unwrap_or_default();
    with_output(args.out.as_deref(), |w| write_reports(w, &reports, format))?;

    let controversial = reports.iter().filter(|r| r.controversial).count();
    let summary = format!(
        "pages processed: {}\ncontroversial (M > {}): {}",
        reports.len(),
        args.threshold,
        controversial
    );
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    let mib = bytes.load(Ordering::Relaxed) as f64 / (1024.0 * 1024.0);
    eprintln!(
        "read {:.1} MiB in {:.2}s ({:.1} MiB/s); peak revision buffer {} (largest page {})",
        mib,
        elapsed.as_secs_f64(),
        mib / elapsed.as_secs_f64().max(f64::EPSILON),
        gauge.peak_buffered(),
        gauge.largest_page(),
    );
    Ok(())
}

fn cmd_revert_map(args: &RevertMapArgs) -> Result<(), CliError> {
    let bytes = Arc::new(AtomicU64::new(0));
    let source = open_input(&args.input, &bytes)?;
    let options = StreamOptions {
        filter: args.namespaces.clone(),
        ..StreamOptions::default()
    };
    for page in stream_pages(source, args.format, options) {
        let page = page?;
        if page.title != args.title {
            continue;
        }
        let events = detect_text_reverts(&page);
        let stats = editor_stats(&page);
        let weighted = weight_reverts(&events, &stats).map_err(AnalysisError::from)?;
        let mutual = mutual_pairs(&events, &stats).map_err(AnalysisError::from)?;
        let rows = revert_map(&weighted, &mutual, args.mutual_only);
        with_output(args.out.as_deref(), |w| write_revert_map(w, &rows))?;
        return Ok(());
    }
    Err(CliError::PageNotFound(args.title.clone()))
}

fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::ReadInput {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let reports = read_reports(&read_to_string(&args.reports)?)?;
    let truth = GroundTruth::parse_tsv(&read_to_string(&args.truth)?)?;

    let mut rows = Vec::with_capacity(Indicator::ALL.len());
    for indicator in Indicator::ALL {
        rows.push((indicator, precision_at_k(&reports, &truth, indicator, args.top)?));
    }
    with_output(args.out.as_deref(), |w| {
        write_precision_table(w, args.top, &rows)
    })?;

    if let Some(scatter) = args.scatter.as_deref() {
        let scatter_rows = scatter_export(&reports);
        with_output(Some(scatter), |w| write_scatter(w, &scatter_rows))?;
    }
    if args.out.is_some() {
        println!(
            "evaluated {} indicators over {} reports at k={}",
            rows.len(),
            reports.len(),
            args.top
        );
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let reports = read_reports(&read_to_string(&args.reports)?)?;
    let truth = GroundTruth::parse_tsv(&read_to_string(&args.truth)?)?;
    let rows = threshold_sweep(&reports, &truth, &args.thresholds, args.sample_size, args.seed)?;
    with_output(args.out.as_deref(), |w| {
        write_sweep_table(w, args.seed, args.sample_size, &rows)
    })?;
    if args.out.is_some() {
        println!("swept {} thresholds over {} reports", rows.len(), reports.len());
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::RevertMap(args) => cmd_revert_map(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}
