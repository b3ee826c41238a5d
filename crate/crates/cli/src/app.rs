//! `pats` subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use pats_core::eval::DEFAULT_MAX_GAP_S;
use pats_core::{
    compare_strategies, effective_fps, enumerate_grid, generate_corpus, pats_plan, CorpusSpec,
    CoverageReport, GridSpec, SamplingParams, VideoCoverage, VideoMeta,
};

use crate::manifest::{plan_independent, plan_multiview, read_manifest};
use crate::records::{fixed6, PlanRecord};

pub const EXIT_OK: u8 = 0;
pub const EXIT_PARTIAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "pats", version, about = "Plan frame indices for segment-based temporal sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan one video from its metadata and print a JSON plan record.
    Plan(PlanArgs),
    /// Plan every video of a CSV or JSON-lines manifest.
    Batch(BatchArgs),
    /// Print the parameter grid with effective sampling rates as CSV.
    Grid(GridArgs),
    /// Compare samplers on a synthetic movement corpus.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Frames to emit per video.
    #[arg(long)]
    pub target: u64,
    /// Number of continuous windows.
    #[arg(long)]
    pub segments: u64,
    /// Requested window length in seconds.
    #[arg(long = "segment-duration")]
    pub segment_duration: f64,
}

impl ParamArgs {
    fn params(&self) -> Result<SamplingParams, UsageError> {
        if self.target == 0 {
            return Err(UsageError::flag("--target", "must be at least 1"));
        }
        if self.segments == 0 {
            return Err(UsageError::flag("--segments", "must be at least 1"));
        }
        if self.segments > self.target {
            return Err(UsageError::flag(
                "--segments",
                format!("{} exceeds --target {}", self.segments, self.target),
            ));
        }
        if !(self.segment_duration.is_finite() && self.segment_duration > 0.0) {
            return Err(UsageError::flag("--segment-duration", "must be a positive number"));
        }
        SamplingParams::new(self.target, self.segments, self.segment_duration)
            .map_err(|e| UsageError(e.to_string()))
    }
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    /// Video duration in seconds.
    #[arg(long)]
    pub duration: f64,
    #[arg(long)]
    pub fps: f64,
    #[arg(long = "total-frames")]
    pub total_frames: u64,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long = "video-id", default_value = "video")]
    pub video_id: String,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    /// Input manifest (.csv with a header row, or .jsonl).
    #[arg(long)]
    pub manifest: PathBuf,
    /// Output file, one JSON plan record per line.
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Plan records sharing a group_id together on a common clock.
    #[arg(long)]
    pub multiview: bool,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [24u64, 32])]
    pub frames: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [2u64, 6, 8, 12])]
    pub segments: Vec<u64>,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0f64, 3.0])]
    pub durations: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long = "n-videos")]
    pub n_videos: usize,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Largest inter-sample gap (seconds) that still counts as continuous.
    #[arg(long = "max-gap", default_value_t = DEFAULT_MAX_GAP_S)]
    pub max_gap: f64,
    #[arg(long = "min-duration", default_value_t = 60.0)]
    pub min_duration: f64,
    #[arg(long = "max-duration", default_value_t = 300.0)]
    pub max_duration: f64,
    #[arg(long = "min-movement", default_value_t = 1.0)]
    pub min_movement: f64,
    #[arg(long = "max-movement", default_value_t = 2.0)]
    pub max_movement: f64,
    #[arg(long = "movements-per-video", default_value_t = 3)]
    pub movements_per_video: usize,
    #[arg(long, default_value_t = 30.0)]
    pub fps: f64,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,
    /// Also write the generated corpus as JSON.
    #[arg(long = "corpus-out")]
    pub corpus_out: Option<PathBuf>,
}

impl EvalArgs {
    pub fn corpus_spec(&self) -> CorpusSpec {
        CorpusSpec {
            n_videos: self.n_videos,
            duration_range_s: (self.min_duration, self.max_duration),
            movement_duration_range_s: (self.min_movement, self.max_movement),
            movements_per_video: self.movements_per_video,
            fps: self.fps,
            seed: self.seed,
        }
    }
}

/// Invocation or validation problem; always exits with code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl UsageError {
    fn flag(flag: &str, reason: impl std::fmt::Display) -> Self {
        UsageError(format!("invalid value for {flag}: {reason}"))
    }
}

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn io_error(e: io::Error) -> UsageError {
    UsageError(format!("i/o error: {e}"))
}

pub fn run_plan(args: &PlanArgs, out: &mut dyn Write) -> Result<u8, UsageError> {
    let params = args.params.params()?;
    if !(args.fps.is_finite() && args.fps > 0.0) {
        return Err(UsageError::flag("--fps", "must be a positive number"));
    }
    if !(args.duration.is_finite() && args.duration >= 0.0) {
        return Err(UsageError::flag("--duration", "must be a nonnegative number"));
    }
    let meta = VideoMeta::new(args.duration, args.total_frames, args.fps)
        .map_err(|e| UsageError(e.to_string()))?;
    let plan = pats_plan(meta, params).map_err(|e| UsageError(e.to_string()))?;
    writeln!(out, "{}", PlanRecord::from_plan(&args.video_id, &plan).to_json()).map_err(io_error)?;
    Ok(EXIT_OK)
}

pub fn run_batch(args: &BatchArgs, err: &mut dyn Write) -> Result<u8, UsageError> {
    let params = args.params.params()?;
    let entries = read_manifest(&args.manifest).map_err(|e| UsageError(e.to_string()))?;
    log::info!("planning {} manifest records", entries.len());
    let outcome = if args.multiview {
        plan_multiview(&entries, params)
    } else {
        plan_independent(&entries, params)
    };

    let file = File::create(&args.out)
        .map_err(|e| UsageError(format!("cannot create {}: {e}", args.out.display())))?;
    let mut w = BufWriter::new(file);
    for record in outcome.plans() {
        writeln!(w, "{}", record.to_json()).map_err(io_error)?;
    }
    w.flush().map_err(io_error)?;

    let mut failed = 0;
    for (label, msg) in outcome.failures() {
        writeln!(err, "error: {label}: {msg}").map_err(io_error)?;
        failed += 1;
    }
    Ok(if failed > 0 { EXIT_PARTIAL } else { EXIT_OK })
}

pub fn run_grid(args: &GridArgs, out: &mut dyn Write) -> Result<u8, UsageError> {
    let spec = GridSpec::new(
        args.frames.iter().copied(),
        args.segments.iter().copied(),
        args.durations.iter().copied(),
    )
    .map_err(|e| UsageError(e.to_string()))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["frames", "segments", "duration_s", "effective_fps"])
        .map_err(|e| UsageError(e.to_string()))?;
    for p in enumerate_grid(&spec) {
        w.write_record([
            p.n_target.to_string(),
            p.n_segments.to_string(),
            p.segment_duration_s.to_string(),
            format!("{:.2}", effective_fps(&p)),
        ])
        .map_err(|e| UsageError(e.to_string()))?;
    }
    w.flush().map_err(io_error)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ReportOut<'a> {
    strategy: &'a str,
    #[serde(serialize_with = "fixed6")]
    capture_rate: f64,
    #[serde(serialize_with = "fixed6")]
    mean_max_gap_s: f64,
    captured: usize,
    movements: usize,
    per_video: &'a [VideoCoverage],
}

#[derive(Serialize)]
struct EvalOut<'a> {
    seed: u64,
    n_videos: usize,
    params: crate::records::ParamsRecord,
    #[serde(serialize_with = "fixed6")]
    max_gap_s: f64,
    reports: Vec<ReportOut<'a>>,
}

pub fn evaluate(args: &EvalArgs) -> Result<(Vec<pats_core::SyntheticVideo>, Vec<CoverageReport>), UsageError> {
    let params = args.params.params()?;
    if !(args.max_gap.is_finite() && args.max_gap > 0.0) {
        return Err(UsageError::flag("--max-gap", "must be a positive number"));
    }
    if args.n_videos == 0 {
        return Err(UsageError::flag("--n-videos", "must be at least 1"));
    }
    let corpus = generate_corpus(&args.corpus_spec()).map_err(|e| UsageError(e.to_string()))?;
    let reports = compare_strategies(&corpus, params, args.max_gap, args.seed)
        .map_err(|e| UsageError(e.to_string()))?;
    Ok((corpus, reports))
}

pub fn run_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<u8, UsageError> {
    let (corpus, reports) = evaluate(args)?;
    if let Some(path) = &args.corpus_out {
        let file = File::create(path)
            .map_err(|e| UsageError(format!("cannot create {}: {e}", path.display())))?;
        serde_json::to_writer_pretty(BufWriter::new(file), &corpus)
            .map_err(|e| UsageError(e.to_string()))?;
    }
    match args.format {
        ReportFormat::Json => {
            let body = EvalOut {
                seed: args.seed,
                n_videos: args.n_videos,
                params: (&args.params.params()?).into(),
                max_gap_s: args.max_gap,
                reports: reports
                    .iter()
                    .map(|r| ReportOut {
                        strategy: &r.strategy,
                        capture_rate: r.capture_rate,
                        mean_max_gap_s: r.mean_max_gap_s,
                        captured: r.captured(),
                        movements: r.movements(),
                        per_video: &r.per_video,
                    })
                    .collect(),
            };
            let text = serde_json::to_string_pretty(&body).map_err(|e| UsageError(e.to_string()))?;
            writeln!(out, "{text}").map_err(io_error)?;
        }
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["strategy", "captured", "movements", "capture_rate", "mean_max_gap_s"])
                .map_err(|e| UsageError(e.to_string()))?;
            for r in &reports {
                w.write_record([
                    r.strategy.clone(),
                    r.captured().to_string(),
                    r.movements().to_string(),
                    format!("{:.6}", r.capture_rate),
                    format!("{:.6}", r.mean_max_gap_s),
                ])
                .map_err(|e| UsageError(e.to_string()))?;
            }
            w.flush().map_err(io_error)?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Plan(a) => run_plan(a, &mut out),
        Command::Batch(a) => run_batch(a, &mut io::stderr()),
        Command::Grid(a) => run_grid(a, &mut out),
        Command::Eval(a) => run_eval(a, &mut out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
