//! The `swkernel` command-line tool.
//!
//! Exit codes: 0 success, 2 usage or unknown reference, 3 unparseable input,
//! 4 numerically degenerate input. Results go to standard output as one line
//! of JSON; diagnostics go to standard error.

pub mod documents;
pub mod json;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::baselines::{cosine_meanpool, dtw, exact_wasserstein, soft_dtw};
use crate::error::Error;
use crate::kernel::{gram_labeled, sw_hat, sw_rbf_hat, usw_rbf_hat, KernelConfig, DEFAULT_GAMMA, DEFAULT_PROJECTIONS};
use crate::positional::{augment, default_k, PeMode, PositionalConfig, DEFAULT_BASE};
use crate::rerank::{rerank_cosine, rerank_usw};
use crate::sequence::{EmbeddingSequence, OrderParameter};
use crate::studies::{ablation_study, psd_study, rate_study, unbiasedness_study, StudyConfig};
use crate::synth::gen_synthetic;

use documents::{RerankDocument, SequenceDocument};
use json::to_json;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "swkernel",
    version,
    about = "Sliced-Wasserstein kernels for embedding sequences"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two sequences of a sequence document
    Score(ScoreArgs),
    /// Pick a candidate from a rerank document
    Rerank(RerankArgs),
    /// Kernel matrix over every sequence of a document
    Gram(GramArgs),
    /// Run a statistical study on synthetic data
    Study(StudyArgs),
    /// Write a document of synthetic random-walk sequences
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    Usw,
    SwRbf,
    Sw,
    Dtw,
    Sdtw,
    Wasserstein,
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PeArg {
    None,
    Absolute,
    Rotary,
}

impl From<PeArg> for PeMode {
    fn from(p: PeArg) -> Self {
        match p {
            PeArg::None => PeMode::None,
            PeArg::Absolute => PeMode::Absolute,
            PeArg::Rotary => PeMode::Rotary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    Usw,
    Cosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StudyKind {
    Unbiasedness,
    Rate,
    Psd,
    Ablation,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Bandwidth γ
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    pub gamma: f64,
    /// Transport order p
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Number of projections L
    #[arg(long = "proj", default_value_t = DEFAULT_PROJECTIONS)]
    pub projections: usize,
    #[arg(long, env = "SWKERNEL_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct PeArgs {
    /// Width of the positional block; defaults to min(d, 64) rounded down to even
    #[arg(long = "pe-dim")]
    pub pe_dim: Option<usize>,
    #[arg(long = "pe-beta", default_value_t = 1.0)]
    pub pe_beta: f64,
    /// Feed raw 0-based indices to the encoder instead of normalized positions
    #[arg(long = "pe-raw-positions")]
    pub pe_raw_positions: bool,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    /// Sequence document
    pub input: PathBuf,
    pub first: String,
    pub second: String,
    #[arg(long, value_enum, default_value_t = Metric::Usw)]
    pub metric: Metric,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, value_enum, default_value_t = PeArg::None)]
    pub pe: PeArg,
    #[command(flatten)]
    pub pe_opts: PeArgs,
    /// Soft-DTW smoothing
    #[arg(long = "sdtw-gamma", default_value_t = 1.0)]
    pub sdtw_gamma: f64,
}

#[derive(Debug, Args)]
pub struct RerankArgs {
    /// Rerank document
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Rule::Usw)]
    pub rule: Rule,
    /// Overrides the document's alpha
    #[arg(long)]
    pub alpha: Option<f64>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, value_enum, default_value_t = PeArg::Rotary)]
    pub pe: PeArg,
    #[command(flatten)]
    pub pe_opts: PeArgs,
}

#[derive(Debug, Args)]
pub struct GramArgs {
    /// Sequence document
    pub input: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[arg(long, value_enum, default_value_t = PeArg::None)]
    pub pe: PeArg,
    #[command(flatten)]
    pub pe_opts: PeArgs,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(value_enum)]
    pub kind: StudyKind,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long = "l-grid", value_delimiter = ',')]
    pub l_grid: Option<Vec<usize>>,
    #[arg(long = "gamma-grid", value_delimiter = ',')]
    pub gamma_grid: Option<Vec<f64>>,
    /// First sequence length (or minimum length for Gram/ablation)
    #[arg(long)]
    pub n: Option<usize>,
    /// Second sequence length (or maximum length for Gram/ablation)
    #[arg(long)]
    pub m: Option<usize>,
    /// Sequences per Gram matrix
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, env = "SWKERNEL_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 4)]
    pub count: usize,
    #[arg(long, default_value_t = 8)]
    pub d: usize,
    #[arg(long = "min-len", default_value_t = 4)]
    pub min_len: usize,
    #[arg(long = "max-len", default_value_t = 12)]
    pub max_len: usize,
    #[arg(long, env = "SWKERNEL_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Output path; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn parse(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidArgument(_) => EXIT_USAGE,
            Error::Degenerate(_) => EXIT_NUMERIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, A>(args: I) -> Outcome
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli.command) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.code,
            stdout: String::new(),
            stderr: format!("swkernel: {}\n", e.message),
        },
    }
}

/// Entry point of the binary; returns the process exit code.
pub fn main_entry() -> i32 {
    let out = run(std::env::args_os());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    out.code
}

pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Score(a) => cmd_score(a),
        Command::Rerank(a) => cmd_rerank(a),
        Command::Gram(a) => cmd_gram(a),
        Command::Study(a) => cmd_study(a),
        Command::Gen(a) => cmd_gen(a),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn read_sequences(path: &Path) -> Result<Vec<(String, EmbeddingSequence<f64>)>, CliError> {
    let doc: SequenceDocument = read_json(path)?;
    doc.validated()
        .map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn line(json: String) -> String {
    json + "\n"
}

fn kernel_config(k: &KernelArgs) -> Result<KernelConfig<f64>, CliError> {
    Ok(KernelConfig::new(
        k.gamma,
        OrderParameter::new(k.p)?,
        k.projections,
        k.seed,
    )?)
}

fn positional_config(mode: PeArg, opts: &PeArgs, d: usize) -> Result<PositionalConfig<f64>, CliError> {
    let cfg = PositionalConfig {
        mode: mode.into(),
        k: opts.pe_dim.unwrap_or_else(|| default_k(d)),
        beta: opts.pe_beta,
        base: DEFAULT_BASE,
        normalize_positions: !opts.pe_raw_positions,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn maybe_augment(
    seq: &EmbeddingSequence<f64>,
    pcfg: &PositionalConfig<f64>,
) -> Result<EmbeddingSequence<f64>, CliError> {
    match pcfg.mode {
        PeMode::None => Ok(seq.clone()),
        _ => Ok(augment(seq, pcfg)?),
    }
}

#[derive(Serialize)]
struct KernelSettings {
    gamma: f64,
    p: f64,
    projections: usize,
    seed: u64,
    pe: PeArg,
    pe_dim: Option<usize>,
    pe_beta: f64,
    normalize_positions: bool,
}

impl KernelSettings {
    fn new(k: &KernelArgs, pe: PeArg, pcfg: &PositionalConfig<f64>) -> Self {
        Self {
            gamma: k.gamma,
            p: k.p,
            projections: k.projections,
            seed: k.seed,
            pe,
            pe_dim: (pcfg.mode != PeMode::None).then_some(pcfg.k),
            pe_beta: pcfg.beta,
            normalize_positions: pcfg.normalize_positions,
        }
    }
}

#[derive(Serialize)]
struct ScoreConfig {
    #[serde(flatten)]
    kernel: KernelSettings,
    sdtw_gamma: f64,
}

#[derive(Serialize)]
struct ScoreOutput<'a> {
    metric: Metric,
    first: &'a str,
    second: &'a str,
    value: f64,
    config: ScoreConfig,
}

/// Scores two sequences of a document. With a positional mode other than
/// `none`, both sequences are augmented before the metric is applied.
pub fn cmd_score(a: &ScoreArgs) -> Result<String, CliError> {
    let seqs = read_sequences(&a.input)?;
    let find = |id: &str| {
        seqs.iter()
            .find(|(sid, _)| sid == id)
            .map(|(_, s)| s)
            .ok_or_else(|| CliError::usage(format!("unknown sequence id {id:?}")))
    };
    let (x, y) = (find(&a.first)?, find(&a.second)?);
    let kcfg = kernel_config(&a.kernel)?;
    let pcfg = positional_config(a.pe, &a.pe_opts, x.dim())?;
    let (x, y) = (maybe_augment(x, &pcfg)?, maybe_augment(y, &pcfg)?);

    let value = match a.metric {
        Metric::Usw | Metric::SwRbf | Metric::Sw => {
            let proj = kcfg.projection_set(x.dim())?;
            match a.metric {
                Metric::Usw => usw_rbf_hat(&x, &y, &kcfg, &proj)?,
                Metric::SwRbf => sw_rbf_hat(&x, &y, &kcfg, &proj)?,
                _ => sw_hat(&x, &y, kcfg.p, &proj)?,
            }
        }
        Metric::Dtw => dtw(&x, &y)?,
        Metric::Sdtw => soft_dtw(&x, &y, a.sdtw_gamma)?,
        Metric::Wasserstein => exact_wasserstein(&x, &y)?,
        Metric::Cosine => cosine_meanpool(&x, &y)?,
    };
    if !value.is_finite() {
        return Err(CliError {
            code: EXIT_NUMERIC,
            message: "metric is not finite".into(),
        });
    }
    Ok(line(to_json(&ScoreOutput {
        metric: a.metric,
        first: &a.first,
        second: &a.second,
        value,
        config: ScoreConfig {
            kernel: KernelSettings::new(&a.kernel, a.pe, &pcfg),
            sdtw_gamma: a.sdtw_gamma,
        },
    })))
}

#[derive(Serialize)]
struct RerankOutput {
    #[serde(flatten)]
    report: crate::rerank::ScoreReport,
    config: KernelSettings,
}

pub fn cmd_rerank(a: &RerankArgs) -> Result<String, CliError> {
    let doc: RerankDocument = read_json(&a.input)?;
    let mut set = doc
        .candidate_set()
        .map_err(|e| CliError::parse(format!("{}: {e}", a.input.display())))?;
    if let Some(alpha) = a.alpha {
        set = set.with_alpha(alpha)?;
    }
    let kcfg = kernel_config(&a.kernel)?;
    let pcfg = positional_config(a.pe, &a.pe_opts, set.anchor().dim())?;
    let report = match a.rule {
        Rule::Usw => rerank_usw(&set, &kcfg, &pcfg)?,
        Rule::Cosine => rerank_cosine(&set)?,
    };
    Ok(line(to_json(&RerankOutput {
        report,
        config: KernelSettings::new(&a.kernel, a.pe, &pcfg),
    })))
}

#[derive(Serialize)]
struct GramOutput {
    ids: Vec<String>,
    matrix: Vec<Vec<f64>>,
    min_eigenvalue: f64,
    config: KernelSettings,
}

pub fn cmd_gram(a: &GramArgs) -> Result<String, CliError> {
    let seqs = read_sequences(&a.input)?;
    if seqs.is_empty() {
        return Err(CliError::usage("document has no sequences"));
    }
    let kcfg = kernel_config(&a.kernel)?;
    let pcfg = positional_config(a.pe, &a.pe_opts, seqs[0].1.dim())?;
    let (ids, raw): (Vec<String>, Vec<EmbeddingSequence<f64>>) = seqs.into_iter().unzip();
    let prepared = raw
        .iter()
        .map(|s| maybe_augment(s, &pcfg))
        .collect::<Result<Vec<_>, _>>()?;
    let g = gram_labeled(&prepared, ids, &kcfg)?;
    let min_eigenvalue = g.min_eigenvalue();
    Ok(line(to_json(&GramOutput {
        ids: g.labels,
        matrix: g.entries,
        min_eigenvalue,
        config: KernelSettings::new(&a.kernel, a.pe, &pcfg),
    })))
}

fn study_config(a: &StudyArgs) -> StudyConfig {
    let base = StudyConfig::default();
    let (replicates, l_grid, gamma_grid, dim, lengths) = match a.kind {
        StudyKind::Unbiasedness => (2000, vec![1], vec![1.0], 8, (8, 10)),
        StudyKind::Rate => (200, vec![4, 16, 64, 256, 1024], vec![1.0], 8, (8, 10)),
        StudyKind::Psd => (2, vec![512], vec![0.5, 2.5], 3, (4, 12)),
        StudyKind::Ablation => (50, base.l_grid.clone(), base.gamma_grid.clone(), 8, (6, 12)),
    };
    StudyConfig {
        replicates: a.replicates.unwrap_or(replicates),
        l_grid: a.l_grid.clone().unwrap_or(l_grid),
        gamma_grid: a.gamma_grid.clone().unwrap_or(gamma_grid),
        seed: a.seed,
        dim: a.d.unwrap_or(dim),
        lengths: (a.n.unwrap_or(lengths.0), a.m.unwrap_or(lengths.1)),
        count: a.count.unwrap_or(base.count),
    }
}

pub fn cmd_study(a: &StudyArgs) -> Result<String, CliError> {
    let cfg = study_config(a);
    let result = match a.kind {
        StudyKind::Unbiasedness => unbiasedness_study(&cfg)?,
        StudyKind::Rate => rate_study(&cfg)?,
        StudyKind::Psd => psd_study(&cfg)?,
        StudyKind::Ablation => ablation_study(&cfg)?,
    };
    Ok(line(to_json(&result)))
}

pub fn cmd_gen(a: &GenArgs) -> Result<String, CliError> {
    if a.min_len > a.max_len {
        return Err(CliError::usage("--min-len exceeds --max-len"));
    }
    let seqs = gen_synthetic::<f64>(a.seed, a.count, a.d, a.min_len..=a.max_len)?;
    let ids = (0..seqs.len()).map(|i| format!("s{i}")).collect();
    let doc = SequenceDocument::from_sequences(ids, seqs)?;
    let text = line(to_json(&doc));
    match &a.out {
        None => Ok(text),
        Some(path) => {
            write_atomically(path, &text)?;
            Ok(String::new())
        }
    }
}

fn write_atomically(path: &Path, text: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn study_defaults_follow_kind() {
        let parse = |args: &[&str]| match Cli::try_parse_from(args).unwrap().command {
            Command::Study(s) => study_config(&s),
            _ => unreachable!(),
        };
        let r = parse(&["swkernel", "study", "rate", "--seed", "1"]);
        assert_eq!(r.l_grid, vec![4, 16, 64, 256, 1024]);
        assert_eq!(r.replicates, 200);
        let p = parse(&[
            "swkernel",
            "study",
            "psd",
            "--l-grid",
            "64",
            "--gamma-grid",
            "0.5,1.5",
            "--seed",
            "1",
        ]);
        assert_eq!(p.l_grid, vec![64]);
        assert_eq!(p.gamma_grid, vec![0.5, 1.5]);
        assert_eq!(p.dim, 3);
    }

    #[test]
    fn usage_errors_exit_two() {
        let out = run(["swkernel", "score"]);
        assert_eq!(out.code, EXIT_USAGE);
        let out = run(["swkernel", "gen", "--min-len", "5", "--max-len", "2", "--seed", "0"]);
        assert_eq!(out.code, EXIT_USAGE);
        let out = run(["swkernel", "--help"]);
        assert_eq!(out.code, EXIT_OK);
    }

    #[test]
    fn error_codes_from_library_errors() {
        assert_eq!(CliError::from(Error::invalid("x")).code, EXIT_USAGE);
        assert_eq!(CliError::from(Error::degenerate("x")).code, EXIT_NUMERIC);
    }
}
