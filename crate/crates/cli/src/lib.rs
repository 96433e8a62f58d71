//! Command line front end: argument parsing, report formats, moment caches
//! and the run manifest.

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use paraprod::harness::{
    word_sum_experiment, decomposition_experiment, default_combos, default_q_cells, default_words,
    identity_experiment, kernel_experiment, littlewood_paley_experiment, q_sandwich_experiment, radicality_experiment,
    reproducing_experiment, word_sandwich_experiment, ExperimentReport, ExperimentRow, Setup, SymbolFamily, TestSetSpec,
};
use paraprod::kernel::{self, MomentTable, MOMENT_TOL};
use paraprod::norms::{bergman_norm, bloch_seminorm_detailed};
use paraprod::paraproducts::{apply_word_full, canonical_decomposition_h0, full_decomposition};
use paraprod::weights::{default_check_grid, WeightEval};
use paraprod::{QuadratureConfig, TruncatedSeries, WeightModifier, WeightSpec, Word};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

#[derive(Parser, Debug)]
#[command(name = "paraprod", version, about = "Paraproduct words, weighted Bergman norms and kernel diagnostics")]
pub struct Cli {
    /// Weight spec `w<level>:<alpha>:<c>`.
    #[arg(long, global = true, default_value = "w0:1:1")]
    pub weight: WeightSpec,
    /// Integrability exponent.
    #[arg(long, global = true, default_value_t = 2.0)]
    pub p: f64,
    /// Maximal degree of random symbols.
    #[arg(long, global = true, default_value_t = 6)]
    pub degree: usize,
    /// Moment count `J` for kernel computations.
    #[arg(long, global = true, default_value_t = 2048)]
    pub cap: usize,
    #[arg(long, global = true, default_value_t = 20240601)]
    pub seed: u64,
    /// Radial quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Output path, `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    pub out: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Directory for cached moment tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the weight self-checks.
    CheckWeight,
    /// `‖f‖` in `A^p` of `ω^{p/2}`.
    Norm {
        /// Series: `poly:1,0,2` or JSON `[[re,im],...]`.
        f: TruncatedSeries,
    },
    /// Bloch-type seminorm `‖g‖_{B^q}`.
    Bloch {
        g: TruncatedSeries,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
    },
    /// Apply a word (leftmost letter last) to `f` with symbol `g`.
    ApplyWord {
        word: Word,
        g: TruncatedSeries,
        f: TruncatedSeries,
    },
    /// Canonical integer decomposition of a word.
    Decompose {
        word: Word,
        /// Also solve the full-space form with the projection term.
        #[arg(long)]
        full: bool,
    },
    /// Kernel diagnostics at `a`.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
    },
    /// Run an experiment and report its gates.
    Verify {
        experiment: Experiment,
        /// Number of random symbols (default depends on the experiment).
        #[arg(long)]
        symbols: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Identities,
    Decomposition,
    Weights,
    Reproducing,
    Kernel,
    LittlewoodPaley,
    Radicality,
    WordSandwich,
    WordSum,
    QSandwich,
}

/// Exit status of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    GateFailed = 1,
    UsageError = 2,
}

/// Error raised by argument validation (exit code 2).
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> anyhow::Result<T> {
    Err(UsageError(msg.into()).into())
}

fn is_usage(e: &paraprod::Error) -> bool {
    use paraprod::Error::*;
    matches!(
        e,
        Domain(_) | InvalidWeight(_) | InvalidWord(_) | InvalidSeries(_) | WordTooLong(_) | InvalidArgument(_) | DegeneratePair
    )
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Status::UsageError as i32 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(s) => s as i32,
        Err(e) => {
            eprintln!("error: {e:#}");
            let usage_err = e.downcast_ref::<UsageError>().is_some()
                || e.chain().any(|c| c.downcast_ref::<paraprod::Error>().is_some_and(is_usage));
            if usage_err {
                Status::UsageError as i32
            } else {
                Status::GateFailed as i32
            }
        }
    }
}

fn config(cli: &Cli) -> anyhow::Result<QuadratureConfig> {
    let cfg = QuadratureConfig {
        radial_rel_tol: cli.tol,
        ..QuadratureConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

pub fn run(cli: &Cli) -> anyhow::Result<Status> {
    if !(cli.p.is_finite() && cli.p > 0.0) {
        return usage(format!("--p must be positive, got {}", cli.p));
    }
    if cli.degree == 0 {
        return usage("--degree must be at least 1");
    }
    if cli.cap == 0 {
        return usage("--cap must be at least 1");
    }
    if let Some(t) = cli.threads {
        if t == 0 {
            return usage("--threads must be at least 1");
        }
        // Errors only if a global pool already exists (repeated in-process runs).
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let cfg = config(cli)?;
    let w = WeightEval::new(cli.weight);
    let mut sink = Sink::open(&cli.out, cli.format)?;
    let status = match &cli.command {
        Command::CheckWeight => {
            let rep = w.self_check(&default_check_grid())?;
            match cli.format {
                Format::Jsonl => sink.json(&rep)?,
                Format::Csv => {
                    for c in &rep.checks {
                        sink.csv_record(&CheckRow {
                            weight: rep.weight.to_string(),
                            check: c.name.clone(),
                            verdict: format!("{:?}", c.verdict).to_lowercase(),
                            points: c.values.len(),
                        })?;
                    }
                }
            }
            gate(rep.all_pass() && rep.fd_max_rel_err <= paraprod::weights::FD_TOL)
        }
        Command::Norm { f } => {
            let e = bergman_norm(f, &w, cli.p, WeightModifier::plain(cli.p), &cfg)?;
            sink.record(&ValueRow {
                quantity: "bergman_norm".into(),
                weight: cli.weight.to_string(),
                p: Some(cli.p),
                q: None,
                value: e.value,
                last_delta: e.last_delta,
                converged: e.converged,
                argmax_radius: None,
            })?;
            Status::Ok
        }
        Command::Bloch { g, q } => {
            let e = bloch_seminorm_detailed(g, &w, *q, &cfg)?;
            sink.record(&ValueRow {
                quantity: "bloch_seminorm".into(),
                weight: cli.weight.to_string(),
                p: None,
                q: Some(*q),
                value: e.estimate.value,
                last_delta: e.estimate.last_delta,
                converged: e.estimate.converged,
                argmax_radius: Some(e.argmax_radius),
            })?;
            Status::Ok
        }
        Command::ApplyWord { word, g, f } => {
            let h = apply_word_full(word, g, f);
            match cli.format {
                Format::Jsonl => sink.json(&h)?,
                Format::Csv => {
                    for (k, c) in h.coeffs().iter().enumerate() {
                        sink.csv_record(&CoeffRow { k, re: c.re, im: c.im })?;
                    }
                }
            }
            Status::Ok
        }
        Command::Decompose { word, full } => {
            let form = if *full {
                full_decomposition(word)?
            } else {
                canonical_decomposition_h0(word)?
            };
            match cli.format {
                Format::Jsonl => sink.json(&form)?,
                Format::Csv => sink.csv_record(&DecompositionRow {
                    word: form.word.to_string(),
                    k: form.leading.k,
                    n: form.leading.n,
                    c: join_ints(&form.c),
                    delta_l: form.delta_l,
                    residual: form.residual,
                    no_t: form.no_t,
                    a: form.a.as_deref().map(join_ints).unwrap_or_default(),
                    b: form.b.as_deref().map(join_ints).unwrap_or_default(),
                })?,
            }
            Status::Ok
        }
        Command::Kernel { re, im } => {
            let a = Complex64::new(*re, *im);
            let table = moment_table(cli, &w, cli.cap)?;
            let r_eval = w.r_cut_for(cli.p / 2.0);
            let handle = kernel::kernel_auto(a, &table, r_eval)?;
            let norm = kernel::kernel_norm_ratio(a, &w, cli.p, &table, &cfg)?;
            sink.record(&KernelRow {
                weight: cli.weight.to_string(),
                p: cli.p,
                a_re: a.re,
                a_im: a.im,
                cap: handle.cap(),
                tail_bound: handle.tail_bound,
                diagonal_ratio: kernel::diagonal_ratio(a, &w, &table)?,
                norm_ratio: norm.value,
                norm_converged: norm.converged,
            })?;
            Status::Ok
        }
        Command::Verify { experiment, symbols } => {
            let (status, summary, hashes) = verify(cli, *experiment, *symbols, &cfg, &w, &mut sink)?;
            sink.finish()?;
            write_manifest(cli, *experiment, &summary, hashes)?;
            return Ok(status);
        }
    };
    sink.finish()?;
    Ok(status)
}

fn gate(pass: bool) -> Status {
    if pass {
        Status::Ok
    } else {
        Status::GateFailed
    }
}

fn join_ints(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

#[derive(Serialize)]
struct CheckRow {
    weight: String,
    check: String,
    verdict: String,
    points: usize,
}

#[derive(Serialize)]
struct ValueRow {
    quantity: String,
    weight: String,
    p: Option<f64>,
    q: Option<f64>,
    value: f64,
    last_delta: f64,
    converged: bool,
    argmax_radius: Option<f64>,
}

#[derive(Serialize)]
struct CoeffRow {
    k: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct DecompositionRow {
    word: String,
    k: usize,
    n: usize,
    c: String,
    #[serde(rename = "delta_L")]
    delta_l: Option<u8>,
    residual: f64,
    no_t: bool,
    a: String,
    b: String,
}

#[derive(Serialize)]
struct KernelRow {
    weight: String,
    p: f64,
    a_re: f64,
    a_im: f64,
    cap: usize,
    tail_bound: f64,
    diagonal_ratio: f64,
    norm_ratio: f64,
    norm_converged: bool,
}

/// Flat CSV view of an experiment row, in stable column order.
#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    weight: &'a str,
    p: f64,
    label: &'a str,
    word: &'a str,
    #[serde(rename = "N")]
    big_n: Option<usize>,
    n: Option<usize>,
    s: Option<f64>,
    symbol_id: Option<usize>,
    theory: f64,
    estimate: f64,
    ratio: f64,
    refinement_delta: f64,
    attained_by: &'a str,
    degree: f64,
    flags: String,
}

impl<'a> From<&'a ExperimentRow> for CsvRow<'a> {
    fn from(r: &'a ExperimentRow) -> Self {
        CsvRow {
            experiment: &r.experiment,
            weight: &r.weight,
            p: r.p,
            label: &r.label,
            word: r.word.as_deref().unwrap_or(""),
            big_n: r.big_n,
            n: r.n,
            s: r.s,
            symbol_id: r.symbol_id,
            theory: r.theory,
            estimate: r.estimate,
            ratio: r.ratio,
            refinement_delta: r.refinement_delta,
            attained_by: r.attained_by.as_deref().unwrap_or(""),
            degree: r.degree,
            flags: r.flags.join(";"),
        }
    }
}

enum Target {
    Stdout(io::Stdout),
    File(io::BufWriter<fs::File>),
}

impl Write for Target {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        match self {
            Target::Stdout(s) => s.write(buf),
            Target::File(f) => f.write(buf),
        }
    }
    fn flush(&mut self) -> io::Result<()> {
        match self {
            Target::Stdout(s) => s.flush(),
            Target::File(f) => f.flush(),
        }
    }
}

/// Output stream: one JSON value per line, or CSV records with a header.
struct Sink {
    format: Format,
    json: Option<Target>,
    csv: Option<csv::Writer<Target>>,
}

impl Sink {
    fn open(out: &str, format: Format) -> anyhow::Result<Sink> {
        let target = if out == "-" {
            Target::Stdout(io::stdout())
        } else {
            if let Some(dir) = Path::new(out).parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
            }
            let f = fs::File::create(out).with_context(|| format!("cannot create {out}"))?;
            Target::File(io::BufWriter::new(f))
        };
        Ok(match format {
            Format::Jsonl => Sink {
                format,
                json: Some(target),
                csv: None,
            },
            Format::Csv => Sink {
                format,
                json: None,
                csv: Some(csv::Writer::from_writer(target)),
            },
        })
    }

    fn json<T: Serialize>(&mut self, v: &T) -> anyhow::Result<()> {
        let t = self.json.as_mut().context("sink is not in JSONL mode")?;
        serde_json::to_writer(&mut *t, v)?;
        t.write_all(b"\n")?;
        Ok(())
    }

    fn csv_record<T: Serialize>(&mut self, v: &T) -> anyhow::Result<()> {
        self.csv.as_mut().context("sink is not in CSV mode")?.serialize(v)?;
        Ok(())
    }

    fn record<T: Serialize>(&mut self, v: &T) -> anyhow::Result<()> {
        match self.format {
            Format::Jsonl => self.json(v),
            Format::Csv => self.csv_record(v),
        }
    }

    fn finish(&mut self) -> anyhow::Result<()> {
        if let Some(t) = self.json.as_mut() {
            t.flush()?;
        }
        if let Some(c) = self.csv.as_mut() {
            c.flush()?;
        }
        Ok(())
    }
}

/// Cached moment table on disk.
#[derive(Serialize, serde::Deserialize)]
pub struct MomentCache {
    pub spec: WeightSpec,
    #[serde(rename = "J")]
    pub j: usize,
    pub tol: f64,
    pub log_alpha: Vec<f64>,
    /// SHA-256 of the canonical JSON of the other fields.
    pub hash: String,
}

fn cache_hash(spec: WeightSpec, j: usize, tol: f64, log_alpha: &[f64]) -> anyhow::Result<String> {
    let body = serde_json::to_vec(&(spec, j, tol, log_alpha))?;
    Ok(hex::encode(Sha256::digest(&body)))
}

pub fn cache_path(dir: &Path, spec: WeightSpec, j: usize) -> PathBuf {
    let name = spec.to_string().replace(':', "_");
    dir.join(format!("moments-{name}-J{j}-tol{MOMENT_TOL:e}.json"))
}

/// Loads the table from the cache directory when present and intact;
/// otherwise computes it and writes the cache.
fn moment_table(cli: &Cli, w: &WeightEval, j: usize) -> anyhow::Result<MomentTable> {
    load_or_compute(cli.cache_dir.as_deref(), w, j).map(|(t, _)| t)
}

fn load_or_compute(dir: Option<&Path>, w: &WeightEval, j: usize) -> anyhow::Result<(MomentTable, Option<String>)> {
    let Some(dir) = dir else {
        return Ok((kernel::moments(w, j)?, None));
    };
    let path = cache_path(dir, w.spec, j);
    if let Ok(bytes) = fs::read(&path) {
        if let Ok(c) = serde_json::from_slice::<MomentCache>(&bytes) {
            let ok = c.spec == w.spec
                && c.j == j
                && c.tol == MOMENT_TOL
                && cache_hash(c.spec, c.j, c.tol, &c.log_alpha).ok().as_deref() == Some(c.hash.as_str());
            let table = MomentTable {
                spec: c.spec,
                log_alpha: c.log_alpha,
            };
            if ok && table.validate().is_ok() {
                return Ok((table, Some(c.hash)));
            }
        }
        eprintln!("warning: ignoring damaged moment cache {}", path.display());
    }
    let table = kernel::moments(w, j)?;
    let hash = cache_hash(w.spec, j, MOMENT_TOL, &table.log_alpha)?;
    fs::create_dir_all(dir)?;
    let cache = MomentCache {
        spec: w.spec,
        j,
        tol: MOMENT_TOL,
        log_alpha: table.log_alpha.clone(),
        hash: hash.clone(),
    };
    fs::write(&path, serde_json::to_vec(&cache)?).with_context(|| format!("cannot write {}", path.display()))?;
    Ok((table, Some(hash)))
}

/// CSV form of reports without row structure: the JSON body in one column.
#[derive(Serialize)]
struct PlainRow {
    experiment: Experiment,
    pass: bool,
    detail: String,
}

fn emit_report(sink: &mut Sink, rep: &ExperimentReport) -> anyhow::Result<serde_json::Value> {
    for r in &rep.rows {
        match sink.format {
            Format::Jsonl => sink.json(r)?,
            Format::Csv => sink.csv_record(&CsvRow::from(r))?,
        }
    }
    let summary = serde_json::json!({
        "experiment": rep.experiment,
        "summary": rep.summary,
        "cells": rep.cells,
        "homogeneity": rep.homogeneity,
        "gates": rep.gates,
        "pass": rep.pass,
    });
    if sink.format == Format::Jsonl {
        sink.json(&summary)?;
    }
    Ok(summary)
}

type VerifyOutput = (Status, serde_json::Value, Vec<(String, String)>);

fn verify(
    cli: &Cli,
    experiment: Experiment,
    symbols: Option<usize>,
    cfg: &QuadratureConfig,
    w: &WeightEval,
    sink: &mut Sink,
) -> anyhow::Result<VerifyOutput> {
    let family = |default: usize| SymbolFamily::new(cli.seed, symbols.unwrap_or(default), cli.degree);
    let mut hashes = Vec::new();
    let report = |rep: ExperimentReport, sink: &mut Sink| -> anyhow::Result<(Status, serde_json::Value)> {
        let s = emit_report(sink, &rep)?;
        Ok((gate(rep.pass), s))
    };
    let plain = |pass: bool, value: serde_json::Value, sink: &mut Sink| -> anyhow::Result<(Status, serde_json::Value)> {
        match sink.format {
            Format::Jsonl => sink.json(&value)?,
            Format::Csv => sink.csv_record(&PlainRow {
                experiment,
                pass,
                detail: value.to_string(),
            })?,
        }
        Ok((gate(pass), value))
    };
    let (status, summary) = match experiment {
        Experiment::Identities => {
            let r = identity_experiment(cli.seed, symbols.unwrap_or(50), 8);
            plain(r.pass, serde_json::to_value(&r)?, sink)?
        }
        Experiment::Decomposition => {
            let r = decomposition_experiment(5, cli.seed, symbols.unwrap_or(10));
            match sink.format {
                Format::Jsonl => {
                    for f in &r.forms {
                        sink.json(f)?;
                    }
                    let s = serde_json::json!({
                        "max_reconstruction_rel": r.max_reconstruction_rel,
                        "max_residual": r.max_residual,
                        "failures": r.failures,
                        "pass": r.pass,
                    });
                    sink.json(&s)?;
                    (gate(r.pass), s)
                }
                Format::Csv => {
                    for f in &r.forms {
                        sink.csv_record(&DecompositionRow {
                            word: f.word.to_string(),
                            k: f.leading.k,
                            n: f.leading.n,
                            c: join_ints(&f.c),
                            delta_l: f.delta_l,
                            residual: f.residual,
                            no_t: f.no_t,
                            a: String::new(),
                            b: String::new(),
                        })?;
                    }
                    (gate(r.pass), serde_json::json!({ "pass": r.pass }))
                }
            }
        }
        Experiment::Weights => {
            let rep = w.self_check(&default_check_grid())?;
            let pass = rep.all_pass() && rep.fd_max_rel_err <= paraprod::weights::FD_TOL;
            match sink.format {
                Format::Jsonl => {
                    sink.json(&rep)?;
                    (gate(pass), serde_json::json!({ "pass": pass, "failures": rep.failures() }))
                }
                Format::Csv => {
                    for c in &rep.checks {
                        sink.csv_record(&CheckRow {
                            weight: rep.weight.to_string(),
                            check: c.name.clone(),
                            verdict: format!("{:?}", c.verdict).to_lowercase(),
                            points: c.values.len(),
                        })?;
                    }
                    (gate(pass), serde_json::json!({ "pass": pass }))
                }
            }
        }
        Experiment::Reproducing => {
            let r = reproducing_experiment(w, 20, &[0.0, 0.3, 0.6, 0.8], 512)?;
            plain(r.pass, serde_json::to_value(&r)?, sink)?
        }
        Experiment::Kernel => {
            let (table, hash) = load_or_compute(cli.cache_dir.as_deref(), w, cli.cap.max(8192))?;
            if let Some(h) = hash {
                hashes.push((w.spec.to_string(), h));
            }
            let radii: Vec<f64> = (0..10).map(|i| i as f64 * 0.1).collect();
            report(kernel_experiment(w, &[1.0, 2.0, 4.0], &radii, &table, cfg)?, sink)?
        }
        Experiment::LittlewoodPaley => report(littlewood_paley_experiment(w, cli.p, &family(50), cfg)?, sink)?,
        Experiment::Radicality => report(
            radicality_experiment(w, &family(50), &[(1.0, 2.0), (1.5, 3.0), (2.0, 4.0)], cfg)?,
            sink,
        )?,
        Experiment::WordSandwich => {
            let setup = Setup::new(cli.weight, cli.p, *cfg, &TestSetSpec::default())?;
            report(word_sandwich_experiment(&setup, &default_words(), &family(30), true)?, sink)?
        }
        Experiment::WordSum => {
            let setup = Setup::new(cli.weight, cli.p, *cfg, &TestSetSpec::unrotated())?;
            report(word_sum_experiment(&setup, &default_combos(), &family(30))?, sink)?
        }
        Experiment::QSandwich => {
            let setup = Setup::new(cli.weight, cli.p, *cfg, &TestSetSpec::unrotated())?;
            report(q_sandwich_experiment(&setup, &default_q_cells(), &family(30))?, sink)?
        }
    };
    Ok((status, summary, hashes))
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    experiment: Experiment,
    weight: String,
    p: f64,
    degree: usize,
    cap: usize,
    seed: u64,
    tol: f64,
    format: Format,
    threads: Option<usize>,
    output: &'a str,
    moment_caches: Vec<serde_json::Value>,
    result: &'a serde_json::Value,
}

/// Writes `MANIFEST.json` next to the output file (skipped for standard output).
fn write_manifest(
    cli: &Cli,
    experiment: Experiment,
    summary: &serde_json::Value,
    hashes: Vec<(String, String)>,
) -> anyhow::Result<()> {
    if cli.out == "-" {
        return Ok(());
    }
    let dir = Path::new(&cli.out).parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let m = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        experiment,
        weight: cli.weight.to_string(),
        p: cli.p,
        degree: cli.degree,
        cap: cli.cap,
        seed: cli.seed,
        tol: cli.tol,
        format: cli.format,
        threads: cli.threads,
        output: &cli.out,
        moment_caches: hashes
            .into_iter()
            .map(|(spec, hash)| serde_json::json!({ "spec": spec, "sha256": hash }))
            .collect(),
        result: summary,
    };
    fs::write(dir.join("MANIFEST.json"), serde_json::to_vec_pretty(&m)?)?;
    Ok(())
}
