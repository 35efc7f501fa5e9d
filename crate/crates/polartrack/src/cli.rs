//! The `polartrack` command line.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use polartrack_core::baseline::{build_vectors, seeded_kmeans};
use polartrack_core::synth::{generate, SynthConfig};
use polartrack_core::{
    build_golden, evaluate, run_ptr, run_tptr, strip_golden, ClassConfig, Corpus, GoldenSet,
    UserPartition,
};
use serde::Deserialize;

use crate::config_file::{load_config, write_config};
use crate::corpus_io::{load_corpus, write_corpus};
use crate::error::{Error, Result};
use crate::output::{
    create_dir, read_metrics, render_report, MetricsRecord, Overrides, Partitions, RunManifest,
    RunOutputs, MANIFEST, METRICS, PARTITIONS, REPORT,
};
use crate::synth_file::{named_partition, read_json, write_json, ClassUsers, SynthFile};

#[derive(Debug, Parser)]
#[command(
    name = "polartrack",
    version,
    about = "Polarized user and hashtag discovery on hashtag streams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic planted-polarization corpus.
    Gen(GenArgs),
    /// Iterate user and hashtag classification to a fixed point.
    Run(RunArgs),
    /// Run one classification step per day.
    Tptr(RunArgs),
    /// Seeded k-means over user hashtag vectors.
    Baseline(BaselineArgs),
    /// Evaluate a user partition file against the golden set.
    Eval(EvalArgs),
    /// Print the report of an output directory.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = SynthConfig::default().seed)]
    pub seed: u64,
    /// Corpus file to write; companion files share its stem.
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long)]
    pub classes: Option<usize>,
    #[arg(long)]
    pub users_per_class: Option<usize>,
    #[arg(long)]
    pub neutral_users: Option<usize>,
    #[arg(long)]
    pub days: Option<u32>,
    #[arg(long)]
    pub tweets_per_day: Option<f64>,
    #[arg(long)]
    pub class_vocab: Option<usize>,
    #[arg(long)]
    pub shared_vocab: Option<usize>,
    #[arg(long)]
    pub leak: Option<f64>,
    #[arg(long)]
    pub golden_frac: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct Params {
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
}

impl Params {
    fn overrides(&self) -> Overrides {
        Overrides {
            alpha: self.alpha,
            beta: self.beta,
            top_k: self.top_k,
            max_iterations: self.max_iter,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Line-delimited JSON corpus.
    pub corpus: PathBuf,
    /// Class configuration (TOML, or JSON with a `.json` extension).
    #[arg(short, long)]
    pub config: PathBuf,
    /// Build the golden set from the golden hashtags, remove them from the
    /// corpus and evaluate every step.
    #[arg(long)]
    pub golden: bool,
    #[arg(long, default_value = "polartrack-out")]
    pub out: PathBuf,
    /// Worker threads; 0 lets the runtime decide. Never changes the output.
    #[arg(long, env = "POLARTRACK_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: Common,
    /// Also write every hashtag score to scores.jsonl.
    #[arg(long)]
    pub dump_scores: bool,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Corpus carrying the golden hashtags.
    pub corpus: PathBuf,
    #[arg(short, long)]
    pub config: PathBuf,
    /// partitions.json of a run, or a truth file written by `gen`.
    #[arg(long)]
    pub partition: PathBuf,
    /// Directory for metrics.jsonl and report.txt; stdout only if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub dir: PathBuf,
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn main_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command and returns what it prints on success.
pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Gen(a) => gen(&a),
        Command::Run(a) => with_threads(a.common.threads, || {
            analyze("run", &a.common, a.dump_scores)
        }),
        Command::Tptr(a) => with_threads(a.common.threads, || {
            analyze("tptr", &a.common, a.dump_scores)
        }),
        Command::Baseline(a) => with_threads(a.common.threads, || baseline(&a.common)),
        Command::Eval(a) => eval(&a),
        Command::Report(a) => {
            let metrics = read_metrics(&a.dir.join(METRICS))?;
            let manifest: RunManifest = read_json(a.dir.join(MANIFEST))?;
            Ok(render_report(&manifest.subcommand, &metrics))
        }
    }
}

fn with_threads(threads: usize, f: impl FnOnce() -> Result<String> + Send) -> Result<String> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Threads(e.to_string()))?;
    pool.install(f)
}

fn companion(out: &Path, suffix: &str) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn gen(a: &GenArgs) -> Result<String> {
    let d = SynthConfig::default();
    let cfg = SynthConfig {
        seed: a.seed,
        classes: a.classes.unwrap_or(d.classes),
        users_per_class: a.users_per_class.unwrap_or(d.users_per_class),
        neutral_users: a.neutral_users.unwrap_or(d.neutral_users),
        days: a.days.unwrap_or(d.days),
        tweets_per_user_per_day: a.tweets_per_day.unwrap_or(d.tweets_per_user_per_day),
        class_vocab_size: a.class_vocab.unwrap_or(d.class_vocab_size),
        shared_vocab_size: a.shared_vocab.unwrap_or(d.shared_vocab_size),
        leak_prob: a.leak.unwrap_or(d.leak_prob),
        golden_frac: a.golden_frac.unwrap_or(d.golden_frac),
    };
    let s = generate(&cfg).map_err(|e| match e {
        polartrack_core::Error::Config(m) => Error::Invalid(m),
        other => other.into(),
    })?;
    if let Some(parent) = a.out.parent().filter(|p| !p.as_os_str().is_empty()) {
        create_dir(parent)?;
    }
    write_corpus(&a.out, s.corpus.records())?;
    let synth = companion(&a.out, "synth.json");
    let classes = companion(&a.out, "classes.toml");
    let truth = companion(&a.out, "truth.json");
    write_json(&synth, &SynthFile::from(&cfg))?;
    write_config(&classes, &s.class_config)?;
    write_json(
        &truth,
        &named_partition(&s.corpus, &s.class_config.classes, &s.truth),
    )?;
    Ok(format!(
        "wrote {} ({} tweets, {} users)\nwrote {}\nwrote {}\nwrote {}\n",
        a.out.display(),
        s.corpus.len(),
        s.corpus.num_users(),
        synth.display(),
        classes.display(),
        truth.display()
    ))
}

struct Prepared {
    corpus: Corpus,
    config: ClassConfig,
    golden: Option<GoldenSet>,
}

fn prepare(c: &Common) -> Result<Prepared> {
    let config = c.params.overrides().apply(load_config(&c.config)?)?;
    let raw = load_corpus(&c.corpus)?;
    let (corpus, golden) = if c.golden {
        let golden = build_golden(&raw, &config);
        (strip_golden(&raw, &config), Some(golden))
    } else {
        (raw, None)
    };
    Ok(Prepared {
        corpus,
        config,
        golden,
    })
}

fn manifest(subcommand: &str, c: &Common) -> RunManifest {
    RunManifest {
        subcommand: subcommand.to_string(),
        input: c.corpus.clone(),
        config: c.config.clone(),
        golden: c.golden,
        overrides: c.params.overrides(),
        output_dir: c.out.clone(),
        timestamp: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        version: env!("CARGO_PKG_VERSION").to_string(),
    }
}

fn finish(subcommand: &str, c: &Common, outputs: &RunOutputs) -> Result<String> {
    outputs.write(&c.out)?;
    write_json(c.out.join(MANIFEST), &manifest(subcommand, c))?;
    Ok(outputs.report())
}

fn analyze(subcommand: &str, c: &Common, dump_scores: bool) -> Result<String> {
    let p = prepare(c)?;
    let run = match subcommand {
        "tptr" => run_tptr(&p.corpus, &p.config, p.golden.as_ref())?,
        _ => run_ptr(&p.corpus, &p.config, p.golden.as_ref())?,
    };
    let mut title = format!("{subcommand}: {} iterations", run.traces.len());
    if subcommand == "run" {
        title += if run.converged {
            ", converged"
        } else {
            ", iteration cap reached"
        };
    }
    let outputs = RunOutputs::from_traces(&title, &run.traces, &p.corpus, &p.config, dump_scores);
    finish(subcommand, c, &outputs)
}

fn baseline(c: &Common) -> Result<String> {
    let p = prepare(c)?;
    let (vectors, features) = build_vectors(&p.corpus, p.config.top_k);
    let out = seeded_kmeans(&vectors, &features, &p.config)?;
    let eval = p
        .golden
        .as_ref()
        .map(|g| evaluate(&out.partition, g, p.corpus.num_users()));
    let metrics = MetricsRecord::new(
        out.rounds,
        None,
        &p.config.classes,
        &out.partition,
        None,
        eval.as_ref(),
        p.corpus.num_users(),
    );
    let title = format!(
        "baseline: k-means, {} features, {} rounds, {}",
        features.len(),
        out.rounds,
        if out.converged {
            "converged"
        } else {
            "round cap reached"
        }
    );
    let outputs = RunOutputs {
        title,
        metrics: vec![metrics],
        hashtags: Vec::new(),
        scores: None,
        partitions: Partitions {
            users: named_partition(&p.corpus, &p.config.classes, &out.partition),
            hashtags: Vec::new(),
        },
    };
    finish("baseline", c, &outputs)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PartitionFile {
    Run(Partitions),
    Truth(Vec<ClassUsers>),
}

fn eval(a: &EvalArgs) -> Result<String> {
    let config = a.params.overrides().apply(load_config(&a.config)?)?;
    let corpus = load_corpus(&a.corpus)?;
    let users = match read_json::<PartitionFile>(&a.partition)? {
        PartitionFile::Run(p) => p.users,
        PartitionFile::Truth(t) => t,
    };
    let mut labels = Vec::new();
    for entry in &users {
        let class = config
            .class_index(&entry.class)
            .ok_or_else(|| Error::Format {
                path: a.partition.clone(),
                message: format!("unknown class `{}`", entry.class),
            })?;
        for name in &entry.users {
            let id = corpus.user_id(name).ok_or_else(|| Error::Format {
                path: a.partition.clone(),
                message: format!("user `{name}` is not in the corpus"),
            })?;
            labels.push((id, Some(class)));
        }
    }
    let partition = UserPartition::from_sets({
        let mut sets = vec![std::collections::BTreeSet::new(); config.num_classes()];
        for (id, c) in labels {
            sets[c.expect("labeled")].insert(id);
        }
        sets
    })
    .map_err(|e| Error::Format {
        path: a.partition.clone(),
        message: e.to_string(),
    })?;
    let golden = build_golden(&corpus, &config);
    let report = evaluate(&partition, &golden, corpus.num_users());
    let metrics = MetricsRecord::new(
        1,
        None,
        &config.classes,
        &partition,
        None,
        Some(&report),
        corpus.num_users(),
    );
    let title = format!(
        "eval: {} against {} golden users",
        a.partition.display(),
        golden.len()
    );
    let text = render_report(&title, std::slice::from_ref(&metrics));
    if let Some(dir) = &a.out {
        create_dir(dir)?;
        crate::output::write_lines(&dir.join(METRICS), std::slice::from_ref(&metrics))?;
        crate::output::write_text(&dir.join(REPORT), &text)?;
    }
    Ok(text)
}

/// Files compared when checking that two runs agree.
pub const DETERMINISTIC_FILES: [&str; 4] = [METRICS, crate::output::HASHTAGS, PARTITIONS, REPORT];
