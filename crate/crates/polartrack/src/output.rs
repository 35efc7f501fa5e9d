//! Output directory layout of the analysis subcommands.
//!
//! | file              | content                                          |
//! |-------------------|--------------------------------------------------|
//! | `manifest.json`   | [`RunManifest`]                                  |
//! | `metrics.jsonl`   | one [`MetricsRecord`] per iteration or day       |
//! | `hashtags.jsonl`  | one [`HashtagRecord`] per iteration and class    |
//! | `partitions.json` | final [`Partitions`]                             |
//! | `scores.jsonl`    | one [`ScoreRecord`] per scored hashtag, optional |
//! | `report.txt`      | human-readable tables, 3 decimals                |
//!
//! Machine-readable files carry full-precision numbers; only `report.txt`
//! rounds. Nothing but the manifest timestamp depends on when or with how
//! many threads the run happened.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use polartrack_core::{ClassConfig, Corpus, EvalReport, IterationTrace, UserPartition};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::synth_file::{named_partition, write_json, ClassUsers};

pub const MANIFEST: &str = "manifest.json";
pub const METRICS: &str = "metrics.jsonl";
pub const HASHTAGS: &str = "hashtags.jsonl";
pub const PARTITIONS: &str = "partitions.json";
pub const SCORES: &str = "scores.jsonl";
pub const REPORT: &str = "report.txt";

/// Parameters given on the command line, overriding the config file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub top_k: Option<usize>,
    pub max_iterations: Option<usize>,
}

impl Overrides {
    /// Applies the overrides and revalidates.
    pub fn apply(&self, mut config: ClassConfig) -> Result<ClassConfig> {
        if let Some(a) = self.alpha {
            config.alpha = a;
        }
        if let Some(b) = self.beta {
            config.beta = b;
        }
        if let Some(k) = self.top_k {
            config.top_k = k;
        }
        if let Some(n) = self.max_iterations {
            config.max_iterations = n;
        }
        config.validate().map_err(|e| match e {
            polartrack_core::Error::Config(m) => Error::Invalid(m),
            other => other.into(),
        })?;
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub input: PathBuf,
    pub config: PathBuf,
    /// Whether the golden set was built and the run evaluated.
    pub golden: bool,
    pub overrides: Overrides,
    pub output_dir: PathBuf,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub class: String,
    pub users: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hashtags: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub recall: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub f_measure: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MacroRecord {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub gamma: f64,
    pub big_gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRecord {
    pub iteration: usize,
    pub day: Option<u32>,
    pub assigned_users: usize,
    pub total_users: usize,
    pub classes: Vec<ClassRecord>,
    #[serde(rename = "macro")]
    pub macro_avg: Option<MacroRecord>,
}

impl MetricsRecord {
    pub fn new(
        iteration: usize,
        day: Option<u32>,
        classes: &[String],
        users: &UserPartition,
        hashtags: Option<&[usize]>,
        eval: Option<&EvalReport>,
        total_users: usize,
    ) -> Self {
        let classes = classes
            .iter()
            .enumerate()
            .map(|(c, name)| {
                let m = eval.map(|e| e.per_class[c]);
                ClassRecord {
                    class: name.clone(),
                    users: users.members(c).len(),
                    hashtags: hashtags.map(|h| h[c]),
                    precision: m.map(|m| m.precision),
                    recall: m.map(|m| m.recall),
                    f_measure: m.map(|m| m.f_measure),
                }
            })
            .collect();
        Self {
            iteration,
            day,
            assigned_users: users.assigned_count(),
            total_users,
            classes,
            macro_avg: eval.map(|e| MacroRecord {
                precision: e.macro_precision,
                recall: e.macro_recall,
                f_measure: e.macro_f,
                gamma: e.gamma,
                big_gamma: e.big_gamma,
            }),
        }
    }

    pub fn from_trace(t: &IterationTrace, config: &ClassConfig, total_users: usize) -> Self {
        let sizes: Vec<usize> = t.hashtags.sets().iter().map(|s| s.len()).collect();
        Self::new(
            t.iteration,
            t.day,
            &config.classes,
            &t.users,
            Some(&sizes),
            t.eval.as_ref(),
            total_users,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HashtagRecord {
    pub iteration: usize,
    pub day: Option<u32>,
    pub class: String,
    pub hashtags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRecord {
    pub iteration: usize,
    pub day: Option<u32>,
    pub hashtag: String,
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassHashtags {
    pub class: String,
    pub hashtags: Vec<String>,
}

/// Final user and hashtag classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partitions {
    pub users: Vec<ClassUsers>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hashtags: Vec<ClassHashtags>,
}

/// Everything an analysis subcommand writes besides the manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutputs {
    pub title: String,
    pub metrics: Vec<MetricsRecord>,
    pub hashtags: Vec<HashtagRecord>,
    pub scores: Option<Vec<ScoreRecord>>,
    pub partitions: Partitions,
}

impl RunOutputs {
    /// Outputs of a batch or temporal run.
    pub fn from_traces(
        title: &str,
        traces: &[IterationTrace],
        corpus: &Corpus,
        config: &ClassConfig,
        dump_scores: bool,
    ) -> Self {
        let metrics = traces
            .iter()
            .map(|t| MetricsRecord::from_trace(t, config, corpus.num_users()))
            .collect();
        let hashtags = traces
            .iter()
            .flat_map(|t| {
                config
                    .classes
                    .iter()
                    .zip(t.hashtags.sets())
                    .map(|(class, set)| HashtagRecord {
                        iteration: t.iteration,
                        day: t.day,
                        class: class.clone(),
                        hashtags: set.iter().cloned().collect(),
                    })
            })
            .collect();
        let scores = dump_scores.then(|| {
            traces
                .iter()
                .flat_map(|t| {
                    t.scores.iter().map(|s| ScoreRecord {
                        iteration: t.iteration,
                        day: t.day,
                        hashtag: s.hashtag.clone(),
                        scores: s.per_class.clone(),
                    })
                })
                .collect()
        });
        let partitions = match traces.last() {
            Some(t) => Partitions {
                users: named_partition(corpus, &config.classes, &t.users),
                hashtags: config
                    .classes
                    .iter()
                    .zip(t.hashtags.sets())
                    .map(|(class, set)| ClassHashtags {
                        class: class.clone(),
                        hashtags: set.iter().cloned().collect(),
                    })
                    .collect(),
            },
            None => Partitions {
                users: named_partition(
                    corpus,
                    &config.classes,
                    &UserPartition::empty(config.num_classes()),
                ),
                hashtags: Vec::new(),
            },
        };
        Self {
            title: title.to_string(),
            metrics,
            hashtags,
            scores,
            partitions,
        }
    }

    pub fn report(&self) -> String {
        render_report(&self.title, &self.metrics)
    }

    /// Writes every file except the manifest.
    pub fn write(&self, dir: &Path) -> Result<()> {
        create_dir(dir)?;
        write_lines(&dir.join(METRICS), &self.metrics)?;
        write_lines(&dir.join(HASHTAGS), &self.hashtags)?;
        if let Some(scores) = &self.scores {
            write_lines(&dir.join(SCORES), scores)?;
        }
        write_json(dir.join(PARTITIONS), &self.partitions)?;
        write_text(&dir.join(REPORT), &self.report())
    }
}

pub fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Write {
        path: dir.into(),
        source,
    })
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Write {
        path: path.into(),
        source,
    })
}

pub fn write_lines<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    let mut buf = Vec::new();
    for item in items {
        serde_json::to_writer(&mut buf, item).expect("record serializes");
        buf.push(b'\n');
    }
    let wrap = |source| Error::Write {
        path: path.into(),
        source,
    };
    fs::File::create(path)
        .map_err(wrap)?
        .write_all(&buf)
        .map_err(wrap)
}

pub fn read_metrics(path: &Path) -> Result<Vec<MetricsRecord>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                path: path.into(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

fn fmt3(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.3}"))
}

/// Iteration table followed by the per-class table of the last record.
pub fn render_report(title: &str, metrics: &[MetricsRecord]) -> String {
    let mut out = String::new();
    writeln!(out, "{title}").unwrap();
    writeln!(out).unwrap();
    writeln!(
        out,
        "{:>4} {:>4} {:>8} {:>8} {:>8} {:>7} {:>7} {:>8}",
        "iter", "day", "macro-P", "macro-R", "macro-F", "gamma", "Gamma", "assigned"
    )
    .unwrap();
    for m in metrics {
        let a = m.macro_avg.as_ref();
        writeln!(
            out,
            "{:>4} {:>4} {:>8} {:>8} {:>8} {:>7} {:>7} {:>8}",
            m.iteration,
            m.day.map_or_else(|| "-".to_string(), |d| d.to_string()),
            fmt3(a.map(|a| a.precision)),
            fmt3(a.map(|a| a.recall)),
            fmt3(a.map(|a| a.f_measure)),
            fmt3(a.map(|a| a.gamma)),
            fmt3(a.map(|a| a.big_gamma)),
            m.assigned_users,
        )
        .unwrap();
    }
    if let Some(last) = metrics.last() {
        writeln!(out).unwrap();
        let width = last
            .classes
            .iter()
            .map(|c| c.class.len())
            .max()
            .unwrap_or(0)
            .max(5);
        writeln!(
            out,
            "{:<width$} {:>7} {:>8} {:>7} {:>7} {:>7}",
            "class", "users", "hashtags", "P", "R", "F"
        )
        .unwrap();
        for c in &last.classes {
            writeln!(
                out,
                "{:<width$} {:>7} {:>8} {:>7} {:>7} {:>7}",
                c.class,
                c.users,
                c.hashtags
                    .map_or_else(|| "-".to_string(), |h| h.to_string()),
                fmt3(c.precision),
                fmt3(c.recall),
                fmt3(c.f_measure),
            )
            .unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use polartrack_core::{evaluate, GoldenSet, UserId};
    use std::collections::BTreeSet;

    #[test]
    fn rounding_only_in_the_table() {
        let u = UserPartition::from_sets(vec![
            BTreeSet::from([UserId(0), UserId(1)]),
            BTreeSet::from([UserId(2)]),
        ])
        .unwrap();
        let g = GoldenSet::from_partition(
            &UserPartition::from_sets(vec![
                BTreeSet::from([UserId(0)]),
                BTreeSet::from([UserId(1), UserId(2)]),
            ])
            .unwrap(),
        );
        let e = evaluate(&u, &g, 3);
        let m = MetricsRecord::new(
            1,
            None,
            &["a".into(), "b".into()],
            &u,
            Some(&[2, 1]),
            Some(&e),
            3,
        );
        let line = serde_json::to_string(&m).unwrap();
        assert!(line.contains("0.6666666666666666"), "{line}");
        let back: MetricsRecord = serde_json::from_str(&line).unwrap();
        assert_eq!(back, m);
        let table = render_report("t", &[m]);
        assert!(table.contains("0.667"));
        assert!(!table.contains("0.6666"));
    }

    #[test]
    fn overrides_revalidate() {
        let cfg = ClassConfig::builder(vec![
            ("a", vec!["x"], vec!["gx"]),
            ("b", vec!["y"], vec!["gy"]),
        ])
        .build()
        .unwrap();
        let bad = Overrides {
            alpha: Some(1.0),
            ..Overrides::default()
        };
        assert!(matches!(bad.apply(cfg.clone()), Err(Error::Invalid(_))));
        let ok = Overrides {
            top_k: Some(7),
            ..Overrides::default()
        };
        assert_eq!(ok.apply(cfg).unwrap().top_k, 7);
    }
}
