//! Files written next to a generated corpus: the generator parameters and
//! the planted partition.

use std::path::Path;

use polartrack_core::synth::SynthConfig;
use polartrack_core::{Corpus, UserPartition};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthFile {
    pub seed: u64,
    pub classes: usize,
    pub users_per_class: usize,
    pub neutral_users: usize,
    pub days: u32,
    pub tweets_per_user_per_day: f64,
    pub class_vocab_size: usize,
    pub shared_vocab_size: usize,
    pub leak_prob: f64,
    pub golden_frac: f64,
}

impl From<&SynthConfig> for SynthFile {
    fn from(c: &SynthConfig) -> Self {
        Self {
            seed: c.seed,
            classes: c.classes,
            users_per_class: c.users_per_class,
            neutral_users: c.neutral_users,
            days: c.days,
            tweets_per_user_per_day: c.tweets_per_user_per_day,
            class_vocab_size: c.class_vocab_size,
            shared_vocab_size: c.shared_vocab_size,
            leak_prob: c.leak_prob,
            golden_frac: c.golden_frac,
        }
    }
}

impl From<SynthFile> for SynthConfig {
    fn from(f: SynthFile) -> Self {
        Self {
            seed: f.seed,
            classes: f.classes,
            users_per_class: f.users_per_class,
            neutral_users: f.neutral_users,
            days: f.days,
            tweets_per_user_per_day: f.tweets_per_user_per_day,
            class_vocab_size: f.class_vocab_size,
            shared_vocab_size: f.shared_vocab_size,
            leak_prob: f.leak_prob,
            golden_frac: f.golden_frac,
        }
    }
}

/// Users of each class, by name, in class order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassUsers {
    pub class: String,
    pub users: Vec<String>,
}

pub fn named_partition(corpus: &Corpus, classes: &[String], p: &UserPartition) -> Vec<ClassUsers> {
    classes
        .iter()
        .zip(p.sets())
        .map(|(class, set)| ClassUsers {
            class: class.clone(),
            users: set
                .iter()
                .map(|&u| corpus.user_name(u).to_string())
                .collect(),
        })
        .collect()
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let path = path.as_ref();
    let text = serde_json::to_string_pretty(value).expect("value serializes") + "\n";
    std::fs::write(path, text).map_err(|source| Error::Write {
        path: path.into(),
        source,
    })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.into(),
        message: e.to_string(),
    })
}
