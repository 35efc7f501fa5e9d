//! The batch fixed-point loop and its day-by-day variant.

use alloc::vec::Vec;

use crate::classify::{users_class, UserPartition};
use crate::config::ClassConfig;
use crate::corpus::Corpus;
use crate::error::Result;
use crate::eval::{evaluate, EvalReport, GoldenSet};
use crate::topics::{hashtags_class_scored, HashtagPartition, HashtagScore};

/// State after one iteration (batch mode) or one day (temporal mode).
#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    /// 1-based iteration number.
    pub iteration: usize,
    /// Day processed, temporal mode only.
    pub day: Option<u32>,
    pub users: UserPartition,
    pub hashtags: HashtagPartition,
    /// Scores of the non-seed candidates, ascending by hashtag.
    pub scores: Vec<HashtagScore>,
    pub eval: Option<EvalReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Run {
    pub traces: Vec<IterationTrace>,
    /// Whether the batch loop reached a fixed point before the iteration
    /// cap. Always true for temporal runs.
    pub converged: bool,
}

impl Run {
    pub fn last(&self) -> Option<&IterationTrace> {
        self.traces.last()
    }
}

fn seeds(config: &ClassConfig) -> HashtagPartition {
    HashtagPartition::from_sets(config.seed_hashtags.clone())
        .expect("validated config has disjoint seeds")
}

fn step(
    corpus: &Corpus,
    config: &ClassConfig,
    seeds: &HashtagPartition,
    hashtags: &HashtagPartition,
    users: &UserPartition,
) -> (UserPartition, HashtagPartition, Vec<HashtagScore>) {
    let users = users_class(corpus, hashtags, users, config.alpha);
    let (hashtags, scores) =
        hashtags_class_scored(corpus, &users, seeds, config.top_k, config.beta);
    (users, hashtags, scores)
}

/// Alternates user and hashtag classification starting from the seed
/// hashtags and an empty user partition.
///
/// Stops once an iteration reproduces the previous iteration's hashtag and
/// user partitions, or after `config.max_iterations`. Metrics are attached
/// when `golden` is given; `corpus` should already be stripped of golden
/// hashtags.
pub fn run_ptr(corpus: &Corpus, config: &ClassConfig, golden: Option<&GoldenSet>) -> Result<Run> {
    config.validate()?;
    let seeds = seeds(config);
    let mut hashtags = seeds.clone();
    let mut users = UserPartition::empty(config.num_classes());
    let mut traces = Vec::new();
    let mut converged = false;

    for iteration in 1..=config.max_iterations {
        let (next_users, next_hashtags, scores) = step(corpus, config, &seeds, &hashtags, &users);
        let fixed = next_users == users && next_hashtags == hashtags;
        users = next_users;
        hashtags = next_hashtags;
        traces.push(IterationTrace {
            iteration,
            day: None,
            eval: golden.map(|g| evaluate(&users, g, corpus.num_users())),
            users: users.clone(),
            hashtags: hashtags.clone(),
            scores,
        });
        if fixed {
            converged = true;
            break;
        }
    }
    Ok(Run { traces, converged })
}

/// One iteration per day from day 0 to the last day of the corpus. Each
/// day's step sees only that day's tweets, gets the accumulated user
/// partition as fallback, and feeds its hashtags to the next day.
pub fn run_tptr(corpus: &Corpus, config: &ClassConfig, golden: Option<&GoldenSet>) -> Result<Run> {
    config.validate()?;
    let seeds = seeds(config);
    let mut hashtags = seeds.clone();
    let mut users = UserPartition::empty(config.num_classes());
    let mut traces = Vec::new();
    #[allow(clippy::reversed_empty_ranges)]
    let days = match corpus.days().last() {
        Some(last) => 0..=last,
        None => 1..=0,
    };

    for day in days {
        let daily = corpus.restrict_to_day(day);
        let (next_users, next_hashtags, scores) = step(&daily, config, &seeds, &hashtags, &users);
        users = next_users;
        hashtags = next_hashtags;
        traces.push(IterationTrace {
            iteration: day as usize + 1,
            day: Some(day),
            eval: golden.map(|g| evaluate(&users, g, corpus.num_users())),
            users: users.clone(),
            hashtags: hashtags.clone(),
            scores,
        });
    }
    Ok(Run {
        traces,
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TweetRecord;
    use alloc::format;
    use alloc::vec;

    fn config() -> ClassConfig {
        ClassConfig::builder(vec![
            ("a", vec!["a1"], vec!["ga"]),
            ("b", vec!["b1"], vec!["gb"]),
        ])
        .build()
        .unwrap()
    }

    fn corpus(tweets: &[(&str, u32, &[&str])]) -> Corpus {
        Corpus::new(
            tweets
                .iter()
                .enumerate()
                .map(|(i, (u, d, t))| {
                    TweetRecord::new(format!("t{i}"), *u, *d, t.iter().copied()).unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn empty_corpus_converges_immediately() {
        let run = run_ptr(&Corpus::empty(), &config(), None).unwrap();
        assert_eq!(run.traces.len(), 1);
        assert!(run.converged);
        let t = &run.traces[0];
        assert_eq!(t.users.assigned_count(), 0);
        assert_eq!(t.hashtags, seeds(&config()));
    }

    #[test]
    fn seeds_already_separate() {
        // Only seeds are used; nothing else can be discovered.
        let c = corpus(&[("u", 0, &["a1"]), ("v", 0, &["b1"]), ("w", 0, &["a1"])]);
        let run = run_ptr(&c, &config(), None).unwrap();
        assert_eq!(run.traces.len(), 2);
        assert!(run.converged);
        assert_eq!(run.traces[0].hashtags, seeds(&config()));
        assert_eq!(run.traces[1].hashtags, seeds(&config()));
        assert_eq!(run.traces[1].users.assigned_count(), 3);
    }

    #[test]
    fn tptr_backup_over_silent_day() {
        let c = corpus(&[("u", 0, &["a1"]), ("v", 1, &["b1"])]);
        let run = run_tptr(&c, &config(), None).unwrap();
        assert_eq!(run.traces.len(), 2);
        let u = c.user_id("u").unwrap();
        assert_eq!(run.traces[0].users.class_of(u), Some(0));
        assert_eq!(run.traces[1].users.class_of(u), Some(0));
        assert_eq!(run.traces[1].day, Some(1));
    }

    #[test]
    fn tptr_single_day_matches_first_ptr_iteration() {
        let c = corpus(&[
            ("u", 0, &["a1", "x"]),
            ("v", 0, &["b1", "y"]),
            ("w", 0, &["x"]),
        ]);
        let t = run_tptr(&c, &config(), None).unwrap();
        let p = run_ptr(&c, &config(), None).unwrap();
        assert_eq!(t.traces.len(), 1);
        assert_eq!(t.traces[0].users, p.traces[0].users);
        assert_eq!(t.traces[0].hashtags, p.traces[0].hashtags);
        assert_eq!(t.traces[0].scores, p.traces[0].scores);
    }

    #[test]
    fn tptr_on_empty_corpus() {
        assert!(run_tptr(&Corpus::empty(), &config(), None)
            .unwrap()
            .traces
            .is_empty());
    }

    #[test]
    fn iteration_cap() {
        let mut cfg = config();
        cfg.max_iterations = 1;
        let c = corpus(&[("u", 0, &["a1", "x"]), ("w", 0, &["x"])]);
        let run = run_ptr(&c, &cfg, None).unwrap();
        assert_eq!(run.traces.len(), 1);
        assert!(!run.converged);
    }
}
