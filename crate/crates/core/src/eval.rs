//! Golden-set construction and precision / recall / F-measure / coverage.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use crate::classify::{users_class, UserPartition};
use crate::config::{ClassConfig, GoldenRule};
use crate::corpus::{Corpus, UserId};
use crate::topics::HashtagPartition;

/// Reference users per class (`Z_c`), pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenSet {
    members: Vec<BTreeSet<UserId>>,
}

impl GoldenSet {
    /// The caller guarantees the sets are pairwise disjoint.
    pub fn from_partition(p: &UserPartition) -> Self {
        Self {
            members: p.sets().to_vec(),
        }
    }

    pub fn members(&self, class: usize) -> &BTreeSet<UserId> {
        &self.members[class]
    }

    pub fn num_classes(&self) -> usize {
        self.members.len()
    }

    /// `Z`.
    pub fn all(&self) -> BTreeSet<UserId> {
        self.members.iter().flatten().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn class_of(&self, user: UserId) -> Option<usize> {
        self.members.iter().position(|s| s.contains(&user))
    }
}

/// Builds the golden set from a corpus that still carries its golden
/// hashtags, following `config.golden_rule`.
pub fn build_golden(corpus: &Corpus, config: &ClassConfig) -> GoldenSet {
    match config.golden_rule {
        GoldenRule::Exclusive => {
            let k = config.num_classes();
            let lookup: Vec<Option<usize>> = corpus
                .vocab()
                .iter()
                .map(|h| config.golden_hashtags.iter().position(|g| g.contains(h)))
                .collect();
            let labels = corpus.user_ids().map(|u| {
                let mut touched = vec![false; k];
                for &t in corpus.tweets_of(u) {
                    for tag in corpus.tweet_tags(t) {
                        if let Some(c) = lookup[tag.index()] {
                            touched[c] = true;
                        }
                    }
                }
                let mut hit = touched
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x)
                    .map(|(c, _)| c);
                let label = match (hit.next(), hit.next()) {
                    (Some(c), None) => Some(c),
                    _ => None,
                };
                (u, label)
            });
            GoldenSet::from_partition(&UserPartition::from_labels(k, labels))
        }
        GoldenRule::Dominance => {
            let golden = HashtagPartition::from_sets(config.golden_hashtags.clone())
                .expect("validated config has disjoint golden sets");
            let p = users_class(
                corpus,
                &golden,
                &UserPartition::empty(config.num_classes()),
                config.alpha,
            );
            GoldenSet::from_partition(&p)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

/// Per-class and macro-averaged metrics of one classification.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f: f64,
    /// Share of golden users that are classified.
    pub gamma: f64,
    /// Share of all corpus users that are classified.
    pub big_gamma: f64,
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Evaluates `users` against `golden`. `total_users` is `|U|` of the
/// evaluated corpus.
pub fn evaluate(users: &UserPartition, golden: &GoldenSet, total_users: usize) -> EvalReport {
    let z = golden.all();
    let k = golden.num_classes();
    let per_class: Vec<ClassMetrics> = (0..k)
        .map(|c| {
            let uc = if c < users.num_classes() {
                users.members(c)
            } else {
                return ClassMetrics {
                    precision: 0.0,
                    recall: 0.0,
                    f_measure: 0.0,
                };
            };
            let zc = golden.members(c);
            let hit = uc.intersection(zc).count();
            let in_z = uc.intersection(&z).count();
            let precision = ratio(hit, in_z);
            let recall = ratio(hit, zc.len());
            ClassMetrics {
                precision,
                recall,
                f_measure: f_measure(precision, recall),
            }
        })
        .collect();

    let mean = |f: fn(&ClassMetrics) -> f64| {
        if k == 0 {
            0.0
        } else {
            per_class.iter().map(f).sum::<f64>() / k as f64
        }
    };
    let assigned = users.assigned();
    EvalReport {
        macro_precision: mean(|m| m.precision),
        macro_recall: mean(|m| m.recall),
        macro_f: mean(|m| m.f_measure),
        gamma: ratio(assigned.intersection(&z).count(), z.len()),
        big_gamma: ratio(assigned.len(), total_users),
        per_class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TweetRecord;
    use alloc::format;

    fn ids(xs: &[u32]) -> BTreeSet<UserId> {
        xs.iter().map(|&x| UserId(x)).collect()
    }

    #[test]
    fn harmonic_mean() {
        assert_eq!(f_measure(0.0, 0.0), 0.0);
        assert_eq!(f_measure(1.0, 1.0), 1.0);
        assert!((f_measure(0.144, 0.257) - 0.185).abs() < 5e-4);
        assert!((f_measure(0.350, 0.752) - 0.478).abs() < 5e-4);
    }

    #[test]
    fn perfect_classification() {
        let g = GoldenSet::from_partition(
            &UserPartition::from_sets(vec![ids(&[0, 1]), ids(&[2])]).unwrap(),
        );
        let u = UserPartition::from_sets(vec![ids(&[0, 1]), ids(&[2])]).unwrap();
        let r = evaluate(&u, &g, 3);
        for m in &r.per_class {
            assert_eq!((m.precision, m.recall, m.f_measure), (1.0, 1.0, 1.0));
        }
        assert_eq!((r.macro_f, r.gamma, r.big_gamma), (1.0, 1.0, 1.0));
    }

    #[test]
    fn zero_denominators() {
        let g = GoldenSet::from_partition(
            &UserPartition::from_sets(vec![ids(&[0]), BTreeSet::new()]).unwrap(),
        );
        let u = UserPartition::from_sets(vec![BTreeSet::new(), ids(&[5])]).unwrap();
        let r = evaluate(&u, &g, 10);
        assert_eq!(r.per_class[0].precision, 0.0);
        assert_eq!(r.per_class[0].recall, 0.0);
        assert_eq!(r.per_class[1].precision, 0.0);
        assert_eq!(r.per_class[1].recall, 0.0);
        assert_eq!(r.gamma, 0.0);
        assert!((r.big_gamma - 0.1).abs() < 1e-15);

        let empty = GoldenSet::from_partition(&UserPartition::empty(2));
        assert_eq!(evaluate(&u, &empty, 10).gamma, 0.0);
    }

    #[test]
    fn mixed_counts() {
        // Z_A = {0,1,2,3}, Z_B = {4,5}; U_A = {0,1,4,9}, U_B = {5}.
        let g = GoldenSet::from_partition(
            &UserPartition::from_sets(vec![ids(&[0, 1, 2, 3]), ids(&[4, 5])]).unwrap(),
        );
        let u = UserPartition::from_sets(vec![ids(&[0, 1, 4, 9]), ids(&[5])]).unwrap();
        let r = evaluate(&u, &g, 20);
        assert!((r.per_class[0].precision - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.per_class[0].recall - 0.5).abs() < 1e-15);
        assert_eq!(r.per_class[1].precision, 1.0);
        assert_eq!(r.per_class[1].recall, 0.5);
        assert!((r.gamma - 4.0 / 6.0).abs() < 1e-15);
        assert!((r.big_gamma - 5.0 / 20.0).abs() < 1e-15);
    }

    fn config() -> ClassConfig {
        ClassConfig::builder(vec![
            ("pd", vec!["pd"], vec!["ivotepd"]),
            ("m5s", vec!["m5s"], vec!["ivotem5s"]),
        ])
        .build()
        .unwrap()
    }

    fn corpus(tweets: &[(&str, &[&str])]) -> Corpus {
        Corpus::new(
            tweets
                .iter()
                .enumerate()
                .map(|(i, (u, t))| {
                    TweetRecord::new(format!("t{i}"), *u, 0, t.iter().copied()).unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn golden_exclusivity() {
        let c = corpus(&[
            ("a", &["ivotepd"]),
            ("b", &["ivotepd"]),
            ("b", &["ivotem5s"]),
            ("d", &["ivotem5s", "pd"]),
            ("e", &["pd"]),
        ]);
        let g = build_golden(&c, &config());
        assert_eq!(g.members(0), &ids(&[c.user_id("a").unwrap().0]));
        assert_eq!(g.members(1), &ids(&[c.user_id("d").unwrap().0]));
        assert_eq!(g.class_of(c.user_id("b").unwrap()), None);

        let none = corpus(&[("a", &["pd"])]);
        assert!(build_golden(&none, &config()).is_empty());
    }

    #[test]
    fn golden_dominance_variant() {
        let c = corpus(&[
            ("b", &["ivotepd"]),
            ("b", &["ivotepd"]),
            ("b", &["ivotepd"]),
            ("b", &["ivotem5s"]),
        ]);
        let mut cfg = config();
        assert!(build_golden(&c, &cfg).is_empty());
        cfg.golden_rule = GoldenRule::Dominance;
        assert_eq!(build_golden(&c, &cfg).len(), 1);
    }
}
