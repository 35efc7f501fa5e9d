//! User classification from the current class hashtags, with fallback to
//! the previous classification.

use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::corpus::{Corpus, UserId};
use crate::error::{Error, Result};
use crate::topics::HashtagPartition;

/// Disjoint per-class user sets. Users in no set are unassigned.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UserPartition {
    classes: Vec<BTreeSet<UserId>>,
}

impl UserPartition {
    pub fn empty(num_classes: usize) -> Self {
        Self {
            classes: vec![BTreeSet::new(); num_classes],
        }
    }

    /// Fails if a user appears in more than one set.
    pub fn from_sets(classes: Vec<BTreeSet<UserId>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for set in &classes {
            for u in set {
                if !seen.insert(*u) {
                    return Err(Error::Overlap(alloc::format!("user #{}", u.0)));
                }
            }
        }
        Ok(Self { classes })
    }

    /// Builds a partition from per-user labels.
    pub fn from_labels(
        num_classes: usize,
        labels: impl IntoIterator<Item = (UserId, Option<usize>)>,
    ) -> Self {
        let mut p = Self::empty(num_classes);
        for (u, c) in labels {
            if let Some(c) = c {
                p.classes[c].insert(u);
            }
        }
        p
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn members(&self, class: usize) -> &BTreeSet<UserId> {
        &self.classes[class]
    }

    pub fn sets(&self) -> &[BTreeSet<UserId>] {
        &self.classes
    }

    pub fn class_of(&self, user: UserId) -> Option<usize> {
        self.classes.iter().position(|s| s.contains(&user))
    }

    /// Union of all class sets.
    pub fn assigned(&self) -> BTreeSet<UserId> {
        self.classes.iter().flatten().copied().collect()
    }

    pub fn assigned_count(&self) -> usize {
        self.classes.iter().map(BTreeSet::len).sum()
    }

    /// Keeps only users for which `keep` holds.
    pub fn retain(&self, mut keep: impl FnMut(UserId) -> bool) -> Self {
        Self {
            classes: self
                .classes
                .iter()
                .map(|s| s.iter().copied().filter(|&u| keep(u)).collect())
                .collect(),
        }
    }

    /// Per-user labels, dense over `num_users`.
    pub fn labels(&self, num_users: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; num_users];
        for (c, set) in self.classes.iter().enumerate() {
            for u in set {
                if u.index() < num_users {
                    out[u.index()] = Some(c);
                }
            }
        }
        out
    }
}

/// Maps each corpus hashtag to the class whose hashtag set contains it.
pub(crate) fn tag_classes(corpus: &Corpus, hashtags: &HashtagPartition) -> Vec<Option<usize>> {
    let mut lookup = vec![None; corpus.vocab().len()];
    for (c, set) in hashtags.sets().iter().enumerate() {
        for h in set {
            if let Some(t) = corpus.tag_id(h) {
                lookup[t.index()] = Some(c);
            }
        }
    }
    lookup
}

/// The single class a tweet is polarized to, if its class hashtags all
/// belong to exactly one class.
fn tweet_class(corpus: &Corpus, lookup: &[Option<usize>], tweet: usize) -> Option<usize> {
    let mut found = None;
    for tag in corpus.tweet_tags(tweet) {
        if let Some(c) = lookup[tag.index()] {
            match found {
                None => found = Some(c),
                Some(prev) if prev != c => return None,
                Some(_) => {}
            }
        }
    }
    found
}

fn polarized_counts(
    corpus: &Corpus,
    lookup: &[Option<usize>],
    num_classes: usize,
    user: UserId,
) -> Vec<usize> {
    let mut counts = vec![0usize; num_classes];
    for &t in corpus.tweets_of(user) {
        if let Some(c) = tweet_class(corpus, lookup, t) {
            counts[c] += 1;
        }
    }
    counts
}

/// `T_{u,c}` for every class: the user's tweets mentioning hashtags of `c`
/// and of no other class.
pub fn polarized_tweets(
    corpus: &Corpus,
    user: &str,
    hashtags: &HashtagPartition,
) -> Result<Vec<BTreeSet<usize>>> {
    let id = corpus
        .user_id(user)
        .ok_or_else(|| Error::UnknownUser(user.to_string()))?;
    let lookup = tag_classes(corpus, hashtags);
    let mut out = vec![BTreeSet::new(); hashtags.num_classes()];
    for &t in corpus.tweets_of(id) {
        if let Some(c) = tweet_class(corpus, &lookup, t) {
            out[c].insert(t);
        }
    }
    Ok(out)
}

/// The class `c` with `counts[c] > alpha * counts[c']` for every other `c'`.
pub fn dominant_class(counts: &[usize], alpha: f64) -> Option<usize> {
    let (best, &top) = counts.iter().enumerate().max_by_key(|&(_, n)| *n)?;
    let dominates = counts
        .iter()
        .enumerate()
        .all(|(c, &n)| c == best || top as f64 > alpha * n as f64);
    dominates.then_some(best)
}

fn classify_one(
    corpus: &Corpus,
    lookup: &[Option<usize>],
    previous: &[Option<usize>],
    num_classes: usize,
    alpha: f64,
    user: UserId,
) -> Option<usize> {
    let counts = polarized_counts(corpus, lookup, num_classes, user);
    dominant_class(&counts, alpha).or(previous.get(user.index()).copied().flatten())
}

/// Assigns every corpus user to the class whose polarized tweet count
/// strictly dominates all others by factor `alpha`; users without a
/// dominant class keep their class in `previous`, if any.
pub fn users_class(
    corpus: &Corpus,
    hashtags: &HashtagPartition,
    previous: &UserPartition,
    alpha: f64,
) -> UserPartition {
    let k = hashtags.num_classes();
    let lookup = tag_classes(corpus, hashtags);
    let prev = previous.labels(corpus.num_users());

    #[cfg(feature = "parallel")]
    let labels: Vec<Option<usize>> = {
        use rayon::prelude::*;
        (0..corpus.num_users() as u32)
            .into_par_iter()
            .map(|u| classify_one(corpus, &lookup, &prev, k, alpha, UserId(u)))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let labels: Vec<Option<usize>> = corpus
        .user_ids()
        .map(|u| classify_one(corpus, &lookup, &prev, k, alpha, u))
        .collect();

    UserPartition::from_labels(
        k,
        labels
            .into_iter()
            .enumerate()
            .map(|(u, c)| (UserId(u as u32), c)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::TweetRecord;
    use alloc::string::String;

    fn corpus(tweets: &[(&str, &[&str])]) -> Corpus {
        Corpus::new(
            tweets
                .iter()
                .enumerate()
                .map(|(i, (u, tags))| {
                    TweetRecord::new(alloc::format!("t{}", i + 1), *u, 0, tags.iter().copied())
                        .unwrap()
                })
                .collect(),
        )
        .unwrap()
    }

    fn hp(a: &[&str], b: &[&str]) -> HashtagPartition {
        HashtagPartition::from_sets(vec![
            a.iter().map(|s| String::from(*s)).collect(),
            b.iter().map(|s| String::from(*s)).collect(),
        ])
        .unwrap()
    }

    #[test]
    fn clean_split() {
        let c = corpus(&[("u", &["a1"]), ("u", &["b1"])]);
        let t = polarized_tweets(&c, "u", &hp(&["a1"], &["b1"])).unwrap();
        assert_eq!(t[0].iter().copied().collect::<Vec<_>>(), vec![0]);
        assert_eq!(t[1].iter().copied().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn cross_class_tweet_discarded() {
        let c = corpus(&[("u", &["a1", "b1"])]);
        let t = polarized_tweets(&c, "u", &hp(&["a1"], &["b1"])).unwrap();
        assert!(t[0].is_empty() && t[1].is_empty());
    }

    #[test]
    fn noise_hashtags_ignored() {
        let c = corpus(&[("u", &["a1", "noise"])]);
        let t = polarized_tweets(&c, "u", &hp(&["a1"], &["b1"])).unwrap();
        assert_eq!(t[0].len(), 1);
        assert!(polarized_tweets(&c, "ghost", &hp(&["a1"], &["b1"])).is_err());
    }

    #[test]
    fn dominance_is_strict() {
        assert_eq!(dominant_class(&[3, 1], 2.0), Some(0));
        assert_eq!(dominant_class(&[2, 1], 2.0), None);
        assert_eq!(dominant_class(&[1, 0], 2.0), Some(0));
        assert_eq!(dominant_class(&[0, 0], 2.0), None);
        assert_eq!(dominant_class(&[0, 0, 5], 2.0), Some(2));
        assert_eq!(dominant_class(&[4, 4, 0], 1.5), None);
        assert_eq!(dominant_class(&[], 2.0), None);
    }

    #[test]
    fn backup_keeps_previous_class() {
        let c = corpus(&[
            ("u", &["a1"]),
            ("u", &["a1"]),
            ("u", &["b1"]),
            ("v", &["a1"]),
        ]);
        let h = hp(&["a1"], &["b1"]);
        let u = c.user_id("u").unwrap();
        let v = c.user_id("v").unwrap();
        let prev =
            UserPartition::from_sets(vec![BTreeSet::new(), [u].into_iter().collect()]).unwrap();
        let out = users_class(&c, &h, &prev, 2.0);
        assert_eq!(out.class_of(u), Some(1));
        assert_eq!(out.class_of(v), Some(0));

        let out = users_class(&c, &h, &UserPartition::empty(2), 2.0);
        assert_eq!(out.class_of(u), None);
    }

    #[test]
    fn dominance_beats_previous() {
        let c = corpus(&[
            ("u", &["a1"]),
            ("u", &["a1"]),
            ("u", &["a1"]),
            ("u", &["b1"]),
        ]);
        let u = c.user_id("u").unwrap();
        let prev =
            UserPartition::from_sets(vec![BTreeSet::new(), [u].into_iter().collect()]).unwrap();
        let out = users_class(&c, &hp(&["a1"], &["b1"]), &prev, 2.0);
        assert_eq!(out.class_of(u), Some(0));
    }

    #[test]
    fn hashtag_free_users_never_assigned() {
        let c = corpus(&[("u", &[]), ("v", &["other"])]);
        let out = users_class(&c, &hp(&["a1"], &["b1"]), &UserPartition::empty(2), 2.0);
        assert_eq!(out.assigned_count(), 0);
    }

    #[test]
    fn overlapping_sets_rejected() {
        let s: BTreeSet<UserId> = [UserId(0)].into_iter().collect();
        assert!(UserPartition::from_sets(vec![s.clone(), s]).is_err());
    }
}
