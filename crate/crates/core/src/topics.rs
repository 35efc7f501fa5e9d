//! Hashtag classification: candidate hashtags from each user class,
//! discriminativeness scores, and the beta-gated assignment.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::classify::UserPartition;
use crate::corpus::{top_tag_ids, Corpus, TagId};
use crate::error::{Error, Result};

/// Disjoint per-class hashtag sets (`H_c`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HashtagPartition {
    classes: Vec<BTreeSet<String>>,
}

impl HashtagPartition {
    pub fn empty(num_classes: usize) -> Self {
        Self {
            classes: vec![BTreeSet::new(); num_classes],
        }
    }

    pub fn from_sets(classes: Vec<BTreeSet<String>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for set in &classes {
            for h in set {
                if !seen.insert(h.as_str()) {
                    return Err(Error::Overlap(h.clone()));
                }
            }
        }
        Ok(Self { classes })
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn members(&self, class: usize) -> &BTreeSet<String> {
        &self.classes[class]
    }

    pub fn sets(&self) -> &[BTreeSet<String>] {
        &self.classes
    }

    pub fn class_of(&self, hashtag: &str) -> Option<usize> {
        self.classes.iter().position(|s| s.contains(hashtag))
    }

    pub fn len(&self) -> usize {
        self.classes.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Per-class `S_c(h)` of one hashtag.
#[derive(Debug, Clone, PartialEq)]
pub struct HashtagScore {
    pub hashtag: String,
    pub per_class: Vec<f64>,
}

impl HashtagScore {
    /// Class whose score beats `beta` times every other class's score.
    pub fn winner(&self, beta: f64) -> Option<usize> {
        let (best, &top) = self
            .per_class
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        self.per_class
            .iter()
            .enumerate()
            .all(|(c, &s)| c == best || top > beta * s)
            .then_some(best)
    }
}

/// Membership bitmap over corpus tweets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetSet {
    member: Vec<bool>,
    len: usize,
}

impl TweetSet {
    pub fn from_tweets(corpus_len: usize, tweets: impl IntoIterator<Item = usize>) -> Self {
        let mut member = vec![false; corpus_len];
        let mut len = 0;
        for t in tweets {
            if !member[t] {
                member[t] = true;
                len += 1;
            }
        }
        Self { member, len }
    }

    #[inline]
    pub fn contains(&self, tweet: usize) -> bool {
        self.member.get(tweet).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

fn class_tweets<'a>(
    corpus: &'a Corpus,
    users: &'a UserPartition,
    class: usize,
) -> impl Iterator<Item = usize> + 'a {
    users
        .members(class)
        .iter()
        .flat_map(move |&u| corpus.tweets_of(u).iter().copied())
}

fn candidate_ids(corpus: &Corpus, users: &UserPartition, top_k: usize) -> Vec<Vec<TagId>> {
    (0..users.num_classes())
        .map(|c| top_tag_ids(corpus, class_tweets(corpus, users, c), top_k))
        .collect()
}

/// `H*_c`: the `top_k` most frequent hashtags over all tweets of the users
/// in `U_c`.
pub fn candidate_sets(
    corpus: &Corpus,
    users: &UserPartition,
    top_k: usize,
) -> Vec<BTreeSet<String>> {
    candidate_ids(corpus, users, top_k)
        .into_iter()
        .map(|ids| {
            ids.into_iter()
                .map(|t| corpus.tag_name(t).to_string())
                .collect()
        })
        .collect()
}

/// `T_{H*_c}`: corpus tweets carrying at least one hashtag of the set.
pub fn candidate_tweet_set<'a>(
    corpus: &Corpus,
    candidates: impl IntoIterator<Item = &'a str>,
) -> TweetSet {
    let tweets = candidates
        .into_iter()
        .flat_map(|h| corpus.tweets_with_hashtag(h).iter().copied());
    TweetSet::from_tweets(corpus.len(), tweets)
}

pub fn candidate_tweet_sets(corpus: &Corpus, candidates: &[BTreeSet<String>]) -> Vec<TweetSet> {
    candidates
        .iter()
        .map(|set| candidate_tweet_set(corpus, set.iter().map(String::as_str)))
        .collect()
}

fn score_tweets(hashtag: &str, t_h: &[usize], sets: &[TweetSet]) -> HashtagScore {
    let frac: Vec<Option<f64>> = sets
        .iter()
        .map(|set| {
            if set.is_empty() {
                None
            } else {
                let hits = t_h.iter().filter(|&&t| set.contains(t)).count();
                Some(hits as f64 / set.len() as f64)
            }
        })
        .collect();
    let per_class = (0..sets.len())
        .map(|c| {
            let Some(own) = frac[c] else { return 0.0 };
            frac.iter()
                .enumerate()
                .filter(|&(o, _)| o != c)
                .fold(own, |acc, (_, f)| acc * f.map_or(1.0, |f| 1.0 - f))
        })
        .collect();
    HashtagScore {
        hashtag: hashtag.to_string(),
        per_class,
    }
}

/// `S_c(h)` for every class, given the precomputed `T_{H*_c}` sets.
///
/// A class with an empty tweet set scores 0 and contributes a factor of 1
/// to the other classes' products.
pub fn score(corpus: &Corpus, hashtag: &str, candidate_tweets: &[TweetSet]) -> HashtagScore {
    score_tweets(
        hashtag,
        corpus.tweets_with_hashtag(hashtag),
        candidate_tweets,
    )
}

/// Scores every non-seed candidate and assigns it to the class that wins
/// the beta comparison. Returns the new partition (seeds included) and the
/// scores in ascending hashtag order.
pub fn hashtags_class_scored(
    corpus: &Corpus,
    users: &UserPartition,
    seeds: &HashtagPartition,
    top_k: usize,
    beta: f64,
) -> (HashtagPartition, Vec<HashtagScore>) {
    let k = seeds.num_classes();
    let candidates = candidate_ids(corpus, users, top_k);
    let sets: Vec<TweetSet> = candidates
        .iter()
        .map(|ids| {
            let tweets = ids
                .iter()
                .flat_map(|&t| corpus.tweets_with(t).iter().copied());
            TweetSet::from_tweets(corpus.len(), tweets)
        })
        .collect();

    let pool: Vec<TagId> = candidates
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|&t| seeds.class_of(corpus.tag_name(t)).is_none())
        .collect();

    let score_one = |&t: &TagId| score_tweets(corpus.tag_name(t), corpus.tweets_with(t), &sets);
    #[cfg(feature = "parallel")]
    let scores: Vec<HashtagScore> = {
        use rayon::prelude::*;
        pool.par_iter().map(score_one).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let scores: Vec<HashtagScore> = pool.iter().map(score_one).collect();

    let mut classes: Vec<BTreeSet<String>> = seeds.sets().to_vec();
    classes.resize(k, BTreeSet::new());
    for s in &scores {
        if let Some(c) = s.winner(beta) {
            classes[c].insert(s.hashtag.clone());
        }
    }
    (HashtagPartition { classes }, scores)
}

/// New hashtag partition from the user partition: seeds plus every
/// candidate whose score for one class exceeds `beta` times its score for
/// every other class.
pub fn hashtags_class(
    corpus: &Corpus,
    users: &UserPartition,
    seeds: &HashtagPartition,
    top_k: usize,
    beta: f64,
) -> HashtagPartition {
    hashtags_class_scored(corpus, users, seeds, top_k, beta).0
}
