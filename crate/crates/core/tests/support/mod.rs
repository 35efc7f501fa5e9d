//! Brute-force reference implementations working directly on string-keyed
//! records, plus a generator of small random instances.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use polartrack_core::TweetRecord;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A tweet as the oracle sees it.
#[derive(Debug, Clone)]
pub struct Tweet {
    pub id: String,
    pub user: String,
    pub tags: BTreeSet<String>,
}

pub fn tweets(records: &[TweetRecord]) -> Vec<Tweet> {
    records
        .iter()
        .map(|r| Tweet {
            id: r.tweet_id.clone(),
            user: r.user_id.clone(),
            tags: r.hashtags.clone(),
        })
        .collect()
}

/// Users labeled by the rule: count the tweets whose class hashtags all
/// come from one class, then require `count[c] > alpha * count[c']` for
/// every other class; otherwise fall back to `previous`.
pub fn users_class(
    tweets: &[Tweet],
    hashtags: &[BTreeSet<String>],
    previous: &BTreeMap<String, usize>,
    alpha: f64,
) -> BTreeMap<String, usize> {
    let k = hashtags.len();
    let users: BTreeSet<&String> = tweets.iter().map(|t| &t.user).collect();
    let mut out = BTreeMap::new();
    for u in users {
        let mut count = vec![0usize; k];
        for t in tweets.iter().filter(|t| &t.user == u) {
            let touched: Vec<usize> = (0..k)
                .filter(|&c| !t.tags.is_disjoint(&hashtags[c]))
                .collect();
            if touched.len() == 1 {
                count[touched[0]] += 1;
            }
        }
        let winner =
            (0..k).find(|&c| (0..k).all(|o| o == c || count[c] as f64 > alpha * count[o] as f64));
        if let Some(c) = winner.or_else(|| previous.get(u).copied()) {
            out.insert(u.clone(), c);
        }
    }
    out
}

/// Top-k hashtags over a tweet subset, by tweet count then name.
pub fn top_k(tweets: &[&Tweet], k: usize) -> Vec<String> {
    let mut counts: BTreeMap<&String, usize> = BTreeMap::new();
    for t in tweets {
        for h in &t.tags {
            *counts.entry(h).or_default() += 1;
        }
    }
    let mut ranked: Vec<(&String, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
    ranked.into_iter().take(k).map(|(h, _)| h.clone()).collect()
}

pub fn candidates(
    tweets: &[Tweet],
    users: &BTreeMap<String, usize>,
    k: usize,
    top: usize,
) -> Vec<BTreeSet<String>> {
    (0..k)
        .map(|c| {
            let own: Vec<&Tweet> = tweets
                .iter()
                .filter(|t| users.get(&t.user) == Some(&c))
                .collect();
            top_k(&own, top).into_iter().collect()
        })
        .collect()
}

fn ids_with_any(tweets: &[Tweet], tags: &BTreeSet<String>) -> BTreeSet<String> {
    tweets
        .iter()
        .filter(|t| !t.tags.is_disjoint(tags))
        .map(|t| t.id.clone())
        .collect()
}

/// Per-class score of `h` against the candidate sets, from explicit set
/// intersections.
pub fn score(tweets: &[Tweet], h: &str, candidates: &[BTreeSet<String>]) -> Vec<f64> {
    let t_h: BTreeSet<String> = tweets
        .iter()
        .filter(|t| t.tags.contains(h))
        .map(|t| t.id.clone())
        .collect();
    let frac: Vec<Option<f64>> = candidates
        .iter()
        .map(|set| {
            let t_set = ids_with_any(tweets, set);
            if t_set.is_empty() {
                None
            } else {
                Some(t_h.intersection(&t_set).count() as f64 / t_set.len() as f64)
            }
        })
        .collect();
    (0..candidates.len())
        .map(|c| match frac[c] {
            None => 0.0,
            Some(own) => {
                let mut s = own;
                for (o, f) in frac.iter().enumerate() {
                    if o != c {
                        s *= match f {
                            Some(f) => 1.0 - f,
                            None => 1.0,
                        };
                    }
                }
                s
            }
        })
        .collect()
}

/// Scores of every non-seed candidate, then the beta assignment; seeds are
/// always kept in their class.
pub fn hashtags_class(
    tweets: &[Tweet],
    users: &BTreeMap<String, usize>,
    seeds: &[BTreeSet<String>],
    top: usize,
    beta: f64,
) -> (Vec<BTreeSet<String>>, BTreeMap<String, Vec<f64>>) {
    let k = seeds.len();
    let cands = candidates(tweets, users, k, top);
    let all_seeds: BTreeSet<&String> = seeds.iter().flatten().collect();
    let mut out: Vec<BTreeSet<String>> = seeds.to_vec();
    let mut scores = BTreeMap::new();
    for h in cands.iter().flatten() {
        if all_seeds.contains(h) || scores.contains_key(h) {
            continue;
        }
        let s = score(tweets, h, &cands);
        for c in 0..k {
            if (0..k).all(|o| o == c || s[c] > beta * s[o]) {
                out[c].insert(h.clone());
            }
        }
        scores.insert(h.clone(), s);
    }
    (out, scores)
}

/// A small instance: at most 40 tweets, 12 users, 10 hashtags, 2 or 3
/// classes.
#[derive(Debug, Clone)]
pub struct Instance {
    pub records: Vec<TweetRecord>,
    pub classes: usize,
    /// Seed `h{c}` for each class.
    pub seeds: Vec<BTreeSet<String>>,
    /// A hashtag partition to classify users against.
    pub hashtags: Vec<BTreeSet<String>>,
    /// A previous user labeling.
    pub previous: BTreeMap<String, usize>,
    pub alpha: f64,
    pub beta: f64,
    pub top_k: usize,
}

pub fn instance(seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes = rng.random_range(2..=3);
    let n_tags = rng.random_range(classes..=10);
    let n_users = rng.random_range(1..=12);
    let n_tweets = rng.random_range(0..=40);
    let tag = |i: usize| format!("h{i}");
    let user = |i: usize| format!("u{i}");

    let records: Vec<TweetRecord> = (0..n_tweets)
        .map(|i| {
            let n = rng.random_range(0..=3);
            let tags: Vec<String> = (0..n).map(|_| tag(rng.random_range(0..n_tags))).collect();
            TweetRecord::new(format!("t{i}"), user(rng.random_range(0..n_users)), 0, tags).unwrap()
        })
        .collect();

    let seeds: Vec<BTreeSet<String>> = (0..classes).map(|c| BTreeSet::from([tag(c)])).collect();
    let mut hashtags = seeds.clone();
    for i in classes..n_tags {
        let c = rng.random_range(0..=classes);
        if c < classes {
            hashtags[c].insert(tag(i));
        }
    }
    let previous = (0..n_users)
        .filter_map(|u| {
            let c = rng.random_range(0..=classes);
            (c < classes).then(|| (user(u), c))
        })
        .collect();
    let alpha = [1.5, 2.0, 3.0][rng.random_range(0..3)];
    let beta = [1.0, 1.0, 1.5, 2.0][rng.random_range(0..4)];
    let top_k = rng.random_range(1..=10);
    Instance {
        records,
        classes,
        seeds,
        hashtags,
        previous,
        alpha,
        beta,
        top_k,
    }
}
