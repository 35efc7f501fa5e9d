//! Seeded k-means over L2-normalized user hashtag-frequency vectors.
//!
//! Feature dimensions are the corpus-wide top-k hashtags. Each class
//! centroid starts as the one-hot vector of the class's designated seed,
//! so runs are fully deterministic.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::classify::UserPartition;
use crate::config::ClassConfig;
use crate::corpus::{top_tag_ids, Corpus, UserId};
use crate::error::{Error, Result};

pub const MAX_ROUNDS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct UserVector {
    pub user: UserId,
    pub features: Vec<f64>,
}

/// Hashtag of each dimension, and the inverse map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureIndex {
    dims: Vec<String>,
    index: BTreeMap<String, usize>,
}

impl FeatureIndex {
    pub fn new(dims: Vec<String>) -> Self {
        let index = dims
            .iter()
            .enumerate()
            .map(|(i, h)| (h.clone(), i))
            .collect();
        Self { dims, index }
    }

    pub fn dim(&self, hashtag: &str) -> Option<usize> {
        self.index.get(hashtag).copied()
    }

    pub fn hashtags(&self) -> &[String] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }
}

/// One vector per user with at least one top-k hashtag: the per-dimension
/// count of the user's tweets carrying that hashtag, scaled to unit norm.
pub fn build_vectors(corpus: &Corpus, k: usize) -> (Vec<UserVector>, FeatureIndex) {
    let top = top_tag_ids(corpus, 0..corpus.len(), k);
    let mut dim_of = vec![None; corpus.vocab().len()];
    for (d, t) in top.iter().enumerate() {
        dim_of[t.index()] = Some(d);
    }
    let features = FeatureIndex::new(
        top.iter()
            .map(|&t| corpus.tag_name(t).to_string())
            .collect(),
    );

    let vectors = corpus
        .user_ids()
        .filter_map(|u| {
            let mut v = vec![0.0; top.len()];
            for &t in corpus.tweets_of(u) {
                for tag in corpus.tweet_tags(t) {
                    if let Some(d) = dim_of[tag.index()] {
                        v[d] += 1.0;
                    }
                }
            }
            let norm = libm::sqrt(v.iter().map(|x| x * x).sum::<f64>());
            if norm == 0.0 {
                return None;
            }
            v.iter_mut().for_each(|x| *x /= norm);
            Some(UserVector {
                user: u,
                features: v,
            })
        })
        .collect();
    (vectors, features)
}

#[derive(Debug, Clone, PartialEq)]
pub struct KMeansOutcome {
    pub partition: UserPartition,
    /// Round that produced the final assignment.
    pub rounds: usize,
    pub converged: bool,
    /// Within-cluster sum of squares after each assignment step, measured
    /// against the centroids used for that step.
    pub wcss: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid; ties go to the lower class index.
fn nearest(v: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, sq_dist(v, &centroids[0]));
    for (c, centroid) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(v, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

fn assign(vectors: &[UserVector], centroids: &[Vec<f64>]) -> Vec<(usize, f64)> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        vectors
            .par_iter()
            .map(|v| nearest(&v.features, centroids))
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        vectors
            .iter()
            .map(|v| nearest(&v.features, centroids))
            .collect()
    }
}

fn update(vectors: &[UserVector], labels: &[usize], centroids: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mean_of = |c: usize| {
        let mut sum = vec![0.0; centroids[c].len()];
        let mut n = 0usize;
        for (v, _) in vectors.iter().zip(labels).filter(|(_, &l)| l == c) {
            sum.iter_mut().zip(&v.features).for_each(|(s, x)| *s += x);
            n += 1;
        }
        if n == 0 {
            centroids[c].clone()
        } else {
            sum.iter_mut().for_each(|s| *s /= n as f64);
            sum
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..centroids.len()).into_par_iter().map(mean_of).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..centroids.len()).map(mean_of).collect()
    }
}

/// Lloyd iterations from one-hot seed centroids until the assignment stops
/// changing or [`MAX_ROUNDS`] is reached. Every vectorized user ends up in
/// exactly one class.
pub fn seeded_kmeans(
    vectors: &[UserVector],
    features: &FeatureIndex,
    config: &ClassConfig,
) -> Result<KMeansOutcome> {
    let k = config.num_classes();
    let mut centroids = Vec::with_capacity(k);
    for c in 0..k {
        let seed = config.designated_seed(c);
        let d = features.dim(seed).ok_or_else(|| Error::SeedNotInFeatures {
            class: config.classes[c].clone(),
            hashtag: seed.to_string(),
        })?;
        let mut centroid = vec![0.0; features.len()];
        centroid[d] = 1.0;
        centroids.push(centroid);
    }

    let mut labels: Option<Vec<usize>> = None;
    let mut wcss = Vec::new();
    let mut rounds = 0;
    let mut converged = false;
    for round in 1..=MAX_ROUNDS {
        let step = assign(vectors, &centroids);
        wcss.push(step.iter().map(|&(_, d)| d).sum());
        let next: Vec<usize> = step.into_iter().map(|(c, _)| c).collect();
        if labels.as_ref() == Some(&next) {
            converged = true;
            break;
        }
        centroids = update(vectors, &next, &centroids);
        labels = Some(next);
        rounds = round;
    }

    let labels = labels.unwrap_or_default();
    let partition = UserPartition::from_labels(
        k,
        vectors.iter().zip(labels).map(|(v, c)| (v.user, Some(c))),
    );
    Ok(KMeansOutcome {
        partition,
        rounds,
        converged,
        wcss,
    })
}
