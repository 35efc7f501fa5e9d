use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::corpus::normalize_hashtag;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 2.0;
pub const DEFAULT_BETA: f64 = 1.0;
pub const DEFAULT_TOP_K: usize = 500;
pub const DEFAULT_MAX_ITERATIONS: usize = 10;

/// How the golden set is derived from the golden hashtags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GoldenRule {
    /// A user belongs to `Z_c` iff some tweet carries a golden hashtag of `c`
    /// and no tweet carries a golden hashtag of another class.
    #[default]
    Exclusive,
    /// User classification with the golden hashtags as class hashtags, the
    /// configured `alpha`, and no previous partition.
    Dominance,
}

/// Classes, seed and golden hashtags, and the algorithm parameters.
///
/// Per-class vectors are indexed by class position in `classes`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassConfig {
    pub classes: Vec<String>,
    pub seed_hashtags: Vec<BTreeSet<String>>,
    pub golden_hashtags: Vec<BTreeSet<String>>,
    pub alpha: f64,
    pub beta: f64,
    pub top_k: usize,
    pub max_iterations: usize,
    pub golden_rule: GoldenRule,
}

impl ClassConfig {
    /// Builds a config with default parameters. Hashtags are normalized;
    /// the result is validated.
    pub fn builder<C, S, G>(classes: C) -> ClassConfigBuilder
    where
        C: IntoIterator<Item = (S, G, G)>,
        S: Into<String>,
        G: IntoIterator,
        G::Item: AsRef<str>,
    {
        let mut b = ClassConfigBuilder::default();
        for (name, seeds, golden) in classes {
            b.classes.push(name.into());
            b.seeds.push(
                seeds
                    .into_iter()
                    .map(|s| String::from(s.as_ref()))
                    .collect(),
            );
            b.golden.push(
                golden
                    .into_iter()
                    .map(|s| String::from(s.as_ref()))
                    .collect(),
            );
        }
        b
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c == name)
    }

    /// The seed used for the k-means centroid: the lexicographically first
    /// seed of the class.
    pub fn designated_seed(&self, class: usize) -> &str {
        self.seed_hashtags[class]
            .iter()
            .next()
            .map(String::as_str)
            .unwrap_or("")
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.classes.len();
        if n < 2 {
            return Err(Error::Config(format!("need at least 2 classes, got {n}")));
        }
        let distinct: BTreeSet<&String> = self.classes.iter().collect();
        if distinct.len() != n {
            return Err(Error::Config("class names must be distinct".into()));
        }
        if self.seed_hashtags.len() != n || self.golden_hashtags.len() != n {
            return Err(Error::Config(
                "every class needs seed and golden hashtags".into(),
            ));
        }
        if !(self.alpha.is_finite() && self.alpha > 1.0) {
            return Err(Error::Config(format!(
                "alpha must be a finite real > 1, got {}",
                self.alpha
            )));
        }
        if !(self.beta.is_finite() && self.beta >= 1.0) {
            return Err(Error::Config(format!(
                "beta must be a finite real >= 1, got {}",
                self.beta
            )));
        }
        if self.top_k == 0 {
            return Err(Error::Config("top_k must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }

        let mut owner: alloc::collections::BTreeMap<&str, (&str, usize)> = Default::default();
        for (kind, sets) in [
            ("seed", &self.seed_hashtags),
            ("golden", &self.golden_hashtags),
        ] {
            for (c, set) in sets.iter().enumerate() {
                if set.is_empty() {
                    return Err(Error::Config(format!(
                        "class `{}` has no {kind} hashtags",
                        self.classes[c]
                    )));
                }
                for h in set {
                    if normalize_hashtag(h).as_deref() != Some(h.as_str()) {
                        return Err(Error::Config(format!(
                            "{kind} hashtag `{h}` is not normalized"
                        )));
                    }
                    if let Some((k, other)) = owner.insert(h, (kind, c)) {
                        return Err(Error::Config(format!(
                            "hashtag `{h}` is {kind} of `{}` and {k} of `{}`",
                            self.classes[c], self.classes[other]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
pub struct ClassConfigBuilder {
    classes: Vec<String>,
    seeds: Vec<Vec<String>>,
    golden: Vec<Vec<String>>,
    alpha: Option<f64>,
    beta: Option<f64>,
    top_k: Option<usize>,
    max_iterations: Option<usize>,
    golden_rule: GoldenRule,
}

impl ClassConfigBuilder {
    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn top_k(mut self, top_k: usize) -> Self {
        self.top_k = Some(top_k);
        self
    }

    pub fn max_iterations(mut self, n: usize) -> Self {
        self.max_iterations = Some(n);
        self
    }

    pub fn golden_rule(mut self, rule: GoldenRule) -> Self {
        self.golden_rule = rule;
        self
    }

    pub fn build(self) -> Result<ClassConfig> {
        let norm = |sets: Vec<Vec<String>>| -> Result<Vec<BTreeSet<String>>> {
            sets.into_iter()
                .map(|set| {
                    set.iter()
                        .map(|h| normalize_hashtag(h).ok_or_else(|| Error::EmptyHashtag(h.clone())))
                        .collect()
                })
                .collect()
        };
        let config = ClassConfig {
            classes: self.classes,
            seed_hashtags: norm(self.seeds)?,
            golden_hashtags: norm(self.golden)?,
            alpha: self.alpha.unwrap_or(DEFAULT_ALPHA),
            beta: self.beta.unwrap_or(DEFAULT_BETA),
            top_k: self.top_k.unwrap_or(DEFAULT_TOP_K),
            max_iterations: self.max_iterations.unwrap_or(DEFAULT_MAX_ITERATIONS),
            golden_rule: self.golden_rule,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn two() -> ClassConfigBuilder {
        ClassConfig::builder(vec![
            ("pd", vec!["#PD"], vec!["ivotepd"]),
            ("m5s", vec!["m5s"], vec!["ivotem5s"]),
        ])
    }

    #[test]
    fn defaults_and_normalization() {
        let c = two().build().unwrap();
        assert_eq!(c.alpha, 2.0);
        assert_eq!(c.beta, 1.0);
        assert_eq!(c.top_k, 500);
        assert_eq!(c.max_iterations, 10);
        assert!(c.seed_hashtags[0].contains("pd"));
        assert_eq!(c.designated_seed(1), "m5s");
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(two().alpha(1.0).build().is_err());
        assert!(two().alpha(f64::NAN).build().is_err());
        assert!(two().beta(0.99).build().is_err());
        assert!(two().top_k(0).build().is_err());
        assert!(two().max_iterations(0).build().is_err());
        assert!(two().beta(1.0).alpha(1.01).build().is_ok());
    }

    #[test]
    fn rejects_overlapping_hashtags() {
        let c = ClassConfig::builder(vec![
            ("a", vec!["x"], vec!["g1"]),
            ("b", vec!["x"], vec!["g2"]),
        ])
        .build();
        assert!(c.is_err());
        let c = ClassConfig::builder(vec![
            ("a", vec!["x"], vec!["y"]),
            ("b", vec!["y"], vec!["g2"]),
        ])
        .build();
        assert!(c.is_err());
        let c = ClassConfig::builder(vec![
            ("a", vec!["x"], vec!["g"]),
            ("b", vec!["y"], vec!["g"]),
        ])
        .build();
        assert!(c.is_err());
    }

    #[test]
    fn rejects_degenerate_classes() {
        assert!(ClassConfig::builder(vec![("a", vec!["x"], vec!["g"])])
            .build()
            .is_err());
        assert!(ClassConfig::builder(vec![
            ("a", vec!["x"], vec!["g"]),
            ("a", vec!["y"], vec!["h"])
        ])
        .build()
        .is_err());
        let empty: Vec<&str> = vec![];
        assert!(ClassConfig::builder(vec![
            ("a", empty.clone(), vec!["g"]),
            ("b", vec!["y"], vec!["h"])
        ])
        .build()
        .is_err());
    }
}
