//! Deterministic planted-polarization corpus generator.
//!
//! Every random draw comes from a ChaCha stream keyed by
//! `(seed, user, day)`, so the output does not depend on generation order.
//!
//! Class `c` owns the vocabulary `p{c}_00 .. p{c}_NN` with Zipf weights, so
//! `p{c}_00` is its most frequent hashtag and serves as the seed. Its
//! golden hashtag is `ivote_p{c}`. Shared hashtags are `s000 ..`.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::distr::weighted::WeightedIndex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use crate::classify::UserPartition;
use crate::config::ClassConfig;
use crate::corpus::{Corpus, TweetRecord};
use crate::error::{Error, Result};

/// Share of a polarized user's hashtags drawn from the own class vocabulary
/// (the rest come from the shared vocabulary).
const OWN_SHARE: f64 = 0.6;
/// Share of a neutral user's hashtags naming some class seed.
const NEUTRAL_SEED_SHARE: f64 = 0.2;
/// Share of a neutral user's hashtags drawn from some class vocabulary.
const NEUTRAL_CLASS_SHARE: f64 = 0.1;
/// Hashtag-assignment margin of the emitted class config. With a perfectly
/// symmetric shared vocabulary and `beta = 1`, shared hashtags are handed to
/// whichever class currently has the smallest candidate tweet set, which
/// flips every iteration.
pub const SYNTH_BETA: f64 = 1.5;
/// Weights of 0, 1, 2 and 3 hashtags per tweet.
const TAGS_PER_TWEET: [f64; 4] = [0.15, 0.45, 0.25, 0.15];
/// Stream domains: daily activity, golden-day choice, golden tweet.
const DAILY: u64 = 0;
const GOLDEN_DAY: u64 = 1;
const GOLDEN_TWEET: u64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub seed: u64,
    pub classes: usize,
    pub users_per_class: usize,
    pub neutral_users: usize,
    pub days: u32,
    /// Mean of the per-user, per-day Poisson tweet count.
    pub tweets_per_user_per_day: f64,
    pub class_vocab_size: usize,
    pub shared_vocab_size: usize,
    pub leak_prob: f64,
    pub golden_frac: f64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            classes: 3,
            users_per_class: 300,
            neutral_users: 400,
            days: 9,
            tweets_per_user_per_day: 0.8,
            class_vocab_size: 30,
            shared_vocab_size: 200,
            leak_prob: 0.05,
            golden_frac: 0.1,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("classes", self.classes),
            ("users_per_class", self.users_per_class),
            ("days", self.days as usize),
            ("class_vocab_size", self.class_vocab_size),
            ("shared_vocab_size", self.shared_vocab_size),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.days >= 1 << 28 {
            return Err(Error::Config("days must be below 2^28".into()));
        }
        if self.classes < 2 {
            return Err(Error::Config("classes must be at least 2".into()));
        }
        if !(self.tweets_per_user_per_day.is_finite() && self.tweets_per_user_per_day > 0.0) {
            return Err(Error::Config(
                "tweets_per_user_per_day must be a positive real".into(),
            ));
        }
        for (name, p) in [
            ("leak_prob", self.leak_prob),
            ("golden_frac", self.golden_frac),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1]")));
            }
        }
        Ok(())
    }

    pub fn num_users(&self) -> usize {
        self.classes * self.users_per_class + self.neutral_users
    }

    /// Golden users per class: the first `round(golden_frac * users_per_class)`.
    pub fn golden_per_class(&self) -> usize {
        libm::round(self.golden_frac * self.users_per_class as f64) as usize
    }
}

pub fn class_name(c: usize) -> String {
    format!("p{c}")
}

pub fn class_hashtag(c: usize, j: usize) -> String {
    format!("p{c}_{j:02}")
}

pub fn seed_hashtag(c: usize) -> String {
    class_hashtag(c, 0)
}

pub fn golden_hashtag(c: usize) -> String {
    format!("ivote_p{c}")
}

pub fn shared_hashtag(j: usize) -> String {
    format!("s{j:03}")
}

pub fn user_name(i: usize) -> String {
    format!("u{i:05}")
}

/// A generated corpus with its planted classes.
#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    pub corpus: Corpus,
    /// Planted class of every polarized user; neutral users are unassigned.
    pub truth: UserPartition,
    /// Seeds `p{c}_00`, golden `ivote_p{c}`, `top_k = class_vocab_size`,
    /// `beta = SYNTH_BETA`, other parameters at their defaults.
    pub class_config: ClassConfig,
}

struct Sampler {
    classes: usize,
    leak_prob: f64,
    class_vocab: WeightedIndex<f64>,
    shared_vocab: WeightedIndex<f64>,
    tags_per_tweet: WeightedIndex<f64>,
    activity: Poisson<f64>,
}

impl Sampler {
    fn new(cfg: &SynthConfig) -> Self {
        let zipf = |n: usize| {
            WeightedIndex::new((1..=n).map(|r| 1.0 / r as f64)).expect("non-empty vocabulary")
        };
        Self {
            classes: cfg.classes,
            leak_prob: cfg.leak_prob,
            class_vocab: zipf(cfg.class_vocab_size),
            shared_vocab: zipf(cfg.shared_vocab_size),
            tags_per_tweet: WeightedIndex::new(TAGS_PER_TWEET).expect("valid weights"),
            activity: Poisson::new(cfg.tweets_per_user_per_day).expect("validated rate"),
        }
    }

    fn other_class(&self, rng: &mut ChaCha8Rng, own: usize) -> usize {
        let k = rng.random_range(0..self.classes - 1);
        if k >= own {
            k + 1
        } else {
            k
        }
    }

    fn polarized_tag(&self, rng: &mut ChaCha8Rng, own: usize) -> String {
        if rng.random_bool(OWN_SHARE) {
            class_hashtag(own, self.class_vocab.sample(rng))
        } else {
            shared_hashtag(self.shared_vocab.sample(rng))
        }
    }

    fn leaked_tag(&self, rng: &mut ChaCha8Rng, own: usize) -> String {
        let other = self.other_class(rng, own);
        class_hashtag(other, self.class_vocab.sample(rng))
    }

    fn neutral_tag(&self, rng: &mut ChaCha8Rng) -> String {
        let r: f64 = rng.random();
        if r < NEUTRAL_SEED_SHARE {
            seed_hashtag(rng.random_range(0..self.classes))
        } else if r < NEUTRAL_SEED_SHARE + NEUTRAL_CLASS_SHARE {
            let c = rng.random_range(0..self.classes);
            class_hashtag(c, self.class_vocab.sample(rng))
        } else {
            shared_hashtag(self.shared_vocab.sample(rng))
        }
    }

    /// A polarized tweet with at least one hashtag leaks with probability
    /// `leak_prob`: one of its hashtags comes from another class.
    fn tweet(&self, rng: &mut ChaCha8Rng, class: Option<usize>) -> BTreeSet<String> {
        let n = self.tags_per_tweet.sample(rng);
        match class {
            Some(c) => {
                let leak = n > 0 && rng.random_bool(self.leak_prob);
                let mut tags: BTreeSet<String> = (0..n - usize::from(leak))
                    .map(|_| self.polarized_tag(rng, c))
                    .collect();
                if leak {
                    tags.insert(self.leaked_tag(rng, c));
                }
                tags
            }
            None => (0..n).map(|_| self.neutral_tag(rng)).collect(),
        }
    }
}

fn stream(cfg: &SynthConfig, domain: u64, user: usize, day: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream((domain << 60) | ((user as u64) << 28) | day as u64);
    rng
}

/// Generates the corpus. Records are ordered by day, then user.
pub fn generate(cfg: &SynthConfig) -> Result<Synthetic> {
    cfg.validate()?;
    let sampler = Sampler::new(cfg);
    let n_users = cfg.num_users();
    let polarized = cfg.classes * cfg.users_per_class;
    let class_of = |u: usize| (u < polarized).then(|| u / cfg.users_per_class);
    let golden_per_class = cfg.golden_per_class();
    let golden_day = |u: usize| -> Option<u32> {
        let c = class_of(u)?;
        if u - c * cfg.users_per_class < golden_per_class {
            let mut rng = stream(cfg, GOLDEN_DAY, u, 0);
            Some(rng.random_range(0..cfg.days))
        } else {
            None
        }
    };

    let mut records = Vec::new();
    for day in 0..cfg.days {
        for u in 0..n_users {
            let class = class_of(u);
            let name = user_name(u);
            let mut rng = stream(cfg, DAILY, u, day);
            let n = sampler.activity.sample(&mut rng) as usize;
            for j in 0..n {
                records.push(TweetRecord {
                    tweet_id: format!("{name}-{day}-{j}"),
                    user_id: name.clone(),
                    day,
                    hashtags: sampler.tweet(&mut rng, class),
                });
            }
            if golden_day(u) == Some(day) {
                let c = class.expect("golden users are polarized");
                let mut rng = stream(cfg, GOLDEN_TWEET, u, day);
                let mut hashtags = BTreeSet::new();
                hashtags.insert(golden_hashtag(c));
                hashtags.insert(sampler.polarized_tag(&mut rng, c));
                records.push(TweetRecord {
                    tweet_id: format!("{name}-{day}-g"),
                    user_id: name.clone(),
                    day,
                    hashtags,
                });
            }
        }
    }

    let corpus = Corpus::new(records)?;
    let truth = UserPartition::from_labels(
        cfg.classes,
        (0..polarized).filter_map(|u| Some((corpus.user_id(&user_name(u))?, class_of(u)))),
    );
    let class_config = ClassConfig::builder(
        (0..cfg.classes).map(|c| (class_name(c), [seed_hashtag(c)], [golden_hashtag(c)])),
    )
    .top_k(cfg.class_vocab_size)
    .beta(SYNTH_BETA)
    .build()?;
    Ok(Synthetic {
        corpus,
        truth,
        class_config,
    })
}
