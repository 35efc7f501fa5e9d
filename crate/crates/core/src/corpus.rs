//! Tweet records and the indexed, immutable corpus.
//!
//! Users and hashtags are interned into dense ids. Both symbol tables are
//! kept sorted, so id order equals lexicographic order of the symbol; the
//! top-k tie-break relies on this.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::config::ClassConfig;
use crate::error::{Error, Result};

/// Dense index of a user in a corpus user table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(pub u32);

/// Dense index of a hashtag in a corpus vocabulary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TagId(pub u32);

impl UserId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl TagId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Lowercases a raw hashtag and strips one leading `#`.
///
/// Lowercasing follows Rust's `str::to_lowercase` (Unicode default case
/// mapping). Returns `None` when nothing is left.
pub fn normalize_hashtag(raw: &str) -> Option<String> {
    let trimmed = raw.trim();
    let bare = trimmed.strip_prefix('#').unwrap_or(trimmed);
    if bare.is_empty() {
        None
    } else {
        Some(bare.to_lowercase())
    }
}

/// One message of the stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweetRecord {
    pub tweet_id: String,
    pub user_id: String,
    pub day: u32,
    pub hashtags: BTreeSet<String>,
}

impl TweetRecord {
    /// Builds a record, normalizing every raw hashtag.
    pub fn new<I, S>(
        tweet_id: impl Into<String>,
        user_id: impl Into<String>,
        day: u32,
        raw: I,
    ) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut hashtags = BTreeSet::new();
        for h in raw {
            let h = h.as_ref();
            let norm = normalize_hashtag(h).ok_or_else(|| Error::EmptyHashtag(h.to_string()))?;
            hashtags.insert(norm);
        }
        Ok(Self {
            tweet_id: tweet_id.into(),
            user_id: user_id.into(),
            day,
            hashtags,
        })
    }
}

/// Immutable collection of tweets with per-user, per-hashtag and per-day
/// inverted indexes. Tweet indexes are positions in [`Corpus::records`].
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    records: Vec<TweetRecord>,
    users: Vec<String>,
    vocab: Vec<String>,
    tweet_user: Vec<UserId>,
    tweet_tags: Vec<Vec<TagId>>,
    by_user: Vec<Vec<usize>>,
    by_hashtag: Vec<Vec<usize>>,
    by_day: BTreeMap<u32, Vec<usize>>,
}

impl Corpus {
    /// Indexes `records`. Fails on a duplicate tweet id or a hashtag that
    /// is not in normalized form.
    pub fn new(records: Vec<TweetRecord>) -> Result<Self> {
        let users: BTreeSet<&str> = records.iter().map(|r| r.user_id.as_str()).collect();
        let users = users.into_iter().map(String::from).collect();
        Self::with_users(records, users)
    }

    pub fn empty() -> Self {
        Self::with_users(Vec::new(), Vec::new()).expect("empty corpus is valid")
    }

    /// `users` must be sorted, distinct, and cover every record's author.
    fn with_users(records: Vec<TweetRecord>, users: Vec<String>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &records {
            if !seen.insert(r.tweet_id.as_str()) {
                return Err(Error::DuplicateTweet(r.tweet_id.clone()));
            }
            for h in &r.hashtags {
                if normalize_hashtag(h).as_deref() != Some(h.as_str()) {
                    return Err(Error::EmptyHashtag(h.clone()));
                }
            }
        }
        drop(seen);

        let vocab: BTreeSet<&str> = records
            .iter()
            .flat_map(|r| r.hashtags.iter().map(String::as_str))
            .collect();
        let vocab: Vec<String> = vocab.into_iter().map(String::from).collect();

        let mut by_user = alloc::vec![Vec::new(); users.len()];
        let mut by_hashtag = alloc::vec![Vec::new(); vocab.len()];
        let mut by_day: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        let mut tweet_user = Vec::with_capacity(records.len());
        let mut tweet_tags = Vec::with_capacity(records.len());

        for (t, r) in records.iter().enumerate() {
            let u = users
                .binary_search_by(|x: &String| x.as_str().cmp(r.user_id.as_str()))
                .map_err(|_| Error::UnknownUser(r.user_id.clone()))?;
            by_user[u].push(t);
            tweet_user.push(UserId(u as u32));
            let tags: Vec<TagId> = r
                .hashtags
                .iter()
                .map(|h| {
                    let i = vocab
                        .binary_search_by(|x: &String| x.as_str().cmp(h.as_str()))
                        .expect("vocabulary built from records");
                    by_hashtag[i].push(t);
                    TagId(i as u32)
                })
                .collect();
            tweet_tags.push(tags);
            by_day.entry(r.day).or_default().push(t);
        }

        Ok(Self {
            records,
            users,
            vocab,
            tweet_user,
            tweet_tags,
            by_user,
            by_hashtag,
            by_day,
        })
    }

    /// New corpus holding the records that pass `keep`. The user table is
    /// carried over unchanged, so user ids stay valid across the two.
    pub fn subset(&self, mut keep: impl FnMut(&TweetRecord) -> bool) -> Self {
        let records = self.records.iter().filter(|r| keep(r)).cloned().collect();
        Self::with_users(records, self.users.clone()).expect("subset of a valid corpus")
    }

    /// Tweets written on `day`, over the full user table.
    pub fn restrict_to_day(&self, day: u32) -> Self {
        self.subset(|r| r.day == day)
    }

    /// Applies `f` to every record's hashtag set and re-indexes. User table
    /// and record order are preserved.
    pub fn map_hashtags(
        &self,
        mut f: impl FnMut(&BTreeSet<String>) -> BTreeSet<String>,
    ) -> Result<Self> {
        let records = self
            .records
            .iter()
            .map(|r| TweetRecord {
                hashtags: f(&r.hashtags),
                ..r.clone()
            })
            .collect();
        Self::with_users(records, self.users.clone())
    }

    pub fn records(&self) -> &[TweetRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// All user ids, sorted.
    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn user_ids(&self) -> impl ExactSizeIterator<Item = UserId> + '_ {
        (0..self.users.len() as u32).map(UserId)
    }

    pub fn user_id(&self, name: &str) -> Option<UserId> {
        self.users
            .binary_search_by(|x| x.as_str().cmp(name))
            .ok()
            .map(|i| UserId(i as u32))
    }

    pub fn user_name(&self, id: UserId) -> &str {
        &self.users[id.index()]
    }

    /// Distinct hashtags, sorted.
    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn tag_id(&self, hashtag: &str) -> Option<TagId> {
        self.vocab
            .binary_search_by(|x| x.as_str().cmp(hashtag))
            .ok()
            .map(|i| TagId(i as u32))
    }

    pub fn tag_name(&self, id: TagId) -> &str {
        &self.vocab[id.index()]
    }

    pub fn tweet_user(&self, tweet: usize) -> UserId {
        self.tweet_user[tweet]
    }

    /// Interned hashtags of a tweet, ascending.
    pub fn tweet_tags(&self, tweet: usize) -> &[TagId] {
        &self.tweet_tags[tweet]
    }

    /// `T_u`: tweets written by `user`.
    pub fn tweets_of(&self, user: UserId) -> &[usize] {
        &self.by_user[user.index()]
    }

    /// `T_h`: tweets mentioning `tag`.
    pub fn tweets_with(&self, tag: TagId) -> &[usize] {
        &self.by_hashtag[tag.index()]
    }

    pub fn tweets_with_hashtag(&self, hashtag: &str) -> &[usize] {
        match self.tag_id(hashtag) {
            Some(t) => self.tweets_with(t),
            None => &[],
        }
    }

    /// Tweet-level occurrence count.
    pub fn hashtag_freq(&self, hashtag: &str) -> usize {
        self.tweets_with_hashtag(hashtag).len()
    }

    pub fn days(&self) -> impl Iterator<Item = u32> + '_ {
        self.by_day.keys().copied()
    }

    pub fn tweets_on(&self, day: u32) -> &[usize] {
        self.by_day.get(&day).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `H_u`: union of the hashtags over the user's tweets.
    pub fn user_hashtags(&self, user: UserId) -> BTreeSet<TagId> {
        self.tweets_of(user)
            .iter()
            .flat_map(|&t| self.tweet_tags(t).iter().copied())
            .collect()
    }
}

/// Removes every golden hashtag of `config` from every record. Records left
/// without hashtags stay in the corpus.
pub fn strip_golden(corpus: &Corpus, config: &ClassConfig) -> Corpus {
    let golden: BTreeSet<&str> = config
        .golden_hashtags
        .iter()
        .flat_map(|g| g.iter().map(String::as_str))
        .collect();
    corpus
        .map_hashtags(|tags| {
            tags.iter()
                .filter(|h| !golden.contains(h.as_str()))
                .cloned()
                .collect()
        })
        .expect("removing hashtags keeps a corpus valid")
}

/// Interned top-k hashtags over `tweets`, descending by tweet-level count,
/// ties ascending by symbol.
pub fn top_tag_ids<I>(corpus: &Corpus, tweets: I, k: usize) -> Vec<TagId>
where
    I: IntoIterator<Item = usize>,
{
    let mut counts: BTreeMap<TagId, usize> = BTreeMap::new();
    for t in tweets {
        for &tag in corpus.tweet_tags(t) {
            *counts.entry(tag).or_insert(0) += 1;
        }
    }
    let mut ranked: Vec<(TagId, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    ranked.truncate(k);
    ranked.into_iter().map(|(tag, _)| tag).collect()
}

/// The `k` most frequent hashtags over the given tweet subset.
pub fn top_hashtags<I>(corpus: &Corpus, tweets: I, k: usize) -> Vec<String>
where
    I: IntoIterator<Item = usize>,
{
    top_tag_ids(corpus, tweets, k)
        .into_iter()
        .map(|t| corpus.tag_name(t).to_string())
        .collect()
}
