//! Polarized user and topic tracking on hashtag-annotated message streams.
//!
//! The core alternates two classification steps over a [`Corpus`]:
//! users are labeled from the class hashtags they use exclusively
//! ([`classify::users_class`]), then each class's hashtag set is rebuilt
//! from the hashtags that best discriminate its users
//! ([`topics::hashtags_class`]). [`driver::run_ptr`] iterates the pair to a
//! fixed point; [`driver::run_tptr`] runs one step per day.
//!
//! The crate is `no_std` and needs only `alloc`. The `parallel` feature
//! spreads per-user and per-hashtag work over rayon without changing any
//! result.
#![no_std]

extern crate alloc;

pub mod baseline;
pub mod classify;
pub mod config;
pub mod corpus;
pub mod driver;
pub mod error;
pub mod eval;
pub mod synth;
pub mod topics;

pub use classify::{users_class, UserPartition};
pub use config::{ClassConfig, GoldenRule};
pub use corpus::{strip_golden, top_hashtags, Corpus, TagId, TweetRecord, UserId};
pub use driver::{run_ptr, run_tptr, IterationTrace, Run};
pub use error::{Error, Result};
pub use eval::{build_golden, evaluate, f_measure, EvalReport, GoldenSet};
pub use topics::{hashtags_class, HashtagPartition, HashtagScore};
