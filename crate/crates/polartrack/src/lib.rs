//! File formats, reports and the command-line front end of
//! [`polartrack_core`].

pub mod cli;
pub mod config_file;
pub mod corpus_io;
pub mod error;
pub mod output;
pub mod synth_file;

pub use polartrack_core as core;

pub use config_file::{load_config, write_config};
pub use corpus_io::{load_corpus, read_corpus, write_corpus};
pub use error::{Error, Result};
pub use output::{RunManifest, RunOutputs};
