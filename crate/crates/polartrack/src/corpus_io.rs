//! Line-delimited JSON corpus files.
//!
//! Each non-blank line is an object `{"id": str, "user": str, "day": int,
//! "hashtags": [str]}`. Unknown fields are ignored. Hashtags are trimmed,
//! stripped of one leading `#` and lowercased with Unicode default case
//! mapping.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use polartrack_core::{Corpus, TweetRecord};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Line {
    id: String,
    user: String,
    day: u32,
    hashtags: Vec<String>,
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Read {
        path: path.into(),
        source,
    })?;
    read_corpus(file, path)
}

/// Parses a corpus; `path` only labels errors.
pub fn read_corpus(reader: impl Read, path: &Path) -> Result<Corpus> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.into(),
        line,
        message,
    };
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let n = i + 1;
        let line = line.map_err(|source| Error::Read {
            path: path.into(),
            source,
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: Line = serde_json::from_str(&line).map_err(|e| parse_err(n, e.to_string()))?;
        if !seen.insert(raw.id.clone()) {
            return Err(parse_err(n, format!("duplicate tweet id `{}`", raw.id)));
        }
        let record = TweetRecord::new(raw.id, raw.user, raw.day, raw.hashtags)
            .map_err(|e| parse_err(n, e.to_string()))?;
        records.push(record);
    }
    Ok(Corpus::new(records)?)
}

pub fn write_corpus(path: impl AsRef<Path>, records: &[TweetRecord]) -> Result<()> {
    let path = path.as_ref();
    let wrap = |source| Error::Write {
        path: path.into(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(wrap)?);
    write_records(&mut out, records).map_err(wrap)?;
    out.flush().map_err(wrap)
}

pub fn write_records(out: &mut impl Write, records: &[TweetRecord]) -> std::io::Result<()> {
    for r in records {
        let line = Line {
            id: r.tweet_id.clone(),
            user: r.user_id.clone(),
            day: r.day,
            hashtags: r.hashtags.iter().cloned().collect(),
        };
        serde_json::to_writer(&mut *out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
