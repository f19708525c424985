//! OEIS-style b-file ingestion.
//!
//! A b-file is plain text with one `index value` pair per line, ASCII
//! decimal separated by whitespace. Lines starting with `#` and blank
//! lines are ignored. Indices must be strictly increasing; values are
//! exact arbitrary-precision nonnegative integers.

use std::str::FromStr;

use rencontres::combinat::{bell, derangement};
use rencontres::{Error, Nat, Result};

/// Largest index a check will compute a sequence value for.
pub const MAX_CHECK_INDEX: u64 = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFile {
    pub entries: Vec<(u64, Nat)>,
}

/// The scalar sequences a b-file can be checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ScalarSeq {
    Derangement,
    Bell,
}

impl ScalarSeq {
    pub fn value(self, index: u64) -> Nat {
        match self {
            ScalarSeq::Derangement => derangement(index),
            ScalarSeq::Bell => bell(index),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ScalarSeq::Derangement => "derangement",
            ScalarSeq::Bell => "bell",
        }
    }
}

pub fn parse_bfile(text: &str) -> Result<BFile> {
    let mut entries: Vec<(u64, Nat)> = Vec::new();
    for (offset, raw) in text.lines().enumerate() {
        let line = offset + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let index_token = tokens.next().expect("non-empty line has a first token");
        let value_token = tokens.next().ok_or_else(|| Error::Parse {
            line,
            msg: format!("expected `index value`, got `{body}`"),
        })?;
        if let Some(extra) = tokens.next() {
            return Err(Error::Parse {
                line,
                msg: format!("unexpected trailing token `{extra}`"),
            });
        }
        let index: u64 = index_token.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("`{index_token}` is not a nonnegative integer index"),
        })?;
        let value = Nat::from_str(value_token).map_err(|_| Error::Parse {
            line,
            msg: format!("`{value_token}` is not a nonnegative integer value"),
        })?;
        if let Some((last, _)) = entries.last() {
            if index <= *last {
                return Err(Error::Parse {
                    line,
                    msg: format!("index {index} does not increase (previous was {last})"),
                });
            }
        }
        entries.push((index, value));
    }
    Ok(BFile { entries })
}
