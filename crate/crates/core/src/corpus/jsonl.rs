//! JSONL corpora: one `{"tokens": [...], "tags": [...]}` object per line.

use serde::{Deserialize, Serialize};

use crate::corpus::types::{tokens_from, TaggedSentence};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct Record {
    tokens: Vec<String>,
    tags: Vec<String>,
}

/// Blank lines are skipped; every other line must hold one record.
pub fn parse_jsonl(text: &str) -> Result<Vec<TaggedSentence>> {
    let mut corpus = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: Record =
            serde_json::from_str(line).map_err(|e| Error::parse(n + 1, e.to_string()))?;
        let sentence = tokens_from(record.tokens)
            .and_then(|tokens| TaggedSentence::new(tokens, record.tags))
            .map_err(|e| Error::parse(n + 1, e.to_string()))?;
        corpus.push(sentence);
    }
    Ok(corpus)
}

pub fn write_jsonl(corpus: &[TaggedSentence]) -> String {
    let mut out = String::new();
    for sentence in corpus {
        let record = Record {
            tokens: sentence.words().map(str::to_string).collect(),
            tags: sentence.tags().to_vec(),
        };
        out.push_str(&serde_json::to_string(&record).expect("record serializes"));
        out.push('\n');
    }
    out
}
