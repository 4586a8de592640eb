use crate::corpus::types::{tokens_from, SentencePair};
use crate::error::{Error, Result};

/// Pairs two line-aligned files of whitespace-tokenized sentences.
pub fn parse_parallel(src_text: &str, tgt_text: &str) -> Result<Vec<SentencePair>> {
    let src: Vec<&str> = src_text.lines().collect();
    let tgt: Vec<&str> = tgt_text.lines().collect();
    if src.len() != tgt.len() {
        return Err(Error::mismatch(
            "source vs target line count",
            src.len(),
            tgt.len(),
        ));
    }
    src.iter()
        .zip(&tgt)
        .enumerate()
        .map(|(n, (s, t))| {
            let line = n + 1;
            let side = |text: &str, name: &str| {
                if text.trim().is_empty() {
                    return Err(Error::parse(line, format!("empty {name} sentence")));
                }
                tokens_from(text.split_whitespace()).map_err(|e| Error::parse(line, e.to_string()))
            };
            Ok(SentencePair {
                source: side(s, "source")?,
                target: side(t, "target")?,
            })
        })
        .collect()
}

/// Reads one whitespace-tokenized sentence per line; empty lines are kept as
/// empty token lists.
pub fn parse_tokenized_lines(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|l| l.split_whitespace().map(str::to_string).collect())
        .collect()
}
