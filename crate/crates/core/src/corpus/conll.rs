//! Two-column CoNLL corpora: `token<TAB>tag`, blank line between sentences.

use crate::corpus::types::{tokens_from, TaggedSentence};
use crate::error::{Error, Result};

pub fn parse_conll(text: &str) -> Result<Vec<TaggedSentence>> {
    let mut corpus = Vec::new();
    let mut words: Vec<String> = Vec::new();
    let mut tags: Vec<String> = Vec::new();
    let mut first_line = 1;

    let mut flush = |words: &mut Vec<String>, tags: &mut Vec<String>, line: usize| {
        if words.is_empty() {
            return Ok(());
        }
        let sentence = tokens_from(words.drain(..))
            .and_then(|tokens| TaggedSentence::new(tokens, std::mem::take(tags)))
            .map_err(|e| Error::parse(line, e.to_string()))?;
        corpus.push(sentence);
        Ok::<(), Error>(())
    };

    for (n, raw) in text.split('\n').enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            flush(&mut words, &mut tags, first_line)?;
            continue;
        }
        if words.is_empty() {
            first_line = line_no;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 2 {
            return Err(Error::parse(
                line_no,
                format!("expected 2 tab-separated fields, found {}", fields.len()),
            ));
        }
        if fields[0].is_empty() || fields[0].chars().any(char::is_whitespace) {
            return Err(Error::parse(line_no, format!("bad token {:?}", fields[0])));
        }
        crate::corpus::bio::Tag::parse(fields[1])
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
        words.push(fields[0].to_string());
        tags.push(fields[1].to_string());
    }
    flush(&mut words, &mut tags, first_line)?;
    Ok(corpus)
}

pub fn write_conll(corpus: &[TaggedSentence]) -> String {
    let mut out = String::new();
    for sentence in corpus {
        for (tok, tag) in sentence.tokens().iter().zip(sentence.tags()) {
            out.push_str(&tok.text);
            out.push('\t');
            out.push_str(tag);
            out.push('\n');
        }
        out.push('\n');
    }
    out
}
