//! Conversion between BIO tag sequences and entity spans.
//!
//! Decoding is loose: an `I-X` that does not continue a `B-X`/`I-X` run opens
//! a new entity, exactly as if it were `B-X`. Encoding writes every fragment
//! of a (possibly disjoint) span as its own `B-`/`I-` run, since BIO has no
//! way to express a gap inside one entity.

use std::fmt;

use crate::corpus::types::{EntityLabel, EntitySpan};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tag {
    Outside,
    Begin(EntityLabel),
    Inside(EntityLabel),
}

impl Tag {
    pub fn parse(tag: &str) -> Result<Tag> {
        if tag == "O" {
            return Ok(Tag::Outside);
        }
        let invalid = || Error::InvalidTag(tag.to_string());
        let (prefix, label) = tag.split_once('-').ok_or_else(invalid)?;
        let label = EntityLabel::new(label).map_err(|_| invalid())?;
        match prefix {
            "B" => Ok(Tag::Begin(label)),
            "I" => Ok(Tag::Inside(label)),
            _ => Err(invalid()),
        }
    }

    pub fn label(&self) -> Option<&EntityLabel> {
        match self {
            Tag::Outside => None,
            Tag::Begin(l) | Tag::Inside(l) => Some(l),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tag::Outside => f.write_str("O"),
            Tag::Begin(l) => write!(f, "B-{l}"),
            Tag::Inside(l) => write!(f, "I-{l}"),
        }
    }
}

/// Decodes tags into sorted, non-overlapping, single-fragment spans.
pub fn decode_bio<S: AsRef<str>>(tags: &[S]) -> Result<Vec<EntitySpan>> {
    let mut spans = Vec::new();
    let mut open: Option<(EntityLabel, usize)> = None;

    for (i, raw) in tags.iter().enumerate() {
        let tag = Tag::parse(raw.as_ref())?;
        let continues = matches!(
            (&tag, &open),
            (Tag::Inside(label), Some((current, _))) if label == current
        );
        if continues {
            continue;
        }
        if let Some((label, start)) = open.take() {
            spans.push(EntitySpan::contiguous(label, start..i)?);
        }
        open = match tag {
            Tag::Outside => None,
            Tag::Begin(label) | Tag::Inside(label) => Some((label, i)),
        };
    }
    if let Some((label, start)) = open {
        spans.push(EntitySpan::contiguous(label, start..tags.len())?);
    }
    Ok(spans)
}

/// Encodes spans over a sentence of `length` tokens.
///
/// Fails on the first token covered twice or on an index past `length`.
pub fn encode_bio(spans: &[EntitySpan], length: usize) -> Result<Vec<String>> {
    let mut tags: Vec<Option<Tag>> = vec![None; length];
    for span in spans {
        for frag in span.fragments() {
            if frag.end > length {
                return Err(Error::InvalidSpan(format!(
                    "{span} exceeds sentence length {length}"
                )));
            }
            for i in frag.clone() {
                if tags[i].is_some() {
                    return Err(Error::Overlap { index: i });
                }
                tags[i] = Some(if i == frag.start {
                    Tag::Begin(span.label().clone())
                } else {
                    Tag::Inside(span.label().clone())
                });
            }
        }
    }
    Ok(tags
        .into_iter()
        .map(|t| t.unwrap_or(Tag::Outside).to_string())
        .collect())
}

/// Rewrites orphan `I-X` tags as `B-X`; other tags are unchanged.
pub fn normalize_loose<S: AsRef<str>>(tags: &[S]) -> Result<Vec<String>> {
    let mut out = Vec::with_capacity(tags.len());
    let mut prev: Option<EntityLabel> = None;
    for raw in tags {
        let tag = Tag::parse(raw.as_ref())?;
        let tag = match tag {
            Tag::Inside(label) if prev.as_ref() != Some(&label) => Tag::Begin(label),
            other => other,
        };
        prev = tag.label().cloned();
        out.push(tag.to_string());
    }
    Ok(out)
}
