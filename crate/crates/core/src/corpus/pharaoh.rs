//! Pharaoh alignment lines: space-separated `i-j` pairs, 0-indexed.
//!
//! Gold files may also mark possible-only links as `i?j`.

use crate::corpus::types::{Alignment, GoldAlignment, Link};
use crate::error::{Error, Result};

fn parse_link(item: &str, sep: char) -> Option<Link> {
    let (i, j) = item.split_once(sep)?;
    let all_digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !all_digits(i) || !all_digits(j) {
        return None;
    }
    Some(Link::new(i.parse().ok()?, j.parse().ok()?))
}

fn bad_link(item: &str) -> Error {
    Error::parse(1, format!("malformed link {item:?}"))
}

pub fn parse_pharaoh(line: &str) -> Result<Alignment> {
    line.split_whitespace()
        .map(|item| parse_link(item, '-').ok_or_else(|| bad_link(item)))
        .collect()
}

pub fn parse_gold_alignment(line: &str) -> Result<GoldAlignment> {
    let mut sure = Alignment::new();
    let mut possible = Alignment::new();
    for item in line.split_whitespace() {
        if let Some(link) = parse_link(item, '-') {
            sure.insert(link);
        } else if let Some(link) = parse_link(item, '?') {
            possible.insert(link);
        } else {
            return Err(bad_link(item));
        }
    }
    Ok(GoldAlignment::new(sure, possible))
}

/// Canonical line for an alignment (sorted, no trailing newline).
pub fn write_pharaoh(alignment: &Alignment) -> String {
    alignment
        .iter()
        .map(|l| format!("{}-{}", l.source, l.target))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_gold_alignment(gold: &GoldAlignment) -> String {
    gold.possible()
        .iter()
        .map(|l| {
            let sep = if gold.sure().contains(l) { '-' } else { '?' };
            format!("{}{sep}{}", l.source, l.target)
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn with_line<T>(n: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(n + 1, message),
        other => other,
    })
}

/// One alignment per line. A trailing newline does not add an entry; an empty
/// line in the middle is an empty alignment.
pub fn parse_pharaoh_file(text: &str) -> Result<Vec<Alignment>> {
    text.lines()
        .enumerate()
        .map(|(n, l)| with_line(n, parse_pharaoh(l)))
        .collect()
}

pub fn parse_gold_file(text: &str) -> Result<Vec<GoldAlignment>> {
    text.lines()
        .enumerate()
        .map(|(n, l)| with_line(n, parse_gold_alignment(l)))
        .collect()
}

pub fn write_pharaoh_file(alignments: &[Alignment]) -> String {
    let mut out = String::new();
    for a in alignments {
        out.push_str(&write_pharaoh(a));
        out.push('\n');
    }
    out
}
