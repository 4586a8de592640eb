//! Corpus types and on-disk formats.

pub mod bio;
pub mod conll;
pub mod jsonl;
pub mod parallel;
pub mod pharaoh;
mod types;

pub use bio::{decode_bio, encode_bio, normalize_loose, Tag};
pub use conll::{parse_conll, write_conll};
pub use jsonl::{parse_jsonl, write_jsonl};
pub use parallel::{parse_parallel, parse_tokenized_lines};
pub use pharaoh::{
    parse_gold_alignment, parse_gold_file, parse_pharaoh, parse_pharaoh_file, write_gold_alignment,
    write_pharaoh, write_pharaoh_file,
};
pub use types::{
    tokens_from, Alignment, EntityLabel, EntitySpan, GoldAlignment, Link, SentencePair,
    TaggedSentence, Token,
};
