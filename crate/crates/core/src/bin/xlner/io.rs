use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use xlner::corpus::{
    parse_conll, parse_gold_file, parse_jsonl, parse_parallel, parse_pharaoh_file, write_conll,
    write_jsonl, Alignment, GoldAlignment, SentencePair, TaggedSentence,
};

use crate::CorpusFormat;

pub fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write(path, &(to_json(value) + "\n"))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn is_jsonl(path: &Path, format: CorpusFormat) -> bool {
    match format {
        CorpusFormat::Conll => false,
        CorpusFormat::Jsonl => true,
        CorpusFormat::Auto => path.extension().is_some_and(|e| e == "jsonl"),
    }
}

pub fn read_corpus(path: &Path, format: CorpusFormat) -> Result<Vec<TaggedSentence>> {
    let text = read(path)?;
    let parsed = if is_jsonl(path, format) {
        parse_jsonl(&text)
    } else {
        parse_conll(&text)
    };
    parsed.with_context(|| format!("in {}", path.display()))
}

pub fn write_corpus(path: &Path, format: CorpusFormat, corpus: &[TaggedSentence]) -> Result<()> {
    let text = if is_jsonl(path, format) {
        write_jsonl(corpus)
    } else {
        write_conll(corpus)
    };
    write(path, &text)
}

pub fn read_parallel(src: &Path, tgt: &Path) -> Result<Vec<SentencePair>> {
    parse_parallel(&read(src)?, &read(tgt)?)
        .with_context(|| format!("in {} / {}", src.display(), tgt.display()))
}

pub fn read_alignments(path: &Path) -> Result<Vec<Alignment>> {
    parse_pharaoh_file(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn read_gold(path: &Path) -> Result<Vec<GoldAlignment>> {
    parse_gold_file(&read(path)?).with_context(|| format!("in {}", path.display()))
}
