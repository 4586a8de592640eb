//! Statistical word aligner: IBM Model 2 with a diagonal-favoring prior.
//!
//! For a source sentence of `n` words and a target sentence of `m` words, the
//! target word at (1-based) position `j` is generated by the null word with
//! probability `p0`, or by source position `i` with probability
//!
//! ```text
//! (1 - p0) * exp(-λ |i/n - j/m|) / Z(j, n, m)
//! ```
//!
//! times the lexical translation probability `t(f_j | e_i)`. Lexical tables are
//! estimated with EM; the prior parameters stay fixed unless
//! [`AlignerConfig::optimize_tension`] is set.
//!
//! Alignments are asymmetric: every target word links to at most one source
//! word, and nothing is symmetrized.
//!
//! Expected counts are accumulated in fixed-size sentence chunks that are
//! merged in chunk order, so results do not depend on the rayon thread count.

use std::collections::HashMap;
use std::fmt::Write as _;

use log::debug;
use rayon::prelude::*;

use crate::corpus::{Alignment, Link, SentencePair};
use crate::error::{Error, Result};

/// Probability used for unseen (source, target) pairs and unknown words.
pub const PROBABILITY_FLOOR: f64 = 1e-9;

const CHUNK_SIZE: usize = 256;
const NULL_ROW: usize = 0;
const MODEL_HEADER: &str = "xlner-alignment-model 1";

const TENSION_MIN: f64 = 0.1;
const TENSION_MAX: f64 = 50.0;
const TENSION_SEARCH_STEPS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct AlignerConfig {
    pub iterations: usize,
    /// Diagonal tension λ; larger values pull links toward the diagonal.
    pub tension: f64,
    /// Null-word probability p0.
    pub null_prob: f64,
    /// Added to every expected count before renormalization.
    pub smoothing: f64,
    /// Re-estimate λ after each M-step by golden-section search.
    pub optimize_tension: bool,
}

impl Default for AlignerConfig {
    fn default() -> Self {
        AlignerConfig {
            iterations: 5,
            tension: 4.0,
            null_prob: 0.08,
            smoothing: 0.01,
            optimize_tension: false,
        }
    }
}

impl AlignerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        if !(self.tension.is_finite() && self.tension > 0.0) {
            return Err(Error::Config(format!(
                "tension must be positive, got {}",
                self.tension
            )));
        }
        if !(self.null_prob > 0.0 && self.null_prob < 1.0) {
            return Err(Error::Config(format!(
                "null probability must be in (0, 1), got {}",
                self.null_prob
            )));
        }
        if !(self.smoothing.is_finite() && self.smoothing >= 0.0) {
            return Err(Error::Config(format!(
                "smoothing must be non-negative, got {}",
                self.smoothing
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default)]
struct Vocab {
    ids: HashMap<String, u32>,
    words: Vec<String>,
}

impl Vocab {
    fn intern(&mut self, word: &str) -> u32 {
        if let Some(&id) = self.ids.get(word) {
            return id;
        }
        let id = self.words.len() as u32;
        self.ids.insert(word.to_string(), id);
        self.words.push(word.to_string());
        id
    }

    fn get(&self, word: &str) -> Option<u32> {
        self.ids.get(word).copied()
    }
}

/// A trained lexical table plus the diagonal prior parameters.
///
/// Row 0 of the table is the null word; source word `k` lives in row `k + 1`.
/// Rows are stored in compressed form with target ids sorted.
#[derive(Debug, Clone)]
pub struct AlignmentModel {
    tension: f64,
    null_prob: f64,
    source_vocab: Vocab,
    target_vocab: Vocab,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    probs: Vec<f64>,
}

/// Per-iteration diagnostics from [`train_traced`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingTrace {
    /// Corpus log-likelihood of the initial model, then after each iteration.
    pub log_likelihood: Vec<f64>,
    /// Largest `|Σ_f t(f|e) - 1|` after each M-step.
    pub normalization_error: Vec<f64>,
    /// Tension in effect after each iteration.
    pub tension: Vec<f64>,
}

struct EncodedPair {
    source: Vec<u32>,
    target: Vec<u32>,
}

impl AlignmentModel {
    pub fn tension(&self) -> f64 {
        self.tension
    }

    pub fn null_prob(&self) -> f64 {
        self.null_prob
    }

    fn row_range(&self, row: usize) -> std::ops::Range<usize> {
        self.offsets[row]..self.offsets[row + 1]
    }

    fn slot(&self, row: usize, target: u32) -> Option<usize> {
        let range = self.row_range(row);
        self.targets[range.clone()]
            .binary_search(&target)
            .ok()
            .map(|k| range.start + k)
    }

    fn row_of(&self, source: Option<&str>) -> Option<usize> {
        match source {
            None => Some(NULL_ROW),
            Some(w) => self.source_vocab.get(w).map(|id| id as usize + 1),
        }
    }

    /// Stored `t(target | source)`; `None` as source means the null word.
    /// Returns `None` when the pair has no entry.
    pub fn translation_prob(&self, source: Option<&str>, target: &str) -> Option<f64> {
        let row = self.row_of(source)?;
        let target = self.target_vocab.get(target)?;
        self.slot(row, target).map(|k| self.probs[k])
    }

    fn prob_ids(&self, row: Option<usize>, target: Option<u32>) -> f64 {
        match (row, target) {
            (Some(r), Some(t)) => self.slot(r, t).map_or(PROBABILITY_FLOOR, |k| self.probs[k]),
            _ => PROBABILITY_FLOOR,
        }
    }

    /// Number of stored (source, target) entries, null row included.
    pub fn num_entries(&self) -> usize {
        self.probs.len()
    }

    /// All entries sorted by source (null first) then target.
    pub fn entries(&self) -> Vec<(Option<&str>, &str, f64)> {
        let mut rows: Vec<(Option<&str>, usize)> = vec![(None, NULL_ROW)];
        let mut named: Vec<(Option<&str>, usize)> = self
            .source_vocab
            .words
            .iter()
            .enumerate()
            .map(|(id, w)| (Some(w.as_str()), id + 1))
            .collect();
        named.sort();
        rows.extend(named);

        let mut out = Vec::with_capacity(self.probs.len());
        for (source, row) in rows {
            let mut cells: Vec<(&str, f64)> = self
                .row_range(row)
                .map(|k| {
                    let t = self.targets[k] as usize;
                    (self.target_vocab.words[t].as_str(), self.probs[k])
                })
                .collect();
            cells.sort_by(|a, b| a.0.cmp(b.0));
            out.extend(cells.into_iter().map(|(t, p)| (source, t, p)));
        }
        out
    }

    /// Largest deviation of a non-empty row sum from 1.
    pub fn max_normalization_error(&self) -> f64 {
        (0..self.offsets.len() - 1)
            .filter(|&r| !self.row_range(r).is_empty())
            .map(|r| (self.probs[self.row_range(r)].iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Prior weights `(1 - p0) exp(-λ|i/n - j/m|) / Z` over source positions.
    fn diagonal_prior(
        tension: f64,
        null_prob: f64,
        j: usize,
        n: usize,
        m: usize,
        out: &mut Vec<f64>,
    ) {
        out.clear();
        let jr = (j + 1) as f64 / m as f64;
        out.extend((0..n).map(|i| (-tension * ((i + 1) as f64 / n as f64 - jr).abs()).exp()));
        let z: f64 = out.iter().sum();
        let scale = (1.0 - null_prob) / z;
        out.iter_mut().for_each(|w| *w *= scale);
    }

    fn encode(&self, pair: &SentencePair) -> (Vec<Option<usize>>, Vec<Option<u32>>) {
        let rows = pair
            .source
            .iter()
            .map(|t| self.row_of(Some(&t.text)))
            .collect();
        let targets = pair
            .target
            .iter()
            .map(|t| self.target_vocab.get(&t.text))
            .collect();
        (rows, targets)
    }

    /// Most probable link for each target word, or none when the null word wins.
    /// Ties go to the null word, then to the smaller source index.
    pub fn viterbi_align(&self, pair: &SentencePair) -> Alignment {
        let (rows, targets) = self.encode(pair);
        let (n, m) = (rows.len(), targets.len());
        let mut prior = Vec::with_capacity(n);
        let mut alignment = Alignment::new();
        for (j, &f) in targets.iter().enumerate() {
            Self::diagonal_prior(self.tension, self.null_prob, j, n, m, &mut prior);
            let mut best = self.null_prob * self.prob_ids(Some(NULL_ROW), f);
            let mut best_i = None;
            for (i, &e) in rows.iter().enumerate() {
                let score = prior[i] * self.prob_ids(e, f);
                if score > best {
                    best = score;
                    best_i = Some(i);
                }
            }
            if let Some(i) = best_i {
                alignment.insert(Link::new(i, j));
            }
        }
        alignment
    }

    /// Corpus log-likelihood `Σ log p(f | e)` under this model; unseen
    /// entries use [`PROBABILITY_FLOOR`].
    pub fn log_likelihood(&self, bitext: &[SentencePair]) -> f64 {
        let chunks: Vec<f64> = bitext
            .par_chunks(CHUNK_SIZE)
            .map(|chunk| {
                let mut prior = Vec::new();
                let mut ll = 0.0;
                for pair in chunk {
                    let (rows, targets) = self.encode(pair);
                    ll += self.pair_log_likelihood(&rows, &targets, self.tension, &mut prior);
                }
                ll
            })
            .collect();
        chunks.into_iter().sum()
    }

    fn pair_log_likelihood(
        &self,
        rows: &[Option<usize>],
        targets: &[Option<u32>],
        tension: f64,
        prior: &mut Vec<f64>,
    ) -> f64 {
        let (n, m) = (rows.len(), targets.len());
        let mut ll = 0.0;
        for (j, &f) in targets.iter().enumerate() {
            Self::diagonal_prior(tension, self.null_prob, j, n, m, prior);
            let mut total = self.null_prob * self.prob_ids(Some(NULL_ROW), f);
            for (i, &e) in rows.iter().enumerate() {
                total += prior[i] * self.prob_ids(e, f);
            }
            ll += total.ln();
        }
        ll
    }
}

fn encode_bitext(bitext: &[SentencePair]) -> Result<(Vocab, Vocab, Vec<EncodedPair>)> {
    if bitext.is_empty() {
        return Err(Error::EmptyBitext);
    }
    let mut source_vocab = Vocab::default();
    let mut target_vocab = Vocab::default();
    let mut encoded = Vec::with_capacity(bitext.len());
    for (index, pair) in bitext.iter().enumerate() {
        if pair.source.is_empty() || pair.target.is_empty() {
            return Err(Error::DegeneratePair { index });
        }
        encoded.push(EncodedPair {
            source: pair
                .source
                .iter()
                .map(|t| source_vocab.intern(&t.text))
                .collect(),
            target: pair
                .target
                .iter()
                .map(|t| target_vocab.intern(&t.text))
                .collect(),
        });
    }
    Ok((source_vocab, target_vocab, encoded))
}

/// Builds the sparse support: every target word co-occurring with each source
/// word (and with the null word), initialized uniformly.
fn init_model(
    cfg: &AlignerConfig,
    source_vocab: Vocab,
    target_vocab: Vocab,
    corpus: &[EncodedPair],
) -> AlignmentModel {
    let mut support: Vec<Vec<u32>> = vec![Vec::new(); source_vocab.words.len() + 1];
    for pair in corpus {
        support[NULL_ROW].extend_from_slice(&pair.target);
        for &e in &pair.source {
            support[e as usize + 1].extend_from_slice(&pair.target);
        }
    }
    let mut offsets = Vec::with_capacity(support.len() + 1);
    let mut targets = Vec::new();
    let mut probs = Vec::new();
    offsets.push(0);
    for mut row in support {
        row.sort_unstable();
        row.dedup();
        let uniform = 1.0 / row.len() as f64;
        probs.extend(std::iter::repeat_n(uniform, row.len()));
        targets.extend(row);
        offsets.push(targets.len());
    }
    AlignmentModel {
        tension: cfg.tension,
        null_prob: cfg.null_prob,
        source_vocab,
        target_vocab,
        offsets,
        targets,
        probs,
    }
}

/// Expected counts and log-likelihood for one chunk, accumulated in order.
fn expect_chunk(model: &AlignmentModel, chunk: &[EncodedPair]) -> (f64, HashMap<usize, f64>) {
    let mut counts: HashMap<usize, f64> = HashMap::new();
    let mut prior = Vec::new();
    let mut scores = Vec::new();
    let mut ll = 0.0;
    for pair in chunk {
        let (n, m) = (pair.source.len(), pair.target.len());
        for (j, &f) in pair.target.iter().enumerate() {
            AlignmentModel::diagonal_prior(model.tension, model.null_prob, j, n, m, &mut prior);
            let null_slot = model
                .slot(NULL_ROW, f)
                .expect("null row covers every target");
            let null_score = model.null_prob * model.probs[null_slot];
            scores.clear();
            let mut total = null_score;
            for (i, &e) in pair.source.iter().enumerate() {
                let slot = model
                    .slot(e as usize + 1, f)
                    .expect("co-occurrence in support");
                let s = prior[i] * model.probs[slot];
                total += s;
                scores.push((slot, s));
            }
            ll += total.ln();
            *counts.entry(null_slot).or_insert(0.0) += null_score / total;
            for &(slot, s) in &scores {
                *counts.entry(slot).or_insert(0.0) += s / total;
            }
        }
    }
    (ll, counts)
}

fn expectation(model: &AlignmentModel, corpus: &[EncodedPair]) -> (f64, Vec<f64>) {
    let partials: Vec<(f64, HashMap<usize, f64>)> = corpus
        .par_chunks(CHUNK_SIZE)
        .map(|chunk| expect_chunk(model, chunk))
        .collect();
    let mut counts = vec![0.0; model.probs.len()];
    let mut ll = 0.0;
    for (chunk_ll, chunk_counts) in partials {
        ll += chunk_ll;
        for (slot, c) in chunk_counts {
            counts[slot] += c;
        }
    }
    (ll, counts)
}

fn maximization(model: &mut AlignmentModel, counts: &[f64], smoothing: f64) {
    for row in 0..model.offsets.len() - 1 {
        let range = model.row_range(row);
        if range.is_empty() {
            continue;
        }
        let total: f64 = counts[range.clone()].iter().map(|c| c + smoothing).sum();
        if total > 0.0 {
            for k in range {
                model.probs[k] = (counts[k] + smoothing) / total;
            }
        } else {
            let uniform = 1.0 / range.len() as f64;
            model.probs[range].iter_mut().for_each(|p| *p = uniform);
        }
    }
}

fn corpus_log_likelihood(model: &AlignmentModel, corpus: &[EncodedPair], tension: f64) -> f64 {
    let partials: Vec<f64> = corpus
        .par_chunks(CHUNK_SIZE)
        .map(|chunk| {
            let mut prior = Vec::new();
            chunk
                .iter()
                .map(|p| {
                    let rows: Vec<Option<usize>> =
                        p.source.iter().map(|&e| Some(e as usize + 1)).collect();
                    let targets: Vec<Option<u32>> = p.target.iter().map(|&f| Some(f)).collect();
                    model.pair_log_likelihood(&rows, &targets, tension, &mut prior)
                })
                .fold(0.0, |acc, x| acc + x)
        })
        .collect();
    partials.into_iter().sum()
}

/// Golden-section search for the tension maximizing the corpus likelihood
/// under the current lexical table. The current tension is kept unless a
/// probe beats it.
fn optimize_tension(model: &mut AlignmentModel, corpus: &[EncodedPair]) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let f = |t: f64| corpus_log_likelihood(model, corpus, t);
    let (mut a, mut b) = (TENSION_MIN, TENSION_MAX);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..TENSION_SEARCH_STEPS {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let (best, best_ll) = if fc >= fd { (c, fc) } else { (d, fd) };
    if best_ll > f(model.tension) {
        debug!("tension {} -> {}", model.tension, best);
        model.tension = best;
    }
}

fn run_em(
    bitext: &[SentencePair],
    cfg: &AlignerConfig,
    trace: bool,
) -> Result<(AlignmentModel, TrainingTrace)> {
    cfg.validate()?;
    let (source_vocab, target_vocab, corpus) = encode_bitext(bitext)?;
    let mut model = init_model(cfg, source_vocab, target_vocab, &corpus);
    let mut history = TrainingTrace::default();
    for iteration in 1..=cfg.iterations {
        let (ll, counts) = expectation(&model, &corpus);
        debug!("iteration {iteration}: log-likelihood {ll}");
        history.log_likelihood.push(ll);
        maximization(&mut model, &counts, cfg.smoothing);
        if cfg.optimize_tension {
            optimize_tension(&mut model, &corpus);
        }
        if trace {
            history
                .normalization_error
                .push(model.max_normalization_error());
        }
        history.tension.push(model.tension);
    }
    if trace {
        history
            .log_likelihood
            .push(corpus_log_likelihood(&model, &corpus, model.tension));
    }
    Ok((model, history))
}

/// Trains an alignment model with exactly `cfg.iterations` EM iterations.
pub fn train(bitext: &[SentencePair], cfg: &AlignerConfig) -> Result<AlignmentModel> {
    run_em(bitext, cfg, false).map(|(model, _)| model)
}

/// Like [`train`], also returning per-iteration diagnostics.
pub fn train_traced(
    bitext: &[SentencePair],
    cfg: &AlignerConfig,
) -> Result<(AlignmentModel, TrainingTrace)> {
    run_em(bitext, cfg, true)
}

/// Aligns every pair with [`AlignmentModel::viterbi_align`], preserving order.
pub fn align_corpus(model: &AlignmentModel, pairs: &[SentencePair]) -> Vec<Alignment> {
    pairs.par_iter().map(|p| model.viterbi_align(p)).collect()
}

/// Serializes the model: a versioned header, the prior parameters, the null
/// row as `target prob` lines and the lexical rows as `source target prob`
/// lines, all sorted.
pub fn save_model(model: &AlignmentModel) -> String {
    let entries = model.entries();
    let null_rows = entries.iter().filter(|e| e.0.is_none()).count();
    let mut out = String::new();
    let _ = writeln!(out, "{MODEL_HEADER}");
    let _ = writeln!(out, "tension {}", model.tension);
    let _ = writeln!(out, "null_prob {}", model.null_prob);
    let _ = writeln!(out, "null {null_rows}");
    for (source, target, p) in &entries {
        if source.is_none() {
            let _ = writeln!(out, "{target} {p}");
        }
    }
    let _ = writeln!(out, "lexical {}", entries.len() - null_rows);
    for (source, target, p) in &entries {
        if let Some(source) = source {
            let _ = writeln!(out, "{source} {target} {p}");
        }
    }
    out
}

struct ModelReader<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
    line: usize,
}

impl<'a> ModelReader<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::ModelFormat {
            line: self.line,
            message: message.into(),
        }
    }

    fn next_fields(&mut self, expected: usize) -> Result<Vec<&'a str>> {
        let (n, line) = self.lines.next().ok_or_else(|| Error::ModelFormat {
            line: self.line + 1,
            message: "unexpected end of file".into(),
        })?;
        self.line = n + 1;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != expected {
            return Err(self.err(format!(
                "expected {expected} fields, found {}",
                fields.len()
            )));
        }
        Ok(fields)
    }

    fn keyed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let fields = self.next_fields(2)?;
        if fields[0] != key {
            return Err(self.err(format!("expected {key:?}, found {:?}", fields[0])));
        }
        fields[1]
            .parse()
            .map_err(|_| self.err(format!("bad value for {key}: {:?}", fields[1])))
    }

    fn prob(&self, field: &str) -> Result<f64> {
        match field.parse::<f64>() {
            Ok(p) if (0.0..=1.0).contains(&p) => Ok(p),
            _ => Err(self.err(format!("bad probability {field:?}"))),
        }
    }
}

pub fn load_model(text: &str) -> Result<AlignmentModel> {
    let mut reader = ModelReader {
        lines: text.lines().enumerate(),
        line: 0,
    };
    match reader.lines.next() {
        Some((_, header)) if header.trim_end() == MODEL_HEADER => reader.line = 1,
        Some((_, header)) => {
            return Err(Error::ModelFormat {
                line: 1,
                message: format!("unknown header {header:?}"),
            })
        }
        None => {
            return Err(Error::ModelFormat {
                line: 1,
                message: "empty model file".into(),
            })
        }
    }
    let tension: f64 = reader.keyed("tension")?;
    let null_prob: f64 = reader.keyed("null_prob")?;
    if !(tension.is_finite() && tension > 0.0 && null_prob > 0.0 && null_prob < 1.0) {
        return Err(reader.err("prior parameters out of range"));
    }

    let mut source_vocab = Vocab::default();
    let mut target_vocab = Vocab::default();
    let mut rows: Vec<Vec<(u32, f64)>> = vec![Vec::new()];

    let null_count: usize = reader.keyed("null")?;
    for _ in 0..null_count {
        let fields = reader.next_fields(2)?;
        let p = reader.prob(fields[1])?;
        rows[NULL_ROW].push((target_vocab.intern(fields[0]), p));
    }
    let lexical_count: usize = reader.keyed("lexical")?;
    for _ in 0..lexical_count {
        let fields = reader.next_fields(3)?;
        let p = reader.prob(fields[2])?;
        let row = source_vocab.intern(fields[0]) as usize + 1;
        if row == rows.len() {
            rows.push(Vec::new());
        }
        rows[row].push((target_vocab.intern(fields[1]), p));
    }
    if let Some((n, _)) = reader.lines.by_ref().find(|(_, l)| !l.trim().is_empty()) {
        return Err(Error::ModelFormat {
            line: n + 1,
            message: "trailing content".into(),
        });
    }

    let mut offsets = vec![0];
    let mut targets = Vec::new();
    let mut probs = Vec::new();
    for mut row in rows {
        row.sort_by_key(|&(t, _)| t);
        if row.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::ModelFormat {
                line: 0,
                message: "duplicate entry".into(),
            });
        }
        for (t, p) in row {
            targets.push(t);
            probs.push(p);
        }
        offsets.push(targets.len());
    }
    Ok(AlignmentModel {
        tension,
        null_prob,
        source_vocab,
        target_vocab,
        offsets,
        targets,
        probs,
    })
}
