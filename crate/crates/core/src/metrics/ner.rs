//! Entity-level precision, recall and F1 with exact span matching.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{decode_bio, TaggedSentence};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Prf {
    pub fn from_counts(matched: usize, predicted: usize, gold: usize) -> Self {
        let ratio = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        let precision = ratio(matched, predicted);
        let recall = ratio(matched, gold);
        let f1 = if precision + recall == 0.0 {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        Prf {
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct LabelScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub gold_count: usize,
    pub pred_count: usize,
    pub match_count: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub per_label: BTreeMap<String, LabelScores>,
    pub micro: Prf,
    /// Mean per-label F1 over labels that occur in the gold corpus.
    pub macro_f1: f64,
}

type Key = (usize, String, usize, usize);

fn entity_keys(index: usize, sentence: &TaggedSentence) -> Result<Vec<Key>> {
    Ok(decode_bio(sentence.tags())?
        .into_iter()
        .map(|s| (index, s.label().to_string(), s.start(), s.end()))
        .collect())
}

/// Scores predicted entities against gold ones; an entity matches only when
/// sentence, label, start and end are all equal.
pub fn ner_prf(gold: &[TaggedSentence], pred: &[TaggedSentence]) -> Result<EvalReport> {
    if gold.len() != pred.len() {
        return Err(Error::mismatch(
            "gold vs predicted sentences",
            gold.len(),
            pred.len(),
        ));
    }
    let mut counts: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
    for (index, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.len() != p.len() {
            return Err(
                Error::mismatch("gold vs predicted tokens", g.len(), p.len()).in_sentence(index),
            );
        }
        let gold_keys = entity_keys(index, g).map_err(|e| e.in_sentence(index))?;
        let pred_keys = entity_keys(index, p).map_err(|e| e.in_sentence(index))?;
        let gold_set: HashSet<&Key> = gold_keys.iter().collect();
        for key in &gold_keys {
            counts.entry(key.1.clone()).or_default().0 += 1;
        }
        for key in &pred_keys {
            let entry = counts.entry(key.1.clone()).or_default();
            entry.1 += 1;
            if gold_set.contains(key) {
                entry.2 += 1;
            }
        }
    }

    let mut report = EvalReport::default();
    let (mut gold_total, mut pred_total, mut match_total) = (0, 0, 0);
    let mut macro_sum = 0.0;
    let mut macro_n = 0usize;
    for (label, (g, p, m)) in counts {
        let prf = Prf::from_counts(m, p, g);
        gold_total += g;
        pred_total += p;
        match_total += m;
        if g > 0 {
            macro_sum += prf.f1;
            macro_n += 1;
        }
        report.per_label.insert(
            label,
            LabelScores {
                precision: prf.precision,
                recall: prf.recall,
                f1: prf.f1,
                gold_count: g,
                pred_count: p,
                match_count: m,
            },
        );
    }
    report.micro = Prf::from_counts(match_total, pred_total, gold_total);
    report.macro_f1 = if macro_n == 0 {
        0.0
    } else {
        macro_sum / macro_n as f64
    };
    Ok(report)
}
