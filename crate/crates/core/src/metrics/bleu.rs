//! Corpus-level BLEU with clipped n-gram counts and a brevity penalty.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BleuReport {
    /// 0..=100.
    pub score: f64,
    pub n_gram_precisions: Vec<f64>,
    pub brevity_penalty: f64,
    pub hyp_length: usize,
    pub ref_length: usize,
}

fn ngram_counts<S: AsRef<str>>(tokens: &[S], n: usize) -> HashMap<Vec<&str>, usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            let gram: Vec<&str> = window.iter().map(AsRef::as_ref).collect();
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Computes BLEU over whole-corpus statistics.
///
/// Without smoothing the score is 0 as soon as one n-gram order has no match.
/// With `smooth`, orders `n > 1` use `(matches + 1) / (total + 1)`.
pub fn corpus_bleu<S: AsRef<str>>(
    hyps: &[Vec<S>],
    refs: &[Vec<S>],
    max_n: usize,
    smooth: bool,
) -> Result<BleuReport> {
    if hyps.len() != refs.len() {
        return Err(Error::mismatch(
            "hypotheses vs references",
            hyps.len(),
            refs.len(),
        ));
    }
    if hyps.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if max_n == 0 {
        return Err(Error::Config("max_n must be at least 1".into()));
    }

    let mut matches = vec![0usize; max_n];
    let mut totals = vec![0usize; max_n];
    let (mut hyp_length, mut ref_length) = (0, 0);
    for (hyp, reference) in hyps.iter().zip(refs) {
        hyp_length += hyp.len();
        ref_length += reference.len();
        for n in 1..=max_n {
            let ref_counts = ngram_counts(reference, n);
            for (gram, count) in ngram_counts(hyp, n) {
                totals[n - 1] += count;
                matches[n - 1] += count.min(ref_counts.get(&gram).copied().unwrap_or(0));
            }
        }
    }

    let n_gram_precisions: Vec<f64> = (0..max_n)
        .map(|k| {
            if smooth && k > 0 {
                (matches[k] + 1) as f64 / (totals[k] + 1) as f64
            } else if totals[k] == 0 {
                0.0
            } else {
                matches[k] as f64 / totals[k] as f64
            }
        })
        .collect();

    let brevity_penalty = if hyp_length >= ref_length {
        1.0
    } else if hyp_length == 0 {
        0.0
    } else {
        (1.0 - ref_length as f64 / hyp_length as f64).exp()
    };

    let score = if n_gram_precisions.contains(&0.0) {
        0.0
    } else {
        let mean_log = n_gram_precisions.iter().map(|p| p.ln()).sum::<f64>() / max_n as f64;
        100.0 * brevity_penalty * mean_log.exp()
    };

    Ok(BleuReport {
        score,
        n_gram_precisions,
        brevity_penalty,
        hyp_length,
        ref_length,
    })
}
