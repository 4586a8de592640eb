use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{decode_bio, TaggedSentence};
use crate::error::Result;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDistribution {
    pub sentences: usize,
    pub tokens: usize,
    pub entities: usize,
    pub per_label: BTreeMap<String, usize>,
}

/// Counts entities (BIO runs) per label.
pub fn label_distribution(corpus: &[TaggedSentence]) -> Result<LabelDistribution> {
    let mut dist = LabelDistribution {
        sentences: corpus.len(),
        ..Default::default()
    };
    for sentence in corpus {
        dist.tokens += sentence.len();
        for span in decode_bio(sentence.tags())? {
            *dist.per_label.entry(span.label().to_string()).or_insert(0) += 1;
            dist.entities += 1;
        }
    }
    Ok(dist)
}
