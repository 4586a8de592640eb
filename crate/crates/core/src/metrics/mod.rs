//! Evaluation metrics that need no neural model.

mod aer;
mod bleu;
mod ner;
mod stats;

pub use aer::aer;
pub use bleu::{corpus_bleu, BleuReport};
pub use ner::{ner_prf, EvalReport, LabelScores, Prf};
pub use stats::{label_distribution, LabelDistribution};
