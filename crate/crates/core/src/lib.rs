//! Tools for cross-lingual named entity recognition without target-language
//! annotations.
//!
//! * [`corpus`] reads and writes BIO corpora, parallel text and Pharaoh
//!   alignments, and converts tags to entity spans.
//! * [`aligner`] is a statistical word aligner (IBM Model 2 with a diagonal
//!   prior) trained by EM.
//! * [`projection`] moves entity labels across alignments, for building
//!   translated training sets and for mapping predictions back.
//! * [`metrics`] has entity-level F1, AER, corpus BLEU and label counts.
//! * [`select`] ranks candidate translation or alignment systems.

pub mod aligner;
pub mod corpus;
mod error;
pub mod metrics;
pub mod projection;
pub mod select;

pub use error::{Error, Result};
