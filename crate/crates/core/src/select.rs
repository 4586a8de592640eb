//! Ranking candidate translation or alignment systems on development data.
//!
//! Only intrinsic metrics are used (BLEU against reference translations, AER
//! against gold alignments); downstream NER data never enters the choice.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Alignment, GoldAlignment};
use crate::error::{Error, Result};
use crate::metrics::{aer, corpus_bleu};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMetric {
    /// Higher is better.
    Bleu,
    /// Lower is better.
    Aer,
}

impl FromStr for SelectionMetric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bleu" => Ok(SelectionMetric::Bleu),
            "aer" => Ok(SelectionMetric::Aer),
            other => Err(Error::Config(format!(
                "unknown metric {other:?}; expected bleu or aer"
            ))),
        }
    }
}

impl fmt::Display for SelectionMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMetric::Bleu => "bleu",
            SelectionMetric::Aer => "aer",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateScore {
    pub name: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub metric: SelectionMetric,
    /// Candidates best first.
    pub ranking: Vec<CandidateScore>,
}

impl SelectionReport {
    fn ranked(metric: SelectionMetric, mut scores: Vec<CandidateScore>) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::Config("no candidates to rank".into()));
        }
        scores.sort_by(|a, b| {
            let by_score = match metric {
                SelectionMetric::Bleu => b.score.total_cmp(&a.score),
                SelectionMetric::Aer => a.score.total_cmp(&b.score),
            };
            match by_score {
                Ordering::Equal => a.name.cmp(&b.name),
                other => other,
            }
        });
        Ok(SelectionReport {
            metric,
            ranking: scores,
        })
    }

    pub fn best(&self) -> &CandidateScore {
        &self.ranking[0]
    }
}

fn for_candidate(name: &str, e: Error) -> Error {
    Error::Config(format!("candidate {name}: {e}"))
}

/// Ranks translation systems by corpus BLEU against `refs`.
pub fn select_by_bleu<S: AsRef<str>>(
    candidates: &[(String, Vec<Vec<S>>)],
    refs: &[Vec<S>],
    max_n: usize,
    smooth: bool,
) -> Result<SelectionReport> {
    let scores = candidates
        .iter()
        .map(|(name, hyps)| {
            let report =
                corpus_bleu(hyps, refs, max_n, smooth).map_err(|e| for_candidate(name, e))?;
            Ok(CandidateScore {
                name: name.clone(),
                score: report.score,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SelectionReport::ranked(SelectionMetric::Bleu, scores)
}

/// Ranks aligners by AER against `gold`.
pub fn select_by_aer(
    candidates: &[(String, Vec<Alignment>)],
    gold: &[GoldAlignment],
) -> Result<SelectionReport> {
    let scores = candidates
        .iter()
        .map(|(name, pred)| {
            Ok(CandidateScore {
                name: name.clone(),
                score: aer(pred, gold).map_err(|e| for_candidate(name, e))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SelectionReport::ranked(SelectionMetric::Aer, scores)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_string).collect()
    }

    #[test]
    fn exact_hypotheses_win() {
        let refs = vec![toks("the patient takes two tablets daily")];
        let cands = vec![
            (
                "noisy".to_string(),
                vec![toks("patient takes tablets every day")],
            ),
            ("exact".to_string(), refs.clone()),
        ];
        let r = select_by_bleu(&cands, &refs, 4, false).unwrap();
        assert_eq!(r.best().name, "exact");
        assert_eq!(r.best().score, 100.0);
    }

    #[test]
    fn identity_aligner_wins() {
        let gold = vec![GoldAlignment::all_sure(Alignment::identity(3))];
        let cands = vec![
            (
                "shifted".to_string(),
                vec![[(0, 1), (1, 2)].into_iter().collect()],
            ),
            ("identity".to_string(), vec![Alignment::identity(3)]),
        ];
        let r = select_by_aer(&cands, &gold).unwrap();
        assert_eq!(r.best().name, "identity");
        assert_eq!(r.best().score, 0.0);
    }

    #[test]
    fn ties_break_by_name() {
        let refs = vec![toks("a b")];
        let cands = vec![
            ("zeta".to_string(), refs.clone()),
            ("alpha".to_string(), refs.clone()),
        ];
        let r = select_by_bleu(&cands, &refs, 2, false).unwrap();
        let names: Vec<_> = r.ranking.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, ["alpha", "zeta"]);
    }

    #[test]
    fn mismatch_names_candidate() {
        let refs = vec![toks("a b")];
        let cands = vec![("short".to_string(), vec![])];
        let err = select_by_bleu(&cands, &refs, 2, false).unwrap_err();
        assert!(err.to_string().contains("short"));
        assert!(select_by_aer(&[], &[]).is_err());
    }
}
