//! Annotation projection across word alignments.
//!
//! Entities are moved by token index only. For an entity `E` the candidate
//! target set is every target position linked to any of `E`'s source tokens.
//! A target token claimed by several entities is first given to one of them
//! (or to none) according to [`CollisionPolicy`]; the remaining set is then
//! turned into fragments according to [`GapStrategy`].

use std::fmt;
use std::ops::{AddAssign, Range};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{
    decode_bio, encode_bio, Alignment, EntitySpan, SentencePair, TaggedSentence, Token,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapStrategy {
    /// Each contiguous run of target tokens becomes a fragment with the
    /// entity's label.
    #[default]
    KeepSplit,
    /// One fragment from the first to the last target token, gap included.
    MergeGaps,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CollisionPolicy {
    /// The entity with the most links into the token wins; ties go to the
    /// leftmost entity.
    #[default]
    MostLinks,
    LeftmostEntity,
    /// Contested tokens are left unlabeled.
    DropToken,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnalignedPolicy {
    #[default]
    Drop,
    Error,
}

macro_rules! kebab_enum {
    ($ty:ty { $($name:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok($variant),)+
                    other => Err(Error::Config(format!(
                        "unknown value {other:?}; expected one of: {}",
                        [$($name),+].join(", ")
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                $(if *self == $variant { return f.write_str($name); })+
                unreachable!()
            }
        }
    };
}

kebab_enum!(GapStrategy {
    "keep-split" => GapStrategy::KeepSplit,
    "merge-gaps" => GapStrategy::MergeGaps,
});
kebab_enum!(CollisionPolicy {
    "most-links" => CollisionPolicy::MostLinks,
    "leftmost-entity" => CollisionPolicy::LeftmostEntity,
    "drop-token" => CollisionPolicy::DropToken,
});
kebab_enum!(UnalignedPolicy {
    "drop" => UnalignedPolicy::Drop,
    "error" => UnalignedPolicy::Error,
});

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionConfig {
    pub gap_strategy: GapStrategy,
    pub collision_policy: CollisionPolicy,
    pub unaligned_entity_policy: UnalignedPolicy,
}

/// Counts describing what happened to the projected entities.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub entities_in: usize,
    pub entities_projected: usize,
    /// Entities left with no target token, including those that lost every
    /// token to a collision.
    pub entities_dropped_unaligned: usize,
    /// Projected entities whose target tokens were not contiguous, whichever
    /// gap strategy was applied.
    pub entities_split: usize,
    /// Target tokens claimed by more than one entity.
    pub token_collisions: usize,
}

impl AddAssign for ProjectionReport {
    fn add_assign(&mut self, rhs: Self) {
        self.entities_in += rhs.entities_in;
        self.entities_projected += rhs.entities_projected;
        self.entities_dropped_unaligned += rhs.entities_dropped_unaligned;
        self.entities_split += rhs.entities_split;
        self.token_collisions += rhs.token_collisions;
    }
}

fn runs(sorted: &[usize]) -> Vec<Range<usize>> {
    let mut out: Vec<Range<usize>> = Vec::new();
    for &j in sorted {
        match out.last_mut() {
            Some(r) if r.end == j => r.end = j + 1,
            _ => out.push(j..j + 1),
        }
    }
    out
}

/// Projects source entities onto a target sentence of `tgt_len` tokens.
///
/// Entities are processed in order of their first source token, which is
/// what "leftmost" refers to in the collision policies. The output is sorted
/// by first target token.
pub fn project_spans(
    src_spans: &[EntitySpan],
    alignment: &Alignment,
    tgt_len: usize,
    cfg: &ProjectionConfig,
) -> Result<(Vec<EntitySpan>, ProjectionReport)> {
    if let Some(l) = alignment.iter().find(|l| l.target >= tgt_len) {
        return Err(Error::TargetOutOfRange {
            target_index: l.target,
            target_len: tgt_len,
        });
    }

    let mut order: Vec<usize> = (0..src_spans.len()).collect();
    order.sort_by_key(|&k| src_spans[k].start());
    let entities: Vec<&EntitySpan> = order.iter().map(|&k| &src_spans[k]).collect();

    // owner of each source token, then link counts per (entity, target token)
    let src_len = entities.iter().map(|e| e.end()).max().unwrap_or(0);
    let mut src_owner: Vec<Option<usize>> = vec![None; src_len];
    for (k, e) in entities.iter().enumerate() {
        for i in e.token_indices() {
            if src_owner[i].is_some() {
                return Err(Error::Overlap { index: i });
            }
            src_owner[i] = Some(k);
        }
    }
    let mut link_counts = vec![vec![0usize; tgt_len]; entities.len()];
    for link in alignment {
        if let Some(Some(k)) = src_owner.get(link.source) {
            link_counts[*k][link.target] += 1;
        }
    }

    let mut report = ProjectionReport {
        entities_in: entities.len(),
        ..Default::default()
    };
    let mut tgt_owner: Vec<Option<usize>> = vec![None; tgt_len];
    for (j, owner) in tgt_owner.iter_mut().enumerate() {
        let claimants: Vec<usize> = (0..entities.len())
            .filter(|&k| link_counts[k][j] > 0)
            .collect();
        if claimants.len() > 1 {
            report.token_collisions += 1;
        }
        *owner = match (claimants.len(), cfg.collision_policy) {
            (0, _) => None,
            (1, _) => Some(claimants[0]),
            (_, CollisionPolicy::DropToken) => None,
            (_, CollisionPolicy::LeftmostEntity) => Some(claimants[0]),
            (_, CollisionPolicy::MostLinks) => claimants
                .iter()
                .copied()
                .max_by(|&a, &b| link_counts[a][j].cmp(&link_counts[b][j]).then(b.cmp(&a))),
        };
    }

    let mut assigned: Vec<Vec<usize>> = vec![Vec::new(); entities.len()];
    for (j, owner) in tgt_owner.iter().enumerate() {
        if let Some(k) = owner {
            assigned[*k].push(j);
        }
    }

    let mut taken = tgt_owner.iter().map(Option::is_some).collect::<Vec<_>>();
    let mut projected = Vec::new();
    for (k, entity) in entities.iter().enumerate() {
        let tokens = &assigned[k];
        if tokens.is_empty() {
            if cfg.unaligned_entity_policy == UnalignedPolicy::Error {
                return Err(Error::UnalignedEntity {
                    label: entity.label().to_string(),
                    start: entity.start(),
                });
            }
            report.entities_dropped_unaligned += 1;
            continue;
        }
        let pieces = runs(tokens);
        if pieces.len() > 1 {
            report.entities_split += 1;
        }
        let fragments = match cfg.gap_strategy {
            GapStrategy::KeepSplit => pieces,
            GapStrategy::MergeGaps => {
                let merged = merge_fragment(k, tokens, &tgt_owner, &taken);
                merged.clone().for_each(|j| taken[j] = true);
                vec![merged]
            }
        };
        projected.push(EntitySpan::new(entity.label().clone(), fragments)?);
        report.entities_projected += 1;
    }

    projected.sort_by_key(EntitySpan::start);
    debug_assert!(no_overlap(&projected, tgt_len));
    Ok((projected, report))
}

/// Widest gap-filling fragment for entity `k` that stays clear of tokens owned
/// by other entities and of gap tokens already filled by earlier merges.
///
/// Normally `[min, max + 1)` of the entity's tokens. When a foreign token sits
/// inside that range the range is cut there and the piece holding the most of
/// the entity's own tokens is kept (ties: leftmost).
fn merge_fragment(
    k: usize,
    tokens: &[usize],
    tgt_owner: &[Option<usize>],
    taken: &[bool],
) -> Range<usize> {
    let (lo, hi) = (tokens[0], tokens[tokens.len() - 1]);
    let blocked = |j: usize| tgt_owner[j] != Some(k) && (tgt_owner[j].is_some() || taken[j]);
    let mut best: Option<(usize, Range<usize>)> = None;
    let mut start = lo;
    for j in lo..=hi + 1 {
        if j == hi + 1 || blocked(j) {
            if start < j {
                let own = (start..j).filter(|&t| tgt_owner[t] == Some(k)).count();
                // trim unowned edges so the fragment starts and ends on own tokens
                let first = (start..j).find(|&t| tgt_owner[t] == Some(k));
                let last = (start..j).rev().find(|&t| tgt_owner[t] == Some(k));
                if let (Some(a), Some(b)) = (first, last) {
                    if best.as_ref().is_none_or(|(n, _)| own > *n) {
                        best = Some((own, a..b + 1));
                    }
                }
            }
            start = j + 1;
        }
    }
    best.expect("entity owns at least one token").1
}

fn no_overlap(spans: &[EntitySpan], len: usize) -> bool {
    let mut seen = vec![false; len];
    spans.iter().flat_map(|s| s.token_indices()).all(|j| {
        let fresh = !seen[j];
        seen[j] = true;
        fresh
    })
}

fn project_sentence(
    labeled: &TaggedSentence,
    pair: &SentencePair,
    alignment: &Alignment,
    cfg: &ProjectionConfig,
) -> Result<(TaggedSentence, ProjectionReport)> {
    if labeled.len() != pair.source.len() {
        return Err(Error::mismatch(
            "labeled tokens vs pair source tokens",
            labeled.len(),
            pair.source.len(),
        ));
    }
    alignment.check_bounds(pair.source.len(), pair.target.len())?;
    let spans = decode_bio(labeled.tags())?;
    let (projected, report) = project_spans(&spans, alignment, pair.target.len(), cfg)?;
    let tags = encode_bio(&projected, pair.target.len())?;
    let tokens: Vec<Token> = pair.target.clone();
    Ok((TaggedSentence::new(tokens, tags)?, report))
}

/// Builds a labeled target-side corpus from a labeled source corpus, its
/// sentence pairs and their alignments.
pub fn project_corpus(
    labeled_src: &[TaggedSentence],
    pairs: &[SentencePair],
    alignments: &[Alignment],
    cfg: &ProjectionConfig,
) -> Result<(Vec<TaggedSentence>, ProjectionReport)> {
    if labeled_src.len() != pairs.len() {
        return Err(Error::mismatch(
            "labeled sentences vs sentence pairs",
            labeled_src.len(),
            pairs.len(),
        ));
    }
    if pairs.len() != alignments.len() {
        return Err(Error::mismatch(
            "sentence pairs vs alignments",
            pairs.len(),
            alignments.len(),
        ));
    }
    let mut out = Vec::with_capacity(pairs.len());
    let mut total = ProjectionReport::default();
    for (index, ((labeled, pair), alignment)) in
        labeled_src.iter().zip(pairs).zip(alignments).enumerate()
    {
        let (sentence, report) =
            project_sentence(labeled, pair, alignment, cfg).map_err(|e| e.in_sentence(index))?;
        out.push(sentence);
        total += report;
    }
    Ok((out, total))
}

/// Moves predictions made on translated sentences back onto the originals.
///
/// `pairs` must have the translation (the side carrying predictions) as
/// source and the original sentence as target; links run in the same
/// direction.
pub fn back_project_corpus(
    pred_on_translation: &[TaggedSentence],
    pairs: &[SentencePair],
    alignments: &[Alignment],
    cfg: &ProjectionConfig,
) -> Result<(Vec<TaggedSentence>, ProjectionReport)> {
    project_corpus(pred_on_translation, pairs, alignments, cfg)
}

/// One `(source token, target token)` pair per link, in link order.
pub fn extract_aligned_pairs(pair: &SentencePair, alignment: &Alignment) -> Vec<(Token, Token)> {
    alignment
        .iter()
        .filter_map(|l| {
            Some((
                pair.source.get(l.source)?.clone(),
                pair.target.get(l.target)?.clone(),
            ))
        })
        .collect()
}
