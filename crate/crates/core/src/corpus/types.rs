use std::collections::BTreeSet;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::corpus::bio::Tag;
use crate::error::{Error, Result};

/// A whitespace-free token and its position in the sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Token {
    pub text: String,
    pub index: usize,
}

impl Token {
    pub fn new(text: impl Into<String>, index: usize) -> Result<Self> {
        let text = text.into();
        if text.is_empty() {
            return Err(Error::InvalidSentence(format!("empty token at {index}")));
        }
        if text.chars().any(char::is_whitespace) {
            return Err(Error::InvalidSentence(format!(
                "token {text:?} at {index} contains whitespace"
            )));
        }
        Ok(Token { text, index })
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Builds indexed tokens from raw strings.
pub fn tokens_from<I, S>(words: I) -> Result<Vec<Token>>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    words
        .into_iter()
        .enumerate()
        .map(|(i, w)| Token::new(w, i))
        .collect()
}

/// Entity type name, e.g. `DRUG` or `FREQUENCY`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EntityLabel(String);

impl EntityLabel {
    /// The medication label set used by the clinical corpora.
    pub const MEDICATION: [&'static str; 6] = [
        "DRUG",
        "STRENGTH",
        "FREQUENCY",
        "DURATION",
        "DOSAGE",
        "FORM",
    ];

    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty()
            || !name.is_ascii()
            || name
                .chars()
                .any(|c| c.is_ascii_whitespace() || c.is_ascii_control())
        {
            return Err(Error::InvalidTag(name));
        }
        Ok(EntityLabel(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A labeled entity made of one or more disjoint token ranges.
///
/// Projected entities may be discontinuous in the target sentence; each
/// fragment is a half-open `[start, end)` range and fragments are kept sorted
/// with no overlap between them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EntitySpan {
    label: EntityLabel,
    fragments: Vec<Range<usize>>,
}

impl EntitySpan {
    pub fn new(label: EntityLabel, fragments: Vec<Range<usize>>) -> Result<Self> {
        if fragments.is_empty() {
            return Err(Error::InvalidSpan(format!("{label} has no fragments")));
        }
        for (k, frag) in fragments.iter().enumerate() {
            if frag.start >= frag.end {
                return Err(Error::InvalidSpan(format!(
                    "{label}: empty fragment {}..{}",
                    frag.start, frag.end
                )));
            }
            if k > 0 && fragments[k - 1].end > frag.start {
                return Err(Error::InvalidSpan(format!(
                    "{label}: fragments {:?} and {:?} are unsorted or overlap",
                    fragments[k - 1],
                    frag
                )));
            }
        }
        Ok(EntitySpan { label, fragments })
    }

    pub fn contiguous(label: EntityLabel, range: Range<usize>) -> Result<Self> {
        Self::new(label, vec![range])
    }

    pub fn label(&self) -> &EntityLabel {
        &self.label
    }

    pub fn fragments(&self) -> &[Range<usize>] {
        &self.fragments
    }

    pub fn start(&self) -> usize {
        self.fragments[0].start
    }

    /// One past the last covered token.
    pub fn end(&self) -> usize {
        self.fragments[self.fragments.len() - 1].end
    }

    pub fn is_split(&self) -> bool {
        self.fragments.len() > 1
    }

    /// Covered token indices in increasing order.
    pub fn token_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.fragments.iter().flat_map(|f| f.clone())
    }
}

impl fmt::Display for EntitySpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @", self.label)?;
        for frag in &self.fragments {
            write!(f, " [{},{})", frag.start, frag.end)?;
        }
        Ok(())
    }
}

/// Tokens with one BIO tag each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaggedSentence {
    tokens: Vec<Token>,
    tags: Vec<String>,
}

impl TaggedSentence {
    pub fn new(tokens: Vec<Token>, tags: Vec<String>) -> Result<Self> {
        if tokens.is_empty() {
            return Err(Error::InvalidSentence("sentence has no tokens".into()));
        }
        if tokens.len() != tags.len() {
            return Err(Error::mismatch("tokens vs tags", tokens.len(), tags.len()));
        }
        for (i, tok) in tokens.iter().enumerate() {
            if tok.index != i {
                return Err(Error::InvalidSentence(format!(
                    "token {:?} has index {} at position {i}",
                    tok.text, tok.index
                )));
            }
        }
        for tag in &tags {
            Tag::parse(tag)?;
        }
        Ok(TaggedSentence { tokens, tags })
    }

    pub fn from_strings<W, T>(words: W, tags: T) -> Result<Self>
    where
        W: IntoIterator,
        W::Item: Into<String>,
        T: IntoIterator,
        T::Item: Into<String>,
    {
        let tokens = tokens_from(words)?;
        Self::new(tokens, tags.into_iter().map(Into::into).collect())
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.text.as_str())
    }
}

/// A sentence and its translation, both tokenized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentencePair {
    pub source: Vec<Token>,
    pub target: Vec<Token>,
}

impl SentencePair {
    pub fn new(source: Vec<Token>, target: Vec<Token>) -> Result<Self> {
        if source.is_empty() || target.is_empty() {
            return Err(Error::InvalidSentence(
                "sentence pair has an empty side".into(),
            ));
        }
        Ok(SentencePair { source, target })
    }

    /// Splits both strings on whitespace.
    pub fn from_text(source: &str, target: &str) -> Result<Self> {
        Self::new(
            tokens_from(source.split_whitespace())?,
            tokens_from(target.split_whitespace())?,
        )
    }
}

/// One alignment link from a source position to a target position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub source: usize,
    pub target: usize,
}

impl Link {
    pub fn new(source: usize, target: usize) -> Self {
        Link { source, target }
    }
}

impl From<(usize, usize)> for Link {
    fn from((source, target): (usize, usize)) -> Self {
        Link { source, target }
    }
}

/// A set of word-alignment links, kept sorted and deduplicated.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Alignment {
    links: BTreeSet<Link>,
}

impl Alignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, link: impl Into<Link>) -> bool {
        self.links.insert(link.into())
    }

    pub fn contains(&self, link: &Link) -> bool {
        self.links.contains(link)
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// Links in (source, target) order.
    pub fn iter(&self) -> impl Iterator<Item = &Link> {
        self.links.iter()
    }

    pub fn links(&self) -> &BTreeSet<Link> {
        &self.links
    }

    /// The identity alignment `{(i, i) | i < len}`.
    pub fn identity(len: usize) -> Self {
        (0..len).map(|i| (i, i)).collect()
    }

    /// Checks every link against the given sentence lengths.
    pub fn check_bounds(&self, source_len: usize, target_len: usize) -> Result<()> {
        match self
            .links
            .iter()
            .find(|l| l.source >= source_len || l.target >= target_len)
        {
            Some(l) => Err(Error::LinkOutOfRange {
                source_index: l.source,
                target_index: l.target,
                source_len,
                target_len,
            }),
            None => Ok(()),
        }
    }
}

impl<L: Into<Link>> FromIterator<L> for Alignment {
    fn from_iter<I: IntoIterator<Item = L>>(iter: I) -> Self {
        Alignment {
            links: iter.into_iter().map(Into::into).collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Alignment {
    type Item = &'a Link;
    type IntoIter = std::collections::btree_set::Iter<'a, Link>;

    fn into_iter(self) -> Self::IntoIter {
        self.links.iter()
    }
}

/// Reference alignment with sure links `S` and possible links `P ⊇ S`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldAlignment {
    sure: Alignment,
    possible: Alignment,
}

impl GoldAlignment {
    /// `possible` is widened to include every sure link.
    pub fn new(sure: Alignment, possible: Alignment) -> Self {
        let possible = possible.iter().chain(sure.iter()).copied().collect();
        GoldAlignment { sure, possible }
    }

    /// A gold alignment whose links are all sure.
    pub fn all_sure(links: Alignment) -> Self {
        GoldAlignment {
            possible: links.clone(),
            sure: links,
        }
    }

    pub fn sure(&self) -> &Alignment {
        &self.sure
    }

    pub fn possible(&self) -> &Alignment {
        &self.possible
    }
}
