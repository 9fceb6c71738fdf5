//! Documents, mentions, chains and annotation sets.
//!
//! Mentions are addressed the way the coreference XML addresses them: a
//! sentence number plus an inclusive, 1-based word range. Two mentions from
//! different files are the same mention iff their [`Span`]s are equal; ids
//! are only meaningful within one file.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

pub type MentionId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub pos: String,
    /// Sentence-local index of the dependency head, 0 for the root.
    pub dep_head: Option<usize>,
    pub dep_rel: Option<String>,
    /// 1-based position within the sentence.
    pub word_ix: usize,
}

impl Token {
    pub fn new(word_ix: usize, surface: impl Into<String>) -> Self {
        let surface = surface.into();
        Token {
            lemma: surface.clone(),
            surface,
            pos: String::new(),
            dep_head: None,
            dep_rel: None,
            word_ix,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub no: String,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token at a 1-based word index.
    pub fn word(&self, ix: usize) -> Option<&Token> {
        ix.checked_sub(1).and_then(|i| self.tokens.get(i))
    }
}

/// A validated document. Sentence order defines document order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    id: String,
    genre: Option<String>,
    sentences: Vec<Sentence>,
    index: HashMap<String, usize>,
    offsets: Vec<usize>,
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        genre: Option<String>,
        sentences: Vec<Sentence>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        if sentences.is_empty() {
            return Err(ModelError::EmptyDocument(id));
        }
        let mut index = HashMap::with_capacity(sentences.len());
        let mut offsets = Vec::with_capacity(sentences.len());
        let mut offset = 0;
        for (pos, s) in sentences.iter().enumerate() {
            if index.insert(s.no.clone(), pos).is_some() {
                return Err(ModelError::DuplicateSentence(s.no.clone()));
            }
            for (i, t) in s.tokens.iter().enumerate() {
                if t.word_ix != i + 1 {
                    return Err(ModelError::WordIndexGap {
                        sentence: s.no.clone(),
                        expected: i + 1,
                        found: t.word_ix,
                    });
                }
                if t.surface.is_empty() {
                    return Err(ModelError::EmptySurface {
                        sentence: s.no.clone(),
                        word: t.word_ix,
                    });
                }
                if let Some(head) = t.dep_head {
                    if head > s.tokens.len() {
                        return Err(ModelError::HeadOutOfRange {
                            sentence: s.no.clone(),
                            word: t.word_ix,
                            head,
                        });
                    }
                }
            }
            offsets.push(offset);
            offset += s.tokens.len();
        }
        Ok(Document {
            id,
            genre,
            sentences,
            index,
            offsets,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn genre(&self) -> Option<&str> {
        self.genre.as_deref()
    }

    pub fn sentences(&self) -> &[Sentence] {
        &self.sentences
    }

    pub fn sentence(&self, no: &str) -> Option<&Sentence> {
        self.index.get(no).map(|&i| &self.sentences[i])
    }

    pub fn sentence_position(&self, no: &str) -> Option<usize> {
        self.index.get(no).copied()
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    /// 0-based offset of a word across the whole document.
    pub fn global_offset(&self, no: &str, word_ix: usize) -> Result<usize, ModelError> {
        let pos = self
            .sentence_position(no)
            .ok_or_else(|| ModelError::UnknownSentence(no.to_string()))?;
        Ok(self.offsets[pos] + word_ix - 1)
    }

    /// Sort key realizing document order on spans.
    pub fn order_key(&self, span: &Span) -> Result<(usize, usize, usize), ModelError> {
        let pos = self
            .sentence_position(&span.sentence_no)
            .ok_or_else(|| ModelError::UnknownSentence(span.sentence_no.clone()))?;
        Ok((pos, span.from, span.to))
    }

    pub fn check_mention(&self, m: &Mention) -> Result<(), ModelError> {
        let s = self
            .sentence(&m.span.sentence_no)
            .ok_or_else(|| ModelError::UnknownSentence(m.span.sentence_no.clone()))?;
        if m.span.from < 1 || m.span.from > m.span.to || m.span.to > s.len() {
            return Err(ModelError::SpanOutOfBounds {
                id: m.id,
                sentence: s.no.clone(),
                from: m.span.from,
                to: m.span.to,
                len: s.len(),
            });
        }
        Ok(())
    }

    pub fn tokens_of(&self, span: &Span) -> Result<&[Token], ModelError> {
        let s = self
            .sentence(&span.sentence_no)
            .ok_or_else(|| ModelError::UnknownSentence(span.sentence_no.clone()))?;
        if span.from < 1 || span.from > span.to || span.to > s.len() {
            return Err(ModelError::SpanOutOfBounds {
                id: 0,
                sentence: s.no.clone(),
                from: span.from,
                to: span.to,
                len: s.len(),
            });
        }
        Ok(&s.tokens[span.from - 1..span.to])
    }

    /// Surfaces of the span joined by single spaces.
    pub fn text_of(&self, span: &Span) -> Result<String, ModelError> {
        let toks = self.tokens_of(span)?;
        Ok(toks
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" "))
    }
}

/// Inclusive word range inside one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Span {
    pub sentence_no: String,
    pub from: usize,
    pub to: usize,
}

impl Span {
    pub fn new(sentence_no: impl Into<String>, from: usize, to: usize) -> Self {
        Span {
            sentence_no: sentence_no.into(),
            from,
            to,
        }
    }

    pub fn len(&self) -> usize {
        self.to + 1 - self.from
    }

    pub fn is_empty(&self) -> bool {
        self.to < self.from
    }

    pub fn overlaps(&self, other: &Span) -> bool {
        self.sentence_no == other.sentence_no && self.from <= other.to && other.from <= self.to
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}..{}]", self.sentence_no, self.from, self.to)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mention {
    pub id: MentionId,
    pub span: Span,
}

impl Mention {
    pub fn new(id: MentionId, sentence_no: impl Into<String>, from: usize, to: usize) -> Self {
        Mention {
            id,
            span: Span::new(sentence_no, from, to),
        }
    }
}

/// True iff both mentions share at least one token.
pub fn overlaps(a: &Mention, b: &Mention) -> bool {
    a.span.overlaps(&b.span)
}

pub fn document_order_compare(
    a: &Mention,
    b: &Mention,
    doc: &Document,
) -> Result<Ordering, ModelError> {
    Ok(doc.order_key(&a.span)?.cmp(&doc.order_key(&b.span)?))
}

/// Sorts mentions into document order; mentions of unknown sentences are an error.
pub fn sort_document_order(mentions: &mut [Mention], doc: &Document) -> Result<(), ModelError> {
    let mut keyed = Vec::with_capacity(mentions.len());
    for m in mentions.iter() {
        keyed.push((doc.order_key(&m.span)?, m.id));
    }
    let mut order: Vec<usize> = (0..mentions.len()).collect();
    order.sort_by_key(|&i| keyed[i]);
    let sorted: Vec<Mention> = order.into_iter().map(|i| mentions[i].clone()).collect();
    mentions.clone_from_slice(&sorted);
    Ok(())
}

/// A set of mentions referring to one entity, by id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub members: Vec<MentionId>,
}

impl Chain {
    pub fn new(members: impl IntoIterator<Item = MentionId>) -> Self {
        Chain {
            members: members.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The chains produced by one annotator or system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationSet {
    pub annotator: String,
    pub chains: Vec<Chain>,
}

impl AnnotationSet {
    pub fn new(annotator: impl Into<String>, chains: Vec<Chain>) -> Self {
        AnnotationSet {
            annotator: annotator.into(),
            chains,
        }
    }

    pub fn without_singletons(&self) -> AnnotationSet {
        AnnotationSet {
            annotator: self.annotator.clone(),
            chains: self.chains.iter().filter(|c| c.len() >= 2).cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

/// Whether a partition is raw annotator output or an adjudicated gold standard.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    Raw,
    Gold,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    DuplicateMembership { mention: MentionId, chains: Vec<usize> },
    UnknownMention { mention: MentionId, chain: usize },
    SmallChain { chain: usize, size: usize },
    OverlappingMembers { chain: usize, a: MentionId, b: MentionId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub severity: Severity,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match &self.kind {
            ViolationKind::DuplicateMembership { mention, chains } => {
                write!(f, "{level}: mention {mention} appears in chains {chains:?}")
            }
            ViolationKind::UnknownMention { mention, chain } => {
                write!(f, "{level}: chain {chain} references unknown mention {mention}")
            }
            ViolationKind::SmallChain { chain, size } => {
                write!(f, "{level}: chain {chain} has {size} member(s)")
            }
            ViolationKind::OverlappingMembers { chain, a, b } => {
                write!(f, "{level}: chain {chain} contains overlapping mentions {a} and {b}")
            }
        }
    }
}

/// Checks that `annotation` is a partition over the declared `mentions`.
///
/// Mentions that appear in no chain are unassigned, which is not a violation.
pub fn validate_partition(
    annotation: &AnnotationSet,
    mentions: &[Mention],
    kind: PartitionKind,
) -> Vec<Violation> {
    let by_id: HashMap<MentionId, &Mention> = mentions.iter().map(|m| (m.id, m)).collect();
    let mut out = Vec::new();
    let mut seen: HashMap<MentionId, Vec<usize>> = HashMap::new();
    for (ci, chain) in annotation.chains.iter().enumerate() {
        let mut local = HashSet::new();
        for &id in &chain.members {
            if !by_id.contains_key(&id) {
                out.push(Violation {
                    severity: Severity::Error,
                    kind: ViolationKind::UnknownMention { mention: id, chain: ci },
                });
            }
            if local.insert(id) {
                seen.entry(id).or_default().push(ci);
            }
        }
        if chain.len() < 2 {
            out.push(Violation {
                severity: Severity::Warning,
                kind: ViolationKind::SmallChain {
                    chain: ci,
                    size: chain.len(),
                },
            });
        }
        let members: Vec<&Mention> = chain.members.iter().filter_map(|id| by_id.get(id).copied()).collect();
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                if a.id != b.id && overlaps(a, b) {
                    out.push(Violation {
                        severity: match kind {
                            PartitionKind::Raw => Severity::Warning,
                            PartitionKind::Gold => Severity::Error,
                        },
                        kind: ViolationKind::OverlappingMembers { chain: ci, a: a.id, b: b.id },
                    });
                }
            }
        }
    }
    let dupes: BTreeSet<MentionId> = seen
        .iter()
        .filter(|(_, cs)| cs.len() > 1)
        .map(|(&id, _)| id)
        .collect();
    for id in dupes {
        out.push(Violation {
            severity: Severity::Error,
            kind: ViolationKind::DuplicateMembership {
                mention: id,
                chains: seen[&id].clone(),
            },
        });
    }
    out
}
