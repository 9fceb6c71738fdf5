use std::collections::{BTreeSet, HashMap, HashSet};

use serde::Serialize;

use super::BaselineError;
use crate::model::{Document, Mention, Sentence, Span, Token};

const DEFAULT_PRONOUNS: &str = include_str!("../../resources/pronouns_tr.txt");

/// Lower-cased pronoun lemmas.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PronounList {
    lemmas: HashSet<String>,
}

impl PronounList {
    /// One lemma per line; blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Self {
        let lemmas = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_lowercase)
            .collect();
        PronounList { lemmas }
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.lemmas.contains(&lemma.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }
}

impl Default for PronounList {
    fn default() -> Self {
        PronounList::parse(DEFAULT_PRONOUNS)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum MentionType {
    Pronoun,
    ProperNoun,
    NounPhrase,
}

impl MentionType {
    pub const ALL: [MentionType; 3] = [MentionType::Pronoun, MentionType::ProperNoun, MentionType::NounPhrase];

    pub fn name(self) -> &'static str {
        match self {
            MentionType::Pronoun => "pronoun",
            MentionType::ProperNoun => "proper",
            MentionType::NounPhrase => "np",
        }
    }
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

/// The part of a surface before an apostrophe (`'` or `’`), or `None` if
/// there is none.
fn before_apostrophe(surface: &str) -> Option<&str> {
    surface.find(['\'', '’']).map(|i| &surface[..i])
}

/// A token with its case suffix removed: the text before an apostrophe if
/// the surface has one, the lemma otherwise.
pub fn strip_case(token: &Token) -> &str {
    before_apostrophe(&token.surface).unwrap_or(&token.lemma)
}

pub fn is_nominal(pos: &str) -> bool {
    matches!(pos.to_ascii_lowercase().as_str(), "noun" | "prop" | "propn")
}

fn require_dependencies(doc: &Document) -> Result<(), BaselineError> {
    for s in doc.sentences() {
        for t in &s.tokens {
            if t.dep_head.is_none() {
                return Err(BaselineError::MissingDependencies {
                    sentence: s.no.clone(),
                    word: t.word_ix,
                });
            }
        }
    }
    Ok(())
}

/// Whether `word` lies in the dependency subtree rooted at `root`.
fn in_subtree(s: &Sentence, word: usize, root: usize) -> bool {
    let mut cur = word;
    for _ in 0..=s.len() {
        if cur == root {
            return true;
        }
        match s.word(cur).and_then(|t| t.dep_head) {
            Some(h) if h != 0 => cur = h,
            _ => return false,
        }
    }
    false
}

/// Rule-based candidate mentions of a document, in document order with ids
/// numbered from 0.
///
/// The candidates are the union of
/// * noun phrases: each nominal token extended leftwards over the adjacent
///   tokens of its own dependency subtree,
/// * tokens whose lemma is a pronoun,
/// * nouns with a capitalized lemma,
/// * tokens whose case-stripped surface is capitalized and occurs at least
///   twice in the document, sentence-initial occurrences included.
pub fn detect_mentions(doc: &Document, pronouns: &PronounList) -> Result<Vec<Mention>, BaselineError> {
    require_dependencies(doc)?;
    let mut spans: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    let mut capitalized: HashMap<&str, usize> = HashMap::new();
    for s in doc.sentences() {
        for t in &s.tokens {
            let key = before_apostrophe(&t.surface).unwrap_or(&t.surface);
            if starts_upper(key) {
                *capitalized.entry(key).or_default() += 1;
            }
        }
    }
    for (pos, s) in doc.sentences().iter().enumerate() {
        for t in &s.tokens {
            let ix = t.word_ix;
            let nominal = is_nominal(&t.pos);
            if nominal {
                let mut from = ix;
                while from > 1 && in_subtree(s, from - 1, ix) {
                    from -= 1;
                }
                spans.insert((pos, from, ix));
            }
            let key = before_apostrophe(&t.surface).unwrap_or(&t.surface);
            let single = pronouns.contains(&t.lemma)
                || (nominal && starts_upper(&t.lemma))
                || capitalized.get(key).is_some_and(|&n| n >= 2);
            if single {
                spans.insert((pos, ix, ix));
            }
        }
    }
    let sentences = doc.sentences();
    Ok(spans
        .into_iter()
        .enumerate()
        .map(|(id, (pos, from, to))| Mention::new(id as u32, sentences[pos].no.clone(), from, to))
        .collect())
}

/// Case-stripped forms of the capitalized tokens that are not
/// sentence-initial.
pub fn proper_noun_strings(doc: &Document) -> HashSet<String> {
    doc.sentences()
        .iter()
        .flat_map(|s| &s.tokens)
        .filter(|t| t.word_ix != 1 && starts_upper(&t.surface))
        .map(|t| strip_case(t).to_lowercase())
        .collect()
}

/// The last token of the span, which is its head in a head-final language.
pub fn head_token<'d>(doc: &'d Document, span: &Span) -> Result<&'d Token, BaselineError> {
    Ok(doc.tokens_of(span)?.last().expect("spans are non-empty"))
}

pub fn classify_mention_type(
    mention: &Mention,
    doc: &Document,
    pronouns: &PronounList,
    proper: &HashSet<String>,
) -> Result<MentionType, BaselineError> {
    let head = head_token(doc, &mention.span)?;
    Ok(if pronouns.contains(&head.lemma) {
        MentionType::Pronoun
    } else if proper.contains(&strip_case(head).to_lowercase()) {
        MentionType::ProperNoun
    } else {
        MentionType::NounPhrase
    })
}
