use std::collections::HashSet;
use std::sync::OnceLock;

use super::mentions::{classify_mention_type, proper_noun_strings, strip_case, MentionType, PronounList};
use super::BaselineError;
use crate::model::{Document, Mention};

/// Binary sparse features of a mention pair: the indices set to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FeatureVector {
    pub active: Vec<usize>,
}

impl FeatureVector {
    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.active.iter().map(|&i| weights[i]).sum()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.active.binary_search(&index).is_ok()
    }
}

/// Everything feature extraction needs about one mention.
#[derive(Debug, Clone, PartialEq)]
pub struct MentionInfo {
    pub mention: Mention,
    pub ty: MentionType,
    head_surface: String,
    head_lemma: String,
    /// Case-stripped, lower-cased forms of every token.
    stripped: Vec<String>,
    /// Concatenated surface up to the first apostrophe, lower-cased.
    compact: String,
}

impl MentionInfo {
    pub fn head_surface(&self) -> &str {
        &self.head_surface
    }
}

/// Per-document mention descriptions, in the order given.
pub fn describe_mentions(
    doc: &Document,
    mentions: &[Mention],
    pronouns: &PronounList,
) -> Result<Vec<MentionInfo>, BaselineError> {
    let proper: HashSet<String> = proper_noun_strings(doc);
    mentions
        .iter()
        .map(|m| {
            let toks = doc.tokens_of(&m.span)?;
            let head = toks.last().expect("spans are non-empty");
            let joined: String = toks.iter().map(|t| t.surface.as_str()).collect();
            let compact = joined.split(['\'', '’']).next().unwrap_or("").to_lowercase();
            Ok(MentionInfo {
                mention: m.clone(),
                ty: classify_mention_type(m, doc, pronouns, &proper)?,
                head_surface: head.surface.to_lowercase(),
                head_lemma: head.lemma.to_lowercase(),
                stripped: toks.iter().map(|t| strip_case(t).to_lowercase()).collect(),
                compact,
            })
        })
        .collect()
}

// === feature space ========================================================

const TYPE_FEATURES: usize = 9;
const MATCH_FEATURES: usize = 12;

/// Dimensionality: 9 type features, 12 match features and every
/// type×match conjunction.
pub const FEATURE_COUNT: usize = TYPE_FEATURES + MATCH_FEATURES + TYPE_FEATURES * MATCH_FEATURES;

const MATCH_NAMES: [&str; MATCH_FEATURES] = [
    "head_match",
    "head_lemma_match",
    "last_proper_part",
    "acronym",
    "acronym_rev",
    "acronym_or",
    "head_substring",
    "head_substring_rev",
    "head_substring_or",
    "lemma_substring",
    "lemma_substring_rev",
    "lemma_substring_or",
];

fn type_names() -> Vec<String> {
    let mut v = Vec::with_capacity(TYPE_FEATURES);
    for side in ["m1", "m2"] {
        for t in MentionType::ALL {
            v.push(format!("{side}_{}", t.name()));
        }
    }
    for t in MentionType::ALL {
        v.push(format!("both_{}", t.name()));
    }
    v
}

/// Stable names of all features, indexed like [`FeatureVector::active`].
pub fn feature_names() -> &'static [String] {
    static NAMES: OnceLock<Vec<String>> = OnceLock::new();
    NAMES.get_or_init(|| {
        let types = type_names();
        let mut names = types.clone();
        names.extend(MATCH_NAMES.iter().map(|s| s.to_string()));
        for t in &types {
            for m in MATCH_NAMES {
                names.push(format!("{t}&{m}"));
            }
        }
        names
    })
}

fn type_slot(t: MentionType) -> usize {
    match t {
        MentionType::Pronoun => 0,
        MentionType::ProperNoun => 1,
        MentionType::NounPhrase => 2,
    }
}

/// m1 is an acronym of m2: m1's compact surface equals the initials of
/// m2's tokens.
fn acronym(m1: &MentionInfo, m2: &MentionInfo) -> bool {
    if m2.stripped.len() < 2 || m1.compact.is_empty() {
        return false;
    }
    let initials: String = m2.stripped.iter().filter_map(|w| w.chars().next()).collect();
    m1.compact == initials
}

fn substring(a: &str, b: &str) -> bool {
    !a.is_empty() && b.contains(a)
}

/// Features for the ordered pair (m1, m2), m1 preceding m2.
pub fn extract_features(m1: &MentionInfo, m2: &MentionInfo) -> FeatureVector {
    let mut types = Vec::with_capacity(3);
    types.push(type_slot(m1.ty));
    types.push(3 + type_slot(m2.ty));
    if m1.ty == m2.ty {
        types.push(6 + type_slot(m1.ty));
    }

    let both_proper = m1.ty == MentionType::ProperNoun && m2.ty == MentionType::ProperNoun;
    let (acr, acr_rev) = (acronym(m1, m2), acronym(m2, m1));
    let (hs, hs_rev) = (substring(&m1.head_surface, &m2.head_surface), substring(&m2.head_surface, &m1.head_surface));
    let (ls, ls_rev) = (substring(&m1.head_lemma, &m2.head_lemma), substring(&m2.head_lemma, &m1.head_lemma));
    let matches = [
        m1.head_surface == m2.head_surface,
        m1.head_lemma == m2.head_lemma,
        both_proper && m1.stripped.last() == m2.stripped.last(),
        acr,
        acr_rev,
        acr || acr_rev,
        hs,
        hs_rev,
        hs || hs_rev,
        ls,
        ls_rev,
        ls || ls_rev,
    ];

    let mut active = types.clone();
    let on: Vec<usize> = (0..MATCH_FEATURES).filter(|&i| matches[i]).collect();
    active.extend(on.iter().map(|&i| TYPE_FEATURES + i));
    for &t in &types {
        for &m in &on {
            active.push(TYPE_FEATURES + MATCH_FEATURES + t * MATCH_FEATURES + m);
        }
    }
    active.sort_unstable();
    FeatureVector { active }
}
