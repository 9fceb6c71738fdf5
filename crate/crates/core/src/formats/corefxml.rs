//! Coreference XML: mentions addressed by sentence number and word range,
//! plus chains referencing mentions by id.
//!
//! ```xml
//! <?xml version="1.0" encoding="UTF-8"?>
//! <coref docId="d1">
//!   <mentions>
//!     <mention id="0" sentenceNo="00016112313.1" fromWordIX="1" toWordIX="1">Prof._Dr._Semih_Koray'ın</mention>
//!     <mention id="1" sentenceNo="00016112313.2" fromWordIX="1" toWordIX="1">Koray</mention>
//!   </mentions>
//!   <chains>
//!     <chain>
//!       <mentionRef id="0"/>
//!       <mentionRef id="1"/>
//!     </chain>
//!   </chains>
//! </coref>
//! ```
//!
//! Element text of `<mention>` is informational and ignored on input.

use std::collections::{HashMap, HashSet};

use super::xml::{element_children, escape_attr, escape_text, expect_tag, line_of, parse_number, required_attr, to_utf8};
use crate::error::FormatError;
use crate::model::{AnnotationSet, Chain, Document, Mention, MentionId, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlMention {
    pub mention: Mention,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorefXml {
    pub doc_id: String,
    pub mentions: Vec<XmlMention>,
    pub chains: Vec<Chain>,
}

impl CorefXml {
    pub fn new(doc_id: impl Into<String>, mentions: Vec<Mention>, chains: Vec<Chain>) -> Self {
        CorefXml {
            doc_id: doc_id.into(),
            mentions: mentions
                .into_iter()
                .map(|mention| XmlMention {
                    mention,
                    text: String::new(),
                })
                .collect(),
            chains,
        }
    }

    pub fn mention_list(&self) -> Vec<Mention> {
        self.mentions.iter().map(|m| m.mention.clone()).collect()
    }

    pub fn annotation(&self, annotator: impl Into<String>) -> AnnotationSet {
        AnnotationSet::new(annotator, self.chains.clone())
    }

    /// Chains as span sets.
    pub fn span_chains(&self) -> Vec<Vec<Span>> {
        let by_id: HashMap<MentionId, &Span> = self.mentions.iter().map(|m| (m.mention.id, &m.mention.span)).collect();
        self.chains
            .iter()
            .map(|c| c.members.iter().filter_map(|id| by_id.get(id).map(|s| (*s).clone())).collect())
            .collect()
    }

    /// Sorts into document order and renumbers ids `0..n` in that order.
    ///
    /// Two files describing the same spans and chains have identical
    /// canonical forms.
    pub fn canonicalize(&self, doc: &Document) -> Result<CorefXml, FormatError> {
        let mut order: Vec<((usize, usize, usize), MentionId, usize)> = Vec::with_capacity(self.mentions.len());
        for (i, m) in self.mentions.iter().enumerate() {
            doc.check_mention(&m.mention)?;
            order.push((doc.order_key(&m.mention.span)?, m.mention.id, i));
        }
        order.sort();
        let mut renumber = HashMap::with_capacity(order.len());
        let mut mentions = Vec::with_capacity(order.len());
        for (new_id, &(_, old_id, i)) in order.iter().enumerate() {
            let new_id = new_id as MentionId;
            renumber.insert(old_id, new_id);
            let span = self.mentions[i].mention.span.clone();
            mentions.push(XmlMention {
                text: doc.text_of(&span)?,
                mention: Mention { id: new_id, span },
            });
        }
        let mut chains: Vec<Chain> = self
            .chains
            .iter()
            .map(|c| {
                let mut members: Vec<MentionId> = c.members.iter().map(|id| renumber[id]).collect();
                members.sort_unstable();
                Chain { members }
            })
            .collect();
        chains.sort();
        Ok(CorefXml {
            doc_id: self.doc_id.clone(),
            mentions,
            chains,
        })
    }
}

pub fn parse_coref_xml(bytes: &[u8]) -> Result<CorefXml, FormatError> {
    let text = to_utf8(bytes)?;
    let xml = roxmltree::Document::parse(text)?;
    let root = xml.root_element();
    expect_tag(root, "coref")?;
    let doc_id = required_attr(root, "docId")?.to_string();
    let mut mentions = Vec::new();
    let mut chains = Vec::new();
    let mut ids = HashSet::new();
    let mut saw_mentions = false;
    let mut saw_chains = false;
    for section in element_children(root)? {
        match section.tag_name().name() {
            "mentions" if !saw_mentions && !saw_chains => {
                saw_mentions = true;
                for m in element_children(section)? {
                    expect_tag(m, "mention")?;
                    let id: MentionId = parse_number(m, "id", required_attr(m, "id")?)?;
                    let sentence_no = required_attr(m, "sentenceNo")?;
                    let from: usize = parse_number(m, "fromWordIX", required_attr(m, "fromWordIX")?)?;
                    let to: usize = parse_number(m, "toWordIX", required_attr(m, "toWordIX")?)?;
                    if from < 1 || from > to {
                        return Err(FormatError::parse(line_of(m), format!("mention {id}: invalid word range {from}..{to}")));
                    }
                    if !ids.insert(id) {
                        return Err(FormatError::parse(line_of(m), format!("duplicate mention id {id}")));
                    }
                    if m.children().any(|c| c.is_element()) {
                        return Err(FormatError::parse(line_of(m), "<mention> must contain only text"));
                    }
                    mentions.push(XmlMention {
                        mention: Mention::new(id, sentence_no, from, to),
                        text: m.text().unwrap_or("").to_string(),
                    });
                }
            }
            "chains" if !saw_chains => {
                saw_chains = true;
                for c in element_children(section)? {
                    expect_tag(c, "chain")?;
                    let mut members = Vec::new();
                    for r in element_children(c)? {
                        expect_tag(r, "mentionRef")?;
                        let id: MentionId = parse_number(r, "id", required_attr(r, "id")?)?;
                        if !ids.contains(&id) {
                            return Err(FormatError::parse(line_of(r), format!("chain references undeclared mention {id}")));
                        }
                        if members.contains(&id) {
                            return Err(FormatError::parse(line_of(r), format!("chain lists mention {id} twice")));
                        }
                        members.push(id);
                    }
                    if members.is_empty() {
                        return Err(FormatError::parse(line_of(c), "empty chain"));
                    }
                    chains.push(Chain { members });
                }
            }
            other => {
                return Err(FormatError::parse(line_of(section), format!("unexpected <{other}> in <coref>")));
            }
        }
    }
    Ok(CorefXml {
        doc_id,
        mentions,
        chains,
    })
}

/// Serializes a coreference file.
///
/// With a document, mentions are bounds-checked, written in document order
/// and their text regenerated from the token surfaces. Without one, the
/// stored order and text are kept. Chain members follow mention order and
/// chains are ordered by their first member.
pub fn write_coref_xml(file: &CorefXml, doc: Option<&Document>) -> Result<String, FormatError> {
    let mut mentions: Vec<XmlMention> = file.mentions.clone();
    if let Some(doc) = doc {
        let mut keyed = Vec::with_capacity(mentions.len());
        for m in mentions.drain(..) {
            doc.check_mention(&m.mention)?;
            let key = doc.order_key(&m.mention.span)?;
            let text = doc.text_of(&m.mention.span)?;
            keyed.push((key, m.mention.id, XmlMention { text, ..m }));
        }
        keyed.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        mentions = keyed.into_iter().map(|(_, _, m)| m).collect();
    }
    let position: HashMap<MentionId, usize> = mentions.iter().enumerate().map(|(i, m)| (m.mention.id, i)).collect();
    let mut chains: Vec<Vec<usize>> = Vec::with_capacity(file.chains.len());
    for c in &file.chains {
        let mut members = Vec::with_capacity(c.len());
        for id in &c.members {
            let p = position.get(id).ok_or_else(|| FormatError::Mismatch {
                doc: file.doc_id.clone(),
                message: format!("chain references undeclared mention {id}"),
            })?;
            members.push(*p);
        }
        members.sort_unstable();
        chains.push(members);
    }
    chains.sort();

    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<coref docId=\"");
    escape_attr(&file.doc_id, &mut out);
    out.push_str("\">\n");
    if mentions.is_empty() {
        out.push_str("  <mentions/>\n");
    } else {
        out.push_str("  <mentions>\n");
        for m in &mentions {
            out.push_str(&format!("    <mention id=\"{}\" sentenceNo=\"", m.mention.id));
            escape_attr(&m.mention.span.sentence_no, &mut out);
            out.push_str(&format!(
                "\" fromWordIX=\"{}\" toWordIX=\"{}\">",
                m.mention.span.from, m.mention.span.to
            ));
            escape_text(&m.text, &mut out);
            out.push_str("</mention>\n");
        }
        out.push_str("  </mentions>\n");
    }
    if chains.is_empty() {
        out.push_str("  <chains/>\n");
    } else {
        out.push_str("  <chains>\n");
        for c in &chains {
            out.push_str("    <chain>\n");
            for &p in c {
                out.push_str(&format!("      <mentionRef id=\"{}\"/>\n", mentions[p].mention.id));
            }
            out.push_str("    </chain>\n");
        }
        out.push_str("  </chains>\n");
    }
    out.push_str("</coref>\n");
    Ok(out)
}

/// Maps every mention of `file` onto the declared mention with the same span.
///
/// Files written by different annotators number their mentions
/// independently; spans are the shared identity.
pub fn align_to_declared(
    declared: &[Mention],
    file: &CorefXml,
    annotator: impl Into<String>,
) -> Result<AnnotationSet, FormatError> {
    let by_span: HashMap<&Span, MentionId> = declared.iter().map(|m| (&m.span, m.id)).collect();
    let local: HashMap<MentionId, &Span> = file.mentions.iter().map(|m| (m.mention.id, &m.mention.span)).collect();
    let mut chains = Vec::with_capacity(file.chains.len());
    for c in &file.chains {
        let mut members = Vec::with_capacity(c.len());
        for id in &c.members {
            let span = local[id];
            let declared_id = by_span.get(span).ok_or_else(|| FormatError::Mismatch {
                doc: file.doc_id.clone(),
                message: format!("mention {id} at {span} is not among the declared mentions"),
            })?;
            members.push(*declared_id);
        }
        chains.push(Chain { members });
    }
    Ok(AnnotationSet::new(annotator, chains))
}
