use std::fmt;
use std::str::FromStr;

use super::conll::{parse_conll, write_conll, ConllDocument};
use super::corefxml::{parse_coref_xml, write_coref_xml, CorefXml};
use crate::error::FormatError;
use crate::model::{Chain, Document, Mention, MentionId, Sentence, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Conll,
    Xml,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "conll" => Ok(Format::Conll),
            "xml" => Ok(Format::Xml),
            other => Err(format!("unknown format `{other}` (expected conll or xml)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Conll => "conll",
            Format::Xml => "xml",
        })
    }
}

/// A document assembled from CoNLL rows alone: sentences numbered `1..`,
/// lemma equal to surface, no POS or dependency information.
pub fn document_from_conll(conll: &ConllDocument) -> Result<Document, FormatError> {
    let sentences = conll
        .sentences
        .iter()
        .enumerate()
        .map(|(i, rows)| Sentence {
            no: (i + 1).to_string(),
            tokens: rows.iter().map(|r| Token::new(r.index + 1, r.surface.clone())).collect(),
        })
        .collect();
    Ok(Document::new(conll.doc_id.clone(), None, sentences)?)
}

/// Builds the coreference file for one CoNLL document against `doc`.
///
/// Mention ids are assigned `0..n` in document order, so the result is in
/// canonical form.
pub fn conll_to_coref(conll: &ConllDocument, doc: &Document) -> Result<CorefXml, FormatError> {
    let mismatch = |message: String| FormatError::Mismatch {
        doc: conll.doc_id.clone(),
        message,
    };
    if conll.sentences.len() != doc.sentences().len() {
        return Err(mismatch(format!(
            "{} sentences in CoNLL, {} in the document",
            conll.sentences.len(),
            doc.sentences().len()
        )));
    }
    for (i, (rows, s)) in conll.sentences.iter().zip(doc.sentences()).enumerate() {
        if rows.len() != s.len() {
            return Err(mismatch(format!(
                "sentence {} has {} tokens in CoNLL and {} in the document",
                i + 1,
                rows.len(),
                s.len()
            )));
        }
    }
    let mut spans: Vec<(usize, usize, usize, u32)> = conll
        .chains
        .iter()
        .flat_map(|(&n, v)| v.iter().map(move |s| (s.sentence, s.from, s.to, n)))
        .collect();
    spans.sort_unstable();
    let mut mentions = Vec::with_capacity(spans.len());
    let mut members: std::collections::BTreeMap<u32, Vec<MentionId>> = Default::default();
    for (id, &(s, f, t, n)) in spans.iter().enumerate() {
        let id = id as MentionId;
        mentions.push(Mention::new(id, doc.sentences()[s].no.clone(), f + 1, t + 1));
        members.entry(n).or_default().push(id);
    }
    let mut chains: Vec<Chain> = members.into_values().map(|m| Chain { members: m }).collect();
    chains.sort();
    let mut file = CorefXml::new(doc.id(), mentions, chains);
    for m in &mut file.mentions {
        m.text = doc.text_of(&m.mention.span)?;
    }
    Ok(file)
}

pub fn coref_to_conll(coref: &CorefXml, doc: &Document) -> Result<String, FormatError> {
    write_conll(doc, &coref.mention_list(), &coref.chains)
}

/// One converted output: the document id and the serialized bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Converted {
    pub doc_id: String,
    pub content: String,
}

/// Converts `input` between formats.
///
/// `docs` supplies the documents referenced by the input. CoNLL to XML
/// falls back to a document assembled from the CoNLL rows when none with a
/// matching id is given; XML to CoNLL requires the document.
pub fn convert(from: Format, to: Format, input: &[u8], docs: &[Document]) -> Result<Vec<Converted>, FormatError> {
    let find = |id: &str| docs.iter().find(|d| d.id() == id).or(if docs.len() == 1 { docs.first() } else { None });
    match (from, to) {
        (Format::Conll, Format::Xml) => {
            let file = parse_conll(input)?;
            let mut out = Vec::with_capacity(file.documents.len());
            for cd in &file.documents {
                let owned;
                let doc = match docs.iter().find(|d| d.id() == cd.doc_id) {
                    Some(d) => d,
                    None if docs.len() == 1 && file.documents.len() == 1 => &docs[0],
                    None => {
                        owned = document_from_conll(cd)?;
                        &owned
                    }
                };
                let coref = conll_to_coref(cd, doc)?;
                out.push(Converted {
                    doc_id: cd.doc_id.clone(),
                    content: write_coref_xml(&coref, Some(doc))?,
                });
            }
            Ok(out)
        }
        (Format::Xml, Format::Conll) => {
            let coref = parse_coref_xml(input)?;
            let doc = find(&coref.doc_id).ok_or_else(|| FormatError::Mismatch {
                doc: coref.doc_id.clone(),
                message: "XML to CoNLL needs the document file".into(),
            })?;
            Ok(vec![Converted {
                doc_id: coref.doc_id.clone(),
                content: coref_to_conll(&coref, doc)?,
            }])
        }
        (from, to) => Err(FormatError::Unsupported {
            from: from.to_string(),
            to: to.to_string(),
        }),
    }
}
