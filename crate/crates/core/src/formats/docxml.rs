//! Document XML.
//!
//! ```xml
//! <?xml version="1.0" encoding="UTF-8"?>
//! <document id="d1" genre="news">
//!   <S No="00016112313.1">
//!     <W IX="1" LEM="koray" POS="Noun" REL="SUBJECT" HEAD="2">Koray'ın</W>
//!   </S>
//! </document>
//! ```
//!
//! `LEM` defaults to the surface and `POS` to the empty string; `REL` and
//! `HEAD` are optional and written only when present.

use std::collections::HashSet;

use roxmltree::Node;

use super::xml::{element_children, escape_attr, escape_text, expect_tag, line_of, parse_number, required_attr, to_utf8};
use crate::error::FormatError;
use crate::model::{Document, Sentence, Token};

pub fn parse_document_xml(bytes: &[u8]) -> Result<Document, FormatError> {
    let text = to_utf8(bytes)?;
    let xml = roxmltree::Document::parse(text)?;
    let root = xml.root_element();
    expect_tag(root, "document")?;
    let id = required_attr(root, "id")?.to_string();
    let genre = root.attribute("genre").map(str::to_string);
    let mut seen = HashSet::new();
    let mut sentences = Vec::new();
    for s in element_children(root)? {
        expect_tag(s, "S")?;
        let no = required_attr(s, "No")?.to_string();
        if !seen.insert(no.clone()) {
            return Err(FormatError::parse(line_of(s), format!("duplicate sentence number `{no}`")));
        }
        let mut tokens = Vec::new();
        for w in element_children(s)? {
            tokens.push(parse_word(w, tokens.len() + 1)?);
        }
        if tokens.is_empty() {
            return Err(FormatError::parse(line_of(s), format!("sentence `{no}` has no words")));
        }
        sentences.push(Sentence { no, tokens });
    }
    if sentences.is_empty() {
        return Err(FormatError::parse(line_of(root), format!("document `{id}` has no sentences")));
    }
    Ok(Document::new(id, genre, sentences)?)
}

fn parse_word(w: Node<'_, '_>, expected: usize) -> Result<Token, FormatError> {
    expect_tag(w, "W")?;
    let ix: usize = parse_number(w, "IX", required_attr(w, "IX")?)?;
    if ix != expected {
        return Err(FormatError::parse(
            line_of(w),
            format!("word index {ix} where {expected} was expected"),
        ));
    }
    let surface = w.text().unwrap_or("").to_string();
    if surface.is_empty() {
        return Err(FormatError::parse(line_of(w), format!("word {ix} has an empty surface")));
    }
    if w.children().any(|c| c.is_element()) {
        return Err(FormatError::parse(line_of(w), "<W> must contain only text"));
    }
    let dep_head = match w.attribute("HEAD") {
        Some(raw) => Some(parse_number(w, "HEAD", raw)?),
        None => None,
    };
    Ok(Token {
        lemma: w.attribute("LEM").map(str::to_string).unwrap_or_else(|| surface.clone()),
        pos: w.attribute("POS").unwrap_or("").to_string(),
        dep_rel: w.attribute("REL").map(str::to_string),
        dep_head,
        word_ix: ix,
        surface,
    })
}

pub fn write_document_xml(doc: &Document) -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<document id=\"");
    escape_attr(doc.id(), &mut out);
    out.push('"');
    if let Some(g) = doc.genre() {
        out.push_str(" genre=\"");
        escape_attr(g, &mut out);
        out.push('"');
    }
    out.push_str(">\n");
    for s in doc.sentences() {
        out.push_str("  <S No=\"");
        escape_attr(&s.no, &mut out);
        out.push_str("\">\n");
        for t in &s.tokens {
            out.push_str(&format!("    <W IX=\"{}\" LEM=\"", t.word_ix));
            escape_attr(&t.lemma, &mut out);
            out.push_str("\" POS=\"");
            escape_attr(&t.pos, &mut out);
            out.push('"');
            if let Some(rel) = &t.dep_rel {
                out.push_str(" REL=\"");
                escape_attr(rel, &mut out);
                out.push('"');
            }
            if let Some(h) = t.dep_head {
                out.push_str(&format!(" HEAD=\"{h}\""));
            }
            out.push('>');
            escape_text(&t.surface, &mut out);
            out.push_str("</W>\n");
        }
        out.push_str("  </S>\n");
    }
    out.push_str("</document>\n");
    out
}
