//! CoNLL coreference files.
//!
//! Four tab-separated columns: document id, 0-based token index within the
//! sentence, surface, coreference field. Documents are delimited by
//! `#begin document (ID); part 000` and `#end document`; every sentence is
//! followed by one blank line.
//!
//! The coreference field is `-` or `|`-joined entries `(n`, `n)` and `(n)`.
//! Same-chain mentions that cross each other cannot be represented and are
//! rejected on output.

use std::collections::{BTreeMap, HashMap};

use crate::error::FormatError;
use crate::model::{Chain, Document, Mention, MentionId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorefTag {
    Open(u32),
    Close(u32),
    Single(u32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConllRow {
    pub index: usize,
    pub surface: String,
    pub tags: Vec<CorefTag>,
}

/// Token range inside the document: sentence position plus 0-based,
/// inclusive token indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConllSpan {
    pub sentence: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConllDocument {
    pub doc_id: String,
    pub part: String,
    pub sentences: Vec<Vec<ConllRow>>,
    /// Chain number to member spans, in the order their brackets close.
    pub chains: BTreeMap<u32, Vec<ConllSpan>>,
}

impl ConllDocument {
    /// Chains as span lists, ordered by chain number.
    pub fn span_chains(&self) -> Vec<Vec<ConllSpan>> {
        self.chains.values().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConllFile {
    pub documents: Vec<ConllDocument>,
}

fn parse_tags(field: &str, line: usize) -> Result<Vec<CorefTag>, FormatError> {
    if field == "-" {
        return Ok(Vec::new());
    }
    let bad = || FormatError::parse(line, format!("malformed coreference field `{field}`"));
    let number = |s: &str| -> Result<u32, FormatError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse().map_err(|_| bad())
    };
    field
        .split('|')
        .map(|entry| {
            let open = entry.starts_with('(');
            let close = entry.ends_with(')');
            match (open, close) {
                (true, true) if entry.len() >= 3 => Ok(CorefTag::Single(number(&entry[1..entry.len() - 1])?)),
                (true, false) => Ok(CorefTag::Open(number(&entry[1..])?)),
                (false, true) => Ok(CorefTag::Close(number(&entry[..entry.len() - 1])?)),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn parse_begin(line: &str, lineno: usize) -> Result<(String, String), FormatError> {
    let rest = line
        .strip_prefix("#begin document (")
        .ok_or_else(|| FormatError::parse(lineno, "expected `#begin document (ID); part NNN`"))?;
    let (id, part) = rest
        .rsplit_once("); part ")
        .ok_or_else(|| FormatError::parse(lineno, "expected `#begin document (ID); part NNN`"))?;
    if id.is_empty() || part.is_empty() {
        return Err(FormatError::parse(lineno, "empty document id or part"));
    }
    Ok((id.to_string(), part.to_string()))
}

struct Builder {
    doc: ConllDocument,
    sentence: Vec<ConllRow>,
    open: HashMap<u32, Vec<(usize, usize)>>,
}

impl Builder {
    fn finish_sentence(&mut self, lineno: usize) -> Result<(), FormatError> {
        if let Some((&chain, _)) = self.open.iter().find(|(_, v)| !v.is_empty()) {
            return Err(FormatError::parse(lineno, format!("unbalanced parentheses: chain {chain} left open at sentence end")));
        }
        let rows = std::mem::take(&mut self.sentence);
        self.doc.sentences.push(rows);
        Ok(())
    }
}

pub fn parse_conll(bytes: &[u8]) -> Result<ConllFile, FormatError> {
    let text = super::xml::to_utf8(bytes)?;
    let mut file = ConllFile::default();
    let mut current: Option<Builder> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        last_line = lineno;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        match current.as_mut() {
            None => {
                if line.trim().is_empty() {
                    continue;
                }
                let (doc_id, part) = parse_begin(line, lineno)?;
                current = Some(Builder {
                    doc: ConllDocument {
                        doc_id,
                        part,
                        sentences: Vec::new(),
                        chains: BTreeMap::new(),
                    },
                    sentence: Vec::new(),
                    open: HashMap::new(),
                });
            }
            Some(b) => {
                if line == "#end document" {
                    if !b.sentence.is_empty() {
                        b.finish_sentence(lineno)?;
                    }
                    let b = current.take().unwrap();
                    if b.doc.sentences.is_empty() {
                        return Err(FormatError::parse(lineno, format!("document `{}` has no tokens", b.doc.doc_id)));
                    }
                    file.documents.push(b.doc);
                } else if line.trim().is_empty() {
                    if b.sentence.is_empty() {
                        return Err(FormatError::parse(lineno, "empty sentence"));
                    }
                    b.finish_sentence(lineno)?;
                } else if line.starts_with('#') {
                    return Err(FormatError::parse(lineno, "unexpected directive inside a document"));
                } else {
                    let cols: Vec<&str> = if line.contains('\t') {
                        line.split('\t').collect()
                    } else {
                        line.split_whitespace().collect()
                    };
                    if cols.len() != 4 {
                        return Err(FormatError::parse(lineno, format!("expected 4 columns, found {}", cols.len())));
                    }
                    if cols[0] != b.doc.doc_id {
                        return Err(FormatError::parse(
                            lineno,
                            format!("row belongs to `{}` inside document `{}`", cols[0], b.doc.doc_id),
                        ));
                    }
                    let index: usize = cols[1]
                        .parse()
                        .map_err(|_| FormatError::parse(lineno, format!("bad token index `{}`", cols[1])))?;
                    if index != b.sentence.len() {
                        return Err(FormatError::parse(
                            lineno,
                            format!("token index {index} where {} was expected", b.sentence.len()),
                        ));
                    }
                    if cols[2].is_empty() {
                        return Err(FormatError::parse(lineno, "empty surface"));
                    }
                    let tags = parse_tags(cols[3], lineno)?;
                    let sentence = b.doc.sentences.len();
                    for tag in &tags {
                        match *tag {
                            CorefTag::Open(n) => b.open.entry(n).or_default().push((sentence, index)),
                            CorefTag::Single(n) => b.doc.chains.entry(n).or_default().push(ConllSpan {
                                sentence,
                                from: index,
                                to: index,
                            }),
                            CorefTag::Close(n) => {
                                let (s, from) = b.open.get_mut(&n).and_then(Vec::pop).ok_or_else(|| {
                                    FormatError::parse(lineno, format!("unbalanced parentheses: `{n})` without opening"))
                                })?;
                                debug_assert_eq!(s, sentence);
                                b.doc.chains.entry(n).or_default().push(ConllSpan { sentence, from, to: index });
                            }
                        }
                    }
                    b.sentence.push(ConllRow {
                        index,
                        surface: cols[2].to_string(),
                        tags,
                    });
                }
            }
        }
    }
    if let Some(b) = current {
        return Err(FormatError::parse(last_line, format!("document `{}` lacks `#end document`", b.doc.doc_id)));
    }
    Ok(file)
}

/// Serializes one document with the given chains.
///
/// Chains are numbered by their first member in document order. Within one
/// token, openings come first (outermost first), then single-token
/// mentions, then closings (innermost first).
pub fn write_conll(doc: &Document, mentions: &[Mention], chains: &[Chain]) -> Result<String, FormatError> {
    let by_id: HashMap<MentionId, &Mention> = mentions.iter().map(|m| (m.id, m)).collect();
    // (sentence, from, to) with 0-based token indices
    let mut chain_spans: Vec<Vec<(usize, usize, usize)>> = Vec::with_capacity(chains.len());
    for c in chains {
        let mut spans = Vec::with_capacity(c.len());
        for id in &c.members {
            let m = by_id.get(id).ok_or_else(|| FormatError::Mismatch {
                doc: doc.id().to_string(),
                message: format!("chain references undeclared mention {id}"),
            })?;
            doc.check_mention(m)?;
            let (s, f, t) = doc.order_key(&m.span)?;
            spans.push((s, f - 1, t - 1));
        }
        spans.sort_unstable();
        for (i, a) in spans.iter().enumerate() {
            for b in &spans[i + 1..] {
                if a.0 == b.0 && a.1 < b.1 && b.1 <= a.2 && a.2 < b.2 {
                    return Err(FormatError::Mismatch {
                        doc: doc.id().to_string(),
                        message: "same-chain mentions cross each other; not representable in CoNLL".into(),
                    });
                }
            }
        }
        if !spans.is_empty() {
            chain_spans.push(spans);
        }
    }
    chain_spans.sort();

    // per token: (opens by length desc, singles, closes by length asc)
    let mut opens: HashMap<(usize, usize), Vec<(std::cmp::Reverse<usize>, u32)>> = HashMap::new();
    let mut singles: HashMap<(usize, usize), Vec<u32>> = HashMap::new();
    let mut closes: HashMap<(usize, usize), Vec<(usize, u32)>> = HashMap::new();
    for (n, spans) in chain_spans.iter().enumerate() {
        let n = n as u32;
        for &(s, f, t) in spans {
            if f == t {
                singles.entry((s, f)).or_default().push(n);
            } else {
                opens.entry((s, f)).or_default().push((std::cmp::Reverse(t - f), n));
                closes.entry((s, t)).or_default().push((t - f, n));
            }
        }
    }

    let mut out = format!("#begin document ({}); part 000\n", doc.id());
    for (si, sentence) in doc.sentences().iter().enumerate() {
        for (ti, token) in sentence.tokens.iter().enumerate() {
            if token.surface.chars().any(char::is_whitespace) {
                return Err(FormatError::Mismatch {
                    doc: doc.id().to_string(),
                    message: format!("surface `{}` contains whitespace", token.surface),
                });
            }
            let mut entries = Vec::new();
            if let Some(o) = opens.get_mut(&(si, ti)) {
                o.sort();
                entries.extend(o.iter().map(|(_, n)| format!("({n}")));
            }
            if let Some(s) = singles.get_mut(&(si, ti)) {
                s.sort();
                entries.extend(s.iter().map(|n| format!("({n})")));
            }
            if let Some(c) = closes.get_mut(&(si, ti)) {
                c.sort();
                entries.extend(c.iter().map(|(_, n)| format!("{n})")));
            }
            let field = if entries.is_empty() { "-".to_string() } else { entries.join("|") };
            out.push_str(&format!("{}\t{}\t{}\t{}\n", doc.id(), ti, token.surface, field));
        }
        out.push('\n');
    }
    out.push_str("#end document\n");
    Ok(out)
}
