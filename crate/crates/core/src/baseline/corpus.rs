use std::fs;
use std::path::Path;

use super::BaselineError;
use crate::formats::{parse_coref_xml, parse_document_xml};
use crate::model::{AnnotationSet, Document, Mention};

/// A document with its gold mentions and chains.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusDocument {
    pub document: Document,
    pub mentions: Vec<Mention>,
    pub gold: AnnotationSet,
}

impl CorpusDocument {
    pub fn new(document: Document, mentions: Vec<Mention>, gold: AnnotationSet) -> Result<Self, BaselineError> {
        for m in &mentions {
            document.check_mention(m)?;
        }
        Ok(CorpusDocument { document, mentions, gold })
    }

    pub fn genre(&self) -> &str {
        self.document.genre().unwrap_or("unknown")
    }
}

fn read(path: &Path) -> Result<Vec<u8>, BaselineError> {
    fs::read(path).map_err(|source| BaselineError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Loads every `<stem>.doc.xml` in a directory together with the
/// coreference file `<stem>.gold.xml`, sorted by stem.
pub fn load_corpus_dir(dir: &Path) -> Result<Vec<CorpusDocument>, BaselineError> {
    let entries = fs::read_dir(dir).map_err(|source| BaselineError::Io {
        path: dir.display().to_string(),
        source,
    })?;
    let mut stems: Vec<String> = entries
        .filter_map(|e| e.ok())
        .filter_map(|e| e.file_name().to_str().and_then(|n| n.strip_suffix(".doc.xml")).map(str::to_string))
        .collect();
    stems.sort();
    if stems.is_empty() {
        return Err(BaselineError::Corpus(format!("no *.doc.xml files in {}", dir.display())));
    }
    stems
        .into_iter()
        .map(|stem| {
            let doc_path = dir.join(format!("{stem}.doc.xml"));
            let gold_path = dir.join(format!("{stem}.gold.xml"));
            let document = parse_document_xml(&read(&doc_path)?).map_err(|e| {
                BaselineError::Corpus(format!("{}: {e}", doc_path.display()))
            })?;
            let coref = parse_coref_xml(&read(&gold_path)?).map_err(|e| {
                BaselineError::Corpus(format!("{}: {e}", gold_path.display()))
            })?;
            CorpusDocument::new(document, coref.mention_list(), coref.annotation("gold"))
        })
        .collect()
}
