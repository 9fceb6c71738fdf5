use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::Context;
use corefkit::formats::{parse_coref_xml, parse_document_xml, CorefXml};
use corefkit::Document;

/// Invalid invocation: bad flag values or inconsistent options.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(message: impl Into<String>) -> anyhow::Error {
    UsageError(message.into()).into()
}

pub fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_document(path: &Path) -> anyhow::Result<Document> {
    parse_document_xml(&read(path)?).with_context(|| format!("{}", path.display()))
}

pub fn load_coref(path: &Path) -> anyhow::Result<CorefXml> {
    parse_coref_xml(&read(path)?).with_context(|| format!("{}", path.display()))
}

/// Writes to `out`, or to standard output when absent.
pub fn emit(out: Option<&Path>, content: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, content).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}
