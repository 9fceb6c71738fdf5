//! Readers and writers for document XML, coreference XML and CoNLL.
//!
//! All formats are UTF-8 with LF line endings. Writers are deterministic so
//! that canonical inputs round-trip byte for byte.

mod conll;
mod convert;
mod corefxml;
mod docxml;
mod xml;

pub use conll::{parse_conll, write_conll, ConllDocument, ConllFile, ConllRow, ConllSpan, CorefTag};
pub use convert::{convert, conll_to_coref, coref_to_conll, document_from_conll, Converted, Format};
pub use corefxml::{align_to_declared, parse_coref_xml, write_coref_xml, CorefXml, XmlMention};
pub use docxml::{parse_document_xml, write_document_xml};
