//! Coreference tooling: scoring metrics, inter-annotator agreement,
//! constrained adjudication of multiple annotations, CoNLL/XML conversion
//! and a rule-based plus linear-model coreference baseline.

pub mod adjudicator;
pub mod agreement;
pub mod baseline;
pub mod error;
pub mod formats;
pub mod metrics;
pub mod model;

pub use error::{FormatError, ModelError};
pub use model::{
    document_order_compare, overlaps, validate_partition, AnnotationSet, Chain, Document, Mention, MentionId,
    PartitionKind, Sentence, Severity, Span, Token, Violation, ViolationKind,
};
pub use adjudicator::{adjudicate, adjudicate_with, AdjudicationError, AdjudicationResult, AdjudicatorOptions, Weights};
pub use agreement::{document_agreement, AgreementError, AgreementReport, DocumentAgreement};
pub use baseline::{BaselineError, CorpusDocument, LinearModel, MentionSource, Method, TrainConfig};
pub use metrics::{score, score_all, Metric, MetricScore, RatioPair, Report, ScoringInput};
