//! Rule-based mention detection and a pairwise linear coreference model.

pub mod chains;
pub mod corpus;
pub mod crossval;
pub mod features;
pub mod mentions;
pub mod train;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::error::{FormatError, ModelError};
use crate::model::{AnnotationSet, Chain, Document, Mention};

pub use chains::{best_link, build_chains_best_link, build_chains_merge, candidate_allowed, merge_links};
pub use corpus::{load_corpus_dir, CorpusDocument};
pub use crossval::{cross_validate, CrossValReport, CrossValRow};
pub use features::{describe_mentions, extract_features, feature_names, FeatureVector, MentionInfo, FEATURE_COUNT};
pub use mentions::{classify_mention_type, detect_mentions, proper_noun_strings, strip_case, MentionType, PronounList};
pub use train::{generate_training_examples, train_linear, training_pairs, Example, LinearModel};

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("sentence `{sentence}`, word {word}: no dependency head; mention detection needs parsed input")]
    MissingDependencies { sentence: String, word: usize },
    #[error("training data contains a single class")]
    SingleClass,
    #[error("model file line {line}: {message}")]
    Model { line: usize, message: String },
    #[error("cross-validation needs at least two documents, got {0}")]
    TooFewDocuments(usize),
    #[error("model was trained as {found}, expected {expected}")]
    WrongMethod { expected: Method, found: Method },
    #[error(transparent)]
    Document(#[from] ModelError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("corpus: {0}")]
    Corpus(String),
}

/// Linear model family and its matching chain builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    /// Hinge loss, transitive merging of positive links.
    Svc,
    /// ε-insensitive regression, Best-Link attachment.
    Svr,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Svc => "svc",
            Method::Svr => "svr",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "svc" => Ok(Method::Svc),
            "svr" => Ok(Method::Svr),
            _ => Err(format!("unknown method '{s}', expected svc or svr")),
        }
    }
}

/// Gold mentions (GM) or detected mentions (PM).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MentionSource {
    Gold,
    Predicted,
}

impl fmt::Display for MentionSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MentionSource::Gold => "gm",
            MentionSource::Predicted => "pm",
        })
    }
}

impl FromStr for MentionSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gm" | "gold" => Ok(MentionSource::Gold),
            "pm" | "predicted" => Ok(MentionSource::Predicted),
            _ => Err(format!("unknown mention setup '{s}', expected gm or pm")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub l2_lambda: f64,
    pub seed: u64,
    /// Negative pairs and prediction candidates are closer than this many
    /// mentions.
    pub neg_window: usize,
    pub best_link_threshold: f64,
    pub class_balancing: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 20,
            learning_rate: 0.1,
            l2_lambda: 1e-4,
            seed: 1,
            neg_window: 100,
            best_link_threshold: 0.1,
            class_balancing: true,
        }
    }
}

/// Trains a model of the given family on a corpus.
pub fn train(
    docs: &[&CorpusDocument],
    method: Method,
    source: MentionSource,
    cfg: &TrainConfig,
    pronouns: &PronounList,
) -> Result<LinearModel, BaselineError> {
    let examples = generate_training_examples(docs, source, cfg, pronouns)?;
    train_linear(&examples, method, cfg)
}

/// Chains for one document with the builder matching the model's method.
pub fn predict(
    doc: &Document,
    mentions: &[Mention],
    model: &LinearModel,
    cfg: &TrainConfig,
    pronouns: &PronounList,
) -> Result<AnnotationSet, BaselineError> {
    let chains: Vec<Chain> = match model.method {
        Method::Svc => build_chains_merge(doc, mentions, model, cfg, pronouns)?,
        Method::Svr => build_chains_best_link(doc, mentions, model, cfg, pronouns)?,
    };
    Ok(AnnotationSet::new(format!("baseline-{}", model.method), chains))
}
