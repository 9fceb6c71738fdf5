use std::collections::{BTreeMap, HashMap, HashSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use super::mentions::{detect_mentions, PronounList};
use super::{predict, train, BaselineError, CorpusDocument, MentionSource, Method, TrainConfig};
use crate::metrics::{accumulate, conll_average, score_all, Metric, MetricScore, RatioPair, Report, ScoringInput};
use crate::model::{AnnotationSet, Mention, MentionId, Span};

#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub doc_id: String,
    pub genre: String,
    pub scores: Vec<MetricScore>,
    pub mention_recall: RatioPair,
    pub mention_precision: RatioPair,
}

/// Micro-accumulated scores over a group of folds.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossValRow {
    pub label: String,
    pub documents: usize,
    pub scores: Vec<MetricScore>,
    pub mention_recall: RatioPair,
    pub mention_precision: RatioPair,
}

impl CrossValRow {
    fn from_folds(label: &str, folds: &[&FoldResult]) -> Self {
        let scores = Metric::ALL
            .iter()
            .map(|&m| {
                let parts: Vec<MetricScore> = folds.iter().flat_map(|f| f.scores.iter().filter(|s| s.metric == m).cloned()).collect();
                accumulate(m, &parts).expect("folds hold one score per metric")
            })
            .collect();
        let sum = |f: fn(&FoldResult) -> RatioPair| {
            folds.iter().fold(RatioPair::new(0.0, 0.0), |acc, x| {
                let r = f(x);
                RatioPair::new(acc.numerator + r.numerator, acc.denominator + r.denominator)
            })
        };
        CrossValRow {
            label: label.to_string(),
            documents: folds.len(),
            scores,
            mention_recall: sum(|f| f.mention_recall),
            mention_precision: sum(|f| f.mention_precision),
        }
    }

    pub fn score(&self, metric: Metric) -> Option<&MetricScore> {
        self.scores.iter().find(|s| s.metric == metric)
    }

    pub fn conll_f1(&self) -> Option<f64> {
        conll_average(&self.scores)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValReport {
    pub method: Method,
    pub source: MentionSource,
    pub folds: Vec<FoldResult>,
    /// One row per genre, sorted by name.
    pub genres: Vec<CrossValRow>,
    pub overall: CrossValRow,
}

impl CrossValReport {
    pub fn to_table(&self) -> String {
        let mut out = format!("setup {}/{}\n", self.method, self.source);
        out.push_str(&format!("{:<16}{:>6}{:>10}{:>10}", "scope", "docs", "mention-r", "mention-p"));
        for m in Metric::ALL {
            out.push_str(&format!("{:>8}", m.name()));
        }
        out.push_str(&format!("{:>8}\n", "conll"));
        for row in self.genres.iter().chain(std::iter::once(&self.overall)) {
            out.push_str(&format!(
                "{:<16}{:>6}{:>10.2}{:>10.2}",
                row.label,
                row.documents,
                100.0 * row.mention_recall.value(),
                100.0 * row.mention_precision.value()
            ));
            for s in &row.scores {
                out.push_str(&format!("{:>8.2}", 100.0 * s.f1));
            }
            out.push_str(&format!("{:>8.2}\n", 100.0 * row.conll_f1().unwrap_or(0.0)));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let row = |r: &CrossValRow| {
            json!({
                "label": r.label,
                "documents": r.documents,
                "mention_recall": r.mention_recall.value(),
                "mention_precision": r.mention_precision.value(),
                "scores": Report::new(r.scores.clone()).to_json(),
            })
        };
        json!({
            "method": self.method.to_string(),
            "setup": self.source.to_string(),
            "genres": self.genres.iter().map(row).collect::<Vec<_>>(),
            "overall": row(&self.overall),
        })
    }
}

fn span_chains(annotation: &AnnotationSet, mentions: &[Mention]) -> Vec<Vec<Span>> {
    let by_id: HashMap<MentionId, &Span> = mentions.iter().map(|m| (m.id, &m.span)).collect();
    annotation
        .chains
        .iter()
        .map(|c| c.members.iter().filter_map(|id| by_id.get(id).map(|s| (*s).clone())).collect())
        .collect()
}

fn run_fold(
    corpus: &[CorpusDocument],
    held_out: usize,
    method: Method,
    source: MentionSource,
    cfg: &TrainConfig,
    pronouns: &PronounList,
) -> Result<FoldResult, BaselineError> {
    let training: Vec<&CorpusDocument> = corpus.iter().enumerate().filter(|&(i, _)| i != held_out).map(|(_, d)| d).collect();
    let fold_cfg = TrainConfig {
        seed: cfg.seed.wrapping_add(held_out as u64),
        ..cfg.clone()
    };
    let model = train(&training, method, source, &fold_cfg, pronouns)?;
    let test = &corpus[held_out];
    let mentions = match source {
        MentionSource::Gold => test.mentions.clone(),
        MentionSource::Predicted => detect_mentions(&test.document, pronouns)?,
    };
    let response = predict(&test.document, &mentions, &model, &fold_cfg, pronouns)?;
    let input = ScoringInput::new(span_chains(&test.gold, &test.mentions), span_chains(&response, &mentions)).without_singletons();
    let gold_spans: HashSet<&Span> = test.mentions.iter().map(|m| &m.span).collect();
    let found = mentions.iter().filter(|m| gold_spans.contains(&m.span)).count() as f64;
    Ok(FoldResult {
        doc_id: test.document.id().to_string(),
        genre: test.genre().to_string(),
        scores: score_all(&Metric::ALL, &input),
        mention_recall: RatioPair::new(found, test.mentions.len() as f64),
        mention_precision: RatioPair::new(found, mentions.len() as f64),
    })
}

/// Leave-one-out evaluation: one fold per document, folds in parallel.
/// Fold `i` trains with seed `cfg.seed + i`.
pub fn cross_validate(
    corpus: &[CorpusDocument],
    method: Method,
    source: MentionSource,
    cfg: &TrainConfig,
    pronouns: &PronounList,
) -> Result<CrossValReport, BaselineError> {
    if corpus.len() < 2 {
        return Err(BaselineError::TooFewDocuments(corpus.len()));
    }
    let folds = (0..corpus.len())
        .into_par_iter()
        .map(|i| run_fold(corpus, i, method, source, cfg, pronouns))
        .collect::<Result<Vec<_>, _>>()?;
    let mut by_genre: BTreeMap<&str, Vec<&FoldResult>> = BTreeMap::new();
    for f in &folds {
        by_genre.entry(f.genre.as_str()).or_default().push(f);
    }
    let genres = by_genre.iter().map(|(g, fs)| CrossValRow::from_folds(g, fs)).collect();
    let all: Vec<&FoldResult> = folds.iter().collect();
    let overall = CrossValRow::from_folds("overall", &all);
    Ok(CrossValReport {
        method,
        source,
        genres,
        overall,
        folds,
    })
}
