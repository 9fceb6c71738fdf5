//! Coreference scoring: MUC, B³, CEAF_m, CEAF_e, BLANC and LEA.
//!
//! Every metric keeps its recall and precision as numerator/denominator
//! pairs so that scores over many documents can be micro-averaged by
//! summing before dividing. A ratio with a zero denominator is 0, and so
//! is the F1 of a zero precision and recall.
//!
//! Mentions are compared by equality only: partially overlapping spans are
//! different mentions.

mod assignment;
mod blanc;
mod ceaf;
mod formulas;
mod report;

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use assignment::max_weight_assignment;
pub use blanc::{link_sets, LinkSets};
pub use ceaf::{ceaf_similarity, CeafVariant};
pub use report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Muc,
    Bcub,
    Ceafm,
    Ceafe,
    Blanc,
    Lea,
}

impl Metric {
    pub const ALL: [Metric; 6] = [Metric::Muc, Metric::Bcub, Metric::Ceafm, Metric::Ceafe, Metric::Blanc, Metric::Lea];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Muc => "muc",
            Metric::Bcub => "bcub",
            Metric::Ceafm => "ceafm",
            Metric::Ceafe => "ceafe",
            Metric::Blanc => "blanc",
            Metric::Lea => "lea",
        }
    }

    /// Parses a comma-separated list; `all` expands to every metric.
    pub fn parse_list(s: &str) -> Result<Vec<Metric>, String> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                for m in Metric::ALL {
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
            } else {
                let m: Metric = part.parse()?;
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        if out.is_empty() {
            return Err("no metric selected".into());
        }
        Ok(out)
    }
}

impl FromStr for Metric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown metric `{s}` (expected muc, bcub, ceafm, ceafe, blanc, lea or all)"))
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RatioPair {
    pub numerator: f64,
    pub denominator: f64,
}

impl RatioPair {
    pub fn new(numerator: f64, denominator: f64) -> Self {
        RatioPair { numerator, denominator }
    }

    pub fn value(&self) -> f64 {
        if self.denominator == 0.0 {
            0.0
        } else {
            self.numerator / self.denominator
        }
    }

    fn add(self, other: RatioPair) -> RatioPair {
        RatioPair::new(self.numerator + other.numerator, self.denominator + other.denominator)
    }
}

pub fn f1(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Link counts behind a BLANC score.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlancParts {
    pub coref_recall: RatioPair,
    pub coref_precision: RatioPair,
    pub noncoref_recall: RatioPair,
    pub noncoref_precision: RatioPair,
}

impl BlancParts {
    pub fn coref_f1(&self) -> f64 {
        f1(self.coref_precision.value(), self.coref_recall.value())
    }

    pub fn noncoref_f1(&self) -> f64 {
        f1(self.noncoref_precision.value(), self.noncoref_recall.value())
    }

    fn add(self, o: BlancParts) -> BlancParts {
        BlancParts {
            coref_recall: self.coref_recall.add(o.coref_recall),
            coref_precision: self.coref_precision.add(o.coref_precision),
            noncoref_recall: self.noncoref_recall.add(o.noncoref_recall),
            noncoref_precision: self.noncoref_precision.add(o.noncoref_precision),
        }
    }

    /// Combines the coreference and non-coreference scores.
    ///
    /// Without coreference links on either side the score is the
    /// non-coreference one; without non-coreference links on either side
    /// it is the coreference one; otherwise both are averaged.
    pub fn combine(self) -> MetricScore {
        let no_coref = self.coref_recall.denominator == 0.0 && self.coref_precision.denominator == 0.0;
        let no_noncoref = self.noncoref_recall.denominator == 0.0 && self.noncoref_precision.denominator == 0.0;
        let (r, p, f) = if no_coref {
            (self.noncoref_recall.value(), self.noncoref_precision.value(), self.noncoref_f1())
        } else if no_noncoref {
            (self.coref_recall.value(), self.coref_precision.value(), self.coref_f1())
        } else {
            (
                (self.coref_recall.value() + self.noncoref_recall.value()) / 2.0,
                (self.coref_precision.value() + self.noncoref_precision.value()) / 2.0,
                (self.coref_f1() + self.noncoref_f1()) / 2.0,
            )
        };
        MetricScore {
            metric: Metric::Blanc,
            recall: RatioPair::new(r, 1.0),
            precision: RatioPair::new(p, 1.0),
            f1: f,
            blanc: Some(self),
        }
    }
}

/// One metric's result.
///
/// For BLANC the recall and precision pairs carry the combined values over
/// a unit denominator; the accumulable counts live in `blanc`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub metric: Metric,
    pub recall: RatioPair,
    pub precision: RatioPair,
    pub f1: f64,
    pub blanc: Option<BlancParts>,
}

impl MetricScore {
    pub fn from_pairs(metric: Metric, recall: RatioPair, precision: RatioPair) -> Self {
        MetricScore {
            metric,
            recall,
            precision,
            f1: f1(precision.value(), recall.value()),
            blanc: None,
        }
    }

    pub fn empty(metric: Metric) -> Self {
        if metric == Metric::Blanc {
            BlancParts::default().combine()
        } else {
            MetricScore::from_pairs(metric, RatioPair::default(), RatioPair::default())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("cannot accumulate {0} scores together with {1} scores")]
    MixedMetrics(Metric, Metric),
    #[error("BLANC score without link counts")]
    MissingBlancParts,
}

/// Key and response chains over an implicit mention set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoringInput<M> {
    pub key: Vec<Vec<M>>,
    pub response: Vec<Vec<M>>,
}

impl<M: Clone + Eq + Hash> ScoringInput<M> {
    pub fn new(key: Vec<Vec<M>>, response: Vec<Vec<M>>) -> Self {
        ScoringInput { key, response }
    }

    /// Drops singleton (and empty) chains from both sides.
    pub fn without_singletons(&self) -> Self {
        let keep = |side: &[Vec<M>]| side.iter().filter(|c| c.len() >= 2).cloned().collect();
        ScoringInput {
            key: keep(&self.key),
            response: keep(&self.response),
        }
    }

    pub fn swapped(&self) -> Self {
        ScoringInput {
            key: self.response.clone(),
            response: self.key.clone(),
        }
    }
}

/// Sparse key/response intersection structure shared by all metrics.
pub(crate) struct Overlap {
    pub key_sizes: Vec<usize>,
    pub resp_sizes: Vec<usize>,
    /// Per key chain: (response chain, |K_i ∩ R_j|) for non-empty intersections.
    pub by_key: Vec<Vec<(usize, usize)>>,
    /// Per response chain: (key chain, |K_i ∩ R_j|).
    pub by_resp: Vec<Vec<(usize, usize)>>,
    /// Mentions present on both sides.
    pub shared: usize,
    pub key_mentions: usize,
    pub resp_mentions: usize,
}

impl Overlap {
    pub fn new<M: Eq + Hash>(input: &ScoringInput<M>) -> Self {
        let mut resp_of: HashMap<&M, usize> = HashMap::new();
        for (j, c) in input.response.iter().enumerate() {
            for m in c {
                let prev = resp_of.insert(m, j);
                debug_assert!(prev.is_none() || prev == Some(j), "response is not a partition");
            }
        }
        let mut by_key = Vec::with_capacity(input.key.len());
        let mut by_resp: Vec<Vec<(usize, usize)>> = vec![Vec::new(); input.response.len()];
        let mut shared = 0;
        for (i, c) in input.key.iter().enumerate() {
            let mut counts: Vec<(usize, usize)> = Vec::new();
            for m in c {
                if let Some(&j) = resp_of.get(m) {
                    shared += 1;
                    match counts.iter_mut().find(|(jj, _)| *jj == j) {
                        Some(e) => e.1 += 1,
                        None => counts.push((j, 1)),
                    }
                }
            }
            counts.sort_unstable();
            for &(j, n) in &counts {
                by_resp[j].push((i, n));
            }
            by_key.push(counts);
        }
        Overlap {
            key_sizes: input.key.iter().map(Vec::len).collect(),
            resp_sizes: input.response.iter().map(Vec::len).collect(),
            by_key,
            by_resp,
            shared,
            key_mentions: input.key.iter().map(Vec::len).sum(),
            resp_mentions: input.response.iter().map(Vec::len).sum(),
        }
    }
}

pub fn score<M: Clone + Eq + Hash>(metric: Metric, input: &ScoringInput<M>) -> MetricScore {
    let overlap = Overlap::new(input);
    score_with(metric, &overlap)
}

fn score_with(metric: Metric, overlap: &Overlap) -> MetricScore {
    match metric {
        Metric::Muc => formulas::muc(overlap),
        Metric::Bcub => formulas::bcub(overlap),
        Metric::Ceafm => ceaf::ceaf(overlap, CeafVariant::Mention),
        Metric::Ceafe => ceaf::ceaf(overlap, CeafVariant::Entity),
        Metric::Blanc => blanc::blanc(overlap),
        Metric::Lea => formulas::lea(overlap),
    }
}

/// Scores several metrics sharing one intersection pass.
pub fn score_all<M: Clone + Eq + Hash>(metrics: &[Metric], input: &ScoringInput<M>) -> Vec<MetricScore> {
    let overlap = Overlap::new(input);
    metrics.iter().map(|&m| score_with(m, &overlap)).collect()
}

pub fn score_muc<M: Clone + Eq + Hash>(input: &ScoringInput<M>) -> MetricScore {
    score(Metric::Muc, input)
}

pub fn score_bcub<M: Clone + Eq + Hash>(input: &ScoringInput<M>) -> MetricScore {
    score(Metric::Bcub, input)
}

pub fn score_ceaf<M: Clone + Eq + Hash>(input: &ScoringInput<M>, variant: CeafVariant) -> MetricScore {
    score(variant.metric(), input)
}

pub fn score_blanc<M: Clone + Eq + Hash>(input: &ScoringInput<M>) -> MetricScore {
    score(Metric::Blanc, input)
}

pub fn score_lea<M: Clone + Eq + Hash>(input: &ScoringInput<M>) -> MetricScore {
    score(Metric::Lea, input)
}

/// Micro-averages scores of one metric by summing numerators and
/// denominators in input order.
pub fn accumulate(metric: Metric, scores: &[MetricScore]) -> Result<MetricScore, MetricError> {
    if let Some(bad) = scores.iter().find(|s| s.metric != metric) {
        return Err(MetricError::MixedMetrics(metric, bad.metric));
    }
    if metric == Metric::Blanc {
        let mut parts = BlancParts::default();
        for s in scores {
            parts = parts.add(s.blanc.ok_or(MetricError::MissingBlancParts)?);
        }
        return Ok(parts.combine());
    }
    let mut recall = RatioPair::default();
    let mut precision = RatioPair::default();
    for s in scores {
        recall = recall.add(s.recall);
        precision = precision.add(s.precision);
    }
    Ok(MetricScore::from_pairs(metric, recall, precision))
}

/// Mean F1 of MUC, B³ and CEAF_e, when all three are present.
pub fn conll_average(scores: &[MetricScore]) -> Option<f64> {
    let get = |m| scores.iter().find(|s| s.metric == m).map(|s| s.f1);
    Some((get(Metric::Muc)? + get(Metric::Bcub)? + get(Metric::Ceafe)?) / 3.0)
}
