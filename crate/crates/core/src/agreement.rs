//! Krippendorff's α over coreference annotations.
//!
//! Mentions are the objects being classified and the chains annotators put
//! them in are the classes; a class is identified by its member set, so
//! identical chains from different annotators are the same class. A
//! mention an annotator left unassigned is labelled with the singleton set
//! of itself.

use std::collections::HashMap;

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::model::{AnnotationSet, Mention, MentionId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgreementError {
    #[error("agreement needs at least two annotators, got {0}")]
    TooFewAnnotators(usize),
    #[error("agreement needs at least one object")]
    NoObjects,
    #[error("object {object} has {found} labels, expected {expected}")]
    LabelCount { object: usize, found: u32, expected: usize },
}

/// Per-object class counts n_{b_i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgreementTable {
    classes: Vec<Vec<MentionId>>,
    /// For every object: (class index, count), sorted by class index.
    counts: Vec<Vec<(usize, u32)>>,
    annotators: usize,
}

impl AgreementTable {
    /// Builds a table from explicit counts; `classes` must be sorted sets.
    pub fn from_counts(
        classes: Vec<Vec<MentionId>>,
        counts: Vec<Vec<(usize, u32)>>,
        annotators: usize,
    ) -> Result<Self, AgreementError> {
        for (i, row) in counts.iter().enumerate() {
            let total: u32 = row.iter().map(|&(_, n)| n).sum();
            if total as usize != annotators {
                return Err(AgreementError::LabelCount {
                    object: i,
                    found: total,
                    expected: annotators,
                });
            }
        }
        let counts = counts
            .into_iter()
            .map(|mut row| {
                row.retain(|&(_, n)| n > 0);
                row.sort_unstable();
                row
            })
            .collect();
        Ok(AgreementTable {
            classes,
            counts,
            annotators,
        })
    }

    /// Number of objects, r.
    pub fn objects(&self) -> usize {
        self.counts.len()
    }

    /// Number of annotators, m.
    pub fn annotators(&self) -> usize {
        self.annotators
    }

    pub fn classes(&self) -> &[Vec<MentionId>] {
        &self.classes
    }

    pub fn counts(&self, object: usize) -> &[(usize, u32)] {
        &self.counts[object]
    }

    /// n_{b_i}
    pub fn count(&self, object: usize, class: usize) -> u32 {
        self.counts[object]
            .iter()
            .find(|&&(b, _)| b == class)
            .map_or(0, |&(_, n)| n)
    }

    /// n_b for every class.
    pub fn marginals(&self) -> Vec<u64> {
        let mut n = vec![0u64; self.classes.len()];
        for row in &self.counts {
            for &(b, c) in row {
                n[b] += c as u64;
            }
        }
        n
    }
}

pub fn build_agreement_table(mentions: &[Mention], annotations: &[AnnotationSet]) -> AgreementTable {
    let mut class_ix: HashMap<Vec<MentionId>, usize> = HashMap::new();
    let mut classes = Vec::new();
    let mut intern = |set: Vec<MentionId>| -> usize {
        *class_ix.entry(set.clone()).or_insert_with(|| {
            classes.push(set);
            classes.len() - 1
        })
    };
    let object_of: HashMap<MentionId, usize> = mentions.iter().enumerate().map(|(i, m)| (m.id, i)).collect();
    let mut counts: Vec<HashMap<usize, u32>> = vec![HashMap::new(); mentions.len()];
    for a in annotations {
        let mut labelled = vec![false; mentions.len()];
        for chain in &a.chains {
            let mut set = chain.members.clone();
            set.sort_unstable();
            set.dedup();
            let b = intern(set);
            for id in &chain.members {
                if let Some(&i) = object_of.get(id) {
                    if !labelled[i] {
                        labelled[i] = true;
                        *counts[i].entry(b).or_default() += 1;
                    }
                }
            }
        }
        for (i, m) in mentions.iter().enumerate() {
            if !labelled[i] {
                let b = intern(vec![m.id]);
                *counts[i].entry(b).or_default() += 1;
            }
        }
    }
    let counts = counts
        .into_iter()
        .map(|row| {
            let mut v: Vec<(usize, u32)> = row.into_iter().collect();
            v.sort_unstable();
            v
        })
        .collect();
    AgreementTable {
        classes,
        counts,
        annotators: annotations.len(),
    }
}

fn intersection_size(a: &[MentionId], b: &[MentionId]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Match score M: 1 for equal sets, 2/3 when one contains the other, 1/3
/// when they share more than one mention, 0 otherwise. Arguments are sorted
/// sets.
pub fn match_score(b: &[MentionId], c: &[MentionId]) -> f64 {
    let common = intersection_size(b, c);
    if common == b.len() && common == c.len() {
        1.0
    } else if common == b.len() || common == c.len() {
        2.0 / 3.0
    } else if common >= 2 {
        1.0 / 3.0
    } else {
        0.0
    }
}

/// IAA₁ distance, δ = 1 − M.
pub fn passonneau_delta(b: &[MentionId], c: &[MentionId]) -> f64 {
    1.0 - match_score(b, c)
}

/// IAA₂ distance, δ = 1 − J·M with J = |b ∩ c| / |b ∪ c|.
pub fn masi_delta(b: &[MentionId], c: &[MentionId]) -> f64 {
    let common = intersection_size(b, c);
    let union = b.len() + c.len() - common;
    let jaccard = if union == 0 { 1.0 } else { common as f64 / union as f64 };
    1.0 - jaccard * match_score(b, c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Distance {
    Passonneau,
    Masi,
}

impl Distance {
    pub fn delta(self, b: &[MentionId], c: &[MentionId]) -> f64 {
        match self {
            Distance::Passonneau => passonneau_delta(b, c),
            Distance::Masi => masi_delta(b, c),
        }
    }
}

/// α = 1 − (rm − 1)/(m − 1) · D_o / D_e with
/// D_o = Σ_i Σ_{b<c} n_{b_i} n_{c_i} δ_bc and D_e = Σ_{b<c} n_b n_c δ_bc.
///
/// A table without expected disagreement (a single class throughout) has
/// α = 1.
pub fn krippendorff_alpha(
    table: &AgreementTable,
    delta: impl Fn(&[MentionId], &[MentionId]) -> f64,
) -> Result<f64, AgreementError> {
    let m = table.annotators();
    let r = table.objects();
    if m < 2 {
        return Err(AgreementError::TooFewAnnotators(m));
    }
    if r == 0 {
        return Err(AgreementError::NoObjects);
    }
    let classes = table.classes();
    let mut cache: HashMap<(usize, usize), f64> = HashMap::new();
    let mut d = |b: usize, c: usize| *cache.entry((b, c)).or_insert_with(|| delta(&classes[b], &classes[c]));

    let mut observed = 0.0;
    for i in 0..r {
        let row = table.counts(i);
        for (x, &(b, nb)) in row.iter().enumerate() {
            for &(c, nc) in &row[x + 1..] {
                observed += (nb as f64) * (nc as f64) * d(b, c);
            }
        }
    }
    let marginals = table.marginals();
    let used: Vec<usize> = (0..classes.len()).filter(|&b| marginals[b] > 0).collect();
    let mut expected = 0.0;
    for (x, &b) in used.iter().enumerate() {
        for &c in &used[x + 1..] {
            expected += (marginals[b] as f64) * (marginals[c] as f64) * d(b, c);
        }
    }
    if expected == 0.0 {
        return Ok(1.0);
    }
    let factor = ((r * m) as f64 - 1.0) / (m as f64 - 1.0);
    Ok(1.0 - factor * observed / expected)
}

/// α under both distances for one document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentAgreement {
    pub doc_id: String,
    pub objects: usize,
    pub annotators: usize,
    pub iaa1: f64,
    pub iaa2: f64,
}

pub fn document_agreement(
    doc_id: impl Into<String>,
    mentions: &[Mention],
    annotations: &[AnnotationSet],
) -> Result<DocumentAgreement, AgreementError> {
    let table = build_agreement_table(mentions, annotations);
    Ok(DocumentAgreement {
        doc_id: doc_id.into(),
        objects: table.objects(),
        annotators: table.annotators(),
        iaa1: krippendorff_alpha(&table, passonneau_delta)?,
        iaa2: krippendorff_alpha(&table, masi_delta)?,
    })
}

/// Per-document values plus corpus aggregates: weighted by object count
/// and plain document means.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    pub documents: Vec<DocumentAgreement>,
}

impl AgreementReport {
    fn weighted(&self, f: impl Fn(&DocumentAgreement) -> f64) -> f64 {
        let total: usize = self.documents.iter().map(|d| d.objects).sum();
        if total == 0 {
            return 0.0;
        }
        self.documents.iter().map(|d| d.objects as f64 * f(d)).sum::<f64>() / total as f64
    }

    fn mean(&self, f: impl Fn(&DocumentAgreement) -> f64) -> f64 {
        if self.documents.is_empty() {
            return 0.0;
        }
        self.documents.iter().map(f).sum::<f64>() / self.documents.len() as f64
    }

    pub fn weighted_iaa1(&self) -> f64 {
        self.weighted(|d| d.iaa1)
    }

    pub fn weighted_iaa2(&self) -> f64 {
        self.weighted(|d| d.iaa2)
    }

    pub fn mean_iaa1(&self) -> f64 {
        self.mean(|d| d.iaa1)
    }

    pub fn mean_iaa2(&self) -> f64 {
        self.mean(|d| d.iaa2)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{:<24}{:>9}{:>12}{:>9}{:>9}\n", "document", "mentions", "annotators", "iaa1", "iaa2");
        for d in &self.documents {
            out.push_str(&format!(
                "{:<24}{:>9}{:>12}{:>9.4}{:>9.4}\n",
                d.doc_id, d.objects, d.annotators, d.iaa1, d.iaa2
            ));
        }
        let objects: usize = self.documents.iter().map(|d| d.objects).sum();
        out.push_str(&format!(
            "{:<24}{:>9}{:>12}{:>9.4}{:>9.4}\n",
            "weighted", objects, "", self.weighted_iaa1(), self.weighted_iaa2()
        ));
        out.push_str(&format!(
            "{:<24}{:>9}{:>12}{:>9.4}{:>9.4}\n",
            "mean", "", "", self.mean_iaa1(), self.mean_iaa2()
        ));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "documents": self.documents,
            "weighted": { "iaa1": self.weighted_iaa1(), "iaa2": self.weighted_iaa2() },
            "mean": { "iaa1": self.mean_iaa1(), "iaa2": self.mean_iaa2() },
        })
    }
}
