use super::features::{describe_mentions, extract_features, MentionInfo};
use super::mentions::{MentionType, PronounList};
use super::train::LinearModel;
use super::{BaselineError, TrainConfig};
use crate::model::{overlaps, sort_document_order, Chain, Document, Mention};

/// Links from a pronoun to a later non-pronoun are never proposed.
pub fn candidate_allowed(first: &MentionInfo, second: &MentionInfo) -> bool {
    !(first.ty == MentionType::Pronoun && second.ty != MentionType::Pronoun)
}

struct Clusters {
    of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Clusters {
    fn new(n: usize) -> Self {
        Clusters {
            of: (0..n).collect(),
            members: (0..n).map(|i| vec![i]).collect(),
        }
    }

    fn compatible(&self, mentions: &[Mention], a: usize, b: usize) -> bool {
        let (ca, cb) = (self.of[a], self.of[b]);
        ca != cb
            && self.members[ca]
                .iter()
                .all(|&x| self.members[cb].iter().all(|&y| !overlaps(&mentions[x], &mentions[y])))
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (keep, gone) = {
            let (ca, cb) = (self.of[a], self.of[b]);
            (ca.min(cb), ca.max(cb))
        };
        let moved = std::mem::take(&mut self.members[gone]);
        for &x in &moved {
            self.of[x] = keep;
        }
        self.members[keep].extend(moved);
        self.members[keep].sort_unstable();
    }

    /// Non-singleton clusters ordered by first member.
    fn into_groups(self) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = self.members.into_iter().filter(|g| g.len() >= 2).collect();
        groups.sort();
        groups
    }
}

/// Transitive merging of positive links over mentions in document order.
/// Links are processed sorted by (later, earlier) position; a merge that
/// would put overlapping mentions in one chain is skipped.
pub fn merge_links(mentions: &[Mention], links: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut sorted: Vec<(usize, usize)> = links
        .iter()
        .filter(|(a, b)| a != b)
        .map(|&(a, b)| (a.max(b), a.min(b)))
        .collect();
    sorted.sort_unstable();
    sorted.dedup();
    let mut clusters = Clusters::new(mentions.len());
    for (j, i) in sorted {
        if clusters.compatible(mentions, i, j) {
            clusters.merge(i, j);
        }
    }
    clusters.into_groups()
}

/// Best-Link attachment: each mention joins the chain of its
/// highest-scoring predecessor if that score exceeds `threshold` and the
/// chain has no mention overlapping it. Equal scores go to the closest
/// predecessor. `score(i, j)` is `None` for pairs that are not candidates.
///
/// Returns the chains and, per mention, the predecessor it attached to.
pub fn best_link(
    mentions: &[Mention],
    threshold: f64,
    mut score: impl FnMut(usize, usize) -> Option<f64>,
) -> (Vec<Vec<usize>>, Vec<Option<usize>>) {
    let n = mentions.len();
    let mut clusters = Clusters::new(n);
    let mut antecedent = vec![None; n];
    for j in 0..n {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..j).rev() {
            if let Some(s) = score(i, j) {
                if best.is_none_or(|(_, b)| s > b) {
                    best = Some((i, s));
                }
            }
        }
        if let Some((i, s)) = best {
            if s > threshold && clusters.compatible(mentions, i, j) {
                clusters.merge(i, j);
                antecedent[j] = Some(i);
            }
        }
    }
    (clusters.into_groups(), antecedent)
}

fn prepared(
    doc: &Document,
    mentions: &[Mention],
    pronouns: &PronounList,
) -> Result<(Vec<Mention>, Vec<MentionInfo>), BaselineError> {
    let mut sorted = mentions.to_vec();
    sort_document_order(&mut sorted, doc)?;
    let info = describe_mentions(doc, &sorted, pronouns)?;
    Ok((sorted, info))
}

fn to_chains(mentions: &[Mention], groups: Vec<Vec<usize>>) -> Vec<Chain> {
    groups
        .into_iter()
        .map(|g| Chain::new(g.into_iter().map(|i| mentions[i].id)))
        .collect()
}

fn in_window(i: usize, j: usize, cfg: &TrainConfig) -> bool {
    j - i < cfg.neg_window
}

/// Chains from a classifier: every candidate pair within the window that
/// the model calls coreferent is merged.
pub fn build_chains_merge(
    doc: &Document,
    mentions: &[Mention],
    model: &LinearModel,
    cfg: &TrainConfig,
    pronouns: &PronounList,
) -> Result<Vec<Chain>, BaselineError> {
    let (sorted, info) = prepared(doc, mentions, pronouns)?;
    let mut links = Vec::new();
    for j in 0..sorted.len() {
        for i in 0..j {
            if in_window(i, j, cfg)
                && candidate_allowed(&info[i], &info[j])
                && model.predict(&extract_features(&info[i], &info[j]))
            {
                links.push((i, j));
            }
        }
    }
    Ok(to_chains(&sorted, merge_links(&sorted, &links)))
}

/// Chains from a regressor with Best-Link attachment.
pub fn build_chains_best_link(
    doc: &Document,
    mentions: &[Mention],
    model: &LinearModel,
    cfg: &TrainConfig,
    pronouns: &PronounList,
) -> Result<Vec<Chain>, BaselineError> {
    let (sorted, info) = prepared(doc, mentions, pronouns)?;
    let (groups, _) = best_link(&sorted, cfg.best_link_threshold, |i, j| {
        (in_window(i, j, cfg) && candidate_allowed(&info[i], &info[j]))
            .then(|| model.score(&extract_features(&info[i], &info[j])))
    });
    Ok(to_chains(&sorted, groups))
}
