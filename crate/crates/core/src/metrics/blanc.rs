use std::collections::{BTreeSet, HashSet};
use std::hash::Hash;

use super::formulas::links;
use super::{BlancParts, MetricScore, Overlap, RatioPair, ScoringInput};

/// Explicit link sets of a key/response pair. Links are unordered pairs
/// stored with the smaller mention first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkSets<M: Ord> {
    pub coref_key: BTreeSet<(M, M)>,
    pub coref_resp: BTreeSet<(M, M)>,
    pub all_key: BTreeSet<(M, M)>,
    pub all_resp: BTreeSet<(M, M)>,
    pub noncoref_key: BTreeSet<(M, M)>,
    pub noncoref_resp: BTreeSet<(M, M)>,
}

fn pairs<M: Ord + Clone>(items: &[M]) -> impl Iterator<Item = (M, M)> + '_ {
    items.iter().enumerate().flat_map(move |(i, a)| {
        items[i + 1..].iter().filter(move |b| *b != a).map(move |b| {
            if a < b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            }
        })
    })
}

/// Materializes every link; quadratic in the mention count.
pub fn link_sets<M: Ord + Clone + Hash>(input: &ScoringInput<M>) -> LinkSets<M> {
    let crlinks = |side: &[Vec<M>]| -> BTreeSet<(M, M)> { side.iter().flat_map(|c| pairs(c)).collect() };
    let union = |side: &[Vec<M>]| -> Vec<M> {
        let mut seen = HashSet::new();
        side.iter().flatten().filter(|m| seen.insert(*m)).cloned().collect()
    };
    let coref_key = crlinks(&input.key);
    let coref_resp = crlinks(&input.response);
    let all_key: BTreeSet<_> = pairs(&union(&input.key)).collect();
    let all_resp: BTreeSet<_> = pairs(&union(&input.response)).collect();
    LinkSets {
        noncoref_key: all_key.difference(&coref_key).cloned().collect(),
        noncoref_resp: all_resp.difference(&coref_resp).cloned().collect(),
        coref_key,
        coref_resp,
        all_key,
        all_resp,
    }
}

/// Link counts from the intersection structure, without enumerating links.
pub(crate) fn blanc(o: &Overlap) -> MetricScore {
    let ck: f64 = o.key_sizes.iter().map(|&s| links(s)).sum();
    let cr: f64 = o.resp_sizes.iter().map(|&s| links(s)).sum();
    let c_both: f64 = o.by_key.iter().flatten().map(|&(_, n)| links(n)).sum();
    let nk = links(o.key_mentions) - ck;
    let nr = links(o.resp_mentions) - cr;
    // Non-coreference links common to both sides lie among the shared
    // mentions: all shared links minus those coreferent on either side.
    let shared_in_key: f64 = o
        .by_key
        .iter()
        .map(|parts| links(parts.iter().map(|&(_, n)| n).sum()))
        .sum();
    let shared_in_resp: f64 = o
        .by_resp
        .iter()
        .map(|parts| links(parts.iter().map(|&(_, n)| n).sum()))
        .sum();
    let n_both = links(o.shared) - shared_in_key - shared_in_resp + c_both;
    BlancParts {
        coref_recall: RatioPair::new(c_both, ck),
        coref_precision: RatioPair::new(c_both, cr),
        noncoref_recall: RatioPair::new(n_both, nk),
        noncoref_precision: RatioPair::new(n_both, nr),
    }
    .combine()
}
