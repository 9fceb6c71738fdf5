use super::{solve_with, AdjudicationError, AdjudicationResult, AdjudicatorOptions, Problem, Solution};
use crate::model::{AnnotationSet, Mention};

/// Largest component the exhaustive solver accepts.
pub const ORACLE_LIMIT: usize = 10;

/// Visits every restricted growth string of length `n` in lexicographic
/// order.
fn for_each_rgs(n: usize, mut visit: impl FnMut(&[usize])) {
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut labels = vec![0usize; n];
    // max_prefix[i] = max(labels[0..i])
    let mut max_prefix = vec![0usize; n];
    loop {
        visit(&labels);
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if labels[i] <= max_prefix[i] {
                labels[i] += 1;
                break;
            }
            i -= 1;
        }
        for j in i + 1..n {
            max_prefix[j] = max_prefix[j - 1].max(labels[j - 1]);
            labels[j] = 0;
        }
    }
}

fn exhaustive(p: &Problem) -> Result<Option<Solution>, AdjudicationError> {
    if p.n > ORACLE_LIMIT {
        return Err(AdjudicationError::ComponentTooLarge {
            size: p.n,
            limit: ORACLE_LIMIT,
        });
    }
    let mut best: Option<(u64, Vec<usize>)> = None;
    let mut nodes = 0;
    for_each_rgs(p.n, |labels| {
        nodes += 1;
        if let Some(c) = p.evaluate(labels) {
            if best.as_ref().is_none_or(|(b, _)| c < *b) {
                best = Some((c, labels.to_vec()));
            }
        }
    });
    Ok(best.map(|(cost, labels)| Solution { labels, cost, nodes }))
}

/// Same contract as [`super::adjudicate_with`], by enumerating every
/// partition of each component.
pub fn enumerate_oracle(
    mentions: &[Mention],
    annotations: &[AnnotationSet],
    opts: &AdjudicatorOptions,
) -> Result<AdjudicationResult, AdjudicationError> {
    solve_with(mentions, annotations, opts, exhaustive)
}
