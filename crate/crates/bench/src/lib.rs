//! Seeded workloads for the benchmarks.

use corefkit::{AnnotationSet, Chain, Mention, MentionId, Span};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups(labels: &[usize]) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut index = std::collections::HashMap::new();
    for (m, &l) in labels.iter().enumerate() {
        let slot = *index.entry(l).or_insert_with(|| {
            out.push(Vec::new());
            out.len() - 1
        });
        out[slot].push(m as u32);
    }
    out
}

/// Key chains of 1 to 9 mentions over `n` mentions, and a response that
/// moves `noise` of the mentions to a random chain.
pub fn key_and_response(n: usize, noise: f64, seed: u64) -> (Vec<Vec<u32>>, Vec<Vec<u32>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = Vec::with_capacity(n);
    let mut chain = 0;
    while labels.len() < n {
        labels.extend(std::iter::repeat(chain).take(rng.gen_range(1..=9)));
        chain += 1;
    }
    labels.truncate(n);
    labels.shuffle(&mut rng);
    let resp: Vec<usize> = labels
        .iter()
        .map(|&l| if rng.gen_bool(noise) { rng.gen_range(0..chain) } else { l })
        .collect();
    (groups(&labels), groups(&resp))
}

/// A document of `components` sentences, each with `size` short mentions
/// and `annotators` noisy copies of a hidden partition.
pub fn adjudication_input(components: usize, size: usize, annotators: usize, seed: u64) -> (Vec<Mention>, Vec<AnnotationSet>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mentions = Vec::new();
    let mut chains: Vec<Vec<Chain>> = vec![Vec::new(); annotators];
    for c in 0..components {
        let width = size + size / 2;
        let mut spans = std::collections::BTreeSet::new();
        while spans.len() < size {
            let from = rng.gen_range(1..=width);
            spans.insert((from, (from + rng.gen_range(0..2)).min(width)));
        }
        let base = mentions.len() as MentionId;
        for (i, (f, t)) in spans.into_iter().enumerate() {
            mentions.push(Mention { id: base + i as MentionId, span: Span::new(format!("s{c}"), f, t) });
        }
        let k = (size / 3).max(1);
        let truth: Vec<usize> = (0..size).map(|_| rng.gen_range(0..k)).collect();
        for a in chains.iter_mut() {
            let labels: Vec<usize> = truth.iter().map(|&l| if rng.gen_bool(0.2) { rng.gen_range(0..k) } else { l }).collect();
            a.extend(groups(&labels).into_iter().filter(|g| g.len() >= 2).map(|g| Chain::new(g.into_iter().map(|m| base + m))));
        }
    }
    let annotations = chains.into_iter().enumerate().map(|(i, c)| AnnotationSet::new(format!("a{i}"), c)).collect();
    (mentions, annotations)
}
