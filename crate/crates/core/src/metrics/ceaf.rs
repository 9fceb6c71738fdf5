use super::assignment::max_weight_assignment;
use super::{Metric, MetricScore, Overlap, RatioPair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CeafVariant {
    /// Φ_m(K, R) = |K ∩ R|
    Mention,
    /// Φ_e(K, R) = 2|K ∩ R| / (|K| + |R|)
    Entity,
}

impl CeafVariant {
    pub fn metric(self) -> Metric {
        match self {
            CeafVariant::Mention => Metric::Ceafm,
            CeafVariant::Entity => Metric::Ceafe,
        }
    }
}

pub fn ceaf_similarity(variant: CeafVariant, intersection: usize, key_size: usize, resp_size: usize) -> f64 {
    match variant {
        CeafVariant::Mention => intersection as f64,
        CeafVariant::Entity => {
            if key_size + resp_size == 0 {
                0.0
            } else {
                2.0 * intersection as f64 / (key_size + resp_size) as f64
            }
        }
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Optimal one-to-one alignment value Σ Φ(K_i, R_g(i)).
///
/// Chains only interact through non-empty intersections, so the bipartite
/// graph is split into connected components and each is solved on its own
/// dense submatrix.
pub(crate) fn optimal_alignment(o: &Overlap, variant: CeafVariant) -> f64 {
    let nk = o.key_sizes.len();
    let nr = o.resp_sizes.len();
    let mut parent: Vec<usize> = (0..nk + nr).collect();
    for (i, parts) in o.by_key.iter().enumerate() {
        for &(j, _) in parts {
            let a = find(&mut parent, i);
            let b = find(&mut parent, nk + j);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut components: std::collections::BTreeMap<usize, (Vec<usize>, Vec<usize>)> = Default::default();
    for i in 0..nk {
        if !o.by_key[i].is_empty() {
            let r = find(&mut parent, i);
            components.entry(r).or_default().0.push(i);
        }
    }
    for j in 0..nr {
        if !o.by_resp[j].is_empty() {
            let r = find(&mut parent, nk + j);
            components.entry(r).or_default().1.push(j);
        }
    }
    let mut total = 0.0;
    for (keys, resps) in components.values() {
        let weights: Vec<Vec<f64>> = keys
            .iter()
            .map(|&i| {
                let mut row = vec![0.0; resps.len()];
                for &(j, n) in &o.by_key[i] {
                    let col = resps.binary_search(&j).expect("response chain in component");
                    row[col] = ceaf_similarity(variant, n, o.key_sizes[i], o.resp_sizes[j]);
                }
                row
            })
            .collect();
        let assignment = max_weight_assignment(&weights);
        for (r, c) in assignment.iter().enumerate() {
            if let Some(c) = c {
                total += weights[r][*c];
            }
        }
    }
    total
}

pub(crate) fn ceaf(o: &Overlap, variant: CeafVariant) -> MetricScore {
    let aligned = optimal_alignment(o, variant);
    let self_sim = |sizes: &[usize]| -> f64 {
        sizes
            .iter()
            .filter(|&&s| s > 0)
            .map(|&s| ceaf_similarity(variant, s, s, s))
            .sum()
    };
    MetricScore::from_pairs(
        variant.metric(),
        RatioPair::new(aligned, self_sim(&o.key_sizes)),
        RatioPair::new(aligned, self_sim(&o.resp_sizes)),
    )
}
