//! Independent reference computations, written directly from the metric
//! and agreement definitions without reusing library internals.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

/// CEAF by trying every injective mapping from key chains to response
/// chains. Returns (best total similarity, self-similarity of key,
/// self-similarity of response).
pub fn ceaf_exhaustive(key: &[Vec<u32>], resp: &[Vec<u32>], entity: bool) -> (f64, f64, f64) {
    let phi = |a: &[u32], b: &[u32]| {
        let sb: HashSet<&u32> = b.iter().collect();
        let common = a.iter().filter(|x| sb.contains(x)).count() as f64;
        if entity {
            2.0 * common / (a.len() + b.len()) as f64
        } else {
            common
        }
    };
    fn search(i: usize, used: &mut Vec<bool>, sim: &[Vec<f64>], acc: f64, best: &mut f64) {
        if i == sim.len() {
            if acc > *best {
                *best = acc;
            }
            return;
        }
        search(i + 1, used, sim, acc, best);
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                search(i + 1, used, sim, acc + sim[i][j], best);
                used[j] = false;
            }
        }
    }
    let sim: Vec<Vec<f64>> = key.iter().map(|k| resp.iter().map(|r| phi(k, r)).collect()).collect();
    let mut best = 0.0;
    search(0, &mut vec![false; resp.len()], &sim, 0.0, &mut best);
    let self_k = key.iter().map(|k| phi(k, k)).sum();
    let self_r = resp.iter().map(|r| phi(r, r)).sum();
    (best, self_k, self_r)
}

fn common(b: &[u32], c: &[u32]) -> usize {
    b.iter().filter(|x| c.contains(x)).count()
}

/// Agreement of two class labels: identical 1, nested 2/3, sharing more
/// than one mention 1/3, otherwise 0.
fn agreement_weight(b: &[u32], c: &[u32]) -> f64 {
    let n = common(b, c);
    if n == b.len() && n == c.len() {
        1.0
    } else if n == b.len() || n == c.len() {
        2.0 / 3.0
    } else if n > 1 {
        1.0 / 3.0
    } else {
        0.0
    }
}

pub fn delta_plain(b: &[u32], c: &[u32]) -> f64 {
    1.0 - agreement_weight(b, c)
}

pub fn delta_masi(b: &[u32], c: &[u32]) -> f64 {
    let n = common(b, c);
    let union = b.len() + c.len() - n;
    1.0 - (n as f64 / union as f64) * agreement_weight(b, c)
}

/// α through the coincidence matrix: o_bc = Σ_u n_bu n_cu / (m_u − 1) over
/// ordered pairs b ≠ c, n_b the pooled label totals, n the number of
/// pairable values, and α = 1 − (n − 1) Σ o_bc δ_bc / Σ n_b n_c δ_bc.
///
/// `rows[u]` maps class index to count for unit `u`.
pub fn alpha_coincidence(classes: &[Vec<u32>], rows: &[BTreeMap<usize, u32>], delta: fn(&[u32], &[u32]) -> f64) -> f64 {
    let k = classes.len();
    let mut o = vec![vec![0.0f64; k]; k];
    let mut totals = vec![0.0f64; k];
    let mut n = 0.0;
    for row in rows {
        let mu: u32 = row.values().sum();
        if mu < 2 {
            continue;
        }
        n += mu as f64;
        for (&b, &nb) in row {
            totals[b] += nb as f64;
            for (&c, &nc) in row {
                if b != c {
                    o[b][c] += (nb as f64) * (nc as f64) / (mu as f64 - 1.0);
                }
            }
        }
    }
    let mut observed = 0.0;
    let mut expected = 0.0;
    for b in 0..k {
        for c in 0..k {
            if b != c {
                let d = delta(&classes[b], &classes[c]);
                observed += o[b][c] * d;
                expected += totals[b] * totals[c] * d;
            }
        }
    }
    if expected == 0.0 {
        return 1.0;
    }
    1.0 - (n - 1.0) * observed / expected
}
