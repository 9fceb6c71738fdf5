use super::{Metric, MetricScore, Overlap, RatioPair};

pub(crate) fn links(n: usize) -> f64 {
    (n * n.saturating_sub(1) / 2) as f64
}

/// Σ (|C| − |p(C)|) over Σ (|C| − 1), where p(C) is the partition of C
/// induced by the other side, uncovered mentions counting as their own part.
fn muc_side(sizes: &[usize], inter: &[Vec<(usize, usize)>]) -> RatioPair {
    let mut num = 0usize;
    let mut den = 0usize;
    for (size, parts) in sizes.iter().zip(inter) {
        if *size == 0 {
            continue;
        }
        let covered: usize = parts.iter().map(|&(_, n)| n).sum();
        let partitions = parts.len() + (size - covered);
        num += size - partitions;
        den += size - 1;
    }
    RatioPair::new(num as f64, den as f64)
}

pub(crate) fn muc(o: &Overlap) -> MetricScore {
    MetricScore::from_pairs(
        Metric::Muc,
        muc_side(&o.key_sizes, &o.by_key),
        muc_side(&o.resp_sizes, &o.by_resp),
    )
}

fn bcub_side(sizes: &[usize], inter: &[Vec<(usize, usize)>]) -> RatioPair {
    let mut num = 0.0;
    let mut den = 0usize;
    for (size, parts) in sizes.iter().zip(inter) {
        if *size == 0 {
            continue;
        }
        let sq: usize = parts.iter().map(|&(_, n)| n * n).sum();
        num += sq as f64 / *size as f64;
        den += size;
    }
    RatioPair::new(num, den as f64)
}

pub(crate) fn bcub(o: &Overlap) -> MetricScore {
    MetricScore::from_pairs(
        Metric::Bcub,
        bcub_side(&o.key_sizes, &o.by_key),
        bcub_side(&o.resp_sizes, &o.by_resp),
    )
}

/// Σ |C| · resolution(C) over Σ |C|.
///
/// resolution(C) is the fraction of C's links found within single chains of
/// the other side. A singleton counts as one self-link, resolved only if
/// the other side has the same singleton.
fn lea_side(sizes: &[usize], other_sizes: &[usize], inter: &[Vec<(usize, usize)>]) -> RatioPair {
    let mut num = 0.0;
    let mut den = 0usize;
    for (size, parts) in sizes.iter().zip(inter) {
        let size = *size;
        if size == 0 {
            continue;
        }
        let resolution = if size == 1 {
            let matched = parts.iter().any(|&(j, n)| n == 1 && other_sizes[j] == 1);
            if matched {
                1.0
            } else {
                0.0
            }
        } else {
            let found: f64 = parts.iter().map(|&(_, n)| links(n)).sum();
            found / links(size)
        };
        num += size as f64 * resolution;
        den += size;
    }
    RatioPair::new(num, den as f64)
}

pub(crate) fn lea(o: &Overlap) -> MetricScore {
    MetricScore::from_pairs(
        Metric::Lea,
        lea_side(&o.key_sizes, &o.resp_sizes, &o.by_key),
        lea_side(&o.resp_sizes, &o.key_sizes, &o.by_resp),
    )
}
