//! Maximum-weight assignment on a dense rectangular matrix (Kuhn-Munkres
//! with potentials, O(n^2 m)).

/// Returns, for every row, the column it is assigned to.
///
/// With more rows than columns some rows stay unassigned; otherwise every
/// row is assigned to a distinct column. The assignment maximizes the sum
/// of the selected weights.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<Option<usize>> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return vec![None; rows];
    }
    debug_assert!(weights.iter().all(|r| r.len() == cols));
    if rows > cols {
        let transposed: Vec<Vec<f64>> = (0..cols).map(|c| (0..rows).map(|r| weights[r][c]).collect()).collect();
        let by_col = max_weight_assignment(&transposed);
        let mut out = vec![None; rows];
        for (c, r) in by_col.into_iter().enumerate() {
            if let Some(r) = r {
                out[r] = Some(c);
            }
        }
        return out;
    }

    // Minimizing negated weights; 1-based arrays with index 0 as the sentinel.
    let cost = |r: usize, c: usize| -weights[r - 1][c - 1];
    let mut u = vec![0.0f64; rows + 1];
    let mut v = vec![0.0f64; cols + 1];
    let mut owner = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for r in 1..=rows {
        owner[0] = r;
        let mut c0 = 0;
        let mut min_v = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[c0] = true;
            let r0 = owner[c0];
            let mut delta = f64::INFINITY;
            let mut c1 = 0;
            for c in 1..=cols {
                if !used[c] {
                    let cur = cost(r0, c) - u[r0] - v[c];
                    if cur < min_v[c] {
                        min_v[c] = cur;
                        way[c] = c0;
                    }
                    if min_v[c] < delta {
                        delta = min_v[c];
                        c1 = c;
                    }
                }
            }
            for c in 0..=cols {
                if used[c] {
                    u[owner[c]] += delta;
                    v[c] -= delta;
                } else {
                    min_v[c] -= delta;
                }
            }
            c0 = c1;
            if owner[c0] == 0 {
                break;
            }
        }
        loop {
            let c1 = way[c0];
            owner[c0] = owner[c1];
            c0 = c1;
            if c0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![None; rows];
    for c in 1..=cols {
        if owner[c] != 0 {
            out[owner[c] - 1] = Some(c - 1);
        }
    }
    out
}
