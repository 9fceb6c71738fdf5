use super::{Problem, Solution};

/// Cost of putting vertex `u` into each existing cluster, plus a new one
/// at the end, given the vertices `0..placed` already assigned. `None`
/// marks an infeasible choice.
fn placement_costs(p: &Problem, labels: &[usize], clusters: usize, placed: usize, u: usize, out: &mut Vec<Option<u64>>) {
    let mut split_total = 0u64;
    let mut split_blocked = 0usize;
    let mut same_sum = vec![0u64; clusters];
    let mut same_blocked = vec![false; clusters];
    let mut split_in = vec![0u64; clusters];
    let mut split_blocked_in = vec![0usize; clusters];
    for w in 0..placed {
        let c = labels[w];
        match p.split(w, u) {
            Some(s) => {
                split_total += s;
                split_in[c] += s;
            }
            None => {
                split_blocked += 1;
                split_blocked_in[c] += 1;
            }
        }
        match p.same(w, u) {
            Some(s) => same_sum[c] += s,
            None => same_blocked[c] = true,
        }
    }
    out.clear();
    for c in 0..clusters {
        let ok = !same_blocked[c] && split_blocked == split_blocked_in[c];
        out.push(ok.then(|| split_total - split_in[c] + same_sum[c]));
    }
    out.push((split_blocked == 0).then_some(split_total));
}

struct Search<'a> {
    p: &'a Problem,
    labels: Vec<usize>,
    /// Σ_{a<b, a,b ≥ v} min(same, split) for every v.
    pair_suffix: Vec<Option<u64>>,
    best: Option<u64>,
    best_from_search: bool,
    best_labels: Option<Vec<usize>>,
    nodes: u64,
    scratch: Vec<Option<u64>>,
}

impl Search<'_> {
    /// Admissible bound on the cost still to come below a node where
    /// vertices `0..v` are placed.
    fn remaining_bound(&mut self, v: usize, clusters: usize) -> Option<u64> {
        let mut bound = self.pair_suffix[v]?;
        let mut costs = std::mem::take(&mut self.scratch);
        for u in v..self.p.n {
            placement_costs(self.p, &self.labels, clusters, v, u, &mut costs);
            match costs.iter().flatten().min() {
                Some(m) => bound += m,
                None => {
                    self.scratch = costs;
                    return None;
                }
            }
        }
        self.scratch = costs;
        Some(bound)
    }

    fn prune(&self, lb: u64) -> bool {
        match self.best {
            None => false,
            Some(b) => lb > b || (lb == b && self.best_from_search),
        }
    }

    fn dfs(&mut self, v: usize, clusters: usize, acc: u64) {
        self.nodes += 1;
        let n = self.p.n;
        if v == n {
            let better = match self.best {
                None => true,
                Some(b) => acc < b || (acc == b && !self.best_from_search),
            };
            if better {
                self.best = Some(acc);
                self.best_from_search = true;
                self.best_labels = Some(self.labels.clone());
            }
            return;
        }
        let mut options = Vec::with_capacity(clusters + 1);
        placement_costs(self.p, &self.labels, clusters, v, v, &mut options);
        for (c, delta) in options.into_iter().enumerate() {
            let Some(delta) = delta else { continue };
            let acc = acc + delta;
            self.labels[v] = c;
            let next = clusters.max(c + 1);
            if v + 1 < n {
                let Some(rest) = self.remaining_bound(v + 1, next) else { continue };
                if self.prune(acc + rest) {
                    continue;
                }
            }
            self.dfs(v + 1, next, acc);
        }
    }
}

/// Greedy assignment used as the starting incumbent.
fn greedy(p: &Problem) -> Option<(Vec<usize>, u64)> {
    let mut labels = vec![0; p.n];
    let mut clusters = 0;
    let mut total = 0;
    let mut costs = Vec::new();
    for v in 0..p.n {
        placement_costs(p, &labels, clusters, v, v, &mut costs);
        let (c, cost) = costs
            .iter()
            .enumerate()
            .filter_map(|(c, x)| x.map(|x| (c, x)))
            .min_by_key(|&(c, x)| (x, c))?;
        labels[v] = c;
        clusters = clusters.max(c + 1);
        total += cost;
    }
    Some((labels, total))
}

pub(crate) fn branch_and_bound(p: &Problem) -> Option<Solution> {
    let n = p.n;
    if n <= 1 {
        return Some(Solution {
            labels: vec![0; n],
            cost: 0,
            nodes: 1,
        });
    }
    let mut pair_suffix = vec![Some(0u64); n + 1];
    for v in (0..n).rev() {
        let mut row = Some(0u64);
        for b in v + 1..n {
            let m = match (p.same(v, b), p.split(v, b)) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            row = row.zip(m).map(|(r, m)| r + m);
        }
        pair_suffix[v] = pair_suffix[v + 1].zip(row).map(|(a, b)| a + b);
    }
    let incumbent = greedy(p);
    let mut s = Search {
        p,
        labels: vec![0; n],
        pair_suffix,
        best: incumbent.as_ref().map(|x| x.1),
        best_from_search: false,
        best_labels: incumbent.map(|x| x.0),
        nodes: 0,
        scratch: Vec::new(),
    };
    s.dfs(0, 0, 0);
    let nodes = s.nodes;
    s.best.zip(s.best_labels).map(|(cost, labels)| Solution { labels, cost, nodes })
}
