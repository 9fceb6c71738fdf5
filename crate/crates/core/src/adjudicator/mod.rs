//! Merging several annotations of one document into a gold standard.
//!
//! The gold partition minimizes a weighted disagreement count against all
//! annotators: every pair placed together costs `commit` per annotator who
//! kept the pair apart, and every pair placed apart costs `omit` per
//! annotator who linked it. Two hard constraints hold: a chain never
//! contains overlapping mentions, and two mentions share a chain only if at
//! least one annotator linked them (or the pair is forced).

mod oracle;
mod search;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{overlaps, AnnotationSet, Chain, Mention, MentionId};

pub use oracle::{enumerate_oracle, ORACLE_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdjudicationError {
    #[error("adjudication needs at least one annotation")]
    NoAnnotations,
    #[error("constraint refers to undeclared mention {0}")]
    UnknownMention(MentionId),
    #[error("mentions {a} and {b} cannot be forced together: {reason}")]
    ConflictingConstraint { a: MentionId, b: MentionId, reason: String },
    #[error("no partition satisfies the forced links in the component starting at mention {0}")]
    Infeasible(MentionId),
    #[error("component with {size} mentions exceeds the enumeration limit of {limit}")]
    ComponentTooLarge { size: usize, limit: usize },
    #[error("line {line}: {message}")]
    ForceSyntax { line: usize, message: String },
    #[error("invalid weights '{0}', expected OMIT,COMMIT")]
    Weights(String),
}

/// Cost multipliers for dropping an annotated link and for adding an
/// unannotated one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Weights {
    pub omit: u64,
    pub commit: u64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights { omit: 2, commit: 1 }
    }
}

impl FromStr for Weights {
    type Err = AdjudicationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AdjudicationError::Weights(s.to_string());
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        Ok(Weights {
            omit: a.trim().parse().map_err(|_| bad())?,
            commit: b.trim().parse().map_err(|_| bad())?,
        })
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.omit, self.commit)
    }
}

fn ordered(a: MentionId, b: MentionId) -> (MentionId, MentionId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Per-pair count of annotators who put both mentions in one chain. Pairs
/// nobody linked are absent.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairTally {
    annotators: u64,
    counts: BTreeMap<(MentionId, MentionId), u64>,
}

impl PairTally {
    pub fn annotators(&self) -> u64 {
        self.annotators
    }

    /// w⁺ for the unordered pair.
    pub fn get(&self, a: MentionId, b: MentionId) -> u64 {
        self.counts.get(&ordered(a, b)).copied().unwrap_or(0)
    }

    pub fn non_coref(&self, a: MentionId, b: MentionId) -> u64 {
        self.annotators - self.get(a, b)
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((MentionId, MentionId), u64)> + '_ {
        self.counts.iter().map(|(&p, &n)| (p, n))
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }
}

pub fn tally_links(mentions: &[Mention], annotations: &[AnnotationSet]) -> PairTally {
    let declared: HashSet<MentionId> = mentions.iter().map(|m| m.id).collect();
    let mut counts: BTreeMap<(MentionId, MentionId), u64> = BTreeMap::new();
    for a in annotations {
        // One vote per annotator and pair, even when a chain repeats an id.
        let mut linked: HashSet<(MentionId, MentionId)> = HashSet::new();
        for chain in &a.chains {
            let members: Vec<MentionId> = chain.members.iter().copied().filter(|id| declared.contains(id)).collect();
            for (i, &x) in members.iter().enumerate() {
                for &y in &members[i + 1..] {
                    if x != y {
                        linked.insert(ordered(x, y));
                    }
                }
            }
        }
        for p in linked {
            *counts.entry(p).or_default() += 1;
        }
    }
    PairTally {
        annotators: annotations.len() as u64,
        counts,
    }
}

/// The objective value of `candidate`. Mentions outside every chain are
/// singletons.
pub fn objective_cost(candidate: &AnnotationSet, tally: &PairTally, weights: Weights) -> u64 {
    let k = tally.annotators();
    let mut together: HashSet<(MentionId, MentionId)> = HashSet::new();
    let mut cost = 0u64;
    for chain in &candidate.chains {
        for (i, &x) in chain.members.iter().enumerate() {
            for &y in &chain.members[i + 1..] {
                if x != y && together.insert(ordered(x, y)) {
                    cost += weights.commit * (k - tally.get(x, y));
                }
            }
        }
    }
    for (p, w) in tally.pairs() {
        if !together.contains(&p) {
            cost += weights.omit * w;
        }
    }
    cost
}

// === forced links =========================================================

/// Manually specified pairs that must or must not share a chain.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Constraints {
    pub must: Vec<(MentionId, MentionId)>,
    pub cannot: Vec<(MentionId, MentionId)>,
}

impl Constraints {
    /// Reads lines of the form `must A B` or `cannot A B`; `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Self, AdjudicationError> {
        let mut out = Constraints::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| AdjudicationError::ForceSyntax { line: no + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err(format!("expected 'must|cannot ID ID', found '{line}'")));
            }
            let id = |s: &str| s.parse::<MentionId>().map_err(|_| err(format!("invalid mention id '{s}'")));
            let pair = (id(fields[1])?, id(fields[2])?);
            match fields[0] {
                "must" => out.must.push(pair),
                "cannot" => out.cannot.push(pair),
                other => return Err(err(format!("unknown constraint '{other}'"))),
            }
        }
        Ok(out)
    }

    pub fn is_empty(&self) -> bool {
        self.must.is_empty() && self.cannot.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdjudicatorOptions {
    pub weights: Weights,
    pub constraints: Constraints,
    /// Solve connected components independently. Turning this off solves
    /// the whole mention set as one search problem.
    pub decompose: bool,
}

impl AdjudicatorOptions {
    pub fn new(weights: Weights) -> Self {
        AdjudicatorOptions {
            weights,
            constraints: Constraints::default(),
            decompose: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    /// Smallest mention of the component in document order.
    pub first: MentionId,
    pub size: usize,
    pub nodes: u64,
    pub cost: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjudicationResult {
    pub gold: AnnotationSet,
    pub cost: u64,
    pub components: Vec<ComponentReport>,
}

impl AdjudicationResult {
    pub fn diagnostics(&self) -> String {
        let mut out = String::new();
        for c in &self.components {
            out.push_str(&format!(
                "component first={} size={} nodes={} cost={}\n",
                c.first, c.size, c.nodes, c.cost
            ));
        }
        out.push_str(&format!("total cost={}\n", self.cost));
        out
    }
}

// === problem construction =================================================

/// Dense pair costs over one component, indexed by position in document
/// order. `None` marks a forbidden choice.
#[derive(Debug, Clone)]
pub(crate) struct Problem {
    pub n: usize,
    same: Vec<Option<u64>>,
    split: Vec<Option<u64>>,
}

impl Problem {
    pub fn same(&self, a: usize, b: usize) -> Option<u64> {
        self.same[a * self.n + b]
    }

    pub fn split(&self, a: usize, b: usize) -> Option<u64> {
        self.split[a * self.n + b]
    }

    /// Cost of a full assignment, or `None` if it breaks a constraint.
    pub fn evaluate(&self, labels: &[usize]) -> Option<u64> {
        let mut total = 0u64;
        for a in 0..self.n {
            for b in a + 1..self.n {
                let c = if labels[a] == labels[b] { self.same(a, b) } else { self.split(a, b) };
                total += c?;
            }
        }
        Some(total)
    }
}

struct Instance<'a> {
    mentions: &'a [Mention],
    index: HashMap<MentionId, usize>,
    tally: PairTally,
    must: HashSet<(usize, usize)>,
    cannot: HashSet<(usize, usize)>,
    weights: Weights,
}

fn local_pair(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

impl<'a> Instance<'a> {
    fn new(
        mentions: &'a [Mention],
        annotations: &[AnnotationSet],
        opts: &AdjudicatorOptions,
    ) -> Result<Self, AdjudicationError> {
        if annotations.is_empty() {
            return Err(AdjudicationError::NoAnnotations);
        }
        let index: HashMap<MentionId, usize> = mentions.iter().enumerate().map(|(i, m)| (m.id, i)).collect();
        let resolve = |pairs: &[(MentionId, MentionId)]| -> Result<HashSet<(usize, usize)>, AdjudicationError> {
            pairs
                .iter()
                .filter(|(a, b)| a != b)
                .map(|&(a, b)| {
                    let ia = *index.get(&a).ok_or(AdjudicationError::UnknownMention(a))?;
                    let ib = *index.get(&b).ok_or(AdjudicationError::UnknownMention(b))?;
                    Ok(local_pair(ia, ib))
                })
                .collect()
        };
        let must = resolve(&opts.constraints.must)?;
        let cannot = resolve(&opts.constraints.cannot)?;
        for &(a, b) in &must {
            let (ma, mb) = (&mentions[a], &mentions[b]);
            if cannot.contains(&(a, b)) {
                return Err(AdjudicationError::ConflictingConstraint {
                    a: ma.id,
                    b: mb.id,
                    reason: "pair is both forced and forbidden".into(),
                });
            }
            if overlaps(ma, mb) {
                return Err(AdjudicationError::ConflictingConstraint {
                    a: ma.id,
                    b: mb.id,
                    reason: "mentions overlap".into(),
                });
            }
        }
        Ok(Instance {
            mentions,
            index,
            tally: tally_links(mentions, annotations),
            must,
            cannot,
            weights: opts.weights,
        })
    }

    /// Connected components of the graph of linked or forced pairs, each
    /// sorted by document position, ordered by their first member.
    fn components(&self, decompose: bool) -> Vec<Vec<usize>> {
        let n = self.mentions.len();
        if !decompose {
            return if n == 0 { vec![] } else { vec![(0..n).collect()] };
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let edges = self
            .tally
            .pairs()
            .map(|((a, b), _)| (self.index[&a], self.index[&b]))
            .chain(self.must.iter().copied());
        for (a, b) in edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    fn problem(&self, members: &[usize]) -> Problem {
        let n = members.len();
        let k = self.tally.annotators();
        let mut same = vec![None; n * n];
        let mut split = vec![Some(0); n * n];
        for a in 0..n {
            for b in a + 1..n {
                let (ga, gb) = (members[a], members[b]);
                let (ma, mb) = (&self.mentions[ga], &self.mentions[gb]);
                let w = self.tally.get(ma.id, mb.id);
                let key = local_pair(ga, gb);
                let forced = self.must.contains(&key);
                let allowed = (w >= 1 || forced) && !overlaps(ma, mb) && !self.cannot.contains(&key);
                let s = allowed.then(|| self.weights.commit * (k - w));
                let d = if forced { None } else { Some(self.weights.omit * w) };
                for (x, y) in [(a, b), (b, a)] {
                    same[x * n + y] = s;
                    split[x * n + y] = d;
                }
            }
        }
        Problem { n, same, split }
    }
}

pub(crate) struct Solution {
    pub labels: Vec<usize>,
    pub cost: u64,
    pub nodes: u64,
}

fn solve_with(
    mentions: &[Mention],
    annotations: &[AnnotationSet],
    opts: &AdjudicatorOptions,
    solver: impl Fn(&Problem) -> Result<Option<Solution>, AdjudicationError> + Sync,
) -> Result<AdjudicationResult, AdjudicationError> {
    let inst = Instance::new(mentions, annotations, opts)?;
    let components = inst.components(opts.decompose);
    let solved: Vec<Result<(Vec<usize>, Solution), AdjudicationError>> = components
        .into_par_iter()
        .map(|members| {
            let problem = inst.problem(&members);
            match solver(&problem)? {
                Some(s) => Ok((members, s)),
                None => Err(AdjudicationError::Infeasible(mentions[members[0]].id)),
            }
        })
        .collect();

    let mut chains: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut reports = Vec::new();
    let mut cost = 0;
    for item in solved {
        let (members, sol) = item?;
        cost += sol.cost;
        if members.len() >= 2 {
            reports.push(ComponentReport {
                first: mentions[members[0]].id,
                size: members.len(),
                nodes: sol.nodes,
                cost: sol.cost,
            });
        }
        let clusters = sol.labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut grouped: Vec<Vec<usize>> = vec![Vec::new(); clusters];
        for (local, &label) in sol.labels.iter().enumerate() {
            grouped[label].push(members[local]);
        }
        chains.extend(grouped.into_iter().filter(|g| g.len() >= 2).map(|g| (g[0], g)));
    }
    chains.sort();
    let gold = AnnotationSet::new(
        "gold",
        chains
            .into_iter()
            .map(|(_, g)| Chain::new(g.into_iter().map(|i| mentions[i].id)))
            .collect(),
    );
    Ok(AdjudicationResult {
        gold,
        cost,
        components: reports,
    })
}

/// Exact constrained minimum of the objective. `mentions` must be in
/// document order; among equally cheap partitions the one whose chain-label
/// string (labels assigned in order of first appearance) is
/// lexicographically smallest wins.
pub fn adjudicate(
    mentions: &[Mention],
    annotations: &[AnnotationSet],
    weights: Weights,
) -> Result<AdjudicationResult, AdjudicationError> {
    adjudicate_with(mentions, annotations, &AdjudicatorOptions::new(weights))
}

pub fn adjudicate_with(
    mentions: &[Mention],
    annotations: &[AnnotationSet],
    opts: &AdjudicatorOptions,
) -> Result<AdjudicationResult, AdjudicationError> {
    solve_with(mentions, annotations, opts, |p| Ok(search::branch_and_bound(p)))
}
