//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit status
//! if any criterion fails.

#[path = "../common/mod.rs"]
mod common;
mod oracles;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use corefkit::adjudicator::{
    adjudicate, adjudicate_with, enumerate_oracle, objective_cost, tally_links, AdjudicationResult, AdjudicatorOptions,
    Weights,
};
use corefkit::agreement::{document_agreement, krippendorff_alpha, AgreementTable, Distance};
use corefkit::baseline::{
    best_link, build_chains_best_link, build_chains_merge, cross_validate, detect_mentions, merge_links, LinearModel,
    MentionSource, Method, PronounList, TrainConfig, FEATURE_COUNT,
};
use corefkit::formats::{
    coref_to_conll, conll_to_coref, parse_conll, parse_coref_xml, parse_document_xml, write_coref_xml,
    write_document_xml, CorefXml,
};
use corefkit::metrics::{score, score_all, score_ceaf, CeafVariant, Metric, MetricScore, ScoringInput};
use corefkit::{AnnotationSet, Chain, Mention, MentionId, Span};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn secs(d: Duration) -> String {
    format!("{:.3}s", d.as_secs_f64())
}

// === 1: worked adjudication example =======================================

fn set(chains: &[&[MentionId]]) -> AnnotationSet {
    AnnotationSet::new("a", chains.iter().map(|c| Chain::new(c.iter().copied())).collect())
}

fn worked_example() -> Outcome {
    let (a, b, c, d, e) = (0, 1, 2, 3, 4);
    let mentions: Vec<Mention> = (0..5).map(|i| Mention::new(i, "s1", 2 * i as usize + 1, 2 * i as usize + 1)).collect();
    let mut annotations = Vec::new();
    annotations.extend((0..4).map(|_| set(&[&[a, b], &[c, d]])));
    annotations.extend((0..3).map(|_| set(&[&[a, b]])));
    annotations.extend((0..2).map(|_| set(&[&[c, d, e]])));
    let start = Instant::now();
    let result = adjudicate(&mentions, &annotations, Weights::default()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let want = vec![Chain::new([a, b]), Chain::new([c, d])];
    check(result.gold.chains == want, || format!("chains {:?}", result.gold.chains))?;
    check(result.cost == 13, || format!("cost {}", result.cost))?;
    check(elapsed < Duration::from_secs(1), || format!("took {}", secs(elapsed)))?;
    Ok(format!("{{A,B}},{{C,D}} at cost 13 in {}", secs(elapsed)))
}

// === 2: branch and bound against enumeration ==============================

fn satisfies_constraints(result: &AdjudicationResult, mentions: &[Mention], annotations: &[AnnotationSet]) -> Result<(), String> {
    let tally = tally_links(mentions, annotations);
    let by_id: BTreeMap<MentionId, &Mention> = mentions.iter().map(|m| (m.id, m)).collect();
    for chain in &result.gold.chains {
        for (i, &x) in chain.members.iter().enumerate() {
            for &y in &chain.members[i + 1..] {
                check(!by_id[&x].span.overlaps(&by_id[&y].span), || format!("overlapping {x} and {y} share a chain"))?;
                check(tally.get(x, y) >= 1, || format!("{x} and {y} share a chain but nobody linked them"))?;
            }
        }
    }
    let recomputed = objective_cost(&result.gold, &tally, Weights::default());
    check(recomputed == result.cost, || format!("reported cost {} but objective is {recomputed}", result.cost))
}

fn exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let opts = AdjudicatorOptions::new(Weights::default());
    let (mut overlapping, mut pairs) = (0, 0);
    let start = Instant::now();
    for case in 0..100 {
        let inst = common::random_instance(&mut rng, 8);
        let (h, a) = common::overlap_counts(&inst.mentions);
        overlapping += h;
        pairs += a;
        let fast = adjudicate_with(&inst.mentions, &inst.annotations, &opts).map_err(|e| format!("case {case}: {e}"))?;
        let slow = enumerate_oracle(&inst.mentions, &inst.annotations, &opts).map_err(|e| format!("case {case}: {e}"))?;
        check(fast.cost == slow.cost, || format!("case {case}: search {} vs enumeration {}", fast.cost, slow.cost))?;
        check(fast.gold == slow.gold, || format!("case {case}: different tie-break"))?;
        satisfies_constraints(&fast, &inst.mentions, &inst.annotations).map_err(|e| format!("case {case}: {e}"))?;
        satisfies_constraints(&slow, &inst.mentions, &inst.annotations).map_err(|e| format!("case {case} oracle: {e}"))?;
    }
    let elapsed = start.elapsed();
    check(elapsed < Duration::from_secs(60), || format!("took {}", secs(elapsed)))?;
    let share = overlapping as f64 / pairs as f64;
    check((0.15..=0.25).contains(&share), || format!("overlapping share {share:.3} is off target"))?;
    Ok(format!("100 instances, {:.1}% overlapping pairs, {}", 100.0 * share, secs(elapsed)))
}

// === 3: identity and symmetry ==============================================

fn random_chains(rng: &mut ChaCha8Rng, pool: u32) -> Vec<Vec<u32>> {
    loop {
        let mut items: Vec<u32> = (0..pool).filter(|_| rng.gen_bool(0.8)).collect();
        items.shuffle(rng);
        let k = rng.gen_range(1..=items.len().max(1));
        let chains = common::random_partition(rng, &items, k);
        if chains.iter().any(|c| c.len() >= 2) {
            return chains;
        }
    }
}

fn pr(s: &MetricScore) -> (f64, f64) {
    (s.precision.value(), s.recall.value())
}

fn identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let tol = 1e-12;
    for case in 0..500 {
        let pool = rng.gen_range(2..40);
        let key = random_chains(&mut rng, pool);
        let same = ScoringInput::new(key.clone(), key.clone());
        for s in score_all(&Metric::ALL, &same) {
            let (p, r) = pr(&s);
            check(close(p, 1.0, tol) && close(r, 1.0, tol) && close(s.f1, 1.0, tol), || {
                format!("case {case}: {} of K against itself is P={p} R={r} F={}", s.metric, s.f1)
            })?;
        }
        let resp = random_chains(&mut rng, pool + 5);
        let input = ScoringInput::new(key, resp);
        let flipped = input.swapped();
        for m in Metric::ALL {
            let (a, b) = (score(m, &input), score(m, &flipped));
            check(close(a.precision.value(), b.recall.value(), tol) && close(a.recall.value(), b.precision.value(), tol), || {
                format!("case {case}: {m} P/R not swapped")
            })?;
            if let (Some(x), Some(y)) = (a.blanc, b.blanc) {
                check(
                    close(x.coref_precision.value(), y.coref_recall.value(), tol)
                        && close(x.noncoref_precision.value(), y.noncoref_recall.value(), tol),
                    || format!("case {case}: BLANC sub-scores not swapped"),
                )?;
            }
        }
    }
    Ok("500 key sets, all six metrics".into())
}

// === 4: hand-computed values ===============================================

fn chains(letters: &[&str]) -> Vec<Vec<char>> {
    letters.iter().map(|c| c.chars().collect()).collect()
}

fn hand_values() -> Outcome {
    let tol = 1e-9;
    let cases: Vec<(Metric, &[&str], &[&str], f64, f64)> = vec![
        (Metric::Muc, &["abc"], &["ab"], 0.5, 1.0),
        (Metric::Bcub, &["ab"], &["a", "b"], 0.5, 1.0),
        (Metric::Bcub, &["abcd"], &["ab", "cd"], 0.5, 1.0),
        (Metric::Ceafm, &["abc"], &["ab", "c"], 2.0 / 3.0, 2.0 / 3.0),
        (Metric::Ceafe, &["abc"], &["ab", "c"], 0.8, 0.4),
        (Metric::Lea, &["abc"], &["ab", "cd"], 1.0 / 3.0, 0.5),
        (Metric::Lea, &["ab"], &["ab", "xy"], 1.0, 0.5),
    ];
    for (m, k, r, recall, precision) in cases {
        let s = score(m, &ScoringInput::new(chains(k), chains(r)));
        check(close(s.recall.value(), recall, tol) && close(s.precision.value(), precision, tol), || {
            format!("{m} on {k:?}/{r:?}: R={} P={}", s.recall.value(), s.precision.value())
        })?;
    }
    let ceafe = score(Metric::Ceafe, &ScoringInput::new(chains(&["abc"]), chains(&["ab", "c"])));
    check(close(ceafe.f1, 8.0 / 15.0, tol), || format!("CEAF_e F1 {}", ceafe.f1))?;
    let lea = score(Metric::Lea, &ScoringInput::new(chains(&["abc"]), chains(&["ab", "cd"])));
    check(close(lea.f1, 0.4, tol), || format!("LEA F1 {}", lea.f1))?;
    let muc = score(Metric::Muc, &ScoringInput::new(chains(&["abc"]), chains(&["ab"])));
    check(close(muc.f1, 2.0 / 3.0, tol), || format!("MUC F1 {}", muc.f1))?;
    let blanc = score(Metric::Blanc, &ScoringInput::new(chains(&["ab", "c"]), chains(&["abc"])));
    let parts = blanc.blanc.ok_or("BLANC without parts")?;
    check(close(parts.coref_f1(), 0.5, tol) && close(parts.noncoref_f1(), 0.0, tol), || {
        format!("BLANC F_c={} F_n={}", parts.coref_f1(), parts.noncoref_f1())
    })?;
    check(close(blanc.f1, 0.25, tol), || format!("BLANC {}", blanc.f1))?;
    Ok("MUC, B3, CEAF_m, CEAF_e, BLANC and LEA examples".into())
}

// === 5: CEAF against exhaustive mappings ===================================

fn ceaf_exact() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for case in 0..200 {
        let pick = |rng: &mut ChaCha8Rng| {
            let mut items: Vec<u32> = (0..14).filter(|_| rng.gen_bool(0.7)).collect();
            items.shuffle(rng);
            let k = rng.gen_range(1..=6);
            common::random_partition(rng, &items, k)
        };
        let key = pick(&mut rng);
        let resp = pick(&mut rng);
        let input = ScoringInput::new(key.clone(), resp.clone());
        let m = score_ceaf(&input, CeafVariant::Mention);
        let (best, sk, sr) = oracles::ceaf_exhaustive(&key, &resp, false);
        check(m.recall.numerator == best && m.recall.denominator == sk && m.precision.denominator == sr, || {
            format!("case {case}: CEAF_m {:?} vs exhaustive {best}/{sk}/{sr}", m.recall)
        })?;
        let e = score_ceaf(&input, CeafVariant::Entity);
        let (best, sk, sr) = oracles::ceaf_exhaustive(&key, &resp, true);
        let diff = (e.recall.numerator - best).abs();
        worst = worst.max(diff);
        check(diff <= 1e-12 && e.recall.denominator == sk && e.precision.denominator == sr, || {
            format!("case {case}: CEAF_e {:?} vs exhaustive {best}/{sk}/{sr}", e.recall)
        })?;
    }
    Ok(format!("200 instances; CEAF_m identical, CEAF_e within {worst:.1e}"))
}

// === 6: Krippendorff's alpha ===============================================

fn alpha_calibration() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mentions: Vec<Mention> = (0..12).map(|i| Mention::new(i, "1", i as usize + 1, i as usize + 1)).collect();
    let shared = AnnotationSet::new("x", vec![Chain::new([0, 3, 5]), Chain::new([1, 2]), Chain::new([7, 8, 9, 10])]);
    let unanimous = document_agreement("d", &mentions, &vec![shared; 4]).map_err(|e| e.to_string())?;
    check(unanimous.iaa1 == 1.0 && unanimous.iaa2 == 1.0, || format!("unanimity gives {} / {}", unanimous.iaa1, unanimous.iaa2))?;

    let classes = vec![vec![0, 1, 2], vec![3, 4, 5]];
    let counts: Vec<Vec<(usize, u32)>> = (0..200)
        .map(|_| {
            let first = (0..10).filter(|_| rng.gen_bool(0.5)).count() as u32;
            vec![(0, first), (1, 10 - first)]
        })
        .collect();
    let table = AgreementTable::from_counts(classes, counts, 10).map_err(|e| e.to_string())?;
    let random = krippendorff_alpha(&table, |b, c| Distance::Passonneau.delta(b, c)).map_err(|e| e.to_string())?;
    check(random.abs() <= 0.15, || format!("random labelling gives {random}"))?;

    let mut worst: f64 = 0.0;
    for case in 0..50 {
        let k = rng.gen_range(2..=5);
        let mut classes: BTreeSet<Vec<u32>> = BTreeSet::new();
        while classes.len() < k {
            let mut c: Vec<u32> = (0..6).filter(|_| rng.gen_bool(0.5)).collect();
            if c.is_empty() {
                c.push(rng.gen_range(0..6));
            }
            classes.insert(c);
        }
        let classes: Vec<Vec<u32>> = classes.into_iter().collect();
        let m = rng.gen_range(2..=6);
        let r = rng.gen_range(1..=8);
        let rows: Vec<BTreeMap<usize, u32>> = (0..r)
            .map(|_| {
                let mut row = BTreeMap::new();
                for _ in 0..m {
                    *row.entry(rng.gen_range(0..k)).or_insert(0) += 1;
                }
                row
            })
            .collect();
        let counts = rows.iter().map(|row| row.iter().map(|(&c, &n)| (c, n)).collect()).collect();
        let table = AgreementTable::from_counts(classes.clone(), counts, m).map_err(|e| e.to_string())?;
        for (dist, oracle) in [(Distance::Passonneau, oracles::delta_plain as fn(&[u32], &[u32]) -> f64), (Distance::Masi, oracles::delta_masi)] {
            let got = krippendorff_alpha(&table, |b, c| dist.delta(b, c)).map_err(|e| e.to_string())?;
            let want = oracles::alpha_coincidence(&classes, &rows, oracle);
            worst = worst.max((got - want).abs());
            check(close(got, want, 1e-12), || format!("case {case} {dist:?}: {got} vs oracle {want}"))?;
        }
    }
    Ok(format!("unanimity 1, random labelling {random:.4}, oracle within {worst:.1e}"))
}

// === 7: format round trips =================================================

fn span_sets(file: &CorefXml) -> BTreeSet<BTreeSet<Span>> {
    file.span_chains().into_iter().map(|c| c.into_iter().collect()).collect()
}

fn one_round_trip(rng: &mut ChaCha8Rng, case: usize) -> Result<(), String> {
    let doc = common::random_document(rng, &format!("doc{case}"));
    let doc_xml = write_document_xml(&doc);
    let reparsed = parse_document_xml(doc_xml.as_bytes()).map_err(|e| format!("document: {e}"))?;
    check(reparsed == doc, || "document XML does not round trip".into())?;
    let (mentions, chains) = common::random_coref(rng, &doc);
    let original = CorefXml::new(doc.id(), mentions, chains);
    let xml = write_coref_xml(&original, Some(&doc)).map_err(|e| e.to_string())?;
    let parsed = parse_coref_xml(xml.as_bytes()).map_err(|e| format!("coref XML: {e}"))?;
    let conll_text = coref_to_conll(&parsed, &doc).map_err(|e| format!("to CoNLL: {e}"))?;
    let conll = parse_conll(conll_text.as_bytes()).map_err(|e| format!("CoNLL parse: {e}\n{conll_text}"))?;
    check(conll.documents.len() == 1, || format!("{} CoNLL documents", conll.documents.len()))?;
    let back = conll_to_coref(&conll.documents[0], &doc).map_err(|e| format!("from CoNLL: {e}"))?;
    check(span_sets(&back) == span_sets(&parsed), || format!("chains differ after the round trip:\n{conll_text}"))?;
    let canon = |f: &CorefXml| -> Result<String, String> {
        write_coref_xml(&f.canonicalize(&doc).map_err(|e| e.to_string())?, Some(&doc)).map_err(|e| e.to_string())
    };
    check(canon(&parsed)? == canon(&back)?, || "canonical bytes differ".into())
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/acceptance/golden")
}

fn golden(name: &str, actual: &str) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
    }
    let expected = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    check(expected == actual, || format!("{name} differs from the golden file"))
}

fn golden_files() -> Result<(), String> {
    let read = |name: &str| std::fs::read(golden_dir().join(name)).map_err(|e| format!("{name}: {e}"));
    let doc = parse_document_xml(&read("input.doc.xml")?).map_err(|e| e.to_string())?;
    let coref = parse_coref_xml(&read("input.coref.xml")?).map_err(|e| e.to_string())?;
    golden("canonical.doc.xml", &write_document_xml(&doc))?;
    let canonical = coref.canonicalize(&doc).map_err(|e| e.to_string())?;
    golden("canonical.coref.xml", &write_coref_xml(&canonical, Some(&doc)).map_err(|e| e.to_string())?)?;
    let conll = coref_to_conll(&coref, &doc).map_err(|e| e.to_string())?;
    golden("output.conll", &conll)?;
    let parsed = parse_conll(conll.as_bytes()).map_err(|e| e.to_string())?;
    let back = conll_to_coref(&parsed.documents[0], &doc).map_err(|e| e.to_string())?;
    golden("canonical.coref.xml", &write_coref_xml(&back, Some(&doc)).map_err(|e| e.to_string())?)
}

fn round_trips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..1000 {
        one_round_trip(&mut rng, case).map_err(|e| format!("case {case}: {e}"))?;
    }
    golden_files()?;
    Ok("1000 random documents plus golden files".into())
}

// === 8: baseline on a synthetic corpus =====================================

fn baseline_smoke() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let corpus = common::synthetic_corpus(&mut rng, 20);
    let pronouns = PronounList::default();
    let (mut planted, mut found) = (0, 0);
    for doc in &corpus {
        let detected: HashSet<Span> = detect_mentions(&doc.document, &pronouns)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|m| m.span)
            .collect();
        planted += doc.mentions.len();
        found += doc.mentions.iter().filter(|m| detected.contains(&m.span)).count();
    }
    check(found == planted, || format!("detected {found} of {planted} planted mentions"))?;
    let cfg = TrainConfig::default();
    let run = || cross_validate(&corpus, Method::Svc, MentionSource::Gold, &cfg, &pronouns).map_err(|e| e.to_string());
    let first = run()?;
    let second = run()?;
    check(first == second, || "two runs with the same seed differ".into())?;
    let mut parts = Vec::new();
    for m in [Metric::Muc, Metric::Bcub, Metric::Ceafe] {
        let f = first.overall.score(m).map(|s| s.f1).unwrap_or(0.0);
        check(f >= 0.9, || format!("{m} F1 {f:.4}"))?;
        parts.push(format!("{m} {:.3}", f));
    }
    Ok(format!("mention recall 1.0 ({planted}), {}", parts.join(", ")))
}

// === 9: chain builder invariants ===========================================

fn groups_ok(groups: &[Vec<usize>], mentions: &[Mention]) -> Result<(), String> {
    let mut seen = HashSet::new();
    for g in groups {
        check(g.len() >= 2, || format!("singleton chain {g:?}"))?;
        for (i, &a) in g.iter().enumerate() {
            check(seen.insert(a), || format!("mention {a} in two chains"))?;
            for &b in &g[i + 1..] {
                check(!mentions[a].span.overlaps(&mentions[b].span), || format!("overlapping {a} and {b} in one chain"))?;
            }
        }
    }
    Ok(())
}

fn chains_ok(chains: &[Chain], mentions: &[Mention]) -> Result<(), String> {
    let pos: BTreeMap<MentionId, usize> = mentions.iter().enumerate().map(|(i, m)| (m.id, i)).collect();
    let groups: Vec<Vec<usize>> = chains.iter().map(|c| c.members.iter().map(|id| pos[id]).collect()).collect();
    groups_ok(&groups, mentions)
}

fn components(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<Vec<usize>> {
    let mut root: Vec<usize> = (0..n).collect();
    fn find(root: &mut [usize], x: usize) -> usize {
        if root[x] != x {
            let r = find(root, root[x]);
            root[x] = r;
        }
        root[x]
    }
    for (a, b) in edges {
        let (ra, rb) = (find(&mut root, a), find(&mut root, b));
        root[ra.max(rb)] = ra.min(rb);
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut root, x);
        by_root.entry(r).or_default().push(x);
    }
    let mut out: Vec<Vec<usize>> = by_root.into_values().filter(|g| g.len() >= 2).collect();
    out.sort();
    out
}

fn raw_builders(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let n = rng.gen_range(1..=25);
    let mentions = common::random_spans(rng, n, n + 6);
    let threshold = rng.gen_range(-0.5..0.8);
    let scores: Vec<Vec<Option<f64>>> = (0..n)
        .map(|_| (0..n).map(|_| rng.gen_bool(0.8).then(|| (rng.gen_range(-4..=4) as f64) / 4.0)).collect())
        .collect();
    let links: Vec<(usize, usize)> = (0..n)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .filter(|&(i, j)| scores[i][j].is_some_and(|s| s > threshold))
        .collect();
    groups_ok(&merge_links(&mentions, &links), &mentions)?;
    let (groups, antecedent) = best_link(&mentions, threshold, |i, j| scores[i][j]);
    groups_ok(&groups, &mentions)?;
    for (j, a) in antecedent.iter().enumerate() {
        if let Some(i) = *a {
            check(i < j, || format!("mention {j} attached to later mention {i}"))?;
            let top = (0..j).filter_map(|x| scores[x][j]).fold(f64::NEG_INFINITY, f64::max);
            check(scores[i][j] == Some(top), || format!("mention {j} attached below the best score"))?;
            let closest = (0..j).rev().find(|&x| scores[x][j] == Some(top));
            check(closest == Some(i), || format!("mention {j} skipped a closer equal score"))?;
        }
    }
    let rebuilt = components(n, antecedent.iter().enumerate().filter_map(|(j, a)| a.map(|i| (i, j))));
    check(rebuilt == groups, || "chains are not the union of one antecedent link per mention".into())
}

fn model_builders(rng: &mut ChaCha8Rng, corpus: &[corefkit::baseline::CorpusDocument]) -> Result<(), String> {
    let doc = corpus.choose(rng).unwrap();
    let pronouns = PronounList::default();
    let mentions = if rng.gen_bool(0.5) {
        doc.mentions.clone()
    } else {
        detect_mentions(&doc.document, &pronouns).map_err(|e| e.to_string())?
    };
    let mut model = LinearModel::zero(if rng.gen_bool(0.5) { Method::Svc } else { Method::Svr });
    for w in &mut model.weights {
        *w = rng.gen_range(-1.0..1.0);
    }
    model.bias = rng.gen_range(-1.0..1.0);
    let cfg = TrainConfig {
        neg_window: rng.gen_range(1..30),
        best_link_threshold: rng.gen_range(-1.0..1.0),
        ..TrainConfig::default()
    };
    let mut sorted = mentions.clone();
    corefkit::model::sort_document_order(&mut sorted, &doc.document).map_err(|e| e.to_string())?;
    let merged = build_chains_merge(&doc.document, &mentions, &model, &cfg, &pronouns).map_err(|e| e.to_string())?;
    chains_ok(&merged, &sorted)?;
    let linked = build_chains_best_link(&doc.document, &mentions, &model, &cfg, &pronouns).map_err(|e| e.to_string())?;
    chains_ok(&linked, &sorted)
}

fn builder_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let corpus = common::synthetic_corpus(&mut rng, 6);
    assert_eq!(LinearModel::zero(Method::Svc).weights.len(), FEATURE_COUNT);
    for case in 0..1000 {
        let r = if case % 2 == 0 { raw_builders(&mut rng) } else { model_builders(&mut rng, &corpus) };
        r.map_err(|e| format!("configuration {case}: {e}"))?;
    }
    Ok("1000 configurations of both builders".into())
}

// === 10: performance =======================================================

fn performance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut mentions = Vec::new();
    let mut per_annotator: Vec<Vec<Chain>> = vec![Vec::new(); 5];
    for comp in 0..10u32 {
        let local = common::random_spans(&mut rng, 20, 30);
        let shifted: Vec<Mention> = local
            .iter()
            .map(|m| Mention { id: m.id + 20 * comp, span: Span::new(format!("s{comp:02}"), m.span.from, m.span.to) })
            .collect();
        for (a, ann) in common::noisy_annotations(&mut rng, &shifted, 5, 0.2).into_iter().enumerate() {
            per_annotator[a].extend(ann.chains);
        }
        mentions.extend(shifted);
    }
    let annotations: Vec<AnnotationSet> = per_annotator.into_iter().enumerate().map(|(i, c)| AnnotationSet::new(format!("a{i}"), c)).collect();
    let start = Instant::now();
    let result = adjudicate(&mentions, &annotations, Weights::default()).map_err(|e| e.to_string())?;
    let adjudication = start.elapsed();
    let largest = result.components.iter().map(|c| c.size).max().unwrap_or(0);
    check(largest <= 20, || format!("largest component has {largest} mentions"))?;
    check(adjudication < Duration::from_secs(10), || format!("adjudication took {}", secs(adjudication)))?;

    let items: Vec<u32> = (0..10_000).collect();
    let mut key_labels = Vec::with_capacity(items.len());
    let mut chain = 0;
    while key_labels.len() < items.len() {
        let size = rng.gen_range(1..=9);
        key_labels.extend(std::iter::repeat(chain).take(size));
        chain += 1;
    }
    key_labels.truncate(items.len());
    key_labels.shuffle(&mut rng);
    let resp_labels: Vec<usize> = key_labels.iter().map(|&l| if rng.gen_bool(0.15) { rng.gen_range(0..chain) } else { l }).collect();
    let input = ScoringInput::new(
        common::groups_from_labels(&items, &key_labels),
        common::groups_from_labels(&items, &resp_labels),
    )
    .without_singletons();
    let mut scores = Vec::new();
    let mut timings = Vec::new();
    let start = Instant::now();
    for m in Metric::ALL {
        let t = Instant::now();
        scores.push(score(m, &input));
        timings.push(format!("{m} {}", secs(t.elapsed())));
    }
    let scoring = start.elapsed();
    eprintln!("scoring: {}", timings.join(", "));
    check(scores.len() == 6, || "missing scores".into())?;
    check(scoring < Duration::from_secs(5), || format!("scoring took {}", secs(scoring)))?;
    Ok(format!(
        "200 mentions (largest component {largest}) in {}, 10k-mention scoring in {} ({})",
        secs(adjudication),
        secs(scoring),
        timings.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("adjudication worked example", worked_example),
        ("adjudicator exactness", exactness),
        ("metric identities", identities),
        ("hand-computed metric values", hand_values),
        ("CEAF assignment vs exhaustive", ceaf_exact),
        ("Krippendorff alpha calibration", alpha_calibration),
        ("format round trips", round_trips),
        ("baseline smoke test", baseline_smoke),
        ("chain-builder invariants", builder_invariants),
        ("performance", performance),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
