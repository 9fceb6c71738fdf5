//! Seeded generators shared by the property tests and the acceptance run.

#![allow(dead_code)]

use std::collections::BTreeSet;

use corefkit::baseline::CorpusDocument;
use corefkit::{AnnotationSet, Chain, Document, Mention, MentionId, Sentence, Span, Token};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random partition of `items` into at most `max_chains` groups, empty
/// groups dropped.
pub fn random_partition<T: Clone>(rng: &mut impl Rng, items: &[T], max_chains: usize) -> Vec<Vec<T>> {
    let k = max_chains.max(1);
    let mut groups: Vec<Vec<T>> = vec![Vec::new(); k];
    for it in items {
        groups[rng.gen_range(0..k)].push(it.clone());
    }
    groups.retain(|g| !g.is_empty());
    groups
}

/// Converts a label-per-item vector into groups, ordered by first item.
pub fn groups_from_labels<T: Clone>(items: &[T], labels: &[usize]) -> Vec<Vec<T>> {
    let mut order: Vec<usize> = Vec::new();
    let mut groups: Vec<Vec<T>> = Vec::new();
    for (it, &l) in items.iter().zip(labels) {
        match order.iter().position(|&x| x == l) {
            Some(p) => groups[p].push(it.clone()),
            None => {
                order.push(l);
                groups.push(vec![it.clone()]);
            }
        }
    }
    groups
}

// === adjudication instances ===============================================

pub struct Instance {
    pub mentions: Vec<Mention>,
    pub annotations: Vec<AnnotationSet>,
}

/// Distinct spans of width 1 or 2 in one sentence of `width` words, in
/// document order with ids `0..n`.
pub fn random_spans(rng: &mut impl Rng, n: usize, width: usize) -> Vec<Mention> {
    let mut spans = BTreeSet::new();
    while spans.len() < n {
        let from = rng.gen_range(1..=width);
        let to = (from + rng.gen_range(0..2)).min(width);
        spans.insert((from, to));
    }
    spans
        .into_iter()
        .enumerate()
        .map(|(i, (f, t))| Mention::new(i as MentionId, "1", f, t))
        .collect()
}

/// Annotators who each copy a hidden partition and relabel each mention
/// with probability `noise`. Singleton chains are left out.
pub fn noisy_annotations(rng: &mut impl Rng, mentions: &[Mention], annotators: usize, noise: f64) -> Vec<AnnotationSet> {
    let n = mentions.len();
    let k = rng.gen_range(1..=n.div_ceil(2).max(1));
    let truth: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    (0..annotators)
        .map(|a| {
            let labels: Vec<usize> = truth
                .iter()
                .map(|&l| if rng.gen_bool(noise) { rng.gen_range(0..k + 1) } else { l })
                .collect();
            let ids: Vec<MentionId> = mentions.iter().map(|m| m.id).collect();
            let chains = groups_from_labels(&ids, &labels)
                .into_iter()
                .filter(|g| g.len() >= 2)
                .map(Chain::new)
                .collect();
            AnnotationSet::new(format!("a{a}"), chains)
        })
        .collect()
}

pub fn random_instance(rng: &mut impl Rng, max_mentions: usize) -> Instance {
    let n = rng.gen_range(1..=max_mentions);
    let mentions = random_spans(rng, n, 7);
    let annotators = rng.gen_range(3..=10);
    let annotations = noisy_annotations(rng, &mentions, annotators, 0.3);
    Instance { mentions, annotations }
}

/// Fraction of mention pairs whose spans overlap.
pub fn overlap_counts(mentions: &[Mention]) -> (usize, usize) {
    let mut hit = 0;
    let mut all = 0;
    for (i, a) in mentions.iter().enumerate() {
        for b in &mentions[i + 1..] {
            all += 1;
            if a.span.overlaps(&b.span) {
                hit += 1;
            }
        }
    }
    (hit, all)
}

/// Groups of mentions, none of which contains two overlapping spans.
pub fn random_feasible(rng: &mut impl Rng, mentions: &[Mention], max_chains: usize) -> AnnotationSet {
    let mut chains: Vec<Vec<&Mention>> = Vec::new();
    for m in mentions {
        let open: Vec<usize> = (0..chains.len())
            .filter(|&c| chains[c].iter().all(|x| !x.span.overlaps(&m.span)))
            .collect();
        if !open.is_empty() && (chains.len() >= max_chains || rng.gen_bool(0.6)) {
            chains[*open.choose(rng).unwrap()].push(m);
        } else {
            chains.push(vec![m]);
        }
    }
    AnnotationSet::new(
        "candidate",
        chains.into_iter().map(|c| Chain::new(c.into_iter().map(|m| m.id))).collect(),
    )
}

// === documents ============================================================

const WORDS: &[&str] = &[
    "ev", "kitap", "Ali", "gitti", "büyük", "ve", "bir", "okul", "Ayşe'ye", "geldi", "masa", "&", "<b>", "\"q\"",
];

/// A document of 1 to 4 sentences with 1 to 8 random tokens each.
pub fn random_document(rng: &mut impl Rng, id: &str) -> Document {
    let count = rng.gen_range(1..=4);
    let sentences = (0..count)
        .map(|s| {
            let len = rng.gen_range(1..=8);
            Sentence {
                no: format!("{id}.{}", s + 1),
                tokens: (1..=len)
                    .map(|ix| {
                        let mut t = Token::new(ix, *WORDS.choose(rng).unwrap());
                        t.pos = ["Noun", "Verb", "Adj"].choose(rng).unwrap().to_string();
                        t.dep_head = Some(rng.gen_range(0..=len));
                        t
                    })
                    .collect(),
            }
        })
        .collect();
    Document::new(id, Some("news".into()), sentences).expect("generated document is valid")
}

/// Distinct mentions over `doc` with chains that never hold two overlapping
/// spans. Every mention belongs to a chain, singletons included, and ids
/// are a random permutation.
pub fn random_coref(rng: &mut impl Rng, doc: &Document) -> (Vec<Mention>, Vec<Chain>) {
    let mut spans = BTreeSet::new();
    let tries = rng.gen_range(0..12);
    for _ in 0..tries {
        let s = doc.sentences().choose(rng).unwrap();
        let from = rng.gen_range(1..=s.len());
        let to = rng.gen_range(from..=s.len().min(from + 2));
        spans.insert(Span::new(s.no.clone(), from, to));
    }
    let mut ids: Vec<MentionId> = (0..spans.len() as MentionId).map(|i| i * 3 + 5).collect();
    ids.shuffle(rng);
    let mentions: Vec<Mention> = spans.into_iter().zip(ids).map(|(span, id)| Mention { id, span }).collect();
    let mut order = mentions.clone();
    order.shuffle(rng);
    let mut chains = random_feasible(rng, &order, 4).chains;
    for c in &mut chains {
        c.members.shuffle(rng);
    }
    chains.shuffle(rng);
    (mentions, chains)
}

// === synthetic baseline corpus ============================================

const COMMON: &[&str] = &["kitap", "masa", "kalem", "bahçe", "araba", "deniz", "şehir", "okul"];
const PROPER: &[&str] = &["Ahmet", "Zeynep", "Mehmet", "Elif", "Murat", "Selin"];
const ADJECTIVES: &[&str] = &["büyük", "eski", "yeni", "güzel"];
const VERBS: &[&str] = &["gördü", "sevdi", "buldu", "aldı"];

struct Phrase {
    tokens: Vec<(String, String, &'static str)>,
}

fn phrase(rng: &mut impl Rng, head: &str, proper: bool) -> Phrase {
    let mut tokens = Vec::new();
    if !proper && rng.gen_bool(0.4) {
        let adj = ADJECTIVES.choose(rng).unwrap();
        tokens.push((adj.to_string(), adj.to_string(), "Adj"));
    }
    let (surface, pos) = if proper {
        let suffix = ["", "'nin", "'ye"].choose(rng).unwrap();
        (format!("{head}{suffix}"), "Prop")
    } else {
        let suffix = ["", "yı", "da"].choose(rng).unwrap();
        (format!("{head}{suffix}"), "Noun")
    };
    tokens.push((surface, head.to_string(), pos));
    Phrase { tokens }
}

/// A document whose gold chains are exactly the mentions sharing a head
/// lemma. Each sentence is `NP NP verb .`, where an NP is an optional
/// adjective plus a common noun or a proper name.
pub fn synthetic_document(rng: &mut impl Rng, index: usize) -> CorpusDocument {
    let entities: Vec<(&str, bool)> = {
        let mut v: Vec<(&str, bool)> = COMMON.choose_multiple(rng, 3).map(|w| (*w, false)).collect();
        v.extend(PROPER.choose_multiple(rng, 2).map(|w| (*w, true)));
        v
    };
    let doc_id = format!("syn{index:02}");
    let mut sentences = Vec::new();
    let mut mentions = Vec::new();
    let mut heads: Vec<&str> = Vec::new();
    for s in 0..rng.gen_range(5..=8) {
        let no = format!("{doc_id}.{}", s + 1);
        let mut tokens: Vec<Token> = Vec::new();
        let mut nps = Vec::new();
        for _ in 0..2 {
            let &(head, proper) = entities.choose(rng).unwrap();
            let p = phrase(rng, head, proper);
            let from = tokens.len() + 1;
            let to = from + p.tokens.len() - 1;
            for (surface, lemma, pos) in p.tokens {
                let mut t = Token::new(tokens.len() + 1, surface);
                t.lemma = lemma;
                t.pos = pos.to_string();
                t.dep_head = Some(to);
                tokens.push(t);
            }
            nps.push((from, to, head));
        }
        let verb_ix = tokens.len() + 1;
        let verb = VERBS.choose(rng).unwrap();
        let mut v = Token::new(verb_ix, *verb);
        v.pos = "Verb".into();
        v.dep_head = Some(0);
        tokens.push(v);
        let mut dot = Token::new(verb_ix + 1, ".");
        dot.pos = "Punc".into();
        dot.dep_head = Some(verb_ix);
        tokens.push(dot);
        for &(_, to, _) in &nps {
            tokens[to - 1].dep_head = Some(verb_ix);
        }
        for (from, to, head) in nps {
            mentions.push(Mention::new(mentions.len() as MentionId, no.clone(), from, to));
            heads.push(head);
        }
        sentences.push(Sentence { no, tokens });
    }
    let genre = if index % 2 == 0 { "news" } else { "story" };
    let document = Document::new(doc_id, Some(genre.into()), sentences).expect("synthetic document is valid");
    let ids: Vec<MentionId> = mentions.iter().map(|m| m.id).collect();
    let labels: Vec<usize> = heads.iter().map(|h| entities.iter().position(|e| e.0 == *h).unwrap()).collect();
    let chains = groups_from_labels(&ids, &labels)
        .into_iter()
        .filter(|g| g.len() >= 2)
        .map(Chain::new)
        .collect();
    CorpusDocument::new(document, mentions, AnnotationSet::new("gold", chains)).expect("mentions fit the document")
}

pub fn synthetic_corpus(rng: &mut impl Rng, size: usize) -> Vec<CorpusDocument> {
    (0..size).map(|i| synthetic_document(rng, i)).collect()
}
