use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::features::{describe_mentions, extract_features, feature_names, FeatureVector, FEATURE_COUNT};
use super::mentions::{detect_mentions, PronounList};
use super::{BaselineError, CorpusDocument, MentionSource, Method, TrainConfig};
use crate::model::{sort_document_order, Mention, MentionId, Span};

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: FeatureVector,
    /// +1 for coreferent pairs, −1 otherwise.
    pub label: f64,
    pub weight: f64,
}

fn sorted_mentions(doc: &CorpusDocument) -> Result<Vec<Mention>, BaselineError> {
    let mut mentions = doc.mentions.clone();
    sort_document_order(&mut mentions, &doc.document)?;
    Ok(mentions)
}

/// Pairs (i, j), i < j, of positions in a mention list: each chain's
/// consecutive members as positives, non-coreferent pairs closer than
/// `window` as negatives.
pub fn training_pairs(chains: &[Option<usize>], window: usize) -> Vec<(usize, usize, bool)> {
    let mut out = Vec::new();
    let mut last: HashMap<usize, usize> = HashMap::new();
    for j in 0..chains.len() {
        if let Some(c) = chains[j] {
            if let Some(&i) = last.get(&c) {
                out.push((i, j, true));
            }
            last.insert(c, j);
        }
        for i in j.saturating_sub(window.saturating_sub(1))..j {
            let same = matches!((chains[i], chains[j]), (Some(a), Some(b)) if a == b);
            if !same {
                out.push((i, j, false));
            }
        }
    }
    out.sort_unstable();
    out
}

/// Spurious detected mentions to add in predicted-mention training: as many
/// as there are gold mentions, or all of them if fewer.
fn sample_spurious(
    doc: &CorpusDocument,
    pronouns: &PronounList,
    seed: u64,
) -> Result<Vec<Mention>, BaselineError> {
    let gold: HashSet<&Span> = doc.mentions.iter().map(|m| &m.span).collect();
    let mut spurious: Vec<Mention> = detect_mentions(&doc.document, pronouns)?
        .into_iter()
        .filter(|m| !gold.contains(&m.span))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    spurious.shuffle(&mut rng);
    spurious.truncate(doc.mentions.len());
    let base = doc.mentions.iter().map(|m| m.id).max().map_or(0, |m| m + 1);
    for (k, m) in spurious.iter_mut().enumerate() {
        m.id = base + k as u32;
    }
    Ok(spurious)
}

pub fn generate_training_examples(
    docs: &[&CorpusDocument],
    source: MentionSource,
    cfg: &TrainConfig,
    pronouns: &PronounList,
) -> Result<Vec<Example>, BaselineError> {
    let mut raw: Vec<(FeatureVector, bool)> = Vec::new();
    for (d, doc) in docs.iter().enumerate() {
        let mut mentions = sorted_mentions(doc)?;
        if source == MentionSource::Predicted {
            mentions.extend(sample_spurious(doc, pronouns, cfg.seed ^ (d as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))?);
            sort_document_order(&mut mentions, &doc.document)?;
        }
        let chain_of: HashMap<MentionId, usize> = doc
            .gold
            .chains
            .iter()
            .enumerate()
            .flat_map(|(ci, c)| c.members.iter().map(move |&id| (id, ci)))
            .collect();
        let chains: Vec<Option<usize>> = mentions.iter().map(|m| chain_of.get(&m.id).copied()).collect();
        let info = describe_mentions(&doc.document, &mentions, pronouns)?;
        for (i, j, pos) in training_pairs(&chains, cfg.neg_window) {
            raw.push((extract_features(&info[i], &info[j]), pos));
        }
    }
    let n = raw.len() as f64;
    let npos = raw.iter().filter(|(_, p)| *p).count() as f64;
    let nneg = n - npos;
    let weight = |pos: bool| {
        if !cfg.class_balancing {
            1.0
        } else if pos {
            n / (2.0 * npos)
        } else {
            n / (2.0 * nneg)
        }
    };
    Ok(raw
        .into_iter()
        .map(|(features, pos)| Example {
            features,
            label: if pos { 1.0 } else { -1.0 },
            weight: weight(pos),
        })
        .collect())
}

// === linear model =========================================================

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearModel {
    pub method: Method,
    pub weights: Vec<f64>,
    pub bias: f64,
}

const MODEL_HEADER: &str = "corefkit-linear-model";
const MODEL_VERSION: u32 = 1;
const EPSILON: f64 = 0.1;

impl LinearModel {
    pub fn zero(method: Method) -> Self {
        LinearModel {
            method,
            weights: vec![0.0; FEATURE_COUNT],
            bias: 0.0,
        }
    }

    pub fn score(&self, fv: &FeatureVector) -> f64 {
        fv.dot(&self.weights) + self.bias
    }

    /// Coreferent iff the score is positive.
    pub fn predict(&self, fv: &FeatureVector) -> bool {
        self.score(fv) > 0.0
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{MODEL_HEADER} version {MODEL_VERSION}\nmethod {}\nbias {:?}\n", self.method, self.bias);
        for (name, w) in feature_names().iter().zip(&self.weights) {
            let _ = writeln!(out, "weight {name} {w:?}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, BaselineError> {
        let err = |line: usize, message: String| BaselineError::Model { line, message };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty model file".into()))?;
        let expected = format!("{MODEL_HEADER} version {MODEL_VERSION}");
        if header.trim() != expected {
            return Err(err(1, format!("expected '{expected}', found '{}'", header.trim())));
        }
        let index: HashMap<&str, usize> = feature_names().iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut method = None;
        let mut bias = None;
        let mut weights = vec![None; FEATURE_COUNT];
        for (no, line) in lines {
            let no = no + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let number = |s: &str| s.parse::<f64>().map_err(|_| err(no, format!("invalid number '{s}'")));
            match fields.as_slice() {
                ["method", m] => method = Some(m.parse::<Method>().map_err(|e| err(no, e.to_string()))?),
                ["bias", v] => bias = Some(number(v)?),
                ["weight", name, v] => {
                    let &i = index.get(name).ok_or_else(|| err(no, format!("unknown feature '{name}'")))?;
                    weights[i] = Some(number(v)?);
                }
                _ => return Err(err(no, format!("unrecognized line '{line}'"))),
            }
        }
        let method = method.ok_or_else(|| err(0, "missing method".into()))?;
        let bias = bias.ok_or_else(|| err(0, "missing bias".into()))?;
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| err(0, format!("missing weight for '{}'", feature_names()[i]))))
            .collect::<Result<_, _>>()?;
        Ok(LinearModel { method, weights, bias })
    }
}

/// Stochastic subgradient descent on the L2-regularized hinge loss (SVC)
/// or ε-insensitive loss (SVR), visiting examples in a seeded shuffled
/// order each epoch.
///
/// The step size is `learning_rate / (1 + t / n)` after `t` updates over
/// `n` examples, divided by the number of active inputs (bias included) so
/// one update moves the score by at most `step · weight`.
pub fn train_linear(examples: &[Example], method: Method, cfg: &TrainConfig) -> Result<LinearModel, BaselineError> {
    let has_pos = examples.iter().any(|e| e.label > 0.0);
    let has_neg = examples.iter().any(|e| e.label < 0.0);
    if !(has_pos && has_neg) {
        return Err(BaselineError::SingleClass);
    }
    let mut model = LinearModel::zero(method);
    if examples.windows(2).all(|w| w[0].features == w[1].features) {
        return Ok(model);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let n = examples.len() as f64;
    let mut t = 0u64;
    // w is stored as scale * v so the L2 shrink costs O(1) per step.
    let mut scale = 1.0f64;
    let mut v = vec![0.0f64; FEATURE_COUNT];
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &k in &order {
            let e = &examples[k];
            let eta = cfg.learning_rate / (1.0 + t as f64 / n);
            t += 1;
            let f = scale * e.features.dot(&v) + model.bias;
            let step = match method {
                Method::Svc => {
                    if e.label * f < 1.0 {
                        e.label
                    } else {
                        0.0
                    }
                }
                Method::Svr => {
                    let r = e.label - f;
                    if r.abs() > EPSILON {
                        r.signum()
                    } else {
                        0.0
                    }
                }
            };
            scale *= 1.0 - eta * cfg.l2_lambda;
            if scale < 1e-9 {
                for x in &mut v {
                    *x *= scale;
                }
                scale = 1.0;
            }
            if step != 0.0 {
                let g = eta * e.weight * step / (1 + e.features.active.len()) as f64;
                for &i in &e.features.active {
                    v[i] += g / scale;
                }
                model.bias += g;
            }
        }
    }
    model.weights = v.into_iter().map(|x| x * scale).collect();
    Ok(model)
}
