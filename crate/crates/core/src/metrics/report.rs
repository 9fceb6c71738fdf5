use serde_json::{json, Map, Value};

use super::{conll_average, MetricScore};

/// A set of metric scores, printable as an aligned table or as JSON.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub scores: Vec<MetricScore>,
}

fn pct(x: f64) -> String {
    format!("{:.2}", 100.0 * x)
}

fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

impl Report {
    pub fn new(scores: Vec<MetricScore>) -> Self {
        Report { scores }
    }

    pub fn conll_f1(&self) -> Option<f64> {
        conll_average(&self.scores)
    }

    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<8}{:>9}{:>11}{:>9}  {:>21}  {:>21}\n",
            "metric", "recall", "precision", "f1", "recall num/den", "precision num/den"
        );
        for s in &self.scores {
            let (rn, pn) = if s.blanc.is_some() {
                ("-".to_string(), "-".to_string())
            } else {
                (
                    format!("{}/{}", num(s.recall.numerator), num(s.recall.denominator)),
                    format!("{}/{}", num(s.precision.numerator), num(s.precision.denominator)),
                )
            };
            out.push_str(&format!(
                "{:<8}{:>9}{:>11}{:>9}  {:>21}  {:>21}\n",
                s.metric.name(),
                pct(s.recall.value()),
                pct(s.precision.value()),
                pct(s.f1),
                rn,
                pn
            ));
        }
        if let Some(c) = self.conll_f1() {
            out.push_str(&format!("{:<8}{:>9}{:>11}{:>9}\n", "conll", "", "", pct(c)));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for s in &self.scores {
            let mut entry = json!({
                "recall": s.recall.value(),
                "precision": s.precision.value(),
                "f1": s.f1,
                "recall_num": s.recall.numerator,
                "recall_den": s.recall.denominator,
                "precision_num": s.precision.numerator,
                "precision_den": s.precision.denominator,
            });
            if let Some(p) = s.blanc {
                entry["coref"] = json!({
                    "recall": p.coref_recall.value(),
                    "precision": p.coref_precision.value(),
                    "f1": p.coref_f1(),
                    "recall_num": p.coref_recall.numerator,
                    "recall_den": p.coref_recall.denominator,
                    "precision_num": p.coref_precision.numerator,
                    "precision_den": p.coref_precision.denominator,
                });
                entry["noncoref"] = json!({
                    "recall": p.noncoref_recall.value(),
                    "precision": p.noncoref_precision.value(),
                    "f1": p.noncoref_f1(),
                    "recall_num": p.noncoref_recall.numerator,
                    "recall_den": p.noncoref_recall.denominator,
                    "precision_num": p.noncoref_precision.numerator,
                    "precision_den": p.noncoref_precision.denominator,
                });
            }
            map.insert(s.metric.name().to_string(), entry);
        }
        if let Some(c) = self.conll_f1() {
            map.insert("conll_f1".into(), json!(c));
        }
        Value::Object(map)
    }
}
