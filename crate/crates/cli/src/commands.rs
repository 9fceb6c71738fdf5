use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use corefkit::adjudicator::{adjudicate_with, AdjudicatorOptions, Constraints, Weights};
use corefkit::agreement::{document_agreement, AgreementReport};
use corefkit::baseline::{
    self, cross_validate, detect_mentions, load_corpus_dir, LinearModel, MentionSource, Method, PronounList, TrainConfig,
};
use corefkit::formats::{align_to_declared, convert as convert_format, parse_conll, write_coref_xml, CorefXml, Format};
use corefkit::metrics::{accumulate, score_all, Metric, MetricScore, Report, ScoringInput};
use corefkit::model::sort_document_order;
use corefkit::{validate_partition, AnnotationSet, PartitionKind, Severity};

use crate::io::{emit, load_coref, load_document, read, read_text, usage};
use crate::{AdjudicateArgs, BaselineCommand, ConvertArgs, DetectArgs, IaaArgs, ScoreArgs, TrainFlags};

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

// === score ================================================================

fn input_format(args: &ScoreArgs) -> anyhow::Result<Format> {
    if let Some(f) = &args.format {
        return f.parse::<Format>().map_err(usage);
    }
    let ext = args.key.extension().and_then(|e| e.to_str()).unwrap_or("");
    Ok(if ext.eq_ignore_ascii_case("xml") { Format::Xml } else { Format::Conll })
}

fn prepare<M: Clone + Eq + std::hash::Hash>(input: ScoringInput<M>, keep_singletons: bool) -> ScoringInput<M> {
    if keep_singletons {
        input
    } else {
        input.without_singletons()
    }
}

pub fn score(args: ScoreArgs) -> anyhow::Result<()> {
    let metrics = Metric::parse_list(&args.metrics).map_err(usage)?;
    let per_doc: Vec<Vec<MetricScore>> = match input_format(&args)? {
        Format::Xml => {
            let key = load_coref(&args.key)?;
            let resp = load_coref(&args.response)?;
            let input = ScoringInput::new(key.span_chains(), resp.span_chains());
            vec![score_all(&metrics, &prepare(input, args.keep_singletons))]
        }
        Format::Conll => {
            let key = parse_conll(&read(&args.key)?).with_context(|| args.key.display().to_string())?;
            let resp = parse_conll(&read(&args.response)?).with_context(|| args.response.display().to_string())?;
            for r in &resp.documents {
                if !key.documents.iter().any(|k| k.doc_id == r.doc_id && k.part == r.part) {
                    eprintln!("warning: response document {} part {} has no key", r.doc_id, r.part);
                }
            }
            key.documents
                .iter()
                .map(|k| {
                    let response = resp
                        .documents
                        .iter()
                        .find(|r| r.doc_id == k.doc_id && r.part == k.part)
                        .map(|r| r.span_chains())
                        .unwrap_or_default();
                    let input = ScoringInput::new(k.span_chains(), response);
                    score_all(&metrics, &prepare(input, args.keep_singletons))
                })
                .collect()
        }
    };
    let scores = metrics
        .iter()
        .map(|&m| {
            let parts: Vec<MetricScore> = per_doc.iter().flatten().filter(|s| s.metric == m).cloned().collect();
            accumulate(m, &parts)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let report = Report::new(scores);
    emit(None, &if args.json { pretty(&report.to_json()) } else { report.to_table() })
}

// === iaa ==================================================================

fn annotator_name(path: &Path) -> String {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("annotator").to_string()
}

fn agreement_for(mentions_path: &Path, annotation_paths: &[PathBuf]) -> anyhow::Result<corefkit::agreement::DocumentAgreement> {
    let declared_file = load_coref(mentions_path)?;
    let declared = declared_file.mention_list();
    let annotations = annotation_paths
        .iter()
        .map(|p| {
            let file = load_coref(p)?;
            align_to_declared(&declared, &file, annotator_name(p)).with_context(|| p.display().to_string())
        })
        .collect::<anyhow::Result<Vec<AnnotationSet>>>()?;
    Ok(document_agreement(declared_file.doc_id.clone(), &declared, &annotations)?)
}

fn sorted_entries(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("cannot read {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .collect();
    v.sort();
    Ok(v)
}

pub fn iaa(args: IaaArgs) -> anyhow::Result<()> {
    let documents = match (&args.mentions, &args.corpus) {
        (Some(m), None) => vec![agreement_for(m, &args.annotations)?],
        (None, Some(dir)) => {
            let mut docs = Vec::new();
            for sub in sorted_entries(dir)?.into_iter().filter(|p| p.is_dir()) {
                let mentions = sub.join("mentions.xml");
                let annotators: Vec<PathBuf> = sorted_entries(&sub)?
                    .into_iter()
                    .filter(|p| p.extension().is_some_and(|e| e == "xml") && *p != mentions)
                    .collect();
                docs.push(agreement_for(&mentions, &annotators).with_context(|| sub.display().to_string())?);
            }
            if docs.is_empty() {
                bail!("no document directories in {}", dir.display());
            }
            docs
        }
        _ => return Err(usage("iaa needs either --mentions with --annotations, or --corpus")),
    };
    let report = AgreementReport { documents };
    emit(None, &if args.json { pretty(&report.to_json()) } else { report.to_table() })
}

// === adjudicate ===========================================================

pub fn adjudicate(args: AdjudicateArgs) -> anyhow::Result<()> {
    let weights: Weights = args.weights.parse().map_err(|e: corefkit::adjudicator::AdjudicationError| usage(e.to_string()))?;
    let declared_file = load_coref(&args.mentions)?;
    let doc = args.doc.as_deref().map(load_document).transpose()?;
    let mut declared = declared_file.mention_list();
    if let Some(d) = &doc {
        sort_document_order(&mut declared, d)?;
    }
    let annotations = args
        .annotations
        .iter()
        .map(|p| {
            let file = load_coref(p)?;
            align_to_declared(&declared, &file, annotator_name(p)).with_context(|| p.display().to_string())
        })
        .collect::<anyhow::Result<Vec<AnnotationSet>>>()?;
    let mut opts = AdjudicatorOptions::new(weights);
    if let Some(f) = &args.force {
        opts.constraints = Constraints::parse(&read_text(f)?).with_context(|| f.display().to_string())?;
    }
    let result = adjudicate_with(&declared, &annotations, &opts)?;
    let errors: Vec<String> = validate_partition(&result.gold, &declared, PartitionKind::Gold)
        .into_iter()
        .filter(|v| v.severity == Severity::Error)
        .map(|v| v.to_string())
        .collect();
    if !errors.is_empty() {
        bail!("adjudicated partition is invalid: {}", errors.join("; "));
    }
    eprint!("{}", result.diagnostics());
    let mut out = declared_file.clone();
    out.chains = result.gold.chains;
    emit(args.out.as_deref(), &write_coref_xml(&out, doc.as_ref())?)
}

// === convert ==============================================================

pub fn convert(args: ConvertArgs) -> anyhow::Result<()> {
    let from: Format = args.from.parse().map_err(usage)?;
    let to: Format = args.to.parse().map_err(usage)?;
    if from == to {
        return Err(usage(format!("nothing to convert: --from and --to are both {from}")));
    }
    let docs = args.doc.iter().map(|p| load_document(p)).collect::<anyhow::Result<Vec<_>>>()?;
    let outputs = convert_format(from, to, &read(&args.input)?, &docs).with_context(|| args.input.display().to_string())?;
    match (outputs.as_slice(), args.out.as_deref()) {
        ([one], out) if out.is_none_or(|p| !p.is_dir()) => emit(out, &one.content),
        (many, Some(dir)) if dir.is_dir() => {
            let ext = if to == Format::Xml { "xml" } else { "conll" };
            for c in many {
                let path = dir.join(format!("{}.{ext}", c.doc_id));
                fs::write(&path, &c.content).with_context(|| format!("cannot write {}", path.display()))?;
            }
            Ok(())
        }
        (many, None) => emit(None, &many.iter().map(|c| c.content.as_str()).collect::<String>()),
        (_, Some(p)) => Err(usage(format!("{} documents in the input; --out {} must be a directory", outputs.len(), p.display()))),
    }
}

// === detect-mentions / baseline ===========================================

fn pronoun_list(path: Option<&Path>) -> anyhow::Result<PronounList> {
    Ok(match path {
        Some(p) => PronounList::parse(&read_text(p)?),
        None => PronounList::default(),
    })
}

pub fn detect(args: DetectArgs) -> anyhow::Result<()> {
    let doc = load_document(&args.doc)?;
    let pronouns = pronoun_list(args.pronouns.as_deref())?;
    let mentions = detect_mentions(&doc, &pronouns)?;
    let file = CorefXml::new(doc.id(), mentions, vec![]);
    emit(args.out.as_deref(), &write_coref_xml(&file, Some(&doc))?)
}

struct Setup {
    method: Method,
    source: MentionSource,
    cfg: TrainConfig,
    pronouns: PronounList,
}

fn setup(flags: &TrainFlags) -> anyhow::Result<Setup> {
    let positive = |name: &str, ok: bool| if ok { Ok(()) } else { Err(usage(format!("--{name} must be positive"))) };
    positive("epochs", flags.epochs > 0)?;
    positive("learning-rate", flags.learning_rate > 0.0)?;
    positive("l2", flags.l2 > 0.0)?;
    positive("neg-window", flags.neg_window > 0)?;
    Ok(Setup {
        method: flags.method.parse().map_err(usage)?,
        source: flags.setup.parse().map_err(usage)?,
        cfg: TrainConfig {
            epochs: flags.epochs,
            learning_rate: flags.learning_rate,
            l2_lambda: flags.l2,
            seed: flags.seed,
            neg_window: flags.neg_window,
            best_link_threshold: flags.threshold,
            class_balancing: !flags.no_balancing,
        },
        pronouns: pronoun_list(flags.pronouns.as_deref())?,
    })
}

pub fn baseline(cmd: BaselineCommand) -> anyhow::Result<()> {
    match cmd {
        BaselineCommand::Train { corpus, flags, out } => {
            let s = setup(&flags)?;
            let docs = load_corpus_dir(&corpus)?;
            let refs: Vec<_> = docs.iter().collect();
            let model = baseline::train(&refs, s.method, s.source, &s.cfg, &s.pronouns)?;
            emit(Some(&out), &model.to_text())
        }
        BaselineCommand::Predict {
            model,
            doc,
            mentions,
            neg_window,
            threshold,
            pronouns,
            out,
        } => {
            let model = LinearModel::from_text(&read_text(&model)?).with_context(|| model.display().to_string())?;
            let doc = load_document(&doc)?;
            let pronouns = pronoun_list(pronouns.as_deref())?;
            let mentions = match mentions {
                Some(p) => load_coref(&p)?.mention_list(),
                None => detect_mentions(&doc, &pronouns)?,
            };
            let cfg = TrainConfig {
                neg_window,
                best_link_threshold: threshold,
                ..TrainConfig::default()
            };
            let response = baseline::predict(&doc, &mentions, &model, &cfg, &pronouns)?;
            let file = CorefXml::new(doc.id(), mentions, response.chains);
            emit(out.as_deref(), &write_coref_xml(&file, Some(&doc))?)
        }
        BaselineCommand::Crossval { corpus, flags, json } => {
            let s = setup(&flags)?;
            let docs = load_corpus_dir(&corpus)?;
            let report = cross_validate(&docs, s.method, s.source, &s.cfg, &s.pronouns)?;
            emit(None, &if json { pretty(&report.to_json()) } else { report.to_table() })
        }
    }
}
