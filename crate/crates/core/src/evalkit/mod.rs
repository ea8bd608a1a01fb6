//! Scorers for model outputs: canonical exact match, SMILES validity, BLEU,
//! METEOR-lite and ROC AUC, with a TSV-in, JSON-out report.

mod text;

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, BufReader, Read};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::chem::canonical_smiles;

pub use text::{bleu_n, corpus_bleu, meteor_lite, tokenize, METEOR_ALPHA, METEOR_BETA, METEOR_GAMMA};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("prediction and gold lists differ in length ({pred} vs {gold})")]
    LengthMismatch { pred: usize, gold: usize },
    #[error("nothing to score")]
    Empty,
    #[error("auc needs both classes (positives {positives}, negatives {negatives})")]
    OneClass { positives: usize, negatives: usize },
    #[error("score {0} is not finite")]
    NonFinite(f64),
    #[error("unknown metric {0:?}")]
    UnknownMetric(String),
    #[error("line {line}: {msg}")]
    Tsv { line: usize, msg: String },
}

fn check_pair<A, B>(pred: &[A], gold: &[B]) -> Result<(), EvalError> {
    if pred.len() != gold.len() {
        return Err(EvalError::LengthMismatch { pred: pred.len(), gold: gold.len() });
    }
    if pred.is_empty() {
        return Err(EvalError::Empty);
    }
    Ok(())
}

/// Fraction of predictions whose canonical SMILES equals the gold one.
/// Unparseable predictions or gold entries count as misses.
pub fn exact_match_accuracy<S: AsRef<str> + Sync>(pred: &[S], gold: &[S]) -> Result<f64, EvalError> {
    check_pair(pred, gold)?;
    let hits = pred
        .par_iter()
        .zip(gold)
        .filter(|(p, g)| match (canonical_smiles(p.as_ref()), canonical_smiles(g.as_ref())) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        })
        .count();
    Ok(hits as f64 / pred.len() as f64)
}

pub fn is_valid_smiles(s: &str) -> bool {
    !s.trim().is_empty() && canonical_smiles(s.trim()).is_ok()
}

pub fn validity_rate<S: AsRef<str> + Sync>(pred: &[S]) -> Result<f64, EvalError> {
    if pred.is_empty() {
        return Err(EvalError::Empty);
    }
    let ok = pred.par_iter().filter(|p| is_valid_smiles(p.as_ref())).count();
    Ok(ok as f64 / pred.len() as f64)
}

/// Mann-Whitney statistic normalised to [0, 1], with tied pairs counted 0.5.
pub fn auc_roc(scores: &[f64], labels: &[bool]) -> Result<f64, EvalError> {
    check_pair(scores, labels)?;
    if let Some(&s) = scores.iter().find(|s| !s.is_finite()) {
        return Err(EvalError::NonFinite(s));
    }
    let positives = labels.iter().filter(|&&l| l).count();
    let negatives = labels.len() - positives;
    if positives == 0 || negatives == 0 {
        return Err(EvalError::OneClass { positives, negatives });
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        rank_sum += order[i..=j].iter().filter(|&&k| labels[k]).count() as f64 * avg;
        i = j + 1;
    }
    let p = positives as f64;
    Ok((rank_sum - p * (p + 1.0) / 2.0) / (p * negatives as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ExactMatch,
    Validity,
    Bleu2,
    Bleu4,
    MeteorLite,
    AucRoc,
}

impl Metric {
    pub const ALL: [Metric; 6] =
        [Metric::ExactMatch, Metric::Validity, Metric::Bleu2, Metric::Bleu4, Metric::MeteorLite, Metric::AucRoc];

    pub fn name(self) -> &'static str {
        match self {
            Metric::ExactMatch => "exact_match",
            Metric::Validity => "validity",
            Metric::Bleu2 => "bleu2",
            Metric::Bleu4 => "bleu4",
            Metric::MeteorLite => "meteor_lite",
            Metric::AucRoc => "auc_roc",
        }
    }

    /// Parses a comma-separated list; `all` expands to every metric.
    pub fn parse_list(s: &str) -> Result<Vec<Metric>, EvalError> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part == "all" {
                out.extend(Metric::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Metric {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        Metric::ALL
            .into_iter()
            .find(|m| m.name() == key || (key == "acc" && *m == Metric::ExactMatch) || (key == "auc" && *m == Metric::AucRoc) || (key == "meteor" && *m == Metric::MeteorLite))
            .ok_or_else(|| EvalError::UnknownMetric(s.to_string()))
    }
}

/// Reads `id<TAB>text` rows. Lines without a tab keep the whole line as the
/// id and an empty text. Blank lines and `#` comments are skipped.
pub fn read_tsv(r: impl Read) -> Result<Vec<(String, String)>, EvalError> {
    let mut out = Vec::new();
    for (n, line) in BufReader::new(r).lines().enumerate() {
        let line = line.map_err(|e| EvalError::Tsv { line: n + 1, msg: e.to_string() })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (id, text) = line.split_once('\t').unwrap_or((line, ""));
        out.push((id.trim().to_string(), text.trim().to_string()));
    }
    Ok(out)
}

/// Counts of inputs that were scored as failures instead of aborting.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub missing_predictions: Vec<String>,
    pub unmatched_predictions: Vec<String>,
    pub duplicate_ids: Vec<String>,
    pub invalid_smiles_predictions: usize,
    pub unparseable_gold_smiles: usize,
    pub non_numeric_scores: usize,
    pub unlabelled_gold: usize,
    /// Metrics that could not be computed, with the reason.
    pub skipped_metrics: BTreeMap<String, String>,
}

pub const METEOR_NOTE: &str = "meteor_lite: exact unigram matching only, no stemming or synonyms; \
fragmentation (chunks-1)/(matches-1); not comparable to full METEOR";
pub const TOKENIZER_NOTE: &str = "text metrics: lowercase, split on whitespace and ASCII punctuation";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub notes: Vec<String>,
    pub n: usize,
    pub metrics: BTreeMap<Metric, f64>,
    pub diagnostics: Diagnostics,
}

/// Maps a prediction to a score for AUC: a number, or yes/no style text.
pub fn parse_score(s: &str) -> Option<f64> {
    let t = s.trim().trim_end_matches('.').to_ascii_lowercase();
    match t.as_str() {
        "yes" | "true" | "positive" => Some(1.0),
        "no" | "false" | "negative" => Some(0.0),
        _ => t.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

pub fn parse_label(s: &str) -> Option<bool> {
    parse_score(s).and_then(|v| match v {
        v if v == 1.0 => Some(true),
        v if v == 0.0 => Some(false),
        _ => None,
    })
}

/// Scores predictions against gold rows joined by id, in gold order.
/// A gold id with no prediction is scored against an empty text.
pub fn evaluate(pred: &[(String, String)], gold: &[(String, String)], metrics: &[Metric]) -> Result<EvalReport, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::Empty);
    }
    let mut diag = Diagnostics::default();
    let mut by_id: HashMap<&str, &str> = HashMap::new();
    for (id, text) in pred {
        if by_id.insert(id, text).is_some() {
            diag.duplicate_ids.push(id.clone());
        }
    }
    let gold_ids: std::collections::HashSet<&str> = gold.iter().map(|(id, _)| id.as_str()).collect();
    diag.unmatched_predictions = pred.iter().filter(|(id, _)| !gold_ids.contains(id.as_str())).map(|(id, _)| id.clone()).collect();
    let pairs: Vec<(&str, &str)> = gold
        .iter()
        .map(|(id, g)| {
            let p = by_id.get(id.as_str()).copied().unwrap_or_else(|| {
                diag.missing_predictions.push(id.clone());
                ""
            });
            (p, g.as_str())
        })
        .collect();
    let preds: Vec<&str> = pairs.iter().map(|p| p.0).collect();
    let golds: Vec<&str> = pairs.iter().map(|p| p.1).collect();
    let n = pairs.len() as f64;

    let mut out = BTreeMap::new();
    for &m in metrics {
        let value = match m {
            Metric::ExactMatch => {
                diag.invalid_smiles_predictions = preds.iter().filter(|p| !is_valid_smiles(p)).count();
                diag.unparseable_gold_smiles = golds.iter().filter(|g| !is_valid_smiles(g)).count();
                exact_match_accuracy(&preds, &golds)
            }
            Metric::Validity => validity_rate(&preds),
            Metric::Bleu2 | Metric::Bleu4 => {
                let order = if m == Metric::Bleu2 { 2 } else { 4 };
                let refs: Vec<Vec<&str>> = golds.iter().map(|g| vec![*g]).collect();
                Ok(corpus_bleu(&preds, &refs, order))
            }
            Metric::MeteorLite => Ok(pairs.par_iter().map(|(p, g)| meteor_lite(p, g)).sum::<f64>() / n),
            Metric::AucRoc => {
                let mut scores = Vec::new();
                let mut labels = Vec::new();
                diag.non_numeric_scores = 0;
                diag.unlabelled_gold = 0;
                for (p, g) in &pairs {
                    let Some(label) = parse_label(g) else {
                        diag.unlabelled_gold += 1;
                        continue;
                    };
                    let score = parse_score(p).unwrap_or_else(|| {
                        diag.non_numeric_scores += 1;
                        if label { f64::MIN } else { f64::MAX }
                    });
                    scores.push(score);
                    labels.push(label);
                }
                auc_roc(&scores, &labels)
            }
        };
        match value {
            Ok(v) => {
                out.insert(m, v);
            }
            Err(e) => {
                diag.skipped_metrics.insert(m.name().to_string(), e.to_string());
            }
        }
    }
    let mut notes = vec![TOKENIZER_NOTE.to_string()];
    if metrics.contains(&Metric::MeteorLite) {
        notes.insert(0, METEOR_NOTE.to_string());
    }
    Ok(EvalReport { notes, n: pairs.len(), metrics: out, diagnostics: diag })
}
