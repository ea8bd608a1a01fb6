//! Instruction-sample assembly: per-task builders, quota mixing, leak
//! filtering, statistics and dataset files.

mod builders;
mod config;
mod io;
mod mix;
mod payload;
mod sample;
mod stats;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::SeedRecord;
use crate::encoders::Modality;

pub use builders::{
    build_description_samples, build_property_samples, build_reaction_completion, build_reaction_image_recognition,
    build_reaction_spectrum_id, build_recognition_samples, choose_mask, sentence_count, Built, PropertyTable,
};
pub use config::{default_weights, ForgeConfig, MixWeights, TemplateBank};
pub use io::{
    load_dataset, read_properties, read_reactions, read_seeds, sample_modality, serialize, write_seeds, Manifest,
    MANIFEST_FILE, MOLECULES_FILE, SAMPLES_FILE,
};
pub use mix::{apply_mix, feasible_total, largest_remainder};
pub use payload::{blob_path, encode_payload, payload_tokens, BlobStore};
pub use sample::{InputRepr, InstructionSample, ModalityRef, RecognitionKind, Source, Task, TaskFamily};
pub use stats::{dataset_stats, dedup_against_eval, format_stats_table, heavy_atom_summary, TaskStats};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ForgeError {
    #[error("config: {0}")]
    Config(String),
    #[error("data: {0}")]
    Data(String),
    #[error("io: {0}")]
    Io(String),
}

/// Seed files for a forging run.
#[derive(Debug, Clone, Default)]
pub struct ForgeInputs {
    pub seeds: Vec<SeedRecord>,
    pub reactions: Vec<String>,
    pub properties: PropertyTable,
}

impl From<crate::corpus::DemoCorpus> for ForgeInputs {
    fn from(c: crate::corpus::DemoCorpus) -> Self {
        ForgeInputs {
            seeds: c.seeds,
            reactions: c.reactions,
            properties: PropertyTable {
                label_names: vec!["demo_activity".into()],
                rows: c.properties.into_iter().map(|(s, l)| (s, vec![l.to_string()])).collect(),
            },
        }
    }
}

/// Per-modality accounting of a run.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ModalityReport {
    /// Samples built per family before dedup and mixing.
    pub candidates: BTreeMap<TaskFamily, usize>,
    pub dedup_dropped: usize,
    /// Samples kept per family.
    pub kept: BTreeMap<TaskFamily, usize>,
    pub skipped: BTreeMap<String, usize>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ForgeOutput {
    pub samples: Vec<InstructionSample>,
    pub blobs: BlobStore,
    pub reports: BTreeMap<Modality, ModalityReport>,
}

/// Runs every weighted task family for each modality, then dedups against
/// the blocklist and subsamples to the weight ratios when enabled.
pub fn forge(inputs: &ForgeInputs, modalities: &[Modality], cfg: &ForgeConfig) -> Result<ForgeOutput, ForgeError> {
    cfg.validate()?;
    let mut out = ForgeOutput::default();
    for &m in modalities {
        let weights = cfg.weights_for(m);
        let mut built = Built::default();
        for &family in weights.keys() {
            let part = match family {
                TaskFamily::Description => {
                    let pairs: Vec<(String, String)> = inputs
                        .seeds
                        .iter()
                        .filter_map(|s| s.description.as_ref().map(|d| (s.smiles.clone(), d.clone())))
                        .collect();
                    let missing = inputs.seeds.len() - pairs.len();
                    let mut b = build_description_samples(&pairs, m, cfg);
                    if missing > 0 {
                        b.skipped.insert("seeds_without_description".into(), missing);
                    }
                    b
                }
                TaskFamily::PropertyPrediction => build_property_samples(&inputs.properties, m, cfg),
                TaskFamily::ReactionCompletion => build_reaction_completion(&inputs.reactions, m, cfg),
                TaskFamily::Recognition => build_recognition_samples(&inputs.seeds, m, cfg),
                TaskFamily::ReactionImageRecognition => {
                    if m != Modality::Image {
                        return Err(ForgeError::Config(format!("reaction image recognition is weighted for {}", m.name())));
                    }
                    build_reaction_image_recognition(&inputs.reactions, cfg)
                }
                TaskFamily::ReactionSpectrumId => build_reaction_spectrum_id(&inputs.reactions, m, cfg)?,
            };
            built.merge(part);
        }
        let mut report = ModalityReport::default();
        for s in &built.samples {
            *report.candidates.entry(s.task.family()).or_default() += 1;
        }
        let (samples, dropped) = dedup_against_eval(built.samples, &cfg.eval_blocklist);
        report.dedup_dropped = dropped;
        let samples = if cfg.apply_mix {
            let mut active = weights.clone();
            active.retain(|t, _| samples.iter().any(|s| s.task.family() == *t));
            for t in weights.keys().filter(|t| !active.contains_key(t)) {
                built.diagnostics.push(format!("{}: no {} candidates, left out of the mix", m.name(), t.name()));
            }
            apply_mix(samples, &active, cfg.seed ^ m as u64)
        } else {
            samples
        };
        for s in &samples {
            *report.kept.entry(s.task.family()).or_default() += 1;
        }
        report.skipped = built.skipped;
        report.diagnostics = built.diagnostics;
        let used: BTreeSet<&str> = samples.iter().flat_map(|s| s.modalities.iter().map(|r| r.path.as_str())).collect();
        for (path, bytes) in built.blobs {
            if used.contains(path.as_str()) {
                out.blobs.insert(path, bytes);
            }
        }
        out.samples.extend(samples);
        out.reports.insert(m, report);
    }
    Ok(out)
}
