use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::sample::TaskFamily;
use super::ForgeError;
use crate::encoders::Modality;

const BUNDLED_TEMPLATES: &str = include_str!("../../data/templates_v1.toml");

/// Instruction phrasings per template key.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateBank {
    pub version: u32,
    pub phrasings: BTreeMap<String, Vec<String>>,
}

impl TemplateBank {
    pub fn from_toml(text: &str) -> Result<Self, ForgeError> {
        let mut table: toml::Table = toml::from_str(text).map_err(|e| ForgeError::Config(e.to_string()))?;
        let version = table
            .remove("version")
            .and_then(|v| v.as_integer())
            .ok_or_else(|| ForgeError::Config("template bank needs an integer `version`".into()))? as u32;
        let mut phrasings = BTreeMap::new();
        for (key, value) in table {
            let list: Vec<String> = value
                .try_into()
                .map_err(|_| ForgeError::Config(format!("templates `{key}` must be a list of strings")))?;
            phrasings.insert(key, list);
        }
        Ok(TemplateBank { version, phrasings })
    }

    pub fn bundled() -> Self {
        Self::from_toml(BUNDLED_TEMPLATES).expect("bundled templates parse")
    }

    pub fn get(&self, key: &str) -> &[String] {
        self.phrasings.get(key).map_or(&[], Vec::as_slice)
    }
}

impl Default for TemplateBank {
    fn default() -> Self {
        Self::bundled()
    }
}

pub type MixWeights = BTreeMap<TaskFamily, f64>;

/// Sample-count proportions of the reference corpus, in thousands.
pub fn default_weights(m: Modality) -> MixWeights {
    use TaskFamily::*;
    let rows: &[(TaskFamily, f64)] = match m {
        Modality::Graph | Modality::Conformation => &[
            (Description, 1152.0),
            (PropertyPrediction, 203.0),
            (ReactionCompletion, 600.0),
            (Recognition, 30.0),
        ],
        Modality::Image => &[
            (Description, 1152.0),
            (PropertyPrediction, 204.0),
            (ReactionCompletion, 600.0),
            (Recognition, 30.0),
            (ReactionImageRecognition, 300.0),
        ],
        Modality::Ms2 => &[(Recognition, 21.0), (PropertyPrediction, 90.0), (ReactionSpectrumId, 224.0)],
        Modality::Ir => &[(Recognition, 30.0), (PropertyPrediction, 102.0), (ReactionSpectrumId, 300.0)],
    };
    rows.iter().copied().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForgeConfig {
    pub seed: u64,
    /// Copies of each high-quality description pair.
    pub high_quality_repeat: usize,
    /// Subsample task families to the weight ratios.
    pub apply_mix: bool,
    pub weights: BTreeMap<Modality, MixWeights>,
    /// Canonical SMILES that must not appear in any sample.
    pub eval_blocklist: BTreeSet<String>,
    pub ms2_depth: u32,
    /// Smallest side of rendered images, in pixels.
    pub image_min_side: u32,
    pub templates: TemplateBank,
}

impl Default for ForgeConfig {
    fn default() -> Self {
        ForgeConfig {
            seed: 0,
            high_quality_repeat: 2,
            apply_mix: true,
            weights: Modality::ALL.into_iter().map(|m| (m, default_weights(m))).collect(),
            eval_blocklist: BTreeSet::new(),
            ms2_depth: 2,
            image_min_side: 336,
            templates: TemplateBank::bundled(),
        }
    }
}

/// File form: every key optional, weights given per modality name.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    high_quality_repeat: Option<usize>,
    apply_mix: Option<bool>,
    ms2_depth: Option<u32>,
    image_min_side: Option<u32>,
    eval_blocklist: Option<Vec<String>>,
    weights: Option<BTreeMap<String, BTreeMap<TaskFamily, f64>>>,
}

impl ForgeConfig {
    /// Overlays a TOML file onto the defaults. Blocklist entries are
    /// canonicalized; unparseable ones are an error.
    pub fn from_toml(text: &str) -> Result<Self, ForgeError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ForgeError::Config(e.to_string()))?;
        let mut cfg = ForgeConfig::default();
        if let Some(v) = raw.seed {
            cfg.seed = v;
        }
        if let Some(v) = raw.high_quality_repeat {
            cfg.high_quality_repeat = v;
        }
        if let Some(v) = raw.apply_mix {
            cfg.apply_mix = v;
        }
        if let Some(v) = raw.ms2_depth {
            cfg.ms2_depth = v;
        }
        if let Some(v) = raw.image_min_side {
            cfg.image_min_side = v;
        }
        if let Some(list) = raw.eval_blocklist {
            cfg.set_blocklist(&list)?;
        }
        for (name, w) in raw.weights.unwrap_or_default() {
            let m = Modality::from_name(&name).ok_or_else(|| ForgeError::Config(format!("unknown modality `{name}` in weights")))?;
            cfg.weights.insert(m, w);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set_blocklist(&mut self, smiles: &[String]) -> Result<(), ForgeError> {
        self.eval_blocklist = smiles
            .iter()
            .map(|s| crate::chem::canonical_smiles(s).map_err(|e| ForgeError::Config(format!("blocklist entry {s:?}: {e}"))))
            .collect::<Result<_, _>>()?;
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ForgeError> {
        if self.high_quality_repeat == 0 {
            return Err(ForgeError::Config("high_quality_repeat must be at least 1".into()));
        }
        for (m, w) in &self.weights {
            if w.is_empty() {
                return Err(ForgeError::Config(format!("no task weights for {}", m.name())));
            }
            for (t, v) in w {
                if !(v.is_finite() && *v > 0.0) {
                    return Err(ForgeError::Config(format!("weight for {} / {} must be positive", m.name(), t.name())));
                }
                for key in template_keys(*t) {
                    if self.templates.get(key).is_empty() {
                        return Err(ForgeError::Config(format!("template bank has no phrasings for `{key}`")));
                    }
                }
            }
        }
        Ok(())
    }

    /// SHA-256 over the whole configuration, template bank included.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn weights_for(&self, m: Modality) -> MixWeights {
        self.weights.get(&m).cloned().unwrap_or_else(|| default_weights(m))
    }
}

pub(crate) fn template_keys(t: TaskFamily) -> &'static [&'static str] {
    match t {
        TaskFamily::Description => &["description"],
        TaskFamily::PropertyPrediction => &["property_prediction"],
        TaskFamily::ReactionCompletion => &["reaction_completion"],
        TaskFamily::Recognition => &["recognition_iupac", "recognition_formula", "recognition_smiles"],
        TaskFamily::ReactionImageRecognition => &["reaction_image_recognition"],
        TaskFamily::ReactionSpectrumId => &["reaction_spectrum_id"],
    }
}
