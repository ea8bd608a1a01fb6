use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encoders::Modality;

/// Recognition sub-task: which representation is asked for, and whether the
/// input also carries SMILES.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RecognitionKind {
    IupacAlone,
    IupacWithSmiles,
    FormulaAlone,
    FormulaWithSmiles,
    SmilesAlone,
}

impl RecognitionKind {
    pub const ALL: [RecognitionKind; 5] = [
        RecognitionKind::IupacAlone,
        RecognitionKind::IupacWithSmiles,
        RecognitionKind::FormulaAlone,
        RecognitionKind::FormulaWithSmiles,
        RecognitionKind::SmilesAlone,
    ];
    /// Spectra never see SMILES in recognition inputs.
    pub const ALONE: [RecognitionKind; 3] = [
        RecognitionKind::IupacAlone,
        RecognitionKind::FormulaAlone,
        RecognitionKind::SmilesAlone,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RecognitionKind::IupacAlone => "iupac_alone",
            RecognitionKind::IupacWithSmiles => "iupac_with_smiles",
            RecognitionKind::FormulaAlone => "formula_alone",
            RecognitionKind::FormulaWithSmiles => "formula_with_smiles",
            RecognitionKind::SmilesAlone => "smiles_alone",
        }
    }

    pub fn with_smiles(self) -> bool {
        matches!(self, RecognitionKind::IupacWithSmiles | RecognitionKind::FormulaWithSmiles)
    }

    pub fn needs_name(self) -> bool {
        matches!(self, RecognitionKind::IupacAlone | RecognitionKind::IupacWithSmiles)
    }

    pub fn template_key(self) -> &'static str {
        match self {
            RecognitionKind::IupacAlone | RecognitionKind::IupacWithSmiles => "recognition_iupac",
            RecognitionKind::FormulaAlone | RecognitionKind::FormulaWithSmiles => "recognition_formula",
            RecognitionKind::SmilesAlone => "recognition_smiles",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Task {
    Description,
    PropertyPrediction,
    ReactionCompletion,
    Recognition(Modality, RecognitionKind),
    RecognitionReactionImage,
    ReactionSpectrumId,
}

/// Grouping used by mix weights and statistics tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskFamily {
    Description,
    PropertyPrediction,
    ReactionCompletion,
    Recognition,
    ReactionImageRecognition,
    ReactionSpectrumId,
}

impl TaskFamily {
    pub const ALL: [TaskFamily; 6] = [
        TaskFamily::Description,
        TaskFamily::PropertyPrediction,
        TaskFamily::ReactionCompletion,
        TaskFamily::Recognition,
        TaskFamily::ReactionImageRecognition,
        TaskFamily::ReactionSpectrumId,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TaskFamily::Description => "description",
            TaskFamily::PropertyPrediction => "property_prediction",
            TaskFamily::ReactionCompletion => "reaction_completion",
            TaskFamily::Recognition => "recognition",
            TaskFamily::ReactionImageRecognition => "reaction_image_recognition",
            TaskFamily::ReactionSpectrumId => "reaction_spectrum_id",
        }
    }

    /// Row label in statistics tables.
    pub fn title(self, m: Modality) -> String {
        match self {
            TaskFamily::Description => "Molecule Description".into(),
            TaskFamily::PropertyPrediction => "Molecular Property Prediction".into(),
            TaskFamily::ReactionCompletion => "Reaction Completion".into(),
            TaskFamily::Recognition => match m {
                Modality::Graph => "Molecular Graph Recognition".into(),
                Modality::Conformation => "Molecular Conformation Recognition".into(),
                Modality::Image => "Molecular Image Recognition".into(),
                Modality::Ms2 => "MS2 Spectrum Recognition".into(),
                Modality::Ir => "IR Spectrum Recognition".into(),
            },
            TaskFamily::ReactionImageRecognition => "Reaction Image Recognition".into(),
            TaskFamily::ReactionSpectrumId => match m {
                Modality::Ir => "Reaction Related IR Identification".into(),
                _ => "Reaction Related MS2 Identification".into(),
            },
        }
    }

    pub fn source(self) -> Source {
        match self {
            TaskFamily::Description | TaskFamily::Recognition => Source::PubchemLike,
            TaskFamily::PropertyPrediction => Source::MoleculenetLike,
            _ => Source::UsptoLike,
        }
    }
}

impl Task {
    pub fn family(self) -> TaskFamily {
        match self {
            Task::Description => TaskFamily::Description,
            Task::PropertyPrediction => TaskFamily::PropertyPrediction,
            Task::ReactionCompletion => TaskFamily::ReactionCompletion,
            Task::Recognition(..) => TaskFamily::Recognition,
            Task::RecognitionReactionImage => TaskFamily::ReactionImageRecognition,
            Task::ReactionSpectrumId => TaskFamily::ReactionSpectrumId,
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Task::Description => f.write_str("description"),
            Task::PropertyPrediction => f.write_str("property_prediction"),
            Task::ReactionCompletion => f.write_str("reaction_completion"),
            Task::Recognition(m, k) => write!(f, "recognition_{}.{}", m.name(), k.name()),
            Task::RecognitionReactionImage => f.write_str("recognition_reaction_image"),
            Task::ReactionSpectrumId => f.write_str("reaction_spectrum_id"),
        }
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "description" => Task::Description,
            "property_prediction" => Task::PropertyPrediction,
            "reaction_completion" => Task::ReactionCompletion,
            "recognition_reaction_image" => Task::RecognitionReactionImage,
            "reaction_spectrum_id" => Task::ReactionSpectrumId,
            _ => {
                let rest = s.strip_prefix("recognition_").ok_or_else(|| format!("unknown task {s:?}"))?;
                let (m, k) = rest.split_once('.').ok_or_else(|| format!("unknown task {s:?}"))?;
                let m = Modality::from_name(m).ok_or_else(|| format!("unknown modality in task {s:?}"))?;
                let k = RecognitionKind::ALL
                    .into_iter()
                    .find(|kind| kind.name() == k)
                    .ok_or_else(|| format!("unknown recognition kind in task {s:?}"))?;
                Task::Recognition(m, k)
            }
        })
    }
}

impl Serialize for Task {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Task {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputRepr {
    ModalityOnly,
    ModalityPlusSmiles,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    PubchemLike,
    MoleculenetLike,
    UsptoLike,
}

/// One modality payload of a sample: blob path relative to the dataset root
/// and the number of tokens it contributes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModalityRef {
    pub kind: Modality,
    pub path: String,
    pub tokens: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstructionSample {
    pub id: String,
    pub task: Task,
    pub instruction: String,
    pub input_repr: InputRepr,
    pub modalities: Vec<ModalityRef>,
    pub target: String,
    pub source: Source,
    /// Canonical SMILES of every molecule involved, inputs and target.
    /// Stored in the sidecar file, not in the sample record.
    #[serde(skip)]
    pub molecules: Vec<String>,
    #[serde(skip)]
    pub heavy_atoms: Vec<usize>,
}

impl InstructionSample {
    pub fn modality_tokens(&self) -> usize {
        self.modalities.iter().map(|m| m.tokens).sum()
    }
}
