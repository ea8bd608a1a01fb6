use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::ForgeConfig;
use super::payload::{digest64, store, BlobStore, Renderer};
use super::sample::{InputRepr, InstructionSample, ModalityRef, RecognitionKind, Task, TaskFamily};
use super::ForgeError;
use crate::chem::{heavy_atom_count, molecular_formula, parse_reaction, parse_smiles, write_smiles, MolGraph, Reaction, ReactionRole};
use crate::corpus::SeedRecord;
use crate::encoders::Modality;

/// Builder output: samples in input order plus their payload blobs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Built {
    pub samples: Vec<InstructionSample>,
    pub blobs: BlobStore,
    /// One line per rejected input.
    pub diagnostics: Vec<String>,
    /// Sub-tasks skipped for lack of data, by reason.
    pub skipped: BTreeMap<String, usize>,
}

impl Built {
    pub fn merge(&mut self, other: Built) {
        self.samples.extend(other.samples);
        self.blobs.extend(other.blobs);
        self.diagnostics.extend(other.diagnostics);
        for (k, v) in other.skipped {
            *self.skipped.entry(k).or_default() += v;
        }
    }

    fn reject(msg: String) -> Built {
        Built {
            diagnostics: vec![msg],
            ..Default::default()
        }
    }
}

fn collect(parts: Vec<Built>) -> Built {
    let mut out = Built::default();
    for p in parts {
        out.merge(p);
    }
    out
}

/// A labelled table: one SMILES column plus one or more label columns.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PropertyTable {
    pub label_names: Vec<String>,
    pub rows: Vec<(String, Vec<String>)>,
}

/// Number of maximal segments ending in `.`, `!` or `?`.
pub fn sentence_count(text: &str) -> usize {
    let mut count = 0;
    let mut content = false;
    for ch in text.chars() {
        if matches!(ch, '.' | '!' | '?') {
            if content {
                count += 1;
            }
            content = false;
        } else if !ch.is_whitespace() {
            content = true;
        }
    }
    count
}

pub(crate) fn placeholder(m: Modality) -> &'static str {
    match m {
        Modality::Graph => "<graph>",
        Modality::Conformation => "<conformation>",
        Modality::Image => "<image>",
        Modality::Ms2 => "<ms2>",
        Modality::Ir => "<ir>",
    }
}

fn kind_noun(m: Modality) -> &'static str {
    match m {
        Modality::Graph => "molecular graph",
        Modality::Conformation => "3D conformation",
        Modality::Image => "image",
        Modality::Ms2 => "MS2 spectrum",
        Modality::Ir => "IR spectrum",
    }
}

fn role_noun(r: ReactionRole) -> &'static str {
    match r {
        ReactionRole::Reactant => "reactant",
        ReactionRole::Agent => "reagent",
        ReactionRole::Product => "product",
    }
}

fn mol_ref(m: Modality, smiles: Option<&str>) -> String {
    match smiles {
        Some(s) => format!("{} (SMILES: {s})", placeholder(m)),
        None => placeholder(m).to_string(),
    }
}

fn fill(template: &str, vars: &[(&str, &str)]) -> String {
    let mut out = template.to_string();
    for (k, v) in vars {
        out = out.replace(&format!("{{{k}}}"), v);
    }
    out
}

fn item_rng(seed: u64, tag: &str, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(digest64(&[&seed.to_le_bytes(), tag.as_bytes(), &(index as u64).to_le_bytes()]))
}

struct Ctx<'a> {
    cfg: &'a ForgeConfig,
    modality: Modality,
    renderer: Renderer,
}

impl<'a> Ctx<'a> {
    fn new(cfg: &'a ForgeConfig, modality: Modality) -> Self {
        Ctx {
            cfg,
            modality,
            renderer: Renderer {
                modality,
                ms2_depth: cfg.ms2_depth,
                image_min_side: cfg.image_min_side,
                base_seed: cfg.seed,
            },
        }
    }

    fn template(&self, key: &str, rng: &mut ChaCha8Rng) -> String {
        self.cfg.templates.get(key).choose(rng).cloned().unwrap_or_default()
    }

    fn payload(&self, m: &MolGraph, canonical: &str, rng: &mut ChaCha8Rng, blobs: &mut BlobStore) -> Result<ModalityRef, ForgeError> {
        let (bytes, tokens) = self.renderer.molecule(m, canonical, rng.random())?;
        Ok(store(blobs, self.modality, bytes, tokens))
    }

    fn id(&self, family: TaskFamily, index: usize, k: usize) -> String {
        format!("{}-{}-{index:06}-{k}", self.modality.name(), family.name())
    }
}

fn parse_or_diag(smiles: &str, what: &str) -> Result<(MolGraph, String), String> {
    let g = parse_smiles(smiles).map_err(|e| format!("{what}: SMILES {smiles:?} rejected: {e}"))?;
    let c = write_smiles(&g);
    Ok((g, c))
}

fn description_one(ctx: &Ctx, i: usize, smiles: &str, desc: &str) -> Built {
    let desc = desc.trim();
    if desc.is_empty() {
        return Built::reject(format!("description pair {i}: empty description"));
    }
    let (g, canon) = match parse_or_diag(smiles, &format!("description pair {i}")) {
        Ok(x) => x,
        Err(e) => return Built::reject(e),
    };
    let repeat = if sentence_count(desc) >= 3 { ctx.cfg.high_quality_repeat } else { 1 };
    let mut rng = item_rng(ctx.cfg.seed, "description", i);
    let mut out = Built::default();
    let mut k = 0;
    for _ in 0..repeat {
        for repr in [InputRepr::ModalityOnly, InputRepr::ModalityPlusSmiles] {
            let payload = match ctx.payload(&g, &canon, &mut rng, &mut out.blobs) {
                Ok(p) => p,
                Err(e) => return Built::reject(format!("description pair {i}: {e}")),
            };
            let smiles_in = (repr == InputRepr::ModalityPlusSmiles).then_some(canon.as_str());
            let t = ctx.template("description", &mut rng);
            out.samples.push(InstructionSample {
                id: ctx.id(TaskFamily::Description, i, k),
                task: Task::Description,
                instruction: fill(&t, &[("mol", &mol_ref(ctx.modality, smiles_in)), ("kind", kind_noun(ctx.modality))]),
                input_repr: repr,
                modalities: vec![payload],
                target: desc.to_string(),
                source: TaskFamily::Description.source(),
                molecules: vec![canon.clone()],
                heavy_atoms: vec![heavy_atom_count(&g)],
            });
            k += 1;
        }
    }
    out
}

/// Two input variants per pair; pairs whose description has at least three
/// sentences are repeated `high_quality_repeat` times.
pub fn build_description_samples(pairs: &[(String, String)], modality: Modality, cfg: &ForgeConfig) -> Built {
    let ctx = Ctx::new(cfg, modality);
    collect(pairs.par_iter().enumerate().map(|(i, (s, d))| description_one(&ctx, i, s, d)).collect())
}

fn label_text(v: &str) -> String {
    match v.trim() {
        "1" | "1.0" | "true" | "True" => "Yes".into(),
        "0" | "0.0" | "false" | "False" => "No".into(),
        other => other.to_string(),
    }
}

fn spectrum_modality(m: Modality) -> bool {
    matches!(m, Modality::Ms2 | Modality::Ir)
}

fn property_one(ctx: &Ctx, table: &PropertyTable, i: usize) -> Built {
    let (smiles, labels) = &table.rows[i];
    let (g, canon) = match parse_or_diag(smiles, &format!("property row {i}")) {
        Ok(x) => x,
        Err(e) => return Built::reject(e),
    };
    let reprs: &[InputRepr] = if spectrum_modality(ctx.modality) {
        &[InputRepr::ModalityPlusSmiles]
    } else {
        &[InputRepr::ModalityOnly, InputRepr::ModalityPlusSmiles]
    };
    let mut rng = item_rng(ctx.cfg.seed, "property", i);
    let mut out = Built::default();
    let mut k = 0;
    for (name, value) in table.label_names.iter().zip(labels) {
        if value.trim().is_empty() {
            continue;
        }
        for &repr in reprs {
            let payload = match ctx.payload(&g, &canon, &mut rng, &mut out.blobs) {
                Ok(p) => p,
                Err(e) => return Built::reject(format!("property row {i}: {e}")),
            };
            let smiles_in = (repr == InputRepr::ModalityPlusSmiles).then_some(canon.as_str());
            let t = ctx.template("property_prediction", &mut rng);
            out.samples.push(InstructionSample {
                id: ctx.id(TaskFamily::PropertyPrediction, i, k),
                task: Task::PropertyPrediction,
                instruction: fill(
                    &t,
                    &[("mol", &mol_ref(ctx.modality, smiles_in)), ("kind", kind_noun(ctx.modality)), ("property", name)],
                ),
                input_repr: repr,
                modalities: vec![payload],
                target: label_text(value),
                source: TaskFamily::PropertyPrediction.source(),
                molecules: vec![canon.clone()],
                heavy_atoms: vec![heavy_atom_count(&g)],
            });
            k += 1;
        }
    }
    out
}

/// Per label cell: both input variants for structural modalities, SMILES
/// always included for spectra.
pub fn build_property_samples(table: &PropertyTable, modality: Modality, cfg: &ForgeConfig) -> Built {
    let ctx = Ctx::new(cfg, modality);
    collect((0..table.rows.len()).into_par_iter().map(|i| property_one(&ctx, table, i)).collect())
}

/// Masked molecule of a reaction: role chosen uniformly among present roles,
/// then a molecule uniformly within it.
pub fn choose_mask(r: &Reaction, rng: &mut impl Rng) -> (ReactionRole, usize) {
    let roles = r.present_roles();
    let role = roles[rng.random_range(0..roles.len())];
    (role, rng.random_range(0..r.role(role).len()))
}

struct ReactionInfo {
    reaction: Reaction,
    canon: Vec<(ReactionRole, String)>,
    heavy: Vec<usize>,
}

fn reaction_info(text: &str, i: usize) -> Result<ReactionInfo, String> {
    let reaction = parse_reaction(text).map_err(|e| format!("reaction {i}: {e}"))?;
    let canon = reaction.molecules().map(|(role, m)| (role, write_smiles(m))).collect();
    let heavy = reaction.molecules().map(|(_, m)| heavy_atom_count(m)).collect();
    Ok(ReactionInfo { reaction, canon, heavy })
}

/// Flat index of the `k`-th molecule of `role` in `Reaction::molecules` order.
fn flat_index(r: &Reaction, role: ReactionRole, k: usize) -> usize {
    r.molecules().position(|(ro, _)| ro == role).unwrap() + k
}

/// `reactants > agents > products`, each molecule produced by `show`.
fn reaction_text(r: &Reaction, mut show: impl FnMut(usize, ReactionRole, &MolGraph) -> String) -> String {
    let mut sides: BTreeMap<ReactionRole, Vec<String>> = BTreeMap::new();
    for (idx, (role, m)) in r.molecules().enumerate() {
        sides.entry(role).or_default().push(show(idx, role, m));
    }
    [ReactionRole::Reactant, ReactionRole::Agent, ReactionRole::Product]
        .iter()
        .map(|role| sides.get(role).map_or(String::new(), |v| v.join(" . ")))
        .collect::<Vec<_>>()
        .join(" > ")
}

fn completion_one(ctx: &Ctx, i: usize, text: &str) -> Built {
    let info = match reaction_info(text, i) {
        Ok(x) => x,
        Err(e) => return Built::reject(e),
    };
    let mut rng = item_rng(ctx.cfg.seed, "reaction_completion", i);
    let (role, k) = choose_mask(&info.reaction, &mut rng);
    let masked = flat_index(&info.reaction, role, k);
    let repr = if rng.random_bool(0.5) { InputRepr::ModalityOnly } else { InputRepr::ModalityPlusSmiles };
    let mut out = Built::default();
    let mut modalities = Vec::new();
    let mut failure = None;
    let shown = reaction_text(&info.reaction, |idx, _, m| {
        if idx == masked {
            return "?".into();
        }
        let canon = &info.canon[idx].1;
        match ctx.payload(m, canon, &mut rng, &mut out.blobs) {
            Ok(p) => modalities.push(p),
            Err(e) => failure = Some(e),
        }
        mol_ref(ctx.modality, (repr == InputRepr::ModalityPlusSmiles).then_some(canon.as_str()))
    });
    if let Some(e) = failure {
        return Built::reject(format!("reaction {i}: {e}"));
    }
    let t = ctx.template("reaction_completion", &mut rng);
    out.samples.push(InstructionSample {
        id: ctx.id(TaskFamily::ReactionCompletion, i, 0),
        task: Task::ReactionCompletion,
        instruction: fill(&t, &[("reaction", &shown), ("role", role_noun(role)), ("kind", kind_noun(ctx.modality))]),
        input_repr: repr,
        modalities,
        target: info.canon[masked].1.clone(),
        source: TaskFamily::ReactionCompletion.source(),
        molecules: info.canon.iter().map(|(_, s)| s.clone()).collect(),
        heavy_atoms: info.heavy,
    });
    out
}

/// One sample per reaction with one molecule masked; the rest are rendered in
/// `modality`, with or without SMILES by a seeded coin.
pub fn build_reaction_completion(reactions: &[String], modality: Modality, cfg: &ForgeConfig) -> Built {
    let ctx = Ctx::new(cfg, modality);
    collect(reactions.par_iter().enumerate().map(|(i, r)| completion_one(&ctx, i, r)).collect())
}

fn recognition_one(ctx: &Ctx, i: usize, rec: &SeedRecord) -> Built {
    let (g, canon) = match parse_or_diag(&rec.smiles, &format!("seed {i}")) {
        Ok(x) => x,
        Err(e) => return Built::reject(e),
    };
    let kinds: &[RecognitionKind] = if spectrum_modality(ctx.modality) {
        &RecognitionKind::ALONE
    } else {
        &RecognitionKind::ALL
    };
    let mut rng = item_rng(ctx.cfg.seed, "recognition", i);
    let mut out = Built::default();
    for (k, &kind) in kinds.iter().enumerate() {
        let name = rec.name.as_deref().map(str::trim).filter(|n| !n.is_empty());
        let target = match kind {
            RecognitionKind::IupacAlone | RecognitionKind::IupacWithSmiles => match name {
                Some(n) => n.to_string(),
                None => {
                    *out.skipped.entry("recognition_iupac_without_name".into()).or_default() += 1;
                    continue;
                }
            },
            RecognitionKind::FormulaAlone | RecognitionKind::FormulaWithSmiles => molecular_formula(&g),
            RecognitionKind::SmilesAlone => canon.clone(),
        };
        let payload = match ctx.payload(&g, &canon, &mut rng, &mut out.blobs) {
            Ok(p) => p,
            Err(e) => return Built::reject(format!("seed {i}: {e}")),
        };
        let repr = if kind.with_smiles() { InputRepr::ModalityPlusSmiles } else { InputRepr::ModalityOnly };
        let t = ctx.template(kind.template_key(), &mut rng);
        out.samples.push(InstructionSample {
            id: ctx.id(TaskFamily::Recognition, i, k),
            task: Task::Recognition(ctx.modality, kind),
            instruction: fill(
                &t,
                &[("mol", &mol_ref(ctx.modality, kind.with_smiles().then_some(canon.as_str()))), ("kind", kind_noun(ctx.modality))],
            ),
            input_repr: repr,
            modalities: vec![payload],
            target,
            source: TaskFamily::Recognition.source(),
            molecules: vec![canon.clone()],
            heavy_atoms: vec![heavy_atom_count(&g)],
        });
    }
    out
}

/// Five sub-tasks per molecule for structural modalities, three (no SMILES
/// in the input) for spectra. Name sub-tasks need `SeedRecord::name`.
pub fn build_recognition_samples(mols: &[SeedRecord], modality: Modality, cfg: &ForgeConfig) -> Built {
    let ctx = Ctx::new(cfg, modality);
    collect(mols.par_iter().enumerate().map(|(i, r)| recognition_one(&ctx, i, r)).collect())
}

fn reaction_image_one(ctx: &Ctx, i: usize, text: &str) -> Built {
    let info = match reaction_info(text, i) {
        Ok(x) => x,
        Err(e) => return Built::reject(e),
    };
    let mut rng = item_rng(ctx.cfg.seed, "reaction_image", i);
    let mut out = Built::default();
    let (bytes, tokens) = match ctx.renderer.reaction_image(&info.reaction, rng.random()) {
        Ok(x) => x,
        Err(e) => return Built::reject(format!("reaction {i}: {e}")),
    };
    let payload = store(&mut out.blobs, Modality::Image, bytes, tokens);
    let t = ctx.template("reaction_image_recognition", &mut rng);
    out.samples.push(InstructionSample {
        id: ctx.id(TaskFamily::ReactionImageRecognition, i, 0),
        task: Task::RecognitionReactionImage,
        instruction: fill(&t, &[("mol", placeholder(Modality::Image))]),
        input_repr: InputRepr::ModalityOnly,
        modalities: vec![payload],
        target: info.reaction.to_smiles(),
        source: TaskFamily::ReactionImageRecognition.source(),
        molecules: info.canon.iter().map(|(_, s)| s.clone()).collect(),
        heavy_atoms: info.heavy,
    });
    out
}

/// Whole-reaction images; the target is the full reaction SMILES.
pub fn build_reaction_image_recognition(reactions: &[String], cfg: &ForgeConfig) -> Built {
    let ctx = Ctx::new(cfg, Modality::Image);
    collect(reactions.par_iter().enumerate().map(|(i, r)| reaction_image_one(&ctx, i, r)).collect())
}

fn spectrum_id_one(ctx: &Ctx, i: usize, text: &str) -> Built {
    let info = match reaction_info(text, i) {
        Ok(x) => x,
        Err(e) => return Built::reject(e),
    };
    let mut rng = item_rng(ctx.cfg.seed, "reaction_spectrum_id", i);
    let (role, k) = choose_mask(&info.reaction, &mut rng);
    let masked = flat_index(&info.reaction, role, k);
    let mut out = Built::default();
    let target_graph = &info.reaction.role(role)[k];
    let payload = match ctx.payload(target_graph, &info.canon[masked].1, &mut rng, &mut out.blobs) {
        Ok(p) => p,
        Err(e) => return Built::reject(format!("reaction {i}: {e}")),
    };
    let shown = reaction_text(&info.reaction, |idx, _, _| {
        if idx == masked {
            "?".into()
        } else {
            info.canon[idx].1.clone()
        }
    });
    let t = ctx.template("reaction_spectrum_id", &mut rng);
    out.samples.push(InstructionSample {
        id: ctx.id(TaskFamily::ReactionSpectrumId, i, 0),
        task: Task::ReactionSpectrumId,
        instruction: fill(
            &t,
            &[
                ("reaction", &shown),
                ("role", role_noun(role)),
                ("kind", kind_noun(ctx.modality)),
                ("spectrum", placeholder(ctx.modality)),
            ],
        ),
        input_repr: InputRepr::ModalityPlusSmiles,
        modalities: vec![payload],
        target: info.canon[masked].1.clone(),
        source: TaskFamily::ReactionSpectrumId.source(),
        molecules: info.canon.iter().map(|(_, s)| s.clone()).collect(),
        heavy_atoms: info.heavy,
    });
    out
}

/// Reaction context as SMILES text plus the spectrum of the masked molecule.
pub fn build_reaction_spectrum_id(reactions: &[String], modality: Modality, cfg: &ForgeConfig) -> Result<Built, ForgeError> {
    if !spectrum_modality(modality) {
        return Err(ForgeError::Config(format!("reaction spectrum identification needs ms2 or ir, not {}", modality.name())));
    }
    let ctx = Ctx::new(cfg, modality);
    Ok(collect(reactions.par_iter().enumerate().map(|(i, r)| spectrum_id_one(&ctx, i, r)).collect()))
}
