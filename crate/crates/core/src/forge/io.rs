use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::builders::PropertyTable;
use super::payload::BlobStore;
use super::sample::InstructionSample;
use super::stats::{dataset_stats, TaskStats};
use super::ForgeError;
use crate::corpus::SeedRecord;
use crate::encoders::Modality;

pub const SAMPLES_FILE: &str = "samples.jsonl";
pub const MOLECULES_FILE: &str = "molecules.jsonl";
pub const MANIFEST_FILE: &str = "manifest.json";

fn io_err(path: &Path, e: impl std::fmt::Display) -> ForgeError {
    ForgeError::Io(format!("{}: {e}", path.display()))
}

/// Tab-separated `smiles [name [description]]`; a header row starting with
/// `smiles` and lines starting with `#` are skipped.
pub fn read_seeds(r: impl Read) -> Result<Vec<SeedRecord>, ForgeError> {
    let mut out = Vec::new();
    for (n, line) in BufReader::new(r).lines().enumerate() {
        let line = line.map_err(|e| ForgeError::Io(e.to_string()))?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.starts_with('#') || (n == 0 && line.to_ascii_lowercase().starts_with("smiles")) {
            continue;
        }
        let mut cols = line.splitn(3, '\t');
        let smiles = cols.next().unwrap_or_default().trim().to_string();
        let opt = |s: Option<&str>| s.map(str::trim).filter(|s| !s.is_empty()).map(String::from);
        let name = opt(cols.next());
        let description = opt(cols.next());
        out.push(SeedRecord { smiles, name, description });
    }
    Ok(out)
}

pub fn write_seeds(seeds: &[SeedRecord], mut w: impl Write) -> std::io::Result<()> {
    writeln!(w, "smiles\tname\tdescription")?;
    for s in seeds {
        writeln!(
            w,
            "{}\t{}\t{}",
            s.smiles,
            s.name.as_deref().unwrap_or(""),
            s.description.as_deref().unwrap_or("")
        )?;
    }
    Ok(())
}

/// One reaction SMILES per line; anything after the first whitespace is ignored.
pub fn read_reactions(r: impl Read) -> Result<Vec<String>, ForgeError> {
    let mut out = Vec::new();
    for line in BufReader::new(r).lines() {
        let line = line.map_err(|e| ForgeError::Io(e.to_string()))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(t.split_whitespace().next().unwrap().to_string());
    }
    Ok(out)
}

/// CSV with a header. The `smiles` column (or the first one) holds the
/// molecule; every other column is a label.
pub fn read_properties(r: impl Read) -> Result<PropertyTable, ForgeError> {
    let mut rdr = csv::ReaderBuilder::new().flexible(true).from_reader(r);
    let headers = rdr.headers().map_err(|e| ForgeError::Data(format!("property table header: {e}")))?.clone();
    let smiles_col = headers.iter().position(|h| h.trim().eq_ignore_ascii_case("smiles")).unwrap_or(0);
    let label_cols: Vec<usize> = (0..headers.len()).filter(|&i| i != smiles_col).collect();
    if label_cols.is_empty() {
        return Err(ForgeError::Data("property table needs at least one label column".into()));
    }
    let mut table = PropertyTable {
        label_names: label_cols.iter().map(|&i| headers[i].trim().to_string()).collect(),
        rows: Vec::new(),
    };
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| ForgeError::Data(format!("property row {n}: {e}")))?;
        let smiles = rec.get(smiles_col).unwrap_or("").trim().to_string();
        let labels = label_cols.iter().map(|&i| rec.get(i).unwrap_or("").trim().to_string()).collect();
        table.rows.push((smiles, labels));
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool_version: String,
    pub seed: u64,
    pub config_hash: String,
    pub modalities: Vec<Modality>,
    pub total: usize,
    pub counts: BTreeMap<String, usize>,
    pub stats: BTreeMap<Modality, Vec<TaskStats>>,
    pub blobs: usize,
    pub samples_sha256: String,
    pub molecules_sha256: String,
}

impl Manifest {
    /// Digest of the manifest itself; equal for equal inputs, config and seed.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(serde_json::to_vec(self).expect("manifest serializes")))
    }
}

#[derive(Serialize, Deserialize)]
struct MoleculeRecord {
    id: String,
    molecules: Vec<String>,
    heavy_atoms: Vec<usize>,
}

fn jsonl<T: Serialize>(items: impl Iterator<Item = T>) -> Vec<u8> {
    let mut out = Vec::new();
    for it in items {
        serde_json::to_writer(&mut out, &it).expect("record serializes");
        out.push(b'\n');
    }
    out
}

pub fn sample_modality(s: &InstructionSample) -> Option<Modality> {
    s.modalities.first().map(|m| m.kind)
}

/// Writes records, sidecar, blobs and manifest under `out_dir`.
pub fn serialize(
    samples: &[InstructionSample],
    blobs: &BlobStore,
    out_dir: &Path,
    seed: u64,
    config_hash: &str,
) -> Result<Manifest, ForgeError> {
    fs::create_dir_all(out_dir.join("blobs")).map_err(|e| io_err(out_dir, e))?;
    let records = jsonl(samples.iter());
    let sidecar = jsonl(samples.iter().map(|s| MoleculeRecord {
        id: s.id.clone(),
        molecules: s.molecules.clone(),
        heavy_atoms: s.heavy_atoms.clone(),
    }));
    let write = |name: &str, bytes: &[u8]| {
        let p = out_dir.join(name);
        fs::write(&p, bytes).map_err(|e| io_err(&p, e))
    };
    write(SAMPLES_FILE, &records)?;
    write(MOLECULES_FILE, &sidecar)?;
    for (path, bytes) in blobs {
        write(path, bytes)?;
    }
    let mut modalities: Vec<Modality> = samples.iter().filter_map(sample_modality).collect();
    modalities.sort();
    modalities.dedup();
    let mut counts = BTreeMap::new();
    for s in samples {
        *counts.entry(s.task.to_string()).or_default() += 1;
    }
    let stats = modalities
        .iter()
        .map(|&m| {
            let subset: Vec<InstructionSample> = samples.iter().filter(|s| sample_modality(s) == Some(m)).cloned().collect();
            (m, dataset_stats(&subset))
        })
        .collect();
    let manifest = Manifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        config_hash: config_hash.to_string(),
        modalities,
        total: samples.len(),
        counts,
        stats,
        blobs: blobs.len(),
        samples_sha256: hex::encode(Sha256::digest(&records)),
        molecules_sha256: hex::encode(Sha256::digest(&sidecar)),
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    bytes.push(b'\n');
    write(MANIFEST_FILE, &bytes)?;
    Ok(manifest)
}

/// Reads a dataset back, checking record digests against the manifest.
pub fn load_dataset(dir: &Path) -> Result<(Vec<InstructionSample>, Manifest), ForgeError> {
    let read = |name: &str| {
        let p = dir.join(name);
        fs::read(&p).map_err(|e| io_err(&p, e))
    };
    let manifest: Manifest =
        serde_json::from_slice(&read(MANIFEST_FILE)?).map_err(|e| ForgeError::Data(format!("manifest: {e}")))?;
    let records = read(SAMPLES_FILE)?;
    let sidecar = read(MOLECULES_FILE)?;
    if hex::encode(Sha256::digest(&records)) != manifest.samples_sha256 {
        return Err(ForgeError::Data(format!("{SAMPLES_FILE} does not match the manifest digest")));
    }
    if hex::encode(Sha256::digest(&sidecar)) != manifest.molecules_sha256 {
        return Err(ForgeError::Data(format!("{MOLECULES_FILE} does not match the manifest digest")));
    }
    let mut samples = Vec::new();
    for (n, line) in records.split(|&b| b == b'\n').filter(|l| !l.is_empty()).enumerate() {
        let s: InstructionSample =
            serde_json::from_slice(line).map_err(|e| ForgeError::Data(format!("{SAMPLES_FILE} line {}: {e}", n + 1)))?;
        samples.push(s);
    }
    let mols: Vec<MoleculeRecord> = sidecar
        .split(|&b| b == b'\n')
        .filter(|l| !l.is_empty())
        .map(|l| serde_json::from_slice(l).map_err(|e| ForgeError::Data(format!("{MOLECULES_FILE}: {e}"))))
        .collect::<Result<_, _>>()?;
    if mols.len() != samples.len() {
        return Err(ForgeError::Data("sidecar and sample counts differ".into()));
    }
    for (s, m) in samples.iter_mut().zip(mols) {
        if m.id != s.id {
            return Err(ForgeError::Data(format!("sidecar id {} does not match sample {}", m.id, s.id)));
        }
        s.molecules = m.molecules;
        s.heavy_atoms = m.heavy_atoms;
    }
    if samples.len() != manifest.total {
        return Err(ForgeError::Data("manifest total does not match record count".into()));
    }
    Ok((samples, manifest))
}
