use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::sample::{InstructionSample, TaskFamily};
use crate::encoders::Modality;

/// Heavy-atom statistics over every molecule occurrence in a task's samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskStats {
    pub task: TaskFamily,
    pub count: usize,
    pub molecules: usize,
    pub max: usize,
    pub min: usize,
    pub mean: f64,
    pub median: f64,
}

pub fn heavy_atom_summary(sizes: &[usize]) -> Option<(usize, usize, f64, f64)> {
    if sizes.is_empty() {
        return None;
    }
    let mut v = sizes.to_vec();
    v.sort_unstable();
    let n = v.len();
    let mean = v.iter().sum::<usize>() as f64 / n as f64;
    let median = if n % 2 == 1 {
        v[n / 2] as f64
    } else {
        (v[n / 2 - 1] + v[n / 2]) as f64 / 2.0
    };
    Some((v[n - 1], v[0], mean, median))
}

pub fn dataset_stats(samples: &[InstructionSample]) -> Vec<TaskStats> {
    let mut by: BTreeMap<TaskFamily, (usize, Vec<usize>)> = BTreeMap::new();
    for s in samples {
        let e = by.entry(s.task.family()).or_default();
        e.0 += 1;
        e.1.extend(&s.heavy_atoms);
    }
    by.into_iter()
        .map(|(task, (count, sizes))| {
            let (max, min, mean, median) = heavy_atom_summary(&sizes).unwrap_or((0, 0, 0.0, 0.0));
            TaskStats {
                task,
                count,
                molecules: sizes.len(),
                max,
                min,
                mean,
                median,
            }
        })
        .collect()
}

/// Plain-text table: data type, sample count, source, then heavy-atom
/// max/min/average/median.
pub fn format_stats_table(stats: &[TaskStats], modality: Modality) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<38} {:>9} {:<16} {:>5} {:>5} {:>8} {:>7}",
        "Data Type", "# Samples", "Data Source", "Max", "Min", "Average", "Median"
    );
    for s in stats {
        let source = match s.task.source() {
            super::Source::PubchemLike => "PubChem-like",
            super::Source::MoleculenetLike => "MoleculeNet-like",
            super::Source::UsptoLike => "USPTO-like",
        };
        let _ = writeln!(
            out,
            "{:<38} {:>9} {:<16} {:>5} {:>5} {:>8.1} {:>7}",
            s.task.title(modality),
            s.count,
            source,
            s.max,
            s.min,
            s.mean,
            s.median
        );
    }
    out
}

/// Drops samples touching a blocklisted molecule. Returns kept samples and
/// the number dropped.
pub fn dedup_against_eval(samples: Vec<InstructionSample>, blocklist: &BTreeSet<String>) -> (Vec<InstructionSample>, usize) {
    if blocklist.is_empty() {
        return (samples, 0);
    }
    let before = samples.len();
    let kept: Vec<_> = samples
        .into_iter()
        .filter(|s| !s.molecules.iter().any(|m| blocklist.contains(m)) && !blocklist.contains(&s.target))
        .collect();
    let dropped = before - kept.len();
    (kept, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summaries() {
        assert_eq!(heavy_atom_summary(&[3]), Some((3, 3, 3.0, 3.0)));
        assert_eq!(heavy_atom_summary(&[1, 3]), Some((3, 1, 2.0, 2.0)));
        assert_eq!(heavy_atom_summary(&[]), None);
    }
}
