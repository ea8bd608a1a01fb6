use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::MixWeights;
use super::sample::{InstructionSample, TaskFamily};

/// Integer quotas summing to `total` in proportion to `weights`
/// (largest-remainder rounding, ties broken by family order).
pub fn largest_remainder(weights: &MixWeights, total: usize) -> BTreeMap<TaskFamily, usize> {
    let sum: f64 = weights.values().sum();
    let mut quotas: BTreeMap<TaskFamily, usize> = BTreeMap::new();
    let mut rema: Vec<(TaskFamily, f64)> = Vec::new();
    for (&t, &w) in weights {
        let exact = total as f64 * w / sum;
        quotas.insert(t, exact.floor() as usize);
        rema.push((t, exact - exact.floor()));
    }
    let assigned: usize = quotas.values().sum();
    rema.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    for (t, _) in rema.into_iter().take(total.saturating_sub(assigned)) {
        *quotas.get_mut(&t).unwrap() += 1;
    }
    quotas
}

/// Largest total whose quotas fit within what each family has available.
pub fn feasible_total(weights: &MixWeights, available: &BTreeMap<TaskFamily, usize>) -> usize {
    let sum: f64 = weights.values().sum();
    let mut total = weights
        .iter()
        .map(|(t, w)| (*available.get(t).unwrap_or(&0) as f64 * sum / w).floor() as usize)
        .min()
        .unwrap_or(0);
    while total > 0 {
        let q = largest_remainder(weights, total);
        if q.iter().all(|(t, n)| n <= available.get(t).unwrap_or(&0)) {
            break;
        }
        total -= 1;
    }
    total
}

/// Keeps a seeded subset of each family matching the weight ratios. Families
/// without a weight are dropped. Relative order is preserved.
pub fn apply_mix(samples: Vec<InstructionSample>, weights: &MixWeights, seed: u64) -> Vec<InstructionSample> {
    let mut by_family: BTreeMap<TaskFamily, Vec<usize>> = BTreeMap::new();
    for (i, s) in samples.iter().enumerate() {
        by_family.entry(s.task.family()).or_default().push(i);
    }
    let available = by_family.iter().map(|(t, v)| (*t, v.len())).collect();
    let quotas = largest_remainder(weights, feasible_total(weights, &available));
    let mut keep = vec![false; samples.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d69_78);
    for (t, idx) in &by_family {
        let q = *quotas.get(t).unwrap_or(&0);
        for j in sample(&mut rng, idx.len(), q.min(idx.len())).into_iter() {
            keep[idx[j]] = true;
        }
    }
    samples.into_iter().zip(keep).filter_map(|(s, k)| k.then_some(s)).collect()
}
