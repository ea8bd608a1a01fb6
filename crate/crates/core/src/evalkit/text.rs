use std::collections::HashMap;

/// Lowercases and splits on whitespace and ASCII punctuation.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| c.is_whitespace() || c.is_ascii_punctuation())
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

fn ngram_counts(tokens: &[String], k: usize) -> HashMap<&[String], usize> {
    let mut out = HashMap::new();
    if tokens.len() >= k {
        for w in tokens.windows(k) {
            *out.entry(w).or_insert(0) += 1;
        }
    }
    out
}

/// Clipped matches and candidate n-gram total for order `k`.
fn clipped(cand: &[String], refs: &[Vec<String>], k: usize) -> (usize, usize) {
    let c = ngram_counts(cand, k);
    let mut max_ref: HashMap<&[String], usize> = HashMap::new();
    for r in refs {
        for (g, n) in ngram_counts(r, k) {
            let e = max_ref.entry(g).or_insert(0);
            *e = (*e).max(n);
        }
    }
    let matched = c.iter().map(|(g, &n)| n.min(*max_ref.get(g).unwrap_or(&0))).sum();
    (matched, cand.len().saturating_sub(k - 1))
}

/// Reference length closest to `c`, shorter on ties.
fn closest_ref_len(c: usize, refs: &[Vec<String>]) -> usize {
    refs.iter()
        .map(Vec::len)
        .min_by_key(|&r| (r.abs_diff(c), r))
        .unwrap_or(0)
}

/// Orders with no candidate n-grams are left out of the geometric mean
/// (effective order), so texts shorter than `n` can still score.
fn combine(matched: &[usize], totals: &[usize], c: usize, r: usize) -> f64 {
    let orders: Vec<(usize, usize)> = matched.iter().zip(totals).filter(|(_, &t)| t > 0).map(|(&m, &t)| (m, t)).collect();
    if c == 0 || orders.iter().any(|&(m, _)| m == 0) {
        return 0.0;
    }
    let n = orders.len() as f64;
    let log_p: f64 = orders.iter().map(|&(m, t)| (m as f64 / t as f64).ln()).sum::<f64>() / n;
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * log_p.exp()
}

/// Sentence BLEU with uniform weights over orders 1..=n and no smoothing.
pub fn bleu_n(candidate: &str, references: &[&str], n: usize) -> f64 {
    assert!(n >= 1, "bleu order must be at least 1");
    let cand = tokenize(candidate);
    let refs: Vec<Vec<String>> = references.iter().map(|r| tokenize(r)).collect();
    let (matched, totals): (Vec<usize>, Vec<usize>) = (1..=n).map(|k| clipped(&cand, &refs, k)).unzip();
    combine(&matched, &totals, cand.len(), closest_ref_len(cand.len(), &refs))
}

/// Corpus BLEU: clipped counts and lengths are summed before combining.
pub fn corpus_bleu(candidates: &[&str], references: &[Vec<&str>], n: usize) -> f64 {
    assert!(n >= 1, "bleu order must be at least 1");
    let mut matched = vec![0; n];
    let mut totals = vec![0; n];
    let (mut c, mut r) = (0, 0);
    for (cand, refs) in candidates.iter().zip(references) {
        let cand = tokenize(cand);
        let refs: Vec<Vec<String>> = refs.iter().map(|s| tokenize(s)).collect();
        for k in 1..=n {
            let (m, t) = clipped(&cand, &refs, k);
            matched[k - 1] += m;
            totals[k - 1] += t;
        }
        c += cand.len();
        r += closest_ref_len(cand.len(), &refs);
    }
    combine(&matched, &totals, c, r)
}

pub const METEOR_ALPHA: f64 = 0.9;
pub const METEOR_GAMMA: f64 = 0.5;
pub const METEOR_BETA: f64 = 3.0;

/// Exact-unigram alignment: each candidate token takes the first unused
/// reference position after the previous match, else the first unused one.
fn align(cand: &[String], reference: &[String]) -> Vec<(usize, usize)> {
    let mut used = vec![false; reference.len()];
    let mut pairs = Vec::new();
    let mut last: Option<usize> = None;
    for (i, t) in cand.iter().enumerate() {
        let free = |j: &usize| !used[*j] && &reference[*j] == t;
        let after = last.map_or(0, |l| l + 1);
        let pick = (after..reference.len()).find(free).or_else(|| (0..reference.len()).find(free));
        if let Some(j) = pick {
            used[j] = true;
            pairs.push((i, j));
            last = Some(j);
        }
    }
    pairs
}

/// Exact-match METEOR without stemming or synonymy.
///
/// Fmean = P·R / (α·P + (1−α)·R). The fragmentation term is
/// (chunks − 1)/(m − 1), so a contiguous in-order match has no penalty and
/// identical texts score 1. The penalty is γ·frag^β.
pub fn meteor_lite(candidate: &str, reference: &str) -> f64 {
    let cand = tokenize(candidate);
    let reference = tokenize(reference);
    let pairs = align(&cand, &reference);
    let m = pairs.len();
    if m == 0 {
        return 0.0;
    }
    let p = m as f64 / cand.len() as f64;
    let r = m as f64 / reference.len() as f64;
    let fmean = p * r / (METEOR_ALPHA * p + (1.0 - METEOR_ALPHA) * r);
    let chunks = 1 + pairs.windows(2).filter(|w| !(w[1].0 == w[0].0 + 1 && w[1].1 == w[0].1 + 1)).count();
    let frag = if m > 1 { (chunks - 1) as f64 / (m - 1) as f64 } else { 0.0 };
    fmean * (1.0 - METEOR_GAMMA * frag.powf(METEOR_BETA))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer() {
        assert_eq!(tokenize("The molecule, an ACID."), vec!["the", "molecule", "an", "acid"]);
        assert_eq!(tokenize("2-methyl"), vec!["2", "methyl"]);
    }

    #[test]
    fn alignment_prefers_in_order() {
        let t = |s: &str| tokenize(s);
        let p = align(&t("a b a"), &t("a a b"));
        assert_eq!(p, vec![(0, 0), (1, 2), (2, 1)]);
    }
}
