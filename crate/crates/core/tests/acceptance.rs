//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every criterion reports even when an earlier one fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use chemforge::chem::{heavy_atom_count, parse_reaction, parse_smiles, write_smiles, BondOrder, MolGraph};
use chemforge::conformer::{
    embed_conformation, gradient, potential_energy, read_blob, relax, Conformation, ForceFieldParams,
};
use chemforge::corpus::{demo_corpus, synthetic_smiles, NAMED_MOLECULES};
use chemforge::depict::{render_molecule, tile_image, ImageEncoderConfig, ImageStyle, RasterImage};
use chemforge::encoders::*;
use chemforge::evalkit::{auc_roc, bleu_n, evaluate, meteor_lite, Metric};
use chemforge::forge::*;
use chemforge::spectra::{simulate_ir, simulate_ms2, tokenize_ir, untokenize_ir, SpectrumIR, SpectrumMS2};
use ndarray::{Array1, Array2, Axis};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const CORPUS_1000: &str = include_str!("../data/corpus_1000.smi");
const DEMO_SEEDS: &str = include_str!("../data/demo/seeds.tsv");
const DEMO_REACTIONS: &str = include_str!("../data/demo/reactions.txt");
const DEMO_PROPERTIES: &str = include_str!("../data/demo/properties.csv");

fn bundled_corpus() -> Vec<String> {
    CORPUS_1000.lines().filter(|l| !l.trim().is_empty()).map(String::from).collect()
}

fn demo_inputs() -> ForgeInputs {
    ForgeInputs {
        seeds: read_seeds(DEMO_SEEDS.as_bytes()).unwrap(),
        reactions: read_reactions(DEMO_REACTIONS.as_bytes()).unwrap(),
        properties: read_properties(DEMO_PROPERTIES.as_bytes()).unwrap(),
    }
}

const TILE: u32 = 336;
const PATCH: u32 = 14;
const REDUCE: u32 = 8;
const TOKENS_PER_TILE: u32 = (TILE / PATCH) * (TILE / PATCH) / REDUCE;

fn token_budget() -> Outcome {
    let cfg = ForgeConfig::default();
    let out = forge(&demo_inputs(), &Modality::ALL, &cfg).map_err(|e| e.to_string())?;
    ensure(out.samples.len() >= 500, || format!("only {} samples", out.samples.len()))?;
    let mut per_modality: BTreeMap<Modality, usize> = BTreeMap::new();
    let mut refs = 0;
    for s in &out.samples {
        let heavy: Vec<usize> = s.molecules.iter().map(|m| heavy_atom_count(&parse_smiles(m).unwrap())).collect();
        for r in &s.modalities {
            refs += 1;
            *per_modality.entry(r.kind).or_default() += 1;
            let bytes = &out.blobs[&r.path];
            let expect = match r.kind {
                Modality::Graph => {
                    let g: MolGraph = serde_json::from_slice(bytes).unwrap();
                    let n = heavy_atom_count(&g);
                    ensure(s.molecules.contains(&write_smiles(&g)), || format!("{}: graph not among sample molecules", s.id))?;
                    n
                }
                Modality::Conformation => {
                    let (elements, _) = read_blob(bytes).map_err(|e| e.to_string())?;
                    ensure(elements.iter().all(|e| e.atomic_number() != 1), || format!("{}: hydrogen in conformation", s.id))?;
                    ensure(heavy.contains(&elements.len()), || format!("{}: conformation size not a sample molecule", s.id))?;
                    elements.len()
                }
                Modality::Image => {
                    let img = RasterImage::from_png(bytes, ImageStyle::CleanA).map_err(|e| e.to_string())?;
                    (img.width.div_ceil(TILE) * img.height.div_ceil(TILE) * TOKENS_PER_TILE) as usize
                }
                Modality::Ms2 => SpectrumMS2::from_binary(bytes).ok_or("bad ms2 blob")?.peaks.len(),
                Modality::Ir => {
                    let sp = SpectrumIR::from_binary(bytes).ok_or("bad ir blob")?;
                    ensure(sp.intensity.len() == 50 * IrEncoder::WINDOW, || "ir grid length".into())?;
                    tokenize_ir(&sp).map_err(|e| e.to_string())?.len()
                }
            };
            ensure(r.tokens == expect, || format!("{} {}: {} tokens, expected {expect}", s.id, r.kind.name(), r.tokens))?;
            if r.kind == Modality::Ir {
                ensure(r.tokens == 50, || format!("{}: ir tokens {}", s.id, r.tokens))?;
            }
        }
    }
    ensure(per_modality.len() == 5, || format!("modalities present: {per_modality:?}"))?;
    Ok(format!("{} samples, {refs} payload references, {per_modality:?}", out.samples.len()))
}

fn blank(w: u32, h: u32) -> RasterImage {
    let style = ImageStyle::CleanA;
    let bg = style.background();
    RasterImage { width: w, height: h, pixels: bg.iter().copied().cycle().take((w * h * 3) as usize).collect(), style }
}

fn tiling() -> Outcome {
    ensure(TOKENS_PER_TILE == 72, || format!("{TOKENS_PER_TILE}"))?;
    let cfg = ImageEncoderConfig::default();
    ensure(cfg.tokens_per_tile() == 72, || format!("config gives {}", cfg.tokens_per_tile()))?;
    let enc = ImageEncoder::new(0);
    for (w, h, tiles) in [(336, 336, 1u32), (672, 336, 2), (1008, 672, 6), (700, 400, 6)] {
        let img = blank(w, h);
        let ts = tile_image(&img, &cfg).map_err(|e| e.to_string())?;
        ensure(ts.tiles.len() as u32 == tiles, || format!("{w}x{h}: {} tiles", ts.tiles.len()))?;
        ensure(cfg.image_tokens(w, h) == 72 * tiles, || format!("{w}x{h}: {} tokens", cfg.image_tokens(w, h)))?;
        let encoded = enc.encode(&ts).map_err(|e| e.to_string())?;
        let rows: usize = encoded.iter().map(|p| h_reduce(p, REDUCE as usize).unwrap().nrows()).sum();
        ensure(rows == 72 * tiles as usize, || format!("{w}x{h}: {rows} encoded rows"))?;
    }
    Ok("72 per tile; 1, 2 and 6 tiles give 72, 144 and 432 tokens".into())
}

fn smiles_round_trip() -> Outcome {
    let corpus = bundled_corpus();
    ensure(corpus.len() == 1000, || format!("{} molecules bundled", corpus.len()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for s in &corpus {
        let g = parse_smiles(s).map_err(|e| format!("{s}: {e}"))?;
        let canon = write_smiles(&g);
        let back = parse_smiles(&canon).map_err(|e| format!("{s} -> {canon}: {e}"))?;
        ensure(g.is_isomorphic_to(&back), || format!("{s} -> {canon} not isomorphic"))?;
        ensure(write_smiles(&back) == canon, || format!("{canon} not a fixed point"))?;
        for _ in 0..50 {
            let mut p: Vec<usize> = (0..g.atom_count()).collect();
            p.shuffle(&mut rng);
            let c2 = write_smiles(&g.permuted(&p));
            ensure(c2 == canon, || format!("{s}: {c2} != {canon} under permutation"))?;
        }
    }
    Ok("1000 molecules, 50 permutations each".into())
}

fn numeric_gradient(c: &Conformation, p: &ForceFieldParams, h: f64) -> Vec<[f64; 3]> {
    let mut out = vec![[0.0; 3]; c.coords.len()];
    let mut work = c.clone();
    for i in 0..c.coords.len() {
        for k in 0..3 {
            let x0 = c.coords[i][k];
            work.coords[i][k] = x0 + h;
            let ep = potential_energy(&work, p);
            work.coords[i][k] = x0 - h;
            let em = potential_energy(&work, p);
            work.coords[i][k] = x0;
            out[i][k] = (ep - em) / (2.0 * h);
        }
    }
    out
}

fn rigid(c: &Conformation, axis: [f64; 3], angle: f64, shift: [f64; 3]) -> Conformation {
    let n = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
    let k = axis.map(|v| v / n);
    let (s, co) = angle.sin_cos();
    let mut out = c.clone();
    for x in out.coords.iter_mut() {
        let kx = [k[1] * x[2] - k[2] * x[1], k[2] * x[0] - k[0] * x[2], k[0] * x[1] - k[1] * x[0]];
        let kd = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
        *x = [0, 1, 2].map(|i| x[i] * co + kx[i] * s + k[i] * kd * (1.0 - co) + shift[i]);
    }
    out
}

fn conformer_numerics() -> Outcome {
    let p = ForceFieldParams::default();
    let mols: Vec<String> = synthetic_smiles(99, 3000)
        .into_iter()
        .filter(|s| (2..=12).contains(&heavy_atom_count(&parse_smiles(s).unwrap())))
        .take(100)
        .collect();
    ensure(mols.len() == 100, || "not enough small molecules".into())?;
    let mut worst_grad = 0.0f64;
    let mut worst_rigid = 0.0f64;
    for (i, s) in mols.iter().enumerate() {
        let c = embed_conformation(&parse_smiles(s).unwrap(), i as u64);
        let a = gradient(&c, &p);
        let n = numeric_gradient(&c, &p, 1e-5);
        let diff: f64 = a.iter().zip(&n).flat_map(|(x, y)| (0..3).map(move |k| (x[k] - y[k]).powi(2))).sum::<f64>().sqrt();
        let scale: f64 = n.iter().flatten().map(|v| v * v).sum::<f64>().sqrt().max(1e-8);
        worst_grad = worst_grad.max(diff / scale);
        let e0 = potential_energy(&c, &p);
        let e1 = potential_energy(&rigid(&c, [0.2, 1.0, -0.6], 0.9 + i as f64 * 0.01, [3.0, -7.5, 12.0]), &p);
        worst_rigid = worst_rigid.max((e0 - e1).abs());
    }
    ensure(worst_grad < 1e-5, || format!("gradient relative error {worst_grad:e}"))?;
    ensure(worst_rigid < 1e-9, || format!("rigid-motion energy change {worst_rigid:e}"))?;
    let cc = embed_conformation(&parse_smiles("CC").unwrap(), 3);
    let relaxed = relax(&cc, &p).map_err(|e| e.to_string())?;
    let d = (0..3).map(|k| (relaxed.coords[0][k] - relaxed.coords[1][k]).powi(2)).sum::<f64>().sqrt();
    ensure((d - 1.54).abs() <= 0.01, || format!("C-C relaxed to {d}"))?;
    Ok(format!("grad rel err {worst_grad:.1e}, |dE| {worst_rigid:.1e}, C-C {d:.4} A"))
}

const H_MASS: f64 = 1.007_825_032;

/// Enumerates every connected atom subset whose boundary is made of acyclic
/// single bonds, weighting by 0.5 per cut, then bins at 0.1 Da.
fn brute_force_ms2(m: &MolGraph, depth: u32) -> Vec<(f64, f64)> {
    let n = m.atom_count();
    let bonds = m.bonds();
    let reach = |from: usize, skip: Option<usize>, mask: u64| -> u64 {
        let mut seen = 1u64 << from;
        let mut stack = vec![from];
        while let Some(v) = stack.pop() {
            for (ei, e) in bonds.iter().enumerate() {
                if Some(ei) == skip {
                    continue;
                }
                let u = if e.a == v { e.b } else if e.b == v { e.a } else { continue };
                if mask >> u & 1 == 1 && seen >> u & 1 == 0 {
                    seen |= 1 << u;
                    stack.push(u);
                }
            }
        }
        seen
    };
    let all = (1u64 << n) - 1;
    let bridge: Vec<bool> = (0..bonds.len()).map(|bi| reach(bonds[bi].a, Some(bi), all) >> bonds[bi].b & 1 == 0).collect();
    let mass = |mask: u64| -> f64 {
        (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| {
                let a = &m.atoms()[i];
                a.isotope.map_or(a.element.monoisotopic_mass(), |iso| a.element.isotope_mass(iso)) + a.h_count as f64 * H_MASS
            })
            .sum()
    };
    let mut contrib = vec![(mass(all), 1.0)];
    for mask in 1..all {
        if reach(mask.trailing_zeros() as usize, None, mask) != mask {
            continue;
        }
        let cut: Vec<usize> = (0..bonds.len()).filter(|&bi| (mask >> bonds[bi].a & 1) != (mask >> bonds[bi].b & 1)).collect();
        if !cut.is_empty()
            && cut.len() as u32 <= depth
            && cut.iter().all(|&bi| bonds[bi].order == BondOrder::Single && bridge[bi])
        {
            contrib.push((mass(mask), 0.5f64.powi(cut.len() as i32)));
        }
    }
    let mut bins: BTreeMap<i64, (f64, f64)> = BTreeMap::new();
    for (mz, w) in contrib {
        let e = bins.entry((mz / 0.1).floor() as i64).or_insert((0.0, 0.0));
        e.0 += mz * w;
        e.1 += w;
    }
    let top = bins.values().map(|v| v.1).fold(0.0, f64::max);
    bins.values().map(|&(s, w)| (s / w, w / top)).collect()
}

fn ms2_oracle() -> Outcome {
    let mut mols: BTreeSet<String> = bundled_corpus().into_iter().collect();
    mols.extend(NAMED_MOLECULES.iter().map(|(s, _)| s.to_string()));
    mols.extend(read_seeds(DEMO_SEEDS.as_bytes()).unwrap().into_iter().map(|s| s.smiles));
    let small: Vec<MolGraph> =
        mols.iter().map(|s| parse_smiles(s).unwrap()).filter(|g| heavy_atom_count(g) <= 8).collect();
    ensure(small.len() >= 100, || format!("only {} small molecules", small.len()))?;
    let mut worst = 0.0f64;
    for g in &small {
        for depth in 0..=2 {
            let sim = simulate_ms2(g, depth);
            let ora = brute_force_ms2(g, depth);
            ensure(sim.peaks.len() == ora.len(), || format!("{} depth {depth}: {} vs {} peaks", write_smiles(g), sim.peaks.len(), ora.len()))?;
            for (a, b) in sim.peaks.iter().zip(&ora) {
                worst = worst.max((a.0 - b.0).abs());
                ensure(a.1 == b.1, || format!("{}: intensity {} vs {}", write_smiles(g), a.1, b.1))?;
            }
        }
    }
    ensure(worst < 1e-4, || format!("peak position error {worst}"))?;
    Ok(format!("{} molecules at depths 0-2, max position error {worst:.1e} Da", small.len()))
}

fn ir_contract() -> Outcome {
    for s in bundled_corpus() {
        let sp = simulate_ir(&parse_smiles(&s).unwrap());
        let t = tokenize_ir(&sp).map_err(|e| e.to_string())?;
        ensure(t.len() == 50, || format!("{s}: {} tokens", t.len()))?;
        let back = untokenize_ir(&t, sp.grid_start, sp.grid_step);
        ensure(back.intensity.iter().zip(&sp.intensity).all(|(a, b)| a.to_bits() == b.to_bits()), || format!("{s}: reshape not bit-exact"))?;
    }
    let eth = simulate_ir(&parse_smiles("CCO").unwrap());
    let maxima = eth.local_maxima(0.05);
    for (band, centre) in [("O-H", 3350.0), ("C-O", 1050.0)] {
        let i = eth.index_of(centre);
        ensure(maxima.iter().any(|&m| m.abs_diff(i) <= 2), || format!("ethanol {band} maximum missing near index {i}"))?;
    }
    Ok("1000 molecules at 50 tokens, bit-exact reshape, ethanol O-H and C-O bands".into())
}

fn fd_jacobian(x: &Array1<f64>, p: &ProjectorParams, h: f64) -> Array2<f64> {
    let mut j = Array2::zeros((p.dim_out(), x.len()));
    for i in 0..x.len() {
        let (mut a, mut b) = (x.clone(), x.clone());
        a[i] += h;
        b[i] -= h;
        let fa = project(&a.insert_axis(Axis(0)), p).unwrap();
        let fb = project(&b.insert_axis(Axis(0)), p).unwrap();
        for o in 0..p.dim_out() {
            j[[o, i]] = (fa[[0, o]] - fb[[0, o]]) / (2.0 * h);
        }
    }
    j
}

fn encoder_properties() -> Outcome {
    let enc = GraphEncoder::new(31);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_perm = 0.0f64;
    for s in synthetic_smiles(21, 40) {
        let g = parse_smiles(&s).unwrap();
        let base = enc.encode(&g);
        let mut perm: Vec<usize> = (0..g.atom_count()).collect();
        perm.shuffle(&mut rng);
        let pe = enc.encode(&g.permuted(&perm));
        for i in 0..g.atom_count() {
            for k in 0..base.ncols() {
                worst_perm = worst_perm.max((base[[i, k]] - pe[[perm[i], k]]).abs());
            }
        }
    }
    ensure(worst_perm < 1e-6, || format!("graph equivariance error {worst_perm:e}"))?;
    let cenc = ConformationEncoder::new(5);
    let mut worst_rigid = 0.0f64;
    for s in ["CCO", "c1ccccc1O", "CC(=O)Nc1ccc(O)cc1", "CN1C=NC2=C1C(=O)N(C(=O)N2C)C"] {
        let c = chemforge::conformer::generate_conformation(&parse_smiles(s).unwrap(), 2).map_err(|e| e.to_string())?;
        let a = cenc.encode(&c);
        let b = cenc.encode(&rigid(&c, [1.0, -0.4, 0.25], 2.2, [-6.0, 1.5, 30.0]));
        worst_rigid = worst_rigid.max((&a - &b).iter().fold(0.0, |m, v| m.max(v.abs())));
    }
    ensure(worst_rigid < 1e-6, || format!("conformation invariance error {worst_rigid:e}"))?;

    let m = parse_smiles("CC(=O)Oc1ccccc1C(=O)O").unwrap();
    let conf = chemforge::conformer::generate_conformation(&m, 0).map_err(|e| e.to_string())?;
    let img = render_molecule(&m, ImageStyle::CleanA, (336, 336), 0).map_err(|e| e.to_string())?;
    let tiles = tile_image(&img, &ImageEncoderConfig::default()).map_err(|e| e.to_string())?;
    let patches = h_reduce(&encode_image(&tiles, 0).map_err(|e| e.to_string())?[0], 8).map_err(|e| e.to_string())?;
    let ms2 = chemforge::spectra::tokenize_ms2(&simulate_ms2(&m, 2), &chemforge::spectra::MS2Codebook::default());
    let ir = encode_ir(&tokenize_ir(&simulate_ir(&m)).unwrap(), 0).map_err(|e| e.to_string())?;
    let rows = [
        (Modality::Graph, encode_graph(&m, 0).row(4).to_owned()),
        (Modality::Conformation, encode_conformation(&conf, 0).row(1).to_owned()),
        (Modality::Image, patches.row(33).to_owned()),
        (Modality::Ms2, encode_ms2(&ms2, 0).row(1).to_owned()),
        (Modality::Ir, ir.row(20).to_owned()),
    ];
    let mut worst_jac = 0.0f64;
    for (modality, x) in rows {
        let p = ProjectorParams::for_modality(modality, DEFAULT_DIM_OUT, 12);
        let a = project_jacobian(x.view(), &p).map_err(|e| e.to_string())?;
        let n = fd_jacobian(&x, &p, 1e-5);
        let rel = (&a - &n).mapv(|v| v * v).sum().sqrt() / a.mapv(|v| v * v).sum().sqrt();
        ensure(rel < 1e-5, || format!("{} jacobian relative error {rel:e}", modality.name()))?;
        worst_jac = worst_jac.max(rel);
    }
    Ok(format!("equivariance {worst_perm:.1e}, invariance {worst_rigid:.1e}, jacobian {worst_jac:.1e}"))
}

fn sentences(text: &str) -> usize {
    text.split(['.', '!', '?']).filter(|p| !p.trim().is_empty()).count()
}

fn dataset_mix() -> Outcome {
    let corpus = demo_corpus(42, 10_000);
    ensure(corpus.seeds.len() >= 10_000, || "seed count".into())?;
    let inputs: ForgeInputs = corpus.clone().into();
    let cfg = ForgeConfig::default();
    let out = forge(&inputs, &[Modality::Graph], &cfg).map_err(|e| e.to_string())?;
    let kept = &out.reports[&Modality::Graph].kept;
    let total: usize = kept.values().sum();
    let weights = [
        (TaskFamily::Description, 1152.0),
        (TaskFamily::PropertyPrediction, 203.0),
        (TaskFamily::ReactionCompletion, 600.0),
        (TaskFamily::Recognition, 30.0),
    ];
    let wsum: f64 = weights.iter().map(|w| w.1).sum();
    let mut worst = 0.0f64;
    for (t, w) in weights {
        let got = *kept.get(&t).unwrap_or(&0) as f64 / total as f64;
        let rel = (got - w / wsum).abs() / (w / wsum);
        worst = worst.max(rel);
        ensure(rel < 0.01, || format!("{}: share {got:.5} vs {:.5}", t.name(), w / wsum))?;
    }

    let pairs: Vec<(String, String)> =
        corpus.seeds.iter().map(|s| (s.smiles.clone(), s.description.clone().unwrap())).collect();
    let qualifying = pairs.iter().filter(|p| sentences(&p.1) >= 3).count();
    let desc = build_description_samples(&pairs, Modality::Graph, &cfg);
    let expect = 2 * (pairs.len() - qualifying) + 4 * qualifying;
    ensure(desc.samples.len() == expect, || format!("{} description samples, expected {expect}", desc.samples.len()))?;

    let mut block: Vec<String> = corpus.seeds.iter().step_by(10).map(|s| s.smiles.clone()).collect();
    block.extend(corpus.reactions.iter().step_by(10).map(|r| r.split(['.', '>']).next().unwrap().to_string()));
    let mut bcfg = cfg.clone();
    bcfg.set_blocklist(&block).map_err(|e| e.to_string())?;
    let blocked: BTreeSet<String> = block.iter().map(|s| write_smiles(&parse_smiles(s).unwrap())).collect();
    let deduped = forge(&inputs, &[Modality::Graph], &bcfg).map_err(|e| e.to_string())?;
    let mut hits = 0;
    for s in &deduped.samples {
        for m in &s.molecules {
            hits += blocked.contains(&write_smiles(&parse_smiles(m).unwrap())) as usize;
        }
        if let Ok(g) = parse_smiles(&s.target) {
            hits += blocked.contains(&write_smiles(&g)) as usize;
        }
        if let Ok(r) = parse_reaction(&s.target) {
            hits += r.molecules().filter(|(_, g)| blocked.contains(&write_smiles(g))).count();
        }
    }
    ensure(hits == 0, || format!("{hits} blocklist hits"))?;
    let dropped = deduped.reports[&Modality::Graph].dedup_dropped;
    ensure(dropped > 0, || "blocklist dropped nothing".into())?;
    Ok(format!(
        "{total} samples, worst relative share error {:.3}%, {qualifying} pairs repeated, {dropped} dropped by dedup",
        worst * 100.0
    ))
}

fn pairwise_auc(s: &[f64], l: &[bool]) -> f64 {
    let (mut wins, mut n) = (0.0, 0.0);
    for i in 0..s.len() {
        for j in 0..s.len() {
            if l[i] && !l[j] {
                n += 1.0;
                wins += if s[i] > s[j] { 1.0 } else if s[i] == s[j] { 0.5 } else { 0.0 };
            }
        }
    }
    wins / n
}

fn metrics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for k in 0..200 {
        let n = rng.random_range(2..150);
        let mut labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        labels[0] = true;
        labels[1] = false;
        let levels = rng.random_range(2..40);
        let scores: Vec<f64> = (0..n).map(|_| rng.random_range(0..levels) as f64).collect();
        let a = auc_roc(&scores, &labels).map_err(|e| e.to_string())?;
        let b = pairwise_auc(&scores, &labels);
        ensure((a - b).abs() < 1e-12, || format!("instance {k}: {a} vs {b}"))?;
    }
    // p1 = 2/4 ("the", "cat"), p2 = 1/3 ("the cat"), equal lengths.
    let bleu = bleu_n("the cat sat on", &["the cat ran off"], 2);
    let hand = (0.5f64 * (1.0 / 3.0)).sqrt();
    ensure((bleu - hand).abs() < 1e-9, || format!("bleu fixture {bleu} vs {hand}"))?;
    let text = "The molecule is an aromatic acid. It is used as a preservative.";
    ensure(bleu_n(text, &[text], 2) == 1.0 && bleu_n(text, &[text], 4) == 1.0, || "bleu identical".into())?;
    ensure(meteor_lite(text, text) == 1.0, || "meteor identical".into())?;
    let rows = |v: &[&str]| v.iter().enumerate().map(|(i, t)| (i.to_string(), t.to_string())).collect::<Vec<_>>();
    let mols = rows(&["CCO", "c1ccccc1", "CC(=O)O", text]);
    let r = evaluate(&mols[..3], &mols[..3], &[Metric::ExactMatch, Metric::Validity]).map_err(|e| e.to_string())?;
    let t = evaluate(&mols, &mols, &[Metric::Bleu2, Metric::Bleu4, Metric::MeteorLite]).map_err(|e| e.to_string())?;
    let labels = rows(&["1", "0", "0", "1"]);
    let a = evaluate(&labels, &labels, &[Metric::AucRoc]).map_err(|e| e.to_string())?;
    for (m, v) in r.metrics.iter().chain(&t.metrics).chain(&a.metrics) {
        ensure(*v == 1.0, || format!("{} on identical input: {v}", m.name()))?;
    }
    Ok("200 AUC instances match the pairwise oracle; BLEU fixture; identical inputs score 1".into())
}

const THROUGHPUT_TARGET: f64 = 1000.0;

fn throughput() -> Outcome {
    let inputs: ForgeInputs = demo_corpus(5, 5000).into();
    let cfg = ForgeConfig::default();
    let t0 = Instant::now();
    let out = forge(&inputs, &[Modality::Graph], &cfg).map_err(|e| e.to_string())?;
    let t_forge = t0.elapsed();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let t1 = Instant::now();
    serialize(&out.samples, &out.blobs, dir.path(), cfg.seed, &cfg.hash()).map_err(|e| e.to_string())?;
    let t_write = t1.elapsed();
    let total = t_forge + t_write;
    let rate = out.samples.len() as f64 / total.as_secs_f64();
    let summary = format!(
        "{} samples in {:.2}s ({rate:.0}/s; forge {:.2}s, write {:.2}s, {} threads)",
        out.samples.len(),
        total.as_secs_f64(),
        t_forge.as_secs_f64(),
        t_write.as_secs_f64(),
        rayon::current_num_threads()
    );
    if rate >= THROUGHPUT_TARGET {
        return Ok(summary);
    }
    let mut profile = format!("{summary}\ncandidates built:\n");
    for (t, n) in &out.reports[&Modality::Graph].candidates {
        profile.push_str(&format!("  {}: {n}\n", t.name()));
    }
    let path = std::env::temp_dir().join("chemforge_throughput_profile.txt");
    std::fs::write(&path, &profile).map_err(|e| e.to_string())?;
    Err(format!("{summary}; profile written to {}", path.display()))
}

struct Criterion {
    name: &'static str,
    budget: Duration,
    soft: bool,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion { name: "token budget", budget: secs(60), soft: false, run: token_budget },
        Criterion { name: "tiling arithmetic", budget: secs(60), soft: false, run: tiling },
        Criterion { name: "smiles round-trip", budget: secs(30), soft: false, run: smiles_round_trip },
        Criterion { name: "conformer numerics", budget: secs(120), soft: false, run: conformer_numerics },
        Criterion { name: "ms2 oracle equivalence", budget: secs(60), soft: false, run: ms2_oracle },
        Criterion { name: "ir contract", budget: secs(10), soft: false, run: ir_contract },
        Criterion { name: "encoder properties", budget: secs(60), soft: false, run: encoder_properties },
        Criterion { name: "dataset mix", budget: secs(300), soft: false, run: dataset_mix },
        Criterion { name: "metrics", budget: secs(10), soft: false, run: metrics },
        Criterion { name: "throughput (soft)", budget: secs(600), soft: true, run: throughput },
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut hard_failures = 0;
    for c in &criteria {
        if !filter.is_empty() && !filter.iter().any(|f| c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > c.budget => {
                Err(format!("{detail}; took {:.1}s, budget {}s", elapsed.as_secs_f64(), c.budget.as_secs()))
            }
            other => other,
        };
        match result {
            Ok(detail) => println!("PASS  {:<24} {:>7.2}s  {detail}", c.name, elapsed.as_secs_f64()),
            Err(reason) => {
                println!("FAIL  {:<24} {:>7.2}s  {reason}", c.name, elapsed.as_secs_f64());
                if !c.soft {
                    hard_failures += 1;
                }
            }
        }
    }
    if hard_failures > 0 {
        eprintln!("{hard_failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
