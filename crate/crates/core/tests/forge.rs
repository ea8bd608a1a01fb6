use std::collections::BTreeSet;

use chemforge::chem::{canonical_smiles, parse_reaction, parse_smiles, ReactionRole};
use chemforge::corpus::{demo_corpus, SeedRecord};
use chemforge::encoders::Modality;
use chemforge::forge::*;
use chemforge::spectra::{simulate_ir, simulate_ms2};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(s: &str, d: &str) -> Vec<(String, String)> {
    vec![(s.to_string(), d.to_string())]
}

#[test]
fn description_variants_and_repetition() {
    let cfg = ForgeConfig::default();
    let low = build_description_samples(&pair("CCO", "An alcohol. Used widely."), Modality::Graph, &cfg);
    assert_eq!(low.samples.len(), 2);
    let reprs: BTreeSet<_> = low.samples.iter().map(|s| format!("{:?}", s.input_repr)).collect();
    assert_eq!(reprs.len(), 2);
    let high = build_description_samples(&pair("CCO", "An alcohol. It is volatile. It is used widely."), Modality::Graph, &cfg);
    assert_eq!(high.samples.len(), 4);
    let empty = build_description_samples(&pair("CCO", "   "), Modality::Graph, &cfg);
    assert!(empty.samples.is_empty());
    assert_eq!(empty.diagnostics.len(), 1);
    assert!(empty.diagnostics[0].contains("empty description"));
    let bad = build_description_samples(&pair("C1CC", "Bad."), Modality::Graph, &cfg);
    assert!(bad.samples.is_empty() && bad.diagnostics.len() == 1);
}

#[test]
fn repetition_doubles_qualifying_pairs_exactly() {
    let corpus = demo_corpus(4, 300);
    let pairs: Vec<(String, String)> =
        corpus.seeds.iter().map(|s| (s.smiles.clone(), s.description.clone().unwrap())).collect();
    let qualifying = pairs.iter().filter(|(_, d)| sentence_count(d) >= 3).count();
    assert!(qualifying > 0 && qualifying < pairs.len());
    let b = build_description_samples(&pairs, Modality::Graph, &ForgeConfig::default());
    assert_eq!(b.samples.len(), 2 * (pairs.len() - qualifying) + 4 * qualifying);
}

#[test]
fn mask_roles_and_reproducibility() {
    let r = parse_reaction("CCO.CC(=O)O>>CC(=O)OCC.O").unwrap();
    let mut seen = BTreeSet::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..200 {
        seen.insert(choose_mask(&r, &mut rng).0);
    }
    assert_eq!(seen, [ReactionRole::Reactant, ReactionRole::Product].into_iter().collect());
    let rx = vec!["CCO.CC(=O)O>CCN(CC)CC>CC(=O)OCC.O".to_string(); 30];
    let cfg = ForgeConfig::default();
    let a = build_reaction_completion(&rx, Modality::Graph, &cfg);
    let b = build_reaction_completion(&rx, Modality::Graph, &cfg);
    assert_eq!(a, b);
    let targets: BTreeSet<_> = a.samples.iter().map(|s| s.target.clone()).collect();
    assert!(targets.len() > 1);
}

#[test]
fn masked_targets_round_trip_to_the_original_molecule() {
    let corpus = demo_corpus(2, 200);
    let b = build_reaction_completion(&corpus.reactions, Modality::Graph, &ForgeConfig::default());
    assert_eq!(b.samples.len(), corpus.reactions.len());
    for (s, text) in b.samples.iter().zip(&corpus.reactions) {
        let r = parse_reaction(text).unwrap();
        let target = parse_smiles(&s.target).unwrap();
        assert!(r.molecules().any(|(_, m)| m.is_isomorphic_to(&target)), "{}", s.target);
        let shown = r.molecules().count() - 1;
        assert_eq!(s.modalities.len(), shown);
        assert_eq!(s.instruction.matches("<graph>").count(), shown);
        assert!(s.instruction.contains('?'));
    }
}

fn named(n: usize, with_names: bool) -> Vec<SeedRecord> {
    demo_corpus(0, n)
        .seeds
        .into_iter()
        .map(|mut s| {
            if !with_names {
                s.name = None;
            }
            s
        })
        .collect()
}

#[test]
fn recognition_sub_task_counts() {
    let cfg = ForgeConfig::default();
    let with = build_recognition_samples(&named(10, true), Modality::Graph, &cfg);
    assert_eq!(with.samples.len(), 50);
    let without = build_recognition_samples(&named(10, false), Modality::Graph, &cfg);
    assert_eq!(without.samples.len(), 30);
    assert_eq!(without.skipped["recognition_iupac_without_name"], 20);
    for s in &with.samples {
        if let Task::Recognition(_, RecognitionKind::SmilesAlone) = s.task {
            assert_eq!(s.input_repr, InputRepr::ModalityOnly);
            assert!(!s.instruction.contains(&s.target));
        }
    }
}

#[test]
fn spectrum_recognition_never_shows_smiles() {
    let cfg = ForgeConfig::default();
    for m in [Modality::Ms2, Modality::Ir] {
        let b = build_recognition_samples(&named(12, true), m, &cfg);
        assert_eq!(b.samples.len(), 36);
        for s in &b.samples {
            assert_eq!(s.input_repr, InputRepr::ModalityOnly);
            assert!(!s.instruction.contains("(SMILES:"));
            assert!(!s.instruction.contains(&s.molecules[0]) || s.molecules[0].len() < 3);
        }
    }
}

#[test]
fn reaction_spectrum_payload_is_the_target_spectrum() {
    let corpus = demo_corpus(3, 80);
    let cfg = ForgeConfig::default();
    for m in [Modality::Ms2, Modality::Ir] {
        let b = build_reaction_spectrum_id(&corpus.reactions, m, &cfg).unwrap();
        assert_eq!(b.samples.len(), corpus.reactions.len());
        for s in &b.samples {
            assert_eq!(s.input_repr, InputRepr::ModalityPlusSmiles);
            assert_eq!(s.modalities.len(), 1);
            let target = parse_smiles(&s.target).unwrap();
            let expect = match m {
                Modality::Ms2 => simulate_ms2(&target, cfg.ms2_depth).to_binary(),
                _ => simulate_ir(&target).to_binary(),
            };
            assert_eq!(b.blobs[&s.modalities[0].path], expect);
            assert!(s.instruction.contains('?'));
        }
    }
    assert!(build_reaction_spectrum_id(&corpus.reactions, Modality::Graph, &cfg).is_err());
}

#[test]
fn spectrum_property_samples_carry_smiles() {
    let table = PropertyTable {
        label_names: vec!["bbbp".into(), "tox".into()],
        rows: vec![("CCO".into(), vec!["1".into(), "0".into()]), ("c1ccccc1".into(), vec!["0".into(), "".into()])],
    };
    let cfg = ForgeConfig::default();
    let g = build_property_samples(&table, Modality::Graph, &cfg);
    assert_eq!(g.samples.len(), 6);
    let ms = build_property_samples(&table, Modality::Ms2, &cfg);
    assert_eq!(ms.samples.len(), 3);
    assert!(ms.samples.iter().all(|s| s.input_repr == InputRepr::ModalityPlusSmiles && s.instruction.contains("SMILES:")));
    assert_eq!(g.samples[0].target, "Yes");
}

#[test]
fn dedup_rules() {
    let cfg = ForgeConfig::default();
    let rx = vec!["CCO.CC(=O)O>>CC(=O)OCC.O".to_string(), "CN.CC(=O)O>>CC(=O)NC.O".to_string()];
    let b = build_reaction_completion(&rx, Modality::Graph, &cfg);
    let (same, dropped) = dedup_against_eval(b.samples.clone(), &BTreeSet::new());
    assert_eq!((same.len(), dropped), (2, 0));
    let block: BTreeSet<String> = [canonical_smiles("OCC").unwrap()].into_iter().collect();
    let (kept, dropped) = dedup_against_eval(b.samples.clone(), &block);
    assert_eq!((kept.len(), dropped), (1, 1));
    let target = b.samples[1].target.clone();
    let (kept, _) = dedup_against_eval(b.samples, &[target].into_iter().collect());
    assert_eq!(kept.len(), 1);
}

#[test]
fn forged_corpus_has_no_blocklist_hits() {
    let corpus: ForgeInputs = demo_corpus(5, 200).into();
    let mut cfg = ForgeConfig::default();
    let block: Vec<String> = corpus.seeds.iter().step_by(7).map(|s| s.smiles.clone()).collect();
    cfg.set_blocklist(&block).unwrap();
    let out = forge(&corpus, &[Modality::Graph], &cfg).unwrap();
    assert!(out.reports[&Modality::Graph].dedup_dropped > 0);
    for s in &out.samples {
        for m in &s.molecules {
            assert!(!cfg.eval_blocklist.contains(m));
            assert_eq!(&canonical_smiles(m).unwrap(), m);
        }
    }
}

#[test]
fn stats_small_cases() {
    let cfg = ForgeConfig::default();
    let one = build_recognition_samples(&[SeedRecord { smiles: "CCO".into(), name: None, description: None }], Modality::Graph, &cfg);
    let st = dataset_stats(&one.samples[..1]);
    assert_eq!((st[0].max, st[0].min, st[0].mean, st[0].median), (3, 3, 3.0, 3.0));
    let two = build_recognition_samples(
        &[
            SeedRecord { smiles: "C".into(), name: None, description: None },
            SeedRecord { smiles: "CCO".into(), name: None, description: None },
        ],
        Modality::Graph,
        &cfg,
    );
    let picked = vec![two.samples[0].clone(), two.samples[3].clone()];
    let st = dataset_stats(&picked);
    assert_eq!((st[0].mean, st[0].median), (2.0, 2.0));
}

#[test]
fn stats_match_recomputation() {
    let corpus: ForgeInputs = demo_corpus(6, 150).into();
    let out = forge(&corpus, &[Modality::Graph], &ForgeConfig::default()).unwrap();
    let stats = dataset_stats(&out.samples);
    for st in &stats {
        let mut sizes = Vec::new();
        for s in out.samples.iter().filter(|s| s.task.family() == st.task) {
            for m in &s.molecules {
                sizes.push(chemforge::chem::heavy_atom_count(&parse_smiles(m).unwrap()));
            }
        }
        sizes.sort();
        assert_eq!(st.max, *sizes.last().unwrap());
        assert_eq!(st.min, sizes[0]);
        let mean = sizes.iter().sum::<usize>() as f64 / sizes.len() as f64;
        assert!((st.mean - mean).abs() < 1e-12);
    }
    let table = format_stats_table(&stats, Modality::Graph);
    assert!(table.contains("Molecular Graph Recognition"));
    assert!(table.lines().next().unwrap().contains("Median"));
}

#[test]
fn write_read_and_token_rederivation() {
    let corpus: ForgeInputs = demo_corpus(7, 24).into();
    let cfg = ForgeConfig::default();
    let out = forge(&corpus, &Modality::ALL, &cfg).unwrap();
    let modalities: BTreeSet<_> = out.samples.iter().filter_map(sample_modality).collect();
    assert_eq!(modalities.len(), 5);
    let dir = tempfile::tempdir().unwrap();
    let manifest = serialize(&out.samples, &out.blobs, dir.path(), cfg.seed, &cfg.hash()).unwrap();
    assert_eq!(manifest.total, out.samples.len());
    assert_eq!(manifest.counts.values().sum::<usize>(), out.samples.len());
    let (back, m2) = load_dataset(dir.path()).unwrap();
    assert_eq!(back, out.samples);
    assert_eq!(m2, manifest);
    for s in &back {
        for r in &s.modalities {
            let bytes = std::fs::read(dir.path().join(&r.path)).unwrap();
            assert_eq!(payload_tokens(r.kind, &bytes).unwrap(), r.tokens, "{}", s.id);
            assert_eq!(blob_path(&bytes, r.kind), r.path);
        }
    }
    let lines = std::fs::read_to_string(dir.path().join(SAMPLES_FILE)).unwrap();
    let first: serde_json::Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    let keys: Vec<&str> = first.as_object().unwrap().keys().map(String::as_str).collect();
    let mut expect = vec!["id", "task", "instruction", "input_repr", "modalities", "target", "source"];
    expect.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, expect);
}

#[test]
fn reproducible_and_worker_count_independent() {
    let corpus: ForgeInputs = demo_corpus(8, 120).into();
    let cfg = ForgeConfig::default();
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let out = pool.install(|| forge(&corpus, &[Modality::Graph, Modality::Ms2], &cfg).unwrap());
        let dir = tempfile::tempdir().unwrap();
        serialize(&out.samples, &out.blobs, dir.path(), cfg.seed, &cfg.hash()).unwrap().hash()
    };
    let a = run(1);
    assert_eq!(a, run(3));
    let mut other = cfg.clone();
    other.seed = 99;
    let out = forge(&corpus, &[Modality::Graph], &other).unwrap();
    let base = forge(&corpus, &[Modality::Graph], &cfg).unwrap();
    assert_ne!(out.samples, base.samples);
}

#[test]
fn small_mix_tracks_weights() {
    let corpus: ForgeInputs = demo_corpus(9, 600).into();
    let cfg = ForgeConfig::default();
    let out = forge(&corpus, &[Modality::Graph], &cfg).unwrap();
    let kept = &out.reports[&Modality::Graph].kept;
    let total: usize = kept.values().sum();
    let w = default_weights(Modality::Graph);
    let wsum: f64 = w.values().sum();
    for (t, weight) in &w {
        let expect = total as f64 * weight / wsum;
        assert!((kept[t] as f64 - expect).abs() <= 1.0, "{t:?}: {} vs {expect}", kept[t]);
    }
}

#[test]
fn input_readers() {
    let seeds = read_seeds("smiles\tname\tdescription\nCCO\tethanol\tAn alcohol.\n# note\nC\t\t\n".as_bytes()).unwrap();
    assert_eq!(seeds.len(), 2);
    assert_eq!(seeds[0].name.as_deref(), Some("ethanol"));
    assert_eq!(seeds[1].name, None);
    let mut buf = Vec::new();
    write_seeds(&seeds, &mut buf).unwrap();
    assert_eq!(read_seeds(&buf[..]).unwrap(), seeds);
    let rx = read_reactions("CCO>>CC=O rxn1\n\n# c\nC>>C\n".as_bytes()).unwrap();
    assert_eq!(rx, vec!["CCO>>CC=O", "C>>C"]);
    let t = read_properties("id,smiles,bbbp\n1,CCO,1\n2,CC,0\n".as_bytes()).unwrap();
    assert_eq!(t.label_names, vec!["id", "bbbp"]);
    assert_eq!(t.rows[1].0, "CC");
    assert!(read_properties("smiles\nCCO\n".as_bytes()).is_err());
}

#[test]
fn payloads_encode_to_their_token_counts() {
    let corpus: ForgeInputs = demo_corpus(10, 12).into();
    let mut cfg = ForgeConfig::default();
    cfg.apply_mix = false;
    let out = forge(&corpus, &Modality::ALL, &cfg).unwrap();
    let mut seen = BTreeSet::new();
    for s in out.samples.iter().step_by(5) {
        for r in &s.modalities {
            let e = encode_payload(r.kind, &out.blobs[&r.path], 0).unwrap();
            assert_eq!(e.tokens(), r.tokens);
            assert_eq!(e.dim(), r.kind.dim());
            seen.insert(r.kind);
        }
    }
    assert_eq!(seen.len(), 5);
}
