use std::hint::black_box;

use chemforge::chem::{parse_smiles, write_smiles};
use chemforge::conformer::generate_conformation;
use chemforge::corpus::{demo_corpus, synthetic_smiles};
use chemforge::encoders::Modality;
use chemforge::forge::{forge, ForgeConfig, ForgeInputs};
use chemforge::spectra::{simulate_ir, simulate_ms2};
use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};

fn smiles(c: &mut Criterion) {
    let corpus = synthetic_smiles(1, 200);
    let mut g = c.benchmark_group("smiles");
    g.throughput(Throughput::Elements(corpus.len() as u64));
    g.bench_function("parse", |b| b.iter(|| corpus.iter().map(|s| parse_smiles(black_box(s)).unwrap().atom_count()).sum::<usize>()));
    let graphs: Vec<_> = corpus.iter().map(|s| parse_smiles(s).unwrap()).collect();
    g.bench_function("canonical", |b| b.iter(|| graphs.iter().map(|m| write_smiles(black_box(m)).len()).sum::<usize>()));
    g.finish();
}

fn spectra(c: &mut Criterion) {
    let graphs: Vec<_> = synthetic_smiles(2, 50).iter().map(|s| parse_smiles(s).unwrap()).collect();
    let mut g = c.benchmark_group("spectra");
    g.throughput(Throughput::Elements(graphs.len() as u64));
    g.bench_function("ms2_depth2", |b| b.iter(|| graphs.iter().map(|m| simulate_ms2(m, 2).n_peaks()).sum::<usize>()));
    g.bench_function("ir", |b| b.iter(|| graphs.iter().map(|m| simulate_ir(m).intensity.len()).sum::<usize>()));
    g.finish();
}

fn conformers(c: &mut Criterion) {
    let mols: Vec<_> = ["CCO", "c1ccccc1O", "CC(=O)Nc1ccc(O)cc1", "CN1C=NC2=C1C(=O)N(C(=O)N2C)C"]
        .iter()
        .map(|s| parse_smiles(s).unwrap())
        .collect();
    c.bench_function("conformer/embed_relax", |b| {
        b.iter(|| mols.iter().map(|m| generate_conformation(m, 7).unwrap().energy).sum::<f64>())
    });
}

fn forging(c: &mut Criterion) {
    let inputs: ForgeInputs = demo_corpus(3, 500).into();
    let cfg = ForgeConfig::default();
    let n = forge(&inputs, &[Modality::Graph], &cfg).unwrap().samples.len();
    let mut g = c.benchmark_group("forge");
    g.sample_size(10);
    g.throughput(Throughput::Elements(n as u64));
    g.bench_function("graph_500_seeds", |b| {
        b.iter_batched(|| inputs.clone(), |i| forge(&i, &[Modality::Graph], &cfg).unwrap().samples.len(), BatchSize::LargeInput)
    });
    g.finish();
}

criterion_group!(benches, smiles, spectra, conformers, forging);
criterion_main!(benches);
