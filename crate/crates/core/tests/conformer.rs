use chemforge::chem::{heavy_atom_count, parse_smiles};
use chemforge::conformer::{
    embed_conformation, generate_conformation, gradient, potential_energy, read_blob, relax,
    Conformation, ForceFieldParams,
};
use chemforge::corpus::synthetic_smiles;
use proptest::prelude::*;

fn small_molecules(count: usize) -> Vec<String> {
    synthetic_smiles(11, 2000)
        .into_iter()
        .filter(|s| (2..=12).contains(&heavy_atom_count(&parse_smiles(s).unwrap())))
        .take(count)
        .collect()
}

/// Central finite-difference gradient of the energy.
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

fn relative_error(a: &[[f64; 3]], b: &[[f64; 3]]) -> f64 {
    let diff: f64 = a
        .iter()
        .zip(b)
        .flat_map(|(x, y)| (0..3).map(move |k| (x[k] - y[k]).powi(2)))
        .sum::<f64>()
        .sqrt();
    let scale: f64 = b.iter().flatten().map(|v| v * v).sum::<f64>().sqrt();
    diff / scale.max(1e-8)
}

fn rotate(c: &Conformation, angle: f64, shift: [f64; 3]) -> Conformation {
    let (s, co) = angle.sin_cos();
    let mut r = c.clone();
    for x in r.coords.iter_mut() {
        // rotation about the (1,1,1)/sqrt3 axis via Rodrigues' formula
        let k = [1.0 / 3f64.sqrt(); 3];
        let kx = [k[1] * x[2] - k[2] * x[1], k[2] * x[0] - k[0] * x[2], k[0] * x[1] - k[1] * x[0]];
        let kd = k[0] * x[0] + k[1] * x[1] + k[2] * x[2];
        *x = [0, 1, 2].map(|i| x[i] * co + kx[i] * s + k[i] * kd * (1.0 - co) + shift[i]);
    }
    r
}

#[test]
fn gradient_matches_finite_differences() {
    let p = ForceFieldParams::default();
    let mols = small_molecules(100);
    assert_eq!(mols.len(), 100);
    for (i, s) in mols.iter().enumerate() {
        let c = embed_conformation(&parse_smiles(s).unwrap(), i as u64);
        let err = relative_error(&gradient(&c, &p), &numeric_gradient(&c, &p, 1e-5));
        assert!(err < 1e-5, "{s}: {err}");
    }
}

#[test]
fn energy_rigid_motion_invariance() {
    let p = ForceFieldParams::default();
    for s in ["CCO", "c1ccccc1O", "CC(C)(C)CC(=O)N"] {
        let c = embed_conformation(&parse_smiles(s).unwrap(), 5);
        let e = potential_energy(&c, &p);
        let moved = rotate(&c, 0.7, [3.0, -2.0, 10.0]);
        assert!((potential_energy(&moved, &p) - e).abs() < 1e-9, "{s}");
    }
}

#[test]
fn propane_angle_relaxes_to_rest() {
    let c = generate_conformation(&parse_smiles("CCC").unwrap(), 3).unwrap();
    let u: Vec<f64> = (0..3).map(|k| c.coords[0][k] - c.coords[1][k]).collect();
    let v: Vec<f64> = (0..3).map(|k| c.coords[2][k] - c.coords[1][k]).collect();
    let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    let nu = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let angle = (dot / (nu * nv)).acos().to_degrees();
    assert!((angle - 109.5).abs() < 1.0, "{angle}");
}

#[test]
fn ethanol_embeddings_respect_topology() {
    let g = parse_smiles("CCO").unwrap();
    for seed in 0..100 {
        let c = embed_conformation(&g, seed);
        let d = |i: usize, j: usize| {
            (0..3).map(|k| (c.coords[i][k] - c.coords[j][k]).powi(2)).sum::<f64>().sqrt()
        };
        let bonded = (d(0, 1) + d(1, 2)) / 2.0;
        assert!(bonded < d(0, 2), "seed {seed}");
    }
}

#[test]
fn relaxation_is_monotone_deterministic_and_sane() {
    for s in small_molecules(30) {
        let g = parse_smiles(&s).unwrap();
        let a = generate_conformation(&g, 8).unwrap();
        assert!(a.energy_trace.windows(2).all(|w| w[1] <= w[0]), "{s}");
        assert!(a.min_distance() > 0.5, "{s}");
        let b = generate_conformation(&g, 8).unwrap();
        assert_eq!(a.to_blob(), b.to_blob());
        assert_eq!(a.coords.len(), heavy_atom_count(&g));
    }
}

#[test]
fn blob_and_json_export() {
    let c = generate_conformation(&parse_smiles("OCC#N").unwrap(), 1).unwrap();
    let (els, xyz) = read_blob(&c.to_blob()).unwrap();
    assert_eq!(els.len(), 4);
    assert_eq!(xyz, c.coords);
    let j = c.to_json();
    assert_eq!(j["elements"][0], "O");
    assert_eq!(j["coords"].as_array().unwrap().len(), 4);
}

#[test]
fn repeated_relax_is_stable() {
    let p = ForceFieldParams::default();
    let c = generate_conformation(&parse_smiles("CC(=O)O").unwrap(), 2).unwrap();
    let again = relax(&c, &p).unwrap();
    assert!(again.energy <= c.energy);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn embedding_deterministic(idx in 0usize..40, seed in any::<u64>()) {
        let mols = small_molecules(40);
        let g = parse_smiles(&mols[idx]).unwrap();
        prop_assert_eq!(embed_conformation(&g, seed).to_blob(), embed_conformation(&g, seed).to_blob());
    }

    #[test]
    fn translation_invariance(idx in 0usize..40, dx in -50.0f64..50.0, dy in -50.0f64..50.0) {
        let p = ForceFieldParams::default();
        let mols = small_molecules(40);
        let c = embed_conformation(&parse_smiles(&mols[idx]).unwrap(), 1);
        let moved = rotate(&c, 0.0, [dx, dy, 1.0]);
        prop_assert!((potential_energy(&moved, &p) - potential_energy(&c, &p)).abs() < 1e-9);
    }
}
