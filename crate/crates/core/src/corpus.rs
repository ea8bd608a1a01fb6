//! Bundled demo corpus and a seeded generator of synthetic seed data
//! (molecules with descriptions, property rows and reactions) for scale runs.

use rand::prelude::*;
use rand::seq::IndexedRandom;
use rand_chacha::ChaCha8Rng;

use crate::chem::{heavy_atom_count, parse_smiles, MolGraph};

/// Real molecules with their IUPAC-style names.
pub const NAMED_MOLECULES: &[(&str, &str)] = &[
    ("C", "methane"),
    ("CC", "ethane"),
    ("CCC", "propane"),
    ("CCCC", "butane"),
    ("CC(C)C", "2-methylpropane"),
    ("CCCCC", "pentane"),
    ("CCCCCC", "hexane"),
    ("CCO", "ethanol"),
    ("CO", "methanol"),
    ("CCCO", "propan-1-ol"),
    ("CC(C)O", "propan-2-ol"),
    ("CC(C)(C)O", "2-methylpropan-2-ol"),
    ("OCCO", "ethane-1,2-diol"),
    ("OCC(O)CO", "propane-1,2,3-triol"),
    ("CC=O", "acetaldehyde"),
    ("C=O", "formaldehyde"),
    ("CC(C)=O", "propan-2-one"),
    ("CCC(C)=O", "butan-2-one"),
    ("CC(=O)O", "acetic acid"),
    ("OC=O", "formic acid"),
    ("CCC(=O)O", "propanoic acid"),
    ("CC(=O)OCC", "ethyl acetate"),
    ("COC", "methoxymethane"),
    ("CCOCC", "ethoxyethane"),
    ("C1CCOC1", "oxolane"),
    ("C1COCCO1", "1,4-dioxane"),
    ("CN", "methanamine"),
    ("CCN", "ethanamine"),
    ("CN(C)C", "N,N-dimethylmethanamine"),
    ("CCN(CC)CC", "N,N-diethylethanamine"),
    ("CC#N", "acetonitrile"),
    ("CN(C)C=O", "N,N-dimethylformamide"),
    ("CS(C)=O", "methylsulfinylmethane"),
    ("NC(N)=O", "urea"),
    ("C=C", "ethene"),
    ("C=CC", "prop-1-ene"),
    ("C#C", "ethyne"),
    ("C=CC=C", "buta-1,3-diene"),
    ("C1CC1", "cyclopropane"),
    ("C1CCC1", "cyclobutane"),
    ("C1CCCC1", "cyclopentane"),
    ("C1CCCCC1", "cyclohexane"),
    ("OC1CCCCC1", "cyclohexanol"),
    ("O=C1CCCCC1", "cyclohexanone"),
    ("C1CCNCC1", "piperidine"),
    ("C1CNCCN1", "piperazine"),
    ("C1COCCN1", "morpholine"),
    ("c1ccccc1", "benzene"),
    ("Cc1ccccc1", "toluene"),
    ("Oc1ccccc1", "phenol"),
    ("Nc1ccccc1", "aniline"),
    ("Clc1ccccc1", "chlorobenzene"),
    ("Brc1ccccc1", "bromobenzene"),
    ("Fc1ccccc1", "fluorobenzene"),
    ("Ic1ccccc1", "iodobenzene"),
    ("OC(=O)c1ccccc1", "benzoic acid"),
    ("O=Cc1ccccc1", "benzaldehyde"),
    ("CC(=O)c1ccccc1", "1-phenylethan-1-one"),
    ("COc1ccccc1", "methoxybenzene"),
    ("N#Cc1ccccc1", "benzonitrile"),
    ("[O-][N+](=O)c1ccccc1", "nitrobenzene"),
    ("Cc1ccc(C)cc1", "1,4-dimethylbenzene"),
    ("Cc1cccc(C)c1", "1,3-dimethylbenzene"),
    ("Cc1ccccc1C", "1,2-dimethylbenzene"),
    ("OCc1ccccc1", "phenylmethanol"),
    ("C=Cc1ccccc1", "ethenylbenzene"),
    ("c1ccc(cc1)-c1ccccc1", "1,1'-biphenyl"),
    ("c1ccc2ccccc2c1", "naphthalene"),
    ("c1ccc2cc3ccccc3cc2c1", "anthracene"),
    ("c1ccc2c(c1)ccc1ccccc12", "phenanthrene"),
    ("c1ccncc1", "pyridine"),
    ("Cc1ccccn1", "2-methylpyridine"),
    ("c1cnccn1", "pyrazine"),
    ("c1cncnc1", "pyrimidine"),
    ("c1ccsc1", "thiophene"),
    ("c1ccoc1", "furan"),
    ("c1cc[nH]c1", "1H-pyrrole"),
    ("c1c[nH]cn1", "1H-imidazole"),
    ("c1ccc2[nH]ccc2c1", "1H-indole"),
    ("c1ccc2ncccc2c1", "quinoline"),
    ("c1ccc2occc2c1", "1-benzofuran"),
    ("c1ccc2sccc2c1", "1-benzothiophene"),
    ("CC(=O)Oc1ccccc1C(=O)O", "2-acetyloxybenzoic acid"),
    ("CC(=O)Nc1ccc(O)cc1", "N-(4-hydroxyphenyl)acetamide"),
    ("CN1C=NC2=C1C(=O)N(C(=O)N2C)C", "1,3,7-trimethylpurine-2,6-dione"),
    ("CC(C)Cc1ccc(C(C)C(=O)O)cc1", "2-[4-(2-methylpropyl)phenyl]propanoic acid"),
    ("OC(=O)CC(O)(CC(=O)O)C(=O)O", "2-hydroxypropane-1,2,3-tricarboxylic acid"),
    ("OCC1OC(O)C(O)C(O)C1O", "6-(hydroxymethyl)oxane-2,3,4,5-tetrol"),
    ("NCC(=O)O", "2-aminoacetic acid"),
    ("CC(N)C(=O)O", "2-aminopropanoic acid"),
    ("C[C@@H](N)C(=O)O", "(2S)-2-aminopropanoic acid"),
    ("NC(CO)C(=O)O", "2-amino-3-hydroxypropanoic acid"),
    ("NC(Cc1ccccc1)C(=O)O", "2-amino-3-phenylpropanoic acid"),
    ("CC(C)C(N)C(=O)O", "2-amino-3-methylbutanoic acid"),
    ("CSCCC(N)C(=O)O", "2-amino-4-methylsulfanylbutanoic acid"),
    ("NC(CS)C(=O)O", "2-amino-3-sulfanylpropanoic acid"),
    ("OC(=O)CCC(=O)O", "butanedioic acid"),
    ("OC(=O)C(=O)O", "oxalic acid"),
    ("OC(=O)/C=C/C(=O)O", "(E)-but-2-enedioic acid"),
    ("C/C=C/C", "(E)-but-2-ene"),
    ("C/C=C\\C", "(Z)-but-2-ene"),
    ("ClC(Cl)Cl", "trichloromethane"),
    ("ClCCl", "dichloromethane"),
    ("FC(F)(F)C(F)(F)F", "hexafluoroethane"),
    ("ClC(Cl)(Cl)Cl", "tetrachloromethane"),
    ("CBr", "bromomethane"),
    ("CI", "iodomethane"),
    ("O", "water"),
    ("N", "ammonia"),
    ("S", "sulfane"),
    ("O=C=O", "carbon dioxide"),
    ("[C-]#[O+]", "carbon monoxide"),
    ("OO", "hydrogen peroxide"),
    ("OS(=O)(=O)O", "sulfuric acid"),
    ("OP(=O)(O)O", "phosphoric acid"),
    ("[NH4+]", "azanium"),
    ("[Na+].[Cl-]", "sodium chloride"),
    ("[K+].[Br-]", "potassium bromide"),
    ("CC(=O)[O-].[Na+]", "sodium acetate"),
    ("C[N+](C)(C)C", "tetramethylazanium"),
    ("[13CH4]", "(13C)methane"),
    ("[13CH3]O", "(13C)methanol"),
    ("CCCCCCCCCCCCCCCC(=O)O", "hexadecanoic acid"),
    ("CCCCCCCC/C=C\\CCCCCCCC(=O)O", "(Z)-octadec-9-enoic acid"),
    ("CC12CCC3C(CCC4=CC(=O)CCC34C)C1CCC2O", "17-hydroxy-10,13-dimethyl-1,2,6,7,8,9,11,12,14,15,16,17-dodecahydrocyclopenta[a]phenanthren-3-one"),
    ("CN1CCCC1c1cccnc1", "3-(1-methylpyrrolidin-2-yl)pyridine"),
    ("COc1cc(C=O)ccc1O", "4-hydroxy-3-methoxybenzaldehyde"),
    ("O=C(O)c1ccccc1O", "2-hydroxybenzoic acid"),
    ("Oc1ccc(O)cc1", "benzene-1,4-diol"),
    ("Oc1cccc(O)c1", "benzene-1,3-diol"),
    ("NC(=O)c1cccnc1", "pyridine-3-carboxamide"),
    ("CC1=CC(=O)C=CC1=O", "2-methylcyclohexa-2,5-diene-1,4-dione"),
    ("O=C1c2ccccc2C(=O)c2ccccc12", "anthracene-9,10-dione"),
    ("C1CC2CCC1C2", "bicyclo[2.2.1]heptane"),
    ("C1CC2CCC1CC2", "bicyclo[2.2.2]octane"),
    ("C12C3C4C1C5C2C3C45", "cubane"),
    ("C1CCC2(CC1)CCCCC2", "spiro[5.5]undecane"),
    ("CC(C)(C)c1ccccc1", "tert-butylbenzene"),
    ("CS(=O)(=O)C", "methylsulfonylmethane"),
    ("CCS", "ethanethiol"),
    ("CSC", "methylsulfanylmethane"),
    ("CCP(CC)CC", "triethylphosphane"),
    ("B(O)(O)c1ccccc1", "phenylboronic acid"),
    ("OB(O)O", "boric acid"),
    ("[Si](C)(C)(C)C", "tetramethylsilane"),
    ("C[Se]C", "methylselanylmethane"),
    ("c1cc[se]c1", "selenophene"),
    ("[Ar]", "argon"),
    ("[He]", "helium"),
];

/// Aromatic ring templates: atom tokens, attachment at token 0; tokens where a
/// further substituent may be placed.
const RING_TEMPLATES: &[(&[&str], &[usize])] = &[
    (&["c", "c", "c", "c", "c", "c"], &[1, 2, 3, 4, 5]),
    (&["c", "c", "c", "n", "c", "c"], &[1, 2, 4, 5]),
    (&["c", "c", "n", "c", "c", "c"], &[1, 3, 4, 5]),
    (&["c", "c", "c", "s", "c"], &[1, 2, 4]),
    (&["c", "c", "c", "o", "c"], &[1, 2, 4]),
    (&["c", "c", "c", "[nH]", "c"], &[1, 2]),
    (&["c", "n", "c", "n", "c", "c"], &[2, 4, 5]),
    (&["C", "C", "C", "C", "C", "C"], &[1, 2, 3, 4, 5]),
    (&["C", "C", "C", "C", "C"], &[1, 2, 3, 4]),
    (&["C", "C", "C", "N", "C", "C"], &[1, 2, 4, 5]),
    (&["C", "C", "O", "C", "C", "N"], &[1, 3, 4]),
    (&["C", "C", "C"], &[1, 2]),
    (&["C", "C", "C", "C", "O"], &[1, 2, 3]),
];

/// Fused systems written with placeholder digits `A` and `B`.
const FUSED_TEMPLATES: &[&str] = &[
    "cAccBccccBcA",
    "cAccBcc[nH]BcA",
    "cAccBncccBcA",
    "cAccBoccBcA",
    "CACCBCCCCBCA",
];

const TERMINALS: &[&str] = &[
    "C", "C", "C", "O", "OC", "N", "N(C)C", "F", "Cl", "Br", "C#N", "C(=O)O", "C(=O)N", "C(=O)C",
    "C(F)(F)F", "S", "SC", "C=C", "C=O", "OC(C)=O", "[N+](=O)[O-]", "C(=O)[O-]", "[NH3+]",
    "S(=O)(=O)N", "I", "[13CH3]",
];

/// A substituent: the first atom (plus its ring digits) is the attachment point.
#[derive(Clone, Debug)]
struct Frag {
    head: String,
    tail: String,
}

impl Frag {
    fn full(&self) -> String {
        format!("{}{}", self.head, self.tail)
    }
}

struct Generator {
    rng: ChaCha8Rng,
    ring_counter: u16,
}

impl Generator {
    fn digit(&mut self) -> String {
        self.ring_counter += 1;
        let d = self.ring_counter;
        if d < 10 {
            d.to_string()
        } else {
            format!("%{d:02}")
        }
    }

    fn fragment(&mut self, budget: &mut i32, depth: u32) -> Frag {
        let roll: f64 = self.rng.random();
        if *budget <= 1 || depth > 5 || roll < 0.25 {
            *budget -= 1;
            let t = *TERMINALS.choose(&mut self.rng).unwrap();
            return split_head(t);
        }
        if roll < 0.55 && self.ring_counter < 40 {
            return self.ring(budget, depth);
        }
        if roll < 0.62 && self.ring_counter < 40 {
            let t = *FUSED_TEMPLATES.choose(&mut self.rng).unwrap();
            let a = self.digit();
            let b = self.digit();
            let s = t.replace('A', &a).replace('B', &b);
            *budget -= 10;
            return split_head(&s);
        }
        // aliphatic chain with optional branches
        let len = self.rng.random_range(1..=4);
        let mut out = String::new();
        for i in 0..len {
            let atom = if i > 0 && self.rng.random_bool(0.15) { "O" } else { "C" };
            if i > 0 && atom == "C" && self.rng.random_bool(0.1) {
                out.push('=');
            }
            out.push_str(atom);
            *budget -= 1;
            if atom == "C" && i + 1 < len && self.rng.random_bool(0.3) && *budget > 2 {
                let sub = self.fragment(budget, depth + 1);
                out.push('(');
                out.push_str(&sub.full());
                out.push(')');
            }
        }
        if *budget > 1 && self.rng.random_bool(0.6) {
            let sub = self.fragment(budget, depth + 1);
            out.push_str(&sub.full());
        }
        split_head(&out)
    }

    fn ring(&mut self, budget: &mut i32, depth: u32) -> Frag {
        let (tokens, slots) = *RING_TEMPLATES.choose(&mut self.rng).unwrap();
        let d = self.digit();
        let n_subs = self.rng.random_range(0..=2usize.min(slots.len()));
        let chosen: Vec<usize> = slots.choose_multiple(&mut self.rng, n_subs).copied().collect();
        *budget -= tokens.len() as i32;
        let mut head = String::new();
        let mut tail = String::new();
        for (i, tok) in tokens.iter().enumerate() {
            let mut piece = tok.to_string();
            if i == 0 || i + 1 == tokens.len() {
                piece.push_str(&d);
            }
            if chosen.contains(&i) && *budget > 0 {
                let sub = self.fragment(budget, depth + 1);
                piece.push('(');
                piece.push_str(&sub.full());
                piece.push(')');
            }
            if i == 0 {
                head = piece;
            } else {
                tail.push_str(&piece);
            }
        }
        Frag { head, tail }
    }

    fn molecule(&mut self, size: i32) -> String {
        self.ring_counter = 0;
        let mut budget = size;
        let mut f = self.fragment(&mut budget, 0);
        while budget > 2 {
            let next = self.fragment(&mut budget, 1);
            f = join(&next, &f);
        }
        f.full()
    }
}

fn split_head(s: &str) -> Frag {
    // head = first atom token plus any ring digits right after it
    let bytes = s.as_bytes();
    let mut i = if bytes[0] == b'[' {
        s.find(']').unwrap() + 1
    } else if s.starts_with("Cl") || s.starts_with("Br") {
        2
    } else {
        1
    };
    while i < bytes.len() {
        if bytes[i].is_ascii_digit() {
            i += 1;
        } else if bytes[i] == b'%' {
            i += 3;
        } else {
            break;
        }
    }
    Frag {
        head: s[..i].to_string(),
        tail: s[i..].to_string(),
    }
}

/// Bonds `y`'s attachment atom to `x`'s attachment atom.
fn join(x: &Frag, y: &Frag) -> Frag {
    Frag {
        head: x.head.clone(),
        tail: format!("({}){}", y.full(), x.tail),
    }
}

/// Seeded generator of valid, parseable SMILES strings of varied size.
pub fn synthetic_smiles(seed: u64, count: usize) -> Vec<String> {
    let mut g = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed),
        ring_counter: 0,
    };
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let size = g.rng.random_range(1..=40);
        let s = g.molecule(size);
        if parse_smiles(&s).is_ok() {
            out.push(s);
        }
    }
    out
}

/// One seed molecule line: SMILES plus optional name and description.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedRecord {
    pub smiles: String,
    pub name: Option<String>,
    pub description: Option<String>,
}

/// Synthetic seed data sufficient for every task family.
#[derive(Debug, Clone, Default)]
pub struct DemoCorpus {
    pub seeds: Vec<SeedRecord>,
    pub reactions: Vec<String>,
    /// (smiles, label) rows of a binary property table.
    pub properties: Vec<(String, u8)>,
}

fn describe(g: &MolGraph, rng: &mut ChaCha8Rng) -> String {
    let n = heavy_atom_count(g);
    let aromatic = g.atoms().iter().any(|a| a.aromatic);
    let rings = g.ring_bonds().iter().filter(|r| **r).count();
    let hetero = g
        .atoms()
        .iter()
        .filter(|a| a.element.atomic_number() != 6)
        .count();
    let charged = g.atoms().iter().any(|a| a.formal_charge != 0);
    let mut sentences = vec![format!(
        "The molecule is {} compound with {n} heavy atoms.",
        if aromatic { "an aromatic" } else { "an aliphatic" }
    )];
    if rings > 0 {
        sentences.push("It contains at least one ring system.".into());
    }
    if hetero > 0 {
        sentences.push(format!("It has {hetero} heteroatoms."));
    }
    if charged {
        sentences.push("It carries formal charges.".into());
    }
    sentences.push("It is a synthetic example used for demonstrations.".into());
    let keep = rng.random_range(1..=sentences.len());
    sentences.truncate(keep);
    sentences.join(" ")
}

const AGENTS: &[&str] = &["CCN(CC)CC", "CN(C)C=O", "ClCCl", "C1CCOC1", "[Pd]", "CC(=O)O", "O=S(Cl)Cl"];

/// Generates a demo corpus of `n_molecules` seeds, `n_molecules / 2`
/// reactions and `n_molecules` property rows.
pub fn demo_corpus(seed: u64, n_molecules: usize) -> DemoCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut seeds: Vec<SeedRecord> = NAMED_MOLECULES
        .iter()
        .take(n_molecules)
        .map(|(s, name)| SeedRecord {
            smiles: s.to_string(),
            name: Some(name.to_string()),
            description: None,
        })
        .collect();
    let synthetic = synthetic_smiles(seed, n_molecules.saturating_sub(seeds.len()));
    seeds.extend(synthetic.into_iter().map(|s| SeedRecord {
        smiles: s,
        name: None,
        description: None,
    }));
    for rec in &mut seeds {
        let g = parse_smiles(&rec.smiles).expect("corpus molecules parse");
        rec.description = Some(describe(&g, &mut rng));
    }

    let properties = seeds
        .iter()
        .map(|rec| {
            let g = parse_smiles(&rec.smiles).unwrap();
            let n_count = g
                .atoms()
                .iter()
                .filter(|a| a.element.atomic_number() == 7)
                .count();
            let noisy = rng.random_bool(0.1);
            let label = ((heavy_atom_count(&g) > 12 && n_count > 0) ^ noisy) as u8;
            (rec.smiles.clone(), label)
        })
        .collect();

    let mut gen = Generator {
        rng: ChaCha8Rng::seed_from_u64(seed.wrapping_add(17)),
        ring_counter: 0,
    };
    let mut reactions = Vec::new();
    while reactions.len() < n_molecules / 2 {
        let kind = gen.rng.random_range(0..4);
        let mut b1 = gen.rng.random_range(1..12);
        gen.ring_counter = 0;
        let r1 = gen.fragment(&mut b1, 1);
        let mut b2 = gen.rng.random_range(1..10);
        let r2 = gen.fragment(&mut b2, 1);
        let (lhs, rhs) = match kind {
            0 => (
                format!("OC(=O){}.O{}", r1.full(), r2.full()),
                format!("O=C({})O{}.O", r1.full(), r2.full()),
            ),
            1 => (
                format!("OC(=O){}.N{}", r1.full(), r2.full()),
                format!("O=C({})N{}", r1.full(), r2.full()),
            ),
            2 => (
                format!("Br{}.O{}", r1.full(), r2.full()),
                format!("O({}){}", r1.full(), r2.full()),
            ),
            _ => (
                format!("Br{}.OB(O){}", r1.full(), r2.full()),
                join(&r1, &r2).full(),
            ),
        };
        let agents = if gen.rng.random_bool(0.5) {
            AGENTS.choose(&mut gen.rng).unwrap().to_string()
        } else {
            String::new()
        };
        let rxn = format!("{lhs}>{agents}>{rhs}");
        if crate::chem::parse_reaction(&rxn).is_ok() {
            reactions.push(rxn);
        }
    }
    DemoCorpus {
        seeds,
        reactions,
        properties,
    }
}
