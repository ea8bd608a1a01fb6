use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use chemforge::chem::parse_smiles;
use chemforge::conformer::generate_conformation;
use chemforge::corpus::demo_corpus;
use chemforge::depict::{render_molecule_auto, ImageStyle};
use chemforge::encoders::{project, Modality, ProjectorParams, DEFAULT_DIM_OUT};
use chemforge::evalkit::{evaluate, read_tsv, Metric};
use chemforge::forge::{
    dataset_stats, encode_payload, forge, format_stats_table, load_dataset, read_properties, read_reactions, read_seeds,
    sample_modality, serialize, write_seeds, ForgeConfig, ForgeError, ForgeInputs, InstructionSample,
};
use chemforge::spectra::{simulate_ir, simulate_ms2};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "chemforge", version, about = "Compile multimodal chemistry instruction corpora")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModalityArg {
    Graph,
    Conf,
    Image,
    Ms2,
    Ir,
    All,
}

impl ModalityArg {
    fn expand(self) -> Vec<Modality> {
        match self {
            ModalityArg::Graph => vec![Modality::Graph],
            ModalityArg::Conf => vec![Modality::Conformation],
            ModalityArg::Image => vec![Modality::Image],
            ModalityArg::Ms2 => vec![Modality::Ms2],
            ModalityArg::Ir => vec![Modality::Ir],
            ModalityArg::All => Modality::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SimKind {
    Ms2,
    Ir,
    Conf,
    Image,
}

#[derive(Subcommand)]
enum Command {
    /// Build an instruction dataset from seed files.
    Forge {
        /// Tab-separated seeds: smiles, name, description.
        #[arg(long, env = "CHEMFORGE_SEEDS")]
        seeds: PathBuf,
        /// Reaction SMILES, one per line.
        #[arg(long, env = "CHEMFORGE_REACTIONS")]
        reactions: Option<PathBuf>,
        /// CSV property table with a smiles column.
        #[arg(long, env = "CHEMFORGE_PROPERTIES")]
        properties: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "all", env = "CHEMFORGE_MODALITY")]
        modality: ModalityArg,
        #[arg(long, env = "CHEMFORGE_OUT")]
        out: PathBuf,
        /// TOML overrides for the forge configuration.
        #[arg(long, env = "CHEMFORGE_CONFIG")]
        config: Option<PathBuf>,
        /// Evaluation SMILES, one per line, kept out of the corpus.
        #[arg(long, env = "CHEMFORGE_BLOCKLIST")]
        blocklist: Option<PathBuf>,
        #[arg(long, env = "CHEMFORGE_SEED")]
        seed: Option<u64>,
        /// Worker threads; defaults to the logical CPU count.
        #[arg(long, env = "CHEMFORGE_JOBS")]
        jobs: Option<usize>,
    },
    /// Simulate one modality payload for a molecule.
    Simulate {
        #[arg(long, env = "CHEMFORGE_SMILES")]
        smiles: String,
        #[arg(long, value_enum, env = "CHEMFORGE_KIND")]
        kind: SimKind,
        #[arg(long, env = "CHEMFORGE_OUT")]
        out: PathBuf,
        /// Fragmentation depth for `--kind ms2`.
        #[arg(long, default_value_t = 1, env = "CHEMFORGE_MS2_DEPTH")]
        depth: u32,
        #[arg(long, default_value_t = 0, env = "CHEMFORGE_SEED")]
        seed: u64,
        /// clean_a, clean_b or handwritten.
        #[arg(long, default_value = "clean_a", env = "CHEMFORGE_STYLE")]
        style: String,
    },
    /// Run a dataset sample's payloads through the encoders and report shapes.
    Encode {
        /// A samples.jsonl file; payload paths resolve against its directory.
        #[arg(long, env = "CHEMFORGE_SAMPLE")]
        sample: PathBuf,
        #[arg(long, env = "CHEMFORGE_OUT")]
        out: PathBuf,
        /// Record to encode, by id; defaults to the first one.
        #[arg(long)]
        id: Option<String>,
        #[arg(long, default_value_t = 0, env = "CHEMFORGE_SEED")]
        seed: u64,
    },
    /// Score predictions against gold answers.
    Eval {
        /// Two-column TSV: id, prediction.
        #[arg(long, env = "CHEMFORGE_PRED")]
        pred: PathBuf,
        /// Two-column TSV: id, gold answer.
        #[arg(long, env = "CHEMFORGE_GOLD")]
        gold: PathBuf,
        /// Comma-separated: exact_match, validity, bleu2, bleu4, meteor_lite, auc_roc, all.
        #[arg(long, default_value = "all", env = "CHEMFORGE_METRICS")]
        metrics: String,
        /// Write the JSON report here instead of stdout.
        #[arg(long, env = "CHEMFORGE_OUT")]
        out: Option<PathBuf>,
    },
    /// Print the heavy-atom statistics table of a forged dataset.
    Stats {
        #[arg(long, env = "CHEMFORGE_DATASET")]
        dataset: PathBuf,
    },
    /// Write a synthetic seed set usable by `forge`.
    DemoCorpus {
        #[arg(long, env = "CHEMFORGE_OUT")]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        molecules: usize,
        #[arg(long, default_value_t = 0, env = "CHEMFORGE_SEED")]
        seed: u64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Data(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

impl From<ForgeError> for CliError {
    fn from(e: ForgeError) -> Self {
        match e {
            ForgeError::Config(m) => CliError::Usage(format!("config: {m}")),
            other => CliError::Data(other.to_string()),
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn open_input(path: &Path, flag: &str) -> Result<File> {
    File::open(path).map_err(|e| CliError::Usage(format!("{flag} {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(v).expect("report serializes");
    bytes.push(b'\n');
    write_file(path, &bytes)
}

#[derive(Serialize)]
struct RunReport<'a> {
    tool_version: &'a str,
    command: &'a str,
    seed: u64,
    config_hash: String,
    templates_version: u32,
    jobs: usize,
    inputs: Vec<String>,
    manifest_hash: String,
    samples: usize,
    elapsed_seconds: f64,
    samples_per_second: f64,
    reports: &'a std::collections::BTreeMap<Modality, chemforge::forge::ModalityReport>,
}

#[allow(clippy::too_many_arguments)]
fn run_forge(
    seeds: &Path,
    reactions: Option<&Path>,
    properties: Option<&Path>,
    modality: ModalityArg,
    out: &Path,
    config: Option<&Path>,
    blocklist: Option<&Path>,
    seed: Option<u64>,
    jobs: Option<usize>,
) -> Result<()> {
    let mut cfg = match config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Usage(format!("--config {}: {e}", p.display())))?;
            ForgeConfig::from_toml(&text)?
        }
        None => ForgeConfig::default(),
    };
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(p) = blocklist {
        let text = fs::read_to_string(p).map_err(|e| CliError::Usage(format!("--blocklist {}: {e}", p.display())))?;
        let mut list: Vec<String> = cfg.eval_blocklist.iter().cloned().collect();
        list.extend(text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(String::from));
        cfg.set_blocklist(&list)?;
    }
    let mut inputs = ForgeInputs {
        seeds: read_seeds(open_input(seeds, "--seeds")?)?,
        ..Default::default()
    };
    let mut input_names = vec![seeds.display().to_string()];
    if let Some(p) = reactions {
        inputs.reactions = read_reactions(open_input(p, "--reactions")?)?;
        input_names.push(p.display().to_string());
    }
    if let Some(p) = properties {
        inputs.properties = read_properties(open_input(p, "--properties")?)?;
        input_names.push(p.display().to_string());
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = jobs {
        if k == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    let modalities = modality.expand();

    let start = Instant::now();
    let result = pool.install(|| forge(&inputs, &modalities, &cfg))?;
    let manifest = serialize(&result.samples, &result.blobs, out, cfg.seed, &cfg.hash())?;
    let elapsed = start.elapsed().as_secs_f64();

    for (m, rep) in &result.reports {
        for d in &rep.diagnostics {
            eprintln!("warning: {d}");
        }
        let subset: Vec<InstructionSample> =
            result.samples.iter().filter(|s| sample_modality(s) == Some(*m)).cloned().collect();
        println!("{}", m.name());
        print!("{}", format_stats_table(&dataset_stats(&subset), *m));
        println!();
    }
    let report = RunReport {
        tool_version: VERSION,
        command: "forge",
        seed: cfg.seed,
        config_hash: cfg.hash(),
        templates_version: cfg.templates.version,
        jobs: pool.current_num_threads(),
        inputs: input_names,
        manifest_hash: manifest.hash(),
        samples: manifest.total,
        elapsed_seconds: elapsed,
        samples_per_second: manifest.total as f64 / elapsed.max(1e-9),
        reports: &result.reports,
    };
    write_json(&out.join("run_report.json"), &report)?;
    println!(
        "wrote {} samples and {} blobs to {} in {:.2}s",
        manifest.total,
        manifest.blobs,
        out.display(),
        elapsed
    );
    Ok(())
}

fn run_simulate(smiles: &str, kind: SimKind, out: &Path, depth: u32, seed: u64, style: &str) -> Result<()> {
    let m = parse_smiles(smiles).map_err(|e| CliError::Data(format!("--smiles {smiles:?}: {e}")))?;
    match kind {
        SimKind::Ms2 => write_json(out, &simulate_ms2(&m, depth).to_json()),
        SimKind::Ir => write_json(out, &simulate_ir(&m).to_json()),
        SimKind::Conf => {
            let c = generate_conformation(&m, seed).map_err(|e| CliError::Data(e.to_string()))?;
            write_json(out, &c.to_json())
        }
        SimKind::Image => {
            let style = ImageStyle::from_name(style)
                .ok_or_else(|| CliError::Usage(format!("--style {style:?}: expected clean_a, clean_b or handwritten")))?;
            let img = render_molecule_auto(&m, style, 336, seed).map_err(|e| CliError::Data(e.to_string()))?;
            write_file(out, &img.to_png().map_err(|e| CliError::Data(e.to_string()))?)
        }
    }
}

#[derive(Serialize)]
struct ShapeRow {
    modality: Modality,
    path: String,
    declared_tokens: usize,
    tokens: usize,
    dim: usize,
    projected_dim: usize,
}

#[derive(Serialize)]
struct EncodeReport {
    tool_version: &'static str,
    sample_id: String,
    seed: u64,
    sequences: Vec<ShapeRow>,
}

fn run_encode(sample: &Path, out: &Path, id: Option<&str>, seed: u64) -> Result<()> {
    let text = fs::read_to_string(sample).map_err(|e| CliError::Usage(format!("--sample {}: {e}", sample.display())))?;
    let mut chosen = None;
    for (n, line) in text.lines().filter(|l| !l.trim().is_empty()).enumerate() {
        let s: InstructionSample =
            serde_json::from_str(line).map_err(|e| CliError::Data(format!("{} line {}: {e}", sample.display(), n + 1)))?;
        if id.is_none_or(|want| want == s.id) {
            chosen = Some(s);
            break;
        }
    }
    let s = chosen.ok_or_else(|| CliError::Data(format!("no matching sample in {}", sample.display())))?;
    let root = sample.parent().unwrap_or(Path::new("."));
    let mut rows = Vec::new();
    for r in &s.modalities {
        let p = root.join(&r.path);
        let bytes = fs::read(&p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
        let seq = encode_payload(r.kind, &bytes, seed)?;
        let params = ProjectorParams::for_modality(r.kind, DEFAULT_DIM_OUT, seed);
        let projected = project(&seq.embeddings, &params).map_err(|e| CliError::Data(e.to_string()))?;
        rows.push(ShapeRow {
            modality: r.kind,
            path: r.path.clone(),
            declared_tokens: r.tokens,
            tokens: seq.tokens(),
            dim: seq.dim(),
            projected_dim: projected.ncols(),
        });
    }
    for row in &rows {
        println!("{}\tT={}\tdim={}", row.modality.name(), row.tokens, row.dim);
    }
    let mismatched = rows.iter().any(|r| r.tokens != r.declared_tokens);
    write_json(out, &EncodeReport { tool_version: VERSION, sample_id: s.id, seed, sequences: rows })?;
    if mismatched {
        return Err(CliError::Data("encoded token counts differ from the record".into()));
    }
    Ok(())
}

fn run_eval(pred: &Path, gold: &Path, metrics: &str, out: Option<&Path>) -> Result<()> {
    let metrics = Metric::parse_list(metrics).map_err(|e| CliError::Usage(format!("--metrics: {e}")))?;
    if metrics.is_empty() {
        return Err(CliError::Usage("--metrics: no metrics named".into()));
    }
    let p = read_tsv(open_input(pred, "--pred")?).map_err(|e| CliError::Data(format!("--pred: {e}")))?;
    let g = read_tsv(open_input(gold, "--gold")?).map_err(|e| CliError::Data(format!("--gold: {e}")))?;
    let report = evaluate(&p, &g, &metrics).map_err(|e| CliError::Data(e.to_string()))?;
    match out {
        Some(path) => {
            write_json(path, &report)?;
            for (m, v) in &report.metrics {
                println!("{}\t{v:.6}", m.name());
            }
        }
        None => println!("{}", serde_json::to_string_pretty(&report).expect("report serializes")),
    }
    Ok(())
}

fn run_stats(dataset: &Path) -> Result<()> {
    if !dataset.is_dir() {
        return Err(CliError::Usage(format!("--dataset {}: not a directory", dataset.display())));
    }
    let (samples, manifest) = load_dataset(dataset)?;
    for m in &manifest.modalities {
        let subset: Vec<InstructionSample> = samples.iter().filter(|s| sample_modality(s) == Some(*m)).cloned().collect();
        println!("{}", m.name());
        print!("{}", format_stats_table(&dataset_stats(&subset), *m));
        println!();
    }
    println!("total {} samples, config {}", manifest.total, &manifest.config_hash[..12]);
    Ok(())
}

fn run_demo_corpus(out: &Path, molecules: usize, seed: u64) -> Result<()> {
    let c = demo_corpus(seed, molecules);
    fs::create_dir_all(out).map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
    let io = |e: std::io::Error| CliError::Data(e.to_string());
    let mut w = BufWriter::new(File::create(out.join("seeds.tsv")).map_err(io)?);
    write_seeds(&c.seeds, &mut w).map_err(io)?;
    w.flush().map_err(io)?;
    let mut rx = c.reactions.join("\n");
    rx.push('\n');
    write_file(&out.join("reactions.txt"), rx.as_bytes())?;
    let mut props = String::from("smiles,demo_activity\n");
    for (s, l) in &c.properties {
        props.push_str(&format!("{s},{l}\n"));
    }
    write_file(&out.join("properties.csv"), props.as_bytes())?;
    println!(
        "wrote {} seeds, {} reactions, {} property rows to {}",
        c.seeds.len(),
        c.reactions.len(),
        c.properties.len(),
        out.display()
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Forge { seeds, reactions, properties, modality, out, config, blocklist, seed, jobs } => run_forge(
            seeds,
            reactions.as_deref(),
            properties.as_deref(),
            *modality,
            out,
            config.as_deref(),
            blocklist.as_deref(),
            *seed,
            *jobs,
        ),
        Command::Simulate { smiles, kind, out, depth, seed, style } => run_simulate(smiles, *kind, out, *depth, *seed, style),
        Command::Encode { sample, out, id, seed } => run_encode(sample, out, id.as_deref(), *seed),
        Command::Eval { pred, gold, metrics, out } => run_eval(pred, gold, metrics, out.as_deref()),
        Command::Stats { dataset } => run_stats(dataset),
        Command::DemoCorpus { out, molecules, seed } => run_demo_corpus(out, *molecules, *seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Data(msg)) = &e;
            eprintln!("error: {msg}");
            ExitCode::from(e.code())
        }
    }
}
