//! Command-line front end. Each subcommand reads files, calls one library
//! operation and writes files.
//!
//! Exit codes: 0 success, 2 usage error, 1 data error.

mod logger;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::evalkit::{self, EvalError, PoolMode as LigandPool, ScoredExample};
use crate::gridgen::{
    sample_transform, voxelize, write_grid_dump, GridConfig, GridDump, GridError, Occupancy,
    Transform,
};
use crate::maskviz::{self, Fragments, MaskError, Scorer};
use crate::moldata::{assign_types, load_structure, AtomTypeScheme, MolError, Molecule, RadiusTable};
use crate::tensornet::{
    build_model, load_checkpoint, save_checkpoint, ModelOptions, NetError, PoolMode,
};
use crate::training::{
    make_folds, parse_index, predict, trace_to_text, train_with, FileStore, SolverConfig,
    TrainError, TrainSet,
};

const FORMATS: &str = "\
File formats:
  structure   text: '<element> <x> <y> <z> receptor <residue> [flags]' or
              '<element> <x> <y> <z> ligand [frag=a,b] [flags]' per line, optional
              'molecule <name>' header; flags aromatic|donor|acceptor|hydrophobe.
              Files ending in .gninatypes hold 16-byte records: x y z as f32 and
              an i32 smina34 channel, little-endian.
  index       'label rmsd target cluster source receptor ligand [vina_rank [ligand_id]]'
              label 1|0|- (derive from rmsd), rmsd or '-', source CSAR|DUDE; paths
              relative to the index file.
  scores      'target ligand pose_rank rmsd label score [baseline]', '-' for absent.
  solver cfg  'key = value' lines: batch_size base_lr momentum lr_policy power gamma
              weight_decay dropout_ratio iterations seed max_translate rotate
              test_interval source_ratio.
  fragments   'id: i j k' per line, zero-based ligand atom indices.
  radii       '<type> = <radius>' per line, smina type names plus Hydrogen and Other.
  grid dump   'VXGRID01', u32 side, u32 channels, f32 resolution, f32 values
              (channel-major, z fastest), little-endian.
  checkpoint  'VXCKPT01', network description, SHA-256 fingerprint, per-layer
              shapes and f32 values, little-endian.";

#[derive(Debug, Parser)]
#[command(name = "voxscore", version, about = "Voxel-grid CNN scoring of protein-ligand poses", after_help = FORMATS)]
pub struct Cli {
    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Voxelize a receptor-ligand complex into a grid dump.
    Gridify(GridifyArgs),
    /// Split an index into cluster-atomic folds.
    Folds(FoldsArgs),
    /// Train a model and write a checkpoint.
    Train(TrainArgs),
    /// Score every pose of an index with a trained model.
    Score(ScoreArgs),
    /// Compute AUC, top-N and correlation metrics from a scores file.
    Evaluate(EvaluateArgs),
    /// List each target's poses by descending score.
    Rank(RankArgs),
    /// Attribute a complex's score to ligand atoms and receptor residues.
    Visualize(VisualizeArgs),
}

#[derive(Debug, Clone, Args)]
struct GridOpts {
    /// Grid edge length in Å.
    #[arg(long, default_value_t = 24.0)]
    dimension: f64,
    /// Grid spacing in Å.
    #[arg(long, default_value_t = 0.5)]
    resolution: f64,
    /// Density reaches zero at this multiple of the atomic radius.
    #[arg(long, default_value_t = 1.5)]
    radius_multiplier: f64,
    /// gaussian or boolean.
    #[arg(long, default_value = "gaussian")]
    occupancy: Occupancy,
    /// smina34, element18 or binary2.
    #[arg(long, default_value = "smina34")]
    scheme: AtomTypeScheme,
    /// Radius table overriding the defaults.
    #[arg(long)]
    radii: Option<PathBuf>,
}

impl GridOpts {
    fn config(&self) -> Result<GridConfig, CliError> {
        let c = GridConfig {
            dimension: self.dimension,
            resolution: self.resolution,
            radius_multiplier: self.radius_multiplier,
            occupancy: self.occupancy,
            scheme: self.scheme,
        };
        c.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(c)
    }

    fn radius_table(&self) -> Result<RadiusTable, CliError> {
        match &self.radii {
            None => Ok(RadiusTable::default()),
            Some(p) => Ok(RadiusTable::parse(&read_text(p)?)?),
        }
    }

    fn load(&self, path: &Path) -> Result<Molecule, CliError> {
        let raw = load_structure(path)?;
        let (mut m, report) = assign_types(&raw, self.scheme);
        if report.unknown > 0 {
            log::warn!("{}: {} atoms have no {} channel", path.display(), report.unknown, self.scheme.name());
        }
        self.radius_table()?.apply(&mut m);
        Ok(m)
    }
}

#[derive(Debug, Args)]
struct GridifyArgs {
    #[arg(long)]
    receptor: PathBuf,
    #[arg(long)]
    ligand: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Grid center 'x,y,z' in Å (default: ligand centroid).
    #[arg(long, value_parser = parse_point)]
    center: Option<[f64; 3]>,
    /// Apply a random rotation about the center.
    #[arg(long)]
    rotate: bool,
    /// Random translation up to this many Å.
    #[arg(long, default_value_t = 0.0)]
    max_translate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    grid: GridOpts,
}

#[derive(Debug, Args)]
struct FoldsArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Directory receiving fold0.txt, fold1.txt, ...
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Clone, Args)]
struct ModelOpts {
    /// Filters of the first convolution (doubling per block).
    #[arg(long, default_value_t = 32)]
    width: usize,
    /// Number of convolution blocks.
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// max or average.
    #[arg(long, default_value = "max")]
    pool: PoolMode,
    #[arg(long, default_value_t = 2)]
    pool_kernel: usize,
    /// Hidden fully connected layer width.
    #[arg(long)]
    hidden: Option<usize>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    index: PathBuf,
    /// Solver config file (defaults apply to missing keys).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Hold out this fold of a --k split (default: train on everything).
    #[arg(long)]
    fold: Option<usize>,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's iteration count.
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    out: PathBuf,
    /// Loss/AUC trace output.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[command(flatten)]
    grid: GridOpts,
    #[command(flatten)]
    model: ModelOpts,
}

#[derive(Debug, Args)]
struct ScoreArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Scores file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    grid: GridOpts,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    scores: PathBuf,
    /// Ligand pooling: single or multi.
    #[arg(long, default_value = "multi")]
    mode: LigandPool,
    /// Random-ranking trials for the top-N baseline.
    #[arg(long, default_value_t = 2000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// ROC points file.
    #[arg(long)]
    roc: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RankArgs {
    #[arg(long)]
    scores: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VisualizeArgs {
    #[arg(long)]
    receptor: PathBuf,
    #[arg(long)]
    ligand: PathBuf,
    #[arg(long)]
    model: PathBuf,
    /// Fragment file (default: fragment annotations of the ligand).
    #[arg(long)]
    fragments: Option<PathBuf>,
    /// Colored ligand structure.
    #[arg(long)]
    out_ligand: PathBuf,
    /// Colored receptor structure.
    #[arg(long)]
    out_receptor: Option<PathBuf>,
    /// Delta report (default: stdout).
    #[arg(long)]
    report: Option<PathBuf>,
    /// Worker threads (0: all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    #[command(flatten)]
    grid: GridOpts,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Mol(#[from] MolError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Mask(#[from] MaskError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| format!("expected x,y,z, got '{s}'"))?;
    match v.as_slice() {
        [x, y, z] if v.iter().all(|c| c.is_finite()) => Ok([*x, *y, *z]),
        _ => Err(format!("expected x,y,z, got '{s}'")),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(io_err(path))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(io_err(path))
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn index_dir(index: &Path) -> PathBuf {
    index.parent().map(Path::to_path_buf).unwrap_or_default()
}

fn gridify(a: GridifyArgs) -> Result<(), CliError> {
    let config = a.grid.config()?;
    let receptor = a.grid.load(&a.receptor)?;
    let ligand = a.grid.load(&a.ligand)?;
    let center = match a.center {
        Some(c) => c,
        None => ligand
            .centroid()
            .ok_or_else(|| CliError::Usage("ligand is empty; pass --center".into()))?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let transform = if a.rotate || a.max_translate > 0.0 {
        sample_transform(&mut rng, a.max_translate, a.rotate)?
    } else {
        Transform::identity()
    };
    let grid = voxelize(&receptor, &ligand, center, &config, &transform)?;
    write(&a.out, write_grid_dump(&GridDump::from(&grid)))?;
    log::info!("{}×{}³ grid, total density {:.3}", grid.channels(), grid.side(), grid.total());
    Ok(())
}

fn folds(a: FoldsArgs) -> Result<(), CliError> {
    let (index, _) = parse_index(&read_text(&a.index)?)?;
    let folds = make_folds(&index, a.k)?;
    fs::create_dir_all(&a.out).map_err(io_err(&a.out))?;
    for (f, records) in folds.records.iter().enumerate() {
        let path = a.out.join(format!("fold{f}.txt"));
        write(&path, index.subset(records).to_text())?;
        log::info!("fold {f}: {} records, clusters {:?}", records.len(), folds.clusters[f]);
    }
    Ok(())
}

fn train(a: TrainArgs) -> Result<(), CliError> {
    let mut config = match &a.config {
        Some(p) => SolverConfig::parse(&read_text(p)?)?,
        None => SolverConfig::default(),
    };
    if let Some(s) = a.seed {
        config.seed = s;
    }
    if let Some(n) = a.iterations {
        config.iterations = n;
    }
    let grid = a.grid.config()?;
    let (index, report) = parse_index(&read_text(&a.index)?)?;
    if report.omitted > 0 {
        log::info!("{} poses omitted by the rmsd rule", report.omitted);
    }
    let (train_records, test_records) = match a.fold {
        None => ((0..index.len()).collect(), Vec::new()),
        Some(f) => {
            if f >= a.k {
                return Err(CliError::Usage(format!("--fold {f} needs --k above {f}")));
            }
            let folds = make_folds(&index, a.k)?;
            (folds.training(f), folds.records[f].clone())
        }
    };
    let opts = ModelOptions {
        base_width: a.model.width,
        depth: a.model.depth,
        pool_mode: a.model.pool,
        pool_kernel: a.model.pool_kernel,
        hidden: a.model.hidden,
        dropout: config.dropout_ratio,
    };
    let spec = build_model(grid.channels(), grid.side()?, &opts)?;
    let store = FileStore::new(index_dir(&a.index), grid.scheme).with_radii(a.grid.radius_table()?);
    let set = TrainSet {
        index: &index,
        store: &store,
        grid,
        train: train_records,
        test: test_records,
    };
    let outcome = train_with(&set, &spec, &config, &mut |_| {})?;
    write(&a.out, save_checkpoint(&spec, &outcome.weights)?)?;
    if let Some(t) = &a.trace {
        write(t, trace_to_text(&outcome.trace))?;
    }
    Ok(())
}

fn score(a: ScoreArgs) -> Result<(), CliError> {
    let grid = a.grid.config()?;
    let bytes = fs::read(&a.model).map_err(io_err(&a.model))?;
    let (spec, weights) = load_checkpoint(&bytes, None)?;
    if spec.input_channels != grid.channels() || spec.input_side != grid.side()? {
        return Err(CliError::Usage(format!(
            "model expects {}×{}³ input; grid options give {}×{}³",
            spec.input_channels,
            spec.input_side,
            grid.channels(),
            grid.side()?
        )));
    }
    let (index, _) = parse_index(&read_text(&a.index)?)?;
    let store = FileStore::new(index_dir(&a.index), grid.scheme).with_radii(a.grid.radius_table()?);
    let all: Vec<usize> = (0..index.len()).collect();
    let scores = predict(&spec, &weights, &index, &store, &grid, &all)?;
    let examples: Vec<ScoredExample> = index
        .records()
        .iter()
        .zip(scores)
        .map(|(r, score)| ScoredExample {
            score,
            label: r.label,
            target_id: r.target_id.clone(),
            ligand_id: r.ligand_key().to_string(),
            pose_rank: r.vina_rank,
            rmsd: r.rmsd,
            baseline: None,
        })
        .collect();
    emit(a.out.as_deref(), &evalkit::write_scores(&examples))
}

fn evaluate(a: EvaluateArgs) -> Result<(), CliError> {
    let examples = evalkit::parse_scores(&read_text(&a.scores)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let report = evalkit::evaluate(&examples, a.mode, a.trials, &mut rng)?;
    if let (Some(path), Some(roc)) = (&a.roc, &report.roc) {
        write(path, roc.to_text())?;
    }
    emit(a.out.as_deref(), &report.to_text())
}

fn rank(a: RankArgs) -> Result<(), CliError> {
    let examples = evalkit::parse_scores(&read_text(&a.scores)?)?;
    emit(a.out.as_deref(), &evalkit::rank_report(&examples))
}

fn visualize(a: VisualizeArgs) -> Result<(), CliError> {
    let grid = a.grid.config()?;
    let bytes = fs::read(&a.model).map_err(io_err(&a.model))?;
    let (spec, weights) = load_checkpoint(&bytes, None)?;
    let receptor = a.grid.load(&a.receptor)?;
    let ligand = a.grid.load(&a.ligand)?;
    let center = ligand
        .centroid()
        .ok_or(CliError::Mask(MaskError::EmptyLigand))?;
    let fragments = match &a.fragments {
        Some(p) => Fragments::parse(&read_text(p)?)?,
        None => Fragments::from_annotations(&ligand),
    };
    let scorer = Scorer::new(&spec, &weights, grid, center)?;
    let report = maskviz::with_threads(a.threads, || {
        maskviz::mask_report(&scorer, &receptor, &ligand, Some(&fragments))
    })??;
    let (lig_text, clamped) = maskviz::write_colored_structure(&ligand, &report.final_scores())?;
    write(&a.out_ligand, lig_text)?;
    if let Some(p) = &a.out_receptor {
        let (rec_text, c) =
            maskviz::write_colored_structure(&receptor, &report.receptor_atom_scores(&receptor))?;
        write(p, rec_text)?;
        if c + clamped > 0 {
            log::warn!("{} scores clamped to ±{}", c + clamped, maskviz::BFACTOR_LIMIT);
        }
    }
    emit(a.report.as_deref(), &report.to_text())
}

/// Parses `args` (program name first) and runs the subcommand, returning
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    logger::init(cli.verbose);
    let result = match cli.command {
        Command::Gridify(a) => gridify(a),
        Command::Folds(a) => folds(a),
        Command::Train(a) => train(a),
        Command::Score(a) => score(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Rank(a) => rank(a),
        Command::Visualize(a) => visualize(a),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
