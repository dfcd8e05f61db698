//! Command-line front end. Every subcommand is a thin wrapper over the
//! library: generate/ingest data, embed it, cluster it, and sweep eps.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use embedscan::dataset::{
    self, generate_nested_spheres, generate_planar_toy, load_csv, save_csv, standardize,
    ColumnSpec, CsvOptions, LabeledDataset, PlanarKind, PlanarToyParams, Standardize,
};
use embedscan::density::{dbscan, read_labeling_csv, Assignment, DbscanParams};
use embedscan::error::Error;
use embedscan::graph::{build_fuzzy_graph, NeighborConvention};
use embedscan::layout::{optimize_layout, InitMethod, LayoutConfig};
use embedscan::metrics::{ari, contingency, nmi_max, NoisePolicy};
use embedscan::sweep::{
    eps_sweep_points, fuzzy_only_sweep, replicate, run_pipeline, write_manifest, SweepSpec,
};

#[derive(Parser)]
#[command(name = "embedscan", version, about = "Fuzzy-graph embeddings and density clustering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset and write it as CSV.
    Generate(GenerateArgs),
    /// Embed a CSV dataset and write the coordinates as CSV.
    Embed(EmbedArgs),
    /// Run DBSCAN once over a CSV of coordinates and write the labeling.
    Cluster(ClusterArgs),
    /// DBSCAN eps sweep over raw data, or over a fresh embedding when --k
    /// is given; writes a sweep CSV plus a key=value manifest sidecar.
    Sweep(SweepArgs),
    /// Eps sweep over the fuzzy graph weights only (d = 1 - v), no layout.
    FuzzySweep(FuzzySweepArgs),
    /// Repeat the embed+sweep pipeline R times and write min/mean/max curves.
    Replicate(ReplicateArgs),
    /// Score two labelings against each other (ARI and NMI).
    Score(ScoreArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Setting {
    E100,
    E1000,
    U3,
    U1003,
    Spheres,
    Bridged,
    Overlapping,
    Outliers,
    OutliersNoise,
}

#[derive(Args)]
struct GenerateArgs {
    /// Which synthetic family to sample.
    setting: Setting,
    #[arg(long, default_value_t = 500)]
    points_per_cluster: usize,
    /// Jitter standard deviation for the sphere surfaces.
    #[arg(long, default_value_t = 0.0)]
    jitter: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct InputArgs {
    /// CSV file with one observation per row.
    #[arg(long)]
    input: PathBuf,
    /// Whether the first row is a header.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    has_header: bool,
    /// Label column, by zero-based index or by header name.
    #[arg(long)]
    label_column: Option<String>,
    /// Feature scaling applied after loading.
    #[arg(long, value_enum, default_value_t = ScaleMode::None)]
    standardize: ScaleMode,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleMode {
    Zscore,
    Minmax,
    None,
}

impl From<ScaleMode> for Standardize {
    fn from(m: ScaleMode) -> Self {
        match m {
            ScaleMode::Zscore => Standardize::ZScore,
            ScaleMode::Minmax => Standardize::MinMax,
            ScaleMode::None => Standardize::None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    Spectral,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    NoiseAsCluster,
    Exclude,
}

impl From<PolicyArg> for NoisePolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::NoiseAsCluster => NoisePolicy::NoiseAsCluster,
            PolicyArg::Exclude => NoisePolicy::Exclude,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    CountsSelf,
    OthersOnly,
}

impl From<ConventionArg> for NeighborConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::CountsSelf => NeighborConvention::CountsSelf,
            ConventionArg::OthersOnly => NeighborConvention::OthersOnly,
        }
    }
}

#[derive(Args)]
struct LayoutArgs {
    /// Neighbor count for the fuzzy graph.
    #[arg(long)]
    k: usize,
    /// Embedding dimension.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Layout epochs (default: 200 up to 10^4 points, 500 beyond).
    #[arg(long)]
    epochs: Option<usize>,
    /// Repulsive samples per positive update.
    #[arg(long, default_value_t = 5)]
    neg_samples: usize,
    #[arg(long, value_enum, default_value_t = InitArg::Spectral)]
    init: InitArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Keep the single sequential update stream (bit-reproducible output).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    deterministic: bool,
    /// Whether k counts the point itself (the standard convention).
    #[arg(long, value_enum, default_value_t = ConventionArg::CountsSelf)]
    knn_convention: ConventionArg,
}

impl LayoutArgs {
    fn config(&self) -> LayoutConfig {
        LayoutConfig {
            dim: self.dim,
            n_epochs: self.epochs,
            negative_samples: self.neg_samples,
            init: match self.init {
                InitArg::Spectral => InitMethod::Spectral,
                InitArg::Random => InitMethod::Random,
            },
            seed: self.seed,
            deterministic: self.deterministic,
            ..Default::default()
        }
    }
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    eps_min: f64,
    #[arg(long)]
    eps_max: f64,
    #[arg(long)]
    eps_step: f64,
    #[arg(long, default_value_t = 5)]
    min_pts: usize,
    #[arg(long, value_enum, default_value_t = PolicyArg::NoiseAsCluster)]
    noise_policy: PolicyArg,
    /// Count each point inside its own eps-neighborhood.
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    self_in_neighborhood: bool,
}

impl GridArgs {
    fn spec(&self) -> SweepSpec {
        let mut spec = SweepSpec::new(self.eps_min, self.eps_max, self.eps_step, self.min_pts);
        spec.noise_policy = self.noise_policy.into();
        spec.self_in_neighborhood = self.self_in_neighborhood;
        spec
    }
}

#[derive(Args)]
struct EmbedArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    layout: LayoutArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 5)]
    min_pts: usize,
    #[arg(long, default_value_t = false, action = clap::ArgAction::Set)]
    self_in_neighborhood: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Embed first (fuzzy graph at this k + layout), then sweep the
    /// embedding instead of the raw coordinates.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long, default_value_t = 5)]
    neg_samples: usize,
    #[arg(long, value_enum, default_value_t = InitArg::Spectral)]
    init: InitArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    deterministic: bool,
    #[arg(long, value_enum, default_value_t = ConventionArg::CountsSelf)]
    knn_convention: ConventionArg,
    /// Where to store the intermediate embedding (pipeline mode only).
    #[arg(long)]
    embedding_out: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FuzzySweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = ConventionArg::CountsSelf)]
    knn_convention: ConventionArg,
    /// Also export the fuzzy graph edge list (i,j,v) as CSV.
    #[arg(long)]
    graph_out: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReplicateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    layout: LayoutArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Number of independent layouts (seeds seed..seed+R-1).
    #[arg(long, default_value_t = 25)]
    replications: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    /// Labeling CSV (point,cluster,is_core) or single integer column.
    #[arg(long)]
    truth: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    #[arg(long, value_enum, default_value_t = PolicyArg::NoiseAsCluster)]
    noise_policy: PolicyArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn load_input(args: &InputArgs) -> Result<LabeledDataset, Error> {
    let label_column = args.label_column.as_ref().map(|raw| {
        raw.parse::<usize>()
            .map(ColumnSpec::Index)
            .unwrap_or_else(|_| ColumnSpec::Name(raw.clone()))
    });
    let ds = load_csv(
        &args.input,
        &CsvOptions {
            has_header: args.has_header,
            label_column,
        },
    )?;
    Ok(standardize(&ds, args.standardize.into()))
}

fn require_labels(ds: &LabeledDataset) -> Result<Vec<usize>, Error> {
    ds.labels.clone().ok_or_else(|| {
        Error::InvalidParameter(
            "this command needs ground-truth labels; pass --label-column".into(),
        )
    })
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest");
    out.with_file_name(name)
}

fn common_manifest(ds: &LabeledDataset, spec: &SweepSpec) -> Vec<(String, String)> {
    vec![
        ("dataset".into(), ds.name.clone()),
        ("n_obs".into(), ds.n_obs().to_string()),
        ("n_features".into(), ds.n_features().to_string()),
        ("eps_min".into(), spec.eps_min.to_string()),
        ("eps_max".into(), spec.eps_max.to_string()),
        ("eps_step".into(), spec.eps_step.to_string()),
        ("min_pts".into(), spec.min_pts.to_string()),
        ("noise_policy".into(), format!("{:?}", spec.noise_policy)),
        (
            "self_in_neighborhood".into(),
            spec.self_in_neighborhood.to_string(),
        ),
    ]
}

fn layout_manifest(cfg: &LayoutConfig, k: usize, convention: NeighborConvention, n_obs: usize) -> Vec<(String, String)> {
    vec![
        ("k".into(), k.to_string()),
        ("knn_convention".into(), format!("{convention:?}")),
        ("dim".into(), cfg.dim.to_string()),
        ("a".into(), cfg.a.to_string()),
        ("b".into(), cfg.b.to_string()),
        ("epochs".into(), cfg.epochs_for(n_obs).to_string()),
        ("negative_samples".into(), cfg.negative_samples.to_string()),
        ("initial_lr".into(), cfg.initial_lr.to_string()),
        ("grad_clip".into(), cfg.grad_clip.to_string()),
        ("min_dist".into(), cfg.min_dist.to_string()),
        ("init".into(), format!("{:?}", cfg.init)),
        ("seed".into(), cfg.seed.to_string()),
        ("deterministic".into(), cfg.deterministic.to_string()),
    ]
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Generate(args) => {
            let n = args.points_per_cluster;
            let ds = match args.setting {
                Setting::E100 => dataset::presets::e100(n, args.seed)?,
                Setting::E1000 => dataset::presets::e1000(n, args.seed)?,
                Setting::U3 => dataset::presets::u3(n, args.seed)?,
                Setting::U1003 => dataset::presets::u1003(n, args.seed)?,
                Setting::Spheres => generate_nested_spheres(
                    &[1.0, 2.0, 3.0],
                    &[n, n, n],
                    args.jitter,
                    args.seed,
                )?,
                Setting::Bridged => generate_planar_toy(
                    PlanarKind::Bridged,
                    &PlanarToyParams {
                        points_per_cluster: n,
                        ..Default::default()
                    },
                    args.seed,
                )?,
                Setting::Overlapping => generate_planar_toy(
                    PlanarKind::Overlapping,
                    &PlanarToyParams {
                        points_per_cluster: n,
                        ..Default::default()
                    },
                    args.seed,
                )?,
                Setting::Outliers => generate_planar_toy(
                    PlanarKind::Outliers,
                    &PlanarToyParams {
                        points_per_cluster: n,
                        ..Default::default()
                    },
                    args.seed,
                )?,
                Setting::OutliersNoise => generate_planar_toy(
                    PlanarKind::OutliersWithNoise,
                    &PlanarToyParams {
                        points_per_cluster: n,
                        ..Default::default()
                    },
                    args.seed,
                )?,
            };
            save_csv(&ds, &args.out)?;
            println!(
                "wrote {} ({} x {}) to {}",
                ds.name,
                ds.n_obs(),
                ds.n_features(),
                args.out.display()
            );
        }
        Command::Embed(args) => {
            let ds = load_input(&args.input)?;
            let cfg = args.layout.config();
            let graph = build_fuzzy_graph(&ds.points, args.layout.k, args.layout.knn_convention.into())?;
            let emb = optimize_layout(&graph, &cfg)?;
            emb.write_csv(&args.out, ds.labels.as_deref())?;
            println!(
                "embedded {} points into {}d (loss {:.4}) -> {}",
                emb.n_obs(),
                cfg.dim,
                emb.loss,
                args.out.display()
            );
        }
        Command::Cluster(args) => {
            let ds = load_input(&args.input)?;
            let params = DbscanParams::new(args.eps, args.min_pts)
                .with_self_in_neighborhood(args.self_in_neighborhood);
            let labeling = dbscan(&ds.points, &params)?;
            labeling.write_csv(&args.out)?;
            println!(
                "eps {} min_pts {}: {} clusters, {} noise -> {}",
                args.eps,
                args.min_pts,
                labeling.n_clusters,
                labeling.n_noise(),
                args.out.display()
            );
        }
        Command::Sweep(args) => {
            let ds = load_input(&args.input)?;
            let truth = require_labels(&ds)?;
            let spec = args.grid.spec();
            let mut manifest = common_manifest(&ds, &spec);
            let result = match args.k {
                Some(k) => {
                    let cfg = LayoutConfig {
                        dim: args.dim,
                        n_epochs: args.epochs,
                        negative_samples: args.neg_samples,
                        init: match args.init {
                            InitArg::Spectral => InitMethod::Spectral,
                            InitArg::Random => InitMethod::Random,
                        },
                        seed: args.seed,
                        deterministic: args.deterministic,
                        ..Default::default()
                    };
                    let convention: NeighborConvention = args.knn_convention.into();
                    manifest.push(("input_kind".into(), "embedding".into()));
                    manifest.extend(layout_manifest(&cfg, k, convention, ds.n_obs()));
                    let res = run_pipeline(&ds, k, convention, &cfg, &spec)?;
                    if let Some(p) = &args.embedding_out {
                        res.embedding.write_csv(p, Some(&truth))?;
                    }
                    res.sweep
                }
                None => {
                    manifest.push(("input_kind".into(), "raw".into()));
                    eps_sweep_points(&ds.points, &spec, &truth)?
                }
            };
            result.write_csv(&args.out)?;
            write_manifest(manifest_path(&args.out), &manifest)?;
            println!(
                "max ARI {:.4} at eps {} ({} grid points) -> {}",
                result.max_ari,
                result.eps_opt_ari,
                result.rows.len(),
                args.out.display()
            );
        }
        Command::FuzzySweep(args) => {
            let ds = load_input(&args.input)?;
            require_labels(&ds)?;
            let spec = args.grid.spec();
            let convention: NeighborConvention = args.knn_convention.into();
            if let Some(p) = &args.graph_out {
                let graph = build_fuzzy_graph(&ds.points, args.k, convention)?;
                graph.write_edge_csv(p)?;
            }
            let result = fuzzy_only_sweep(&ds, args.k, convention, &spec)?;
            let mut manifest = common_manifest(&ds, &spec);
            manifest.push(("input_kind".into(), "fuzzy_dissimilarity".into()));
            manifest.push(("k".into(), args.k.to_string()));
            manifest.push(("knn_convention".into(), format!("{convention:?}")));
            result.write_csv(&args.out)?;
            write_manifest(manifest_path(&args.out), &manifest)?;
            println!(
                "max ARI {:.4} at eps {} -> {}",
                result.max_ari,
                result.eps_opt_ari,
                args.out.display()
            );
        }
        Command::Replicate(args) => {
            let ds = load_input(&args.input)?;
            let spec = args.grid.spec();
            let cfg = args.layout.config();
            let convention: NeighborConvention = args.layout.knn_convention.into();
            let summary = replicate(
                &ds,
                args.layout.k,
                convention,
                &cfg,
                &spec,
                args.replications,
                args.layout.seed,
            )?;
            summary.write_csv(&args.out)?;
            let mut manifest = common_manifest(&ds, &spec);
            manifest.push(("input_kind".into(), "embedding".into()));
            manifest.extend(layout_manifest(&cfg, args.layout.k, convention, ds.n_obs()));
            manifest.push(("replications".into(), summary.r.to_string()));
            manifest.push((
                "seeds".into(),
                summary
                    .seeds
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" "),
            ));
            write_manifest(manifest_path(&args.out), &manifest)?;
            println!(
                "{} replications over {} grid points -> {}",
                summary.r,
                summary.rows.len(),
                args.out.display()
            );
        }
        Command::Score(args) => {
            let truth = read_labels_flexible(&args.truth)?;
            let pred = read_labels_flexible(&args.pred)?;
            let table = contingency(&truth, &pred, args.noise_policy.into())?;
            let ari_v = ari(&table)?;
            let nmi_v = nmi_max(&table);
            let nmi_text = nmi_v.map_or("NaN".to_string(), |v| v.to_string());
            let report = format!("ari={ari_v}\nnmi={nmi_text}\n");
            print!("{report}");
            if let Some(p) = &args.out {
                std::fs::write(p, report)?;
            }
        }
    }
    Ok(())
}

/// Accept either a labeling CSV (point,cluster,is_core) or a bare integer
/// column with -1 for noise.
fn read_labels_flexible(path: &Path) -> Result<Vec<Assignment>, Error> {
    let text = std::fs::read_to_string(path)?;
    if text.starts_with("point,") {
        return read_labeling_csv(path);
    }
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<i64>() {
            Ok(id) if id < 0 => out.push(Assignment::Noise),
            Ok(id) => out.push(Assignment::Cluster(id as usize)),
            Err(_) if ln == 0 => continue, // header line
            Err(_) => {
                return Err(Error::CsvParse {
                    row: ln + 1,
                    col: 1,
                    message: format!("'{line}' is not an integer label"),
                })
            }
        }
    }
    if out.is_empty() {
        return Err(Error::CsvFormat(format!(
            "{}: no labels found",
            path.display()
        )));
    }
    Ok(out)
}
