//! Synthetic dataset generators and CSV ingestion.
//!
//! Generators are pure functions of their spec and seed: the same inputs
//! always produce byte-identical datasets.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Numeric observation matrix plus optional ground-truth labels.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    /// `n_obs x p` feature matrix; every value is finite.
    pub points: Matrix,
    /// Dense integer class ids, one per observation, when ground truth exists.
    pub labels: Option<Vec<usize>>,
    /// Identifier used in result file naming and manifests.
    pub name: String,
}

impl LabeledDataset {
    pub fn new(points: Matrix, labels: Option<Vec<usize>>, name: impl Into<String>) -> Result<Self> {
        if points.n_rows() == 0 || points.n_cols() == 0 {
            return Err(Error::InvalidParameter(
                "dataset needs at least one observation and one feature".into(),
            ));
        }
        if let Some(bad) = points.values().iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dataset contains non-finite value {bad}"
            )));
        }
        if let Some(l) = &labels {
            if l.len() != points.n_rows() {
                return Err(Error::LengthMismatch {
                    left: l.len(),
                    right: points.n_rows(),
                });
            }
        }
        Ok(LabeledDataset {
            points,
            labels,
            name: name.into(),
        })
    }

    pub fn n_obs(&self) -> usize {
        self.points.n_rows()
    }

    pub fn n_features(&self) -> usize {
        self.points.n_cols()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Mean of one mixture component; a scalar broadcasts to every coordinate.
#[derive(Clone, Debug)]
pub enum Mean {
    Scalar(f64),
    Vector(Vec<f64>),
}

/// One spherical Gaussian component.
#[derive(Clone, Debug)]
pub struct GaussianCluster {
    pub mean: Mean,
    pub sd: f64,
    pub count: usize,
}

/// Parameters of a Gaussian mixture with optional irrelevant features
/// drawn uniformly from [0, 1].
#[derive(Clone, Debug)]
pub struct GaussianMixtureSpec {
    pub dim: usize,
    pub clusters: Vec<GaussianCluster>,
    pub noise_features: usize,
    pub seed: u64,
}

/// Sample a labeled Gaussian mixture. Coordinates are drawn independently
/// per dimension (diagonal covariance), cluster by cluster, point by point,
/// so a fixed seed fixes the whole dataset.
pub fn generate_gaussian_mixture(spec: &GaussianMixtureSpec) -> Result<LabeledDataset> {
    if spec.dim == 0 {
        return Err(Error::InvalidParameter("mixture dim must be positive".into()));
    }
    if spec.clusters.is_empty() {
        return Err(Error::InvalidParameter("mixture needs at least one cluster".into()));
    }
    let total: usize = spec.clusters.iter().map(|c| c.count).sum();
    if total == 0 {
        return Err(Error::InvalidParameter("mixture total count must be >= 1".into()));
    }
    for (ci, c) in spec.clusters.iter().enumerate() {
        if c.sd.is_nan() || c.sd < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "cluster {ci} has negative standard deviation"
            )));
        }
        if let Mean::Vector(v) = &c.mean {
            if v.len() != spec.dim {
                return Err(Error::LengthMismatch {
                    left: v.len(),
                    right: spec.dim,
                });
            }
        }
    }

    let p = spec.dim + spec.noise_features;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut points = Matrix::zeros(total, p);
    let mut labels = Vec::with_capacity(total);
    let mut row = 0;
    for (ci, c) in spec.clusters.iter().enumerate() {
        for _ in 0..c.count {
            let out = points.row_mut(row);
            for (d, slot) in out.iter_mut().enumerate().take(spec.dim) {
                let mu = match &c.mean {
                    Mean::Scalar(m) => *m,
                    Mean::Vector(v) => v[d],
                };
                let z: f64 = rng.sample(StandardNormal);
                *slot = mu + c.sd * z;
            }
            for slot in out.iter_mut().skip(spec.dim) {
                *slot = rng.random::<f64>();
            }
            labels.push(ci);
            row += 1;
        }
    }
    LabeledDataset::new(points, Some(labels), "gaussian-mixture")
}

/// Sample points uniformly on concentric 2-sphere surfaces in 3D, with
/// optional isotropic Gaussian jitter. Uniformity comes from normalizing
/// standard Gaussian vectors.
pub fn generate_nested_spheres(
    radii: &[f64],
    counts: &[usize],
    jitter_sd: f64,
    seed: u64,
) -> Result<LabeledDataset> {
    if radii.len() != counts.len() {
        return Err(Error::LengthMismatch {
            left: radii.len(),
            right: counts.len(),
        });
    }
    if radii.is_empty() {
        return Err(Error::InvalidParameter("need at least one sphere".into()));
    }
    for w in radii.windows(2) {
        if w[1] <= w[0] {
            return Err(Error::InvalidParameter(
                "sphere radii must be strictly increasing".into(),
            ));
        }
    }
    if radii[0] <= 0.0 {
        return Err(Error::InvalidParameter("sphere radii must be positive".into()));
    }
    if jitter_sd < 0.0 {
        return Err(Error::InvalidParameter("jitter_sd must be non-negative".into()));
    }

    let total: usize = counts.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Matrix::zeros(total, 3);
    let mut labels = Vec::with_capacity(total);
    let mut row = 0;
    for (si, (&r, &cnt)) in radii.iter().zip(counts).enumerate() {
        for _ in 0..cnt {
            let mut v = [0.0f64; 3];
            loop {
                for x in &mut v {
                    *x = rng.sample(StandardNormal);
                }
                let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                if norm > 1e-12 {
                    for x in &mut v {
                        *x = *x / norm * r;
                    }
                    break;
                }
            }
            if jitter_sd > 0.0 {
                for x in &mut v {
                    let z: f64 = rng.sample(StandardNormal);
                    *x += jitter_sd * z;
                }
            }
            points.row_mut(row).copy_from_slice(&v);
            labels.push(si);
            row += 1;
        }
    }
    LabeledDataset::new(points, Some(labels), "nested-spheres")
}

/// Kind of 2-D toy dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanarKind {
    /// Two Gaussian blobs joined by a thin line of bridge points.
    Bridged,
    /// Two strongly overlapping unit-covariance Gaussians at (0,2) and (2,2).
    Overlapping,
    /// Two blobs plus exactly two isolated outlier points.
    Outliers,
    /// Two blobs, two outliers, and uniform background noise points.
    OutliersWithNoise,
}

/// Geometry knobs for [`generate_planar_toy`]. The constructions behind the
/// toy figures leave these free, so they are exposed with defaults instead
/// of hard-coded.
#[derive(Clone, Debug)]
pub struct PlanarToyParams {
    pub points_per_cluster: usize,
    /// Blob centers for the bridged/outlier kinds.
    pub centers: [[f64; 2]; 2],
    pub cluster_sd: f64,
    /// Number of bridge points placed on the segment between the centers.
    pub bridge_points: usize,
    pub bridge_jitter_sd: f64,
    /// The two outlier coordinates for the outlier kinds.
    pub outliers: [[f64; 2]; 2],
    /// Uniform background points for `OutliersWithNoise`.
    pub noise_points: usize,
}

impl Default for PlanarToyParams {
    fn default() -> Self {
        PlanarToyParams {
            points_per_cluster: 500,
            centers: [[0.0, 0.0], [10.0, 0.0]],
            cluster_sd: 1.0,
            bridge_points: 20,
            bridge_jitter_sd: 0.1,
            outliers: [[-8.0, 8.0], [-9.0, 7.0]],
            noise_points: 100,
        }
    }
}

/// Generate one of the 2-D toy datasets. Bridge, outlier, and noise points
/// carry their own labels (cluster indices come first).
pub fn generate_planar_toy(
    kind: PlanarKind,
    params: &PlanarToyParams,
    seed: u64,
) -> Result<LabeledDataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows: Vec<[f64; 2]> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();

    let blob = |rng: &mut ChaCha8Rng,
                    rows: &mut Vec<[f64; 2]>,
                    labels: &mut Vec<usize>,
                    center: [f64; 2],
                    sd: f64,
                    label: usize,
                    count: usize| {
        for _ in 0..count {
            let zx: f64 = rng.sample(StandardNormal);
            let zy: f64 = rng.sample(StandardNormal);
            rows.push([center[0] + sd * zx, center[1] + sd * zy]);
            labels.push(label);
        }
    };

    match kind {
        PlanarKind::Overlapping => {
            blob(&mut rng, &mut rows, &mut labels, [0.0, 2.0], 1.0, 0, params.points_per_cluster);
            blob(&mut rng, &mut rows, &mut labels, [2.0, 2.0], 1.0, 1, params.points_per_cluster);
        }
        PlanarKind::Bridged => {
            blob(&mut rng, &mut rows, &mut labels, params.centers[0], params.cluster_sd, 0, params.points_per_cluster);
            blob(&mut rng, &mut rows, &mut labels, params.centers[1], params.cluster_sd, 1, params.points_per_cluster);
            let [c0, c1] = params.centers;
            let m = params.bridge_points;
            for t in 0..m {
                // interior of the segment only, so the bridge does not sit inside the blobs
                let frac = (t as f64 + 1.0) / (m as f64 + 1.0);
                let zx: f64 = rng.sample(StandardNormal);
                let zy: f64 = rng.sample(StandardNormal);
                rows.push([
                    c0[0] + frac * (c1[0] - c0[0]) + params.bridge_jitter_sd * zx,
                    c0[1] + frac * (c1[1] - c0[1]) + params.bridge_jitter_sd * zy,
                ]);
                labels.push(2);
            }
        }
        PlanarKind::Outliers | PlanarKind::OutliersWithNoise => {
            blob(&mut rng, &mut rows, &mut labels, params.centers[0], params.cluster_sd, 0, params.points_per_cluster);
            blob(&mut rng, &mut rows, &mut labels, params.centers[1], params.cluster_sd, 1, params.points_per_cluster);
            for o in params.outliers {
                rows.push(o);
                labels.push(2);
            }
            if kind == PlanarKind::OutliersWithNoise {
                // uniform over the bounding box of everything placed so far
                let (mut lo, mut hi) = ([f64::MAX; 2], [f64::MIN; 2]);
                for r in &rows {
                    for d in 0..2 {
                        lo[d] = lo[d].min(r[d]);
                        hi[d] = hi[d].max(r[d]);
                    }
                }
                for _ in 0..params.noise_points {
                    let x = lo[0] + rng.random::<f64>() * (hi[0] - lo[0]);
                    let y = lo[1] + rng.random::<f64>() * (hi[1] - lo[1]);
                    rows.push([x, y]);
                    labels.push(3);
                }
            }
        }
    }

    let points = Matrix::from_rows(rows.into_iter().map(|r| r.to_vec()).collect())?;
    let name = match kind {
        PlanarKind::Bridged => "bridged",
        PlanarKind::Overlapping => "overlapping",
        PlanarKind::Outliers => "outliers",
        PlanarKind::OutliersWithNoise => "outliers-with-noise",
    };
    LabeledDataset::new(points, Some(labels), name)
}

/// How to find the label column of a CSV file.
#[derive(Clone, Debug)]
pub enum ColumnSpec {
    Index(usize),
    Name(String),
}

/// CSV ingestion options.
#[derive(Clone, Debug, Default)]
pub struct CsvOptions {
    pub has_header: bool,
    pub label_column: Option<ColumnSpec>,
}

/// Load a comma-separated dataset. Feature cells must parse as finite
/// numbers ('.' decimal); the optional label column may hold arbitrary
/// strings, which are mapped to dense integer ids in first-appearance order.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    let ds = parse_csv(&text, options)?;
    Ok(ds.with_name(name))
}

fn parse_csv(text: &str, options: &CsvOptions) -> Result<LabeledDataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty());

    let mut label_idx: Option<usize> = None;
    let mut width: Option<usize> = None;

    if options.has_header {
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::CsvFormat("file has no rows".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        width = Some(cols.len());
        if let Some(spec) = &options.label_column {
            label_idx = Some(match spec {
                ColumnSpec::Index(i) => *i,
                ColumnSpec::Name(n) => cols
                    .iter()
                    .position(|c| c == n)
                    .ok_or_else(|| Error::CsvFormat(format!("no column named '{n}' in header")))?,
            });
        }
    } else if let Some(spec) = &options.label_column {
        label_idx = Some(match spec {
            ColumnSpec::Index(i) => *i,
            ColumnSpec::Name(n) => {
                return Err(Error::InvalidParameter(format!(
                    "label column '{n}' given by name but the file has no header"
                )))
            }
        });
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    for (line_no, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        match width {
            None => width = Some(cells.len()),
            Some(w) if cells.len() != w => {
                return Err(Error::CsvFormat(format!(
                    "ragged rows: row {} has {} cells, expected {}",
                    line_no,
                    cells.len(),
                    w
                )))
            }
            _ => {}
        }
        if let Some(li) = label_idx {
            if li >= cells.len() {
                return Err(Error::CsvFormat(format!(
                    "label column {} out of range for row {} with {} cells",
                    li,
                    line_no,
                    cells.len()
                )));
            }
        }
        let mut row = Vec::with_capacity(cells.len());
        for (ci, cell) in cells.iter().enumerate() {
            if Some(ci) == label_idx {
                raw_labels.push((*cell).to_string());
                continue;
            }
            let v: f64 = cell.parse().map_err(|_| Error::CsvParse {
                row: line_no,
                col: ci + 1,
                message: format!("'{cell}' is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::CsvParse {
                    row: line_no,
                    col: ci + 1,
                    message: format!("non-finite value '{cell}'"),
                });
            }
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::CsvFormat("file has no data rows".into()));
    }

    let labels = if label_idx.is_some() {
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut out = Vec::with_capacity(raw_labels.len());
        for l in raw_labels {
            let next = ids.len();
            out.push(*ids.entry(l).or_insert(next));
        }
        Some(out)
    } else {
        None
    };

    LabeledDataset::new(Matrix::from_rows(rows)?, labels, "dataset")
}

/// Write a dataset as CSV with a header row (`f0,...,f{p-1}[,label]`).
/// Values use shortest round-trip formatting, so load -> save -> load is exact.
pub fn save_csv(dataset: &LabeledDataset, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for j in 0..dataset.n_features() {
        if j > 0 {
            out.push(',');
        }
        let _ = write!(out, "f{j}");
    }
    if dataset.labels.is_some() {
        out.push_str(",label");
    }
    out.push('\n');
    for i in 0..dataset.n_obs() {
        for (j, v) in dataset.points.row(i).iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        if let Some(l) = &dataset.labels {
            let _ = write!(out, ",{}", l[i]);
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Feature scaling applied before graph construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Standardize {
    /// Per-feature mean 0, standard deviation 1 (population sd). Constant
    /// features map to 0.
    ZScore,
    /// Per-feature range [0, 1]. Constant features map to 0.
    MinMax,
    #[default]
    None,
}

/// Rescale features column-wise. Labels and name pass through.
pub fn standardize(dataset: &LabeledDataset, mode: Standardize) -> LabeledDataset {
    if mode == Standardize::None {
        return dataset.clone();
    }
    let n = dataset.n_obs();
    let p = dataset.n_features();
    let mut points = dataset.points.clone();
    for j in 0..p {
        match mode {
            Standardize::ZScore => {
                let mean = (0..n).map(|i| points.get(i, j)).sum::<f64>() / n as f64;
                let var = (0..n)
                    .map(|i| {
                        let d = points.get(i, j) - mean;
                        d * d
                    })
                    .sum::<f64>()
                    / n as f64;
                let sd = var.sqrt();
                for i in 0..n {
                    let v = if sd > 0.0 {
                        (points.get(i, j) - mean) / sd
                    } else {
                        0.0
                    };
                    points.set(i, j, v);
                }
            }
            Standardize::MinMax => {
                let mut lo = f64::MAX;
                let mut hi = f64::MIN;
                for i in 0..n {
                    lo = lo.min(points.get(i, j));
                    hi = hi.max(points.get(i, j));
                }
                let range = hi - lo;
                for i in 0..n {
                    let v = if range > 0.0 {
                        (points.get(i, j) - lo) / range
                    } else {
                        0.0
                    };
                    points.set(i, j, v);
                }
            }
            Standardize::None => unreachable!(),
        }
    }
    LabeledDataset {
        points,
        labels: dataset.labels.clone(),
        name: dataset.name.clone(),
    }
}

/// Ready-made mixture settings matching the synthetic benchmark suite.
pub mod presets {
    use super::*;

    fn tri(dim: usize, means: [f64; 3], sds: [f64; 3], per_cluster: usize, noise: usize, seed: u64) -> GaussianMixtureSpec {
        GaussianMixtureSpec {
            dim,
            clusters: means
                .iter()
                .zip(sds)
                .map(|(&m, sd)| GaussianCluster {
                    mean: Mean::Scalar(m),
                    sd,
                    count: per_cluster,
                })
                .collect(),
            noise_features: noise,
            seed,
        }
    }

    /// Three equal-density 100-dimensional Gaussians (means 0/0.5/1, sd 1).
    pub fn e100(per_cluster: usize, seed: u64) -> Result<LabeledDataset> {
        Ok(generate_gaussian_mixture(&tri(100, [0.0, 0.5, 1.0], [1.0, 1.0, 1.0], per_cluster, 0, seed))?.with_name("e100"))
    }

    /// Three equal-density 1000-dimensional Gaussians (means 0/0.5/1, sd 1).
    pub fn e1000(per_cluster: usize, seed: u64) -> Result<LabeledDataset> {
        Ok(generate_gaussian_mixture(&tri(1000, [0.0, 0.5, 1.0], [1.0, 1.0, 1.0], per_cluster, 0, seed))?.with_name("e1000"))
    }

    /// Per-coordinate variances of the unequal-density settings; the
    /// sampler takes standard deviations, so the presets pass their roots.
    const UNEQUAL_VARIANCES: [f64; 3] = [0.1, 1.0, 3.0];

    /// Three 3-dimensional Gaussians of very different densities
    /// (means 0/3/7, variances 0.1/1/3).
    pub fn u3(per_cluster: usize, seed: u64) -> Result<LabeledDataset> {
        let sds = UNEQUAL_VARIANCES.map(f64::sqrt);
        Ok(generate_gaussian_mixture(&tri(3, [0.0, 3.0, 7.0], sds, per_cluster, 0, seed))?.with_name("u3"))
    }

    /// The `u3` clusters plus 1000 irrelevant features uniform on [0, 1].
    pub fn u1003(per_cluster: usize, seed: u64) -> Result<LabeledDataset> {
        let sds = UNEQUAL_VARIANCES.map(f64::sqrt);
        Ok(generate_gaussian_mixture(&tri(3, [0.0, 3.0, 7.0], sds, per_cluster, 1000, seed))?.with_name("u1003"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e100_shape_and_labels() {
        let ds = presets::e100(500, 7).unwrap();
        assert_eq!(ds.n_obs(), 1500);
        assert_eq!(ds.n_features(), 100);
        let labels = ds.labels.as_ref().unwrap();
        for c in 0..3 {
            assert_eq!(labels.iter().filter(|&&l| l == c).count(), 500);
        }
    }

    #[test]
    fn zero_variance_cluster_collapses_to_mean() {
        let spec = GaussianMixtureSpec {
            dim: 4,
            clusters: vec![GaussianCluster {
                mean: Mean::Scalar(0.0),
                sd: 0.0,
                count: 5,
            }],
            noise_features: 0,
            seed: 1,
        };
        let ds = generate_gaussian_mixture(&spec).unwrap();
        assert_eq!(ds.n_obs(), 5);
        assert!(ds.points.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mixture_rejects_degenerate_specs() {
        let empty = GaussianMixtureSpec {
            dim: 2,
            clusters: vec![],
            noise_features: 0,
            seed: 0,
        };
        assert!(generate_gaussian_mixture(&empty).is_err());
        let zero_dim = GaussianMixtureSpec {
            dim: 0,
            clusters: vec![GaussianCluster {
                mean: Mean::Scalar(0.0),
                sd: 1.0,
                count: 3,
            }],
            noise_features: 0,
            seed: 0,
        };
        assert!(generate_gaussian_mixture(&zero_dim).is_err());
    }

    #[test]
    fn mixture_sample_sd_tracks_spec() {
        // sample-moment oracle: per-cluster sd within 10% of the configured sd
        let spec = GaussianMixtureSpec {
            dim: 3,
            clusters: [(0.0, 0.1), (3.0, 1.0), (7.0, 3.0)]
                .iter()
                .map(|&(m, sd)| GaussianCluster {
                    mean: Mean::Scalar(m),
                    sd,
                    count: 500,
                })
                .collect(),
            noise_features: 0,
            seed: 42,
        };
        let ds = generate_gaussian_mixture(&spec).unwrap();
        let labels = ds.labels.as_ref().unwrap();
        for (c, want_sd) in [(0usize, 0.1f64), (1, 1.0), (2, 3.0)] {
            let mut vals = Vec::new();
            for (i, &label) in labels.iter().enumerate() {
                if label == c {
                    vals.extend_from_slice(ds.points.row(i));
                }
            }
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let sd = (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / vals.len() as f64)
                .sqrt();
            assert!(
                (sd - want_sd).abs() < 0.1 * want_sd,
                "cluster {c}: sample sd {sd} vs spec {want_sd}"
            );
        }
    }

    #[test]
    fn unequal_density_presets_use_variance_roots() {
        let ds = presets::u3(400, 9).unwrap();
        let labels = ds.labels.as_ref().unwrap();
        for (c, want_sd) in [(0usize, 0.1f64.sqrt()), (1, 1.0), (2, 3.0f64.sqrt())] {
            let mut vals = Vec::new();
            for (i, &label) in labels.iter().enumerate() {
                if label == c {
                    vals.extend_from_slice(ds.points.row(i));
                }
            }
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let sd = (vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                / vals.len() as f64)
                .sqrt();
            assert!(
                (sd - want_sd).abs() < 0.1 * want_sd,
                "cluster {c}: sample sd {sd} vs preset {want_sd}"
            );
        }
    }

    #[test]
    fn noise_features_stay_in_unit_interval() {
        let ds = presets::u1003(20, 3).unwrap();
        assert_eq!(ds.n_features(), 1003);
        for i in 0..ds.n_obs() {
            for &v in &ds.points.row(i)[3..] {
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = presets::u3(50, 9).unwrap();
        let b = presets::u3(50, 9).unwrap();
        assert_eq!(a.points, b.points);
        let c = presets::u3(50, 10).unwrap();
        assert_ne!(c.points, a.points);
    }

    #[test]
    fn single_sphere_has_unit_norms() {
        let ds = generate_nested_spheres(&[1.0], &[200], 0.0, 5).unwrap();
        for i in 0..ds.n_obs() {
            let r = ds.points.row(i);
            let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn jittered_spheres_keep_mean_radius() {
        let ds = generate_nested_spheres(&[1.0, 3.0], &[400, 400], 0.01, 11).unwrap();
        let labels = ds.labels.as_ref().unwrap();
        for (s, want) in [(0usize, 1.0f64), (1, 3.0)] {
            let mut acc = 0.0;
            let mut cnt = 0;
            for (i, &label) in labels.iter().enumerate() {
                if label == s {
                    let r = ds.points.row(i);
                    acc += (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
                    cnt += 1;
                }
            }
            assert!((acc / cnt as f64 - want).abs() < 0.05);
        }
    }

    #[test]
    fn spheres_reject_mismatched_lists() {
        assert!(generate_nested_spheres(&[1.0, 2.0], &[10], 0.0, 0).is_err());
        assert!(generate_nested_spheres(&[2.0, 1.0], &[10, 10], 0.0, 0).is_err());
    }

    #[test]
    fn overlapping_means_match_construction() {
        let params = PlanarToyParams {
            points_per_cluster: 2000,
            ..Default::default()
        };
        let ds = generate_planar_toy(PlanarKind::Overlapping, &params, 1).unwrap();
        let labels = ds.labels.as_ref().unwrap();
        for (c, want) in [(0usize, [0.0, 2.0]), (1, [2.0, 2.0])] {
            let mut mx = 0.0;
            let mut my = 0.0;
            let mut cnt = 0.0;
            for (i, &label) in labels.iter().enumerate() {
                if label == c {
                    mx += ds.points.get(i, 0);
                    my += ds.points.get(i, 1);
                    cnt += 1.0;
                }
            }
            assert!((mx / cnt - want[0]).abs() < 0.1);
            assert!((my / cnt - want[1]).abs() < 0.1);
        }
    }

    #[test]
    fn outliers_sit_at_configured_coordinates() {
        let params = PlanarToyParams {
            points_per_cluster: 50,
            outliers: [[-5.0, 5.0], [-6.0, 4.0]],
            ..Default::default()
        };
        let ds = generate_planar_toy(PlanarKind::Outliers, &params, 2).unwrap();
        let labels = ds.labels.as_ref().unwrap();
        let outlier_rows: Vec<usize> = (0..ds.n_obs()).filter(|&i| labels[i] == 2).collect();
        assert_eq!(outlier_rows.len(), 2);
        assert_eq!(ds.points.row(outlier_rows[0]), &[-5.0, 5.0]);
        assert_eq!(ds.points.row(outlier_rows[1]), &[-6.0, 4.0]);
    }

    #[test]
    fn bridged_with_zero_bridge_is_two_blobs() {
        let params = PlanarToyParams {
            points_per_cluster: 30,
            bridge_points: 0,
            ..Default::default()
        };
        let ds = generate_planar_toy(PlanarKind::Bridged, &params, 3).unwrap();
        assert_eq!(ds.n_obs(), 60);
        assert!(ds.labels.as_ref().unwrap().iter().all(|&l| l < 2));
    }

    #[test]
    fn csv_label_mapping_first_appearance() {
        let ds = parse_csv("1,2,a\n3,4,a\n5,6,b\n", &CsvOptions {
            has_header: false,
            label_column: Some(ColumnSpec::Index(2)),
        })
        .unwrap();
        assert_eq!(ds.n_obs(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.labels.as_ref().unwrap(), &vec![0, 0, 1]);
    }

    #[test]
    fn csv_header_skipped_and_named_column_found() {
        let ds = parse_csv("x,y,label\n1,2,u\n3,4,v\n", &CsvOptions {
            has_header: true,
            label_column: Some(ColumnSpec::Name("label".into())),
        })
        .unwrap();
        assert_eq!(ds.n_obs(), 2);
        assert_eq!(ds.labels.as_ref().unwrap(), &vec![0, 1]);
    }

    #[test]
    fn csv_parse_error_carries_position() {
        let err = parse_csv("1,2\n3,oops\n", &CsvOptions::default()).unwrap_err();
        match err {
            Error::CsvParse { row, col, .. } => {
                assert_eq!((row, col), (2, 2));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn csv_ragged_rows_rejected() {
        assert!(parse_csv("1,2\n3\n", &CsvOptions::default()).is_err());
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let ds = presets::u3(10, 17).unwrap();
        let dir = std::env::temp_dir().join(format!("embedscan-ds-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p1 = dir.join("a.csv");
        let p2 = dir.join("b.csv");
        save_csv(&ds, &p1).unwrap();
        let opts = CsvOptions {
            has_header: true,
            label_column: Some(ColumnSpec::Name("label".into())),
        };
        let back = load_csv(&p1, &opts).unwrap();
        assert_eq!(back.points, ds.points);
        assert_eq!(back.labels, ds.labels);
        save_csv(&back, &p2).unwrap();
        assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn zscore_matches_closed_form() {
        let ds = LabeledDataset::new(
            Matrix::from_rows(vec![vec![1.0], vec![2.0], vec![3.0]]).unwrap(),
            None,
            "t",
        )
        .unwrap();
        let z = standardize(&ds, Standardize::ZScore);
        let want = [-1.224744871391589, 0.0, 1.224744871391589];
        for (i, w) in want.iter().enumerate() {
            assert!((z.points.get(i, 0) - w).abs() < 1e-9);
        }
    }

    #[test]
    fn zscore_constant_column_maps_to_zero() {
        let ds = LabeledDataset::new(
            Matrix::from_rows(vec![vec![2.0, 1.0], vec![2.0, 2.0], vec![2.0, 3.0]]).unwrap(),
            None,
            "t",
        )
        .unwrap();
        let z = standardize(&ds, Standardize::ZScore);
        for i in 0..3 {
            assert_eq!(z.points.get(i, 0), 0.0);
        }
    }

    #[test]
    fn minmax_matches_closed_form() {
        let ds = LabeledDataset::new(
            Matrix::from_rows(vec![vec![2.0], vec![4.0], vec![6.0]]).unwrap(),
            None,
            "t",
        )
        .unwrap();
        let m = standardize(&ds, Standardize::MinMax);
        assert_eq!(m.points.row(0), &[0.0]);
        assert_eq!(m.points.row(1), &[0.5]);
        assert_eq!(m.points.row(2), &[1.0]);
    }

    #[test]
    fn zscore_is_idempotent() {
        let ds = presets::u3(30, 21).unwrap();
        let once = standardize(&ds, Standardize::ZScore);
        let twice = standardize(&once, Standardize::ZScore);
        for (a, b) in once.points.values().iter().zip(twice.points.values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}
