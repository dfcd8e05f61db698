//! Smooth k-NN graph construction and fuzzy symmetrization.
//!
//! The directed graph connects each observation to its nearest neighbors
//! with weights w = exp(-max(0, d - rho_i) / sigma_i), where rho_i is the
//! distance to the nearest distinct neighbor and sigma_i is calibrated per
//! point so the weights sum to log2(k). The probabilistic union
//! v_ij = w_ij + w_ji - w_ij * w_ji merges the two directions into a
//! symmetric fuzzy graph.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{euclidean, Matrix};

/// Weights below this are dropped from the sparse fuzzy graph.
pub const EDGE_DROP_THRESHOLD: f64 = 1e-12;

/// Bisection stops at this residual on the calibration equation.
pub const CALIBRATION_TOLERANCE: f64 = 1e-6;

const BISECTION_ITERATIONS: usize = 64;

/// Whether the neighbor count `k` counts the query point itself.
///
/// `CountsSelf` is the convention of the standard implementations: the point
/// occupies one of the k slots, so each point gets k-1 explicit neighbors
/// and the calibration target stays log2(k). `OthersOnly` treats k as the
/// number of distinct neighbors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NeighborConvention {
    #[default]
    CountsSelf,
    OthersOnly,
}

impl NeighborConvention {
    /// Number of explicit (non-self) neighbors for a user-facing `k`.
    fn explicit_neighbors(self, k: usize) -> usize {
        match self {
            NeighborConvention::CountsSelf => k.saturating_sub(1),
            NeighborConvention::OthersOnly => k,
        }
    }
}

/// One entry of a neighbor list.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

/// Exact k nearest distinct neighbors of every point by brute force.
/// Ties are broken by ascending index; the query point is never listed.
pub fn knn_exact(points: &Matrix, k: usize) -> Result<Vec<Vec<Neighbor>>> {
    let n = points.n_rows();
    knn_by(n, k, |i, j| euclidean(points.row(i), points.row(j)))
}

/// As [`knn_exact`] but over a precomputed dissimilarity matrix.
pub fn knn_exact_precomputed(dist: &DissimilarityMatrix, k: usize) -> Result<Vec<Vec<Neighbor>>> {
    knn_by(dist.n_obs(), k, |i, j| dist.get(i, j))
}

fn knn_by(n: usize, k: usize, dist: impl Fn(usize, usize) -> f64) -> Result<Vec<Vec<Neighbor>>> {
    if k < 1 || k > n.saturating_sub(1) {
        return Err(Error::InvalidParameter(format!(
            "k = {k} out of range 1..={} for {n} observations",
            n.saturating_sub(1)
        )));
    }
    let mut lists = Vec::with_capacity(n);
    for i in 0..n {
        let mut all: Vec<Neighbor> = (0..n)
            .filter(|&j| j != i)
            .map(|j| Neighbor {
                index: j,
                distance: dist(i, j),
            })
            .collect();
        all.sort_unstable_by(|a, b| {
            a.distance
                .partial_cmp(&b.distance)
                .expect("finite distances")
                .then(a.index.cmp(&b.index))
        });
        all.truncate(k);
        lists.push(all);
    }
    Ok(lists)
}

/// Per-point calibration result.
#[derive(Clone, Copy, Debug)]
pub struct SmoothKnn {
    /// Distance to the nearest distinct neighbor (0 if all given distances
    /// are 0).
    pub rho: f64,
    /// Bandwidth solving the log2(k) equation, clamped to the bracket when
    /// the target is unattainable.
    pub sigma: f64,
    /// True when sigma hit a bracket end instead of a bisection root.
    pub clamped: bool,
}

/// Solve sum_j exp(-max(0, d_j - rho) / sigma) = log2(k) for sigma.
///
/// The sum is non-decreasing in sigma, so plain bisection over
/// [1e-3 * mean(d), 1e3 * max(d)] suffices; sigma clamps to a bracket end
/// when every bracket value over- or undershoots the target.
pub fn smooth_knn_calibrate(distances: &[f64], k: usize) -> SmoothKnn {
    assert!(!distances.is_empty(), "neighbor list must be nonempty");
    let rho = distances
        .iter()
        .copied()
        .filter(|&d| d > 0.0)
        .fold(f64::INFINITY, f64::min);
    let rho = if rho.is_finite() { rho } else { 0.0 };

    let mean: f64 = distances.iter().sum::<f64>() / distances.len() as f64;
    let max: f64 = distances.iter().copied().fold(0.0, f64::max);
    let sigma_min = (1e-3 * mean).max(1e-12);
    let sigma_max = (1e3 * max).max(sigma_min);
    let target = (k as f64).log2();

    let sum_at = |sigma: f64| -> f64 {
        distances
            .iter()
            .map(|&d| (-((d - rho).max(0.0)) / sigma).exp())
            .sum()
    };

    if sum_at(sigma_min) >= target {
        return SmoothKnn {
            rho,
            sigma: sigma_min,
            clamped: true,
        };
    }
    if sum_at(sigma_max) <= target {
        return SmoothKnn {
            rho,
            sigma: sigma_max,
            clamped: true,
        };
    }
    let (mut lo, mut hi) = (sigma_min, sigma_max);
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..BISECTION_ITERATIONS {
        mid = 0.5 * (lo + hi);
        let res = sum_at(mid) - target;
        if res.abs() < CALIBRATION_TOLERANCE {
            break;
        }
        if res > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    SmoothKnn {
        rho,
        sigma: mid,
        clamped: false,
    }
}

/// Directed edge weights for one point: exp(-max(0, d - rho) / sigma).
/// The nearest distinct neighbor (d = rho) gets weight exactly 1, as do any
/// duplicates at distance 0.
pub fn directed_weights(distances: &[f64], rho: f64, sigma: f64) -> Vec<f64> {
    distances
        .iter()
        .map(|&d| {
            let gap = (d - rho).max(0.0);
            if gap == 0.0 {
                1.0
            } else {
                (-gap / sigma).exp()
            }
        })
        .collect()
}

/// Directed smooth k-NN graph: neighbor lists, per-point calibration, and
/// directed weights in [0, 1].
#[derive(Clone, Debug)]
pub struct DirectedKnnGraph {
    /// User-facing neighbor count (interpreted per `convention`).
    pub k: usize,
    pub convention: NeighborConvention,
    /// Explicit neighbors per point, ascending by distance.
    pub neighbors: Vec<Vec<Neighbor>>,
    pub rho: Vec<f64>,
    pub sigma: Vec<f64>,
    /// Directed weights parallel to `neighbors`.
    pub weights: Vec<Vec<f64>>,
}

impl DirectedKnnGraph {
    pub fn n_obs(&self) -> usize {
        self.neighbors.len()
    }
}

/// Build the directed graph from raw points.
pub fn build_directed_graph(
    points: &Matrix,
    k: usize,
    convention: NeighborConvention,
) -> Result<DirectedKnnGraph> {
    let lists = knn_exact(points, explicit_k(points.n_rows(), k, convention)?)?;
    Ok(assemble_directed(lists, k, convention))
}

/// Build the directed graph from a precomputed dissimilarity matrix.
pub fn build_directed_graph_precomputed(
    dist: &DissimilarityMatrix,
    k: usize,
    convention: NeighborConvention,
) -> Result<DirectedKnnGraph> {
    let lists = knn_exact_precomputed(dist, explicit_k(dist.n_obs(), k, convention)?)?;
    Ok(assemble_directed(lists, k, convention))
}

fn explicit_k(n: usize, k: usize, convention: NeighborConvention) -> Result<usize> {
    let explicit = convention.explicit_neighbors(k);
    if explicit == 0 {
        return Err(Error::InvalidParameter(format!(
            "k = {k} leaves no explicit neighbors under {convention:?}"
        )));
    }
    if explicit > n.saturating_sub(1) {
        return Err(Error::InvalidParameter(format!(
            "k = {k} needs {explicit} distinct neighbors but only {} exist",
            n.saturating_sub(1)
        )));
    }
    Ok(explicit)
}

fn assemble_directed(
    neighbors: Vec<Vec<Neighbor>>,
    k: usize,
    convention: NeighborConvention,
) -> DirectedKnnGraph {
    let n = neighbors.len();
    let mut rho = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for list in &neighbors {
        let dists: Vec<f64> = list.iter().map(|nb| nb.distance).collect();
        let cal = smooth_knn_calibrate(&dists, k);
        weights.push(directed_weights(&dists, cal.rho, cal.sigma));
        rho.push(cal.rho);
        sigma.push(cal.sigma);
    }
    DirectedKnnGraph {
        k,
        convention,
        neighbors,
        rho,
        sigma,
        weights,
    }
}

/// One undirected fuzzy edge, stored with `i < j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FuzzyEdge {
    pub i: usize,
    pub j: usize,
    pub v: f64,
}

/// Sparse symmetric affinity graph with entries in (0, 1].
#[derive(Clone, Debug)]
pub struct FuzzyGraph {
    n_obs: usize,
    edges: Vec<FuzzyEdge>,
}

impl FuzzyGraph {
    /// Assemble a fuzzy graph from explicit undirected edges. Pair order and
    /// duplicates are normalized; affinities must lie in (0, 1].
    pub fn from_edges(n_obs: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut canon: Vec<FuzzyEdge> = Vec::with_capacity(edges.len());
        for &(i, j, v) in edges {
            if i == j || i >= n_obs || j >= n_obs {
                return Err(Error::InvalidParameter(format!(
                    "edge ({i},{j}) invalid for {n_obs} observations"
                )));
            }
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "edge ({i},{j}) affinity {v} outside (0, 1]"
                )));
            }
            canon.push(FuzzyEdge {
                i: i.min(j),
                j: i.max(j),
                v,
            });
        }
        canon.sort_unstable_by_key(|e| (e.i, e.j));
        canon.dedup_by(|a, b| (a.i, a.j) == (b.i, b.j));
        Ok(FuzzyGraph {
            n_obs,
            edges: canon,
        })
    }

    pub fn n_obs(&self) -> usize {
        self.n_obs
    }

    pub fn edges(&self) -> &[FuzzyEdge] {
        &self.edges
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Affinity of the unordered pair {i, j}, if present. Symmetric by
    /// construction: the argument order does not matter.
    pub fn weight(&self, i: usize, j: usize) -> Option<f64> {
        if i == j {
            return None;
        }
        let key = (i.min(j), i.max(j));
        self.edges
            .binary_search_by(|e| (e.i, e.j).cmp(&key))
            .ok()
            .map(|pos| self.edges[pos].v)
    }

    pub fn max_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.v).fold(0.0, f64::max)
    }

    /// Incident edges per point as (neighbor, affinity) lists.
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        let mut adj = vec![Vec::new(); self.n_obs];
        for e in &self.edges {
            adj[e.i].push((e.j, e.v));
            adj[e.j].push((e.i, e.v));
        }
        adj
    }

    /// Connected components, each sorted ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n_obs];
        let mut comps = Vec::new();
        for start in 0..self.n_obs {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            seen[start] = true;
            let mut comp = Vec::new();
            while let Some(i) = stack.pop() {
                comp.push(i);
                for &(j, _) in &adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Write the edge list as CSV (`i,j,v` with a header).
    pub fn write_edge_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = String::from("i,j,v\n");
        for e in &self.edges {
            let _ = writeln!(out, "{},{},{}", e.i, e.j, e.v);
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// Probabilistic union of the directed weights:
/// v_ij = w_ij + w_ji - w_ij * w_ji, missing directions counting as 0.
/// Entries below [`EDGE_DROP_THRESHOLD`] are dropped.
pub fn fuzzy_union(graph: &DirectedKnnGraph) -> FuzzyGraph {
    let n = graph.n_obs();
    let mut pair: HashMap<(usize, usize), (f64, f64)> = HashMap::new();
    for i in 0..n {
        for (nb, &w) in graph.neighbors[i].iter().zip(&graph.weights[i]) {
            let j = nb.index;
            let key = (i.min(j), i.max(j));
            let slot = pair.entry(key).or_insert((0.0, 0.0));
            if i < j {
                slot.0 = slot.0.max(w);
            } else {
                slot.1 = slot.1.max(w);
            }
        }
    }
    let mut edges: Vec<FuzzyEdge> = pair
        .into_iter()
        .filter_map(|((i, j), (wij, wji))| {
            let v = wij + wji - wij * wji;
            (v >= EDGE_DROP_THRESHOLD).then_some(FuzzyEdge { i, j, v })
        })
        .collect();
    edges.sort_unstable_by_key(|e| (e.i, e.j));
    FuzzyGraph { n_obs: n, edges }
}

/// Convenience: directed graph + fuzzy union from raw points.
pub fn build_fuzzy_graph(
    points: &Matrix,
    k: usize,
    convention: NeighborConvention,
) -> Result<FuzzyGraph> {
    Ok(fuzzy_union(&build_directed_graph(points, k, convention)?))
}

/// Convenience: directed graph + fuzzy union from a dissimilarity matrix.
pub fn build_fuzzy_graph_precomputed(
    dist: &DissimilarityMatrix,
    k: usize,
    convention: NeighborConvention,
) -> Result<FuzzyGraph> {
    Ok(fuzzy_union(&build_directed_graph_precomputed(
        dist, k, convention,
    )?))
}

/// Dense symmetric dissimilarity matrix with zero diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    values: Vec<f64>,
}

impl DissimilarityMatrix {
    /// Pairwise Euclidean distances between the rows of `points`.
    pub fn from_points(points: &Matrix) -> Self {
        let n = points.n_rows();
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(points.row(i), points.row(j));
                values[i * n + j] = d;
                values[j * n + i] = d;
            }
        }
        DissimilarityMatrix { n, values }
    }

    /// Validate and adopt a dense row-major matrix: square, symmetric within
    /// 1e-9 (exactly symmetrized on acceptance), zero diagonal.
    pub fn from_entries(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParameter(format!(
                "dissimilarity buffer has {} values, expected {n}x{n}",
                entries.len()
            )));
        }
        let mut values = entries;
        for i in 0..n {
            let dii = values[i * n + i];
            if dii.abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "nonzero diagonal {dii} at index {i}"
                )));
            }
            values[i * n + i] = 0.0;
            for j in (i + 1)..n {
                let a = values[i * n + j];
                let b = values[j * n + i];
                let delta = (a - b).abs();
                if delta > 1e-9 {
                    return Err(Error::Asymmetric { i, j, delta });
                }
                let v = 0.5 * (a + b);
                values[i * n + j] = v;
                values[j * n + i] = v;
            }
        }
        Ok(DissimilarityMatrix { n, values })
    }

    pub fn n_obs(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.n + j]
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

/// Turn affinities into dissimilarities: d_ij = 1 - v_ij for present edges,
/// 1 for absent pairs, 0 on the diagonal. All entries land in [0, 1].
pub fn graph_to_dissimilarity(graph: &FuzzyGraph) -> DissimilarityMatrix {
    let n = graph.n_obs();
    let mut values = vec![1.0; n * n];
    for i in 0..n {
        values[i * n + i] = 0.0;
    }
    for e in graph.edges() {
        let d = (1.0 - e.v).max(0.0);
        values[e.i * n + e.j] = d;
        values[e.j * n + e.i] = d;
    }
    DissimilarityMatrix { n, values }
}
