//! Density-based clustering (DBSCAN).
//!
//! A point is a core point when at least `min_pts` points lie within `eps`
//! of it; clusters are the maximal sets of density-connected points. By
//! default a point does not count toward its own neighborhood, which is the
//! convention the toy analyses in this crate rely on; the textbook
//! self-inclusive reading is available via `self_in_neighborhood`.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::DissimilarityMatrix;
use crate::matrix::Matrix;

/// DBSCAN parameters.
#[derive(Clone, Copy, Debug)]
pub struct DbscanParams {
    pub eps: f64,
    pub min_pts: usize,
    /// Count the point itself as part of its eps-neighborhood.
    pub self_in_neighborhood: bool,
}

impl DbscanParams {
    pub fn new(eps: f64, min_pts: usize) -> Self {
        DbscanParams {
            eps,
            min_pts,
            self_in_neighborhood: false,
        }
    }

    pub fn with_self_in_neighborhood(mut self, yes: bool) -> Self {
        self.self_in_neighborhood = yes;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.eps.is_nan() || self.eps < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "eps must be non-negative, got {}",
                self.eps
            )));
        }
        if self.min_pts < 1 {
            return Err(Error::InvalidParameter("min_pts must be >= 1".into()));
        }
        Ok(())
    }
}

/// Cluster membership of one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Assignment {
    Cluster(usize),
    Noise,
}

impl Assignment {
    pub fn is_noise(&self) -> bool {
        matches!(self, Assignment::Noise)
    }

    /// Cluster id, or -1 for noise (the CSV encoding).
    pub fn as_i64(&self) -> i64 {
        match self {
            Assignment::Cluster(c) => *c as i64,
            Assignment::Noise => -1,
        }
    }
}

/// Result of one clustering run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterLabeling {
    /// Per-point cluster id or noise. Ids are dense 0..n_clusters, ordered
    /// by each cluster's smallest member index.
    pub assignments: Vec<Assignment>,
    pub core_flags: Vec<bool>,
    pub n_clusters: usize,
}

impl ClusterLabeling {
    pub fn n_noise(&self) -> usize {
        self.assignments.iter().filter(|a| a.is_noise()).count()
    }

    /// Write as CSV: `point,cluster,is_core`, noise encoded as -1.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = String::from("point,cluster,is_core\n");
        for (i, (a, c)) in self.assignments.iter().zip(&self.core_flags).enumerate() {
            let _ = writeln!(out, "{},{},{}", i, a.as_i64(), c);
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// Read a labeling CSV written by [`ClusterLabeling::write_csv`].
pub fn read_labeling_csv(path: impl AsRef<Path>) -> Result<Vec<Assignment>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || (ln == 0 && line.starts_with("point,")) {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() < 2 {
            return Err(Error::CsvFormat(format!(
                "labeling row {} needs at least point and cluster columns",
                ln + 1
            )));
        }
        let id: i64 = cells[1].trim().parse().map_err(|_| Error::CsvParse {
            row: ln + 1,
            col: 2,
            message: format!("'{}' is not an integer cluster id", cells[1]),
        })?;
        out.push(if id < 0 {
            Assignment::Noise
        } else {
            Assignment::Cluster(id as usize)
        });
    }
    Ok(out)
}

/// Indices within `eps` of point `index` (ascending). The point itself is
/// listed only when `include_self` is set.
pub fn eps_neighborhood(
    index: usize,
    eps: f64,
    dist: &DissimilarityMatrix,
    include_self: bool,
) -> Vec<usize> {
    (0..dist.n_obs())
        .filter(|&j| {
            if j == index {
                include_self
            } else {
                dist.get(index, j) <= eps
            }
        })
        .collect()
}

/// DBSCAN over raw points (Euclidean metric).
pub fn dbscan(points: &Matrix, params: &DbscanParams) -> Result<ClusterLabeling> {
    let dist = DissimilarityMatrix::from_points(points);
    dbscan_precomputed(&dist, params)
}

/// DBSCAN over a precomputed dissimilarity matrix.
///
/// Core points are clustered by breadth-first expansion over within-eps
/// core pairs; a non-core point within eps of some core point joins the
/// cluster of the smallest-index core that reaches it, which makes border
/// assignment order-independent.
pub fn dbscan_precomputed(
    dist: &DissimilarityMatrix,
    params: &DbscanParams,
) -> Result<ClusterLabeling> {
    params.validate()?;
    let n = dist.n_obs();
    let neighborhoods: Vec<Vec<usize>> = (0..n)
        .map(|i| eps_neighborhood(i, params.eps, dist, params.self_in_neighborhood))
        .collect();
    let core_flags: Vec<bool> = neighborhoods
        .iter()
        .map(|nb| nb.len() >= params.min_pts)
        .collect();

    // cluster the core points
    let mut cluster_of = vec![usize::MAX; n];
    let mut next = 0usize;
    for seed in 0..n {
        if !core_flags[seed] || cluster_of[seed] != usize::MAX {
            continue;
        }
        let id = next;
        next += 1;
        let mut queue = VecDeque::from([seed]);
        cluster_of[seed] = id;
        while let Some(i) = queue.pop_front() {
            for &j in &neighborhoods[i] {
                if core_flags[j] && cluster_of[j] == usize::MAX {
                    cluster_of[j] = id;
                    queue.push_back(j);
                }
            }
        }
    }

    // attach border points to the smallest-index core within reach
    let mut assignments = vec![Assignment::Noise; n];
    for i in 0..n {
        if core_flags[i] {
            assignments[i] = Assignment::Cluster(cluster_of[i]);
            continue;
        }
        if let Some(&core) = neighborhoods[i].iter().find(|&&j| core_flags[j]) {
            assignments[i] = Assignment::Cluster(cluster_of[core]);
        }
    }

    // dense ids ordered by smallest member index
    let mut first_member = vec![usize::MAX; next];
    for (i, a) in assignments.iter().enumerate() {
        if let Assignment::Cluster(c) = a {
            if first_member[*c] == usize::MAX {
                first_member[*c] = i;
            }
        }
    }
    let mut order: Vec<usize> = (0..next).collect();
    order.sort_unstable_by_key(|&c| first_member[c]);
    let mut relabel = vec![0usize; next];
    for (new_id, &old_id) in order.iter().enumerate() {
        relabel[old_id] = new_id;
    }
    for a in &mut assignments {
        if let Assignment::Cluster(c) = a {
            *c = relabel[*c];
        }
    }

    Ok(ClusterLabeling {
        assignments,
        core_flags,
        n_clusters: next,
    })
}
