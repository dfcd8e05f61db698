//! Topology-first preprocessing for density-based clustering.
//!
//! The pipeline in this crate separates clusters before clustering them:
//!
//! 1. [`graph`] builds a directed smooth k-NN graph over the observations
//!    and symmetrizes it into a sparse fuzzy affinity graph.
//! 2. [`layout`] embeds the graph into a few dimensions by minimizing the
//!    cross entropy between graph affinities and embedding affinities
//!    (spectral initialization + stochastic gradient descent).
//! 3. [`density`] runs DBSCAN over the embedding (or any point set or
//!    precomputed dissimilarity matrix).
//! 4. [`metrics`] scores partitions against ground truth with ARI and
//!    max-normalized NMI.
//! 5. [`sweep`] wraps all of it into eps sweeps, end-to-end pipeline runs,
//!    and replication studies with CSV outputs.
//!
//! [`dataset`] generates the synthetic benchmark families (Gaussian
//! mixtures with equal or wildly different densities, optional irrelevant
//! features, nested spheres, bridged/overlapping/outlier toys) and ingests
//! external CSV data.
//!
//! Everything is seeded and sequential: identical inputs produce
//! byte-identical outputs.
//!
//! ```
//! use embedscan::prelude::*;
//!
//! let data = embedscan::dataset::presets::u3(50, 7).unwrap();
//! let graph = build_fuzzy_graph(&data.points, 5, NeighborConvention::CountsSelf).unwrap();
//! let embedding = optimize_layout(&graph, &LayoutConfig::default()).unwrap();
//! let labeling = dbscan(&embedding.coords, &DbscanParams::new(0.5, 5)).unwrap();
//! assert_eq!(labeling.assignments.len(), data.n_obs());
//! ```

pub mod dataset;
pub mod demo;
pub mod density;
pub mod error;
pub mod graph;
pub mod layout;
pub mod matrix;
pub mod metrics;
pub mod sweep;

pub use error::{Error, Result};

/// The most common imports in one place.
pub mod prelude {
    pub use crate::dataset::{
        generate_gaussian_mixture, generate_nested_spheres, generate_planar_toy, load_csv,
        save_csv, standardize, CsvOptions, GaussianCluster, GaussianMixtureSpec, LabeledDataset,
        Mean, PlanarKind, PlanarToyParams, Standardize,
    };
    pub use crate::density::{
        dbscan, dbscan_precomputed, eps_neighborhood, Assignment, ClusterLabeling, DbscanParams,
    };
    pub use crate::graph::{
        build_fuzzy_graph, build_fuzzy_graph_precomputed, graph_to_dissimilarity, knn_exact,
        smooth_knn_calibrate, DissimilarityMatrix, FuzzyGraph, NeighborConvention,
    };
    pub use crate::layout::{
        cross_entropy, low_dim_similarity, optimize_layout, spectral_init, Embedding, InitMethod,
        LayoutConfig,
    };
    pub use crate::matrix::Matrix;
    pub use crate::metrics::{ari, contingency, nmi_max, score_against_truth, NoisePolicy};
    pub use crate::sweep::{
        eps_sweep, eps_sweep_points, fuzzy_only_sweep, replicate, run_pipeline, SweepResult,
        SweepSpec,
    };
    pub use crate::{Error, Result};
}
