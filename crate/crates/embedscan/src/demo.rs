//! Small built-in inputs used by the examples and documentation.

use crate::graph::DissimilarityMatrix;

/// Distance matrix between six objects forming two tight groups,
/// {0,1,2} and {3,4,5}, joined by a single 0.75 entry between objects
/// 1 and 3. That one entry makes global-threshold clustering brittle:
/// at eps = 0.75 everything merges, at eps = 0.74 the second group
/// dissolves into noise.
pub fn toy_dissimilarity() -> DissimilarityMatrix {
    DissimilarityMatrix::from_entries(
        6,
        vec![
            0.0, 0.6, 0.7, 1.3, 1.2, 1.5, //
            0.6, 0.0, 0.5, 0.75, 1.6, 1.3, //
            0.7, 0.5, 0.0, 1.4, 1.3, 1.1, //
            1.3, 0.75, 1.4, 0.0, 0.7, 0.75, //
            1.2, 1.6, 1.3, 0.7, 0.0, 0.75, //
            1.5, 1.3, 1.1, 0.75, 0.75, 0.0,
        ],
    )
    .expect("fixed matrix is valid")
}

/// Ground-truth grouping of [`toy_dissimilarity`].
pub fn toy_labels() -> Vec<usize> {
    vec![0, 0, 0, 1, 1, 1]
}
