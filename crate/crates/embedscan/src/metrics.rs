//! Partition agreement metrics: Adjusted Rand Index and max-normalized
//! Normalized Mutual Information.

use crate::density::Assignment;
use crate::error::{Error, Result};

/// What to do with noise points before cross-tabulating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NoisePolicy {
    /// All noise points of a labeling form one extra cluster. Keeps n
    /// constant across parameter settings.
    #[default]
    NoiseAsCluster,
    /// Drop every point that is noise in either labeling.
    Exclude,
}

/// Cross-tabulation of two labelings.
#[derive(Clone, Debug)]
pub struct ContingencyTable {
    /// counts[r][c] = points with row-label r and column-label c.
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub n: u64,
}

/// Wrap ground-truth class ids as assignments (no noise).
pub fn labels_to_assignments(labels: &[usize]) -> Vec<Assignment> {
    labels.iter().map(|&l| Assignment::Cluster(l)).collect()
}

/// Build the contingency table of two labelings under a noise policy.
/// Rows index the clusters of `a`, columns the clusters of `b`, both in
/// ascending id order with the noise pseudo-cluster (if any) last.
pub fn contingency(
    a: &[Assignment],
    b: &[Assignment],
    policy: NoisePolicy,
) -> Result<ContingencyTable> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let pairs: Vec<(Assignment, Assignment)> = match policy {
        NoisePolicy::Exclude => a
            .iter()
            .zip(b)
            .filter(|(x, y)| !x.is_noise() && !y.is_noise())
            .map(|(x, y)| (*x, *y))
            .collect(),
        NoisePolicy::NoiseAsCluster => a.iter().zip(b).map(|(x, y)| (*x, *y)).collect(),
    };

    // dense row/col indices: cluster ids ascending, noise last
    let index_of = |side: &dyn Fn(&(Assignment, Assignment)) -> Assignment| -> Vec<Assignment> {
        let mut ids: Vec<usize> = pairs
            .iter()
            .filter_map(|p| match side(p) {
                Assignment::Cluster(c) => Some(c),
                Assignment::Noise => None,
            })
            .collect();
        ids.sort_unstable();
        ids.dedup();
        let mut order: Vec<Assignment> = ids.into_iter().map(Assignment::Cluster).collect();
        if pairs.iter().any(|p| side(p).is_noise()) {
            order.push(Assignment::Noise);
        }
        order
    };
    let row_order = index_of(&|p: &(Assignment, Assignment)| p.0);
    let col_order = index_of(&|p: &(Assignment, Assignment)| p.1);
    let rpos = |a: Assignment| row_order.iter().position(|x| *x == a).unwrap();
    let cpos = |b: Assignment| col_order.iter().position(|x| *x == b).unwrap();

    let mut counts = vec![vec![0u64; col_order.len()]; row_order.len()];
    for &(x, y) in &pairs {
        counts[rpos(x)][cpos(y)] += 1;
    }
    let row_sums: Vec<u64> = counts.iter().map(|r| r.iter().sum()).collect();
    let col_sums: Vec<u64> = (0..col_order.len())
        .map(|c| counts.iter().map(|r| r[c]).sum())
        .collect();
    let n = row_sums.iter().sum();
    Ok(ContingencyTable {
        counts,
        row_sums,
        col_sums,
        n,
    })
}

fn choose2(x: u64) -> u128 {
    let x = x as u128;
    x * x.saturating_sub(1) / 2
}

/// True when the table is a permutation of cluster blocks, i.e. both
/// labelings induce the same partition.
fn partitions_identical(t: &ContingencyTable) -> bool {
    t.counts.iter().all(|row| {
        row.iter().filter(|&&c| c > 0).count() <= 1
    }) && (0..t.col_sums.len())
        .all(|c| t.counts.iter().filter(|row| row[c] > 0).count() <= 1)
}

/// Adjusted Rand Index in [-1, 1].
///
/// ARI = (sum_ij C(n_ij,2) - E) / (M - E) with E the chance expectation
/// under the hypergeometric null and M the mean of the marginal pair
/// counts. When M = E (e.g. both labelings a single cluster) the value is
/// 1 for identical partitions and 0 otherwise.
pub fn ari(t: &ContingencyTable) -> Result<f64> {
    if t.n < 2 {
        return Err(Error::InvalidParameter(format!(
            "ARI needs at least 2 points, got {}",
            t.n
        )));
    }
    let sum_ij: u128 = t
        .counts
        .iter()
        .flat_map(|r| r.iter())
        .map(|&c| choose2(c))
        .sum();
    let sa: u128 = t.row_sums.iter().map(|&c| choose2(c)).sum();
    let sb: u128 = t.col_sums.iter().map(|&c| choose2(c)).sum();
    let total = choose2(t.n);

    // degenerate denominator, detected exactly: (sa+sb)/2 == sa*sb/total
    if (sa + sb) * total == 2 * sa * sb {
        return Ok(if partitions_identical(t) { 1.0 } else { 0.0 });
    }
    let expected = (sa as f64) * (sb as f64) / (total as f64);
    let max_index = 0.5 * (sa as f64 + sb as f64);
    Ok((sum_ij as f64 - expected) / (max_index - expected))
}

/// Normalized Mutual Information with maximum normalization:
/// I(U;V) / max(H(U), H(V)) with natural-log entropies. Returns `None`
/// (undefined) when both labelings are single clusters.
pub fn nmi_max(t: &ContingencyTable) -> Option<f64> {
    if t.n == 0 {
        return None;
    }
    let n = t.n as f64;
    let entropy = |sums: &[u64]| -> f64 {
        sums.iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let hu = entropy(&t.row_sums);
    let hv = entropy(&t.col_sums);
    let hmax = hu.max(hv);
    if hmax == 0.0 {
        return None;
    }
    let mut mi = 0.0;
    for (r, row) in t.counts.iter().enumerate() {
        for (c, &cnt) in row.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            let pij = cnt as f64 / n;
            let pi = t.row_sums[r] as f64 / n;
            let pj = t.col_sums[c] as f64 / n;
            mi += pij * (pij / (pi * pj)).ln();
        }
    }
    Some((mi / hmax).clamp(0.0, 1.0))
}

/// Score a predicted labeling against ground-truth class ids.
pub fn score_against_truth(
    truth: &[usize],
    predicted: &[Assignment],
    policy: NoisePolicy,
) -> Result<(f64, Option<f64>)> {
    let t = contingency(&labels_to_assignments(truth), predicted, policy)?;
    Ok((ari(&t)?, nmi_max(&t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clusters(ids: &[i64]) -> Vec<Assignment> {
        ids.iter()
            .map(|&i| {
                if i < 0 {
                    Assignment::Noise
                } else {
                    Assignment::Cluster(i as usize)
                }
            })
            .collect()
    }

    #[test]
    fn contingency_direct_count() {
        let t = contingency(
            &clusters(&[0, 0, 1]),
            &clusters(&[1, 1, 0]),
            NoisePolicy::NoiseAsCluster,
        )
        .unwrap();
        assert_eq!(t.counts, vec![vec![0, 2], vec![1, 0]]);
        assert_eq!(t.n, 3);
    }

    #[test]
    fn noise_policies_differ_as_documented() {
        let a = clusters(&[0, 0, 1, 1, -1, -1]);
        let b = clusters(&[0, 0, 1, 1, 0, 1]);
        let grouped = contingency(&a, &b, NoisePolicy::NoiseAsCluster).unwrap();
        assert_eq!(grouped.n, 6);
        assert_eq!(grouped.row_sums.last(), Some(&2)); // extra noise row of size 2
        let excluded = contingency(&a, &b, NoisePolicy::Exclude).unwrap();
        assert_eq!(excluded.n, 4);
    }

    #[test]
    fn ari_identical_partitions() {
        let t = contingency(
            &clusters(&[0, 0, 1, 1]),
            &clusters(&[1, 1, 0, 0]),
            NoisePolicy::NoiseAsCluster,
        )
        .unwrap();
        assert_eq!(ari(&t).unwrap(), 1.0);
    }

    #[test]
    fn ari_single_cluster_degenerate_case() {
        let t = contingency(
            &clusters(&[0, 0, 0]),
            &clusters(&[2, 2, 2]),
            NoisePolicy::NoiseAsCluster,
        )
        .unwrap();
        assert_eq!(ari(&t).unwrap(), 1.0);
        assert_eq!(nmi_max(&t), None);
    }

    #[test]
    fn ari_hand_value_minus_half() {
        let t = contingency(
            &clusters(&[0, 0, 1, 1]),
            &clusters(&[0, 1, 0, 1]),
            NoisePolicy::NoiseAsCluster,
        )
        .unwrap();
        assert!((ari(&t).unwrap() + 0.5).abs() < 1e-12);
        // independent marginals: zero mutual information
        assert_eq!(nmi_max(&t), Some(0.0));
    }

    #[test]
    fn nmi_identical_multicluster_is_one() {
        let t = contingency(
            &clusters(&[0, 0, 1, 2]),
            &clusters(&[5, 5, 7, 6]),
            NoisePolicy::NoiseAsCluster,
        )
        .unwrap();
        assert!((nmi_max(&t).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn metrics_symmetric_and_relabel_invariant() {
        let a = clusters(&[0, 0, 1, 1, 2, 2, -1]);
        let b = clusters(&[1, 1, 1, 0, 0, 2, 2]);
        let tab = |x: &[Assignment], y: &[Assignment]| {
            contingency(x, y, NoisePolicy::NoiseAsCluster).unwrap()
        };
        let (t_ab, t_ba) = (tab(&a, &b), tab(&b, &a));
        assert!((ari(&t_ab).unwrap() - ari(&t_ba).unwrap()).abs() < 1e-12);
        assert!((nmi_max(&t_ab).unwrap() - nmi_max(&t_ba).unwrap()).abs() < 1e-12);
        // relabel a: 0 -> 9, 1 -> 4, 2 -> 0
        let a2 = clusters(&[9, 9, 4, 4, 0, 0, -1]);
        let t2 = tab(&a2, &b);
        assert!((ari(&t_ab).unwrap() - ari(&t2).unwrap()).abs() < 1e-12);
        assert!((nmi_max(&t_ab).unwrap() - nmi_max(&t2).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn splitting_a_true_cluster_lowers_ari() {
        let truth = vec![0usize, 0, 0, 0, 1, 1, 1, 1];
        let perfect = clusters(&[0, 0, 0, 0, 1, 1, 1, 1]);
        let split = clusters(&[0, 0, 2, 2, 1, 1, 1, 1]);
        let (a1, _) = score_against_truth(&truth, &perfect, NoisePolicy::NoiseAsCluster).unwrap();
        let (a2, _) = score_against_truth(&truth, &split, NoisePolicy::NoiseAsCluster).unwrap();
        assert!(a2 < a1);
    }

    #[test]
    fn mutual_information_bounded_by_min_entropy() {
        let a = clusters(&[0, 0, 1, 1, 2, 2]);
        let b = clusters(&[0, 1, 0, 1, 0, 1]);
        let t = contingency(&a, &b, NoisePolicy::NoiseAsCluster).unwrap();
        let n = t.n as f64;
        let h = |sums: &[u64]| -> f64 {
            sums.iter()
                .filter(|&&c| c > 0)
                .map(|&c| {
                    let p = c as f64 / n;
                    -p * p.ln()
                })
                .sum()
        };
        let mi = nmi_max(&t).unwrap() * h(&t.row_sums).max(h(&t.col_sums));
        assert!(mi <= h(&t.row_sums).min(h(&t.col_sums)) + 1e-12);
    }

    #[test]
    fn length_mismatch_rejected() {
        let err = contingency(
            &clusters(&[0, 1]),
            &clusters(&[0]),
            NoisePolicy::NoiseAsCluster,
        )
        .unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }
}
