//! ARI and NMI scoring, including the degenerate single-cluster case and
//! the two ways of treating noise points.
//!
//! Run with: cargo run --example score_labelings

use embedscan::density::Assignment;
use embedscan::metrics::{ari, contingency, labels_to_assignments, nmi_max, NoisePolicy};

fn show(name: &str, a: &[Assignment], b: &[Assignment], policy: NoisePolicy) {
    let t = contingency(a, b, policy).unwrap();
    let nmi = nmi_max(&t).map_or("undefined".into(), |v| format!("{v:.4}"));
    println!(
        "{name:<34} ARI {:>7.4}   NMI {nmi}   (n = {})",
        ari(&t).unwrap(),
        t.n
    );
}

fn main() {
    let truth = labels_to_assignments(&[0, 0, 0, 1, 1, 1, 2, 2]);

    show(
        "identical partitions",
        &truth,
        &labels_to_assignments(&[5, 5, 5, 9, 9, 9, 1, 1]),
        NoisePolicy::NoiseAsCluster,
    );
    show(
        "one cluster split in two",
        &truth,
        &labels_to_assignments(&[0, 0, 3, 1, 1, 1, 2, 2]),
        NoisePolicy::NoiseAsCluster,
    );
    show(
        "anti-correlated blocks",
        &labels_to_assignments(&[0, 0, 1, 1]),
        &labels_to_assignments(&[0, 1, 0, 1]),
        NoisePolicy::NoiseAsCluster,
    );
    show(
        "single cluster vs single cluster",
        &labels_to_assignments(&[0; 8]),
        &labels_to_assignments(&[3; 8]),
        NoisePolicy::NoiseAsCluster,
    );

    // two noise points, scored both ways
    let with_noise = vec![
        Assignment::Cluster(0),
        Assignment::Cluster(0),
        Assignment::Cluster(0),
        Assignment::Cluster(1),
        Assignment::Cluster(1),
        Assignment::Cluster(1),
        Assignment::Noise,
        Assignment::Noise,
    ];
    show(
        "noise grouped as its own cluster",
        &truth,
        &with_noise,
        NoisePolicy::NoiseAsCluster,
    );
    show(
        "noise points excluded",
        &truth,
        &with_noise,
        NoisePolicy::Exclude,
    );
}
