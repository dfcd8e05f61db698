//! Walk through the six-object toy example end to end: why a global
//! density threshold is brittle on the raw distances, how the fuzzy graph
//! sharpens the two groups as k shrinks, and what the graph layout adds.
//!
//! Run with: cargo run --example toy_walkthrough

use embedscan::demo::{toy_dissimilarity, toy_labels};
use embedscan::density::{dbscan_precomputed, DbscanParams};
use embedscan::graph::{build_fuzzy_graph_precomputed, graph_to_dissimilarity, NeighborConvention};
use embedscan::layout::{optimize_layout, LayoutConfig};
use embedscan::sweep::{eps_sweep, eps_sweep_points, SweepSpec};

fn main() {
    let dist = toy_dissimilarity();
    let truth = toy_labels();

    println!("== raw distances: one entry away from a different answer ==");
    for eps in [0.75, 0.74] {
        let labeling = dbscan_precomputed(&dist, &DbscanParams::new(eps, 2)).unwrap();
        let ids: Vec<i64> = labeling.assignments.iter().map(|a| a.as_i64()).collect();
        println!(
            "eps {eps}: {} cluster(s), {} noise, assignment {ids:?}",
            labeling.n_clusters,
            labeling.n_noise()
        );
    }

    println!("\n== fuzzy graphs at shrinking neighbor counts ==");
    for k in [6usize, 3, 2] {
        let graph = build_fuzzy_graph_precomputed(&dist, k, NeighborConvention::CountsSelf).unwrap();
        println!("k = {k}: affinity matrix (blank = no edge)");
        for i in 0..6 {
            let row: Vec<String> = (0..6)
                .map(|j| match graph.weight(i, j) {
                    _ if i == j => "    -".into(),
                    Some(v) => format!("{v:5.2}"),
                    None => "     ".into(),
                })
                .collect();
            println!("  [{}]", row.join(" "));
        }
        let spec = SweepSpec::new(0.01, 1.5, 0.01, 2);
        let sweep = eps_sweep(&graph_to_dissimilarity(&graph), &spec, &truth).unwrap();
        println!(
            "  weights-only clustering: perfect for eps in {:?}\n",
            sweep.perfect_ranges()
        );
    }

    println!("== adding the layout step widens the usable eps range ==");
    for k in [6usize, 3, 2] {
        let graph = build_fuzzy_graph_precomputed(&dist, k, NeighborConvention::CountsSelf).unwrap();
        let cfg = LayoutConfig {
            n_epochs: Some(200),
            seed: 7,
            ..Default::default()
        };
        let emb = optimize_layout(&graph, &cfg).unwrap();
        let spec = SweepSpec::new(0.01, 50.0, 0.01, 2);
        let sweep = eps_sweep_points(&emb.coords, &spec, &truth).unwrap();
        println!("k = {k}: perfect for eps in {:?}", sweep.perfect_ranges());
    }
}
