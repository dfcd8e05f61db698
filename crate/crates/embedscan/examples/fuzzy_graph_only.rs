//! Cluster on the fuzzy graph weights alone (d = 1 - v), skipping the
//! layout. The graph already amplifies separability, but the usable eps
//! range is capped at 1 and much narrower than with an embedding.
//!
//! Run with: cargo run --example fuzzy_graph_only

use embedscan::dataset::presets;
use embedscan::graph::NeighborConvention;
use embedscan::layout::LayoutConfig;
use embedscan::sweep::{fuzzy_only_sweep, run_pipeline, SweepSpec};

fn main() {
    let ds = presets::u3(100, 40).unwrap();

    let fuzzy_spec = SweepSpec::new(0.01, 1.5, 0.01, 5);
    let weights_only =
        fuzzy_only_sweep(&ds, 5, NeighborConvention::CountsSelf, &fuzzy_spec).unwrap();
    println!(
        "weights only: max ARI {:.3} at eps {:.2}; ARI > 0 over {:?}",
        weights_only.max_ari, weights_only.eps_opt_ari, weights_only.ari_positive
    );
    let tail = weights_only.rows.iter().filter(|r| r.eps >= 1.0).count();
    println!("  (all {tail} grid points past eps = 1 are identical: d_ij <= 1)");

    let embed_spec = SweepSpec::new(0.01, 15.0, 0.05, 5);
    let layout = LayoutConfig {
        n_epochs: Some(300),
        seed: 2,
        ..Default::default()
    };
    let piped = run_pipeline(&ds, 5, NeighborConvention::CountsSelf, &layout, &embed_spec).unwrap();
    println!(
        "with layout:  max ARI {:.3} at eps {:.2}; ARI > 0 over {:?}",
        piped.sweep.max_ari, piped.sweep.eps_opt_ari, piped.sweep.ari_positive
    );
}
