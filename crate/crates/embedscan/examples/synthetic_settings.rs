//! Compare DBSCAN on raw coordinates against DBSCAN on a 2-D embedding for
//! the four synthetic mixture settings (equal and unequal densities, with
//! and without irrelevant features).
//!
//! Sized for a debug build; pass --release for larger runs.
//!
//! Run with: cargo run --example synthetic_settings

use embedscan::dataset::presets;
use embedscan::graph::NeighborConvention;
use embedscan::layout::LayoutConfig;
use embedscan::sweep::{eps_sweep_points, run_pipeline, SweepSpec};

fn main() {
    let per_cluster = 150;
    let spec = SweepSpec::new(0.01, 15.0, 0.05, 5);
    let layout = LayoutConfig {
        n_epochs: Some(500),
        seed: 1,
        ..Default::default()
    };

    println!("setting    raw max ARI   embedded max ARI   ARI=1 share of grid");
    for (name, ds) in [
        ("e100", presets::e100(per_cluster, 41).unwrap()),
        ("e1000", presets::e1000(per_cluster, 42).unwrap()),
        ("u3", presets::u3(per_cluster, 40).unwrap()),
        ("u1003", presets::u1003(per_cluster, 43).unwrap()),
    ] {
        let truth = ds.labels.clone().unwrap();
        let raw = eps_sweep_points(&ds.points, &spec, &truth).unwrap();
        let piped = run_pipeline(&ds, 5, NeighborConvention::CountsSelf, &layout, &spec).unwrap();
        let share = piped.sweep.rows.iter().filter(|r| r.ari == 1.0).count() as f64
            / piped.sweep.rows.len() as f64;
        println!(
            "{name:<10} {:>11.3} {:>18.3} {:>21.2}",
            raw.max_ari, piped.sweep.max_ari, share
        );
    }
    println!("\nA single threshold struggles with unequal densities and diffuse");
    println!("high-dimensional clusters; the embedding concentrates each cluster");
    println!("so a wide band of thresholds works. The e100 mixture stays short");
    println!("of perfect: its clusters interpenetrate so strongly that the k-NN");
    println!("graph itself mixes them.");
}
