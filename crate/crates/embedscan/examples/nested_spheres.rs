//! Three concentric sphere surfaces: connectedness survives the embedding,
//! nesting does not - which is exactly what density clustering needs.
//!
//! Run with: cargo run --example nested_spheres

use embedscan::dataset::generate_nested_spheres;
use embedscan::graph::NeighborConvention;
use embedscan::layout::LayoutConfig;
use embedscan::sweep::{eps_sweep_points, run_pipeline, SweepSpec};

fn main() {
    // 700 points per surface keeps the 15-neighbor reach on the outermost
    // sphere below the shell gap
    let ds = generate_nested_spheres(&[1.0, 2.0, 3.0], &[700, 700, 700], 0.0, 11).unwrap();
    let truth = ds.labels.clone().unwrap();
    let spec = SweepSpec::new(0.01, 10.0, 0.05, 5);

    let raw = eps_sweep_points(&ds.points, &spec, &truth).unwrap();
    println!(
        "raw 3-D data: max ARI {:.3}, ARI=1 for eps in {:?}",
        raw.max_ari,
        raw.perfect_ranges()
    );

    for k in [7usize, 15] {
        let layout = LayoutConfig {
            n_epochs: Some(200),
            seed: 3,
            ..Default::default()
        };
        let res = run_pipeline(&ds, k, NeighborConvention::CountsSelf, &layout, &spec).unwrap();
        println!(
            "2-D embedding, k = {k:>2}: max ARI {:.3}, ARI=1 for eps in {:?}",
            res.sweep.max_ari,
            res.sweep.perfect_ranges()
        );
    }
    println!("\nThe spheres cannot be flattened isometrically, so their shape and");
    println!("nesting distort, but the three connected components stay separated");
    println!("and the usable eps range widens dramatically.");
}
