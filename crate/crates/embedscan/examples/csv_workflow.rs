//! The file-based workflow: write a dataset as CSV, load it back, embed,
//! cluster, and leave every artifact (embedding, labeling, sweep, fuzzy
//! edges, manifest) on disk in the documented formats.
//!
//! Run with: cargo run --example csv_workflow

use embedscan::dataset::{load_csv, presets, save_csv, ColumnSpec, CsvOptions};
use embedscan::density::{dbscan, DbscanParams};
use embedscan::graph::{build_fuzzy_graph, NeighborConvention};
use embedscan::layout::{optimize_layout, LayoutConfig};
use embedscan::sweep::{eps_sweep_points, write_manifest, SweepSpec};

fn main() -> embedscan::Result<()> {
    let dir = std::env::temp_dir().join("embedscan_workflow");
    std::fs::create_dir_all(&dir)?;

    let data_path = dir.join("u3.csv");
    save_csv(&presets::u3(80, 7)?, &data_path)?;

    let ds = load_csv(
        &data_path,
        &CsvOptions {
            has_header: true,
            label_column: Some(ColumnSpec::Name("label".into())),
        },
    )?;
    println!("loaded {} ({} x {})", ds.name, ds.n_obs(), ds.n_features());

    let graph = build_fuzzy_graph(&ds.points, 5, NeighborConvention::CountsSelf)?;
    graph.write_edge_csv(dir.join("graph_edges.csv"))?;

    let cfg = LayoutConfig {
        n_epochs: Some(200),
        seed: 7,
        ..Default::default()
    };
    let embedding = optimize_layout(&graph, &cfg)?;
    embedding.write_csv(dir.join("embedding.csv"), ds.labels.as_deref())?;

    let labeling = dbscan(&embedding.coords, &DbscanParams::new(0.8, 5))?;
    labeling.write_csv(dir.join("labels.csv"))?;

    let spec = SweepSpec::new(0.01, 10.0, 0.05, 5);
    let sweep = eps_sweep_points(&embedding.coords, &spec, ds.labels.as_ref().unwrap())?;
    sweep.write_csv(dir.join("sweep.csv"))?;
    write_manifest(
        dir.join("sweep.csv.manifest"),
        &[
            ("dataset".into(), ds.name.clone()),
            ("k".into(), "5".into()),
            ("dim".into(), cfg.dim.to_string()),
            ("seed".into(), cfg.seed.to_string()),
            ("eps_grid".into(), "0.01..10 step 0.05".into()),
            ("min_pts".into(), spec.min_pts.to_string()),
        ],
    )?;

    println!("max ARI {:.3} at eps {:.2}", sweep.max_ari, sweep.eps_opt_ari);
    println!("artifacts in {}", dir.display());
    for name in ["u3.csv", "graph_edges.csv", "embedding.csv", "labels.csv", "sweep.csv", "sweep.csv.manifest"] {
        println!("  {name}");
    }
    Ok(())
}
