//! Write every built-in synthetic family to ./data as CSV.
//!
//! Run with: cargo run --example generate_datasets

use embedscan::dataset::{
    generate_nested_spheres, generate_planar_toy, presets, save_csv, PlanarKind, PlanarToyParams,
};

fn main() -> embedscan::Result<()> {
    let dir = std::path::Path::new("data");
    std::fs::create_dir_all(dir)?;
    let seed = 1;

    let planar = PlanarToyParams {
        points_per_cluster: 300,
        ..Default::default()
    };
    let sets = vec![
        presets::e100(200, seed)?,
        presets::e1000(200, seed)?,
        presets::u3(200, seed)?,
        presets::u1003(200, seed)?,
        generate_nested_spheres(&[1.0, 2.0, 3.0], &[500, 500, 500], 0.0, seed)?,
        generate_planar_toy(PlanarKind::Bridged, &planar, seed)?,
        generate_planar_toy(PlanarKind::Overlapping, &planar, seed)?,
        generate_planar_toy(PlanarKind::Outliers, &planar, seed)?,
        generate_planar_toy(PlanarKind::OutliersWithNoise, &planar, seed)?,
    ];
    for ds in sets {
        let path = dir.join(format!("{}.csv", ds.name));
        save_csv(&ds, &path)?;
        println!(
            "{:<22} {:>6} x {:<5} -> {}",
            ds.name,
            ds.n_obs(),
            ds.n_features(),
            path.display()
        );
    }
    Ok(())
}
