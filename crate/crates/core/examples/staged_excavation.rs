//! Staged construction of the default wall on the coarse mesh, the static
//! pressure report on both sides and a checkpoint of the final state.
//!
//! Pass `--fine` for the default 0.25 to 1 m mesh (about half a minute).

use sheetpile::config::RunConfig;
use sheetpile::mesh::SiteConfig;
use sheetpile::pipeline::{run_static, static_profiles, static_rows};
use sheetpile::solvers::{load_checkpoint, save_checkpoint};

fn main() -> sheetpile::Result<()> {
    let mut cfg = RunConfig::default();
    if !std::env::args().any(|a| a == "--fine") {
        cfg.site = SiteConfig::coarse();
    }
    let (model, reports) = run_static(&cfg)?;
    for r in &reports {
        println!("{:<16} substeps {:>2}, iterations {:>3}, max displacement {:.2e} m", r.label, r.substeps, r.iterations, r.max_displacement);
    }
    let profiles = static_profiles(&model, &cfg)?;
    for row in static_rows(&cfg, &profiles, "static")? {
        println!(
            "{:<8} K = {:.4} (M-O {}), Y/H = {:?}",
            row.side.label(),
            row.k_fe,
            row.k_mo.csv(),
            row.y_over_h
        );
    }
    let text = save_checkpoint(&model);
    let (mut fresh, _) = cfg.build_model()?;
    load_checkpoint(&mut fresh, &text)?;
    assert_eq!(fresh.u, model.u);
    println!("checkpoint: {} bytes, reload exact", text.len());
    Ok(())
}
