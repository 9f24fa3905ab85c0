//! Builds the graded site mesh, lists the construction stages and checks
//! element sizes against the wave-resolution rule.

use sheetpile::config::RunConfig;
use sheetpile::mesh::{build_site_mesh, stage_plan, wave_resolution_check};

fn main() -> sheetpile::Result<()> {
    let cfg = RunConfig::default();
    let mesh = build_site_mesh(&cfg.site)?;
    println!(
        "{} nodes, {} elements, domain {:.1} x {:.1} m",
        mesh.nodes.len(),
        mesh.elements.len(),
        cfg.site.total_width(),
        cfg.site.total_height()
    );
    for (tag, n) in mesh.region_counts() {
        println!("  {:<14} {n}", tag.label());
    }
    for stage in stage_plan(&cfg.site, &mesh)? {
        println!("stage '{}' removes {} elements", stage.label, stage.deactivate.len());
    }
    let report = wave_resolution_check(&mesh, &[cfg.soil.elastic()?, cfg.wall.elastic()?], cfg.dynamic.f_cutoff);
    println!(
        "soil size limit {:.3} m at {} Hz: {}",
        report.limits[0],
        report.f_cutoff,
        if report.passes() { "all elements pass" } else { "some elements too large" }
    );
    if let Some(path) = std::env::args().nth(1) {
        std::fs::write(&path, mesh.export_text())?;
        println!("mesh written to {path}");
    }
    Ok(())
}
