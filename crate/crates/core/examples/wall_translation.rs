//! A smooth rigid wall moved away from a dry sand box until the active
//! state forms; the face coefficient approaches the Coulomb value.

use sheetpile::config::RunConfig;
use sheetpile::fem::QuadratureRule;
use sheetpile::solvers::benchmarks::*;
use sheetpile::solvers::StaticSolveSettings;

fn main() -> sheetpile::Result<()> {
    let cfg = RunConfig::default();
    let material = cfg.materials()?[0];
    let mut model = smooth_wall_box(6.0, 12.0, 10, 20, material, cfg.soil.k0, &QuadratureRule::full())?;
    println!("at rest: K = {:.4}", wall_face_coefficient(&model));
    let settings = StaticSolveSettings {
        load_substeps: 1,
        ..cfg.static_solve.settings()
    };
    let path = translate_wall(&mut model, 0.002, 100, &settings)?;
    for p in path.iter().step_by(10) {
        println!("wall moved {:.2} mm: K = {:.4}", p.displacement * 1e3, p.k);
    }
    if let Some(limit) = active_limit(&path) {
        println!("active limit K = {:.4} at {:.2} mm; Coulomb 0.2174", limit.k, limit.displacement * 1e3);
    }
    Ok(())
}
