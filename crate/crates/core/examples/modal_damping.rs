//! Lowest natural frequency of the site model and Rayleigh coefficients
//! giving the target damping at that frequency and a motion frequency.

use sheetpile::config::RunConfig;
use sheetpile::solvers::{lowest_frequency, rayleigh_coefficients, rayleigh_ratio};

fn main() -> sheetpile::Result<()> {
    let cfg = RunConfig::default();
    let (model, _) = cfg.build_model()?;
    let modal = lowest_frequency(&model)?;
    println!("f1 = {:.3} Hz ({} inverse iterations, residual {:.1e})", modal.frequency, modal.iterations, modal.relative_residual);
    let f2 = 2.0;
    let (a0, a1) = rayleigh_coefficients(cfg.damping.zeta, modal.frequency, f2)?;
    println!("a0 = {a0:.5} 1/s, a1 = {a1:.3e} s");
    for f in [0.5, 1.0, f2, modal.frequency, 10.0, 15.0] {
        println!("  zeta({f:>5.2} Hz) = {:.4}", rayleigh_ratio(a0, a1, f));
    }
    Ok(())
}
