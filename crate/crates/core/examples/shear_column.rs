//! A uniform soil column checked against shear-beam theory: fundamental
//! frequency, free-vibration period and damped harmonic amplification.

use sheetpile::config::RunConfig;
use sheetpile::solvers::benchmarks::*;
use sheetpile::solvers::{lowest_frequency, rayleigh_coefficients, Material};

fn main() -> sheetpile::Result<()> {
    let soil = RunConfig::default().soil.elastic()?;
    let h = 15.0;
    let column = shear_column(h, 1.0, 15, 1, Material::Elastic(soil))?;
    let f1 = lowest_frequency(&column)?.frequency;
    println!("f1 = {f1:.4} Hz, Vs/4H = {:.4} Hz", shear_beam_frequency(&soil, h));

    let (measured, modal) = free_vibration_period(&mut column.clone(), 1e-3, 5, 100)?;
    println!("free vibration: T = {measured:.5} s, modal {modal:.5} s");

    let (a0, a1) = rayleigh_coefficients(0.05, f1, 3.0 * f1)?;
    for ratio in [0.5, 0.8, 1.2] {
        let f = ratio * f1;
        let fe = harmonic_amplification(&mut column.clone(), f, a0, a1, 12.0, 2.0, 0.002)?;
        println!("drive {f:.3} Hz: amplification {fe:.3}, theory {:.3}", shear_beam_amplification(&soil, h, f, a0, a1));
    }
    Ok(())
}
