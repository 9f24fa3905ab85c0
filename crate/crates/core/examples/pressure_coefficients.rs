//! Pseudo-static earth pressure coefficients for the default backfill.
//!
//! Prints Mononobe-Okabe active and passive coefficients, the Wood rigid-wall
//! increment and the Seed-Whitman style resultant height over a k_h grid.

use sheetpile::pressure_models::*;

fn main() -> sheetpile::Result<()> {
    let wall = WallSoilParams::simple(40.0, 19.6, 6.0)?;
    println!("k_h    theta(deg)  K_ae     K_pe     dK_wood  Y/H");
    for i in 0..=8 {
        let kh = 0.05 * i as f64;
        let c = SeismicCoefficients::horizontal(kh);
        let ka = mo_coefficient(&wall, c, PressureMode::Active)?;
        let kp = mo_coefficient(&wall, c, PressureMode::Passive)?;
        let wood = wood_rigid_increment(&wall, kh, WoodFactor::default())?;
        let p_static = mo_force(&wall, SeismicCoefficients::default(), PressureMode::Active)?;
        let dp = force_from_coefficient(wall.gamma, wall.height_h, 0.0, ka) - p_static;
        let y = resultant_height_decomposed(p_static, dp, wall.height_h)?;
        println!(
            "{kh:<6.2} {:<11.3} {ka:<8.4} {kp:<8.4} {:<8.4} {:.3}",
            seismic_angle(c)?.to_degrees(),
            wood.delta_k,
            y / wall.height_h
        );
    }
    // past tan(phi) no active wedge can be in equilibrium
    match mo_coefficient(&wall, SeismicCoefficients::horizontal(0.9), PressureMode::Active) {
        Err(e) => println!("k_h = 0.9: {e}"),
        Ok(k) => println!("k_h = 0.9: K = {k}"),
    }
    Ok(())
}
