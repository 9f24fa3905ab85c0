//! Single integration point driven in drained plane-strain compression at
//! constant lateral stress, showing the Mohr-Coulomb strength plateau.

use sheetpile::config::RunConfig;
use sheetpile::constitutive::drained_compression;

fn main() -> sheetpile::Result<()> {
    let cfg = RunConfig::default();
    let (mp, ep) = (cfg.soil.strength()?, cfg.soil.elastic()?);
    let sigma3 = 100.0;
    let path = drained_compression(&mp, &ep, sigma3, 2e-5, 400)?;
    for (i, s1) in path.iter().enumerate().step_by(40) {
        println!("axial strain {:.4}%  sigma1 {s1:.2} kPa", (i + 1) as f64 * 2e-3);
    }
    let phi = mp.phi;
    let limit = sigma3 * ((1.0 + phi.sin()) / (1.0 - phi.sin())) + 2.0 * mp.cohesion_c * (1.0 + phi.sin()).sqrt() / (1.0 - phi.sin()).sqrt();
    println!("plateau {:.2} kPa, closed form {limit:.2} kPa", path.last().unwrap());
    Ok(())
}
