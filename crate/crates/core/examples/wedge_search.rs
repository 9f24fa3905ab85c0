//! Closed-form M-O against a brute-force trial-wedge search, including a
//! sloping backfill and a battered wall.

use sheetpile::pressure_models::*;

fn main() -> sheetpile::Result<()> {
    let cases = [
        ("vertical wall, level ground", WallSoilParams::from_degrees(35.0, 0.0, 0.0, 0.0, 19.0, 6.0)?),
        ("rough wall", WallSoilParams::from_degrees(35.0, 17.5, 0.0, 0.0, 19.0, 6.0)?),
        ("sloping backfill", WallSoilParams::from_degrees(35.0, 10.0, 5.0, 10.0, 19.0, 6.0)?),
    ];
    for (name, p) in cases {
        for kh in [0.0, 0.2] {
            let c = SeismicCoefficients::horizontal(kh);
            let closed = mo_coefficient(&p, c, PressureMode::Active)?;
            let w = wedge_oracle(&p, c, PressureMode::Active, 20_000)?;
            println!(
                "{name:<28} k_h {kh:.1}: K = {closed:.6}, wedge {:.6}, plane at {:.2} deg",
                w.k,
                w.plane_angle.to_degrees()
            );
        }
    }
    Ok(())
}
