//! Post-processing arithmetic on a wall pressure profile: resultant force,
//! back-calculated coefficient, application height and peak picking.

use sheetpile::pipeline::*;

fn main() -> sheetpile::Result<()> {
    let (gamma, h, k) = (19.62, 6.0, 0.3);
    let n = 12;
    let dh = h / n as f64;
    let y: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * dh).collect();
    let sigma: Vec<f64> = y.iter().map(|y| k * gamma * (h - y)).collect();
    let profile = PressureProfile::new(WallSide::Active, sigma, vec![dh; n], y, h)?;
    let p = profile.resultant();
    let (yy, ratio) = application_height(&profile)?;
    println!("P = {p:.3} kN/m, K = {:.4}, Y = {yy:.3} m, Y/H = {ratio:.4}", back_calculate_k(p, gamma, h, 0.0)?);

    let series: Vec<f64> = (0..200).map(|i| 0.2 * (i as f64 * 0.1).sin() * (-(i as f64) * 0.01).exp()).collect();
    let peaks = select_peaks(&series, 0.01);
    println!("{} peaks, first at steps {:?}", peaks.len(), &peaks[..peaks.len().min(4)]);
    println!("k_h for a_x = -2 m/s2 on the active side: {:.3}", kh_from_acceleration(-2.0, WallSide::Active, 9.81));
    Ok(())
}
