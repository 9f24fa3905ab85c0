//! Reads a two-column acceleration record, filters it and reports its
//! predominant frequency. Without an argument a synthetic record is used.

use sheetpile::pipeline::*;

fn main() -> sheetpile::Result<()> {
    let motion = match std::env::args().nth(1) {
        Some(path) => load_ground_motion(path.as_ref(), None)?,
        None => {
            let text: String = (0..2000)
                .map(|i| {
                    let t = i as f64 * 0.005;
                    let a = 0.2 * (2.0 * std::f64::consts::PI * 2.5 * t).sin() + 0.05 * (2.0 * std::f64::consts::PI * 22.0 * t).sin();
                    format!("{t:.3} {a:.6}\n")
                })
                .collect();
            parse_ground_motion(&text, Some(AccelUnits::G), "two_tones")?
        }
    };
    println!("{}: {} samples at dt {} s, pga {:.3}", motion.label, motion.len(), motion.dt, motion.pga());
    let filtered = lowpass_filter(&motion, 15.0)?;
    println!("after 15 Hz low-pass: pga {:.3}", filtered.pga());
    if let Some(f) = filtered.predominant_frequency(15.0) {
        println!("predominant frequency {f:.2} Hz");
    }
    let ricker = synthesize_motion(&SynthSpec::ricker(0.1, 3.0, 4.0, 0.005), 15.0)?;
    println!("{}: pga {:.3}", ricker.label, ricker.pga());
    Ok(())
}
