//! Zero-phase Butterworth low-pass filtering.

use super::motion::GroundMotion;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Butterworth order; applied forward and backward the magnitude is squared.
pub const FILTER_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Biquad {
    b: [f64; 3],
    a: [f64; 2],
}

impl Biquad {
    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[0] + self.a[1])
    }

    /// Direct form II transposed, states primed for a constant input `x[0]`.
    fn run(&self, x: &[f64]) -> Vec<f64> {
        let Some(&x0) = x.first() else { return Vec::new() };
        let y0 = self.dc_gain() * x0;
        let mut z2 = self.b[2] * x0 - self.a[1] * y0;
        let mut z1 = self.b[1] * x0 - self.a[0] * y0 + z2;
        x.iter()
            .map(|&v| {
                let y = self.b[0] * v + z1;
                z1 = self.b[1] * v - self.a[0] * y + z2;
                z2 = self.b[2] * v - self.a[1] * y;
                y
            })
            .collect()
    }
}

/// Second-order sections of a digital Butterworth low-pass (bilinear
/// transform with pre-warping).
fn butterworth_sections(order: usize, f_cutoff: f64, fs: f64) -> Vec<Biquad> {
    let k = (PI * f_cutoff / fs).tan();
    (0..order / 2)
        .map(|i| {
            let theta = PI * (2 * i + 1) as f64 / (2 * order) as f64;
            let q2 = 2.0 * theta.sin();
            let norm = 1.0 + q2 * k + k * k;
            let b0 = k * k / norm;
            Biquad {
                b: [b0, 2.0 * b0, b0],
                a: [2.0 * (k * k - 1.0) / norm, (1.0 - q2 * k + k * k) / norm],
            }
        })
        .collect()
}

fn cascade(sections: &[Biquad], x: &[f64]) -> Vec<f64> {
    sections.iter().fold(x.to_vec(), |acc, s| s.run(&acc))
}

/// Forward-backward filtering with odd reflection padding at both ends.
pub fn filtfilt_lowpass(x: &[f64], f_cutoff: f64, dt: f64) -> Result<Vec<f64>> {
    let fs = 1.0 / dt;
    if !(f_cutoff > 0.0) || f_cutoff >= 0.5 * fs {
        return Err(Error::InvalidParameter(format!(
            "cutoff {f_cutoff} Hz must lie in (0, {}) Hz (Nyquist)",
            0.5 * fs
        )));
    }
    let n = x.len();
    if n < 2 {
        return Ok(x.to_vec());
    }
    let sections = butterworth_sections(FILTER_ORDER, f_cutoff, fs);
    let pad = (n - 1).min((3.0 * fs / f_cutoff).ceil() as usize + 3 * FILTER_ORDER);
    let mut ext = Vec::with_capacity(n + 2 * pad);
    for i in (1..=pad).rev() {
        ext.push(2.0 * x[0] - x[i]);
    }
    ext.extend_from_slice(x);
    for i in 1..=pad {
        ext.push(2.0 * x[n - 1] - x[n - 1 - i]);
    }
    let mut y = cascade(&sections, &ext);
    y.reverse();
    let mut y = cascade(&sections, &y);
    y.reverse();
    Ok(y[pad..pad + n].to_vec())
}

/// Zero-phase low-pass of a motion at `f_cutoff` (Hz).
pub fn lowpass_filter(motion: &GroundMotion, f_cutoff: f64) -> Result<GroundMotion> {
    let samples = filtfilt_lowpass(&motion.samples, f_cutoff, motion.dt)?;
    GroundMotion::new(motion.dt, samples, motion.units, motion.label.clone())
}
