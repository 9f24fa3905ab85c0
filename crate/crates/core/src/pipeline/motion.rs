//! Base acceleration records: parsing, synthesis and spectral peak.

use crate::error::{Error, Result};
use crate::solvers::GRAVITY;
use rustfft::{num_complex::Complex, FftPlanner};
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AccelUnits {
    #[serde(rename = "g")]
    G,
    #[serde(rename = "m/s2")]
    MetersPerSecond2,
}

impl AccelUnits {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g" => Ok(AccelUnits::G),
            "m/s2" | "m/s^2" | "m/s²" | "mps2" => Ok(AccelUnits::MetersPerSecond2),
            other => Err(Error::Motion(format!("unknown acceleration units '{other}'"))),
        }
    }

    /// Factor converting a sample to m/s².
    pub fn to_si(self) -> f64 {
        match self {
            AccelUnits::G => GRAVITY,
            AccelUnits::MetersPerSecond2 => 1.0,
        }
    }
}

/// Uniformly sampled horizontal base acceleration.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundMotion {
    pub dt: f64,
    pub samples: Vec<f64>,
    pub units: AccelUnits,
    pub label: String,
}

impl GroundMotion {
    pub fn new(dt: f64, samples: Vec<f64>, units: AccelUnits, label: impl Into<String>) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Motion(format!("time step must be positive, got {dt}")));
        }
        if samples.is_empty() {
            return Err(Error::Motion("motion has no samples".into()));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Motion("motion contains non-finite samples".into()));
        }
        Ok(Self {
            dt,
            samples,
            units,
            label: label.into(),
        })
    }

    /// Peak ground acceleration in g.
    pub fn pga(&self) -> f64 {
        let peak = self.samples.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        peak * self.units.to_si() / GRAVITY
    }

    pub fn duration(&self) -> f64 {
        self.dt * (self.samples.len() - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Acceleration (m/s²) at time `t` by linear interpolation; zero outside
    /// the record.
    pub fn acceleration_at(&self, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let s = t / self.dt;
        let i = s.floor() as usize;
        if i + 1 >= self.samples.len() {
            return if (s - (self.samples.len() - 1) as f64).abs() < 1e-9 {
                self.samples[self.samples.len() - 1] * self.units.to_si()
            } else {
                0.0
            };
        }
        let w = s - i as f64;
        ((1.0 - w) * self.samples[i] + w * self.samples[i + 1]) * self.units.to_si()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            samples: self.samples.iter().map(|v| v * factor).collect(),
            ..self.clone()
        }
    }

    /// Frequency (Hz) of the Fourier amplitude peak in `(0, f_max]`.
    pub fn predominant_frequency(&self, f_max: f64) -> Option<f64> {
        let n = self.samples.len();
        if n < 4 {
            return None;
        }
        let mut buf: Vec<Complex<f64>> = self.samples.iter().map(|&v| Complex::new(v, 0.0)).collect();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let df = 1.0 / (n as f64 * self.dt);
        let mut best: Option<(f64, f64)> = None;
        for (k, c) in buf.iter().enumerate().take(n / 2 + 1).skip(1) {
            let f = k as f64 * df;
            if f > f_max {
                break;
            }
            let a = c.norm();
            if best.map_or(true, |(_, b)| a > b) {
                best = Some((f, a));
            }
        }
        best.filter(|(_, a)| *a > 0.0).map(|(f, _)| f)
    }
}

/// Parses a motion from text: two columns `time, acceleration`, or one
/// column with `dt=<s>` and optionally `units=<g|m/s2>` header lines.
/// `#` starts a comment. A `units` argument that contradicts the header is
/// rejected.
pub fn parse_ground_motion(text: &str, units: Option<AccelUnits>, label: &str) -> Result<GroundMotion> {
    let mut header_dt = None;
    let mut header_units = None;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((k, v)) = line.split_once('=') {
            match k.trim().to_ascii_lowercase().as_str() {
                "dt" => {
                    header_dt = Some(
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| Error::Motion(format!("line {}: bad dt '{}'", ln + 1, v.trim())))?,
                    )
                }
                "units" => header_units = Some(AccelUnits::parse(v)?),
                other => return Err(Error::Motion(format!("line {}: unknown header '{other}'", ln + 1))),
            }
            continue;
        }
        let vals = line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| Error::Motion(format!("line {}: cannot parse '{s}'", ln + 1))))
            .collect::<Result<Vec<f64>>>()?;
        rows.push(vals);
    }
    let units = match (units, header_units) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Motion(format!("units argument {a:?} contradicts file header {b:?}")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(Error::Motion("acceleration units not specified".into())),
    };
    if rows.is_empty() {
        return Err(Error::Motion("motion file contains no samples".into()));
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(Error::Motion("inconsistent column count".into()));
    }
    match (width, header_dt) {
        (1, Some(dt)) => GroundMotion::new(dt, rows.into_iter().map(|r| r[0]).collect(), units, label),
        (1, None) => Err(Error::Motion("single-column motion needs a dt= header".into())),
        (2, _) => {
            if rows.len() < 2 {
                return Err(Error::Motion("two-column motion needs at least two samples".into()));
            }
            let t0 = rows[0][0];
            let dt = rows[1][0] - t0;
            if !(dt > 0.0) {
                return Err(Error::Motion("time column must increase".into()));
            }
            for (i, r) in rows.iter().enumerate() {
                let expect = t0 + i as f64 * dt;
                if (r[0] - expect).abs() > 1e-6 {
                    return Err(Error::Motion(format!(
                        "non-uniform sampling at row {}: t = {} but expected {expect}",
                        i + 1,
                        r[0]
                    )));
                }
            }
            if let Some(h) = header_dt {
                if (h - dt).abs() > 1e-6 {
                    return Err(Error::Motion("dt header contradicts the time column".into()));
                }
            }
            GroundMotion::new(dt, rows.into_iter().map(|r| r[1]).collect(), units, label)
        }
        (w, _) => Err(Error::Motion(format!("expected one or two columns, found {w}"))),
    }
}

pub fn load_ground_motion(path: &Path, units: Option<AccelUnits>) -> Result<GroundMotion> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Motion(format!("{}: {e}", path.display())))?;
    let label = path.file_stem().and_then(|s| s.to_str()).unwrap_or("motion");
    parse_ground_motion(&text, units, label)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthKind {
    Harmonic,
    Ricker,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthSpec {
    pub kind: SynthKind,
    /// Peak amplitude (g).
    pub amplitude_g: f64,
    /// Harmonic frequency or Ricker centre frequency (Hz).
    pub frequency: f64,
    pub duration: f64,
    pub dt: f64,
    /// Length of the cosine ramps at both ends of a harmonic (s).
    #[serde(default = "default_taper")]
    pub taper: f64,
}

fn default_taper() -> f64 {
    1.0
}

impl SynthSpec {
    pub fn harmonic(amplitude_g: f64, frequency: f64, duration: f64, dt: f64) -> Self {
        Self {
            kind: SynthKind::Harmonic,
            amplitude_g,
            frequency,
            duration,
            dt,
            taper: default_taper(),
        }
    }

    pub fn ricker(amplitude_g: f64, frequency: f64, duration: f64, dt: f64) -> Self {
        Self {
            kind: SynthKind::Ricker,
            taper: 0.0,
            ..Self::harmonic(amplitude_g, frequency, duration, dt)
        }
    }

    pub fn label(&self) -> String {
        let k = match self.kind {
            SynthKind::Harmonic => "harmonic",
            SynthKind::Ricker => "ricker",
        };
        format!("{k}_{}g_{}Hz", self.amplitude_g, self.frequency)
    }
}

/// Builds a synthetic motion in g. Frequencies at or above `f_cutoff` are
/// rejected.
pub fn synthesize_motion(spec: &SynthSpec, f_cutoff: f64) -> Result<GroundMotion> {
    if !(spec.frequency > 0.0) || spec.frequency >= f_cutoff {
        return Err(Error::Motion(format!(
            "frequency {} Hz must lie in (0, {f_cutoff}) Hz",
            spec.frequency
        )));
    }
    if !(spec.dt > 0.0 && spec.duration > 0.0) {
        return Err(Error::Motion("duration and dt must be positive".into()));
    }
    let n = (spec.duration / spec.dt).round() as usize;
    let w = 2.0 * std::f64::consts::PI * spec.frequency;
    let samples: Vec<f64> = match spec.kind {
        SynthKind::Harmonic => (0..n)
            .map(|i| {
                let t = i as f64 * spec.dt;
                let end = spec.duration - t;
                let ramp = |s: f64| {
                    if spec.taper <= 0.0 || s >= spec.taper {
                        1.0
                    } else {
                        0.5 * (1.0 - (std::f64::consts::PI * s / spec.taper).cos())
                    }
                };
                spec.amplitude_g * (w * t).sin() * ramp(t) * ramp(end)
            })
            .collect(),
        SynthKind::Ricker => {
            let t0 = (0.5 * spec.duration / spec.dt).round() * spec.dt;
            let pf2 = (std::f64::consts::PI * spec.frequency).powi(2);
            (0..n)
                .map(|i| {
                    let s = i as f64 * spec.dt - t0;
                    spec.amplitude_g * (1.0 - 2.0 * pf2 * s * s) * (-pf2 * s * s).exp()
                })
                .collect()
        }
    };
    GroundMotion::new(spec.dt, samples, AccelUnits::G, spec.label())
}
