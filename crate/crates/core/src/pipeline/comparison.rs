//! Back-calculated coefficients at k_h peaks against the analytical models.

use super::pressure::{application_height, back_calculate_k, select_peaks, PressureProfile, WallSide};
use super::run::DynamicRecord;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::pressure_models::{mo_coefficient, wood_rigid_increment, SeismicCoefficients, WallSoilParams, WoodFactor};

/// Analytical value or the reason it is missing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Analytic {
    Value(f64),
    /// No equilibrium wedge exists at this coefficient.
    Exceeded,
    NotApplicable,
}

impl Analytic {
    pub fn value(self) -> Option<f64> {
        match self {
            Analytic::Value(v) => Some(v),
            _ => None,
        }
    }

    pub fn csv(self) -> String {
        match self {
            Analytic::Value(v) => format!("{v:.6}"),
            Analytic::Exceeded => "exceeded".into(),
            Analytic::NotApplicable => "NA".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    /// Zero for the pre-shaking static row.
    pub time: f64,
    pub is_static: bool,
    pub side: WallSide,
    pub k_h: f64,
    pub k_fe: f64,
    pub k_mo: Analytic,
    pub k_wood: Analytic,
    pub y: Option<f64>,
    pub y_over_h: Option<f64>,
    pub motion: String,
    /// Index into the recorded series (`None` for static rows).
    pub step: Option<usize>,
}

impl ComparisonRow {
    /// `(K_fe − K_mo) / K_mo` when the analytical value exists.
    pub fn relative_deviation(&self) -> Option<f64> {
        self.k_mo.value().map(|m| (self.k_fe - m) / m)
    }
}

/// Per-side statistics over the dynamic (peak) rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SideSummary {
    pub rows: usize,
    pub mean_signed_deviation: Option<f64>,
    pub mean_abs_deviation: Option<f64>,
    /// Fraction of rows with `K_fe < K_mo` among rows with a value.
    pub fraction_below_mo: Option<f64>,
    /// Mean K_fe at peaks with inertia toward the wall, i.e. away from the
    /// backfill on the active side (k_h > 0).
    pub mean_k_away_from_backfill: Option<f64>,
    /// Mean K_fe at peaks with k_h < 0.
    pub mean_k_toward_backfill: Option<f64>,
    pub max_k_fe: Option<f64>,
    pub mean_y_over_h: Option<f64>,
}

/// Directional checks on one run. `None` when the run has no rows to judge.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ObservationFlags {
    /// Active rows agree with M-O on average (mean |deviation| ≤ 35%).
    pub a_close_to_mo: Option<bool>,
    /// At least half of the active rows fall below M-O.
    pub b_below_mo: Option<bool>,
    /// Active K is larger at peaks with inertia away from the backfill.
    pub c_away_exceeds_toward: Option<bool>,
    /// Active rows straddle the M-O curve (between 20% and 80% below it).
    pub d_scatter_around_mo: Option<bool>,
    /// Every passive row falls below M-O.
    pub e_passive_below_mo: Option<bool>,
    /// Passive rows sit on one side of the M-O curve (at most 10% on the other).
    pub g_passive_one_sided: Option<bool>,
}

/// Tolerance on the mean absolute deviation used by [`ObservationFlags::a_close_to_mo`].
pub const CLOSE_TO_MO: f64 = 0.35;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonTable {
    pub rows: Vec<ComparisonRow>,
    pub active: SideSummary,
    pub passive: SideSummary,
    pub flags: ObservationFlags,
}

impl ComparisonTable {
    pub fn summary(&self, side: WallSide) -> &SideSummary {
        match side {
            WallSide::Active => &self.active,
            WallSide::Passive => &self.passive,
        }
    }
}

fn mean(v: impl Iterator<Item = f64>) -> Option<f64> {
    let (s, n) = v.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

/// Analytical comparison context for one side.
struct Analytics {
    params: WallSoilParams,
    wood: WoodFactor,
    k0: f64,
}

impl Analytics {
    fn new(cfg: &RunConfig, side: WallSide) -> Result<Self> {
        let params = WallSoilParams::new(
            cfg.soil.friction_angle_deg.to_radians(),
            cfg.analysis.wall_friction_deg.to_radians(),
            0.0,
            0.0,
            cfg.analysis.gamma,
            side.height(&cfg.site),
        )?;
        Ok(Self {
            params,
            wood: WoodFactor {
                f_p: cfg.analysis.wood_factor,
                height_ratio: cfg.analysis.wood_height_ratio,
            },
            k0: cfg.soil.k0,
        })
    }

    fn mo(&self, side: WallSide, k_h: f64) -> Result<Analytic> {
        match mo_coefficient(&self.params, SeismicCoefficients::horizontal(k_h), side.mode()) {
            Ok(k) => Ok(Analytic::Value(k)),
            Err(Error::ValidityDomainExceeded { .. }) => Ok(Analytic::Exceeded),
            Err(e) => Err(e),
        }
    }

    /// Rigid-wall bound `K₀ + ΔK_wood`, defined for the retained side only.
    fn wood(&self, side: WallSide, k_h: f64) -> Result<Analytic> {
        if side != WallSide::Active || k_h < 0.0 {
            return Ok(Analytic::NotApplicable);
        }
        Ok(Analytic::Value(self.k0 + wood_rigid_increment(&self.params, k_h, self.wood)?.delta_k))
    }
}

fn row(
    cfg: &RunConfig,
    an: &Analytics,
    profile: &PressureProfile,
    time: f64,
    k_h: f64,
    motion: &str,
    step: Option<usize>,
) -> Result<ComparisonRow> {
    let side = profile.side;
    let k_fe = back_calculate_k(profile.resultant(), cfg.soil.unit_weight(), profile.height, 0.0)?;
    let (y, yr) = match application_height(profile) {
        Ok((y, r)) => (Some(y), Some(r)),
        Err(Error::ZeroResultant) => (None, None),
        Err(e) => return Err(e),
    };
    Ok(ComparisonRow {
        time,
        is_static: step.is_none(),
        side,
        k_h,
        k_fe,
        k_mo: an.mo(side, k_h)?,
        k_wood: an.wood(side, k_h)?,
        y,
        y_over_h: yr,
        motion: motion.to_string(),
        step,
    })
}

/// Analytical coefficients at one k_h.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticRow {
    pub k_h: f64,
    pub k_ae: Analytic,
    pub k_pe: Analytic,
    /// Rigid-wall increment alone, without the at-rest part.
    pub wood_dk: Analytic,
}

/// M-O active and passive coefficients and the Wood increment over a k_h
/// grid, for the retained height. Cells past the validity limit are marked.
pub fn analytic_table(cfg: &RunConfig, k_h: &[f64]) -> Result<Vec<AnalyticRow>> {
    let an = Analytics::new(cfg, WallSide::Active)?;
    k_h.iter()
        .map(|&kh| {
            if !kh.is_finite() {
                return Err(Error::InvalidParameter(format!("k_h = {kh} is not finite")));
            }
            let wood_dk = match wood_rigid_increment(&an.params, kh, an.wood) {
                Ok(w) => Analytic::Value(w.delta_k),
                Err(_) if kh < 0.0 => Analytic::NotApplicable,
                Err(e) => return Err(e),
            };
            Ok(AnalyticRow {
                k_h: kh,
                k_ae: an.mo(WallSide::Active, kh)?,
                k_pe: an.mo(WallSide::Passive, kh)?,
                wood_dk,
            })
        })
        .collect()
}

/// Static rows for a constructed model (`k_h = 0`).
pub fn static_rows(cfg: &RunConfig, profiles: &[PressureProfile], label: &str) -> Result<Vec<ComparisonRow>> {
    profiles
        .iter()
        .map(|p| row(cfg, &Analytics::new(cfg, p.side)?, p, 0.0, 0.0, label, None))
        .collect()
}

fn summarize(rows: &[&ComparisonRow]) -> SideSummary {
    let devs: Vec<f64> = rows.iter().filter_map(|r| r.relative_deviation()).collect();
    SideSummary {
        rows: rows.len(),
        mean_signed_deviation: mean(devs.iter().copied()),
        mean_abs_deviation: mean(devs.iter().map(|d| d.abs())),
        fraction_below_mo: mean(devs.iter().map(|&d| if d < 0.0 { 1.0 } else { 0.0 })),
        mean_k_away_from_backfill: mean(rows.iter().filter(|r| r.k_h > 0.0).map(|r| r.k_fe)),
        mean_k_toward_backfill: mean(rows.iter().filter(|r| r.k_h < 0.0).map(|r| r.k_fe)),
        max_k_fe: rows.iter().map(|r| r.k_fe).fold(None, |m: Option<f64>, k| Some(m.map_or(k, |m| m.max(k)))),
        mean_y_over_h: mean(rows.iter().filter_map(|r| r.y_over_h)),
    }
}

/// Static rows followed by one row per k_h peak per side, in time order.
pub fn comparison_table(cfg: &RunConfig, record: &DynamicRecord) -> Result<ComparisonTable> {
    let mut rows = static_rows(cfg, &record.static_profiles, &record.label)?;
    let mut dynamic = Vec::new();
    for hist in &record.sides {
        let an = Analytics::new(cfg, hist.side)?;
        for i in select_peaks(&hist.k_h, cfg.analysis.noise_floor) {
            dynamic.push(row(cfg, &an, &hist.profiles[i], record.times[i], hist.k_h[i], &record.label, Some(i))?);
        }
    }
    dynamic.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.side.cmp(&b.side)));
    rows.extend(dynamic);
    let pick = |side: WallSide| -> Vec<&ComparisonRow> { rows.iter().filter(|r| !r.is_static && r.side == side).collect() };
    let active = summarize(&pick(WallSide::Active));
    let passive = summarize(&pick(WallSide::Passive));
    let flags = observation_flags(&active, &passive);
    Ok(ComparisonTable {
        rows,
        active,
        passive,
        flags,
    })
}

fn observation_flags(active: &SideSummary, passive: &SideSummary) -> ObservationFlags {
    ObservationFlags {
        a_close_to_mo: active.mean_abs_deviation.map(|d| d <= CLOSE_TO_MO),
        b_below_mo: active.fraction_below_mo.map(|f| f >= 0.5),
        c_away_exceeds_toward: match (active.mean_k_away_from_backfill, active.mean_k_toward_backfill) {
            (Some(away), Some(toward)) => Some(away > toward),
            _ => None,
        },
        d_scatter_around_mo: active.fraction_below_mo.map(|f| (0.2..=0.8).contains(&f)),
        e_passive_below_mo: passive.fraction_below_mo.map(|f| f == 1.0),
        g_passive_one_sided: passive.fraction_below_mo.map(|f| f >= 0.9 || f <= 0.1),
    }
}

/// Peak passive K_fe is nondecreasing across runs ordered by shaking level.
pub fn passive_increases_with_shaking(tables: &[&ComparisonTable]) -> Option<bool> {
    let peaks: Option<Vec<f64>> = tables.iter().map(|t| t.passive.max_k_fe).collect();
    peaks.map(|p| p.windows(2).all(|w| w[1] >= w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(side: WallSide, k: f64, gamma: f64, height: f64) -> PressureProfile {
        let n = 6;
        let h = height / n as f64;
        let y: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) * h).collect();
        let sigma = y.iter().map(|y| k * gamma * (height - y)).collect();
        PressureProfile::new(side, sigma, vec![h; n], y, height).unwrap()
    }

    #[test]
    fn static_row_recovers_coefficient() {
        let cfg = RunConfig::default();
        let g = cfg.soil.unit_weight();
        let rows = static_rows(&cfg, &[profile(WallSide::Active, 0.36, g, 6.0)], "m").unwrap();
        assert!((rows[0].k_fe - 0.36).abs() < 1e-12);
        // midpoint moments of a linear profile are off by O(h²)
        assert!((rows[0].y_over_h.unwrap() - 1.0 / 3.0).abs() < 0.01);
        assert!((rows[0].k_mo.value().unwrap() - 0.2174).abs() < 1e-4);
        assert!((rows[0].k_wood.value().unwrap() - 0.36).abs() < 1e-12);
        assert!(rows[0].is_static);
    }

    #[test]
    fn analytic_markers() {
        let cfg = RunConfig::default();
        let an = Analytics::new(&cfg, WallSide::Active).unwrap();
        assert_eq!(an.mo(WallSide::Active, 0.9).unwrap(), Analytic::Exceeded);
        assert_eq!(an.wood(WallSide::Active, -0.1).unwrap(), Analytic::NotApplicable);
        assert_eq!(an.wood(WallSide::Passive, 0.1).unwrap(), Analytic::NotApplicable);
        assert!((an.wood(WallSide::Active, 0.1).unwrap().value().unwrap() - 0.56).abs() < 1e-12);
        assert_eq!(Analytic::Exceeded.csv(), "exceeded");
    }

    #[test]
    fn flags_follow_summaries() {
        let active = SideSummary {
            rows: 4,
            mean_abs_deviation: Some(0.2),
            fraction_below_mo: Some(0.75),
            mean_k_away_from_backfill: Some(0.4),
            mean_k_toward_backfill: Some(0.3),
            ..Default::default()
        };
        let passive = SideSummary {
            rows: 2,
            fraction_below_mo: Some(1.0),
            ..Default::default()
        };
        let f = observation_flags(&active, &passive);
        assert_eq!(f.a_close_to_mo, Some(true));
        assert_eq!(f.b_below_mo, Some(true));
        assert_eq!(f.c_away_exceeds_toward, Some(true));
        assert_eq!(f.d_scatter_around_mo, Some(true));
        assert_eq!(f.e_passive_below_mo, Some(true));
        assert_eq!(f.g_passive_one_sided, Some(true));
        let none = observation_flags(&SideSummary::default(), &SideSummary::default());
        assert_eq!(none, ObservationFlags::default());
    }
}
