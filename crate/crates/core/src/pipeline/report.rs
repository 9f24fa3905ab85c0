//! CSV and text outputs of a run.
//!
//! * `comparison.csv`: one row per static state and per selected k_h peak.
//! * `pressure_profiles.csv`: the element stresses behind every comparison row.
//! * `kh_series.csv`: base and probe coefficients at every recorded step.
//! * `run_meta.txt`: config echo, solver and filter settings, damping
//!   calibration and the observation flags.

use super::comparison::{AnalyticRow, ComparisonRow, ComparisonTable, ObservationFlags};
use super::filter::FILTER_ORDER;
use super::pressure::{PressureProfile, WallSide};
use super::run::DynamicRecord;
use crate::config::RunConfig;
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const COMPARISON_FILE: &str = "comparison.csv";
pub const PROFILES_FILE: &str = "pressure_profiles.csv";
pub const KH_SERIES_FILE: &str = "kh_series.csv";
pub const META_FILE: &str = "run_meta.txt";

/// A shaken run with its comparison table.
#[derive(Debug, Clone)]
pub struct MotionResult {
    pub record: DynamicRecord,
    pub table: ComparisonTable,
}

impl MotionResult {
    /// Every comparison row paired with the profile it was computed from.
    pub fn profile_rows(&self) -> Vec<(&ComparisonRow, &PressureProfile)> {
        self.table
            .rows
            .iter()
            .filter_map(|r| {
                let p = match r.step {
                    None => self.record.static_profiles.iter().find(|p| p.side == r.side)?,
                    Some(i) => &self.record.side(r.side).profiles[i],
                };
                Some((r, p))
            })
            .collect()
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".into(), |v| format!("{v:.6}"))
}

pub fn write_comparison_csv<'a, W: Write>(w: W, rows: impl IntoIterator<Item = &'a ComparisonRow>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["time", "side", "k_h", "K_fe", "K_mo", "K_wood", "Y", "Y_over_H", "motion"])
        .map_err(csv_err)?;
    for r in rows {
        out.write_record([
            format!("{:.4}", r.time),
            r.side.label().to_string(),
            format!("{:.6}", r.k_h),
            format!("{:.6}", r.k_fe),
            r.k_mo.csv(),
            r.k_wood.csv(),
            opt(r.y),
            opt(r.y_over_h),
            r.motion.clone(),
        ])
        .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_analytic_table_csv<'a, W: Write>(w: W, rows: impl IntoIterator<Item = &'a AnalyticRow>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k_h", "K_ae", "K_pe", "dK_wood"]).map_err(csv_err)?;
    for r in rows {
        out.write_record([format!("{:.4}", r.k_h), r.k_ae.csv(), r.k_pe.csv(), r.wood_dk.csv()])
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// One line per element per comparison row.
pub fn write_profiles_csv<'a, W: Write>(
    w: W,
    items: impl IntoIterator<Item = (&'a ComparisonRow, &'a PressureProfile)>,
) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["motion", "time", "side", "k_h", "element", "y", "h", "sigma"])
        .map_err(csv_err)?;
    for (r, p) in items {
        for (i, ((y, h), s)) in p.y.iter().zip(&p.h).zip(&p.sigma).enumerate() {
            out.write_record([
                r.motion.clone(),
                format!("{:.4}", r.time),
                r.side.label().to_string(),
                format!("{:.6}", r.k_h),
                i.to_string(),
                format!("{y:.4}"),
                format!("{h:.4}"),
                format!("{s:.4}"),
            ])
            .map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Base acceleration and probe coefficients, raw and filtered, per step.
pub fn write_kh_series_csv<'a, W: Write>(w: W, records: impl IntoIterator<Item = &'a DynamicRecord>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "motion",
        "time",
        "base_accel_g",
        "k_h_active",
        "k_h_active_raw",
        "k_h_passive",
        "k_h_passive_raw",
    ])
    .map_err(csv_err)?;
    for rec in records {
        let (a, p) = (rec.side(WallSide::Active), rec.side(WallSide::Passive));
        for i in 0..rec.times.len() {
            out.write_record([
                rec.label.clone(),
                format!("{:.4}", rec.times[i]),
                format!("{:.6}", rec.base_accel[i]),
                format!("{:.6}", a.k_h[i]),
                format!("{:.6}", a.k_h_raw[i]),
                format!("{:.6}", p.k_h[i]),
                format!("{:.6}", p.k_h_raw[i]),
            ])
            .map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn flag(f: Option<bool>) -> &'static str {
    match f {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

fn write_flags(s: &mut String, f: &ObservationFlags) {
    let items = [
        ("active close to M-O", f.a_close_to_mo),
        ("active below M-O", f.b_below_mo),
        ("away from backfill exceeds toward", f.c_away_exceeds_toward),
        ("active scatter around M-O", f.d_scatter_around_mo),
        ("passive below M-O", f.e_passive_below_mo),
        ("passive one-sided", f.g_passive_one_sided),
    ];
    for (name, v) in items {
        writeln!(s, "  {name}: {}", flag(v)).unwrap();
    }
}

/// Human-readable run description. `static_rows` are the end-of-construction rows.
pub fn run_meta(cfg: &RunConfig, element_count: usize, static_rows: &[ComparisonRow], results: &[MotionResult]) -> String {
    let mut s = String::new();
    writeln!(s, "# sheetpile run").unwrap();
    writeln!(s, "elements = {element_count}").unwrap();
    writeln!(s, "unit weight (FE) = {:.4} kN/m3", cfg.soil.unit_weight()).unwrap();
    writeln!(s, "wall steel properties: recorded only, the wall is linear elastic").unwrap();
    writeln!(
        s,
        "filter = {} (order {FILTER_ORDER} Butterworth, zero phase, cutoff {} Hz)",
        if cfg.dynamic.filter { "on" } else { "off" },
        cfg.dynamic.f_cutoff
    )
    .unwrap();
    writeln!(s, "dt = {} s, newmark beta = {}, gamma = {}", cfg.dynamic.dt, cfg.dynamic.newmark_beta, cfg.dynamic.newmark_gamma).unwrap();
    for r in static_rows {
        writeln!(
            s,
            "static {}: K_fe = {:.4}, Y/H = {}",
            r.side.label(),
            r.k_fe,
            r.y_over_h.map_or("NA".into(), |v| format!("{v:.4}"))
        )
        .unwrap();
    }
    for m in results {
        let rec = &m.record;
        let d = &rec.damping;
        writeln!(s, "\n[motion {}]", rec.label).unwrap();
        writeln!(
            s,
            "f1 = {:.4} Hz ({}), f2 = {:.4} Hz ({}), zeta = {}, a0 = {:.6e}, a1 = {:.6e}",
            d.f1,
            if d.f1_from_modal { "modal" } else { "config" },
            d.f2,
            if d.f2_from_motion { "motion spectrum" } else { "config" },
            d.zeta,
            d.a0,
            d.a1
        )
        .unwrap();
        writeln!(
            s,
            "steps = {}, end time = {:.4} s, min dt = {:.3e} s, newton iterations = {} (max {})",
            rec.summary.steps, rec.summary.end_time, rec.summary.min_dt, rec.summary.total_iterations, rec.summary.max_iterations
        )
        .unwrap();
        writeln!(s, "energy residual (relative) = {:.3e}", rec.summary.energy.relative_residual()).unwrap();
        for h in &rec.sides {
            writeln!(
                s,
                "{} probe: node {} near ({:.3}, {:.3})",
                h.side.label(),
                h.probe_node,
                h.probe_point[0],
                h.probe_point[1]
            )
            .unwrap();
        }
        for side in WallSide::BOTH {
            let sm = m.table.summary(side);
            writeln!(
                s,
                "{}: peaks = {}, mean dev = {}, mean |dev| = {}, below M-O = {}, max K_fe = {}, mean Y/H = {}",
                side.label(),
                sm.rows,
                opt(sm.mean_signed_deviation),
                opt(sm.mean_abs_deviation),
                opt(sm.fraction_below_mo),
                opt(sm.max_k_fe),
                opt(sm.mean_y_over_h)
            )
            .unwrap();
        }
        writeln!(s, "observations:").unwrap();
        write_flags(&mut s, &m.table.flags);
    }
    writeln!(s, "\n# config\n{}", cfg.to_toml()).unwrap();
    s
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, std::io::BufWriter<std::fs::File>)> {
    let path = dir.join(name);
    let f = std::fs::File::create(&path)?;
    Ok((path, std::io::BufWriter::new(f)))
}

/// Writes the static-only outputs.
pub fn write_static_outputs(
    dir: &Path,
    cfg: &RunConfig,
    element_count: usize,
    rows: &[ComparisonRow],
    profiles: &[PressureProfile],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let (p1, w) = create(dir, COMPARISON_FILE)?;
    write_comparison_csv(w, rows)?;
    let (p2, w) = create(dir, PROFILES_FILE)?;
    let pairs = rows.iter().filter_map(|r| profiles.iter().find(|p| p.side == r.side).map(|p| (r, p)));
    write_profiles_csv(w, pairs)?;
    let p3 = dir.join(META_FILE);
    std::fs::write(&p3, run_meta(cfg, element_count, rows, &[]))?;
    Ok(vec![p1, p2, p3])
}

/// Writes every output of a set of dynamic runs sharing one static stage.
pub fn write_dynamic_outputs(dir: &Path, cfg: &RunConfig, element_count: usize, results: &[MotionResult]) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let (p1, w) = create(dir, COMPARISON_FILE)?;
    write_comparison_csv(w, results.iter().flat_map(|m| &m.table.rows))?;
    let (p2, w) = create(dir, PROFILES_FILE)?;
    write_profiles_csv(w, results.iter().flat_map(|m| m.profile_rows()))?;
    let (p3, w) = create(dir, KH_SERIES_FILE)?;
    write_kh_series_csv(w, results.iter().map(|m| &m.record))?;
    let p4 = dir.join(META_FILE);
    let static_rows: Vec<ComparisonRow> = results
        .first()
        .map(|m| m.table.rows.iter().filter(|r| r.is_static).cloned().collect())
        .unwrap_or_default();
    std::fs::write(&p4, run_meta(cfg, element_count, &static_rows, results))?;
    Ok(vec![p1, p2, p3, p4])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::comparison::Analytic;

    fn row() -> ComparisonRow {
        ComparisonRow {
            time: 1.25,
            is_static: false,
            side: WallSide::Active,
            k_h: 0.1,
            k_fe: 0.3,
            k_mo: Analytic::Exceeded,
            k_wood: Analytic::NotApplicable,
            y: Some(2.0),
            y_over_h: None,
            motion: "m".into(),
            step: Some(3),
        }
    }

    #[test]
    fn comparison_columns() {
        let mut buf = Vec::new();
        write_comparison_csv(&mut buf, [&row()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "time,side,k_h,K_fe,K_mo,K_wood,Y,Y_over_H,motion");
        assert_eq!(lines.next().unwrap(), "1.2500,active,0.100000,0.300000,exceeded,NA,2.000000,NA,m");
    }

    #[test]
    fn profile_lines_per_element() {
        let p = PressureProfile::new(WallSide::Active, vec![1.0, 2.0], vec![0.5, 0.5], vec![0.25, 0.75], 1.0).unwrap();
        let r = row();
        let mut buf = Vec::new();
        write_profiles_csv(&mut buf, [(&r, &p)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().nth(2).unwrap().ends_with(",1,0.7500,0.5000,2.0000"));
    }
}
