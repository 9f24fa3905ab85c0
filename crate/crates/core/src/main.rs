//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input (config, parameters,
//! or a mesh that fails the wave-resolution rule), 3 solver failure,
//! 4 ground-motion error.

use clap::{Args, Parser, Subcommand};
use sheetpile::config::{MotionFile, RunConfig};
use sheetpile::mesh::{build_site_mesh, wave_resolution_check, SOIL_MATERIAL, WALL_MATERIAL};
use sheetpile::pipeline::{
    analytic_table, configured_motions, shake_all, static_profiles, static_rows, write_analytic_table_csv,
    write_dynamic_outputs, write_static_outputs, MotionResult,
};
use sheetpile::solvers::{newton_static_solve, save_checkpoint};
use sheetpile::Error;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "sheetpile", version, about = "Seismic earth pressure on sheet-pile walls")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; defaults apply to anything missing.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for independent motions.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Seed for randomized drivers. The analyses themselves are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print M-O and Wood coefficients over a k_h grid as CSV.
    MoTable {
        /// `start:step:end` (inclusive) or a comma list; empty for no rows.
        #[arg(long, default_value = "0:0.05:0.4")]
        kh: String,
    },
    /// Staged construction and the static wall pressure report.
    Static,
    /// Construction followed by shaking with every configured motion.
    Dynamic {
        /// Extra motion file; repeat for several.
        #[arg(long)]
        motion: Vec<PathBuf>,
    },
    /// Check element sizes against the wave-resolution rule.
    CheckMesh,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io(_) => 1,
            Error::InvalidParameter(_)
            | Error::Config(_)
            | Error::DegenerateGeometry(_)
            | Error::Mesh(_)
            | Error::ValidityDomainExceeded { .. } => 2,
            Error::Motion(_) => 4,
            _ => 3,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = |m: String| Failure { code: 2, message: m };
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("bad number {s:?} in k_h grid")));
    if text.contains(':') {
        let parts: Vec<&str> = text.split(':').collect();
        let [a, step, b] = parts[..] else {
            return Err(bad("range must be start:step:end".into()));
        };
        let (a, step, b) = (num(a)?, num(step)?, num(b)?);
        if !(step > 0.0) || b < a {
            return Err(bad("range needs a positive step and end >= start".into()));
        }
        let n = ((b - a) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| a + i as f64 * step).collect());
    }
    text.split(',').map(num).collect()
}

fn load_config(common: &Common) -> Result<RunConfig, Failure> {
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    Ok(cfg)
}

fn checkpoint(dir: &Path, name: &str, model: &sheetpile::solvers::Model) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(Error::from)?;
    std::fs::write(dir.join(name), save_checkpoint(model)).map_err(Error::from)?;
    Ok(())
}

/// Runs the construction stages, checkpointing after each one.
fn construct(cfg: &RunConfig) -> Result<sheetpile::solvers::Model, Failure> {
    let (mut model, stages) = cfg.build_model()?;
    let settings = cfg.static_solve.settings();
    for (i, stage) in stages.iter().enumerate() {
        let report = newton_static_solve(&mut model, stage, &settings).map_err(|e| Error::StageFailure {
            stage: i,
            source: Box::new(e),
        })?;
        println!(
            "stage {i} {}: substeps {}, iterations {}, max displacement {:.3e} m",
            report.label, report.substeps, report.iterations, report.max_displacement
        );
        checkpoint(&cfg.output_dir, &format!("stage_{i}.ckpt"), &model)?;
    }
    Ok(model)
}

fn cmd_mo_table(cfg: &RunConfig, kh: &str) -> Result<(), Failure> {
    let rows = analytic_table(cfg, &parse_grid(kh)?)?;
    write_analytic_table_csv(std::io::stdout().lock(), &rows)?;
    Ok(())
}

fn cmd_static(cfg: &RunConfig) -> Result<(), Failure> {
    let model = construct(cfg)?;
    let profiles = static_profiles(&model, cfg)?;
    let rows = static_rows(cfg, &profiles, "static")?;
    for r in &rows {
        println!(
            "{}: K = {:.4}, Y/H = {}",
            r.side.label(),
            r.k_fe,
            r.y_over_h.map_or("NA".into(), |v| format!("{v:.4}"))
        );
    }
    write_static_outputs(&cfg.output_dir, cfg, model.mesh.elements.len(), &rows, &profiles)?;
    Ok(())
}

fn safe_name(label: &str) -> String {
    label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' })
        .collect()
}

fn cmd_dynamic(cfg: &mut RunConfig, extra: &[PathBuf], jobs: Option<usize>) -> Result<(), Failure> {
    cfg.motion_files.extend(extra.iter().map(|p| MotionFile {
        path: p.clone(),
        units: None,
    }));
    let motions = configured_motions(cfg)?;
    if motions.is_empty() {
        return Err(Error::Motion("no motion given: use --motion or the config".into()).into());
    }
    let model = construct(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let results: Vec<MotionResult> = pool.install(|| shake_all(cfg, &model, &motions))?;
    let elements = model.mesh.elements.len();
    for m in &results {
        let dir = cfg.output_dir.join(safe_name(&m.record.label));
        write_dynamic_outputs(&dir, cfg, elements, std::slice::from_ref(m))?;
        println!("{}: {} comparison rows -> {}", m.record.label, m.table.rows.len(), dir.display());
    }
    write_dynamic_outputs(&cfg.output_dir, cfg, elements, &results)?;
    Ok(())
}

fn cmd_check_mesh(cfg: &RunConfig) -> Result<(), Failure> {
    let mesh = build_site_mesh(&cfg.site)?;
    let mut materials = vec![cfg.soil.elastic()?; 2];
    materials[WALL_MATERIAL] = cfg.wall.elastic()?;
    let report = wave_resolution_check(&mesh, &materials, cfg.dynamic.f_cutoff);
    println!("elements = {}", report.checked);
    println!("cutoff = {} Hz", report.f_cutoff);
    println!("soil size limit = {:.4} m", report.limits[SOIL_MATERIAL]);
    println!("wall size limit = {:.4} m", report.limits[WALL_MATERIAL]);
    for f in &report.failures {
        println!("element {}: edge {:.4} m > {:.4} m", f.element, f.edge, f.required);
    }
    if report.passes() {
        println!("pass");
        Ok(())
    } else {
        Err(Failure {
            code: 2,
            message: format!("{} elements exceed the size limit", report.failures.len()),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = load_config(&cli.common).and_then(|mut cfg| match &cli.command {
        Command::MoTable { kh } => cmd_mo_table(&cfg, kh),
        Command::Static => cmd_static(&cfg),
        Command::Dynamic { motion } => cmd_dynamic(&mut cfg, motion, cli.common.jobs),
        Command::CheckMesh => cmd_check_mesh(&cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
