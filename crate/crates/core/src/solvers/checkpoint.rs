//! Plain-text snapshot of a model's committed state.
//!
//! ```text
//! # sheetpile checkpoint v1
//! counts <nodes> <elements> <points per element>
//! active <0|1 per element, no separators>
//! u <2·nodes displacement values>
//! gp <element> <point> <stress×4> <strain×4> <plastic strain×4> <0|1>
//! ```
//!
//! Floats use Rust's shortest round-trip formatting, so a reload is exact.
//! The mesh itself is not stored: load into a model built from the same
//! configuration.

use super::model::Model;
use crate::error::{Error, Result};
use std::fmt::Write;

const HEADER: &str = "# sheetpile checkpoint v1";

pub fn save_checkpoint(model: &Model) -> String {
    let points = model.states.first().map_or(0, Vec::len);
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "counts {} {} {}", model.mesh.nodes.len(), model.mesh.elements.len(), points).unwrap();
    let active: String = model.active.iter().map(|&a| if a { '1' } else { '0' }).collect();
    writeln!(out, "active {active}").unwrap();
    out.push('u');
    for v in &model.u {
        write!(out, " {v:?}").unwrap();
    }
    out.push('\n');
    for (e, states) in model.states.iter().enumerate() {
        for (g, s) in states.iter().enumerate() {
            write!(out, "gp {e} {g}").unwrap();
            for v in s.stress.iter().chain(&s.strain).chain(&s.plastic_strain) {
                write!(out, " {v:?}").unwrap();
            }
            writeln!(out, " {}", u8::from(s.yielded)).unwrap();
        }
    }
    out
}

fn bad(line: usize, msg: &str) -> Error {
    Error::Io(format!("checkpoint line {line}: {msg}"))
}

fn floats<'a>(it: impl Iterator<Item = &'a str>, line: usize) -> Result<Vec<f64>> {
    it.map(|t| t.parse::<f64>().map_err(|_| bad(line, &format!("bad number {t:?}"))))
        .collect()
}

/// Restores a snapshot into a model with the same mesh.
pub fn load_checkpoint(model: &mut Model, text: &str) -> Result<()> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => return Err(bad(1, "missing header")),
    }
    let n_el = model.mesh.elements.len();
    let points = model.states.first().map_or(0, Vec::len);
    let mut active = None;
    let mut u = None;
    let mut states = model.states.clone();
    let mut seen = vec![false; n_el * points];
    for (ln, line) in lines {
        if line.is_empty() {
            continue;
        }
        let mut tok = line.split_whitespace();
        match tok.next() {
            Some("counts") => {
                let c: Vec<usize> = tok.map(|t| t.parse().unwrap_or(usize::MAX)).collect();
                if c != [model.mesh.nodes.len(), n_el, points] {
                    return Err(bad(ln, "counts do not match the model"));
                }
            }
            Some("active") => {
                let s = tok.next().unwrap_or("");
                if s.len() != n_el || !s.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(bad(ln, "activation string has the wrong length"));
                }
                active = Some(s.bytes().map(|b| b == b'1').collect::<Vec<_>>());
            }
            Some("u") => {
                let v = floats(tok, ln)?;
                if v.len() != model.n_dofs() {
                    return Err(bad(ln, "displacement vector has the wrong length"));
                }
                u = Some(v);
            }
            Some("gp") => {
                let e: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(ln, "element index"))?;
                let g: usize = tok.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(ln, "point index"))?;
                if e >= n_el || g >= points {
                    return Err(bad(ln, "point out of range"));
                }
                let v = floats(tok, ln)?;
                if v.len() != 13 {
                    return Err(bad(ln, "expected 13 values"));
                }
                let s = &mut states[e][g];
                s.stress.copy_from_slice(&v[0..4]);
                s.strain.copy_from_slice(&v[4..8]);
                s.plastic_strain.copy_from_slice(&v[8..12]);
                s.yielded = v[12] != 0.0;
                seen[e * points + g] = true;
            }
            _ => return Err(bad(ln, "unknown record")),
        }
    }
    let (Some(active), Some(u)) = (active, u) else {
        return Err(Error::Io("checkpoint lacks activation or displacement records".into()));
    };
    if !seen.iter().all(|&s| s) {
        return Err(Error::Io("checkpoint lacks some integration points".into()));
    }
    model.active = active;
    model.u = u;
    model.states = states;
    Ok(())
}
