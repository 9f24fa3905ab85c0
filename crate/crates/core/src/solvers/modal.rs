//! Lowest natural frequency and Rayleigh damping calibration.

use super::model::{dot, norm, Model};
use crate::error::{Error, Result};
use crate::fem::SkylineMatrix;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct ModalResult {
    pub frequency: f64,
    /// ω² (rad²/s²).
    pub eigenvalue: f64,
    /// Mode shape on all dofs, mass-normalized.
    pub mode: Vec<f64>,
    pub relative_residual: f64,
    pub iterations: usize,
}

/// Smallest eigenpair of `K φ = λ M φ` by inverse iteration with deflation,
/// confirmed by a Sturm count. `start` seeds the iteration (equation space).
pub fn lowest_eigenpair(k: &SkylineMatrix, m: &SkylineMatrix, start: &[f64]) -> Result<(f64, Vec<f64>, f64, usize)> {
    let n = k.dim();
    if n == 0 {
        return Err(Error::InvalidParameter("no free degrees of freedom".into()));
    }
    let fk = k.factorize()?;
    if fk.negative_pivots() > 0 {
        return Err(Error::InvalidParameter("stiffness matrix is not positive definite".into()));
    }
    let mut found: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut total_its = 0;
    for round in 0..6 {
        let mut x: Vec<f64> = start.to_vec();
        // deterministic perturbation so the start is never orthogonal to the lowest mode
        for (i, v) in x.iter_mut().enumerate() {
            *v += 1e-3 * ((i * 7919 + 13 * round) as f64 * 0.618_033_988_7).fract();
        }
        let mut lambda = f64::NAN;
        let mut converged = false;
        for _ in 0..5000 {
            total_its += 1;
            for (_, phi) in &found {
                let c = dot(phi, &m.mul_vec(&x));
                x.iter_mut().zip(phi).for_each(|(a, b)| *a -= c * b);
            }
            let y = fk.solve(&m.mul_vec(&x));
            let my = m.mul_vec(&y);
            let mass = dot(&y, &my);
            if !(mass > 0.0) {
                return Err(Error::SingularSystem { equation: 0 });
            }
            let scale = 1.0 / mass.sqrt();
            x = y.iter().map(|v| v * scale).collect();
            let new = dot(&x, &k.mul_vec(&x));
            if (new - lambda).abs() <= 1e-13 * new.abs() {
                lambda = new;
                converged = true;
                break;
            }
            lambda = new;
        }
        if !converged {
            return Err(Error::NonConvergence {
                what: "inverse iteration".into(),
                iterations: total_its,
                history: vec![lambda],
            });
        }
        found.push((lambda, x));
        let (lmin, phi) = found
            .iter()
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty");
        let mut shifted = k.clone();
        shifted.add_scaled(-lmin * (1.0 + 1e-7), m);
        let below = shifted.factorize().map(|f| f.negative_pivots()).unwrap_or(1);
        if below <= 1 {
            let kv = k.mul_vec(phi);
            let mv = m.mul_vec(phi);
            let r: Vec<f64> = kv.iter().zip(&mv).map(|(a, b)| a - lmin * b).collect();
            let rel = norm(&r) / norm(&kv);
            return Ok((*lmin, phi.clone(), rel, total_its));
        }
    }
    Err(Error::NonConvergence {
        what: "lowest mode search".into(),
        iterations: total_its,
        history: found.iter().map(|f| f.0).collect(),
    })
}

/// Lowest natural frequency (Hz) of the model's active elastic system under
/// its current constraints.
pub fn lowest_frequency(model: &Model) -> Result<ModalResult> {
    let asm = model.assembler();
    let k = model.elastic_stiffness(&asm, |_| true);
    let m = model.mass_matrix(&asm, |_| true);
    let dm = &asm.dofmap;
    // horizontal translation pattern excites the fundamental sway mode
    let ix: Vec<f64> = (0..model.n_dofs()).map(|d| if d % 2 == 0 { 1.0 } else { 0.0 }).collect();
    let start: Vec<f64> = dm.gather(&ix);
    let (lambda, phi, rel, its) = lowest_eigenpair(&k, &m, &start)?;
    if rel > 1e-6 {
        return Err(Error::NonConvergence {
            what: "modal residual".into(),
            iterations: its,
            history: vec![rel],
        });
    }
    Ok(ModalResult {
        frequency: lambda.sqrt() / (2.0 * PI),
        eigenvalue: lambda,
        mode: dm.expand(&phi),
        relative_residual: rel,
        iterations: its,
    })
}

/// Mass and stiffness factors `(a0, a1)` giving damping ratio `zeta` at
/// both frequencies (Hz).
pub fn rayleigh_coefficients(zeta: f64, f1: f64, f2: f64) -> Result<(f64, f64)> {
    if !(f1 > 0.0 && f2 > 0.0) || !f1.is_finite() || !f2.is_finite() {
        return Err(Error::InvalidParameter("target frequencies must be positive".into()));
    }
    if !(zeta > 0.0) {
        return Err(Error::InvalidParameter("damping ratio must be positive".into()));
    }
    let (w1, w2) = (2.0 * PI * f1, 2.0 * PI * f2);
    Ok((2.0 * zeta * w1 * w2 / (w1 + w2), 2.0 * zeta / (w1 + w2)))
}

/// Damping ratio of `C = a0 M + a1 K` at frequency `f` (Hz).
pub fn rayleigh_ratio(a0: f64, a1: f64, f: f64) -> f64 {
    let w = 2.0 * PI * f;
    0.5 * (a0 / w + a1 * w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_closed_form() {
        let (a0, a1) = rayleigh_coefficients(0.01, 4.8, 4.8).unwrap();
        assert!((a0 - 0.30159).abs() < 5e-6);
        assert!((a1 - 3.3157e-4).abs() < 5e-9);
        let (a0, a1) = rayleigh_coefficients(0.01, 4.8, 2.0).unwrap();
        assert!((a0 - 0.177408).abs() < 5e-6);
        assert!((a1 - 4.681e-4).abs() < 5e-8);
        assert!((rayleigh_ratio(a0, a1, 4.8) - 0.01).abs() < 1e-12);
        assert!((rayleigh_ratio(a0, a1, 2.0) - 0.01).abs() < 1e-12);
        assert!(rayleigh_coefficients(0.01, 0.0, 2.0).is_err());
    }

    #[test]
    fn single_dof_frequency() {
        let mut k = SkylineMatrix::with_envelope(vec![0]);
        let mut m = SkylineMatrix::with_envelope(vec![0]);
        k.add(0, 0, 400.0);
        m.add(0, 0, 4.0);
        let (l, _, rel, _) = lowest_eigenpair(&k, &m, &[1.0]).unwrap();
        assert!((l.sqrt() / (2.0 * PI) - 10.0 / (2.0 * PI)).abs() < 1e-12);
        assert!(rel < 1e-12);
    }

    #[test]
    fn finds_lowest_despite_orthogonal_start() {
        // diagonal pencil with eigenvalues 9, 1, 4; start only on the 9 mode
        let mut k = SkylineMatrix::with_envelope(vec![0, 0, 0]);
        let mut m = SkylineMatrix::with_envelope(vec![0, 0, 0]);
        for (i, v) in [9.0, 1.0, 4.0].iter().enumerate() {
            k.add(i, i, *v);
            m.add(i, i, 1.0);
        }
        let (l, _, _, _) = lowest_eigenpair(&k, &m, &[1.0, 0.0, 0.0]).unwrap();
        assert!((l - 1.0).abs() < 1e-10);
    }
}
