//! Variable-band (skyline) storage with a direct `L·D·U` factorization.
//!
//! The envelope is structurally symmetric, so symmetric and non-symmetric
//! tangents share one storage scheme. No pivoting is performed; a pivot that
//! vanishes relative to the original diagonal is reported as singular.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct SkylineMatrix {
    n: usize,
    /// First row (upper) / column (lower) inside the envelope of each index.
    first: Vec<usize>,
    /// Offsets of each column's off-diagonal strip.
    start: Vec<usize>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    lower: Vec<f64>,
}

impl SkylineMatrix {
    /// Builds an empty matrix whose envelope covers `first[j]..j` for each `j`.
    pub fn with_envelope(first: Vec<usize>) -> Self {
        let n = first.len();
        let mut start = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for (j, &f) in first.iter().enumerate() {
            assert!(f <= j, "envelope start beyond diagonal");
            start.push(acc);
            acc += j - f;
        }
        start.push(acc);
        Self {
            n,
            first,
            start,
            diag: vec![0.0; n],
            upper: vec![0.0; acc],
            lower: vec![0.0; acc],
        }
    }

    /// Envelope from element equation lists.
    pub fn from_connectivity<'a, I>(n: usize, element_eqs: I) -> Self
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        let mut first: Vec<usize> = (0..n).collect();
        for eqs in element_eqs {
            if let Some(&lo) = eqs.iter().min() {
                for &e in eqs {
                    first[e] = first[e].min(lo);
                }
            }
        }
        Self::with_envelope(first)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn stored_entries(&self) -> usize {
        self.n + 2 * self.upper.len()
    }

    pub fn zero(&mut self) {
        self.diag.iter_mut().for_each(|v| *v = 0.0);
        self.upper.iter_mut().for_each(|v| *v = 0.0);
        self.lower.iter_mut().for_each(|v| *v = 0.0);
    }

    fn slot(&self, i: usize, j: usize) -> Option<(bool, usize)> {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => None,
            Less => {
                assert!(i >= self.first[j], "entry ({i},{j}) outside envelope");
                Some((true, self.start[j] + i - self.first[j]))
            }
            Greater => {
                assert!(j >= self.first[i], "entry ({i},{j}) outside envelope");
                Some((false, self.start[i] + j - self.first[i]))
            }
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        match self.slot(i, j) {
            None => self.diag[i] += v,
            Some((true, k)) => self.upper[k] += v,
            Some((false, k)) => self.lower[k] += v,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i < j && i < self.first[j] || j < i && j < self.first[i] {
            return 0.0;
        }
        match self.slot(i, j) {
            None => self.diag[i],
            Some((true, k)) => self.upper[k],
            Some((false, k)) => self.lower[k],
        }
    }

    /// `self += alpha · other` for matrices sharing the same envelope.
    pub fn add_scaled(&mut self, alpha: f64, other: &SkylineMatrix) {
        assert_eq!(self.first, other.first, "envelope mismatch");
        for (a, b) in self.diag.iter_mut().zip(&other.diag) {
            *a += alpha * b;
        }
        for (a, b) in self.upper.iter_mut().zip(&other.upper) {
            *a += alpha * b;
        }
        for (a, b) in self.lower.iter_mut().zip(&other.lower) {
            *a += alpha * b;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.diag.iter().zip(x).map(|(d, v)| d * v).collect();
        for j in 0..self.n {
            let (f, s) = (self.first[j], self.start[j]);
            let r = s..s + j - f;
            let xj = x[j];
            for (yi, u) in y[f..j].iter_mut().zip(&self.upper[r.clone()]) {
                *yi += u * xj;
            }
            y[j] += dot(&self.lower[r], &x[f..j]);
        }
        y
    }

    pub fn max_abs_diag(&self) -> f64 {
        self.diag.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Asymmetry measure `max |A_ij − A_ji|`.
    pub fn max_asymmetry(&self) -> f64 {
        self.upper
            .iter()
            .zip(&self.lower)
            .fold(0.0f64, |m, (u, l)| m.max((u - l).abs()))
    }

    /// Factorizes a copy of the matrix.
    pub fn factorize(&self) -> Result<SkylineFactor> {
        let mut f = SkylineFactor {
            a: self.clone(),
            negative_pivots: 0,
        };
        f.run()?;
        Ok(f)
    }
}

/// In-place factors: unit lower `L` in `lower`, `D·U` in `upper` + `diag`.
#[derive(Debug, Clone)]
pub struct SkylineFactor {
    a: SkylineMatrix,
    negative_pivots: usize,
}

impl SkylineFactor {
    fn run(&mut self) -> Result<()> {
        let scale = self.a.max_abs_diag().max(f64::MIN_POSITIVE);
        let n = self.a.n;
        for j in 0..n {
            let fj = self.a.first[j];
            let sj = self.a.start[j];
            for i in fj..j {
                let fi = self.a.first[i];
                let si = self.a.start[i];
                let k0 = fi.max(fj);
                let (ri, rj) = (si + k0 - fi..si + i - fi, sj + k0 - fj..sj + i - fj);
                // W[i,j] = A[i,j] - Σ L[i,k] W[k,j];  L[j,i] = (A[j,i] - Σ L[j,k] W[k,i]) / D[i]
                let wu = self.a.upper[sj + i - fj] - dot(&self.a.lower[ri.clone()], &self.a.upper[rj.clone()]);
                let wl = self.a.lower[sj + i - fj] - dot(&self.a.lower[rj], &self.a.upper[ri]);
                self.a.upper[sj + i - fj] = wu;
                self.a.lower[sj + i - fj] = wl / self.a.diag[i];
            }
            let r = sj..sj + j - fj;
            let d = self.a.diag[j] - dot(&self.a.lower[r.clone()], &self.a.upper[r]);
            if !(d.abs() > 1e-13 * scale) || !d.is_finite() {
                return Err(Error::SingularSystem { equation: j });
            }
            if d < 0.0 {
                self.negative_pivots += 1;
            }
            self.a.diag[j] = d;
        }
        Ok(())
    }

    /// Number of negative pivots; for a symmetric matrix this counts negative eigenvalues.
    pub fn negative_pivots(&self) -> usize {
        self.negative_pivots
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let a = &self.a;
        let mut x = b.to_vec();
        for j in 0..a.n {
            let f = a.first[j];
            let s = a.start[j];
            x[j] -= dot(&a.lower[s..s + j - f], &x[f..j]);
        }
        for j in (0..a.n).rev() {
            x[j] /= a.diag[j];
            let xj = x[j];
            let f = a.first[j];
            let s = a.start[j];
            for (xk, u) in x[f..j].iter_mut().zip(&a.upper[s..s + j - f]) {
                *xk -= u * xj;
            }
        }
        x
    }
}

/// Dot product with four accumulators so the loop vectorizes.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    let mut acc = [0.0; 4];
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[k] += x[k] * y[k];
        }
    }
    acc[0] + acc[1] + acc[2] + acc[3] + tail
}

/// Solves `K u = f` and reports a singular or indefinite structure.
pub fn solve_linear_system(k: &SkylineMatrix, f: &[f64]) -> Result<Vec<f64>> {
    Ok(k.factorize()?.solve(f))
}
