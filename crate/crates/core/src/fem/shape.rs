//! Serendipity 8-node shape functions and Gauss-Legendre rules.
//!
//! Local node order: corners counterclockwise from (-1,-1), then midsides
//! of edges 1-2, 2-3, 3-4, 4-1.

/// Parent coordinates of the eight nodes.
pub const Q8_NODES: [[f64; 2]; 8] = [
    [-1.0, -1.0],
    [1.0, -1.0],
    [1.0, 1.0],
    [-1.0, 1.0],
    [0.0, -1.0],
    [1.0, 0.0],
    [0.0, 1.0],
    [-1.0, 0.0],
];

/// Shape values and parent-space gradients `[dN/dξ, dN/dη]` at `(xi, eta)`.
pub fn shape_q8(xi: f64, eta: f64) -> ([f64; 8], [[f64; 2]; 8]) {
    let mut n = [0.0; 8];
    let mut dn = [[0.0; 2]; 8];
    for (a, &[xa, ya]) in Q8_NODES.iter().enumerate() {
        if a < 4 {
            let (p, q) = (1.0 + xi * xa, 1.0 + eta * ya);
            let s = xi * xa + eta * ya - 1.0;
            n[a] = 0.25 * p * q * s;
            dn[a][0] = 0.25 * xa * q * (s + p);
            dn[a][1] = 0.25 * ya * p * (s + q);
        } else if xa == 0.0 {
            n[a] = 0.5 * (1.0 - xi * xi) * (1.0 + eta * ya);
            dn[a][0] = -xi * (1.0 + eta * ya);
            dn[a][1] = 0.5 * ya * (1.0 - xi * xi);
        } else {
            n[a] = 0.5 * (1.0 + xi * xa) * (1.0 - eta * eta);
            dn[a][0] = 0.5 * xa * (1.0 - eta * eta);
            dn[a][1] = -eta * (1.0 + xi * xa);
        }
    }
    (n, dn)
}

/// Quadratic 1D shape functions on [-1, 1] for nodes at -1, 0, 1.
pub fn shape_line3(s: f64) -> [f64; 3] {
    [0.5 * s * (s - 1.0), 1.0 - s * s, 0.5 * s * (s + 1.0)]
}

/// Points and weights of the n-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    match n {
        1 => vec![(0.0, 2.0)],
        2 => {
            let a = 1.0 / 3f64.sqrt();
            vec![(-a, 1.0), (a, 1.0)]
        }
        3 => {
            let a = (0.6f64).sqrt();
            vec![(-a, 5.0 / 9.0), (0.0, 8.0 / 9.0), (a, 5.0 / 9.0)]
        }
        _ => panic!("Gauss-Legendre rule with {n} points is not tabulated"),
    }
}

/// Tensor-product rule on the parent square.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    /// `(ξ, η, weight)`
    pub points: Vec<(f64, f64, f64)>,
    /// Highest polynomial degree per direction integrated exactly.
    pub order: usize,
}

impl QuadratureRule {
    pub fn gauss(n: usize) -> Self {
        let line = gauss_legendre(n);
        let mut points = Vec::with_capacity(n * n);
        // η outer so points run row by row from the bottom
        for &(eta, we) in &line {
            for &(xi, wx) in &line {
                points.push((xi, eta, wx * we));
            }
        }
        Self { points, order: 2 * n - 1 }
    }

    pub fn full() -> Self {
        Self::gauss(3)
    }

    pub fn reduced() -> Self {
        Self::gauss(2)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}
