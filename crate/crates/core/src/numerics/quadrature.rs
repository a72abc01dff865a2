use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use std::f64::consts::PI;

pub const MAX_HERMITE_ORDER: usize = 256;

/// Gauss-Hermite rule for integrals of the form ∫ e^{-t²} f(t) dt.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds the `order`-point rule, exact for polynomials of degree
    /// `2·order − 1`. Supported orders are 1 through 256.
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 || order > MAX_HERMITE_ORDER {
            return Err(Error::domain(
                "order",
                format!("Gauss-Hermite order must be in 1..={MAX_HERMITE_ORDER}, got {order}"),
            ));
        }
        let (nodes, weights) = hermite_rule(order);
        Ok(GaussHermite { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Σ wᵢ f(tᵢ)
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.pairs().map(|(t, w)| w * f(t)).sum()
    }
}

/// Nodes and weights of the `order`-point Gauss-Hermite rule, ascending nodes.
pub fn gauss_hermite_nodes(order: usize) -> Result<Vec<(f64, f64)>> {
    let rule = GaussHermite::new(order)?;
    Ok(rule.pairs().collect())
}

// Nodes are the eigenvalues of the symmetric Jacobi matrix of the Hermite
// recurrence, polished by Newton steps on the orthonormal polynomials; the
// weights follow from the derivative at each polished node. Only the
// non-negative half is computed and mirrored.
fn hermite_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = PI.powf(-0.25);
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i.abs_diff(j) == 1 {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let mut guesses: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    guesses.sort_by(|a, b| b.total_cmp(a));

    let m = n.div_ceil(2);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..m {
        let mut z = guesses[i].max(0.0);
        if n % 2 == 1 && i == m - 1 {
            z = 0.0;
        } else {
            for _ in 0..8 {
                let (p, dp) = orthonormal_hermite(n, z, pim4);
                let step = p / dp;
                z -= step;
                if step.abs() <= 1e-16 * z.abs().max(1.0) {
                    break;
                }
            }
        }
        let (_, dp) = orthonormal_hermite(n, z, pim4);
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (dp * dp);
        w[n - 1 - i] = w[i];
    }
    // Ascending order.
    x.reverse();
    w.reverse();
    (x, w)
}

// Returns (p_n(z), p_n'(z)) for the orthonormal Hermite family.
fn orthonormal_hermite(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    let dp = (2.0 * n as f64).sqrt() * p2;
    (p1, dp)
}
