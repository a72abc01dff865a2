//! Small dense complex matrices and the handful of factorizations the
//! capacity formulas need: singular values, diagonal of the inverse Gram
//! matrix, and log-determinants of Hermitian positive-definite matrices.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Inverse Gram matrices with a larger condition number are treated as
/// singular.
pub const GRAM_CONDITION_LIMIT: f64 = 1e12;

const JACOBI_MAX_SWEEPS: usize = 60;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::domain("shape", "matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::domain(
                "data",
                format!("expected {} entries for a {rows}x{cols} matrix, got {}", rows * cols, data.len()),
            ));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::domain("data", "matrix entries must be finite"));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = f(r, c);
            }
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(*d, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    /// AᴴA
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.cols;
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut s = Complex64::new(0.0, 0.0);
                for r in 0..self.rows {
                    s += self[(r, i)].conj() * self[(r, j)];
                }
                g[(i, j)] = s;
                g[(j, i)] = s.conj();
            }
        }
        g
    }

    pub fn scale(&self, k: f64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

/// One-sided (Hestenes) Jacobi result for a tall matrix: column norms of AV
/// and, optionally, the accumulated right rotations V (column-major, n×n).
struct JacobiSvd {
    sigma: Vec<f64>,
    v: Option<Vec<Complex64>>,
}

// Orthogonalizes the columns of `a` (m×n, m ≥ n) by plane rotations.
fn one_sided_jacobi(a: &ComplexMatrix, want_v: bool) -> JacobiSvd {
    let (m, n) = (a.rows, a.cols);
    debug_assert!(m >= n);
    // Column-major working copy.
    let mut w = vec![Complex64::new(0.0, 0.0); m * n];
    for c in 0..n {
        for r in 0..m {
            w[c * m + r] = a[(r, c)];
        }
    }
    let mut v = want_v.then(|| {
        let mut v = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            v[i * n + i] = Complex64::new(1.0, 0.0);
        }
        v
    });

    let mut norms: Vec<f64> = (0..n)
        .map(|c| w[c * m..(c + 1) * m].iter().map(|z| z.norm_sqr()).sum())
        .collect();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = norms[i];
                let beta = norms[j];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let (ci, cj) = (i * m, j * m);
                let mut gamma = Complex64::new(0.0, 0.0);
                for r in 0..m {
                    gamma += w[ci + r].conj() * w[cj + r];
                }
                let g = gamma.norm();
                if g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate (a_i, e^{-iφ} a_j) by a real Jacobi rotation.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let pc = phase.conj();
                let mut ni = 0.0;
                let mut nj = 0.0;
                for r in 0..m {
                    let x = w[ci + r];
                    let y = w[cj + r] * pc;
                    let xi = x * c - y * s;
                    let yj = x * s + y * c;
                    w[ci + r] = xi;
                    w[cj + r] = yj;
                    ni += xi.norm_sqr();
                    nj += yj.norm_sqr();
                }
                norms[i] = ni;
                norms[j] = nj;
                if let Some(v) = v.as_mut() {
                    let (vi, vj) = (i * n, j * n);
                    for r in 0..n {
                        let x = v[vi + r];
                        let y = v[vj + r] * pc;
                        v[vi + r] = x * c - y * s;
                        v[vj + r] = x * s + y * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    JacobiSvd {
        sigma: norms.iter().map(|x| x.sqrt()).collect(),
        v,
    }
}

/// Singular values of `a`, largest first; `min(rows, cols)` of them.
pub fn svd_singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let mut sigma = if a.rows >= a.cols {
        one_sided_jacobi(a, false).sigma
    } else {
        one_sided_jacobi(&a.adjoint(), false).sigma
    };
    sigma.sort_by(|x, y| y.total_cmp(x));
    sigma
}

/// Diagonal of (AᴴA)⁻¹ for a tall matrix with full column rank.
///
/// Fails with [`Error::Singular`] when `rows < cols`, when a singular value is
/// zero, or when the Gram condition number exceeds [`GRAM_CONDITION_LIMIT`].
pub fn hermitian_gram_inverse_diag(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.rows < a.cols {
        return Err(Error::Singular {
            condition: f64::INFINITY,
        });
    }
    let n = a.cols;
    let JacobiSvd { sigma, v } = one_sided_jacobi(a, true);
    let v = v.expect("rotations requested");
    let max = sigma.iter().cloned().fold(0.0, f64::max);
    let min = sigma.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition = if min > 0.0 {
        (max / min).powi(2)
    } else {
        f64::INFINITY
    };
    if !(condition <= GRAM_CONDITION_LIMIT) {
        return Err(Error::Singular { condition });
    }
    // (AᴴA)⁻¹ = V Σ⁻² Vᴴ
    let inv_sq: Vec<f64> = sigma.iter().map(|s| 1.0 / (s * s)).collect();
    Ok((0..n)
        .map(|k| (0..n).map(|j| v[j * n + k].norm_sqr() * inv_sq[j]).sum())
        .collect())
}

/// log₂ det(A) for Hermitian positive-definite `a` (typically I + X with X ⪰ 0),
/// via a Cholesky factorization.
pub fn log2_det_hermitian_psd(a: &ComplexMatrix) -> Result<f64> {
    if a.rows != a.cols {
        return Err(Error::domain("a", "log-determinant needs a square matrix"));
    }
    let n = a.rows;
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    let mut log_det = 0.0;
    for j in 0..n {
        let mut d = a[(j, j)].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return Err(Error::NotPositiveDefinite { pivot: d });
        }
        let djj = d.sqrt();
        l[j * n + j] = Complex64::new(djj, 0.0);
        log_det += d.ln();
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / djj;
        }
    }
    Ok(log_det / std::f64::consts::LN_2)
}
