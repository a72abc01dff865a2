//! Numerical kernels shared by the channel, capacity and allocation code:
//! random variates, the error function, Gauss-Hermite quadrature and small
//! dense complex linear algebra.

mod linalg;
mod quadrature;
mod rng;
mod variates;

pub use linalg::{
    hermitian_gram_inverse_diag, log2_det_hermitian_psd, svd_singular_values, ComplexMatrix,
    GRAM_CONDITION_LIMIT,
};
pub use quadrature::{gauss_hermite_nodes, GaussHermite, MAX_HERMITE_ORDER};
pub use rng::{stream_id, LinkTag, Rng, StreamKind};
pub use variates::{sample_gamma_gamma, sample_rice, GammaGamma, Rice};

/// Gauss error function.
pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}
