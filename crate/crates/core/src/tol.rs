//! Central numerical tolerance configuration.
//!
//! Every validation and convergence threshold used by the crate lives here, so
//! a single record answers "how tight is tight" for any operation.

#[derive(Clone, Debug)]
pub struct Tolerances {
    /// Relative symmetry tolerance: max |A[i][j] - A[j][i]| <= symmetry * max|A|.
    pub symmetry: f64,
    /// Relative hermiticity tolerance: max |A[i][j] - conj(A[j][i])| <= hermiticity * max|A|.
    pub hermiticity: f64,
    /// Jacobi sweep convergence: off-diagonal Frobenius norm <= jacobi_off_rel * initial Frobenius norm.
    pub jacobi_off_rel: f64,
    /// Hard sweep cap for the Jacobi eigensolver; exceeding it is an internal error.
    pub jacobi_max_sweeps: usize,
    /// Eigenpair residual: ||A v - lambda v|| <= eigen_residual * (1 + |lambda|).
    pub eigen_residual: f64,
    /// Eigenvector orthonormality: Gram matrix within eigen_gram of identity.
    pub eigen_gram: f64,
    /// Density matrix trace: |tr(rho) - 1| <= unit_trace.
    pub unit_trace: f64,
    /// Density matrix positivity: min eigenvalue >= -negativity.
    pub negativity: f64,
    /// Measurement basis orthonormality: Gram within basis_gram of identity.
    pub basis_gram: f64,
    /// Probability vectors must sum to one within this.
    pub probability: f64,
    /// Bloch round trips reproduce inputs within this (elementwise).
    pub round_trip: f64,
    /// Tight bound must exceed the Luo-Fu bound minus this.
    pub dominance: f64,
    /// Slack allowed in the eigenvalue interlacing chain.
    pub interlacing: f64,
    /// Generic matrix-identity checks (isometry A A^t = I, closed-form equalities).
    pub identity_check: f64,
    /// Closed-form coefficient identities.
    pub coefficient_identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symmetry: 1e-12,
            hermiticity: 1e-12,
            jacobi_off_rel: 1e-12,
            jacobi_max_sweeps: 100,
            eigen_residual: 1e-9,
            eigen_gram: 1e-10,
            unit_trace: 1e-10,
            negativity: 1e-10,
            basis_gram: 1e-10,
            probability: 1e-12,
            round_trip: 1e-10,
            dominance: 1e-10,
            interlacing: 1e-9,
            identity_check: 1e-10,
            coefficient_identity: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn new() -> Self {
        Self::default()
    }
}
