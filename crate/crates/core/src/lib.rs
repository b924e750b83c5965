//! Computable lower bounds on the geometric measure of quantum discord for
//! finite-dimensional bipartite states.
//!
//! The geometric discord of a state rho is its squared Hilbert-Schmidt
//! distance to the nearest classical-quantum (zero discord) state. Except for
//! two qubits no closed form is known, so this crate computes certified lower
//! bounds from the Bloch representation of the state: a tight spectral bound
//! built from the Gram matrix G = x x^t + (2/n) T T^t, and the weaker Luo-Fu
//! bound from the spectrum of C C^t. Oracle routines (exact qubit-measurement
//! search, the two-qubit closed form, Monte-Carlo upper bounds) verify both
//! from the measurement side.
//!
//! Module map:
//! * [`matrix`]  - dense complex/real linear algebra and Jacobi eigensolvers
//! * [`bloch`]   - SU(d) generator bases, Bloch decomposition, the C matrix
//! * [`bounds`]  - both bounds plus the isometry/interlacing machinery
//! * [`oracle`]  - measurement-side verification oracles
//! * [`states`]  - example families, random ensembles, state file I/O
//! * [`cli`]     - sweep/verify/report entry points used by the binary

pub mod bloch;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod states;
pub mod tol;

mod rng;

pub use error::{Error, Result};
