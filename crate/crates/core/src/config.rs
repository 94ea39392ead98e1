use serde::{Deserialize, Serialize};

/// Every numerical threshold used by the crate, in one place.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Hermiticity residual accepted by [`crate::HermitianMatrix::new`].
    pub hermiticity: f64,
    /// Hermiticity residual accepted when loading matrices from a file.
    pub file_hermiticity: f64,
    /// Unitarity residual accepted by [`crate::UnitaryMatrix::new`].
    pub unitarity: f64,
    /// Largest |Tr H| treated as traceless.
    pub traceless: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this
    /// multiple of the Frobenius norm of the input.
    pub jacobi_rel: f64,
    pub jacobi_max_sweeps: usize,
    /// Trace-oracle structure constants below this magnitude are dropped.
    pub structure_zero: f64,
    /// New closure directions must exceed this, relative to the largest
    /// input norm.
    pub closure_rel: f64,
    /// Off-diagonal slack for stoquastic membership.
    pub stoquastic: f64,
    /// Eigenvalue pairing slack, relative to the commutator spectral norm.
    pub pairing_rel: f64,
    /// Commutators below this multiple of |A|_F |B|_F count as zero.
    pub commutator_rel: f64,
    /// Power-sum slack for pair similarity.
    pub similarity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            file_hermiticity: 1e-8,
            unitarity: 1e-10,
            traceless: 1e-10,
            jacobi_rel: 1e-14,
            jacobi_max_sweeps: 100,
            structure_zero: 1e-13,
            closure_rel: 1e-8,
            stoquastic: 1e-10,
            pairing_rel: 1e-8,
            commutator_rel: 1e-10,
            similarity: 1e-8,
        }
    }
}
