/// Numeric gates used throughout the pipeline.
///
/// Every branch decision ("is this coefficient null?", "is this qubit
/// maximally mixed?") goes through one of these fields, so the same input
/// always takes the same path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative Frobenius deviation from hermiticity; also the absolute bound
    /// on discarded imaginary parts of Pauli coefficients.
    pub herm: f64,
    /// Absolute deviation of the trace from one.
    pub trace: f64,
    /// Smallest eigenvalue allowed below zero.
    pub psd: f64,
    /// Eigenvalue gap below which a one-qubit state counts as maximally mixed.
    pub degen: f64,
    /// Magnitude below which a correlation coefficient counts as null.
    pub coef: f64,
    /// Residual target for the angle solvers.
    pub solve: f64,
    /// Relative Frobenius residual accepted by the final verification.
    pub verify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-10,
            trace: 1e-10,
            psd: 1e-9,
            degen: 1e-9,
            coef: 1e-9,
            solve: 1e-10,
            verify: 1e-8,
        }
    }
}
