//! Local-unitary equivalence of n-qubit density matrices.
//!
//! Two states are LU-equivalent when `ρ′ = (U_1 ⊗ … ⊗ U_n) ρ (U_1 ⊗ … ⊗ U_n)†`
//! for one-qubit unitaries `U_i`. [`protocol::decide_lu_equivalence`] decides
//! this and, when the answer is yes, returns the `U_i`:
//!
//! 1. the spectra of all one-qubit marginals must agree;
//! 2. each marginal is diagonalized and both states are conjugated into
//!    reference forms with diagonal marginals;
//! 3. the unitaries relating the reference forms are diagonal phases on
//!    qubits whose marginal is not maximally mixed and general SU(2)
//!    elements otherwise; [`solver`] finds them from two- and three-qubit
//!    correlations;
//! 4. the candidate is verified on the full states.
//!
//! ```
//! use lueq::linalg::Complex64;
//! use lueq::protocol::{decide_lu_equivalence, DecisionConfig};
//! use lueq::state::MultiQubitState;
//! use lueq::tolerance::Tolerances;
//!
//! let tol = Tolerances::default();
//! let pure = |a: [f64; 4]| MultiQubitState::from_pure(&a.map(Complex64::from), &tol).unwrap();
//! let rho = pure([0.6, 0.0, 0.0, 0.8]);
//! let rho_prime = pure([0.1, -0.7, -0.7, 0.1]);
//! let (verdict, _trace) = decide_lu_equivalence(&rho, &rho_prime, &DecisionConfig::default()).unwrap();
//! assert!(verdict.is_equivalent());
//! ```
//!
//! Qubits are numbered from 0 in the library and from 1 on the command line.
//! Basis indices put qubit 0 in the most significant bit.

pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod pauli;
pub mod protocol;
pub mod reduction;
pub mod reference;
pub mod rotation;
pub mod solver;
pub mod spectral;
pub mod state;
pub mod tolerance;
