//! Root-space toolkit for Hamiltonian simulation on compact Lie algebras.
//!
//! The crate decomposes skew-Hermitian generators into toral and root
//! components relative to the diagonal Cartan subalgebra, computes the root
//! activity and root curvature functionals in a chosen unitary representation,
//! measures the local error of the symmetric torus-root (Strang) splitting
//! against its `t^3` bound, and evaluates the root-activity lower bound on
//! root-gate circuit length. Spin-chain builders connect Pauli-string
//! Hamiltonians on `n` qubits to the `su(2^n)` machinery, with a grouped
//! flip-pattern convention whose functionals stay dimension-free.

pub mod algebra;
pub mod chain;
pub mod error;
pub mod functionals;
pub mod gates;
pub mod linalg;
pub mod rep;
pub mod sampling;
pub mod splitting;

pub use error::{Error, Result};
pub use linalg::CMat;
pub use num_complex::Complex64;
