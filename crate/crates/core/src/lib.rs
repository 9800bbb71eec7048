//! Spin-1/2 matrix product states with 2×2 auxiliary matrices.
//!
//! The crate covers the full pipeline for translationally invariant MPS of
//! bond dimension two: transfer-matrix spectra and correlators
//! ([`mps`]), discrete symmetry witnesses ([`symmetry`]), reduction to the
//! three canonical families ([`classify`]), parent Hamiltonians from the
//! k-site null space ([`parent_ham`]), a brute-force exact-diagonalization
//! oracle ([`ed`]) and parameter sweeps with level-crossing detection
//! ([`scan`]). Dense linear algebra lives in [`numerics`].

// `!(x > tol)` style tests are deliberate: NaN must take the failing branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod classify;
pub mod ed;
pub mod mps;
pub mod numerics;
pub mod parent_ham;
pub mod scan;
pub mod symmetry;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
