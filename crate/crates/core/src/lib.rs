//! PT-symmetric Hamiltonian model, its Hermitian equivalent, the
//! position-dependent-mass Dirac reduction and the exactly solvable
//! shape-invariant spectra, with a finite-difference eigensolver used to
//! check every closed form.

pub mod cli;
pub mod dirac;
pub mod error;
pub mod hermitization;
pub mod jet;
pub mod model;
pub mod numerics;
pub mod susy;
pub mod wavefunctions;

pub use error::{Error, Result};
