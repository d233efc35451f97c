//! Two-dimensional nonlinear Fourier (scattering) transform for the
//! defocusing Davey–Stewartson II system, with the supporting harmonic
//! analysis toolbox, d-bar solvers, and time evolution.

pub mod cauchy;
pub mod error;
pub mod evolution;
mod fft;
pub mod field;
pub mod gmres;
pub mod harmonic;
pub mod io;
pub mod lattice;
pub mod maximal;
pub mod norms;
pub mod potentials;
pub mod report;
pub mod scattering;
pub mod solver;
pub mod transform;

pub use error::{Error, Result};
pub use field::{ComplexField, SpectralField};
pub use lattice::{KLattice, Lattice};
