//! Cone Morse cohomology of symplectic manifolds.
//!
//! The crate is `no_std` (it needs `alloc`) and has three layers:
//!
//! * exact homological algebra over the rationals: [`ratlinalg`] and
//!   [`complexes`] (cochain complexes, even-degree chain maps, mapping cones);
//! * the Morse side: [`morse`] data with a Morse differential and a cone map,
//!   the [`inequalities`] report (cone Morse inequalities and the `Q(s)`
//!   certificate) and the built-in manifold families in [`examples`];
//! * the analytic side: [`spectral`], a Fourier–Galerkin discretisation of the
//!   Witten-deformed cone Laplacian on the flat two-torus, with its own dense
//!   symmetric eigensolver in [`symeig`].
//!
//! File formats and the command-line driver live in the `cone-morse-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod complexes;
pub mod examples;
pub mod inequalities;
pub mod morse;
pub mod random;
pub mod ratlinalg;
pub mod spectral;
pub mod symeig;

pub use complexes::{CochainComplex, CohomologyData, ComplexError, DegreeChainMap};
pub use morse::{CriticalPoint, DatumError, Entry, MorseDatum};
pub use ratlinalg::{Rational, RationalMatrix};
