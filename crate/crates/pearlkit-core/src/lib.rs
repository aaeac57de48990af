//! Exact algebra for Lagrangian pearl complexes.
//!
//! The core works over GF(2) and the rationals without `std`; file formats and
//! the command line live in the companion `pearlkit` crate.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod catalog;
pub mod coeff;
pub mod gf2;
pub mod minimal_model;
pub mod pearl_complex;
pub mod quantum_algebra;
pub mod sample;
pub mod spectral_sequence;
pub mod torus;

pub use coeff::{
    BaseField, CoeffError, Field, Gf2, GradingContext, LaurentPoly, Rational, RationalFunction, ScalarField,
};
pub use pearl_complex::{ChainMap, PearlComplex, PearlError};
