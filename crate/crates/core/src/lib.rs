//! Exact computations in the quantum alcove model.
//!
//! The crate builds root systems and Weyl groups ([`rootsys`]), the quantum
//! Bruhat graph and its variants ([`qbg`]), alcove walks and admissible subsets
//! ([`alcove`]), quantum LS paths ([`qls`]), the coefficient ring of the
//! Chevalley formulas ([`coeff`]), the Chevalley expansion engines and
//! quantum Bruhat operators ([`chevalley`]), and the quantum K-theory
//! Chevalley formula for flag manifolds ([`qk`]).

pub mod alcove;
pub mod chevalley;
pub mod coeff;
pub mod error;
pub mod qbg;
pub mod qk;
pub mod qls;
pub mod rootsys;

pub use error::{Error, Result};

/// Exact rational numbers used for alcove geometry and path breakpoints.
pub type Rational = num_rational::Ratio<i128>;
