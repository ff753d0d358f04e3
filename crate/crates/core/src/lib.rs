//! Exact λ-ring computations: universal polynomials, the Witt-style ring on
//! `1 + A[[t]]^+`, Adams operations, and a finite model of differential
//! K-theory cycles on which the λ-ring axioms are checked sample by sample.

pub mod cache;
pub mod cdga;
pub mod diffk;
pub mod equivariant;
pub mod error;
pub mod gamma;
pub mod lambda;
pub mod linalg;
pub mod multiset;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod series;
pub mod suites;
pub mod symfun;

pub use cdga::{CdgaModel, CdgaMorphism, GradedElement, ModelSpec, OddCoset};
pub use error::{Error, Result};
pub use gamma::{GammaElement, GammaRing};
pub use poly::MultiPoly;
pub use rational::Rational;
pub use ring::{IntegerRing, RationalField, Ring};
pub use series::TruncSeries;
