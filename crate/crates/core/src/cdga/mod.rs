//! Finite commutative differential graded algebra models standing in for the
//! de Rham complex of a manifold.
//!
//! A model is only a finite CDGA: nothing here checks that it comes from a
//! manifold, and nothing needs to, since the identities verified on top of
//! it are universal.

pub mod element;
pub mod free;
pub mod model;
pub mod morphism;

pub use element::{CoordsJson, GradedElement, OddCoset};
pub use free::Generator;
pub use model::{BasisElement, CdgaModel, DifferentialSpec, GroupSpec, ModelSpec};
pub use morphism::{morphism_catalog, CdgaMorphism};
