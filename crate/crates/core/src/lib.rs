//! Exact Hopf algebras of transverse geometry and their Hopf-cyclic apparatus.
//!
//! The crate is organised bottom-up:
//! - [`pbw`] is a generic universal-enveloping-algebra engine (PBW rewriting),
//! - [`algebra`] instantiates it for the Lie algebras 𝔥ₙ,
//! - [`hopf`] adds coproduct, antipode, twisted antipode and modular pairs,
//! - [`cyclic`] builds the cyclic module and the (b, B) operators,
//! - [`classes`] holds the codimension-1 cocycles,
//! - [`jets`] realizes the standard action on crossed products (exact and numeric),
//! - [`relative`] handles Lie pairs and relative Hopf-cyclic cochains,
//! - [`cli`] is the command-line front end.

pub mod algebra;
pub mod classes;
pub mod cli;
pub mod cyclic;
pub mod error;
pub mod hopf;
pub mod jets;
pub mod linalg;
pub mod pbw;
pub mod rational;
pub mod relative;
pub mod report;

pub use algebra::{Gen, HopfElement, Monomial};
pub use error::{Error, Result};
pub use hopf::{Character, GroupLike, ModularPair, TensorCochain};
pub use rational::Q;
