//! Fundamental forms, curvatures and Beltrami operators of surfaces in
//! Lorentz-Minkowski 3-space, with a least-squares detector for relations
//! of the form `Δx = Ax`.

pub mod cases;
pub mod detector;
pub mod error;
pub mod geometry;
pub mod jet;
pub mod lorentz;
pub mod mesh;
pub mod ode;
pub mod report;
pub mod surfaces;

pub use error::{Error, Result};
pub use jet::Jet2;
pub use lorentz::{CausalCharacter, Signature, Vec3M};
