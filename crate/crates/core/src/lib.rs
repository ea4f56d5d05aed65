//! Exact Nakajima operator calculus on a Beauville-Voisin model of the Chow
//! ring of Hilbert schemes of points of a K3 surface.

pub mod bv_ring;
pub mod error;
pub mod fock;
pub mod lie_wedge;
pub mod matrix;
pub mod operator;
pub mod quadratic;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
