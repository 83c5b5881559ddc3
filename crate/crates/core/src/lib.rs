//! Exact computation with uni-trivalent diagrams, wheels and the LMO invariant
//! of 3-manifolds with first homology `Z`.

pub mod closure;
pub mod diagrams;
pub mod error;
pub mod exactnum;
pub mod knots;
pub mod lmo;
pub mod relspace;
pub mod verify;
pub mod weights;
pub mod wheels;

pub use error::{Error, Result};
