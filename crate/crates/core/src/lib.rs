//! Dynamics of `f_λ(z) = λ z exp(e^{-z}/z)` on the punctured plane.

pub mod complex_map;
pub mod curves;
pub mod error;
pub mod fixtures;
pub mod grid;
pub mod orbit;
pub mod pnm;
pub mod render;
pub mod roots;
pub mod topology;
pub mod verify;

pub use complex_map::{CPoint, LogPoint, MapParams, SelfMap};
pub use error::{Error, Result};
