//! Exact combinatorics of Floer products on Lagrangian sections over
//! singular integral affine polygons, with independent oracles: the
//! homogeneous coordinate ring, free-group homotopy words, tropical
//! triangles, wrapped/localized variants and numerical checks of the torus
//! fibration coordinates.

pub mod affine_base;
pub mod coordinate_ring;
pub mod error;
pub mod exec;
pub mod floer_algebra;
pub mod homotopy_words;
pub mod rational;
pub mod syz_numeric;
pub mod tropical;
pub mod verify;
pub mod wrapped;

pub use error::{Error, Result};
pub use exec::Execution;
