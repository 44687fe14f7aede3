//! Finite classical polar spaces and their intersection-number profiles.

pub mod characterizer;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod pointset;
pub mod polar;
pub mod profiles;
pub mod space;

pub use error::{Error, Result};
pub use field::{FieldElement, FieldTable};
pub use pointset::PointSet;
pub use polar::{PolarKind, PolarSpec};
pub use space::{gaussian_binomial, Flat, FlatFamily, ProjSpace};
