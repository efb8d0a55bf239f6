pub mod borel;
pub mod bps;
pub mod curve;
pub mod error;
pub mod jet;
pub mod json;
pub mod lattice;
pub mod param;
pub mod quad;
pub mod rhp;
pub mod series;
pub mod special;
pub mod tr;
pub mod verify;
pub mod wkb;

pub use curve::{CurveLabel, Pole, SpectralCurve};
pub use error::{Error, Result};
pub use num_complex::Complex64;
