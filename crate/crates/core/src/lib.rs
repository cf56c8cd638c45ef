//! Heat flow on a discrete circle, seen through a random walk.

pub mod chain;
pub mod clt;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod martingale;
pub mod scheme;
pub mod spectral;
pub mod textfmt;
pub mod walk;

pub use error::{Error, Result};
pub use grid::{CircleGrid, GridFunction, Shift, SpaceTimeField, TimeGrid};
pub use num_complex::Complex64;
