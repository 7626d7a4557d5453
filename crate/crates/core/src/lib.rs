//! Elliptic curves over `F_q(T)`: exact arithmetic, conductors, L-polynomials,
//! canonical heights, integral points and the packing bounds behind them.

pub mod curve;
pub mod error;
pub mod field_poly;
pub mod heights;
pub mod integral_points;
pub mod lfunction;
pub mod packing;
pub mod reduction;
pub mod report;

pub use error::{Error, Result};
