//! Truncated power-series solution of nonlinear PDEs with exact symbolic
//! coefficients.

pub mod exact;
pub mod series;
pub mod model;
pub mod expand;
pub mod solve;
pub mod verify;
