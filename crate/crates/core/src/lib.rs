pub mod basecurve;
pub mod cli;
pub mod error;
pub mod exactpoly;
pub mod fibercalc;
pub mod higgs;
pub mod spectral;
pub mod symkernel;
pub mod weierstrass;

pub use error::{Error, Result};
