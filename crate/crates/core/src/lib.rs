pub mod cli;
pub mod dissipators;
pub mod error;
pub mod hilbert;
pub mod liouvillian;
pub mod model;
pub mod numerics;
pub mod rabi;
pub mod ratemodel;
pub mod spectrum;

pub use error::{Error, Result};
