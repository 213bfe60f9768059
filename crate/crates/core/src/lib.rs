pub mod covar;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod mldeg;
pub mod pd;
pub mod poly;
pub mod sdr;

pub use error::{Error, Result};
