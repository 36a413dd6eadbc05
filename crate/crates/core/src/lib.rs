pub mod chainlp;
pub mod cli;
pub mod complex;
pub mod decomposition;
pub mod dualform;
pub mod error;
pub mod mincut;
pub mod netpbm;
pub mod numfmt;
pub mod render;
pub mod shapes;
pub mod simplex;

pub use error::{Error, Result};
