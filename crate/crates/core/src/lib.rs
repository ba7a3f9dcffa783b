//! p-adic Coleman integration and effective Chabauty on Picard curves `y^3 = f(x)`.

pub mod error;
pub mod io;
pub mod padic;
pub mod poly;
pub mod series;
pub mod curve;
pub mod frobenius;
pub mod coleman;
pub mod chabauty;

pub use error::{Error, Result};
