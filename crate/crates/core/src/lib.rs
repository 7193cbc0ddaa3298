pub mod discriminator;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod langevin;
pub mod protocol;
pub mod rng;
pub mod washboard;

pub use error::{JtdError, Result};
