pub mod cli;
pub mod dyadic;
pub mod error;
pub mod gasket;
pub mod inequality;
pub mod metric;
pub mod interpolation;
pub mod measures;
pub mod oracle;
pub mod rational;
pub mod sampling;

pub use dyadic::Dyadic;
pub use error::{Error, Result};
pub use gasket::{BaryCoord, Cell, Letter, PointAddress, Word};
