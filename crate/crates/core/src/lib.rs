pub mod error;
pub mod intmat;
pub mod lattice;
pub mod semigroup;
pub mod cone;
pub mod io;
pub mod quotient;
pub mod rank;

pub use error::{Error, Result};
