pub mod algebra;
pub mod branches;
pub mod cli;
pub mod curve;
pub mod error;
pub mod oracle;
pub mod resolution;
pub mod semigroup;
pub mod zeta_global;
pub mod zeta_local;

pub use error::{Error, Result};
