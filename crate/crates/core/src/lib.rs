pub mod catalog;
pub mod cretan;
pub mod designs;
pub mod error;
pub mod field;
pub mod hadamard;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod verify;

pub use error::{CretanError, Result};
