//! Divided powers of free rings, matrix invariants, and exact checks of the
//! identities that connect them.

pub mod error;
pub mod exactla;
pub mod freering;
pub mod gamma;
pub mod invariants;
pub mod runner;
pub mod symfunc;
pub mod theorems;
pub mod universal;
mod text;

pub use error::{Error, Result};
