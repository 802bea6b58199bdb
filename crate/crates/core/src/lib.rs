pub mod error;
pub mod experiments;
pub mod floquet;
pub mod invariants;
pub mod lattice;
pub mod numerics;
pub mod observables;

pub use error::{Error, Result};
