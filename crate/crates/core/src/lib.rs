//! Poset saturation in the Boolean lattice.
//!
//! Ordinary (weak and strong), projective and external saturation of set
//! families, with exact search for the corresponding minimum sizes and
//! generators for the known explicit constructions.

pub mod chains;
pub mod constructions;
pub mod copy;
pub mod error;
pub mod family;
pub mod poset;
pub mod reference;
pub mod saturation;
pub mod search;
pub mod suite;

pub use copy::{CopyMode, Embedding};
pub use error::{Error, Result};
pub use family::{GroundSet, GroundSpec, SetFamily};
pub use poset::Poset;
