//! Finite matroids on small ground sets: minors, connectivity, modularity,
//! representability over small fields, a catalog of named matroids, minor
//! search, and machine checks of structural claims about modular lines.

pub mod canonical;
pub mod catalog;
pub mod connectivity;
pub mod error;
pub mod fields;
pub mod matroid;
pub mod minors;
pub mod modularity;
pub mod pool;
pub mod search;
pub mod subset;
pub mod verify;

pub use error::{Error, Result};
pub use matroid::Matroid;
pub use subset::{GroundSet, Subset};
