//! Determinant transforms, polynomial stability classes and
//! total-positivity checks, with exact rational arithmetic throughout.

pub mod classes;
pub mod error;
pub mod lab;
pub mod polycore;
pub mod tpcheck;
pub mod transforms;

pub use error::{Error, Result};
