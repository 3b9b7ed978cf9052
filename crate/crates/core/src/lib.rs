//! Chipsplitting games on the triangular grid, Pascal equations, exclusion
//! criteria for outcome supports, and the classification of fundamental
//! one-dimensional statistical models of maximum likelihood degree one.

pub mod criteria;
pub mod enumeration;
pub mod error;
pub mod grid;
pub mod hyperfield;
pub mod linalg;
pub mod models;
pub mod pascal;

mod util;

pub use error::{Error, Result};
pub use grid::{ChipConfiguration, Configuration, Coord, Game, Perm, RationalConfiguration};
