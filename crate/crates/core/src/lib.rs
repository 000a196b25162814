//! Exact computations in topological full groups of minimal subshifts and
//! in AF full groups of Bratteli diagrams.

pub mod bratteli;
pub mod config;
pub mod dsl;
pub mod element;
pub mod error;
pub mod generators;
pub mod ktheory;
pub mod measure;
pub mod quad;
pub mod report;
pub mod subshift;

pub use element::{FullGroupElement, Order, PeriodDecomposition, TransversalPolicy};
pub use error::{Error, Result};
pub use quad::QuadReal;
pub use subshift::{Alphabet, ClopenSet, Cylinder, PointHandle, SubshiftSystem};
