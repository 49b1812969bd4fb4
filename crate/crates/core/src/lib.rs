//! Quotients of the free-group Cayley tree by normal subgroups: building
//! their Schreier graphs, counting loops and balls, spectral and
//! isoperimetric estimates, planarity, and assembling certified bounds on
//! the cogrowth exponent.

pub mod counting;
pub mod error;
pub mod geometry;
pub mod lab;
pub mod par;
pub mod planar;
pub mod schreier;
pub mod spectral;
pub mod words;

pub use error::{Error, Result};
pub use par::Exec;
pub use schreier::{Exactness, SchreierGraph};
pub use words::{Letter, Rank, ReducedWord};
