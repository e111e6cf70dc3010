//! Exact graph coloring toolkit.
//!
//! The crate implements inclusion–exclusion coloring over subset lattices:
//!
//! * [`bhk`] counts ordered covers by independent sets over the full
//!   `2^n` lattice and decides k-colorability / the chromatic number.
//! * [`trimmed`] restricts the same counting to lattices of subsets that
//!   hit prescribed neighborhoods, which is what makes graphs with many
//!   low-degree vertices cheaper than `2^n`.
//! * [`removal`] selects an almost-disjoint sub-family of small sets.
//! * [`dominating`] and [`randomized`] reduce k-coloring to list coloring
//!   with fewer colors.
//! * [`oracle`] holds brute-force references used by the test-suites.
//!
//! Every returned coloring is verified before it leaves the library.

pub mod bhk;
pub mod dominating;
pub mod error;
pub mod exact;
pub mod graph;
pub mod harness;
pub mod limits;
pub mod lists;
pub mod oracle;
pub mod randomized;
pub mod removal;
pub mod subset;
pub mod trimmed;

pub use error::{Error, Result};
pub use graph::{Graph, ListAssignment, PartialColoring, VertexSet};
pub use limits::Limits;
