//! Symbolic computation in the bounded singularity category of a locally
//! bounded category with radical square zero, given by a locally finite
//! quiver.
//!
//! * [`quiver`]: quivers (finite core plus rays), walks, gradings, the text format.
//! * [`covering`]: windows of the minimal gradable covering and the Galois checks.
//! * [`singularity`]: stalk sums of shifted simples and their rewriting calculus.
//! * [`oracle`]: explicit representations, syzygies and complexes used to
//!   cross-check the calculus.
//! * [`corpus`]: bundled example quivers with their expected conclusions.

pub mod corpus;
pub mod covering;
pub mod oracle;
pub mod quiver;
pub mod singularity;

pub use quiver::{ArrowRef, Quiver, QuiverBuilder, QuiverError, RayDirection, Vertex};
