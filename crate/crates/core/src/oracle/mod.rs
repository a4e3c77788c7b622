//! Explicit linear algebra used to cross-check the symbolic calculus on
//! finite quivers: representations, syzygies, resolutions, and the complex
//! of projectives attached to a representation of a covering window.

mod fcomplex;
mod linalg;
mod module;
mod rep;
mod syzygy;

use thiserror::Error;

pub use fcomplex::{
    build_f_complex, bounded_cohomology_check, window_simple, CohomologyEntry, CohomologyReport, FComplex,
    Summand,
};
pub use linalg::Matrix;
pub use module::parse_module;
pub use rep::{injective, projective, simple, Rep};
pub use syzygy::{cosyzygy, radical_of_projective, resolve, syzygy, syzygy_direct, Resolution, Semisimple};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("the oracle needs a finite quiver; truncate the rays first")]
    InfiniteQuiver,
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("`{0}` is outside the covering window")]
    OutOfWindow(String),
    #[error("matrix for `{arrow}` has shape {found:?}, expected {expected:?}")]
    Shape {
        arrow: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("composite of `{first}` then `{second}` is nonzero")]
    NonzeroComposite { first: String, second: String },
    #[error("kernel or cokernel is not semisimple at arrow `{0}`")]
    NotSemisimple(String),
    #[error("multiplicity overflow")]
    Overflow,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
