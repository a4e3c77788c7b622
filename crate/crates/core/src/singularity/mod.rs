//! Objects of the singularity category as stalk sums `⊕ S_a[n] ⊗ k^m`, and
//! the rewriting calculus on them.
//!
//! The basic rewrite replaces `S_a[n]` by `⊕_{α ∈ a⁺} S_{t α}[n + 1]`; a
//! simple whose forward reach is finite and acyclic vanishes.

mod alive;
mod expand;
mod generators;
mod iso;
mod lift;
mod object;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::quiver::{Quiver, Vertex};

pub use alive::{alive_vertices, is_zero, is_zero_vertex, normalize, sg_is_trivial, AliveSet, Direction};
pub use expand::{checked_expand_once, checked_expand_once_op, expand_once, expand_once_op};
pub use generators::{
    reduce_to_generators, sg_generators, ComponentKind, GeneratorReport, Reduction, TerminalComponent,
};
pub use iso::{default_depth, is_isomorphic, Ternary};
pub use lift::{lift_and_project, LiftReport, LiftStatus};
pub use object::parse_object;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SgError {
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("shift or multiplicity overflow")]
    Overflow,
}

/// A finite direct sum of shifted simples with multiplicities.
///
/// Terms are keyed by `(vertex, shift)`; multiplicities are always positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct StalkSum {
    terms: BTreeMap<(Vertex, i64), u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedTerm {
    pub vertex: String,
    pub shift: i64,
    pub multiplicity: u64,
}

impl StalkSum {
    pub fn zero() -> Self {
        StalkSum::default()
    }

    pub fn simple(v: Vertex) -> Self {
        StalkSum::shifted(v, 0)
    }

    pub fn shifted(v: Vertex, shift: i64) -> Self {
        let mut s = StalkSum::zero();
        s.terms.insert((v, shift), 1);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Vertex, i64, u64)>) -> Self {
        let mut s = StalkSum::zero();
        for (v, n, m) in terms {
            s.add(v, n, m);
        }
        s
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// Terms in `(vertex, shift)` order.
    pub fn terms(&self) -> impl Iterator<Item = (Vertex, i64, u64)> + '_ {
        self.terms.iter().map(|(&(v, n), &m)| (v, n, m))
    }

    pub fn multiplicity(&self, v: Vertex, shift: i64) -> u64 {
        self.terms.get(&(v, shift)).copied().unwrap_or(0)
    }

    /// Adds `m` copies of `S_v[shift]`. Panics on multiplicity overflow.
    pub fn add(&mut self, v: Vertex, shift: i64, m: u64) {
        self.checked_add(v, shift, m).expect("multiplicity overflow");
    }

    pub fn checked_add(&mut self, v: Vertex, shift: i64, m: u64) -> Result<(), SgError> {
        if m == 0 {
            return Ok(());
        }
        let slot = self.terms.entry((v, shift)).or_insert(0);
        *slot = slot.checked_add(m).ok_or(SgError::Overflow)?;
        Ok(())
    }

    /// Direct sum.
    pub fn sum(&self, other: &StalkSum) -> StalkSum {
        let mut s = self.clone();
        for (v, n, m) in other.terms() {
            s.add(v, n, m);
        }
        s
    }

    /// `x[k]`.
    pub fn shift(&self, k: i64) -> StalkSum {
        StalkSum::from_terms(self.terms().map(|(v, n, m)| (v, n + k, m)))
    }

    /// Multiplicity of each vertex with shifts forgotten.
    pub fn vertex_multiset(&self) -> BTreeMap<Vertex, u64> {
        let mut out = BTreeMap::new();
        for (v, _, m) in self.terms() {
            *out.entry(v).or_insert(0) += m;
        }
        out
    }

    pub fn named_terms(&self, q: &Quiver) -> Vec<NamedTerm> {
        self.terms()
            .map(|(v, shift, multiplicity)| NamedTerm {
                vertex: q.vertex_name(v),
                shift,
                multiplicity,
            })
            .collect()
    }

    /// Renders in the object syntax, e.g. `S(3)[0] + 2*S(5)[1]`; `0` when empty.
    pub fn display<'a>(&'a self, q: &'a Quiver) -> impl fmt::Display + 'a {
        DisplaySum { sum: self, q }
    }
}

struct DisplaySum<'a> {
    sum: &'a StalkSum,
    q: &'a Quiver,
}

impl fmt::Display for DisplaySum<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sum.is_empty() {
            return f.write_str("0");
        }
        for (i, (v, n, m)) in self.sum.terms().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if m != 1 {
                write!(f, "{m}*")?;
            }
            write!(f, "S({})[{n}]", self.q.vertex_name(v))?;
        }
        Ok(())
    }
}
