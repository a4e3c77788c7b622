//! The complex of projectives attached to a representation of the opposite
//! of a covering window.
//!
//! For `M` over the opposite window quiver, degree `n` collects
//! `P_x ⊗ M(x)` over the vertices `x` at level `-n`, and the differential
//! sends `e_x ⊗ v` to `Σ_{α: y → x} α ⊗ M(α°) v`. Arrows times anything go to
//! zero, so `d² = 0` holds on the nose.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Matrix, OracleError, Rep};
use crate::covering::{CoveringQuiver, Window};

/// A basis vector `p ⊗ e_i` of `P_x ⊗ M(x)`, where `p` is the trivial path
/// at `x` (`arrow == None`) or an arrow out of `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Basis {
    summand: usize,
    arrow: Option<usize>,
    index: usize,
    /// Vertex where `p` ends; `d` preserves it.
    at: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summand {
    /// Window vertex index.
    pub vertex: usize,
    /// `dim M(x)`.
    pub multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct FComplex {
    pub window: Window,
    /// Degrees from `-(hi - 1)` to `-lo`.
    pub degrees: Vec<i64>,
    pub components: Vec<Vec<Summand>>,
    bases: Vec<Vec<Basis>>,
    /// `differentials[i]` maps degree `degrees[i]` to `degrees[i] + 1`.
    differentials: Vec<Matrix>,
    labels: Vec<String>,
}

impl FComplex {
    pub fn dimension(&self, i: usize) -> usize {
        self.bases[i].len()
    }

    pub fn differential(&self, i: usize) -> &Matrix {
        &self.differentials[i]
    }

    /// `d^{n+1} ∘ d^n = 0` for every consecutive pair.
    pub fn squares_to_zero(&self) -> bool {
        self.differentials.windows(2).all(|w| {
            w[1].mul(&w[0]).map(|m| m.is_zero()).unwrap_or(false)
        })
    }
}

pub fn build_f_complex(c: &CoveringQuiver, m: &Rep) -> Result<FComplex, OracleError> {
    let w = c.to_quiver();
    if m.dims().len() != w.vertex_count() {
        return Err(OracleError::OutOfWindow(format!(
            "representation has {} vertices, window has {}",
            m.dims().len(),
            w.vertex_count()
        )));
    }
    let window = c.window();
    let degrees: Vec<i64> = (window.lo..window.hi).rev().map(|l| -l).collect();
    let mut components = Vec::with_capacity(degrees.len());
    let mut bases = Vec::with_capacity(degrees.len());
    for &n in &degrees {
        let mut summands = Vec::new();
        let mut basis = Vec::new();
        for (x, v) in c.vertices().iter().enumerate() {
            if v.level != -n || m.dim(x) == 0 {
                continue;
            }
            summands.push(Summand {
                vertex: x,
                multiplicity: m.dim(x),
            });
            let paths = std::iter::once((None, x))
                .chain(w.out_arrows(x).iter().map(|&a| (Some(a), w.arrows()[a].target)));
            for (arrow, at) in paths {
                for index in 0..m.dim(x) {
                    basis.push(Basis {
                        summand: x,
                        arrow,
                        index,
                        at,
                    });
                }
            }
        }
        components.push(summands);
        bases.push(basis);
    }

    let mut differentials = Vec::with_capacity(degrees.len());
    for i in 0..degrees.len() {
        let source = &bases[i];
        let empty = Vec::new();
        let target = bases.get(i + 1).unwrap_or(&empty);
        let mut d = Matrix::zeros(target.len(), source.len());
        for (col, b) in source.iter().enumerate() {
            if b.arrow.is_some() {
                continue;
            }
            let x = b.summand;
            for &alpha in w.in_arrows(x) {
                let y = w.arrows()[alpha].source;
                // M(α°): M(x) → M(y) is the matrix of α in the opposite quiver.
                let mat = m.mat(alpha);
                for (row, t) in target.iter().enumerate() {
                    if t.summand == y && t.arrow == Some(alpha) {
                        let entry = &mat[(t.index, b.index)];
                        d[(row, col)] += entry;
                    }
                }
            }
        }
        differentials.push(d);
    }
    let labels = c.vertices().iter().map(|v| c.vertex_label(*v)).collect();
    Ok(FComplex {
        window,
        degrees,
        components,
        bases,
        differentials,
        labels,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyEntry {
    pub degree: i64,
    pub dimension: usize,
    /// Nonzero dimensions of the cohomology representation per window vertex.
    pub vertices: BTreeMap<String, usize>,
    /// The degree sits on the window edge, where terms from outside are missing.
    pub boundary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub squares_to_zero: bool,
    pub entries: Vec<CohomologyEntry>,
    /// Interior degrees with nonzero cohomology.
    pub nonzero_degrees: Vec<i64>,
    /// Boundary degrees with nonzero cohomology; inconclusive.
    pub boundary_degrees: Vec<i64>,
}

/// Cohomology of `f` degree by degree, split over the vertices where basis
/// paths end (the differential is a morphism of representations).
pub fn bounded_cohomology_check(f: &FComplex) -> CohomologyReport {
    let last = f.degrees.len().saturating_sub(1);
    let mut entries = Vec::with_capacity(f.degrees.len());
    for (i, &degree) in f.degrees.iter().enumerate() {
        let mut vertices = BTreeMap::new();
        let mut dimension = 0;
        let mut ends: Vec<usize> = f.bases[i].iter().map(|b| b.at).collect();
        ends.sort_unstable();
        ends.dedup();
        for z in ends {
            let cols: Vec<usize> = (0..f.bases[i].len()).filter(|&c| f.bases[i][c].at == z).collect();
            let out_rows: Vec<usize> = f
                .bases
                .get(i + 1)
                .map(|b| (0..b.len()).filter(|&r| b[r].at == z).collect())
                .unwrap_or_default();
            let rank_out = f.differentials[i].select(&out_rows, &cols).rank();
            let rank_in = if i == 0 {
                0
            } else {
                let in_cols: Vec<usize> = (0..f.bases[i - 1].len())
                    .filter(|&c| f.bases[i - 1][c].at == z)
                    .collect();
                f.differentials[i - 1].select(&cols, &in_cols).rank()
            };
            let h = cols.len() - rank_out - rank_in;
            if h > 0 {
                vertices.insert(f.labels[z].clone(), h);
                dimension += h;
            }
        }
        entries.push(CohomologyEntry {
            degree,
            dimension,
            vertices,
            boundary: i == 0 || i == last,
        });
    }
    let nonzero = |boundary: bool| {
        entries
            .iter()
            .filter(|e| e.dimension > 0 && e.boundary == boundary)
            .map(|e| e.degree)
            .collect()
    };
    CohomologyReport {
        squares_to_zero: f.squares_to_zero(),
        nonzero_degrees: nonzero(false),
        boundary_degrees: nonzero(true),
        entries,
    }
}

/// The simple at window vertex `x`, as a representation of the opposite window.
pub fn window_simple(c: &CoveringQuiver, x: usize) -> Rep {
    super::rep::simple_at(&c.to_quiver().opposite(), x)
}
