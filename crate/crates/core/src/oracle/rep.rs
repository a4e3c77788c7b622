//! Finite-dimensional representations of a finite quiver, bound by the
//! relations killing every path of length two.

use num_rational::BigRational;
use num_traits::One;

use super::{Matrix, OracleError};
use crate::quiver::Quiver;

/// `dims[x]` per core vertex, `mats[α]` of shape `dims(t α) × dims(s α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rep {
    dims: Vec<usize>,
    mats: Vec<Matrix>,
}

pub(crate) fn require_finite(q: &Quiver) -> Result<(), OracleError> {
    if q.is_finite() {
        Ok(())
    } else {
        Err(OracleError::InfiniteQuiver)
    }
}

impl Rep {
    /// Validates shapes and the vanishing of all length-two composites.
    pub fn new(q: &Quiver, dims: Vec<usize>, mats: Vec<Matrix>) -> Result<Rep, OracleError> {
        require_finite(q)?;
        if dims.len() != q.vertex_count() || mats.len() != q.arrow_count() {
            return Err(OracleError::Shape {
                arrow: String::new(),
                expected: (q.vertex_count(), q.arrow_count()),
                found: (dims.len(), mats.len()),
            });
        }
        for (a, m) in q.arrows().iter().zip(&mats) {
            let expected = (dims[a.target], dims[a.source]);
            if m.shape() != expected {
                return Err(OracleError::Shape {
                    arrow: a.id.clone(),
                    expected,
                    found: m.shape(),
                });
            }
        }
        let rep = Rep { dims, mats };
        for (i, a) in q.arrows().iter().enumerate() {
            for &j in q.out_arrows(a.target) {
                let composite = rep.mats[j].mul(&rep.mats[i]).expect("shapes checked");
                if !composite.is_zero() {
                    return Err(OracleError::NonzeroComposite {
                        first: a.id.clone(),
                        second: q.arrows()[j].id.clone(),
                    });
                }
            }
        }
        Ok(rep)
    }

    pub fn zero(q: &Quiver) -> Rep {
        Rep {
            dims: vec![0; q.vertex_count()],
            mats: q.arrows().iter().map(|_| Matrix::zeros(0, 0)).collect(),
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, v: usize) -> usize {
        self.dims[v]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn mat(&self, arrow: usize) -> &Matrix {
        &self.mats[arrow]
    }

    /// Per-vertex dimension of the socle: common kernel of the outgoing maps.
    pub fn socle_dims(&self, q: &Quiver) -> Vec<usize> {
        (0..q.vertex_count())
            .map(|x| {
                let stacked = q
                    .out_arrows(x)
                    .iter()
                    .fold(Matrix::zeros(0, self.dims[x]), |acc, &a| {
                        acc.vconcat(&self.mats[a]).expect("shapes checked")
                    });
                self.dims[x] - stacked.rank()
            })
            .collect()
    }

    /// Per-vertex dimension of the radical: sum of the incoming images.
    pub fn radical_dims(&self, q: &Quiver) -> Vec<usize> {
        (0..q.vertex_count())
            .map(|x| {
                q.in_arrows(x)
                    .iter()
                    .fold(Matrix::zeros(self.dims[x], 0), |acc, &a| {
                        acc.hconcat(&self.mats[a]).expect("shapes checked")
                    })
                    .rank()
            })
            .collect()
    }
}

fn resolve(q: &Quiver, a: &str) -> Result<usize, OracleError> {
    require_finite(q)?;
    q.vertex_id(a).ok_or_else(|| OracleError::UnknownVertex(a.to_string()))
}

pub fn simple(q: &Quiver, a: &str) -> Result<Rep, OracleError> {
    let a = resolve(q, a)?;
    Ok(simple_at(q, a))
}

pub(crate) fn simple_at(q: &Quiver, a: usize) -> Rep {
    let dims: Vec<usize> = (0..q.vertex_count()).map(|x| usize::from(x == a)).collect();
    let mats = q
        .arrows()
        .iter()
        .map(|arr| Matrix::zeros(dims[arr.target], dims[arr.source]))
        .collect();
    Rep { dims, mats }
}

/// Basis of a length-one truncated path space: the trivial path at the
/// anchor vertex, then the arrows in declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum PathBasis {
    Trivial,
    Arrow(usize),
}

/// Basis of `P_a(x)`: paths of length at most one from `a` to `x`.
pub(crate) fn projective_basis(q: &Quiver, a: usize, x: usize) -> Vec<PathBasis> {
    let mut basis = Vec::new();
    if x == a {
        basis.push(PathBasis::Trivial);
    }
    basis.extend(
        q.out_arrows(a)
            .iter()
            .filter(|&&al| q.arrows()[al].target == x)
            .map(|&al| PathBasis::Arrow(al)),
    );
    basis
}

/// Basis of `I_a(x)`: paths of length at most one from `x` to `a`.
pub(crate) fn injective_basis(q: &Quiver, a: usize, x: usize) -> Vec<PathBasis> {
    let mut basis = Vec::new();
    if x == a {
        basis.push(PathBasis::Trivial);
    }
    basis.extend(
        q.in_arrows(a)
            .iter()
            .filter(|&&al| q.arrows()[al].source == x)
            .map(|&al| PathBasis::Arrow(al)),
    );
    basis
}

pub fn projective(q: &Quiver, a: &str) -> Result<Rep, OracleError> {
    let a = resolve(q, a)?;
    Ok(projective_at(q, a))
}

/// `P_a`: an arrow `β` sends the trivial path at `a` to `β`, everything else to 0.
pub(crate) fn projective_at(q: &Quiver, a: usize) -> Rep {
    let bases: Vec<_> = (0..q.vertex_count()).map(|x| projective_basis(q, a, x)).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(b, arr)| {
            let (src, tgt) = (&bases[arr.source], &bases[arr.target]);
            let mut m = Matrix::zeros(tgt.len(), src.len());
            if let (Some(i), Some(j)) = (
                src.iter().position(|&p| p == PathBasis::Trivial),
                tgt.iter().position(|&p| p == PathBasis::Arrow(b)),
            ) {
                m[(j, i)] = BigRational::one();
            }
            m
        })
        .collect();
    Rep {
        dims: bases.iter().map(Vec::len).collect(),
        mats,
    }
}

pub fn injective(q: &Quiver, a: &str) -> Result<Rep, OracleError> {
    let a = resolve(q, a)?;
    Ok(injective_at(q, a))
}

/// `I_a`: an arrow `β` sends the path `β` to the trivial path at `a`.
pub(crate) fn injective_at(q: &Quiver, a: usize) -> Rep {
    let bases: Vec<_> = (0..q.vertex_count()).map(|x| injective_basis(q, a, x)).collect();
    let mats = q
        .arrows()
        .iter()
        .enumerate()
        .map(|(b, arr)| {
            let (src, tgt) = (&bases[arr.source], &bases[arr.target]);
            let mut m = Matrix::zeros(tgt.len(), src.len());
            if let (Some(i), Some(j)) = (
                src.iter().position(|&p| p == PathBasis::Arrow(b)),
                tgt.iter().position(|&p| p == PathBasis::Trivial),
            ) {
                m[(j, i)] = BigRational::one();
            }
            m
        })
        .collect();
    Rep {
        dims: bases.iter().map(Vec::len).collect(),
        mats,
    }
}
