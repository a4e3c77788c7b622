//! Syzygies and cosyzygies of semisimple representations, computed as
//! kernels of projective covers and cokernels of injective envelopes.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;

use super::rep::{injective_at, injective_basis, projective_at, projective_basis, require_finite, PathBasis};
use super::{Matrix, OracleError};
use crate::quiver::Quiver;

/// Core vertex ↦ multiplicity of its simple.
pub type Semisimple = BTreeMap<usize, u64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    /// `steps[i]` is `Ω^i S_a`; `steps[0] = {a: 1}`.
    pub steps: Vec<Semisimple>,
    pub terminated: bool,
}

/// Per-vertex dimensions of `ker(⊕ P_{v_i} ↠ ⊕ S_{v_i})`, checked to be a
/// semisimple subrepresentation.
fn cover_kernel(q: &Quiver, summands: &[usize]) -> Result<Vec<usize>, OracleError> {
    let n = q.vertex_count();
    let bases: Vec<Vec<(usize, PathBasis)>> = (0..n)
        .map(|x| {
            summands
                .iter()
                .enumerate()
                .flat_map(|(i, &v)| projective_basis(q, v, x).into_iter().map(move |p| (i, p)))
                .collect()
        })
        .collect();
    let kernels: Vec<Matrix> = (0..n)
        .map(|x| {
            let owners: Vec<usize> = summands
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v == x)
                .map(|(i, _)| i)
                .collect();
            let mut cover = Matrix::zeros(owners.len(), bases[x].len());
            for (col, &(i, p)) in bases[x].iter().enumerate() {
                if p == PathBasis::Trivial {
                    let row = owners.iter().position(|&o| o == i).expect("owner of a trivial path");
                    cover[(row, col)] = BigRational::one();
                }
            }
            Matrix::from_columns(bases[x].len(), &cover.nullspace())
        })
        .collect();
    for (b, arr) in q.arrows().iter().enumerate() {
        let (src, tgt) = (&bases[arr.source], &bases[arr.target]);
        let mut m = Matrix::zeros(tgt.len(), src.len());
        for (col, &(i, p)) in src.iter().enumerate() {
            if p == PathBasis::Trivial {
                if let Some(row) = tgt.iter().position(|&e| e == (i, PathBasis::Arrow(b))) {
                    m[(row, col)] = BigRational::one();
                }
            }
        }
        let image = m.mul(&kernels[arr.source]).expect("shapes agree");
        if !image.is_zero() {
            return Err(OracleError::NotSemisimple(arr.id.clone()));
        }
    }
    Ok(kernels.iter().map(Matrix::cols).collect())
}

/// Per-vertex dimensions of `coker(S_a ↪ I_a)`, checked to be semisimple.
fn envelope_cokernel(q: &Quiver, a: usize) -> Result<Vec<usize>, OracleError> {
    let inj = injective_at(q, a);
    let inclusions: Vec<Matrix> = (0..q.vertex_count())
        .map(|x| {
            let basis = injective_basis(q, a, x);
            let mut m = Matrix::zeros(basis.len(), usize::from(x == a));
            if let Some(row) = basis.iter().position(|&p| p == PathBasis::Trivial) {
                m[(row, 0)] = BigRational::one();
            }
            m
        })
        .collect();
    for (b, arr) in q.arrows().iter().enumerate() {
        let target = &inclusions[arr.target];
        let joined = target.hconcat(inj.mat(b)).expect("shapes agree");
        if joined.rank() != target.rank() {
            return Err(OracleError::NotSemisimple(arr.id.clone()));
        }
    }
    Ok((0..q.vertex_count())
        .map(|x| inj.dim(x) - inclusions[x].rank())
        .collect())
}

fn scale_into(out: &mut Semisimple, dims: &[usize], m: u64) -> Result<(), OracleError> {
    for (x, &d) in dims.iter().enumerate() {
        if d > 0 {
            let add = (d as u64).checked_mul(m).ok_or(OracleError::Overflow)?;
            let slot = out.entry(x).or_insert(0);
            *slot = slot.checked_add(add).ok_or(OracleError::Overflow)?;
        }
    }
    Ok(())
}

/// `Ω M` for semisimple `M`, one explicit kernel per distinct simple summand.
pub fn syzygy(q: &Quiver, m: &Semisimple) -> Result<Semisimple, OracleError> {
    require_finite(q)?;
    let mut out = Semisimple::new();
    for (&v, &mult) in m {
        scale_into(&mut out, &cover_kernel(q, &[v])?, mult)?;
    }
    Ok(out)
}

/// `Ω M` from the kernel of the full cover `⊕ P_v^{m_v} ↠ M`; cubic in the
/// total dimension, meant for small inputs.
pub fn syzygy_direct(q: &Quiver, m: &Semisimple) -> Result<Semisimple, OracleError> {
    require_finite(q)?;
    let summands: Vec<usize> = m
        .iter()
        .flat_map(|(&v, &mult)| std::iter::repeat_n(v, mult as usize))
        .collect();
    let mut out = Semisimple::new();
    scale_into(&mut out, &cover_kernel(q, &summands)?, 1)?;
    Ok(out)
}

/// `Ω⁻¹ M` for semisimple `M`, via injective envelopes.
pub fn cosyzygy(q: &Quiver, m: &Semisimple) -> Result<Semisimple, OracleError> {
    require_finite(q)?;
    let mut out = Semisimple::new();
    for (&v, &mult) in m {
        scale_into(&mut out, &envelope_cokernel(q, v)?, mult)?;
    }
    Ok(out)
}

/// Iterates `Ω` from `S_a` for at most `max_steps` steps, stopping at zero.
pub fn resolve(q: &Quiver, a: usize, max_steps: usize) -> Result<Resolution, OracleError> {
    require_finite(q)?;
    if a >= q.vertex_count() {
        return Err(OracleError::UnknownVertex(format!("#{a}")));
    }
    let per_vertex: Vec<Vec<usize>> = (0..q.vertex_count())
        .map(|v| cover_kernel(q, &[v]))
        .collect::<Result<_, _>>()?;
    let mut steps = vec![Semisimple::from([(a, 1)])];
    for _ in 0..max_steps {
        let last = steps.last().expect("non-empty");
        if last.is_empty() {
            break;
        }
        let mut next = Semisimple::new();
        for (&v, &mult) in last {
            scale_into(&mut next, &per_vertex[v], mult)?;
        }
        steps.push(next);
    }
    let terminated = steps.last().is_some_and(|s| s.is_empty());
    Ok(Resolution { steps, terminated })
}

/// Radical of `P_a` as a multiset of simples, read off the explicit module.
pub fn radical_of_projective(q: &Quiver, a: usize) -> Semisimple {
    let p = projective_at(q, a);
    p.radical_dims(q)
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d > 0)
        .map(|(x, d)| (x, d as u64))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver;

    fn three_cycle() -> Quiver {
        parse_quiver("quiver C3\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 3 -> 1\n").unwrap()
    }

    #[test]
    fn cycle_syzygies() {
        let q = three_cycle();
        assert_eq!(syzygy(&q, &Semisimple::from([(0, 1)])).unwrap(), Semisimple::from([(1, 1)]));
        assert_eq!(cosyzygy(&q, &Semisimple::from([(1, 1)])).unwrap(), Semisimple::from([(0, 1)]));
        assert!(syzygy(&q, &Semisimple::new()).unwrap().is_empty());
        let r = resolve(&q, 0, 6).unwrap();
        assert!(!r.terminated);
        assert_eq!(r.steps[3], Semisimple::from([(0, 1)]));
        assert_ne!(r.steps[1], r.steps[0]);
    }

    #[test]
    fn path_resolutions_terminate() {
        let q = parse_quiver("quiver A3\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n").unwrap();
        let r = resolve(&q, 0, 10).unwrap();
        assert!(r.terminated);
        assert_eq!(r.steps.len(), 4);
        let r = resolve(&q, 2, 10).unwrap();
        assert_eq!(r.steps, vec![Semisimple::from([(2, 1)]), Semisimple::new()]);
    }

    #[test]
    fn direct_sum_agrees_with_additivity() {
        let q = parse_quiver(
            "quiver M\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 1 -> 2\narrow c: 2 -> 1\narrow d: 1 -> 1\narrow e: 3 -> 1\n",
        )
        .unwrap();
        let m = Semisimple::from([(0, 2), (1, 1), (2, 3)]);
        assert_eq!(syzygy(&q, &m).unwrap(), syzygy_direct(&q, &m).unwrap());
        assert_eq!(syzygy(&q, &m).unwrap(), Semisimple::from([(0, 6), (1, 4)]));
        for a in 0..3 {
            let omega = syzygy(&q, &Semisimple::from([(a, 1)])).unwrap();
            assert_eq!(omega, radical_of_projective(&q, a));
        }
    }
}
