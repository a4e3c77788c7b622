use super::{SgError, StalkSum};
use crate::quiver::{Quiver, Vertex};

fn expand_with(
    x: &StalkSum,
    next: impl Fn(Vertex) -> Vec<Vertex>,
) -> Result<StalkSum, SgError> {
    let mut out = StalkSum::zero();
    for (v, n, m) in x.terms() {
        let shift = n.checked_add(1).ok_or(SgError::Overflow)?;
        for w in next(v) {
            out.checked_add(w, shift, m)?;
        }
    }
    Ok(out)
}

/// `S_a[n] ↦ ⊕_{α ∈ a⁺} S_{t α}[n + 1]`, extended additively. Sinks vanish.
pub fn checked_expand_once(x: &StalkSum, q: &Quiver) -> Result<StalkSum, SgError> {
    expand_with(x, |v| q.successors(v).into_iter().map(|(_, t)| t).collect())
}

/// The dual rule `S_a[n] ↦ ⊕_{α ∈ a⁻} S_{s α}[n + 1]`.
pub fn checked_expand_once_op(x: &StalkSum, q: &Quiver) -> Result<StalkSum, SgError> {
    expand_with(x, |v| q.predecessors(v).into_iter().map(|(_, s)| s).collect())
}

/// Panics on shift or multiplicity overflow; see [`checked_expand_once`].
pub fn expand_once(x: &StalkSum, q: &Quiver) -> StalkSum {
    checked_expand_once(x, q).expect("stalk sum overflow")
}

/// Panics on shift or multiplicity overflow; see [`checked_expand_once_op`].
pub fn expand_once_op(x: &StalkSum, q: &Quiver) -> StalkSum {
    checked_expand_once_op(x, q).expect("stalk sum overflow")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver;

    fn fork() -> Quiver {
        parse_quiver("quiver F\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 1 -> 3\narrow c: 1 -> 3\nray from 3\n")
            .unwrap()
    }

    #[test]
    fn parallel_arrows_add_multiplicity() {
        let q = fork();
        let x = StalkSum::from_terms([(Vertex::Core(0), 0, 2)]);
        let y = expand_once(&x, &q);
        assert_eq!(y.multiplicity(Vertex::Core(1), 1), 2);
        assert_eq!(y.multiplicity(Vertex::Core(2), 1), 4);
        assert!(expand_once(&StalkSum::simple(Vertex::Core(1)), &q).is_empty());
    }

    #[test]
    fn rays_expand_along_themselves() {
        let q = fork();
        let y = expand_once(&StalkSum::shifted(Vertex::Core(2), 5), &q);
        assert_eq!(y, StalkSum::shifted(Vertex::Ray { ray: 0, index: 1 }, 6));
        let y = expand_once_op(&StalkSum::simple(Vertex::Ray { ray: 0, index: 1 }), &q);
        assert_eq!(y, StalkSum::shifted(Vertex::Core(2), 1));
    }

    #[test]
    fn dual_rule_uses_sources() {
        let q = fork();
        let y = expand_once_op(&StalkSum::simple(Vertex::Core(2)), &q);
        assert_eq!(y, StalkSum::from_terms([(Vertex::Core(0), 1, 2)]));
        assert_eq!(y, expand_once(&StalkSum::simple(Vertex::Core(2)), &q.opposite()));
    }

    #[test]
    fn overflow_is_reported() {
        let q = fork();
        let x = StalkSum::shifted(Vertex::Core(0), i64::MAX);
        assert_eq!(checked_expand_once(&x, &q), Err(SgError::Overflow));
    }
}
