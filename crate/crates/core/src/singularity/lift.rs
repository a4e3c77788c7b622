use serde::Serialize;

use super::{expand_once, StalkSum};
use crate::covering::CoveringQuiver;
use crate::quiver::Vertex;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LiftStatus {
    Equal,
    Mismatch,
    /// Some term has no lift whose successors all fit in the window.
    Inconclusive { vertex: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftReport {
    pub status: LiftStatus,
    /// Expansion in the covering window, projected back to the base.
    pub projected: StalkSum,
    /// Expansion computed directly in the base.
    pub expected: StalkSum,
}

/// Lifts each term to the interior lift nearest level 0, expands there, and
/// projects back; equality with the base expansion is π-equivariance.
pub fn lift_and_project(x: &StalkSum, c: &CoveringQuiver) -> LiftReport {
    let base = c.base();
    let expected = expand_once(x, base);
    let mut lifted = StalkSum::zero();
    for (v, n, m) in x.terms() {
        let Some(idx) = c.interior_lift(v).and_then(|l| c.index_of(l)) else {
            return LiftReport {
                status: LiftStatus::Inconclusive {
                    vertex: base.vertex_name(v),
                },
                projected: StalkSum::zero(),
                expected,
            };
        };
        lifted.add(Vertex::Core(idx), n, m);
    }
    let window = c.to_quiver();
    let projected = StalkSum::from_terms(expand_once(&lifted, &window).terms().map(|(w, n, m)| {
        let Vertex::Core(j) = w else {
            unreachable!("window quivers have no rays")
        };
        (c.vertices()[j].base, n, m)
    }));
    let status = if projected == expected {
        LiftStatus::Equal
    } else {
        LiftStatus::Mismatch
    };
    LiftReport {
        status,
        projected,
        expected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::{build_zcover, Window};
    use crate::quiver::parse_quiver;

    #[test]
    fn three_cycle_round_trip() {
        let q = parse_quiver("quiver C3\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 3 -> 1\n").unwrap();
        let c = build_zcover(&q, "1", Window::new(-4, 5).unwrap()).unwrap();
        let r = lift_and_project(&StalkSum::simple(Vertex::Core(0)), &c);
        assert_eq!(r.status, LiftStatus::Equal);
        assert_eq!(r.projected, StalkSum::shifted(Vertex::Core(1), 1));
        let r = lift_and_project(&StalkSum::zero(), &c);
        assert_eq!(r.status, LiftStatus::Equal);
        assert!(r.projected.is_empty());
    }

    #[test]
    fn missing_lift_is_inconclusive() {
        let q = parse_quiver("quiver P\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\n").unwrap();
        let c = build_zcover(&q, "1", Window::new(0, 2).unwrap()).unwrap();
        let r = lift_and_project(&StalkSum::simple(Vertex::Core(1)), &c);
        assert_eq!(r.status, LiftStatus::Inconclusive { vertex: "2".into() });
    }

    #[test]
    fn rays_lift_inside_the_truncation() {
        let q = parse_quiver("quiver A\nvertices 0\nray into 0\nray from 0\n").unwrap();
        let c = build_zcover(&q, "0", Window::new(-5, 6).unwrap()).unwrap();
        for v in [
            Vertex::Core(0),
            Vertex::Ray { ray: 0, index: 3 },
            Vertex::Ray { ray: 1, index: 2 },
        ] {
            let r = lift_and_project(&StalkSum::shifted(v, 7), &c);
            assert_eq!(r.status, LiftStatus::Equal, "{v:?}");
        }
    }
}
