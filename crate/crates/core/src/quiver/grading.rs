use std::collections::VecDeque;

use num_integer::Integer;
use serde::Serialize;

use super::{Quiver, QuiverError, RayDirection, Vertex};

/// Result of trying to grade a quiver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradingInfo {
    pub gradable: bool,
    /// Grade of every core vertex, present iff the quiver is gradable.
    pub grade: Option<Vec<i64>>,
    /// Grading period `r_Q`; 0 iff gradable.
    pub period: u64,
}

impl GradingInfo {
    /// Grade of any vertex, including ray vertices (anchor grade ± position).
    pub fn grade_of(&self, q: &Quiver, v: Vertex) -> Option<i64> {
        let grade = self.grade.as_ref()?;
        Some(match v {
            Vertex::Core(i) => grade[i],
            Vertex::Ray { ray, index } => {
                let r = q.rays()[ray];
                let step = index as i64;
                match r.direction {
                    RayDirection::Outgoing => grade[r.anchor] + step,
                    RayDirection::Incoming => grade[r.anchor] - step,
                }
            }
        })
    }
}

/// Spanning-tree potential of the component containing `root`.
///
/// `offset[v]` is the degree of the tree walk from `root` to `v` (None
/// outside the component); `period` is the gcd of the degrees of the
/// fundamental cycles, i.e. of `offset[s] + 1 - offset[t]` over all arrows.
/// Closed-walk degrees at a vertex form a subgroup of ℤ generated by the
/// fundamental cycles, so this gcd is the least positive closed-walk degree.
#[derive(Clone, Debug)]
pub(crate) struct Potential {
    pub offset: Vec<Option<i64>>,
    pub period: u64,
}

pub(crate) fn potential(q: &Quiver, root: usize) -> Potential {
    let mut offset = vec![None; q.vertex_count()];
    offset[root] = Some(0);
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        let here = offset[v].unwrap_or_default();
        for &a in q.out_arrows(v) {
            let t = q.arrows()[a].target;
            if offset[t].is_none() {
                offset[t] = Some(here + 1);
                queue.push_back(t);
            }
        }
        for &a in q.in_arrows(v) {
            let s = q.arrows()[a].source;
            if offset[s].is_none() {
                offset[s] = Some(here - 1);
                queue.push_back(s);
            }
        }
    }
    let period = q
        .arrows()
        .iter()
        .filter_map(|a| Some(offset[a.source]? + 1 - offset[a.target]?))
        .fold(0u64, |g, d: i64| g.gcd(&d.unsigned_abs()));
    Potential { offset, period }
}

/// One potential per connected component, rooted at the lexicographically
/// smallest vertex name of the component.
fn component_potentials(q: &Quiver) -> Vec<Potential> {
    let (label, count) = q.component_labels();
    (0..count)
        .map(|c| {
            let root = (0..q.vertex_count())
                .filter(|&v| label[v] == c)
                .min_by(|&a, &b| q.vertex_names()[a].cmp(&q.vertex_names()[b]))
                .expect("components are non-empty");
            potential(q, root)
        })
        .collect()
}

/// True iff every closed walk has degree 0. Rays are trees and never matter.
pub fn is_gradable(q: &Quiver) -> Result<bool, QuiverError> {
    if q.is_empty() {
        return Err(QuiverError::Empty);
    }
    Ok(component_potentials(q).iter().all(|p| p.period == 0))
}

/// Minimum positive degree of a closed walk, or 0 when the quiver is
/// gradable. For a disconnected quiver this is the minimum over components.
pub fn grading_period(q: &Quiver) -> Result<u64, QuiverError> {
    if q.is_empty() {
        return Err(QuiverError::Empty);
    }
    Ok(combined_period(&component_potentials(q)))
}

fn combined_period(potentials: &[Potential]) -> u64 {
    potentials
        .iter()
        .map(|p| p.period)
        .filter(|&r| r > 0)
        .min()
        .unwrap_or(0)
}

/// Grading of a quiver. Each component's lexicographically smallest vertex
/// sits in grade 0.
pub fn grading(q: &Quiver) -> GradingInfo {
    let potentials = component_potentials(q);
    let period = combined_period(&potentials);
    if period > 0 {
        return GradingInfo {
            gradable: false,
            grade: None,
            period,
        };
    }
    let mut grade = vec![0; q.vertex_count()];
    for p in &potentials {
        for (v, off) in p.offset.iter().enumerate() {
            if let Some(off) = off {
                grade[v] = *off;
            }
        }
    }
    GradingInfo {
        gradable: true,
        grade: Some(grade),
        period: 0,
    }
}
