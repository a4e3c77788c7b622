use std::collections::HashMap;

use petgraph::algo::tarjan_scc;
use serde::Serialize;

use super::alive::{alive_vertices, normalize_with, AliveSet, Direction};
use super::{checked_expand_once, StalkSum};
use crate::quiver::{Quiver, RayDirection, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    Cycle,
    Ray,
}

/// A terminal component of the alive part: a strongly connected piece of
/// the core with no alive exits, or an outgoing ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminalComponent {
    pub kind: ComponentKind,
    /// Core vertices of the component (the anchor, for a ray rooted there).
    pub vertices: Vec<Vertex>,
    pub ray: Option<usize>,
    pub representative: Vertex,
    /// `ℓ` with `S_rep ≅ S_rep[ℓ]`, for unbranched cycles.
    pub period: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedComponent {
    pub kind: ComponentKind,
    pub vertices: Vec<String>,
    pub representative: String,
    pub period: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorReport {
    pub components: Vec<TerminalComponent>,
    alive: AliveSet,
    reach: Vec<Vec<usize>>,
    by_representative: HashMap<Vertex, usize>,
}

impl GeneratorReport {
    pub fn is_trivial(&self) -> bool {
        self.components.is_empty()
    }

    pub fn representatives(&self) -> Vec<Vertex> {
        self.components.iter().map(|c| c.representative).collect()
    }

    /// Terminal components reachable from core vertex `v` (empty iff dead).
    pub fn reached_from(&self, v: usize) -> &[usize] {
        &self.reach[v]
    }

    pub fn alive(&self) -> &AliveSet {
        &self.alive
    }

    pub fn named(&self, q: &Quiver) -> Vec<NamedComponent> {
        self.components
            .iter()
            .map(|c| NamedComponent {
                kind: c.kind,
                vertices: c.vertices.iter().map(|&v| q.vertex_name(v)).collect(),
                representative: q.vertex_name(c.representative),
                period: c.period,
            })
            .collect()
    }

    fn ray_component(&self, ray: usize) -> Option<&TerminalComponent> {
        self.components.iter().find(|c| c.ray == Some(ray))
    }
}

pub fn sg_generators(q: &Quiver) -> GeneratorReport {
    let alive = alive_vertices(q, Direction::Forward);
    let n = q.vertex_count();
    let mut g = petgraph::graph::DiGraph::<(), ()>::new();
    let nodes: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    for a in q.arrows() {
        if alive.contains(Vertex::Core(a.source)) && alive.contains(Vertex::Core(a.target)) {
            g.add_edge(nodes[a.source], nodes[a.target], ());
        }
    }

    let name = |v: Vertex| q.vertex_name(v);
    let mut components = Vec::new();
    for scc in tarjan_scc(&g) {
        let members: Vec<usize> = scc.iter().map(|v| v.index()).collect();
        if !alive.on_cycle(members[0]) {
            continue;
        }
        let inside = |v: Vertex| matches!(v, Vertex::Core(i) if members.contains(&i));
        let closed = members.iter().all(|&v| {
            q.rays_at(v, RayDirection::Outgoing).next().is_none()
                && q.successors(Vertex::Core(v))
                    .iter()
                    .all(|&(_, t)| inside(t) || !alive.contains(t))
        });
        if !closed {
            continue;
        }
        let unbranched = members.iter().all(|&v| {
            q.successors(Vertex::Core(v))
                .iter()
                .filter(|&&(_, t)| alive.contains(t))
                .count()
                == 1
        });
        let mut vertices: Vec<Vertex> = members.iter().map(|&i| Vertex::Core(i)).collect();
        vertices.sort_by_key(|&v| name(v));
        components.push(TerminalComponent {
            kind: ComponentKind::Cycle,
            representative: vertices[0],
            period: unbranched.then_some(members.len() as u64),
            vertices,
            ray: None,
        });
    }
    for (r, ray) in q.rays().iter().enumerate() {
        if ray.direction != RayDirection::Outgoing {
            continue;
        }
        let anchor = Vertex::Core(ray.anchor);
        let rooted_at_anchor = q.out_degree(anchor) == 1;
        components.push(TerminalComponent {
            kind: ComponentKind::Ray,
            vertices: if rooted_at_anchor { vec![anchor] } else { Vec::new() },
            ray: Some(r),
            representative: if rooted_at_anchor {
                anchor
            } else {
                Vertex::Ray { ray: r, index: 1 }
            },
            period: None,
        });
    }
    components.sort_by_key(|c| name(c.representative));

    let mut entry: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in components.iter().enumerate() {
        match c.kind {
            ComponentKind::Cycle => {
                for v in &c.vertices {
                    if let Vertex::Core(v) = v {
                        entry[*v].push(i);
                    }
                }
            }
            ComponentKind::Ray => {
                let anchor = q.rays()[c.ray.expect("ray component")].anchor;
                entry[anchor].push(i);
            }
        }
    }
    let reach = (0..n)
        .map(|start| {
            if !alive.contains(Vertex::Core(start)) {
                return Vec::new();
            }
            let mut seen = vec![false; n];
            seen[start] = true;
            let mut stack = vec![start];
            let mut found = Vec::new();
            while let Some(v) = stack.pop() {
                found.extend_from_slice(&entry[v]);
                for &a in q.out_arrows(v) {
                    let t = q.arrows()[a].target;
                    if alive.contains(Vertex::Core(t)) && !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            found.sort_unstable();
            found.dedup();
            found
        })
        .collect();
    let by_representative = components
        .iter()
        .enumerate()
        .map(|(i, c)| (c.representative, i))
        .collect();
    GeneratorReport {
        components,
        alive,
        reach,
        by_representative,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    /// Every term sits on a representative.
    Reduced(StalkSum),
    /// The depth ran out; `partial` is isomorphic to the input.
    Unknown { partial: StalkSum },
}

impl Reduction {
    pub fn reduced(&self) -> Option<&StalkSum> {
        match self {
            Reduction::Reduced(s) => Some(s),
            Reduction::Unknown { .. } => None,
        }
    }
}

/// Rewrites a term by a closed form, or returns `None` if it needs expanding.
fn settle(q: &Quiver, report: &GeneratorReport, v: Vertex, n: i64) -> Option<Option<(Vertex, i64)>> {
    if let Some(&c) = report.by_representative.get(&v) {
        let shift = match report.components[c].period {
            Some(len) => n.rem_euclid(len as i64),
            None => n,
        };
        return Some(Some((v, shift)));
    }
    let Vertex::Ray { ray, index } = v else {
        return None;
    };
    let k = i64::try_from(index).ok();
    match q.rays()[ray].direction {
        RayDirection::Outgoing => {
            let root = report.ray_component(ray)?.representative;
            let steps = match root {
                Vertex::Core(_) => k,
                Vertex::Ray { .. } => k.map(|k| k - 1),
            };
            Some(steps.and_then(|s| n.checked_sub(s)).map(|n| (root, n)))
        }
        RayDirection::Incoming => {
            let anchor = Vertex::Core(q.rays()[ray].anchor);
            Some(k.and_then(|k| n.checked_add(k)).map(|n| (anchor, n)))
        }
    }
}

/// Rewrites `x` until every term sits on a representative of `report`,
/// expanding at most `depth` rounds.
pub fn reduce_to_generators(x: &StalkSum, q: &Quiver, report: &GeneratorReport, depth: u64) -> Reduction {
    let mut current = normalize_with(x, q, &report.alive);
    for round in 0..=depth {
        let mut done = StalkSum::zero();
        let mut pending = StalkSum::zero();
        for (v, n, m) in current.terms() {
            let (w, s) = match settle(q, report, v, n) {
                Some(Some(rewritten)) => rewritten,
                Some(None) => return Reduction::Unknown { partial: current.clone() },
                None => (v, n),
            };
            if report.by_representative.contains_key(&w) {
                let (w, s) = settle(q, report, w, s).flatten().unwrap_or((w, s));
                done.add(w, s, m);
            } else {
                pending.add(w, s, m);
            }
        }
        if pending.is_empty() {
            return Reduction::Reduced(done);
        }
        if round == depth {
            return Reduction::Unknown {
                partial: done.sum(&pending),
            };
        }
        let Ok(expanded) = checked_expand_once(&pending, q) else {
            return Reduction::Unknown {
                partial: done.sum(&pending),
            };
        };
        current = normalize_with(&done.sum(&expanded), q, &report.alive);
    }
    unreachable!("the loop returns on its last round")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver;

    fn three_cycle() -> Quiver {
        parse_quiver("quiver C3\nvertices 1 2 3\narrow a: 1 -> 2\narrow b: 2 -> 3\narrow c: 3 -> 1\n").unwrap()
    }

    #[test]
    fn cycle_generator() {
        let q = three_cycle();
        let report = sg_generators(&q);
        assert_eq!(report.components.len(), 1);
        let c = &report.components[0];
        assert_eq!(c.representative, Vertex::Core(0));
        assert_eq!(c.period, Some(3));
        let r = reduce_to_generators(&StalkSum::simple(Vertex::Core(2)), &q, &report, 10);
        assert_eq!(r, Reduction::Reduced(StalkSum::shifted(Vertex::Core(0), 1)));
        let r = reduce_to_generators(&StalkSum::shifted(Vertex::Core(1), 7), &q, &report, 10);
        assert_eq!(r, Reduction::Reduced(StalkSum::shifted(Vertex::Core(0), 0)));
    }

    #[test]
    fn acyclic_has_no_generators() {
        let q = parse_quiver("quiver A\nvertices 1 2\narrow a: 1 -> 2\n").unwrap();
        let report = sg_generators(&q);
        assert!(report.is_trivial());
        let r = reduce_to_generators(&StalkSum::simple(Vertex::Core(0)), &q, &report, 1);
        assert_eq!(r, Reduction::Reduced(StalkSum::zero()));
    }

    #[test]
    fn branching_cycle_is_not_periodic() {
        let q = parse_quiver("quiver B\nvertices 1 2\narrow a: 1 -> 2\narrow b: 2 -> 1\narrow c: 2 -> 1\n").unwrap();
        let report = sg_generators(&q);
        assert_eq!(report.components[0].period, None);
        let r = reduce_to_generators(&StalkSum::simple(Vertex::Core(1)), &q, &report, 3);
        assert_eq!(r, Reduction::Reduced(StalkSum::from_terms([(Vertex::Core(0), 1, 2)])));
    }

    #[test]
    fn ray_closed_forms() {
        let q = parse_quiver("quiver A\nvertices 0\nray into 0\nray from 0\n").unwrap();
        let report = sg_generators(&q);
        assert_eq!(report.representatives(), vec![Vertex::Core(0)]);
        let x = StalkSum::from_terms([
            (Vertex::Ray { ray: 1, index: 3 }, 0, 1),
            (Vertex::Ray { ray: 0, index: 2 }, 1, 4),
        ]);
        let r = reduce_to_generators(&x, &q, &report, 1);
        assert_eq!(
            r,
            Reduction::Reduced(StalkSum::from_terms([(Vertex::Core(0), -3, 1), (Vertex::Core(0), 3, 4)]))
        );
    }

    #[test]
    fn ray_rooted_past_a_branching_anchor() {
        let q = parse_quiver("quiver R\nvertices a b\narrow x: a -> b\nray from a\n").unwrap();
        let report = sg_generators(&q);
        let root = Vertex::Ray { ray: 0, index: 1 };
        assert_eq!(report.representatives(), vec![root]);
        let r = reduce_to_generators(&StalkSum::simple(Vertex::Core(0)), &q, &report, 2);
        assert_eq!(r, Reduction::Reduced(StalkSum::shifted(root, 1)));
        let r = reduce_to_generators(&StalkSum::simple(Vertex::Ray { ray: 0, index: 4 }), &q, &report, 0);
        assert_eq!(r, Reduction::Reduced(StalkSum::shifted(root, -3)));
    }

    #[test]
    fn depth_exhaustion_is_unknown() {
        let q = parse_quiver("quiver D\nvertices 1 2 3 4 5\narrow a: 5 -> 4\narrow b: 4 -> 3\narrow c: 3 -> 2\narrow d: 2 -> 1\narrow e: 1 -> 1\n")
            .unwrap();
        let report = sg_generators(&q);
        let r = reduce_to_generators(&StalkSum::simple(Vertex::Core(4)), &q, &report, 2);
        assert!(matches!(r, Reduction::Unknown { .. }));
        let r = reduce_to_generators(&StalkSum::simple(Vertex::Core(4)), &q, &report, 4);
        assert_eq!(r, Reduction::Reduced(StalkSum::shifted(Vertex::Core(0), 0)));
    }
}
