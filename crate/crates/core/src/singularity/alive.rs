use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::{expand_once, StalkSum};
use crate::quiver::{Quiver, RayDirection, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

/// Vertices admitting an infinite path in one direction.
///
/// Forward: on a directed cycle, able to reach one, or able to reach the
/// anchor of an outgoing ray; every outgoing-ray vertex; incoming-ray
/// vertices whose anchor is alive. Backward is the same notion on the
/// opposite quiver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AliveSet {
    pub direction: Direction,
    core: Vec<bool>,
    on_cycle: Vec<bool>,
    rays: Vec<bool>,
}

impl AliveSet {
    pub fn contains(&self, v: Vertex) -> bool {
        match v {
            Vertex::Core(i) => self.core.get(i).copied().unwrap_or(false),
            Vertex::Ray { ray, .. } => self.rays.get(ray).copied().unwrap_or(false),
        }
    }

    pub fn is_empty(&self) -> bool {
        !self.core.iter().any(|&a| a)
    }

    pub fn core_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.core.iter().enumerate().filter(|(_, &a)| a).map(|(i, _)| i)
    }

    /// Whether every vertex of ray `ray` is alive.
    pub fn ray_alive(&self, ray: usize) -> bool {
        self.rays[ray]
    }

    /// Core vertex lying on a directed cycle (including loops).
    pub fn on_cycle(&self, v: usize) -> bool {
        self.on_cycle[v]
    }
}

fn core_graph(q: &Quiver) -> DiGraph<(), ()> {
    let mut g = DiGraph::new();
    let nodes: Vec<_> = (0..q.vertex_count()).map(|_| g.add_node(())).collect();
    for a in q.arrows() {
        g.add_edge(nodes[a.source], nodes[a.target], ());
    }
    g
}

fn forward_alive(q: &Quiver) -> AliveSet {
    let g = core_graph(q);
    let mut on_cycle = vec![false; q.vertex_count()];
    for scc in tarjan_scc(&g) {
        if scc.len() > 1 || g.contains_edge(scc[0], scc[0]) {
            for v in scc {
                on_cycle[v.index()] = true;
            }
        }
    }
    let mut core = on_cycle.clone();
    for r in q.rays() {
        if r.direction == RayDirection::Outgoing {
            core[r.anchor] = true;
        }
    }
    let mut stack: Vec<usize> = (0..core.len()).filter(|&v| core[v]).collect();
    while let Some(v) = stack.pop() {
        for &a in q.in_arrows(v) {
            let s = q.arrows()[a].source;
            if !core[s] {
                core[s] = true;
                stack.push(s);
            }
        }
    }
    let rays = q
        .rays()
        .iter()
        .map(|r| r.direction == RayDirection::Outgoing || core[r.anchor])
        .collect();
    AliveSet {
        direction: Direction::Forward,
        core,
        on_cycle,
        rays,
    }
}

pub fn alive_vertices(q: &Quiver, direction: Direction) -> AliveSet {
    match direction {
        Direction::Forward => forward_alive(q),
        Direction::Backward => AliveSet {
            direction: Direction::Backward,
            ..forward_alive(&q.opposite())
        },
    }
}

/// `S_v ≅ 0`: the forward reach of `v` is finite and acyclic.
pub fn is_zero_vertex(q: &Quiver, v: Vertex) -> bool {
    !forward_alive(q).contains(v)
}

pub fn is_zero(x: &StalkSum, q: &Quiver) -> bool {
    let alive = forward_alive(q);
    x.terms().all(|(v, _, _)| !alive.contains(v))
}

/// Drops dead terms, and expands alive terms off cycles that still have a
/// dead successor, until neither applies.
///
/// The result has only alive terms, is zero iff `x` is, and is a fixed point.
pub fn normalize(x: &StalkSum, q: &Quiver) -> StalkSum {
    normalize_with(x, q, &forward_alive(q))
}

pub(crate) fn normalize_with(x: &StalkSum, q: &Quiver, alive: &AliveSet) -> StalkSum {
    let prunable = |v: Vertex| match v {
        Vertex::Core(i) => {
            !alive.on_cycle(i) && q.successors(v).iter().any(|&(_, t)| !alive.contains(t))
        }
        Vertex::Ray { .. } => false,
    };
    let mut current = x.clone();
    loop {
        let mut next = StalkSum::zero();
        let mut pending = StalkSum::zero();
        let mut changed = false;
        for (v, n, m) in current.terms() {
            if !alive.contains(v) {
                changed = true;
            } else if prunable(v) {
                changed = true;
                pending.add(v, n, m);
            } else {
                next.add(v, n, m);
            }
        }
        if !changed {
            return current;
        }
        for (v, n, m) in expand_once(&pending, q).terms() {
            next.add(v, n, m);
        }
        current = next;
    }
}

/// The singularity category vanishes iff no simple is alive.
pub fn sg_is_trivial(q: &Quiver) -> bool {
    forward_alive(q).is_empty()
}
