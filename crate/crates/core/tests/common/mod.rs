//! Random quivers and independent reference computations shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use rand::Rng;
use sgquiver::quiver::{Letter, Walk};
use sgquiver::singularity::StalkSum;
use sgquiver::{ArrowRef, Quiver, QuiverBuilder, RayDirection, Vertex};

/// Finite quiver with 1..=`max_vertices` vertices and at most `max_arrows`
/// arrows; loops and parallel arrows allowed.
pub fn random_quiver(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_arrows);
    let mut b = QuiverBuilder::new("random").vertices((1..=n).map(|i| i.to_string()));
    for j in 0..m {
        let s = rng.gen_range(1..=n);
        let t = rng.gen_range(1..=n);
        b = b.arrow(format!("a{j}"), s.to_string(), t.to_string());
    }
    b.build().expect("valid random quiver")
}

/// Connected variant: a random spanning tree first, then extra arrows.
pub fn random_connected_quiver(rng: &mut impl Rng, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.gen_range(1..=max_vertices);
    let extra = rng.gen_range(0..=max_arrows.saturating_sub(n - 1));
    let mut b = QuiverBuilder::new("connected").vertices((1..=n).map(|i| i.to_string()));
    let mut j = 0;
    for v in 2..=n {
        let u = rng.gen_range(1..v);
        let (s, t) = if rng.gen_bool(0.5) { (u, v) } else { (v, u) };
        b = b.arrow(format!("a{j}"), s.to_string(), t.to_string());
        j += 1;
    }
    for _ in 0..extra {
        let s = rng.gen_range(1..=n);
        let t = rng.gen_range(1..=n);
        b = b.arrow(format!("a{j}"), s.to_string(), t.to_string());
        j += 1;
    }
    b.build().expect("valid random quiver")
}

/// Random quiver that may also carry rays.
pub fn random_quiver_with_rays(rng: &mut impl Rng) -> Quiver {
    let q = random_quiver(rng, 5, 8);
    let mut b = QuiverBuilder::new("rays").vertices(q.vertex_names().iter().cloned());
    for a in q.arrows() {
        b = b.arrow(a.id.clone(), q.vertex_names()[a.source].clone(), q.vertex_names()[a.target].clone());
    }
    for _ in 0..rng.gen_range(0..=2) {
        let anchor = q.vertex_names()[rng.gen_range(0..q.vertex_count())].clone();
        let dir = if rng.gen_bool(0.5) {
            RayDirection::Outgoing
        } else {
            RayDirection::Incoming
        };
        b = b.ray(anchor, dir);
    }
    b.build().expect("valid random quiver")
}

/// Random stalk sum on core vertices (and the first few ray vertices).
pub fn random_object(rng: &mut impl Rng, q: &Quiver) -> StalkSum {
    let mut vertices: Vec<Vertex> = q.core_vertices().collect();
    for ray in 0..q.rays().len() {
        vertices.extend((1..=3).map(|index| Vertex::Ray { ray, index }));
    }
    let terms = rng.gen_range(0..=4);
    StalkSum::from_terms((0..terms).map(|_| {
        (
            vertices[rng.gen_range(0..vertices.len())],
            rng.gen_range(-5..=5),
            rng.gen_range(1..=3),
        )
    }))
}

/// Adjacency counts `A[x][y] = #arrows x → y` of a finite quiver.
pub fn adjacency(q: &Quiver) -> Vec<Vec<u64>> {
    let n = q.vertex_count();
    let mut a = vec![vec![0; n]; n];
    for arrow in q.arrows() {
        a[arrow.source][arrow.target] += 1;
    }
    a
}

/// `Aᵀ v`: multiplicity vector after one step along the arrows.
pub fn transpose_action(a: &[Vec<u64>], v: &[u64]) -> Vec<u64> {
    let n = v.len();
    (0..n).map(|y| (0..n).map(|x| a[x][y] * v[x]).sum()).collect()
}

/// Multiplicity vector of a stalk sum on a finite quiver, shifts forgotten.
pub fn multiplicities(q: &Quiver, x: &StalkSum) -> Vec<u64> {
    let mut v = vec![0; q.vertex_count()];
    for (w, _, m) in x.terms() {
        let Vertex::Core(i) = w else { panic!("finite quiver") };
        v[i] += m;
    }
    v
}

/// Vertex multiset of a stalk sum on a finite quiver, shifts forgotten.
pub fn stripped(x: &StalkSum) -> BTreeMap<usize, u64> {
    let mut out = BTreeMap::new();
    for (w, _, m) in x.terms() {
        let Vertex::Core(i) = w else { panic!("finite quiver") };
        *out.entry(i).or_insert(0) += m;
    }
    out
}

/// Undirected steps out of `v` in a finite quiver: (letter, endpoint, degree).
fn steps(q: &Quiver, v: usize) -> Vec<(Letter, usize, i64)> {
    let mut out = Vec::new();
    for (i, a) in q.arrows().iter().enumerate() {
        if a.source == v {
            out.push((Letter::forward(ArrowRef::Core(i)), a.target, 1));
        }
        if a.target == v {
            out.push((Letter::inverse(ArrowRef::Core(i)), a.source, -1));
        }
    }
    out
}

/// Smallest positive degree-gcd of closed walks of length at most
/// `max_len`, found by exhaustive search over (vertex, degree) states, taken
/// per start vertex and minimized over starts; 0 if every closed walk has
/// degree 0.
pub fn closed_walk_period(q: &Quiver, max_len: usize) -> u64 {
    let mut best: Option<u64> = None;
    for start in 0..q.vertex_count() {
        let mut g = 0u64;
        let mut layer: BTreeSet<(usize, i64)> = BTreeSet::from([(start, 0)]);
        for _ in 0..max_len {
            let mut next = BTreeSet::new();
            for &(v, d) in &layer {
                for (_, w, step) in steps(q, v) {
                    next.insert((w, d + step));
                }
            }
            for &(v, d) in &next {
                if v == start {
                    g = g.gcd(&d.unsigned_abs());
                }
            }
            layer = next;
        }
        if g > 0 {
            best = Some(best.map_or(g, |b| b.min(g)));
        }
    }
    best.unwrap_or(0)
}

/// Random walk of `len` steps from `start` in a finite quiver; stops early
/// at an isolated vertex.
pub fn random_walk(rng: &mut impl Rng, q: &Quiver, start: usize, len: usize) -> Walk {
    let mut at = start;
    let mut letters = Vec::new();
    for _ in 0..len {
        let options = steps(q, at);
        if options.is_empty() {
            break;
        }
        let (letter, next, _) = options[rng.gen_range(0..options.len())];
        letters.push(letter);
        at = next;
    }
    Walk::new(Vertex::Core(start), letters)
}

/// Shortest undirected walk from `from` to `to`, if connected.
pub fn connecting_walk(q: &Quiver, from: usize, to: usize) -> Option<Walk> {
    let mut prev: Vec<Option<(usize, Letter)>> = vec![None; q.vertex_count()];
    let mut seen = vec![false; q.vertex_count()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        for (letter, w, _) in steps(q, v) {
            if !seen[w] {
                seen[w] = true;
                prev[w] = Some((v, letter));
                queue.push_back(w);
            }
        }
    }
    if !seen[to] {
        return None;
    }
    let mut letters = Vec::new();
    let mut at = to;
    while at != from {
        let (p, letter) = prev[at].expect("reached");
        letters.push(letter);
        at = p;
    }
    letters.reverse();
    Some(Walk::new(Vertex::Core(from), letters))
}
