//! Finite windows of the minimal gradable covering.
//!
//! `Q^ℤ` has vertices `(x, n)` and arrows `(α, n): (s α, n) -> (t α, n + 1)`.
//! The component through `(x₀, 0)` consists of the `(x, n)` such that some
//! walk from `x₀` to `x` has degree `n`. With the spanning-tree potential `d`
//! and grading period `r`, that is `n ≡ d(x) (mod r)`, or `n = d(x)` when
//! `r = 0`. A [`CoveringQuiver`] materializes this component between two
//! levels; rays are cut after `ray_depth` vertices.

use std::collections::{HashMap, VecDeque};
use std::fmt::{self, Write};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::quiver::{ArrowRef, Quiver, QuiverBuilder, RayDirection, Vertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("unknown basepoint `{0}`")]
    UnknownBasepoint(String),
    #[error("empty window {lo}..{hi}")]
    EmptyWindow { lo: i64, hi: i64 },
    #[error("malformed window `{0}` (expected LO..HI)")]
    BadWindow(String),
    #[error("`{0}` is not in the covering window")]
    OutOfWindow(String),
}

/// Half-open level interval `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self, CoverError> {
        if lo >= hi {
            return Err(CoverError::EmptyWindow { lo, hi });
        }
        Ok(Window { lo, hi })
    }

    pub fn height(&self) -> u64 {
        (self.hi - self.lo) as u64
    }

    pub fn contains(&self, level: i64) -> bool {
        self.lo <= level && level < self.hi
    }
}

impl FromStr for Window {
    type Err = CoverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CoverError::BadWindow(s.to_string());
        let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
        let lo = lo.trim().parse().map_err(|_| bad())?;
        let hi = hi.trim().parse().map_err(|_| bad())?;
        Window::new(lo, hi)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverVertex {
    pub base: Vertex,
    pub level: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CoverArrow {
    pub base: ArrowRef,
    pub level: i64,
    /// Index into [`CoveringQuiver::vertices`].
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug)]
pub struct CoveringQuiver {
    base: Quiver,
    window: Window,
    basepoint: usize,
    period: u64,
    ray_depth: u64,
    offset: Vec<Option<i64>>,
    vertices: Vec<CoverVertex>,
    index: HashMap<CoverVertex, usize>,
    arrows: Vec<CoverArrow>,
}

/// Lexicographically smallest core vertex, the default basepoint.
pub fn default_basepoint(q: &Quiver) -> Option<&str> {
    q.smallest_vertex().map(|i| q.vertex_names()[i].as_str())
}

/// The component of `Q^ℤ` through `(basepoint, 0)`, restricted to `window`,
/// with rays cut after `window.height()` vertices.
pub fn build_zcover(q: &Quiver, basepoint: &str, window: Window) -> Result<CoveringQuiver, CoverError> {
    build_zcover_with_ray_depth(q, basepoint, window, window.height())
}

pub fn build_zcover_with_ray_depth(
    q: &Quiver,
    basepoint: &str,
    window: Window,
    ray_depth: u64,
) -> Result<CoveringQuiver, CoverError> {
    let root = q
        .vertex_id(basepoint)
        .ok_or_else(|| CoverError::UnknownBasepoint(basepoint.to_string()))?;
    let potential = crate::quiver::grading::potential(q, root);
    let mut cover = CoveringQuiver {
        base: q.clone(),
        window,
        basepoint: root,
        period: potential.period,
        ray_depth,
        offset: potential.offset,
        vertices: Vec::new(),
        index: HashMap::new(),
        arrows: Vec::new(),
    };
    cover.materialize();
    Ok(cover)
}

impl CoveringQuiver {
    pub fn base(&self) -> &Quiver {
        &self.base
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn ray_depth(&self) -> u64 {
        self.ray_depth
    }

    pub fn basepoint(&self) -> Vertex {
        Vertex::Core(self.basepoint)
    }

    pub fn vertices(&self) -> &[CoverVertex] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[CoverArrow] {
        &self.arrows
    }

    pub fn index_of(&self, v: CoverVertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn contains(&self, v: CoverVertex) -> bool {
        self.index.contains_key(&v)
    }

    /// Base vertices of the basepoint's component, rays cut at `ray_depth`.
    pub fn base_vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = (0..self.base.vertex_count())
            .filter(|&i| self.offset[i].is_some())
            .map(Vertex::Core)
            .collect();
        for (r, ray) in self.base.rays().iter().enumerate() {
            if self.offset[ray.anchor].is_some() {
                out.extend((1..=self.ray_depth).map(|index| Vertex::Ray { ray: r, index }));
            }
        }
        out
    }

    fn base_arrows(&self) -> Vec<ArrowRef> {
        let mut out: Vec<ArrowRef> = self
            .base
            .arrows()
            .iter()
            .enumerate()
            .filter(|(_, a)| self.offset[a.source].is_some())
            .map(|(i, _)| ArrowRef::Core(i))
            .collect();
        for (r, ray) in self.base.rays().iter().enumerate() {
            if self.offset[ray.anchor].is_some() {
                out.extend((1..=self.ray_depth).map(|index| ArrowRef::Ray { ray: r, index }));
            }
        }
        out
    }

    /// Degree of a walk from the basepoint to `v`, modulo the period.
    fn potential_of(&self, v: Vertex) -> Option<i64> {
        match v {
            Vertex::Core(i) => self.offset.get(i).copied().flatten(),
            Vertex::Ray { ray, index } => {
                let r = self.base.rays().get(ray)?;
                let anchor = self.offset[r.anchor]?;
                Some(match r.direction {
                    RayDirection::Outgoing => anchor + index as i64,
                    RayDirection::Incoming => anchor - index as i64,
                })
            }
        }
    }

    /// Levels of `Q^ℤ`'s component at which `v` has a lift inside the window.
    pub fn lift_levels(&self, v: Vertex) -> Vec<i64> {
        let Some(d) = self.potential_of(v) else {
            return Vec::new();
        };
        if self.period == 0 {
            return if self.window.contains(d) { vec![d] } else { Vec::new() };
        }
        let r = self.period as i64;
        let first = self.window.lo + (d - self.window.lo).rem_euclid(r);
        (first..self.window.hi).step_by(r as usize).collect()
    }

    fn within_ray_depth(&self, v: Vertex) -> bool {
        match v {
            Vertex::Core(_) => true,
            Vertex::Ray { index, .. } => index <= self.ray_depth,
        }
    }

    fn materialize(&mut self) {
        let mut candidates: Vec<CoverVertex> = self
            .base_vertices()
            .into_iter()
            .flat_map(|v| {
                self.lift_levels(v)
                    .into_iter()
                    .map(move |level| CoverVertex { base: v, level })
            })
            .collect();
        candidates.sort_by_cached_key(|v| (v.level, self.base.vertex_name(v.base)));
        let sorted_index: HashMap<CoverVertex, usize> =
            candidates.iter().enumerate().map(|(i, v)| (*v, i)).collect();

        let mut raw_arrows = Vec::new();
        for a in self.base_arrows() {
            let (s, t) = self.base.arrow_endpoints(a).expect("arrow of the base");
            if !self.within_ray_depth(s) || !self.within_ray_depth(t) {
                continue;
            }
            for level in self.lift_levels(s) {
                let src = sorted_index.get(&CoverVertex { base: s, level });
                let tgt = sorted_index.get(&CoverVertex {
                    base: t,
                    level: level + 1,
                });
                if let (Some(&src), Some(&tgt)) = (src, tgt) {
                    raw_arrows.push((a, level, src, tgt));
                }
            }
        }

        // Breadth-first order from (basepoint, 0) through the window, then the
        // remaining vertices by (level, name).
        let mut adjacency = vec![Vec::new(); candidates.len()];
        for &(_, _, s, t) in &raw_arrows {
            adjacency[s].push(t);
            adjacency[t].push(s);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        let mut order = Vec::with_capacity(candidates.len());
        let mut seen = vec![false; candidates.len()];
        let start = CoverVertex {
            base: Vertex::Core(self.basepoint),
            level: 0,
        };
        if let Some(&s) = sorted_index.get(&start) {
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                order.push(v);
                for &w in &adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        order.extend((0..candidates.len()).filter(|&v| !seen[v]));
        let mut position = vec![0; candidates.len()];
        for (new, &old) in order.iter().enumerate() {
            position[old] = new;
        }

        self.vertices = order.iter().map(|&old| candidates[old]).collect();
        self.index = self.vertices.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut arrows: Vec<CoverArrow> = raw_arrows
            .into_iter()
            .map(|(base, level, s, t)| CoverArrow {
                base,
                level,
                source: position[s],
                target: position[t],
            })
            .collect();
        arrows.sort_by_key(|a| (a.source, a.target));
        self.arrows = arrows;
    }

    pub fn vertex_label(&self, v: CoverVertex) -> String {
        format!("{}@{}", self.base.vertex_name(v.base), v.level)
    }

    pub fn arrow_label(&self, a: &CoverArrow) -> String {
        format!("{}@{}", self.base.arrow_name(a.base), a.level)
    }

    /// π on vertices: forgets the level.
    pub fn project(&self, v: CoverVertex) -> Result<Vertex, CoverError> {
        if self.contains(v) {
            Ok(v.base)
        } else {
            Err(CoverError::OutOfWindow(self.vertex_label(v)))
        }
    }

    /// π on arrows, by index into [`CoveringQuiver::arrows`].
    pub fn project_arrow(&self, arrow: usize) -> Result<ArrowRef, CoverError> {
        self.arrows
            .get(arrow)
            .map(|a| a.base)
            .ok_or_else(|| CoverError::OutOfWindow(format!("arrow #{arrow}")))
    }

    /// `ρ^k(x, n) = (x, n + k·r)`; the identity when the base is gradable.
    pub fn translate(&self, v: CoverVertex, k: i64) -> Result<CoverVertex, CoverError> {
        if !self.contains(v) {
            return Err(CoverError::OutOfWindow(self.vertex_label(v)));
        }
        let w = CoverVertex {
            base: v.base,
            level: v.level + k * self.period as i64,
        };
        if self.contains(w) {
            Ok(w)
        } else {
            Err(CoverError::OutOfWindow(self.vertex_label(w)))
        }
    }

    /// Lift of `v` closest to level 0 (ties towards the lower level) whose
    /// successors all lie in the window.
    pub fn interior_lift(&self, v: Vertex) -> Option<CoverVertex> {
        if let Vertex::Ray { ray, index } = v {
            if self.base.rays()[ray].direction == RayDirection::Outgoing && index >= self.ray_depth {
                return None;
            }
        }
        self.lift_levels(v)
            .into_iter()
            .filter(|&level| level + 1 < self.window.hi)
            .min_by_key(|&level| (level.abs(), level))
            .map(|level| CoverVertex { base: v, level })
            .filter(|c| self.contains(*c))
    }

    /// Drops the arrow at `index`; a corrupted covering for testing the checks.
    pub fn without_arrow(&self, index: usize) -> CoveringQuiver {
        let mut c = self.clone();
        if index < c.arrows.len() {
            c.arrows.remove(index);
        }
        c
    }

    /// The window as an ordinary finite quiver. Vertex `i` of the result is
    /// `vertices()[i]`, named `x@n`; arrow `j` is `arrows()[j]`, named `α@n`.
    pub fn to_quiver(&self) -> Quiver {
        let mut b = QuiverBuilder::new(format!("{}_cover", self.base.name()))
            .vertices(self.vertices.iter().map(|v| self.vertex_label(*v)));
        for a in &self.arrows {
            b = b.arrow(
                self.arrow_label(a),
                self.vertex_label(self.vertices[a.source]),
                self.vertex_label(self.vertices[a.target]),
            );
        }
        b.build().expect("window labels are distinct identifiers")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cover {\n");
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{}\";", self.vertex_label(*v));
        }
        for a in &self.arrows {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertex_label(self.vertices[a.source]),
                self.vertex_label(self.vertices[a.target]),
                self.base.arrow_name(a.base)
            );
        }
        out.push_str("}\n");
        out
    }

    fn out_arrow_bases(&self, v: usize) -> Vec<ArrowRef> {
        let mut out: Vec<ArrowRef> = self
            .arrows
            .iter()
            .filter(|a| a.source == v)
            .map(|a| a.base)
            .collect();
        out.sort_unstable();
        out
    }

    fn in_arrow_bases(&self, v: usize) -> Vec<ArrowRef> {
        let mut out: Vec<ArrowRef> = self
            .arrows
            .iter()
            .filter(|a| a.target == v)
            .map(|a| a.base)
            .collect();
        out.sort_unstable();
        out
    }

    /// True when every neighbour of `v` in `Q^ℤ` lies inside the window.
    fn is_interior(&self, v: CoverVertex) -> bool {
        let ray_ok = match v.base {
            Vertex::Core(_) => true,
            Vertex::Ray { index, .. } => index < self.ray_depth,
        };
        ray_ok && self.window.lo < v.level && v.level + 1 < self.window.hi
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ConditionStatus {
    Pass,
    /// Holds for everything the window can see.
    PassWithinWindow,
    Fail { witness: String },
    Inconclusive { reason: String },
}

impl ConditionStatus {
    pub fn passed(&self) -> bool {
        matches!(self, ConditionStatus::Pass | ConditionStatus::PassWithinWindow)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub condition: u8,
    pub name: &'static str,
    #[serde(flatten)]
    pub status: ConditionStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GaloisReport {
    pub conditions: Vec<ConditionReport>,
}

impl GaloisReport {
    /// Status of condition `n` (1 to 4).
    pub fn condition(&self, n: u8) -> &ConditionStatus {
        &self.conditions[usize::from(n) - 1].status
    }

    pub fn all_passed(&self) -> bool {
        self.conditions.iter().all(|c| c.status.passed())
    }

    pub fn any_failed(&self) -> bool {
        self.conditions
            .iter()
            .any(|c| matches!(c.status, ConditionStatus::Fail { .. }))
    }
}

const CONDITION_NAMES: [&str; 4] = [
    "surjective on vertices",
    "invariant under translation",
    "transitive on fibres",
    "bijective on arrow stars",
];

/// Checks the four Galois covering conditions on the window.
pub fn verify_galois(c: &CoveringQuiver) -> GaloisReport {
    let statuses = if c.window.height() < 2 * c.period + 2 {
        let reason = format!(
            "window height {} is below 2·r + 2 = {}",
            c.window.height(),
            2 * c.period + 2
        );
        vec![ConditionStatus::Inconclusive { reason }; 4]
    } else {
        vec![
            check_surjective(c),
            check_translation_invariant(c),
            check_fibre_transitive(c),
            check_local_bijection(c),
        ]
    };
    GaloisReport {
        conditions: statuses
            .into_iter()
            .enumerate()
            .map(|(i, status)| ConditionReport {
                condition: i as u8 + 1,
                name: CONDITION_NAMES[i],
                status,
            })
            .collect(),
    }
}

fn check_surjective(c: &CoveringQuiver) -> ConditionStatus {
    let mut hit = vec![false; c.base.vertex_count()];
    let mut rays_hit = vec![false; c.base.rays().len()];
    for v in &c.vertices {
        match v.base {
            Vertex::Core(i) => hit[i] = true,
            Vertex::Ray { ray, index: 1 } => rays_hit[ray] = true,
            Vertex::Ray { .. } => {}
        }
    }
    let mut inconclusive = None;
    let mut targets: Vec<Vertex> = (0..c.base.vertex_count())
        .filter(|&i| c.offset[i].is_some())
        .map(Vertex::Core)
        .collect();
    if c.ray_depth >= 1 {
        targets.extend(
            c.base
                .rays()
                .iter()
                .enumerate()
                .filter(|(_, r)| c.offset[r.anchor].is_some())
                .map(|(ray, _)| Vertex::Ray { ray, index: 1 }),
        );
    }
    for v in targets {
        let present = match v {
            Vertex::Core(i) => hit[i],
            Vertex::Ray { ray, .. } => rays_hit[ray],
        };
        if present {
            continue;
        }
        if c.lift_levels(v).is_empty() {
            inconclusive.get_or_insert_with(|| {
                format!("no lift of {} falls inside the window", c.base.vertex_name(v))
            });
        } else {
            return ConditionStatus::Fail {
                witness: c.base.vertex_name(v),
            };
        }
    }
    match inconclusive {
        Some(reason) => ConditionStatus::Inconclusive { reason },
        None => ConditionStatus::Pass,
    }
}

fn check_translation_invariant(c: &CoveringQuiver) -> ConditionStatus {
    if c.period == 0 {
        return ConditionStatus::Pass;
    }
    let r = c.period as i64;
    for v in &c.vertices {
        if !c.window.contains(v.level + r) {
            continue;
        }
        match c.translate(*v, 1) {
            Ok(w) if w.base == v.base => {}
            _ => {
                return ConditionStatus::Fail {
                    witness: c.vertex_label(*v),
                }
            }
        }
    }
    let present: std::collections::HashSet<(ArrowRef, i64)> =
        c.arrows.iter().map(|a| (a.base, a.level)).collect();
    for a in &c.arrows {
        if a.level + r + 1 < c.window.hi && !present.contains(&(a.base, a.level + r)) {
            return ConditionStatus::Fail {
                witness: c.arrow_label(a),
            };
        }
    }
    ConditionStatus::PassWithinWindow
}

fn check_fibre_transitive(c: &CoveringQuiver) -> ConditionStatus {
    let mut fibres: HashMap<Vertex, Vec<i64>> = HashMap::new();
    for v in &c.vertices {
        fibres.entry(v.base).or_default().push(v.level);
    }
    let mut keys: Vec<&Vertex> = fibres.keys().collect();
    keys.sort();
    for base in keys {
        let levels = &fibres[base];
        let mut levels = levels.clone();
        levels.sort_unstable();
        let ok = if c.period == 0 {
            levels.len() == 1
        } else {
            levels.windows(2).all(|w| w[1] - w[0] == c.period as i64)
        };
        if !ok {
            return ConditionStatus::Fail {
                witness: c.base.vertex_name(*base),
            };
        }
    }
    ConditionStatus::PassWithinWindow
}

fn check_local_bijection(c: &CoveringQuiver) -> ConditionStatus {
    for a in &c.arrows {
        let (s, t) = (c.vertices[a.source], c.vertices[a.target]);
        let ok = c.base.arrow_endpoints(a.base) == Some((s.base, t.base)) && t.level == s.level + 1;
        if !ok {
            return ConditionStatus::Fail {
                witness: c.arrow_label(a),
            };
        }
    }
    for (i, v) in c.vertices.iter().enumerate() {
        if !c.is_interior(*v) {
            continue;
        }
        let mut base_out: Vec<ArrowRef> = c.base.successors(v.base).into_iter().map(|(a, _)| a).collect();
        let mut base_in: Vec<ArrowRef> = c.base.predecessors(v.base).into_iter().map(|(a, _)| a).collect();
        base_out.sort_unstable();
        base_in.sort_unstable();
        if c.out_arrow_bases(i) != base_out || c.in_arrow_bases(i) != base_in {
            return ConditionStatus::Fail {
                witness: c.vertex_label(*v),
            };
        }
    }
    ConditionStatus::PassWithinWindow
}

/// True iff no `ρ^k`, `1 <= k <= height / r`, fixes a window vertex.
pub fn free_action_check(c: &CoveringQuiver) -> bool {
    if c.period == 0 {
        return true;
    }
    let max_k = (c.window.height() / c.period) as i64;
    (1..=max_k).all(|k| {
        c.vertices
            .iter()
            .all(|v| c.translate(*v, k).ok().is_none_or(|w| w != *v))
    })
}
