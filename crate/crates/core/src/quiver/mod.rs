//! Locally finite quivers presented as a finite core plus infinite rays.
//!
//! A ray is an `A∞` chain glued to an anchor vertex of the core. An outgoing
//! ray at `v` adds vertices `v -> r1 -> r2 -> ...`, an incoming ray adds
//! `... -> r2 -> r1 -> v`. Ray vertices are addressed by the ray's index in
//! declaration order and a position `>= 1`; position 0 is the anchor.

mod dsl;
pub(crate) mod grading;
mod presentation;
mod walk;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dsl::{parse_quiver, ParseError};
pub use grading::{grading, grading_period, is_gradable, GradingInfo};
pub use presentation::{
    is_locally_bounded_presentation, ArrowDecl, Degree, LocalFinitenessReport, QuiverDescription,
    RayDecl, VertexDegrees,
};
pub use walk::{walk_degree, Letter, Orientation, Walk};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate arrow `{0}`")]
    DuplicateArrow(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("letter {position} of the walk does not compose with the previous one")]
    MalformedWalk { position: usize },
    #[error("quiver has no vertices")]
    Empty,
    #[error("vertex `{0}` has an unbounded number of arrows")]
    NotLocallyFinite(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RayDirection {
    /// `v -> r1 -> r2 -> ...`
    Outgoing,
    /// `... -> r2 -> r1 -> v`
    Incoming,
}

impl RayDirection {
    pub fn flip(self) -> Self {
        match self {
            RayDirection::Outgoing => RayDirection::Incoming,
            RayDirection::Incoming => RayDirection::Outgoing,
        }
    }
}

/// A vertex of the (possibly infinite) quiver.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Core(usize),
    Ray { ray: usize, index: u64 },
}

/// An arrow of the (possibly infinite) quiver.
///
/// Ray arrow `index = k` joins positions `k - 1` and `k` of the ray, in the
/// ray's direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrowRef {
    Core(usize),
    Ray { ray: usize, index: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ray {
    pub anchor: usize,
    pub direction: RayDirection,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    rays: Vec<Ray>,
    vertex_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
    out_arrows: Vec<Vec<usize>>,
    in_arrows: Vec<Vec<usize>>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.vertices == other.vertices
            && self.arrows == other.arrows
            && self.rays == other.rays
    }
}

impl Eq for Quiver {}

pub(crate) fn is_valid_identifier(id: &str) -> bool {
    !id.is_empty()
        && !id.contains("->")
        && !id
            .chars()
            .any(|c| c.is_whitespace() || c == ':' || c == '#')
}

#[derive(Clone, Debug, Default)]
pub struct QuiverBuilder {
    name: String,
    vertices: Vec<String>,
    arrows: Vec<(String, String, String)>,
    rays: Vec<(String, RayDirection)>,
}

impl QuiverBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        QuiverBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn vertex(mut self, id: impl Into<String>) -> Self {
        self.vertices.push(id.into());
        self
    }

    pub fn vertices<I, S>(mut self, ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.vertices.extend(ids.into_iter().map(Into::into));
        self
    }

    pub fn arrow(
        mut self,
        id: impl Into<String>,
        source: impl Into<String>,
        target: impl Into<String>,
    ) -> Self {
        self.arrows.push((id.into(), source.into(), target.into()));
        self
    }

    pub fn ray(mut self, anchor: impl Into<String>, direction: RayDirection) -> Self {
        self.rays.push((anchor.into(), direction));
        self
    }

    pub fn build(self) -> Result<Quiver, QuiverError> {
        if !is_valid_identifier(&self.name) {
            return Err(QuiverError::InvalidIdentifier(self.name));
        }
        let mut vertex_index = HashMap::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if !is_valid_identifier(v) {
                return Err(QuiverError::InvalidIdentifier(v.clone()));
            }
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(QuiverError::DuplicateVertex(v.clone()));
            }
        }
        let lookup = |v: &str| {
            vertex_index
                .get(v)
                .copied()
                .ok_or_else(|| QuiverError::UnknownVertex(v.to_string()))
        };
        let mut arrows = Vec::with_capacity(self.arrows.len());
        let mut arrow_index = HashMap::with_capacity(self.arrows.len());
        for (id, s, t) in &self.arrows {
            if !is_valid_identifier(id) {
                return Err(QuiverError::InvalidIdentifier(id.clone()));
            }
            if arrow_index.insert(id.clone(), arrows.len()).is_some() {
                return Err(QuiverError::DuplicateArrow(id.clone()));
            }
            arrows.push(Arrow {
                id: id.clone(),
                source: lookup(s)?,
                target: lookup(t)?,
            });
        }
        let rays = self
            .rays
            .iter()
            .map(|(anchor, direction)| {
                Ok(Ray {
                    anchor: lookup(anchor)?,
                    direction: *direction,
                })
            })
            .collect::<Result<Vec<_>, QuiverError>>()?;
        Ok(Quiver::assemble(
            self.name,
            self.vertices,
            arrows,
            rays,
            vertex_index,
            arrow_index,
        ))
    }
}

impl Quiver {
    fn assemble(
        name: String,
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        rays: Vec<Ray>,
        vertex_index: HashMap<String, usize>,
        arrow_index: HashMap<String, usize>,
    ) -> Quiver {
        let n = vertices.len();
        let mut out_arrows = vec![Vec::new(); n];
        let mut in_arrows = vec![Vec::new(); n];
        for (i, a) in arrows.iter().enumerate() {
            out_arrows[a.source].push(i);
            in_arrows[a.target].push(i);
        }
        Quiver {
            name,
            vertices,
            arrows,
            rays,
            vertex_index,
            arrow_index,
            out_arrows,
            in_arrows,
        }
    }

    /// Rebuilds a quiver from already validated parts.
    fn from_parts(name: String, vertices: Vec<String>, arrows: Vec<Arrow>, rays: Vec<Ray>) -> Quiver {
        let vertex_index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        let arrow_index = arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.id.clone(), i))
            .collect();
        Quiver::assemble(name, vertices, arrows, rays, vertex_index, arrow_index)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn is_finite(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn core_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertices.len()).map(Vertex::Core)
    }

    pub fn vertex_id(&self, name: &str) -> Option<usize> {
        self.vertex_index.get(name).copied()
    }

    pub fn arrow_id(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    /// Core arrow indices leaving core vertex `v`.
    pub fn out_arrows(&self, v: usize) -> &[usize] {
        &self.out_arrows[v]
    }

    /// Core arrow indices entering core vertex `v`.
    pub fn in_arrows(&self, v: usize) -> &[usize] {
        &self.in_arrows[v]
    }

    /// Rays anchored at core vertex `v` with the given direction.
    pub fn rays_at(&self, v: usize, direction: RayDirection) -> impl Iterator<Item = usize> + '_ {
        self.rays
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.anchor == v && r.direction == direction)
            .map(|(i, _)| i)
    }

    /// Lexicographically smallest core vertex name, if any.
    pub fn smallest_vertex(&self) -> Option<usize> {
        (0..self.vertices.len()).min_by(|&a, &b| self.vertices[a].cmp(&self.vertices[b]))
    }

    pub fn contains(&self, v: Vertex) -> bool {
        match v {
            Vertex::Core(i) => i < self.vertices.len(),
            Vertex::Ray { ray, index } => ray < self.rays.len() && index >= 1,
        }
    }

    pub fn vertex_name(&self, v: Vertex) -> String {
        match v {
            Vertex::Core(i) => self.vertices[i].clone(),
            Vertex::Ray { ray, index } => format!("ray{ray}.{index}"),
        }
    }

    pub fn arrow_name(&self, a: ArrowRef) -> String {
        match a {
            ArrowRef::Core(i) => self.arrows[i].id.clone(),
            ArrowRef::Ray { ray, index } => format!("ray{ray}~{index}"),
        }
    }

    /// Resolves a vertex by name: core names first, then `ray<R>.<k>`.
    pub fn resolve_vertex(&self, name: &str) -> Result<Vertex, QuiverError> {
        if let Some(i) = self.vertex_id(name) {
            return Ok(Vertex::Core(i));
        }
        parse_ray_address(name, '.')
            .filter(|&(ray, index)| ray < self.rays.len() && index >= 1)
            .map(|(ray, index)| Vertex::Ray { ray, index })
            .ok_or_else(|| QuiverError::UnknownVertex(name.to_string()))
    }

    /// Resolves an arrow by name: core ids first, then `ray<R>~<k>`.
    pub fn resolve_arrow(&self, name: &str) -> Result<ArrowRef, QuiverError> {
        if let Some(i) = self.arrow_id(name) {
            return Ok(ArrowRef::Core(i));
        }
        parse_ray_address(name, '~')
            .filter(|&(ray, index)| ray < self.rays.len() && index >= 1)
            .map(|(ray, index)| ArrowRef::Ray { ray, index })
            .ok_or_else(|| QuiverError::UnknownArrow(name.to_string()))
    }

    fn ray_position(&self, ray: usize, position: u64) -> Vertex {
        if position == 0 {
            Vertex::Core(self.rays[ray].anchor)
        } else {
            Vertex::Ray {
                ray,
                index: position,
            }
        }
    }

    pub fn arrow_endpoints(&self, a: ArrowRef) -> Option<(Vertex, Vertex)> {
        match a {
            ArrowRef::Core(i) => self
                .arrows
                .get(i)
                .map(|a| (Vertex::Core(a.source), Vertex::Core(a.target))),
            ArrowRef::Ray { ray, index } => {
                let r = self.rays.get(ray)?;
                if index == 0 {
                    return None;
                }
                let inner = self.ray_position(ray, index - 1);
                let outer = self.ray_position(ray, index);
                Some(match r.direction {
                    RayDirection::Outgoing => (inner, outer),
                    RayDirection::Incoming => (outer, inner),
                })
            }
        }
    }

    /// Arrows leaving `v` together with their targets (`v⁺`).
    pub fn successors(&self, v: Vertex) -> Vec<(ArrowRef, Vertex)> {
        match v {
            Vertex::Core(i) => {
                let mut out: Vec<_> = self.out_arrows[i]
                    .iter()
                    .map(|&a| (ArrowRef::Core(a), Vertex::Core(self.arrows[a].target)))
                    .collect();
                out.extend(self.rays_at(i, RayDirection::Outgoing).map(|r| {
                    (
                        ArrowRef::Ray { ray: r, index: 1 },
                        Vertex::Ray { ray: r, index: 1 },
                    )
                }));
                out
            }
            Vertex::Ray { ray, index } => match self.rays[ray].direction {
                RayDirection::Outgoing => vec![(
                    ArrowRef::Ray {
                        ray,
                        index: index + 1,
                    },
                    Vertex::Ray {
                        ray,
                        index: index + 1,
                    },
                )],
                RayDirection::Incoming => vec![(
                    ArrowRef::Ray { ray, index },
                    self.ray_position(ray, index - 1),
                )],
            },
        }
    }

    /// Arrows entering `v` together with their sources (`v⁻`).
    pub fn predecessors(&self, v: Vertex) -> Vec<(ArrowRef, Vertex)> {
        match v {
            Vertex::Core(i) => {
                let mut inc: Vec<_> = self.in_arrows[i]
                    .iter()
                    .map(|&a| (ArrowRef::Core(a), Vertex::Core(self.arrows[a].source)))
                    .collect();
                inc.extend(self.rays_at(i, RayDirection::Incoming).map(|r| {
                    (
                        ArrowRef::Ray { ray: r, index: 1 },
                        Vertex::Ray { ray: r, index: 1 },
                    )
                }));
                inc
            }
            Vertex::Ray { ray, index } => match self.rays[ray].direction {
                RayDirection::Incoming => vec![(
                    ArrowRef::Ray {
                        ray,
                        index: index + 1,
                    },
                    Vertex::Ray {
                        ray,
                        index: index + 1,
                    },
                )],
                RayDirection::Outgoing => vec![(
                    ArrowRef::Ray { ray, index },
                    self.ray_position(ray, index - 1),
                )],
            },
        }
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        match v {
            Vertex::Core(i) => {
                self.out_arrows[i].len() + self.rays_at(i, RayDirection::Outgoing).count()
            }
            Vertex::Ray { .. } => 1,
        }
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        match v {
            Vertex::Core(i) => {
                self.in_arrows[i].len() + self.rays_at(i, RayDirection::Incoming).count()
            }
            Vertex::Ray { .. } => 1,
        }
    }

    /// The quiver with every arrow reversed and every ray flipped.
    ///
    /// Vertex and arrow indices are preserved, so a `Vertex` of `self` names
    /// the same vertex of the opposite quiver.
    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow {
                id: a.id.clone(),
                source: a.target,
                target: a.source,
            })
            .collect();
        let rays = self
            .rays
            .iter()
            .map(|r| Ray {
                anchor: r.anchor,
                direction: r.direction.flip(),
            })
            .collect();
        Quiver::from_parts(self.name.clone(), self.vertices.clone(), arrows, rays)
    }

    /// Component label of every core vertex in the underlying undirected
    /// graph, numbered in order of first appearance, plus the component count.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.vertices.len();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let neighbours = self.out_arrows[v]
                    .iter()
                    .map(|&a| self.arrows[a].target)
                    .chain(self.in_arrows[v].iter().map(|&a| self.arrows[a].source));
                for w in neighbours {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 == 1
    }

    /// Splits the quiver along its underlying undirected graph. Rays stay
    /// with their anchor; every component keeps the quiver's name.
    pub fn connected_components(&self) -> Vec<Quiver> {
        let (label, count) = self.component_labels();
        (0..count)
            .map(|c| {
                let keep: Vec<usize> = (0..self.vertices.len()).filter(|&v| label[v] == c).collect();
                let mut remap = vec![usize::MAX; self.vertices.len()];
                for (new, &old) in keep.iter().enumerate() {
                    remap[old] = new;
                }
                let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
                let arrows = self
                    .arrows
                    .iter()
                    .filter(|a| label[a.source] == c)
                    .map(|a| Arrow {
                        id: a.id.clone(),
                        source: remap[a.source],
                        target: remap[a.target],
                    })
                    .collect();
                let rays = self
                    .rays
                    .iter()
                    .filter(|r| label[r.anchor] == c)
                    .map(|r| Ray {
                        anchor: remap[r.anchor],
                        direction: r.direction,
                    })
                    .collect();
                Quiver::from_parts(self.name.clone(), vertices, arrows, rays)
            })
            .collect()
    }

    /// Replaces every ray by its first `depth` vertices, giving a finite
    /// quiver. Truncated ray vertices are named as in [`Quiver::vertex_name`].
    pub fn truncate_rays(&self, depth: u64) -> RayTruncation {
        let mut vertices = self.vertices.clone();
        let mut arrows = self.arrows.clone();
        let mut boundary = Vec::new();
        for (r, ray) in self.rays.iter().enumerate() {
            let mut previous = ray.anchor;
            for k in 1..=depth {
                let id = vertices.len();
                vertices.push(self.vertex_name(Vertex::Ray { ray: r, index: k }));
                let (source, target) = match ray.direction {
                    RayDirection::Outgoing => (previous, id),
                    RayDirection::Incoming => (id, previous),
                };
                arrows.push(Arrow {
                    id: self.arrow_name(ArrowRef::Ray { ray: r, index: k }),
                    source,
                    target,
                });
                previous = id;
            }
            if depth > 0 {
                boundary.push(previous);
            }
        }
        RayTruncation {
            quiver: Quiver::from_parts(self.name.clone(), vertices, arrows, Vec::new()),
            boundary,
        }
    }
}

/// A finite quiver obtained by cutting every ray after a fixed depth.
#[derive(Clone, Debug)]
pub struct RayTruncation {
    pub quiver: Quiver,
    /// Core indices (in `quiver`) of the last kept vertex of each ray.
    pub boundary: Vec<usize>,
}

fn parse_ray_address(name: &str, separator: char) -> Option<(usize, u64)> {
    let rest = name.strip_prefix("ray")?;
    let (ray, index) = rest.split_once(separator)?;
    if ray.is_empty() || !ray.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    Some((ray.parse().ok()?, index.parse().ok()?))
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&dsl::to_dsl(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> Quiver {
        QuiverBuilder::new("chain")
            .vertices(["1", "2", "3"])
            .arrow("a", "1", "2")
            .arrow("b", "2", "3")
            .build()
            .unwrap()
    }

    #[test]
    fn builder_rejects_bad_input() {
        let dup = QuiverBuilder::new("q").vertices(["1", "1"]).build();
        assert_eq!(dup, Err(QuiverError::DuplicateVertex("1".into())));
        let unknown = QuiverBuilder::new("q").vertex("1").arrow("a", "1", "2").build();
        assert_eq!(unknown, Err(QuiverError::UnknownVertex("2".into())));
        let dup_arrow = QuiverBuilder::new("q")
            .vertex("1")
            .arrow("a", "1", "1")
            .arrow("a", "1", "1")
            .build();
        assert_eq!(dup_arrow, Err(QuiverError::DuplicateArrow("a".into())));
        let bad_ray = QuiverBuilder::new("q").vertex("1").ray("2", RayDirection::Outgoing).build();
        assert_eq!(bad_ray, Err(QuiverError::UnknownVertex("2".into())));
        let bad_id = QuiverBuilder::new("q").vertex("a:b").build();
        assert_eq!(bad_id, Err(QuiverError::InvalidIdentifier("a:b".into())));
    }

    #[test]
    fn opposite_reverses_arrows() {
        let q = QuiverBuilder::new("q")
            .vertices(["1", "2"])
            .arrow("a", "1", "2")
            .build()
            .unwrap();
        let op = q.opposite();
        assert_eq!(op.arrows()[0].source, 1);
        assert_eq!(op.arrows()[0].target, 0);
        assert_eq!(op.opposite(), q);
    }

    #[test]
    fn ray_neighbourhoods() {
        let q = QuiverBuilder::new("line")
            .vertex("0")
            .ray("0", RayDirection::Incoming)
            .ray("0", RayDirection::Outgoing)
            .build()
            .unwrap();
        let v0 = Vertex::Core(0);
        assert_eq!(q.successors(v0), vec![(ArrowRef::Ray { ray: 1, index: 1 }, Vertex::Ray { ray: 1, index: 1 })]);
        assert_eq!(q.predecessors(v0), vec![(ArrowRef::Ray { ray: 0, index: 1 }, Vertex::Ray { ray: 0, index: 1 })]);
        let r = Vertex::Ray { ray: 0, index: 3 };
        assert_eq!(q.successors(r)[0].1, Vertex::Ray { ray: 0, index: 2 });
        assert_eq!(q.predecessors(r)[0].1, Vertex::Ray { ray: 0, index: 4 });
        let out = Vertex::Ray { ray: 1, index: 1 };
        assert_eq!(q.predecessors(out)[0].1, v0);
        assert_eq!(q.resolve_vertex("ray1.7"), Ok(Vertex::Ray { ray: 1, index: 7 }));
        assert!(q.resolve_vertex("ray2.1").is_err());
        assert!(q.resolve_vertex("ray1.0").is_err());
        assert_eq!(
            q.arrow_endpoints(ArrowRef::Ray { ray: 0, index: 1 }),
            Some((Vertex::Ray { ray: 0, index: 1 }, v0))
        );
        assert_eq!(q.resolve_arrow("ray1~2"), Ok(ArrowRef::Ray { ray: 1, index: 2 }));
    }

    #[test]
    fn components() {
        assert_eq!(chain().connected_components(), vec![chain()]);
        let two = QuiverBuilder::new("two")
            .vertices(["1", "2", "3", "4"])
            .arrow("a", "1", "2")
            .arrow("b", "3", "4")
            .ray("3", RayDirection::Outgoing)
            .build()
            .unwrap();
        let comps = two.connected_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1].vertex_names(), ["3", "4"]);
        assert_eq!(comps[1].rays().len(), 1);
        assert_eq!(comps[1].rays()[0].anchor, 0);
    }

    #[test]
    fn truncation_is_finite() {
        let q = QuiverBuilder::new("r")
            .vertex("v")
            .ray("v", RayDirection::Outgoing)
            .build()
            .unwrap();
        let t = q.truncate_rays(3);
        assert!(t.quiver.is_finite());
        assert_eq!(t.quiver.vertex_names(), ["v", "ray0.1", "ray0.2", "ray0.3"]);
        assert_eq!(t.boundary, vec![3]);
        assert_eq!(t.quiver.arrows()[2].source, 2);
    }
}
