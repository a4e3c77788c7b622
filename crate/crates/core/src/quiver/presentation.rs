//! Unvalidated quiver descriptions and the local-finiteness check applied to
//! them before they become [`Quiver`] values.
//!
//! A description may declare an arrow family with an unbounded number of
//! parallel copies (`"multiplicity": "unbounded"`); such a presentation is
//! not locally finite and cannot be turned into a quiver.

use std::collections::HashMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Quiver, QuiverBuilder, QuiverError, RayDirection};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degree {
    Finite(u64),
    Unbounded,
}

impl Degree {
    fn add(self, other: Degree) -> Degree {
        match (self, other) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::Unbounded,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Degree::Finite(_))
    }
}

impl Default for Degree {
    fn default() -> Self {
        Degree::Finite(1)
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(n) => s.serialize_u64(*n),
            Degree::Unbounded => s.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(n) => Ok(Degree::Finite(n)),
            Raw::Word(w) if w == "unbounded" => Ok(Degree::Unbounded),
            Raw::Word(w) => Err(serde::de::Error::custom(format!(
                "expected a count or \"unbounded\", got {w:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowDecl {
    pub id: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub multiplicity: Degree,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayDecl {
    pub anchor: String,
    pub direction: RayDirection,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverDescription {
    pub name: String,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowDecl>,
    #[serde(default)]
    pub rays: Vec<RayDecl>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexDegrees {
    pub vertex: String,
    pub out_degree: Degree,
    pub in_degree: Degree,
    pub locally_finite: bool,
}

/// Per-vertex local finiteness. Ray vertices always have one incoming and
/// one outgoing arrow and are accounted for through their anchors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalFinitenessReport {
    pub locally_finite: bool,
    pub vertices: Vec<VertexDegrees>,
}

pub fn is_locally_bounded_presentation(desc: &QuiverDescription) -> LocalFinitenessReport {
    let mut degrees: HashMap<&str, (Degree, Degree)> = desc
        .vertices
        .iter()
        .map(|v| (v.as_str(), (Degree::Finite(0), Degree::Finite(0))))
        .collect();
    for a in &desc.arrows {
        if let Some(d) = degrees.get_mut(a.source.as_str()) {
            d.0 = d.0.add(a.multiplicity);
        }
        if let Some(d) = degrees.get_mut(a.target.as_str()) {
            d.1 = d.1.add(a.multiplicity);
        }
    }
    for r in &desc.rays {
        if let Some(d) = degrees.get_mut(r.anchor.as_str()) {
            match r.direction {
                RayDirection::Outgoing => d.0 = d.0.add(Degree::Finite(1)),
                RayDirection::Incoming => d.1 = d.1.add(Degree::Finite(1)),
            }
        }
    }
    let vertices: Vec<VertexDegrees> = desc
        .vertices
        .iter()
        .map(|v| {
            let (out_degree, in_degree) = degrees[v.as_str()];
            VertexDegrees {
                vertex: v.clone(),
                out_degree,
                in_degree,
                locally_finite: out_degree.is_finite() && in_degree.is_finite(),
            }
        })
        .collect();
    LocalFinitenessReport {
        locally_finite: vertices.iter().all(|v| v.locally_finite),
        vertices,
    }
}

impl QuiverDescription {
    /// Expands arrow families (copies of `a` are named `a`, `a.2`, `a.3`, ...)
    /// and validates the result.
    pub fn into_quiver(self) -> Result<Quiver, QuiverError> {
        let report = is_locally_bounded_presentation(&self);
        if let Some(bad) = report.vertices.iter().find(|v| !v.locally_finite) {
            return Err(QuiverError::NotLocallyFinite(bad.vertex.clone()));
        }
        let mut b = QuiverBuilder::new(self.name).vertices(self.vertices);
        for a in self.arrows {
            let Degree::Finite(n) = a.multiplicity else {
                unreachable!("rejected above");
            };
            for copy in 1..=n {
                let id = if copy == 1 {
                    a.id.clone()
                } else {
                    format!("{}.{copy}", a.id)
                };
                b = b.arrow(id, a.source.clone(), a.target.clone());
            }
        }
        for r in self.rays {
            b = b.ray(r.anchor, r.direction);
        }
        b.build()
    }
}

impl Quiver {
    pub fn description(&self) -> QuiverDescription {
        let names = self.vertex_names();
        QuiverDescription {
            name: self.name().to_string(),
            vertices: names.to_vec(),
            arrows: self
                .arrows()
                .iter()
                .map(|a| ArrowDecl {
                    id: a.id.clone(),
                    source: names[a.source].clone(),
                    target: names[a.target].clone(),
                    multiplicity: Degree::Finite(1),
                })
                .collect(),
            rays: self
                .rays()
                .iter()
                .map(|r| RayDecl {
                    anchor: names[r.anchor].clone(),
                    direction: r.direction,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_quivers_pass() {
        let q = QuiverBuilder::new("q")
            .vertices(["1", "2"])
            .arrow("a", "1", "2")
            .arrow("b", "1", "2")
            .ray("2", RayDirection::Outgoing)
            .build()
            .unwrap();
        let report = is_locally_bounded_presentation(&q.description());
        assert!(report.locally_finite);
        assert_eq!(report.vertices[0].out_degree, Degree::Finite(2));
        assert_eq!(report.vertices[1].out_degree, Degree::Finite(1));
        assert_eq!(report.vertices[1].in_degree, Degree::Finite(2));
        assert_eq!(q.description().into_quiver().unwrap(), q);
    }

    #[test]
    fn unbounded_family_fails() {
        let desc: QuiverDescription = serde_json::from_str(
            r#"{"name":"bad","vertices":["x","y"],
                "arrows":[{"id":"a","source":"x","target":"y","multiplicity":"unbounded"}]}"#,
        )
        .unwrap();
        let report = is_locally_bounded_presentation(&desc);
        assert!(!report.locally_finite);
        assert_eq!(report.vertices[0].out_degree, Degree::Unbounded);
        assert!(!report.vertices[0].locally_finite);
        assert_eq!(
            desc.into_quiver(),
            Err(QuiverError::NotLocallyFinite("x".into()))
        );
    }

    #[test]
    fn finite_families_expand() {
        let desc: QuiverDescription = serde_json::from_str(
            r#"{"name":"k3","vertices":["x","y"],
                "arrows":[{"id":"a","source":"x","target":"y","multiplicity":3}]}"#,
        )
        .unwrap();
        let q = desc.into_quiver().unwrap();
        let ids: Vec<_> = q.arrows().iter().map(|a| a.id.as_str()).collect();
        assert_eq!(ids, ["a", "a.2", "a.3"]);
    }
}
