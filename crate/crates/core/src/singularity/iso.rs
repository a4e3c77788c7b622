//! Deciding `x ≅ y` for the congruence generated by the expansion rule.
//!
//! Expanding different terms commutes, so `x ≅ y` iff both sides become equal
//! after pushing every term to a common shift layer `L` and then stepping
//! both layer by layer. The procedure tracks the signed difference of the two
//! sides at the current layer:
//!
//! * terms on outgoing rays are keyed by `index - layer`, which stepping never
//!   changes, and the core only feeds fresh keys into them, so a nonzero ray
//!   entry after the last injected layer is permanent;
//! * the rest is a vector over core vertices and incoming-ray positions,
//!   stepped by a fixed integer matrix `M` of size `N`. The kernels of `M^k`
//!   stabilize by `k = N`, so a difference still nonzero `N` steps after the
//!   last injection never vanishes.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use super::alive::normalize_with;
use super::{reduce_to_generators, sg_generators, GeneratorReport, Reduction, StalkSum};
use crate::quiver::{Quiver, RayDirection, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Ternary {
    True,
    False,
    Unknown,
}

impl From<bool> for Ternary {
    fn from(b: bool) -> Self {
        if b {
            Ternary::True
        } else {
            Ternary::False
        }
    }
}

/// `4 · |core vertices|`, at least 4.
pub fn default_depth(q: &Quiver) -> u64 {
    4 * q.vertex_count().max(1) as u64
}

pub fn is_isomorphic(x: &StalkSum, y: &StalkSum, q: &Quiver, depth: u64) -> Ternary {
    let report = sg_generators(q);
    let nx = normalize_with(x, q, report.alive());
    let ny = normalize_with(y, q, report.alive());
    if nx == ny {
        return Ternary::True;
    }
    if nx.is_empty() || ny.is_empty() {
        return Ternary::False;
    }
    if let (Reduction::Reduced(a), Reduction::Reduced(b)) = (
        reduce_to_generators(&nx, q, &report, depth),
        reduce_to_generators(&ny, q, &report, depth),
    ) {
        if a == b {
            return Ternary::True;
        }
        if has_unique_forms(&a, &report) && has_unique_forms(&b, &report) {
            return Ternary::False;
        }
    }
    difference_search(&nx, &ny, q, depth)
}

/// Reduced forms on unbranched cycles and rays are unique up to equality.
fn has_unique_forms(x: &StalkSum, report: &GeneratorReport) -> bool {
    x.terms().all(|(v, _, _)| {
        report
            .components
            .iter()
            .any(|c| c.representative == v && (c.period.is_some() || c.ray.is_some()))
    })
}

struct Difference<'q> {
    q: &'q Quiver,
    core: Vec<BigInt>,
    /// `incoming[r][k - 1]` for incoming ray `r`.
    incoming: Vec<Vec<BigInt>>,
    outgoing: BTreeMap<(usize, i64), BigInt>,
}

impl Difference<'_> {
    fn inject(&mut self, v: Vertex, layer: i64, amount: BigInt) -> Option<()> {
        match v {
            Vertex::Core(i) => self.core[i] += amount,
            Vertex::Ray { ray, index } => match self.q.rays()[ray].direction {
                RayDirection::Incoming => self.incoming[ray][usize::try_from(index).ok()? - 1] += amount,
                RayDirection::Outgoing => {
                    let key = i64::try_from(index).ok()?.checked_sub(layer)?;
                    let slot = self.outgoing.entry((ray, key)).or_default();
                    *slot += amount;
                    if slot.is_zero() {
                        self.outgoing.remove(&(ray, key));
                    }
                }
            },
        }
        Some(())
    }

    fn finite_part_is_zero(&self) -> bool {
        self.core.iter().all(Zero::is_zero) && self.incoming.iter().flatten().all(Zero::is_zero)
    }

    /// Moves from `layer` to `layer + 1`.
    fn step(&mut self, layer: i64) -> Option<()> {
        let q = self.q;
        let mut core = vec![BigInt::zero(); self.core.len()];
        for a in q.arrows() {
            if !self.core[a.source].is_zero() {
                core[a.target] += &self.core[a.source];
            }
        }
        let emitted_key = layer.checked_neg()?;
        for (r, ray) in q.rays().iter().enumerate() {
            match ray.direction {
                RayDirection::Outgoing => {
                    let amount = self.core[ray.anchor].clone();
                    if !amount.is_zero() {
                        let slot = self.outgoing.entry((r, emitted_key)).or_default();
                        *slot += amount;
                        if slot.is_zero() {
                            self.outgoing.remove(&(r, emitted_key));
                        }
                    }
                }
                RayDirection::Incoming => {
                    let slots = &mut self.incoming[r];
                    if let Some(first) = slots.first() {
                        core[ray.anchor] += first;
                        slots.rotate_left(1);
                        if let Some(last) = slots.last_mut() {
                            *last = BigInt::zero();
                        }
                    }
                }
            }
        }
        self.core = core;
        Some(())
    }
}

fn difference_search(x: &StalkSum, y: &StalkSum, q: &Quiver, depth: u64) -> Ternary {
    let mut layers: BTreeMap<i64, Vec<(Vertex, BigInt)>> = BTreeMap::new();
    let mut incoming_len = vec![0usize; q.rays().len()];
    for (sign, side) in [(1, x), (-1, y)] {
        for (v, n, m) in side.terms() {
            if let Vertex::Ray { ray, index } = v {
                if q.rays()[ray].direction == RayDirection::Incoming {
                    let Ok(k) = usize::try_from(index) else {
                        return Ternary::Unknown;
                    };
                    incoming_len[ray] = incoming_len[ray].max(k);
                }
            }
            layers.entry(n).or_default().push((v, BigInt::from(m) * sign));
        }
    }
    let (Some(&first), Some(&last)) = (layers.keys().next(), layers.keys().next_back()) else {
        return Ternary::True;
    };
    let dimension = (q.vertex_count() + incoming_len.iter().sum::<usize>()) as u64;
    let mut state = Difference {
        q,
        core: vec![BigInt::zero(); q.vertex_count()],
        incoming: incoming_len.iter().map(|&k| vec![BigInt::zero(); k]).collect(),
        outgoing: BTreeMap::new(),
    };
    let mut layer = first;
    let mut steps = 0u64;
    loop {
        for (v, amount) in layers.remove(&layer).unwrap_or_default() {
            if state.inject(v, layer, amount).is_none() {
                return Ternary::Unknown;
            }
        }
        if layer >= last {
            if state.outgoing.values().any(|d| !d.is_zero()) {
                return Ternary::False;
            }
            if state.finite_part_is_zero() {
                return Ternary::True;
            }
            if layer.abs_diff(last) >= dimension {
                return Ternary::False;
            }
        }
        if steps >= depth {
            return Ternary::Unknown;
        }
        if state.step(layer).is_none() {
            return Ternary::Unknown;
        }
        let Some(next) = layer.checked_add(1) else {
            return Ternary::Unknown;
        };
        layer = next;
        steps += 1;
    }
}
