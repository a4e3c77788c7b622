use super::{ArrowRef, Quiver, QuiverError, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Forward,
    Inverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub arrow: ArrowRef,
    pub orientation: Orientation,
}

impl Letter {
    pub fn forward(arrow: ArrowRef) -> Self {
        Letter {
            arrow,
            orientation: Orientation::Forward,
        }
    }

    pub fn inverse(arrow: ArrowRef) -> Self {
        Letter {
            arrow,
            orientation: Orientation::Inverse,
        }
    }

    fn degree(&self) -> i64 {
        match self.orientation {
            Orientation::Forward => 1,
            Orientation::Inverse => -1,
        }
    }
}

/// A walk, stored in travel order: `letters[0]` is traversed first.
///
/// The start vertex is kept explicitly so that the trivial walk at a vertex
/// is representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Walk {
    pub start: Vertex,
    pub letters: Vec<Letter>,
}

impl Walk {
    pub fn trivial(at: Vertex) -> Self {
        Walk {
            start: at,
            letters: Vec::new(),
        }
    }

    pub fn new(start: Vertex, letters: Vec<Letter>) -> Self {
        Walk { start, letters }
    }

    /// Endpoint of the walk, or the first letter that fails to compose.
    pub fn end(&self, q: &Quiver) -> Result<Vertex, QuiverError> {
        if !q.contains(self.start) {
            return Err(QuiverError::UnknownVertex(format!("{:?}", self.start)));
        }
        let mut at = self.start;
        for (position, letter) in self.letters.iter().enumerate() {
            let (s, t) = q
                .arrow_endpoints(letter.arrow)
                .ok_or(QuiverError::MalformedWalk { position })?;
            let (from, to) = match letter.orientation {
                Orientation::Forward => (s, t),
                Orientation::Inverse => (t, s),
            };
            if from != at {
                return Err(QuiverError::MalformedWalk { position });
            }
            at = to;
        }
        Ok(at)
    }

    pub fn is_closed(&self, q: &Quiver) -> Result<bool, QuiverError> {
        Ok(self.end(q)? == self.start)
    }

    /// `self` followed by `other`, which must start where `self` ends.
    pub fn then(&self, other: &Walk, q: &Quiver) -> Result<Walk, QuiverError> {
        if self.end(q)? != other.start {
            return Err(QuiverError::MalformedWalk {
                position: self.letters.len(),
            });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(Walk {
            start: self.start,
            letters,
        })
    }

    /// The same walk traversed backwards.
    pub fn reversed(&self, q: &Quiver) -> Result<Walk, QuiverError> {
        let end = self.end(q)?;
        let letters = self
            .letters
            .iter()
            .rev()
            .map(|l| Letter {
                arrow: l.arrow,
                orientation: match l.orientation {
                    Orientation::Forward => Orientation::Inverse,
                    Orientation::Inverse => Orientation::Forward,
                },
            })
            .collect();
        Ok(Walk {
            start: end,
            letters,
        })
    }
}

/// Degree of a walk: `+1` per forward arrow, `-1` per inverse arrow.
///
/// The degree is additive under concatenation, so a path of length `n` has
/// degree `n` and the trivial walk has degree 0.
pub fn walk_degree(q: &Quiver, w: &Walk) -> Result<i64, QuiverError> {
    w.end(q)?;
    Ok(w.letters.iter().map(Letter::degree).sum())
}
