//! Representation files:
//!
//! ```text
//! dim 1@0 = 2
//! mat a@0 = [[1, 0], [0, 1]]   # rows index the target space
//! ```
//!
//! Unlisted vertices have dimension 0 and unlisted arrows act by zero.

use super::{Matrix, OracleError, Rep};
use crate::quiver::Quiver;

fn parse_error(line: usize, message: impl Into<String>) -> OracleError {
    OracleError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a representation of `q`; arrow matrices have shape
/// `dim(target) × dim(source)`.
pub fn parse_module(text: &str, q: &Quiver) -> Result<Rep, OracleError> {
    let mut dims = vec![0usize; q.vertex_count()];
    let mut dims_seen = vec![false; q.vertex_count()];
    let mut rows: Vec<Option<(usize, Vec<Vec<i64>>)>> = vec![None; q.arrow_count()];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or_default().trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .ok_or_else(|| parse_error(line, "expected `dim NAME = N` or `mat NAME = [[...]]`"))?;
        let (name, value) = rest
            .split_once('=')
            .ok_or_else(|| parse_error(line, "expected `=`"))?;
        let name = name.trim();
        let value = value.trim();
        match keyword {
            "dim" => {
                let v = q
                    .vertex_id(name)
                    .ok_or_else(|| OracleError::OutOfWindow(name.to_string()))?;
                if dims_seen[v] {
                    return Err(parse_error(line, format!("duplicate dimension for `{name}`")));
                }
                dims_seen[v] = true;
                dims[v] = value
                    .parse()
                    .map_err(|_| parse_error(line, format!("invalid dimension `{value}`")))?;
            }
            "mat" => {
                let a = q
                    .arrow_id(name)
                    .ok_or_else(|| OracleError::UnknownArrow(name.to_string()))?;
                if rows[a].is_some() {
                    return Err(parse_error(line, format!("duplicate matrix for `{name}`")));
                }
                let parsed: Vec<Vec<i64>> = serde_json::from_str(value)
                    .map_err(|e| parse_error(line, format!("invalid matrix: {e}")))?;
                rows[a] = Some((line, parsed));
            }
            other => return Err(parse_error(line, format!("unknown statement `{other}`"))),
        }
    }
    let mut mats = Vec::with_capacity(q.arrow_count());
    for (a, arrow) in q.arrows().iter().enumerate() {
        let shape = (dims[arrow.target], dims[arrow.source]);
        let m = match &rows[a] {
            None => Matrix::zeros(shape.0, shape.1),
            Some((_, r)) if r.is_empty() && shape.0 == 0 => Matrix::zeros(0, shape.1),
            Some((line, r)) => {
                let cols = r.first().map_or(0, Vec::len);
                let m = Matrix::from_rows(r, cols)
                    .ok_or_else(|| parse_error(*line, format!("ragged matrix for `{}`", arrow.id)))?;
                if m.shape() != shape {
                    return Err(OracleError::Shape {
                        arrow: arrow.id.clone(),
                        expected: shape,
                        found: m.shape(),
                    });
                }
                m
            }
        };
        mats.push(m);
    }
    Rep::new(q, dims, mats)
}
