//! Text format for quivers.
//!
//! ```text
//! quiver Ex1            # header, exactly once, first statement
//! vertices 1 2 3
//! arrow a: 3 -> 1
//! ray from 3            # 3 -> r1 -> r2 -> ...
//! ray into 1            # ... -> r2 -> r1 -> 1
//! ```

use std::collections::HashSet;
use std::fmt::Write;

use thiserror::Error;

use super::{Quiver, QuiverBuilder, RayDirection};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token> {
    let line = line.split('#').next().unwrap_or_default();
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == ':' {
            tokens.push(Token {
                tok: Tok::Colon,
                column: i + 1,
            });
            i += 1;
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            tokens.push(Token {
                tok: Tok::Arrow,
                column: i + 1,
            });
            i += 2;
        } else {
            let start = i;
            while i < chars.len()
                && !chars[i].is_whitespace()
                && chars[i] != ':'
                && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
            {
                i += 1;
            }
            tokens.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                column: start + 1,
            });
        }
    }
    tokens
}

struct Located {
    name: String,
    line: usize,
    column: usize,
}

fn error(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_quiver(text: &str) -> Result<Quiver, ParseError> {
    let mut name: Option<String> = None;
    let mut vertices: Vec<Located> = Vec::new();
    let mut arrows: Vec<(Located, Located, Located)> = Vec::new();
    let mut rays: Vec<(Located, RayDirection)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let tokens = tokenize(raw);
        let Some(first) = tokens.first() else {
            continue;
        };
        let end_column = raw.split('#').next().unwrap_or_default().chars().count() + 1;
        let ident = |i: usize, what: &str| -> Result<Located, ParseError> {
            match tokens.get(i) {
                Some(Token {
                    tok: Tok::Ident(s),
                    column,
                }) => Ok(Located {
                    name: s.clone(),
                    line,
                    column: *column,
                }),
                Some(t) => Err(error(line, t.column, format!("expected {what}"))),
                None => Err(error(line, end_column, format!("expected {what}"))),
            }
        };
        let expect = |i: usize, want: Tok, what: &str| -> Result<(), ParseError> {
            match tokens.get(i) {
                Some(t) if t.tok == want => Ok(()),
                Some(t) => Err(error(line, t.column, format!("expected {what}"))),
                None => Err(error(line, end_column, format!("expected {what}"))),
            }
        };
        let no_trailing = |n: usize| -> Result<(), ParseError> {
            match tokens.get(n) {
                Some(t) => Err(error(line, t.column, "unexpected trailing input")),
                None => Ok(()),
            }
        };
        let keyword = match &first.tok {
            Tok::Ident(k) => k.as_str(),
            _ => return Err(error(line, first.column, "expected a statement keyword")),
        };
        if name.is_none() && keyword != "quiver" {
            return Err(error(line, first.column, "expected `quiver NAME` header"));
        }
        match keyword {
            "quiver" => {
                if name.is_some() {
                    return Err(error(line, first.column, "duplicate `quiver` header"));
                }
                name = Some(ident(1, "quiver name")?.name);
                no_trailing(2)?;
            }
            "vertices" => {
                if tokens.len() == 1 {
                    return Err(error(line, end_column, "expected at least one vertex"));
                }
                for i in 1..tokens.len() {
                    vertices.push(ident(i, "vertex name")?);
                }
            }
            "arrow" => {
                let id = ident(1, "arrow name")?;
                expect(2, Tok::Colon, "`:`")?;
                let source = ident(3, "source vertex")?;
                expect(4, Tok::Arrow, "`->`")?;
                let target = ident(5, "target vertex")?;
                no_trailing(6)?;
                arrows.push((id, source, target));
            }
            "ray" => {
                let dir = ident(1, "`from` or `into`")?;
                let direction = match dir.name.as_str() {
                    "from" => RayDirection::Outgoing,
                    "into" => RayDirection::Incoming,
                    _ => return Err(error(line, dir.column, "expected `from` or `into`")),
                };
                let anchor = ident(2, "anchor vertex")?;
                no_trailing(3)?;
                rays.push((anchor, direction));
            }
            other => {
                return Err(error(
                    line,
                    first.column,
                    format!("unknown statement `{other}`"),
                ))
            }
        }
    }

    let Some(name) = name else {
        return Err(error(1, 1, "missing `quiver NAME` header"));
    };

    let mut seen: HashSet<&str> = HashSet::new();
    for v in &vertices {
        if !seen.insert(&v.name) {
            return Err(error(v.line, v.column, format!("duplicate vertex `{}`", v.name)));
        }
    }
    let declared = |v: &Located| -> Result<(), ParseError> {
        if seen.contains(v.name.as_str()) {
            Ok(())
        } else {
            Err(error(v.line, v.column, format!("undeclared vertex `{}`", v.name)))
        }
    };
    let mut arrow_ids: HashSet<&str> = HashSet::new();
    for (id, s, t) in &arrows {
        if !arrow_ids.insert(&id.name) {
            return Err(error(id.line, id.column, format!("duplicate arrow `{}`", id.name)));
        }
        declared(s)?;
        declared(t)?;
    }
    for (anchor, _) in &rays {
        declared(anchor)?;
    }

    let mut builder = QuiverBuilder::new(name).vertices(vertices.iter().map(|v| v.name.clone()));
    for (id, s, t) in &arrows {
        builder = builder.arrow(id.name.clone(), s.name.clone(), t.name.clone());
    }
    for (anchor, direction) in &rays {
        builder = builder.ray(anchor.name.clone(), *direction);
    }
    builder
        .build()
        .map_err(|e| error(1, 1, e.to_string()))
}

pub(crate) fn to_dsl(q: &Quiver) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "quiver {}", q.name());
    if !q.is_empty() {
        let _ = writeln!(out, "vertices {}", q.vertex_names().join(" "));
    }
    for a in q.arrows() {
        let _ = writeln!(
            out,
            "arrow {}: {} -> {}",
            a.id,
            q.vertex_names()[a.source],
            q.vertex_names()[a.target]
        );
    }
    for r in q.rays() {
        let dir = match r.direction {
            RayDirection::Outgoing => "from",
            RayDirection::Incoming => "into",
        };
        let _ = writeln!(out, "ray {dir} {}", q.vertex_names()[r.anchor]);
    }
    out
}
