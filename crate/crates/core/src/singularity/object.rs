//! Object expressions: `TERM ("+" TERM)*` with `TERM := [INT "*"] "S(" VERTEX ")" "[" INT "]"`,
//! or `0` for the zero object.

use super::{SgError, StalkSum};
use crate::quiver::Quiver;

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error(&self, message: impl Into<String>) -> SgError {
        SgError::Syntax {
            column: self.column(),
            message: message.into(),
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), SgError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    fn integer(&mut self) -> Result<Option<&'a str>, SgError> {
        let rest = self.rest();
        let sign = usize::from(rest.starts_with('-') || rest.starts_with('+'));
        let digits = rest[sign..].chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return Ok(None);
        }
        let lit = &rest[..sign + digits];
        self.pos += lit.len();
        Ok(Some(lit))
    }
}

pub fn parse_object(text: &str, q: &Quiver) -> Result<StalkSum, SgError> {
    let mut c = Cursor { text, pos: 0 };
    c.skip_ws();
    if c.rest().trim_end() == "0" {
        return Ok(StalkSum::zero());
    }
    let mut sum = StalkSum::zero();
    loop {
        c.skip_ws();
        let start = c.pos;
        let mut multiplicity = 1u64;
        if let Some(lit) = c.integer()? {
            c.skip_ws();
            if !c.eat("*") {
                c.pos = start;
                return Err(c.error("expected `S(` or a multiplicity"));
            }
            multiplicity = lit
                .parse()
                .map_err(|_| SgError::Syntax {
                    column: text[..start].chars().count() + 1,
                    message: format!("invalid multiplicity `{lit}`"),
                })?;
            if multiplicity == 0 {
                c.pos = start;
                return Err(c.error("multiplicity must be positive"));
            }
            c.skip_ws();
        }
        c.expect("S(")?;
        let Some(close) = c.rest().find(")[") else {
            return Err(c.error("expected `)[` after the vertex name"));
        };
        let name = c.rest()[..close].trim();
        if name.is_empty() {
            return Err(c.error("expected a vertex name"));
        }
        let vertex = q
            .resolve_vertex(name)
            .map_err(|_| SgError::UnknownVertex(name.to_string()))?;
        c.pos += close + 2;
        c.skip_ws();
        let shift_at = c.pos;
        let shift = match c.integer()? {
            Some(lit) => lit.parse::<i64>().map_err(|_| {
                c.pos = shift_at;
                c.error(format!("invalid shift `{lit}`"))
            })?,
            None => return Err(c.error("expected an integer shift")),
        };
        c.skip_ws();
        c.expect("]")?;
        sum.checked_add(vertex, shift, multiplicity)?;
        c.skip_ws();
        if c.rest().is_empty() {
            return Ok(sum);
        }
        c.expect("+")?;
    }
}
