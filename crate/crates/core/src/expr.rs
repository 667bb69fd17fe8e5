//! Element expressions such as `a*b^-1*a` or `(a*d)^4` over the state names
//! of one automaton. `1` and `id` denote the identity.

use std::sync::Arc;

use thiserror::Error;

use crate::automaton::Automaton;
use crate::element::{Element, GroupError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("unexpected {found} at offset {offset} in element expression")]
    Unexpected { offset: usize, found: String },
    #[error(transparent)]
    Group(#[from] GroupError),
}

pub fn parse_element(automaton: &Arc<Automaton>, text: &str) -> Result<Element, ExprError> {
    let mut parser = Parser { aut: automaton, src: text.as_bytes(), pos: 0 };
    let e = parser.product()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.unexpected());
    }
    Ok(e)
}

struct Parser<'a> {
    aut: &'a Arc<Automaton>,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self) -> ExprError {
        let found = match self.src.get(self.pos) {
            Some(_) => format!("{:?}", String::from_utf8_lossy(&self.src[self.pos..])),
            None => "end of input".to_string(),
        };
        ExprError::Unexpected { offset: self.pos, found }
    }

    fn product(&mut self) -> Result<Element, ExprError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.compose(&self.power()?)?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Element, ExprError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let exponent = std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse::<i64>().ok())
            .ok_or(ExprError::Unexpected { offset: start, found: "a malformed exponent".into() })?;
        Ok(base.power(exponent))
    }

    fn atom(&mut self) -> Result<Element, ExprError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.product()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected());
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = self.pos;
                while self.src.get(self.pos).is_some_and(|&c| c.is_ascii_alphanumeric() || c == b'_' || c == b'\'') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.aut.state_index(name) {
                    Some(s) => Ok(Element::state(self.aut, s)),
                    None if name == "1" || name == "id" => Ok(Element::identity(self.aut)),
                    None => Err(GroupError::UnknownState(name.to_string()).into()),
                }
            }
            _ => Err(self.unexpected()),
        }
    }
}
