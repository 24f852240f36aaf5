//! Name literals: `{}` and `{(N, v), ...}`, where `N` is a literal or a bound
//! identifier and `v` an element label. Binding files hold `let x = ...` lines.

use std::collections::HashMap;

use super::{NameError, NameId, NameStore};
use crate::lattice::HeytingAlgebra;

struct Cursor<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Cursor<'s> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), NameError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<&'s str, NameError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected an identifier".into()));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    fn error(&self, message: String) -> NameError {
        NameError::Syntax {
            pos: self.pos,
            message,
        }
    }
}

fn parse_term(
    cur: &mut Cursor<'_>,
    store: &mut NameStore,
    algebra: &HeytingAlgebra,
    bindings: &HashMap<String, NameId>,
) -> Result<NameId, NameError> {
    if cur.peek() != Some('{') {
        let id = cur.ident()?;
        return bindings
            .get(id)
            .copied()
            .ok_or_else(|| NameError::UnknownBinding(id.to_string()));
    }
    cur.expect('{')?;
    let mut entries = Vec::new();
    if cur.peek() == Some('}') {
        cur.expect('}')?;
        return Ok(store.empty(algebra));
    }
    loop {
        cur.expect('(')?;
        let key = parse_term(cur, store, algebra, bindings)?;
        cur.expect(',')?;
        let label = cur.ident()?;
        let value = algebra
            .element(label)
            .ok_or_else(|| NameError::UnknownLabel(label.to_string()))?;
        cur.expect(')')?;
        entries.push((key, value));
        match cur.peek() {
            Some(',') => cur.expect(',')?,
            Some('}') => {
                cur.expect('}')?;
                break;
            }
            _ => return Err(cur.error("expected `,` or `}`".into())),
        }
    }
    store.make_name(algebra, entries)
}

/// Parses one name literal over `algebra`, interning every sub-name.
pub fn parse_name(
    store: &mut NameStore,
    algebra: &HeytingAlgebra,
    text: &str,
    bindings: &HashMap<String, NameId>,
) -> Result<NameId, NameError> {
    let mut cur = Cursor { src: text, pos: 0 };
    let id = parse_term(&mut cur, store, algebra, bindings)?;
    if cur.peek().is_some() {
        return Err(cur.error("trailing input".into()));
    }
    Ok(id)
}

/// Parses `let x = <literal>` lines. Later bindings may refer to earlier ones.
/// Blank lines and `#` comments are skipped; other lines are errors.
///
/// Bindings come back in file order.
pub fn parse_bindings(
    store: &mut NameStore,
    algebra: &HeytingAlgebra,
    text: &str,
) -> Result<Vec<(String, NameId)>, NameError> {
    let mut env: HashMap<String, NameId> = HashMap::new();
    let mut out = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let line = raw.split('#').next().unwrap_or("").trim();
        let line_offset = offset;
        offset += raw.len();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: &str| NameError::Syntax {
            pos: line_offset,
            message: message.to_string(),
        };
        let rest = line
            .strip_prefix("let ")
            .ok_or_else(|| syntax("expected `let <name> = <literal>`"))?;
        let (name, literal) = rest.split_once('=').ok_or_else(|| syntax("expected `=`"))?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(syntax("bad binding name"));
        }
        let id = parse_name(store, algebra, literal, &env).map_err(|e| match e {
            NameError::Syntax { pos, message } => NameError::Syntax {
                pos: pos + line_offset,
                message,
            },
            other => other,
        })?;
        env.insert(name.to_string(), id);
        out.push((name.to_string(), id));
    }
    Ok(out)
}
