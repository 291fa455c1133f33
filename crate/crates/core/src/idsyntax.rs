//! Lexing for the bracketed identifier syntax `Name[g1;g2]`, where each group
//! is a comma-separated list of `int` or `key=int` items.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Item {
    pub key: Option<String>,
    pub value: i64,
    pub pos: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct RawId {
    pub name: String,
    pub groups: Vec<Vec<Item>>,
    /// Byte offset of the opening bracket.
    pub open: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        pos,
        msg: msg.into(),
    }
}

fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'.' || b == b'\'' || b == b'_'
}

fn is_key_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'\''
}

pub(crate) fn lex(s: &str) -> Result<RawId> {
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() && is_name_byte(bytes[i]) {
        i += 1;
    }
    if i == 0 {
        return Err(err(0, "expected a family name"));
    }
    let name = s[..i].to_string();
    if bytes.get(i) != Some(&b'[') {
        return Err(err(i, "expected '['"));
    }
    let open = i;
    i += 1;
    let mut groups = vec![Vec::new()];
    loop {
        let start = i;
        let mut key = None;
        while i < bytes.len() && is_key_byte(bytes[i]) && !bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i > start {
            while i < bytes.len() && is_key_byte(bytes[i]) {
                i += 1;
            }
            if bytes.get(i) != Some(&b'=') {
                return Err(err(i, "expected '=' after key"));
            }
            key = Some(s[start..i].to_string());
            i += 1;
        }
        let num_start = i;
        if bytes.get(i) == Some(&b'-') {
            i += 1;
        }
        let digits = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == digits {
            return Err(err(i, "expected an integer"));
        }
        // reject leading zeros so that printing is the inverse of parsing
        if i - digits > 1 && bytes[digits] == b'0' {
            return Err(err(digits, "leading zero"));
        }
        if &s[num_start..i] == "-0" {
            return Err(err(num_start, "negative zero"));
        }
        let value: i64 = s[num_start..i]
            .parse()
            .map_err(|_| err(num_start, "integer out of range"))?;
        groups.last_mut().expect("nonempty").push(Item {
            key,
            value,
            pos: start,
        });
        match bytes.get(i) {
            Some(b',') => i += 1,
            Some(b';') => {
                groups.push(Vec::new());
                i += 1;
            }
            Some(b']') => {
                i += 1;
                break;
            }
            Some(_) => return Err(err(i, "expected ',', ';' or ']'")),
            None => return Err(err(i, "unterminated identifier")),
        }
    }
    if i != bytes.len() {
        return Err(err(i, "trailing characters"));
    }
    Ok(RawId { name, groups, open })
}

impl RawId {
    /// Checks the group layout against `shape`: one entry per group, each a
    /// list of keys where `""` means a positional item.
    pub fn expect_shape(&self, shape: &[&[&str]]) -> Result<Vec<i64>> {
        if self.groups.len() != shape.len() {
            return Err(err(
                self.open,
                format!("{} expects {} ';'-separated group(s)", self.name, shape.len()),
            ));
        }
        let mut out = Vec::new();
        for (group, keys) in self.groups.iter().zip(shape) {
            if group.len() != keys.len() {
                let pos = group.first().map_or(self.open, |it| it.pos);
                return Err(err(pos, format!("expected {} item(s) in group", keys.len())));
            }
            for (item, &key) in group.iter().zip(keys.iter()) {
                let ok = match &item.key {
                    None => key.is_empty(),
                    Some(k) => k == key,
                };
                if !ok {
                    let want = if key.is_empty() {
                        "a positional integer".to_string()
                    } else {
                        format!("'{key}='")
                    };
                    return Err(err(item.pos, format!("expected {want}")));
                }
                out.push(item.value);
            }
        }
        Ok(out)
    }

    pub fn item_pos(&self, k: usize) -> usize {
        self.groups
            .iter()
            .flatten()
            .nth(k)
            .map_or(self.open, |it| it.pos)
    }
}

/// A nonnegative vertex index from a parsed integer.
pub(crate) fn vertex(raw: &RawId, k: usize, v: i64) -> Result<usize> {
    usize::try_from(v).map_err(|_| err(raw.item_pos(k), "vertex index must be nonnegative"))
}
