//! Reader for apx-style framework files:
//!
//! ```text
//! # two mutual attackers
//! arg(a).
//! arg(b).
//! att(a,b).
//! att(b,a).
//! ```
//!
//! Arguments get ids `1..` in declaration order.

use std::collections::HashMap;

use thiserror::Error;

use super::{ArgumentId, ArgumentationFramework};

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ApxError {
    pub line: usize,
    pub message: String,
}

/// A parsed framework together with the source names of its arguments.
#[derive(Debug, Clone)]
pub struct NamedFramework {
    pub framework: ArgumentationFramework,
    names: Vec<String>,
}

impl NamedFramework {
    pub fn name(&self, id: ArgumentId) -> &str {
        &self.names[id.0 as usize - 1]
    }
}

pub fn parse_apx(text: &str) -> Result<NamedFramework, ApxError> {
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, ArgumentId> = HashMap::new();
    let mut attacks = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |message: String| ApxError { line, message };
        let stmt = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if stmt.is_empty() {
            continue;
        }
        let body = stmt
            .strip_suffix('.')
            .ok_or_else(|| err(format!("missing terminating '.' in `{stmt}`")))?
            .trim_end();
        let (head, args) = body
            .split_once('(')
            .and_then(|(h, rest)| rest.strip_suffix(')').map(|a| (h.trim(), a)))
            .ok_or_else(|| err(format!("malformed statement `{stmt}`")))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        if parts.iter().any(|p| p.is_empty()) {
            return Err(err(format!("empty argument name in `{stmt}`")));
        }
        match (head, parts.as_slice()) {
            ("arg", [name]) => {
                if !index.contains_key(*name) {
                    names.push(name.to_string());
                    index.insert(name.to_string(), ArgumentId(names.len() as u32));
                }
            }
            ("att", [a, b]) => {
                let lookup = |s: &str| {
                    index
                        .get(s)
                        .copied()
                        .ok_or_else(|| err(format!("undeclared argument `{s}`")))
                };
                attacks.push((lookup(a)?, lookup(b)?));
            }
            ("arg", _) | ("att", _) => {
                return Err(err(format!("wrong number of arguments in `{stmt}`")))
            }
            _ => return Err(err(format!("unknown statement `{head}`"))),
        }
    }

    let framework = ArgumentationFramework::new(index.values().copied(), attacks)
        .expect("attacks only reference declared arguments");
    Ok(NamedFramework { framework, names })
}
