//! Group parameter files.
//!
//! Plain text, one `key = value` per line. Keys are `backend` (`toy` or
//! `large`) and the decimal integers `p`, `q`, `g`. Blank lines and lines
//! starting with `#` are ignored.

use std::fs;
use std::path::Path;

use num_bigint::BigUint;
use pedersen_core::{Backend, Group, GroupDescription, GroupError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParamsError {
    #[error("cannot read parameter file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("invalid group: {0}")]
    Invalid(#[from] GroupError),
}

fn syntax(line: usize, reason: impl Into<String>) -> ParamsError {
    ParamsError::Syntax { line, reason: reason.into() }
}

pub fn parse_params(text: &str) -> Result<GroupDescription, ParamsError> {
    let (mut p, mut q, mut g, mut backend) = (None, None, None, None);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| syntax(line, "expected `key = value`"))?;
        let (key, value) = (key.trim(), value.trim());
        let number =
            || value.parse::<BigUint>().map_err(|_| syntax(line, format!("`{key}` must be a decimal integer")));
        let slot_taken = match key {
            "p" => p.replace(number()?).is_some(),
            "q" => q.replace(number()?).is_some(),
            "g" => g.replace(number()?).is_some(),
            "backend" => {
                let b = value.parse::<Backend>().map_err(|_| syntax(line, format!("unknown backend `{value}`")))?;
                backend.replace(b).is_some()
            }
            other => return Err(syntax(line, format!("unknown key `{other}`"))),
        };
        if slot_taken {
            return Err(syntax(line, format!("duplicate key `{key}`")));
        }
    }
    Ok(GroupDescription {
        modulus: p.ok_or(ParamsError::MissingKey("p"))?,
        order: q.ok_or(ParamsError::MissingKey("q"))?,
        generator: g.ok_or(ParamsError::MissingKey("g"))?,
        backend: backend.ok_or(ParamsError::MissingKey("backend"))?,
    })
}

pub fn render_params(desc: &GroupDescription) -> String {
    format!("backend = {}\np = {}\nq = {}\ng = {}\n", desc.backend, desc.modulus, desc.order, desc.generator)
}

/// Parses and validates.
pub fn group_from_str(text: &str) -> Result<Group, ParamsError> {
    Ok(Group::new(parse_params(text)?)?)
}

pub fn load_group(path: &Path) -> Result<Group, ParamsError> {
    group_from_str(&fs::read_to_string(path)?)
}
