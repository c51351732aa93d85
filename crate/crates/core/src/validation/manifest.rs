//! Validation directives embedded in program files.
//!
//! A directive is a line starting with `%! `, so that ordinary ASP tools read
//! it as a comment:
//!
//! ```text
//! %! in_all_models true: b(1), g, d; false: a(1).
//! %! in_all_models_of_reduct model: b(1), d, g, e; true: b(1), g.
//! %! cannot_be_extended true: __fail; false: .
//! ```

use crate::semantics::Interpretation;
use crate::syntax::{parse_ground_atoms, Atom};

use super::ValidationError;

const PREFIX: &str = "%! ";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DirectiveKind {
    InAllModels {
        true_atoms: Interpretation,
        false_atoms: Interpretation,
    },
    InAllModelsOfReduct {
        model: Interpretation,
        true_atoms: Interpretation,
    },
    CannotBeExtended {
        true_atoms: Interpretation,
        false_atoms: Interpretation,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub kind: DirectiveKind,
    /// 1-based line in the source file.
    pub line: usize,
}

impl Directive {
    /// Every atom the directive mentions.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        let (a, b) = match &self.kind {
            DirectiveKind::InAllModels { true_atoms, false_atoms }
            | DirectiveKind::CannotBeExtended { true_atoms, false_atoms } => (true_atoms, false_atoms),
            DirectiveKind::InAllModelsOfReduct { model, true_atoms } => (model, true_atoms),
        };
        a.iter().chain(b.iter())
    }
}

/// Splits at `;` outside quoted strings.
fn split_fields(text: &str) -> Vec<&str> {
    let mut fields = Vec::new();
    let mut start = 0;
    let mut quoted = false;
    let mut escaped = false;
    for (i, c) in text.char_indices() {
        match c {
            _ if escaped => escaped = false,
            '\\' if quoted => escaped = true,
            '"' => quoted = !quoted,
            ';' if !quoted => {
                fields.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    fields.push(&text[start..]);
    fields
}

fn parse_directive(body: &str, line: usize) -> Result<Directive, ValidationError> {
    let malformed = |message: String| ValidationError::MalformedDirective { line, message };
    let body = body.trim();
    let body = body
        .strip_suffix('.')
        .ok_or_else(|| malformed("directive must end with `.`".into()))?;
    let (name, rest) = body
        .split_once(char::is_whitespace)
        .unwrap_or((body, ""));
    let keys: [&str; 2] = match name {
        "in_all_models" | "cannot_be_extended" => ["true", "false"],
        "in_all_models_of_reduct" => ["model", "true"],
        other => return Err(malformed(format!("unknown directive `{other}`"))),
    };
    let fields = split_fields(rest);
    if fields.len() != 2 {
        return Err(malformed(format!(
            "expected `{}: <atoms>; {}: <atoms>`",
            keys[0], keys[1]
        )));
    }
    let mut sets: [Interpretation; 2] = Default::default();
    for (k, (field, key)) in fields.iter().zip(keys).enumerate() {
        let (found, atoms) = field
            .split_once(':')
            .ok_or_else(|| malformed(format!("missing `{key}:`")))?;
        if found.trim() != key {
            return Err(malformed(format!("expected `{key}:`, found `{}:`", found.trim())));
        }
        sets[k] = parse_ground_atoms(atoms)
            .map_err(|e| malformed(format!("in `{key}` atoms: {e}")))?
            .into_iter()
            .collect();
    }
    let [first, second] = sets;
    let kind = match name {
        "in_all_models" => DirectiveKind::InAllModels {
            true_atoms: first,
            false_atoms: second,
        },
        "cannot_be_extended" => DirectiveKind::CannotBeExtended {
            true_atoms: first,
            false_atoms: second,
        },
        _ => DirectiveKind::InAllModelsOfReduct {
            model: first,
            true_atoms: second,
        },
    };
    Ok(Directive { kind, line })
}

/// Collects the `%! ` directives of a source file, in order.
pub fn parse_manifest(source: &str) -> Result<Vec<Directive>, ValidationError> {
    source
        .lines()
        .enumerate()
        .filter_map(|(i, l)| l.trim_start().strip_prefix(PREFIX).map(|d| (i + 1, d)))
        .map(|(line, body)| parse_directive(body, line))
        .collect()
}
