use std::collections::BTreeMap;
use std::fmt;

use crate::syntax::{is_local, ExtendedStatement, Program, Statement, TokenKind};

use super::TemplateError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenamingKind {
    /// Identity on local predicates: only global names are keys.
    Global,
    /// Identity on global predicates; injective on local names.
    Local,
}

/// A finite predicate-name map, the identity outside its domain. Arities are
/// not part of the key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Renaming {
    map: BTreeMap<String, String>,
    kind: RenamingKind,
}

impl Renaming {
    pub fn identity() -> Self {
        Renaming {
            map: BTreeMap::new(),
            kind: RenamingKind::Global,
        }
    }

    /// Builds a global renaming from `(old, new)` pairs. Later pairs win when
    /// an old name repeats. Distinct old names may share a new name, which
    /// merges the predicates.
    pub fn global<I, S, T>(pairs: I) -> Result<Self, TemplateError>
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut map = BTreeMap::new();
        for (old, new) in pairs {
            let old = old.into();
            if is_local(&old) {
                return Err(TemplateError::LocalInGlobalRenaming(old));
            }
            map.insert(old, new.into());
        }
        Ok(Renaming {
            map,
            kind: RenamingKind::Global,
        })
    }

    pub fn local(map: BTreeMap<String, String>) -> Result<Self, TemplateError> {
        let mut seen = std::collections::BTreeSet::new();
        for (old, new) in &map {
            if !is_local(old) || !is_local(new) || !seen.insert(new) {
                return Err(TemplateError::InvalidLocalRenaming(old.clone(), new.clone()));
            }
        }
        Ok(Renaming {
            map,
            kind: RenamingKind::Local,
        })
    }

    pub fn kind(&self) -> RenamingKind {
        self.kind
    }

    pub fn apply<'a>(&'a self, name: &'a str) -> &'a str {
        self.map.get(name).map_or(name, String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.map.get(name).map(String::as_str)
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (k, v)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} -> {v}")?;
        }
        f.write_str("]")
    }
}

/// Renames every predicate in atom position, in core rules and extended
/// statements alike.
pub fn rename(program: &Program, renaming: &Renaming) -> Program {
    if renaming.is_empty() {
        return program.clone();
    }
    program
        .iter()
        .map(|statement| match statement {
            Statement::Rule(rule) => {
                let mut rule = rule.clone();
                for atom in rule.atoms_mut() {
                    if let Some(new) = renaming.get(&atom.predicate) {
                        atom.predicate = new.to_owned();
                    }
                }
                Statement::Rule(rule)
            }
            Statement::Extended(ext) => {
                let mut tokens = ext.tokens.clone();
                for &i in &ext.atom_occurrences {
                    if let TokenKind::Ident(name) = &mut tokens[i] {
                        if let Some(new) = renaming.get(name) {
                            *name = new.to_owned();
                        }
                    }
                }
                Statement::Extended(ExtendedStatement {
                    tokens,
                    atom_occurrences: ext.atom_occurrences.clone(),
                })
            }
        })
        .collect()
}
