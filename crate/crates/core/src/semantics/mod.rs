//! Model theory for core programs at desk scale: grounding over the active
//! domain, classical models, reducts, stable models, here-and-there models and
//! equilibrium models.
//!
//! Everything is exhaustive. Enumeration over `n` atoms is bounded by
//! [`EngineLimits`]; exceeding a bound is an error rather than a slow run.

mod ground;
mod ht;
mod models;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::Atom;

pub use ground::{
    constants_of, ground, ground_with_extra, herbrand_universe, signature_base, GroundProgram,
    GroundRule,
};
pub use ht::{
    equilibrium_models, ht_models, ht_satisfies, ht_satisfies_by_reduct, translate, Formula,
    HtMethod,
};
pub use models::{classical_models, least_model, reduct, satisfies, stable_models, stable_models_of_ground};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("statement outside the normal-rule fragment is not supported here: `{0}`")]
    ExtendedStatement(String),
    #[error("unsafe variable `{variable}` in rule `{rule}`")]
    UnsafeRule { rule: String, variable: String },
    #[error("{what} over {atoms} atoms exceeds the engine limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        atoms: usize,
        limit: usize,
    },
    #[error("here world is not a subset of there world")]
    InvalidPair,
}

/// Bounds on exhaustive enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EngineLimits {
    /// Atoms for classical model search, and undetermined atoms for stable
    /// model search.
    pub max_atoms: usize,
    /// Atoms for here-and-there search (`3^n` pairs).
    pub max_ht_atoms: usize,
}

impl Default for EngineLimits {
    fn default() -> Self {
        EngineLimits {
            max_atoms: 20,
            max_ht_atoms: 15,
        }
    }
}

impl EngineLimits {
    pub(crate) fn check(&self, what: &'static str, atoms: usize, limit: usize) -> Result<(), SemanticsError> {
        // masks are u64
        let limit = limit.min(63);
        if atoms > limit {
            Err(SemanticsError::LimitExceeded { what, atoms, limit })
        } else {
            Ok(())
        }
    }
}

/// A set of ground atoms; atoms not in the set are false.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Interpretation(BTreeSet<Atom>);

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.0.contains(atom)
    }

    pub fn insert(&mut self, atom: Atom) -> bool {
        self.0.insert(atom)
    }

    pub fn remove(&mut self, atom: &Atom) -> bool {
        self.0.remove(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn atoms(&self) -> &BTreeSet<Atom> {
        &self.0
    }

    pub fn into_atoms(self) -> BTreeSet<Atom> {
        self.0
    }

    pub fn union(&self, other: &Interpretation) -> Interpretation {
        Interpretation(self.0.union(&other.0).cloned().collect())
    }

    pub fn intersection(&self, other: &Interpretation) -> Interpretation {
        Interpretation(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &Interpretation) -> Interpretation {
        Interpretation(self.0.difference(&other.0).cloned().collect())
    }

    /// Atoms rendered as text and sorted lexicographically.
    pub fn sorted_strings(&self) -> Vec<String> {
        let mut atoms: Vec<String> = self.0.iter().map(Atom::to_string).collect();
        atoms.sort();
        atoms
    }
}

impl From<BTreeSet<Atom>> for Interpretation {
    fn from(atoms: BTreeSet<Atom>) -> Self {
        Interpretation(atoms)
    }
}

impl FromIterator<Atom> for Interpretation {
    fn from_iter<I: IntoIterator<Item = Atom>>(iter: I) -> Self {
        Interpretation(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Interpretation {
    type Item = &'a Atom;
    type IntoIter = std::collections::btree_set::Iter<'a, Atom>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Space-separated atoms in lexicographic order.
impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.sorted_strings().join(" "))
    }
}

/// A here-and-there interpretation `<here, there>` with `here ⊆ there`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HtPair {
    here: Interpretation,
    there: Interpretation,
}

impl HtPair {
    pub fn new(here: Interpretation, there: Interpretation) -> Result<Self, SemanticsError> {
        if here.is_subset(&there) {
            Ok(HtPair { here, there })
        } else {
            Err(SemanticsError::InvalidPair)
        }
    }

    /// The pair `<t, t>`.
    pub fn total(t: Interpretation) -> Self {
        HtPair {
            here: t.clone(),
            there: t,
        }
    }

    pub fn here(&self) -> &Interpretation {
        &self.here
    }

    pub fn there(&self) -> &Interpretation {
        &self.there
    }
}

impl fmt::Display for HtPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{{{}}}, {{{}}}>", self.here, self.there)
    }
}

/// Writes models one per line, or `UNSATISFIABLE` when there are none.
pub fn format_models(models: &[Interpretation]) -> String {
    if models.is_empty() {
        return "UNSATISFIABLE\n".to_owned();
    }
    let mut lines: Vec<String> = models.iter().map(Interpretation::to_string).collect();
    lines.sort();
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

/// Bitmask view of a set of atoms, used by the enumerators.
pub(crate) struct AtomIndex {
    atoms: Vec<Atom>,
}

impl AtomIndex {
    pub fn new(base: &BTreeSet<Atom>) -> Self {
        AtomIndex {
            atoms: base.iter().cloned().collect(),
        }
    }

    pub fn bit(&self, atom: &Atom) -> Option<u64> {
        self.atoms.binary_search(atom).ok().map(|i| 1u64 << i)
    }

    pub fn mask_of<'a>(&self, atoms: impl IntoIterator<Item = &'a Atom>) -> u64 {
        atoms.into_iter().filter_map(|a| self.bit(a)).fold(0, |m, b| m | b)
    }

    pub fn interpretation(&self, mask: u64) -> Interpretation {
        self.atoms
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1u64 << i) != 0)
            .map(|(_, a)| a.clone())
            .collect()
    }

    /// Every mask over the indexed atoms.
    pub fn all_masks(&self) -> std::ops::Range<u64> {
        0..(1u64 << self.atoms.len())
    }
}

/// Submasks of `mask`, including 0 and `mask` itself.
pub(crate) fn submasks(mask: u64) -> impl Iterator<Item = u64> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let current = next?;
        next = if current == 0 {
            None
        } else {
            Some((current - 1) & mask)
        };
        Some(current)
    })
}
