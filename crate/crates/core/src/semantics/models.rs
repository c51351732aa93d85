use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::{Atom, Program};

use super::{ground_with_extra, AtomIndex, EngineLimits, GroundProgram, GroundRule, Interpretation, SemanticsError};

/// Classical satisfaction: every rule whose body holds has a true head, and
/// no constraint body holds.
pub fn satisfies(i: &Interpretation, gp: &GroundProgram) -> bool {
    gp.rules().iter().all(|r| r.satisfied_by(i))
}

/// `{ head <- positive body | body holds in i }`.
pub fn reduct(gp: &GroundProgram, i: &Interpretation) -> GroundProgram {
    GroundProgram::new(gp.rules().iter().filter(|r| r.body_holds(i)).map(|r| GroundRule {
        head: r.head.clone(),
        positive: r.positive.clone(),
        negative: Vec::new(),
    }))
}

/// Least model of the definite rules of `gp`: rules with negative literals
/// and constraints are ignored.
pub fn least_model(gp: &GroundProgram) -> Interpretation {
    let mut model = Interpretation::new();
    let mut changed = true;
    while changed {
        changed = false;
        for r in gp.rules().iter().filter(|r| r.negative.is_empty()) {
            if let Some(h) = r.head_atom() {
                if !model.contains(h) && r.positive.iter().all(|a| model.contains(a)) {
                    model.insert(h.clone());
                    changed = true;
                }
            }
        }
    }
    model
}

/// A ground rule over a bit-indexed base. Atoms outside the base are false.
#[derive(Clone, Copy)]
pub(crate) struct MaskRule {
    pub head: u64,
    pub positive: u64,
    pub negative: u64,
}

impl MaskRule {
    pub fn satisfied_by(&self, m: u64) -> bool {
        m & self.positive != self.positive || m & self.negative != 0 || m & self.head != 0
    }
}

pub(crate) fn compile(gp: &GroundProgram, index: &AtomIndex) -> Vec<MaskRule> {
    gp.rules()
        .iter()
        .filter_map(|r| {
            let mut positive = 0;
            for a in &r.positive {
                positive |= index.bit(a)?;
            }
            Some(MaskRule {
                head: r.head_atom().and_then(|h| index.bit(h)).unwrap_or(0),
                positive,
                negative: index.mask_of(&r.negative),
            })
        })
        .collect()
}

/// All subsets of `base` that satisfy `gp`, atoms outside `base` being false.
pub fn classical_models(
    gp: &GroundProgram,
    base: &BTreeSet<Atom>,
    limits: &EngineLimits,
) -> Result<Vec<Interpretation>, SemanticsError> {
    limits.check("classical model search", base.len(), limits.max_atoms)?;
    let index = AtomIndex::new(base);
    let rules = compile(gp, &index);
    Ok(index
        .all_masks()
        .filter(|&m| rules.iter().all(|r| r.satisfied_by(m)))
        .map(|m| index.interpretation(m))
        .collect())
}

/// Stable models of a core program, grounded over its own constants.
pub fn stable_models(
    program: &Program,
    limits: &EngineLimits,
) -> Result<Vec<Interpretation>, SemanticsError> {
    let gp = ground_with_extra(program, &BTreeSet::new())?;
    stable_models_of_ground(&gp, limits)
}

struct Interned {
    atoms: Vec<Atom>,
    /// (head, positive, negative); head `None` for constraints.
    rules: Vec<(Option<usize>, Vec<usize>, Vec<usize>)>,
}

impl Interned {
    fn new(gp: &GroundProgram) -> Self {
        fn intern(a: &Atom, ids: &mut BTreeMap<Atom, usize>, atoms: &mut Vec<Atom>) -> usize {
            *ids.entry(a.clone()).or_insert_with(|| {
                atoms.push(a.clone());
                atoms.len() - 1
            })
        }
        let mut ids = BTreeMap::new();
        let mut atoms = Vec::new();
        let rules = gp
            .rules()
            .iter()
            .map(|r| {
                let head = r.head_atom().map(|a| intern(a, &mut ids, &mut atoms));
                let pos = r.positive.iter().map(|a| intern(a, &mut ids, &mut atoms)).collect();
                let neg = r.negative.iter().map(|a| intern(a, &mut ids, &mut atoms)).collect();
                (head, pos, neg)
            })
            .collect();
        Interned { atoms, rules }
    }

    /// Least model of the reduct w.r.t. the set `assumed` (negative literals
    /// are true iff their atom is not assumed). Constraints are ignored.
    fn gamma(&self, assumed: &[bool]) -> Vec<bool> {
        let mut truth = vec![false; self.atoms.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for (head, pos, neg) in &self.rules {
                let Some(h) = *head else { continue };
                if truth[h] {
                    continue;
                }
                if neg.iter().all(|&a| !assumed[a]) && pos.iter().all(|&a| truth[a]) {
                    truth[h] = true;
                    changed = true;
                }
            }
        }
        truth
    }

    fn violates_constraint(&self, truth: &[bool]) -> bool {
        self.rules.iter().any(|(head, pos, neg)| {
            head.is_none() && pos.iter().all(|&a| truth[a]) && neg.iter().all(|&a| !truth[a])
        })
    }
}

/// Stable models of a ground program.
///
/// The well-founded bounds `lower ⊆ M ⊆ upper` hold for every stable model
/// `M`; only atoms under negation lying between the bounds are guessed. Each
/// guess `G` yields the candidate `M = Γ(lower ∪ G)`, which is stable iff it
/// agrees with `G` on the guessed atoms and violates no constraint.
pub fn stable_models_of_ground(
    gp: &GroundProgram,
    limits: &EngineLimits,
) -> Result<Vec<Interpretation>, SemanticsError> {
    let interned = Interned::new(gp);
    let n = interned.atoms.len();

    let mut lower = vec![false; n];
    let mut upper = interned.gamma(&lower);
    loop {
        let next_lower = interned.gamma(&upper);
        let next_upper = interned.gamma(&next_lower);
        if next_lower == lower && next_upper == upper {
            break;
        }
        lower = next_lower;
        upper = next_upper;
    }

    let negated: BTreeSet<usize> = interned
        .rules
        .iter()
        .flat_map(|(_, _, neg)| neg.iter().copied())
        .collect();
    let open: Vec<usize> = negated
        .into_iter()
        .filter(|&a| upper[a] && !lower[a])
        .collect();
    limits.check("stable model search", open.len(), limits.max_atoms)?;

    let mut models = Vec::new();
    for guess in 0..(1u64 << open.len()) {
        let mut assumed = lower.clone();
        for (k, &a) in open.iter().enumerate() {
            assumed[a] = guess & (1 << k) != 0;
        }
        let candidate = interned.gamma(&assumed);
        let agrees = open
            .iter()
            .enumerate()
            .all(|(k, &a)| candidate[a] == (guess & (1 << k) != 0));
        if agrees && !interned.violates_constraint(&candidate) {
            models.push(
                candidate
                    .iter()
                    .enumerate()
                    .filter(|(_, t)| **t)
                    .map(|(i, _)| interned.atoms[i].clone())
                    .collect(),
            );
        }
    }
    models.sort();
    Ok(models)
}
