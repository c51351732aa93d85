use std::collections::BTreeSet;
use std::fmt;

use crate::syntax::{Atom, Head, Program};

use super::models::{compile, MaskRule};
use super::{
    constants_of, ground, herbrand_universe, reduct, satisfies, submasks, AtomIndex, EngineLimits,
    GroundProgram, GroundRule, HtPair, Interpretation, SemanticsError,
};

/// A propositional formula of the logic of here-and-there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula<A = Atom> {
    Bot,
    Atom(A),
    And(Vec<Formula<A>>),
    Implies(Box<Formula<A>>, Box<Formula<A>>),
}

impl<A> Formula<A> {
    fn map<B>(&self, f: &impl Fn(&A) -> B) -> Formula<B> {
        match self {
            Formula::Bot => Formula::Bot,
            Formula::Atom(a) => Formula::Atom(f(a)),
            Formula::And(fs) => Formula::And(fs.iter().map(|g| g.map(f)).collect()),
            Formula::Implies(l, r) => Formula::Implies(Box::new(l.map(f)), Box::new(r.map(f))),
        }
    }
}

impl<A: fmt::Display> fmt::Display for Formula<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Bot => f.write_str("⊥"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::And(fs) if fs.is_empty() => f.write_str("⊤"),
            Formula::And(fs) => {
                f.write_str("(")?;
                for (i, g) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ∧ ")?;
                    }
                    write!(f, "{g}")?;
                }
                f.write_str(")")
            }
            Formula::Implies(l, r) => write!(f, "({l} → {r})"),
        }
    }
}

/// `p1 ∧ … ∧ pm ∧ (pm+1 → ⊥) ∧ … ∧ (pn → ⊥) → p0`, with `⊥` as the head of
/// a constraint.
pub fn translate(rule: &GroundRule) -> Formula {
    let body = rule
        .positive
        .iter()
        .map(|a| Formula::Atom(a.clone()))
        .chain(rule.negative.iter().map(|a| {
            Formula::Implies(Box::new(Formula::Atom(a.clone())), Box::new(Formula::Bot))
        }))
        .collect();
    let head = match &rule.head {
        Head::Atom(a) => Formula::Atom(a.clone()),
        Head::Falsum => Formula::Bot,
    };
    Formula::Implies(Box::new(Formula::And(body)), Box::new(head))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum World {
    Here,
    There,
}

impl World {
    fn successors(self) -> &'static [World] {
        match self {
            World::Here => &[World::Here, World::There],
            World::There => &[World::There],
        }
    }
}

/// Kripke evaluation over the two worlds `H ≤ T`: an implication holds at a
/// world iff it holds, read as material implication, at every world from
/// there on.
fn holds<A>(f: &Formula<A>, w: World, true_at: &impl Fn(World, &A) -> bool) -> bool {
    match f {
        Formula::Bot => false,
        Formula::Atom(a) => true_at(w, a),
        Formula::And(fs) => fs.iter().all(|g| holds(g, w, true_at)),
        Formula::Implies(l, r) => w
            .successors()
            .iter()
            .all(|&v| !holds(l, v, true_at) || holds(r, v, true_at)),
    }
}

/// Evaluates the here-and-there translation of every rule at world `H`.
pub fn ht_satisfies(pair: &HtPair, program: &GroundProgram) -> bool {
    let true_at = |w: World, a: &Atom| match w {
        World::Here => pair.here().contains(a),
        World::There => pair.there().contains(a),
    };
    program
        .rules()
        .iter()
        .all(|r| holds(&translate(r), World::Here, &true_at))
}

/// `T ⊨ Π` and `H ⊨ Π^T`.
pub fn ht_satisfies_by_reduct(pair: &HtPair, program: &GroundProgram) -> bool {
    satisfies(pair.there(), program) && satisfies(pair.here(), &reduct(program, pair.there()))
}

/// How [`ht_models`] decides membership of a pair.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum HtMethod {
    /// `T` is a classical model and `H` a model of the reduct `Π^T`.
    #[default]
    Reduct,
    /// Direct evaluation of the formula translation.
    Direct,
}

fn compile_formulas(gp: &GroundProgram, index: &AtomIndex) -> Vec<Formula<u64>> {
    gp.rules()
        .iter()
        .map(|r| translate(r).map(&|a: &Atom| index.bit(a).unwrap_or(0)))
        .collect()
}

fn formulas_hold(formulas: &[Formula<u64>], here: u64, there: u64) -> bool {
    let true_at = |w: World, bit: &u64| {
        let world = if w == World::Here { here } else { there };
        world & bit != 0
    };
    formulas.iter().all(|f| holds(f, World::Here, &true_at))
}

/// All pairs `<H, T>` with `H ⊆ T ⊆ base` that are here-and-there models of
/// the program, grounded over its constants and those of `base`.
///
/// Pairs come grouped by there-world; the order is deterministic but not
/// sorted.
pub fn ht_models(
    program: &Program,
    base: &BTreeSet<Atom>,
    limits: &EngineLimits,
    method: HtMethod,
) -> Result<Vec<HtPair>, SemanticsError> {
    limits.check("here-and-there search", base.len(), limits.max_ht_atoms)?;
    let universe = herbrand_universe(program, &constants_of(base));
    let gp = ground(program, &universe)?;
    let index = AtomIndex::new(base);
    let mut pairs = Vec::new();
    match method {
        HtMethod::Reduct => {
            let rules = compile(&gp, &index);
            for there in index.all_masks() {
                if !rules.iter().all(|r| r.satisfied_by(there)) {
                    continue;
                }
                let t = index.interpretation(there);
                let reduct_rules: Vec<MaskRule> = compile(&reduct(&gp, &t), &index);
                for here in submasks(there) {
                    if reduct_rules.iter().all(|r| r.satisfied_by(here)) {
                        pairs.push(HtPair::new(index.interpretation(here), t.clone())?);
                    }
                }
            }
        }
        HtMethod::Direct => {
            let formulas = compile_formulas(&gp, &index);
            for there in index.all_masks() {
                let t = index.interpretation(there);
                for here in submasks(there) {
                    if formulas_hold(&formulas, here, there) {
                        pairs.push(HtPair::new(index.interpretation(here), t.clone())?);
                    }
                }
            }
        }
    }
    Ok(pairs)
}

/// Interpretations `T` such that `<T, T>` is a here-and-there model and no
/// `<H, T>` with `H ⊂ T` is.
///
/// Evaluates the formula translation directly, independently of reducts.
/// Atoms that head no ground rule are false in every equilibrium model and
/// are left out of the search.
pub fn equilibrium_models(
    program: &Program,
    limits: &EngineLimits,
) -> Result<Vec<Interpretation>, SemanticsError> {
    let universe = herbrand_universe(program, &BTreeSet::new());
    let gp = ground(program, &universe)?;
    let base = gp.head_atoms();
    limits.check("equilibrium model search", base.len(), limits.max_ht_atoms)?;
    let index = AtomIndex::new(&base);
    let formulas = compile_formulas(&gp, &index);
    let mut models: Vec<Interpretation> = index
        .all_masks()
        .filter(|&t| formulas_hold(&formulas, t, t))
        .filter(|&t| submasks(t).skip(1).all(|h| !formulas_hold(&formulas, h, t)))
        .map(|t| index.interpretation(t))
        .collect();
    models.sort();
    Ok(models)
}
