use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::syntax::{Atom, Head, Literal, Program, Rule, Statement, Term, TokenKind};

use super::{Interpretation, SemanticsError};

/// A variable-free rule with comparison built-ins already evaluated away.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundRule {
    pub head: Head,
    pub positive: Vec<Atom>,
    pub negative: Vec<Atom>,
}

impl GroundRule {
    pub fn head_atom(&self) -> Option<&Atom> {
        match &self.head {
            Head::Atom(a) => Some(a),
            Head::Falsum => None,
        }
    }

    pub fn body_holds(&self, i: &Interpretation) -> bool {
        self.positive.iter().all(|a| i.contains(a)) && !self.negative.iter().any(|a| i.contains(a))
    }

    pub fn satisfied_by(&self, i: &Interpretation) -> bool {
        !self.body_holds(i) || self.head_atom().is_some_and(|h| i.contains(h))
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head_atom()
            .into_iter()
            .chain(self.positive.iter())
            .chain(self.negative.iter())
    }
}

impl fmt::Display for GroundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rule = Rule {
            head: self.head.clone(),
            body: self
                .positive
                .iter()
                .cloned()
                .map(Literal::Positive)
                .chain(self.negative.iter().cloned().map(Literal::Negative))
                .collect(),
        };
        write!(f, "{rule}")
    }
}

/// A set of ground rules, kept sorted and free of duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundProgram {
    rules: Vec<GroundRule>,
}

impl GroundProgram {
    pub fn new(rules: impl IntoIterator<Item = GroundRule>) -> Self {
        let set: BTreeSet<GroundRule> = rules.into_iter().collect();
        GroundProgram {
            rules: set.into_iter().collect(),
        }
    }

    pub fn rules(&self) -> &[GroundRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.rules.iter().flat_map(GroundRule::atoms).cloned().collect()
    }

    pub fn head_atoms(&self) -> BTreeSet<Atom> {
        self.rules
            .iter()
            .filter_map(GroundRule::head_atom)
            .cloned()
            .collect()
    }

    pub fn is_positive(&self) -> bool {
        self.rules.iter().all(|r| r.negative.is_empty())
    }

    pub fn union(&self, other: &GroundProgram) -> GroundProgram {
        GroundProgram::new(self.rules.iter().chain(other.rules.iter()).cloned())
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

fn collect_constants(terms: &[Term], out: &mut BTreeSet<Term>) {
    out.extend(terms.iter().filter(|t| t.is_ground()).cloned());
}

/// Constants occurring in the program plus `extra`.
pub fn herbrand_universe(program: &Program, extra: &BTreeSet<Term>) -> BTreeSet<Term> {
    let mut universe = extra.clone();
    for statement in program {
        match statement {
            Statement::Rule(rule) => {
                for atom in rule.atoms() {
                    collect_constants(&atom.terms, &mut universe);
                }
                for c in rule.comparisons() {
                    collect_constants(&[c.left.clone(), c.right.clone()], &mut universe);
                }
            }
            Statement::Extended(ext) => {
                for (i, tok) in ext.tokens.iter().enumerate() {
                    match tok {
                        TokenKind::Integer(n) => {
                            universe.insert(Term::Integer(*n));
                        }
                        TokenKind::Str(s) => {
                            universe.insert(Term::Str(s.clone()));
                        }
                        TokenKind::Ident(s)
                            if s != "not"
                                && !ext.atom_occurrences.contains(&i)
                                && ext.tokens.get(i + 1) != Some(&TokenKind::LParen) =>
                        {
                            universe.insert(Term::Symbol(s.clone()));
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    universe
}

/// The constants of a set of ground atoms.
pub fn constants_of<'a>(atoms: impl IntoIterator<Item = &'a Atom>) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    for a in atoms {
        collect_constants(&a.terms, &mut out);
    }
    out
}

fn substitute(term: &Term, binding: &BTreeMap<&str, &Term>) -> Term {
    match term {
        Term::Variable(v) => binding
            .get(v.as_str())
            .map(|t| (*t).clone())
            .unwrap_or_else(|| term.clone()),
        other => other.clone(),
    }
}

fn substitute_atom(atom: &Atom, binding: &BTreeMap<&str, &Term>) -> Atom {
    Atom {
        predicate: atom.predicate.clone(),
        terms: atom.terms.iter().map(|t| substitute(t, binding)).collect(),
    }
}

fn ground_rule(rule: &Rule, universe: &[&Term], out: &mut Vec<GroundRule>) {
    let vars: Vec<&str> = rule.variables().into_iter().collect();
    let mut binding: BTreeMap<&str, &Term> = BTreeMap::new();
    let mut index = vec![0usize; vars.len()];
    if !vars.is_empty() && universe.is_empty() {
        return;
    }
    loop {
        for (v, &k) in vars.iter().zip(&index) {
            binding.insert(v, universe[k]);
        }
        let builtins_hold = rule
            .comparisons()
            .all(|c| c.op.eval(&substitute(&c.left, &binding), &substitute(&c.right, &binding)));
        if builtins_hold {
            out.push(GroundRule {
                head: match &rule.head {
                    Head::Atom(a) => Head::Atom(substitute_atom(a, &binding)),
                    Head::Falsum => Head::Falsum,
                },
                positive: rule.positive_body().map(|a| substitute_atom(a, &binding)).collect(),
                negative: rule.negative_body().map(|a| substitute_atom(a, &binding)).collect(),
            });
        }
        // advance the odometer
        let mut pos = 0;
        loop {
            if pos == index.len() {
                return;
            }
            index[pos] += 1;
            if index[pos] < universe.len() {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

/// Replaces variables by constants of `universe` in all possible ways,
/// dropping instances whose comparison built-ins are false.
pub fn ground(program: &Program, universe: &BTreeSet<Term>) -> Result<GroundProgram, SemanticsError> {
    let universe: Vec<&Term> = universe.iter().collect();
    let mut rules = Vec::new();
    for statement in program {
        match statement {
            Statement::Rule(rule) => {
                if let Some(v) = rule.unsafe_variables().into_iter().next() {
                    return Err(SemanticsError::UnsafeRule {
                        rule: rule.to_string(),
                        variable: v.to_owned(),
                    });
                }
                ground_rule(rule, &universe, &mut rules);
            }
            Statement::Extended(ext) => {
                return Err(SemanticsError::ExtendedStatement(ext.to_string()));
            }
        }
    }
    Ok(GroundProgram::new(rules))
}

/// Grounds over the program's own Herbrand universe plus `extra` constants.
pub fn ground_with_extra(
    program: &Program,
    extra: &BTreeSet<Term>,
) -> Result<GroundProgram, SemanticsError> {
    ground(program, &herbrand_universe(program, extra))
}

/// Every ground atom over the predicate signatures of `program` and the
/// constants of `universe`.
pub fn signature_base(program: &Program, universe: &BTreeSet<Term>) -> BTreeSet<Atom> {
    let mut signatures: BTreeSet<(String, usize)> = BTreeSet::new();
    for statement in program {
        if let Statement::Rule(rule) = statement {
            for a in rule.atoms() {
                signatures.insert((a.predicate.clone(), a.arity()));
            }
        }
    }
    let constants: Vec<&Term> = universe.iter().collect();
    let mut base = BTreeSet::new();
    for (predicate, arity) in signatures {
        if arity > 0 && constants.is_empty() {
            continue;
        }
        let mut index = vec![0usize; arity];
        loop {
            base.insert(Atom::new(
                predicate.clone(),
                index.iter().map(|&k| constants[k].clone()).collect(),
            ));
            let mut pos = 0;
            loop {
                if pos == arity {
                    break;
                }
                index[pos] += 1;
                if index[pos] < constants.len() {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
            if pos == arity {
                break;
            }
        }
    }
    base
}
