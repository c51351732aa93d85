//! Invariant tests for templates.
//!
//! Three kinds of check are offered, each sound with respect to any program
//! the checked one may later be joined with:
//!
//! * **T1** ([`validate_in_all_models`]): some atoms are true and others
//!   false in every classical model.
//! * **T2** ([`validate_in_all_models_of_the_reduct`]): some atoms are true in
//!   every model of the reduct with respect to a given model.
//! * **T3** ([`validate_cannot_be_extended_to_stable_model`]): no stable model
//!   of any extension contains some atoms while avoiding others, provided
//!   the extension does not mention the local predicates.
//!
//! The checks are not complete; a failure only means the sufficient condition
//! could not be established.

mod manifest;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::semantics::{
    classical_models, constants_of, ground, herbrand_universe, least_model, reduct, satisfies,
    signature_base, EngineLimits, GroundProgram, GroundRule, HtPair, Interpretation,
    SemanticsError,
};
use crate::syntax::{is_local, Atom, Head, Program};
use crate::templates::has_uuid_suffix;

pub use manifest::{parse_manifest, Directive, DirectiveKind};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ValidationError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error("atoms required both true and false: {0}")]
    Overlap(Interpretation),
    #[error("the program has no classical model")]
    Unsatisfiable,
    #[error("{{{0}}} is not a model of the program")]
    NotAModel(Interpretation),
    #[error("atoms not in the model: {0}")]
    NotInModel(Interpretation),
    #[error("line {line}: {message}")]
    MalformedDirective { line: usize, message: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    T1,
    T2,
    T3,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Check::T1 => "T1",
            Check::T2 => "T2",
            Check::T3 => "T3",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

/// Evidence for a failed check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// T1: a classical model with a wrong assignment. T3: a model that may
    /// extend to a stable model.
    Model(Interpretation),
    /// T2: `<H, I>` with `H` a model of the reduct w.r.t. `I` missing some
    /// required atom.
    Pair(HtPair),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Model(m) => write!(f, "{{{m}}}"),
            Witness::Pair(p) => write!(f, "{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub check: Check,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// The program has no classical model, so the check holds trivially.
    pub vacuous: bool,
    pub warnings: Vec<String>,
    /// Source line of the directive, when run from a manifest.
    pub line: Option<usize>,
}

impl ValidationReport {
    fn pass(check: Check) -> Self {
        ValidationReport {
            check,
            verdict: Verdict::Pass,
            witness: None,
            vacuous: false,
            warnings: Vec::new(),
            line: None,
        }
    }

    fn fail(check: Check, witness: Witness) -> Self {
        ValidationReport {
            verdict: Verdict::Fail,
            witness: Some(witness),
            ..Self::pass(check)
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// `PASS T1` or `FAIL T2 (witness ...)`, with the directive line if known.
impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.verdict, self.check)?;
        if let Some(line) = self.line {
            write!(f, " (line {line})")?;
        }
        if self.vacuous {
            f.write_str(" vacuous: no classical model")?;
        }
        if let Some(w) = &self.witness {
            write!(f, " witness: {w}")?;
        }
        Ok(())
    }
}

fn check_disjoint(a: &Interpretation, b: &Interpretation) -> Result<(), ValidationError> {
    let common = a.intersection(b);
    if common.is_empty() {
        Ok(())
    } else {
        Err(ValidationError::Overlap(common))
    }
}

/// Grounds `program` over its constants and those of `query`, and returns the
/// ground program together with the atom base to enumerate over.
///
/// Query atoms belong to the base even when the program never mentions
/// their predicate: such an atom is unconstrained, and an extension may well
/// make it true.
fn ground_for_query(
    program: &Program,
    query: &[&Interpretation],
) -> Result<(GroundProgram, BTreeSet<Atom>), ValidationError> {
    let extra = constants_of(query.iter().flat_map(|i| i.iter()));
    let universe = herbrand_universe(program, &extra);
    let gp = ground(program, &universe)?;
    let mut base = signature_base(program, &universe);
    base.extend(query.iter().flat_map(|i| i.iter()).cloned());
    Ok((gp, base))
}

fn models_for_query(
    program: &Program,
    query: &[&Interpretation],
    limits: &EngineLimits,
) -> Result<Vec<Interpretation>, ValidationError> {
    let (gp, base) = ground_for_query(program, query)?;
    Ok(classical_models(&gp, &base, limits)?)
}

/// Atoms true in every classical model of the program.
///
/// This is also the intersection of the there-worlds of all here-and-there
/// models, and it can only grow when rules are added.
pub fn cautious_atoms(
    program: &Program,
    limits: &EngineLimits,
) -> Result<Interpretation, ValidationError> {
    let models = models_for_query(program, &[], limits)?;
    let mut iter = models.into_iter();
    let first = iter.next().ok_or(ValidationError::Unsatisfiable)?;
    Ok(iter.fold(first, |acc, m| acc.intersection(&m)))
}

/// Atoms true in some classical model of the program.
pub fn brave_atoms(
    program: &Program,
    limits: &EngineLimits,
) -> Result<Interpretation, ValidationError> {
    let models = models_for_query(program, &[], limits)?;
    if models.is_empty() {
        return Err(ValidationError::Unsatisfiable);
    }
    Ok(models.iter().fold(Interpretation::new(), |acc, m| acc.union(m)))
}

fn ground_against_model(
    program: &Program,
    model: &Interpretation,
) -> Result<GroundProgram, ValidationError> {
    let (gp, _) = ground_for_query(program, &[model])?;
    if !satisfies(model, &gp) {
        return Err(ValidationError::NotAModel(model.clone()));
    }
    Ok(gp)
}

/// Atoms true in every subset of `model` that satisfies the reduct of the
/// program w.r.t. `model`, i.e. in every here-world paired with `model`.
///
/// The reduct of a program by one of its models is a definite program, so
/// the intersection is its least model.
pub fn reduct_cautious_atoms(
    program: &Program,
    model: &Interpretation,
) -> Result<Interpretation, ValidationError> {
    let gp = ground_against_model(program, model)?;
    Ok(least_model(&reduct(&gp, model)))
}

/// T1: every atom of `true_atoms` is true and every atom of `false_atoms` is
/// false in all classical models. A pass carries over to every extension of
/// the program. An unsatisfiable program passes vacuously.
pub fn validate_in_all_models(
    program: &Program,
    true_atoms: &Interpretation,
    false_atoms: &Interpretation,
    limits: &EngineLimits,
) -> Result<ValidationReport, ValidationError> {
    check_disjoint(true_atoms, false_atoms)?;
    let models = models_for_query(program, &[true_atoms, false_atoms], limits)?;
    if models.is_empty() {
        return Ok(ValidationReport {
            vacuous: true,
            ..ValidationReport::pass(Check::T1)
        });
    }
    let wrong = models.into_iter().find(|m| {
        !true_atoms.is_subset(m) || false_atoms.iter().any(|a| m.contains(a))
    });
    Ok(match wrong {
        Some(m) => ValidationReport::fail(Check::T1, Witness::Model(m)),
        None => ValidationReport::pass(Check::T1),
    })
}

/// T2: every atom of `true_atoms` is true in every model of the reduct
/// w.r.t. `model`. A pass carries over to the reduct of every extension.
pub fn validate_in_all_models_of_the_reduct(
    program: &Program,
    model: &Interpretation,
    true_atoms: &Interpretation,
) -> Result<ValidationReport, ValidationError> {
    let outside = true_atoms.difference(model);
    if !outside.is_empty() {
        return Err(ValidationError::NotInModel(outside));
    }
    let least = reduct_cautious_atoms(program, model)?;
    Ok(if true_atoms.is_subset(&least) {
        ValidationReport::pass(Check::T2)
    } else {
        let pair = HtPair::new(least, model.clone())?;
        ValidationReport::fail(Check::T2, Witness::Pair(pair))
    })
}

/// Whether an atom may be dropped from a there-world for T3: its predicate
/// is local and, in strict mode, carries a generated suffix.
fn droppable(atom: &Atom, strict: bool) -> bool {
    is_local(&atom.predicate) && (!strict || has_uuid_suffix(&atom.predicate))
}

/// T3: no stable model of the program extended with rules not mentioning
/// its local predicates contains `true_atoms` and avoids `false_atoms`.
///
/// Every classical model `T` in that range must admit a here-and-there model
/// `<H, T>` with `H ⊂ T` and only local atoms in `T \ H`. The least such `H`
/// is the least model of the reduct w.r.t. `T` together with the non-local
/// atoms of `T`, so that is the one checked. In strict mode only local
/// predicates with a generated suffix may be dropped.
pub fn validate_cannot_be_extended_to_stable_model(
    program: &Program,
    true_atoms: &Interpretation,
    false_atoms: &Interpretation,
    strict: bool,
    limits: &EngineLimits,
) -> Result<ValidationReport, ValidationError> {
    check_disjoint(true_atoms, false_atoms)?;
    let (gp, base) = ground_for_query(program, &[true_atoms, false_atoms])?;
    let models = classical_models(&gp, &base, limits)?;
    for t in models {
        if !true_atoms.is_subset(&t) || false_atoms.iter().any(|a| t.contains(a)) {
            continue;
        }
        let kept = t.iter().filter(|a| !droppable(a, strict)).cloned().map(|a| GroundRule {
            head: Head::Atom(a),
            positive: Vec::new(),
            negative: Vec::new(),
        });
        let here = least_model(&reduct(&gp, &t).union(&GroundProgram::new(kept)));
        if here == t {
            return Ok(ValidationReport::fail(Check::T3, Witness::Model(t)));
        }
    }
    Ok(ValidationReport::pass(Check::T3))
}

/// Runs the directives in order against an expanded program. Atoms over
/// predicates the program does not mention produce warnings.
pub fn run_manifest(
    expanded: &Program,
    manifest: &[Directive],
    strict: bool,
    limits: &EngineLimits,
) -> Result<Vec<ValidationReport>, ValidationError> {
    let known = expanded.predicates();
    let mut reports = Vec::with_capacity(manifest.len());
    for directive in manifest {
        let mut warnings = Vec::new();
        for atom in directive.atoms() {
            if !known.contains(&atom.predicate) {
                let w = format!(
                    "line {}: predicate `{}` does not occur in the program",
                    directive.line, atom.predicate
                );
                log::warn!("{w}");
                warnings.push(w);
            }
        }
        let mut report = match &directive.kind {
            DirectiveKind::InAllModels { true_atoms, false_atoms } => {
                validate_in_all_models(expanded, true_atoms, false_atoms, limits)?
            }
            DirectiveKind::InAllModelsOfReduct { model, true_atoms } => {
                validate_in_all_models_of_the_reduct(expanded, model, true_atoms)?
            }
            DirectiveKind::CannotBeExtended { true_atoms, false_atoms } => {
                validate_cannot_be_extended_to_stable_model(
                    expanded,
                    true_atoms,
                    false_atoms,
                    strict,
                    limits,
                )?
            }
        };
        report.line = Some(directive.line);
        report.warnings = warnings;
        reports.push(report);
    }
    Ok(reports)
}
