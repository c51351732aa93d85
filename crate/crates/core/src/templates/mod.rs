//! Template declaration, application and expansion.
//!
//! A program with templates is a sequence of ordinary statements, template
//! declarations and template applications, written with the reserved
//! predicates `__template__`, `__end__` and `__apply_template__`:
//!
//! ```text
//! __template__("@d/tc").
//!     c(X,Y) :- r(X,Y).    c(X,Z) :- c(X,Y), r(Y,Z).
//! __end__.
//! __apply_template__("@d/tc", (r, link), (c, reach)).
//! ```
//!
//! Expansion processes elements in order. Declarations expand their content
//! against the registry built so far and store the result; applications
//! rename the stored body, first giving every local predicate (`__p`) a fresh
//! UUID suffix and then applying the user-supplied global renaming.

mod renaming;
mod uuid;

use std::borrow::Cow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{
    is_local, parse_statement, predicates_of, split_statements, Position, Program, RawStatement,
    Statement, SyntaxError, Token, TokenKind,
};

pub use self::renaming::{rename, Renaming, RenamingKind};
pub use self::uuid::{deterministic_suffix, has_uuid_suffix, UuidSource, DETERMINISTIC_PREFIX};

pub const APPLY_TEMPLATE: &str = "__apply_template__";
pub const TEMPLATE: &str = "__template__";
pub const END: &str = "__end__";

pub fn is_reserved(name: &str) -> bool {
    matches!(name, APPLY_TEMPLATE | TEMPLATE | END)
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: malformed directive: {message}")]
    MalformedDirective { pos: Position, message: String },
    #[error("{pos}: malformed renaming pair: {message}")]
    MalformedPair { pos: Position, message: String },
    #[error("{pos}: `__end__` without an open template declaration")]
    UnmatchedEnd { pos: Position },
    #[error("{pos}: declaration of template \"{name}\" is not terminated by `__end__`")]
    UnterminatedDeclaration { pos: Position, name: String },
    #[error("{pos}: template \"{name}\" is declared inside the declaration of \"{outer}\"")]
    NestedDeclaration {
        pos: Position,
        name: String,
        outer: String,
    },
    #[error("{pos}: reserved predicate `{name}` used in an ordinary statement")]
    ReservedPredicate { pos: Position, name: String },
    #[error("local predicate `{0}` cannot be renamed by a global renaming")]
    LocalInGlobalRenaming(String),
    #[error("invalid local renaming `{0}` -> `{1}`")]
    InvalidLocalRenaming(String, String),
    #[error("{}unknown template \"{name}\"", at(.pos))]
    UnknownTemplate { pos: Option<Position>, name: String },
    #[error("{pos}: template \"{name}\" is applied inside its own declaration")]
    RecursiveApplication { pos: Position, name: String },
    #[error("template \"{name}\" uses reserved predicate `{predicate}`")]
    ReservedInTemplate { name: String, predicate: String },
}

fn at(pos: &Option<Position>) -> String {
    pos.map(|p| format!("{p}: ")).unwrap_or_default()
}

/// A named set of rules with no directives left in it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Template {
    name: String,
    body: Program,
}

impl Template {
    pub fn new(name: impl Into<String>, body: Program) -> Result<Self, TemplateError> {
        let name = name.into();
        if let Some(predicate) = predicates_of(&body).into_iter().find(|p| is_reserved(p)) {
            return Err(TemplateError::ReservedInTemplate { name, predicate });
        }
        Ok(Template { name, body })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn body(&self) -> &Program {
        &self.body
    }
}

/// Template name to expanded body. Re-declaration overwrites.
#[derive(Clone, Debug, Default)]
pub struct TemplateRegistry {
    templates: BTreeMap<String, Template>,
    synthesize_exact_copy: bool,
}

impl TemplateRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Enables on-demand `@d/exact copy (arity n)` templates for any `n`.
    pub(crate) fn with_exact_copy_synthesis(mut self) -> Self {
        self.synthesize_exact_copy = true;
        self
    }

    /// Stores a template, returning the one it replaces.
    pub fn insert(&mut self, template: Template) -> Option<Template> {
        self.templates.insert(template.name.clone(), template)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.templates.contains_key(name)
            || (self.synthesize_exact_copy && crate::corelib::exact_copy_arity(name).is_some())
    }

    pub fn lookup(&self, name: &str) -> Result<Cow<'_, Template>, TemplateError> {
        if let Some(t) = self.templates.get(name) {
            return Ok(Cow::Borrowed(t));
        }
        if self.synthesize_exact_copy {
            if let Some((prefix, n)) = crate::corelib::exact_copy_arity(name) {
                return Ok(Cow::Owned(crate::corelib::exact_copy_named(prefix, n)));
            }
        }
        Err(TemplateError::UnknownTemplate {
            pos: None,
            name: name.to_owned(),
        })
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.templates.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    /// Expands `text` into this registry and returns the ordinary output it
    /// produced (statements outside declarations and top-level applications).
    pub fn declare_from_source(
        &mut self,
        text: &str,
        uuids: &UuidSource,
    ) -> Result<Program, TemplateError> {
        let program = parse_program_with_templates(text)?;
        expand(&program, self, uuids)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateDeclaration {
    pub name: String,
    pub content: Vec<Element>,
    pub pos: Position,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateApplication {
    pub name: String,
    pub pairs: Vec<(String, String)>,
    pub pos: Position,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Statement(Statement),
    Declaration(TemplateDeclaration),
    Application(TemplateApplication),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Statement(s) => write!(f, "{s}"),
            Element::Declaration(d) => {
                writeln!(f, "{TEMPLATE}({:?}).", d.name)?;
                for e in &d.content {
                    writeln!(f, "    {e}")?;
                }
                write!(f, "{END}.")
            }
            Element::Application(a) => {
                write!(f, "{APPLY_TEMPLATE}({:?}", a.name)?;
                for (old, new) in &a.pairs {
                    write!(f, ", ({old}, {new})")?;
                }
                f.write_str(").")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProgramWithTemplates {
    pub elements: Vec<Element>,
}

impl ProgramWithTemplates {
    pub fn has_directives(&self) -> bool {
        self.elements
            .iter()
            .any(|e| !matches!(e, Element::Statement(_)))
    }
}

/// One element per line; declarations span several lines.
impl fmt::Display for ProgramWithTemplates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

pub fn parse_program_with_templates(text: &str) -> Result<ProgramWithTemplates, TemplateError> {
    let mut elements = Vec::new();
    let mut open: Option<TemplateDeclaration> = None;
    for raw in split_statements(text)? {
        let first = raw.tokens.first().map(|t| &t.kind);
        let element = match first {
            Some(TokenKind::Ident(w)) if w == TEMPLATE => {
                let name = parse_template_directive(&raw)?;
                if let Some(outer) = &open {
                    return Err(TemplateError::NestedDeclaration {
                        pos: raw.start(),
                        name,
                        outer: outer.name.clone(),
                    });
                }
                open = Some(TemplateDeclaration {
                    name,
                    content: Vec::new(),
                    pos: raw.start(),
                });
                continue;
            }
            Some(TokenKind::Ident(w)) if w == END => {
                if raw.tokens.len() != 1 {
                    return Err(TemplateError::MalformedDirective {
                        pos: raw.start(),
                        message: "expected `__end__.`".into(),
                    });
                }
                match open.take() {
                    Some(decl) => Element::Declaration(decl),
                    None => return Err(TemplateError::UnmatchedEnd { pos: raw.start() }),
                }
            }
            Some(TokenKind::Ident(w)) if w == APPLY_TEMPLATE => {
                Element::Application(parse_apply_directive(&raw)?)
            }
            _ => {
                let statement = parse_statement(&raw)?;
                if let Some(name) = statement.predicates().find(|p| is_reserved(p)) {
                    return Err(TemplateError::ReservedPredicate {
                        pos: raw.start(),
                        name: name.to_owned(),
                    });
                }
                Element::Statement(statement)
            }
        };
        match (&mut open, element) {
            (Some(decl), element @ (Element::Statement(_) | Element::Application(_))) => {
                decl.content.push(element)
            }
            (_, element) => elements.push(element),
        }
    }
    if let Some(decl) = open {
        return Err(TemplateError::UnterminatedDeclaration {
            pos: decl.pos,
            name: decl.name,
        });
    }
    Ok(ProgramWithTemplates { elements })
}

struct DirectiveCursor<'a> {
    tokens: &'a [Token],
    index: usize,
    end: Position,
}

impl<'a> DirectiveCursor<'a> {
    fn new(raw: &'a RawStatement) -> Self {
        DirectiveCursor {
            tokens: &raw.tokens,
            index: 1,
            end: raw.end,
        }
    }

    fn pos(&self) -> Position {
        self.tokens.get(self.index).map_or(self.end, |t| t.pos)
    }

    fn peek(&self) -> Option<&'a TokenKind> {
        self.tokens.get(self.index).map(|t| &t.kind)
    }

    fn next(&mut self) -> Option<&'a TokenKind> {
        let t = self.peek();
        self.index += 1;
        t
    }

    fn expect(&mut self, kind: TokenKind, context: &str) -> Result<(), TemplateError> {
        let pos = self.pos();
        match self.next() {
            Some(k) if *k == kind => Ok(()),
            other => Err(TemplateError::MalformedDirective {
                pos,
                message: format!(
                    "expected `{kind}` {context}, found {}",
                    other.map_or("end of statement".to_owned(), |k| format!("`{k}`"))
                ),
            }),
        }
    }

    fn name(&mut self) -> Result<String, TemplateError> {
        let pos = self.pos();
        match self.next() {
            Some(TokenKind::Str(s)) => Ok(s.clone()),
            _ => Err(TemplateError::MalformedDirective {
                pos,
                message: "expected a quoted template name".into(),
            }),
        }
    }

    fn at_end(&self) -> bool {
        self.index >= self.tokens.len()
    }
}

fn parse_template_directive(raw: &RawStatement) -> Result<String, TemplateError> {
    let mut cursor = DirectiveCursor::new(raw);
    cursor.expect(TokenKind::LParen, "after `__template__`")?;
    let name = cursor.name()?;
    cursor.expect(TokenKind::RParen, "after the template name")?;
    if !cursor.at_end() {
        return Err(TemplateError::MalformedDirective {
            pos: cursor.pos(),
            message: "unexpected tokens after `__template__(...)`".into(),
        });
    }
    Ok(name)
}

fn parse_apply_directive(raw: &RawStatement) -> Result<TemplateApplication, TemplateError> {
    let mut cursor = DirectiveCursor::new(raw);
    cursor.expect(TokenKind::LParen, "after `__apply_template__`")?;
    let name = cursor.name()?;
    let mut pairs = Vec::new();
    loop {
        match cursor.next() {
            Some(TokenKind::RParen) => break,
            Some(TokenKind::Comma) => {}
            _ => {
                return Err(TemplateError::MalformedDirective {
                    pos: cursor.tokens[cursor.index - 1].pos,
                    message: "expected `,` or `)` in template application".into(),
                })
            }
        }
        let pos = cursor.pos();
        let pair_error = |message: &str| TemplateError::MalformedPair {
            pos,
            message: message.to_owned(),
        };
        if cursor.next() != Some(&TokenKind::LParen) {
            return Err(pair_error("expected `(old, new)`"));
        }
        let old = match cursor.next() {
            Some(TokenKind::Ident(s)) => s.clone(),
            _ => return Err(pair_error("old name is not a predicate identifier")),
        };
        if cursor.next() != Some(&TokenKind::Comma) {
            return Err(pair_error("expected `,` between old and new name"));
        }
        let new = match cursor.next() {
            Some(TokenKind::Ident(s)) => s.clone(),
            _ => return Err(pair_error("new name is not a predicate identifier")),
        };
        if cursor.next() != Some(&TokenKind::RParen) {
            return Err(pair_error("expected `)` closing the pair"));
        }
        pairs.push((old, new));
    }
    if !cursor.at_end() {
        return Err(TemplateError::MalformedDirective {
            pos: cursor.pos(),
            message: "unexpected tokens after `__apply_template__(...)`".into(),
        });
    }
    Ok(TemplateApplication {
        name,
        pairs,
        pos: raw.start(),
    })
}

/// Maps every local predicate of `body` to itself followed by `_` and one
/// freshly drawn UUID, shared by all local names of the body. No UUID is
/// drawn when the body has no local predicate.
pub fn make_local_renaming(body: &Program, uuids: &UuidSource) -> Renaming {
    let locals: BTreeSet<String> = predicates_of(body).into_iter().filter(|p| is_local(p)).collect();
    if locals.is_empty() {
        return Renaming::local(BTreeMap::new()).expect("empty renaming is valid");
    }
    let suffix = uuids.draw_suffix();
    let map = locals
        .into_iter()
        .map(|p| {
            let renamed = format!("{p}_{suffix}");
            (p, renamed)
        })
        .collect();
    Renaming::local(map).expect("suffixing local names keeps them local and distinct")
}

/// `global(local(body))` where `local` gives the template's local predicates
/// universally unique names.
pub fn apply_template(
    template: &Template,
    global: &Renaming,
    uuids: &UuidSource,
) -> Result<Program, TemplateError> {
    if global.kind() != RenamingKind::Global {
        let (old, _) = global.iter().next().unwrap_or(("", ""));
        return Err(TemplateError::LocalInGlobalRenaming(old.to_owned()));
    }
    let local = make_local_renaming(&template.body, uuids);
    Ok(rename(&rename(&template.body, &local), global))
}

/// Expands a program with templates into an ordinary program, updating
/// `registry` with the templates it declares.
pub fn expand(
    program: &ProgramWithTemplates,
    registry: &mut TemplateRegistry,
    uuids: &UuidSource,
) -> Result<Program, TemplateError> {
    expand_elements(&program.elements, registry, uuids, None)
}

fn expand_elements(
    elements: &[Element],
    registry: &mut TemplateRegistry,
    uuids: &UuidSource,
    declaring: Option<&str>,
) -> Result<Program, TemplateError> {
    let mut output = Program::default();
    for element in elements {
        match element {
            Element::Statement(s) => output.statements.push(s.clone()),
            Element::Declaration(decl) => {
                if let Some(outer) = declaring {
                    return Err(TemplateError::NestedDeclaration {
                        pos: decl.pos,
                        name: decl.name.clone(),
                        outer: outer.to_owned(),
                    });
                }
                let body = expand_elements(&decl.content, registry, uuids, Some(&decl.name))?;
                if registry.insert(Template::new(decl.name.clone(), body)?).is_some() {
                    log::warn!("{}: template \"{}\" re-declared", decl.pos, decl.name);
                }
            }
            Element::Application(app) => {
                if declaring == Some(app.name.as_str()) && !registry.contains(&app.name) {
                    return Err(TemplateError::RecursiveApplication {
                        pos: app.pos,
                        name: app.name.clone(),
                    });
                }
                let template = registry.lookup(&app.name).map_err(|_| TemplateError::UnknownTemplate {
                    pos: Some(app.pos),
                    name: app.name.clone(),
                })?;
                let global = Renaming::global(app.pairs.iter().cloned())?;
                output.extend(apply_template(&template, &global, uuids)?);
            }
        }
    }
    Ok(output)
}

/// Parses and expands `text` in one go.
pub fn expand_source(
    text: &str,
    registry: &mut TemplateRegistry,
    uuids: &UuidSource,
) -> Result<Program, TemplateError> {
    expand(&parse_program_with_templates(text)?, registry, uuids)
}
