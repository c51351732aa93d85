use std::collections::BTreeSet;
use std::fmt;

use super::lexer::TokenKind;

/// A term. The derived order puts integers before symbolic constants and
/// symbolic constants before strings, which is also the order used when
/// comparison built-ins are evaluated on ground terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Integer(i64),
    Symbol(String),
    /// Quoted string without the surrounding quotes.
    Str(String),
    Variable(String),
}

impl Term {
    pub fn is_variable(&self) -> bool {
        matches!(self, Term::Variable(_))
    }

    pub fn is_ground(&self) -> bool {
        !self.is_variable()
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Integer(n) => write!(f, "{n}"),
            Term::Symbol(s) | Term::Variable(s) => f.write_str(s),
            Term::Str(s) => write!(f, "\"{s}\""),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: impl Into<String>, terms: Vec<Term>) -> Self {
        Atom {
            predicate: predicate.into(),
            terms,
        }
    }

    /// A propositional atom.
    pub fn prop(predicate: impl Into<String>) -> Self {
        Atom::new(predicate, Vec::new())
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_ground(&self) -> bool {
        self.terms.iter().all(Term::is_ground)
    }

    pub fn variables(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().filter_map(|t| match t {
            Term::Variable(v) => Some(v.as_str()),
            _ => None,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.terms.is_empty() {
            f.write_str("(")?;
            for (i, t) in self.terms.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CmpOp {
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn eval(self, left: &Term, right: &Term) -> bool {
        match self {
            CmpOp::Eq => left == right,
            CmpOp::Neq => left != right,
            CmpOp::Lt => left < right,
            CmpOp::Le => left <= right,
            CmpOp::Gt => left > right,
            CmpOp::Ge => left >= right,
        }
    }

    pub(crate) fn from_token(kind: &TokenKind) -> Option<CmpOp> {
        Some(match kind {
            TokenKind::Eq => CmpOp::Eq,
            TokenKind::Neq => CmpOp::Neq,
            TokenKind::Lt => CmpOp::Lt,
            TokenKind::Le => CmpOp::Le,
            TokenKind::Gt => CmpOp::Gt,
            TokenKind::Ge => CmpOp::Ge,
            _ => return None,
        })
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmpOp::Eq => "=",
            CmpOp::Neq => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Comparison {
    pub left: Term,
    pub op: CmpOp,
    pub right: Term,
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.op, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Positive(Atom),
    Negative(Atom),
    Comparison(Comparison),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Positive(a) => write!(f, "{a}"),
            Literal::Negative(a) => write!(f, "not {a}"),
            Literal::Comparison(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Head {
    Atom(Atom),
    /// `⊥`, written as an empty head (`:- body.`).
    Falsum,
}

/// A normal rule, a constraint or a fact. Body literals keep source order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn fact(atom: Atom) -> Self {
        Rule {
            head: Head::Atom(atom),
            body: Vec::new(),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty() && matches!(self.head, Head::Atom(_))
    }

    pub fn is_constraint(&self) -> bool {
        matches!(self.head, Head::Falsum)
    }

    pub fn head_atom(&self) -> Option<&Atom> {
        match &self.head {
            Head::Atom(a) => Some(a),
            Head::Falsum => None,
        }
    }

    pub fn positive_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Positive(a) => Some(a),
            _ => None,
        })
    }

    pub fn negative_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Negative(a) => Some(a),
            _ => None,
        })
    }

    pub fn comparisons(&self) -> impl Iterator<Item = &Comparison> {
        self.body.iter().filter_map(|l| match l {
            Literal::Comparison(c) => Some(c),
            _ => None,
        })
    }

    /// Every atom of the rule, head first.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.head_atom().into_iter().chain(self.body.iter().filter_map(|l| match l {
            Literal::Positive(a) | Literal::Negative(a) => Some(a),
            Literal::Comparison(_) => None,
        }))
    }

    pub(crate) fn atoms_mut(&mut self) -> impl Iterator<Item = &mut Atom> {
        let head = match &mut self.head {
            Head::Atom(a) => Some(a),
            Head::Falsum => None,
        };
        head.into_iter().chain(self.body.iter_mut().filter_map(|l| match l {
            Literal::Positive(a) | Literal::Negative(a) => Some(a),
            Literal::Comparison(_) => None,
        }))
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        let mut vars: BTreeSet<&str> = self.atoms().flat_map(Atom::variables).collect();
        for c in self.comparisons() {
            for t in [&c.left, &c.right] {
                if let Term::Variable(v) = t {
                    vars.insert(v);
                }
            }
        }
        vars
    }

    /// Variables occurring in the head, negative body or comparisons but in
    /// no positive body atom.
    pub fn unsafe_variables(&self) -> BTreeSet<&str> {
        let bound: BTreeSet<&str> = self.positive_body().flat_map(Atom::variables).collect();
        self.variables()
            .into_iter()
            .filter(|v| !bound.contains(v))
            .collect()
    }

    pub fn is_ground(&self) -> bool {
        self.variables().is_empty()
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.head {
            Head::Atom(a) => {
                write!(f, "{a}")?;
                if !self.body.is_empty() {
                    f.write_str(" :- ")?;
                }
            }
            Head::Falsum => f.write_str(":- ")?,
        }
        for (i, l) in self.body.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str(".")
    }
}

/// A statement outside the normal-rule fragment (choice rules, aggregates,
/// arithmetic, intervals, directives). Kept as tokens so that predicates in
/// atom position can be renamed and the statement re-emitted.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedStatement {
    /// Tokens of the statement without the terminating `.`.
    pub tokens: Vec<TokenKind>,
    /// Indices into `tokens` of identifiers in atom position.
    pub atom_occurrences: Vec<usize>,
}

impl ExtendedStatement {
    pub fn predicates(&self) -> impl Iterator<Item = &str> {
        self.atom_occurrences.iter().filter_map(|&i| match &self.tokens[i] {
            TokenKind::Ident(name) => Some(name.as_str()),
            _ => None,
        })
    }
}

impl fmt::Display for ExtendedStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_tokens(&self.tokens))?;
        f.write_str(".")
    }
}

/// Prints tokens with canonical spacing such that tokenizing the result
/// yields the same sequence.
pub(crate) fn render_tokens(tokens: &[TokenKind]) -> String {
    let mut out = String::new();
    let mut depth = 0usize;
    for (i, tok) in tokens.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &tokens[j]);
        match tok {
            TokenKind::If => {
                if prev.is_some() {
                    out.push(' ');
                }
                out.push_str(":- ");
                continue;
            }
            TokenKind::Colon => {
                out.push_str(" : ");
                continue;
            }
            TokenKind::Semicolon => {
                out.push_str("; ");
                continue;
            }
            TokenKind::Comma => {
                out.push(',');
                if depth == 0 {
                    out.push(' ');
                }
                continue;
            }
            t if t.is_comparison() => {
                out.push(' ');
                out.push_str(&t.to_string());
                out.push(' ');
                continue;
            }
            _ => {}
        }
        if let Some(p) = prev {
            let needs_space = (p.is_word() && tok.is_word())
                || (p.is_word() && matches!(tok, TokenKind::LBrace) && !matches!(p, TokenKind::Hash(_)))
                // keep `- 1` apart when the minus is not binary
                || (matches!(p, TokenKind::Minus)
                    && matches!(tok, TokenKind::Integer(_))
                    && !i.checked_sub(2).is_some_and(|j| tokens[j].ends_term()));
            if needs_space && !out.ends_with(' ') {
                out.push(' ');
            }
        }
        match tok {
            TokenKind::LParen => depth += 1,
            TokenKind::RParen => depth = depth.saturating_sub(1),
            _ => {}
        }
        out.push_str(&tok.to_string());
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Statement {
    Rule(Rule),
    Extended(ExtendedStatement),
}

impl Statement {
    pub fn is_core(&self) -> bool {
        matches!(self, Statement::Rule(_))
    }

    pub fn predicates(&self) -> Box<dyn Iterator<Item = &str> + '_> {
        match self {
            Statement::Rule(r) => Box::new(r.atoms().map(|a| a.predicate.as_str())),
            Statement::Extended(e) => Box::new(e.predicates()),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Rule(r) => write!(f, "{r}"),
            Statement::Extended(e) => write!(f, "{e}"),
        }
    }
}

impl From<Rule> for Statement {
    fn from(r: Rule) -> Self {
        Statement::Rule(r)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Program {
    pub statements: Vec<Statement>,
}

impl Program {
    pub fn new(statements: Vec<Statement>) -> Self {
        Program { statements }
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Statement> {
        self.statements.iter()
    }

    pub fn predicates(&self) -> BTreeSet<String> {
        self.statements
            .iter()
            .flat_map(Statement::predicates)
            .map(str::to_owned)
            .collect()
    }

    /// Core rules, or `None` if some statement is extended.
    pub fn core_rules(&self) -> Option<Vec<&Rule>> {
        self.statements
            .iter()
            .map(|s| match s {
                Statement::Rule(r) => Some(r),
                Statement::Extended(_) => None,
            })
            .collect()
    }

    pub fn extend(&mut self, other: Program) {
        self.statements.extend(other.statements);
    }

    /// Concatenation of two programs.
    pub fn union(&self, other: &Program) -> Program {
        let mut out = self.clone();
        out.statements.extend(other.statements.iter().cloned());
        out
    }
}

impl FromIterator<Statement> for Program {
    fn from_iter<I: IntoIterator<Item = Statement>>(iter: I) -> Self {
        Program::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Program {
    type Item = &'a Statement;
    type IntoIter = std::slice::Iter<'a, Statement>;

    fn into_iter(self) -> Self::IntoIter {
        self.statements.iter()
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.statements.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
