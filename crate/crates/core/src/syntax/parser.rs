use super::ast::{Atom, CmpOp, Comparison, ExtendedStatement, Head, Literal, Program, Rule, Statement, Term};
use super::lexer::{tokenize, Position, Token, TokenKind};
use super::SyntaxError;

/// The tokens of one statement, without its terminating `.`.
#[derive(Clone, Debug)]
pub(crate) struct RawStatement {
    pub tokens: Vec<Token>,
    /// Position of the terminating `.`.
    pub end: Position,
}

impl RawStatement {
    pub fn start(&self) -> Position {
        self.tokens.first().map_or(self.end, |t| t.pos)
    }
}

pub fn parse_program(text: &str) -> Result<Program, SyntaxError> {
    split_statements(text)?
        .iter()
        .map(parse_statement)
        .collect::<Result<Vec<_>, _>>()
        .map(Program::new)
}

/// Splits a token stream at top-level `.` tokens, checking bracket balance.
pub(crate) fn split_statements(text: &str) -> Result<Vec<RawStatement>, SyntaxError> {
    let mut statements = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    let mut open: Vec<Token> = Vec::new();
    for tok in tokenize(text)? {
        match tok.kind {
            TokenKind::LParen | TokenKind::LBrace => open.push(tok.clone()),
            TokenKind::RParen | TokenKind::RBrace => {
                let expected = if tok.kind == TokenKind::RParen {
                    TokenKind::LParen
                } else {
                    TokenKind::LBrace
                };
                match open.pop() {
                    Some(o) if o.kind == expected => {}
                    _ => {
                        return Err(SyntaxError::parse(
                            tok.pos,
                            format!("unbalanced `{}`", tok.kind),
                        ))
                    }
                }
            }
            TokenKind::Dot => {
                if let Some(o) = open.last() {
                    return Err(SyntaxError::parse(
                        o.pos,
                        format!("unbalanced `{}`", o.kind),
                    ));
                }
                statements.push(RawStatement {
                    tokens: std::mem::take(&mut current),
                    end: tok.pos,
                });
                continue;
            }
            _ => {}
        }
        current.push(tok);
    }
    if let Some(first) = current.first() {
        return Err(SyntaxError::parse(first.pos, "missing `.` at end of statement"));
    }
    Ok(statements)
}

/// True if the statement uses a construct outside the normal-rule fragment.
pub(crate) fn is_extended(tokens: &[Token]) -> bool {
    let mut depth = 0usize;
    let mut prev_not = false;
    for tok in tokens {
        match &tok.kind {
            TokenKind::LBrace
            | TokenKind::RBrace
            | TokenKind::Hash(_)
            | TokenKind::DotDot
            | TokenKind::Semicolon
            | TokenKind::Colon
            | TokenKind::Bar
            | TokenKind::At => return true,
            k if k.is_arithmetic() => return true,
            TokenKind::Variable(v) if v == "_" => return true,
            TokenKind::LParen => {
                depth += 1;
                // function terms and tuples
                if depth > 1 {
                    return true;
                }
            }
            TokenKind::RParen => depth = depth.saturating_sub(1),
            TokenKind::Ident(w) if w == "not" => {
                if prev_not {
                    return true;
                }
                prev_not = true;
                continue;
            }
            _ => {}
        }
        prev_not = false;
    }
    false
}

pub(crate) fn parse_statement(raw: &RawStatement) -> Result<Statement, SyntaxError> {
    if raw.tokens.is_empty() {
        return Err(SyntaxError::parse(raw.end, "empty statement"));
    }
    if is_extended(&raw.tokens) {
        Ok(Statement::Extended(extended_statement(&raw.tokens)))
    } else {
        let rule = RuleParser::new(&raw.tokens, raw.end).rule()?;
        if let Some(var) = rule.unsafe_variables().into_iter().next() {
            return Err(SyntaxError::Unsafe {
                pos: raw.start(),
                variable: var.to_owned(),
                rule: rule.to_string(),
            });
        }
        Ok(Statement::Rule(rule))
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BraceContext {
    Choice,
    AggregateTerms,
    AggregateCondition,
}

/// Identifies identifiers in atom position: either directly followed by `(`
/// or bare where a literal is expected. Terms of aggregate elements (left of
/// `:`) and nested function terms are skipped.
pub(crate) fn atom_occurrences(tokens: &[TokenKind]) -> Vec<usize> {
    let mut occurrences = Vec::new();
    let mut depth = 0usize;
    let mut braces: Vec<(BraceContext, usize)> = Vec::new();
    for (i, tok) in tokens.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &tokens[j]);
        let next = tokens.get(i + 1);
        let base_depth = braces.last().map_or(0, |(_, d)| *d);
        match tok {
            TokenKind::LParen => depth += 1,
            TokenKind::RParen => depth = depth.saturating_sub(1),
            TokenKind::LBrace => {
                let ctx = if matches!(prev, Some(TokenKind::Hash(_))) {
                    BraceContext::AggregateTerms
                } else {
                    BraceContext::Choice
                };
                braces.push((ctx, depth));
            }
            TokenKind::RBrace => {
                braces.pop();
            }
            TokenKind::Colon if depth == base_depth => {
                if let Some((ctx @ BraceContext::AggregateTerms, _)) = braces.last_mut() {
                    *ctx = BraceContext::AggregateCondition;
                }
            }
            TokenKind::Semicolon if depth == base_depth => {
                if let Some((ctx @ BraceContext::AggregateCondition, _)) = braces.last_mut() {
                    *ctx = BraceContext::AggregateTerms;
                }
            }
            TokenKind::Ident(name) if name != "not" && depth == base_depth => {
                if matches!(braces.last(), Some((BraceContext::AggregateTerms, _))) {
                    continue;
                }
                let is_operator = |t: Option<&TokenKind>| {
                    t.is_some_and(|t| {
                        t.is_comparison()
                            || t.is_arithmetic()
                            || matches!(t, TokenKind::DotDot | TokenKind::At | TokenKind::Bar)
                    })
                };
                let applied = matches!(next, Some(TokenKind::LParen));
                if applied || (!is_operator(prev) && !is_operator(next)) {
                    occurrences.push(i);
                }
            }
            _ => {}
        }
    }
    occurrences
}

fn extended_statement(tokens: &[Token]) -> ExtendedStatement {
    let tokens: Vec<TokenKind> = tokens.iter().map(|t| t.kind.clone()).collect();
    let atom_occurrences = atom_occurrences(&tokens);
    ExtendedStatement {
        tokens,
        atom_occurrences,
    }
}

struct RuleParser<'a> {
    tokens: &'a [Token],
    index: usize,
    end: Position,
}

impl<'a> RuleParser<'a> {
    fn new(tokens: &'a [Token], end: Position) -> Self {
        RuleParser {
            tokens,
            index: 0,
            end,
        }
    }

    fn peek(&self) -> Option<&'a TokenKind> {
        self.tokens.get(self.index).map(|t| &t.kind)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a TokenKind> {
        self.tokens.get(self.index + offset).map(|t| &t.kind)
    }

    fn pos(&self) -> Position {
        self.tokens.get(self.index).map_or(self.end, |t| t.pos)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        Err(SyntaxError::parse(self.pos(), message))
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), SyntaxError> {
        if self.peek() == Some(&kind) {
            self.index += 1;
            Ok(())
        } else {
            let found = self.peek().map_or("end of statement".to_owned(), |k| format!("`{k}`"));
            self.error(format!("expected `{kind}`, found {found}"))
        }
    }

    fn rule(&mut self) -> Result<Rule, SyntaxError> {
        let head = if self.peek() == Some(&TokenKind::If) {
            Head::Falsum
        } else {
            Head::Atom(self.atom()?)
        };
        let mut body = Vec::new();
        match self.peek() {
            None => {}
            Some(TokenKind::If) => {
                self.index += 1;
                loop {
                    body.push(self.literal()?);
                    match self.peek() {
                        Some(TokenKind::Comma) => self.index += 1,
                        None => break,
                        Some(k) => return self.error(format!("unexpected `{k}` in rule body")),
                    }
                }
            }
            Some(k) => return self.error(format!("unexpected `{k}` after rule head")),
        }
        Ok(Rule { head, body })
    }

    fn literal(&mut self) -> Result<Literal, SyntaxError> {
        match (self.peek(), self.peek_at(1)) {
            (Some(TokenKind::Ident(w)), Some(TokenKind::Ident(_))) if w == "not" => {
                self.index += 1;
                Ok(Literal::Negative(self.atom()?))
            }
            (Some(TokenKind::Ident(_)), Some(TokenKind::LParen)) => {
                let atom = self.atom()?;
                if self.peek().is_some_and(TokenKind::is_comparison) {
                    return self.error("function terms are not supported in comparisons");
                }
                Ok(Literal::Positive(atom))
            }
            (Some(TokenKind::Ident(_)), next) if !next.is_some_and(TokenKind::is_comparison) => {
                Ok(Literal::Positive(self.atom()?))
            }
            _ => {
                let left = self.term()?;
                let op = match self.peek().and_then(CmpOp::from_token) {
                    Some(op) => op,
                    None => return self.error("expected a comparison operator"),
                };
                self.index += 1;
                let right = self.term()?;
                Ok(Literal::Comparison(Comparison { left, op, right }))
            }
        }
    }

    fn atom(&mut self) -> Result<Atom, SyntaxError> {
        let predicate = match self.peek() {
            Some(TokenKind::Ident(name)) if name != "not" => name.clone(),
            Some(k) => return self.error(format!("expected a predicate name, found `{k}`")),
            None => return self.error("expected a predicate name, found end of statement"),
        };
        self.index += 1;
        let mut terms = Vec::new();
        if self.peek() == Some(&TokenKind::LParen) {
            self.index += 1;
            loop {
                terms.push(self.term()?);
                match self.peek() {
                    Some(TokenKind::Comma) => self.index += 1,
                    _ => break,
                }
            }
            self.expect(TokenKind::RParen)?;
        }
        Ok(Atom { predicate, terms })
    }

    fn term(&mut self) -> Result<Term, SyntaxError> {
        let term = match self.peek() {
            Some(TokenKind::Integer(n)) => Term::Integer(*n),
            Some(TokenKind::Ident(s)) => Term::Symbol(s.clone()),
            Some(TokenKind::Str(s)) => Term::Str(s.clone()),
            Some(TokenKind::Variable(v)) => Term::Variable(v.clone()),
            Some(k) => return self.error(format!("expected a term, found `{k}`")),
            None => return self.error("expected a term, found end of statement"),
        };
        self.index += 1;
        Ok(term)
    }
}

/// Parses a comma-separated list of ground atoms, as used in validation
/// directives. An empty or blank string yields an empty list.
pub fn parse_ground_atoms(text: &str) -> Result<Vec<Atom>, SyntaxError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Ok(Vec::new());
    }
    let end = tokens.last().map(|t| t.pos).unwrap_or_default();
    let mut parser = RuleParser::new(&tokens, end);
    let mut atoms = Vec::new();
    loop {
        let pos = parser.pos();
        let atom = parser.atom()?;
        if !atom.is_ground() {
            return Err(SyntaxError::parse(pos, format!("atom `{atom}` is not ground")));
        }
        atoms.push(atom);
        match parser.peek() {
            Some(TokenKind::Comma) => parser.index += 1,
            None => break,
            Some(k) => return parser.error(format!("unexpected `{k}` in atom list")),
        }
    }
    Ok(atoms)
}
