//! Lexing, parsing and re-emission of the ASP fragment.
//!
//! Normal rules, facts and constraints (with comparison built-ins) are parsed
//! into [`Rule`]s. Anything else a mainstream grounder accepts (choice rules,
//! aggregates, arithmetic, intervals, `#` directives) is kept as an
//! [`ExtendedStatement`]: a token sequence with the positions of predicate
//! names in atom position, enough to rename and print it again.

mod ast;
mod lexer;
mod parser;

use std::collections::BTreeSet;

use thiserror::Error;

pub use ast::{
    Atom, CmpOp, Comparison, ExtendedStatement, Head, Literal, Program, Rule, Statement, Term,
};
pub use lexer::{tokenize, Position, Token, TokenKind};
pub use parser::{parse_ground_atoms, parse_program};
pub(crate) use parser::{parse_statement, split_statements, RawStatement};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("{pos}: lexical error: {message}")]
    Lex { pos: Position, message: String },
    #[error("{pos}: parse error: {message}")]
    Parse { pos: Position, message: String },
    #[error("{pos}: unsafe variable `{variable}` in rule `{rule}`")]
    Unsafe {
        pos: Position,
        variable: String,
        rule: String,
    },
}

impl SyntaxError {
    pub(crate) fn lex(pos: Position, message: impl Into<String>) -> Self {
        SyntaxError::Lex {
            pos,
            message: message.into(),
        }
    }

    pub(crate) fn parse(pos: Position, message: impl Into<String>) -> Self {
        SyntaxError::Parse {
            pos,
            message: message.into(),
        }
    }

    pub fn position(&self) -> Option<Position> {
        match self {
            SyntaxError::Lex { pos, .. }
            | SyntaxError::Parse { pos, .. }
            | SyntaxError::Unsafe { pos, .. } => Some(*pos),
        }
    }
}

/// Prints a program, one statement per line.
pub fn render(program: &Program) -> String {
    program.to_string()
}

/// The set of predicate names occurring in atom position anywhere in the
/// program, extended statements included.
pub fn predicates_of(program: &Program) -> BTreeSet<String> {
    program.predicates()
}

/// Local predicates are those whose name starts with a double underscore.
pub fn is_local(name: &str) -> bool {
    name.starts_with("__")
}
