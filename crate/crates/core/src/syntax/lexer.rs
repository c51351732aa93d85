//! Tokenizer for the ASP fragment.
//!
//! Comments (`% ...` and `%* ... *%`) are skipped. A `-` directly followed by
//! a digit is read as the sign of an integer literal unless the previous token
//! ends a term, in which case it is the binary minus operator.

use std::fmt;

use super::SyntaxError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TokenKind {
    /// Lowercase- or underscore-initial identifier (`p`, `__c`, `not`).
    Ident(String),
    /// Uppercase-initial identifier, or the anonymous `_`.
    Variable(String),
    Integer(i64),
    /// Quoted string, stored without the quotes but with escapes kept verbatim.
    Str(String),
    /// `#count`, `#min`, `#show`, ...
    Hash(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semicolon,
    Colon,
    Dot,
    DotDot,
    /// `:-` or `←`
    If,
    Eq,
    Neq,
    Lt,
    Le,
    Gt,
    Ge,
    Plus,
    Minus,
    Star,
    Slash,
    Backslash,
    Bar,
    At,
}

impl TokenKind {
    /// True for tokens after which a `-` is a binary operator.
    pub fn ends_term(&self) -> bool {
        matches!(
            self,
            TokenKind::Ident(_)
                | TokenKind::Variable(_)
                | TokenKind::Integer(_)
                | TokenKind::Str(_)
                | TokenKind::RParen
                | TokenKind::RBrace
                | TokenKind::Bar
        )
    }

    /// Tokens that print as a word and need whitespace between each other.
    pub fn is_word(&self) -> bool {
        matches!(
            self,
            TokenKind::Ident(_)
                | TokenKind::Variable(_)
                | TokenKind::Integer(_)
                | TokenKind::Str(_)
                | TokenKind::Hash(_)
        )
    }

    pub fn is_comparison(&self) -> bool {
        matches!(
            self,
            TokenKind::Eq
                | TokenKind::Neq
                | TokenKind::Lt
                | TokenKind::Le
                | TokenKind::Gt
                | TokenKind::Ge
        )
    }

    pub fn is_arithmetic(&self) -> bool {
        matches!(
            self,
            TokenKind::Plus
                | TokenKind::Minus
                | TokenKind::Star
                | TokenKind::Slash
                | TokenKind::Backslash
        )
    }
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) | TokenKind::Variable(s) => f.write_str(s),
            TokenKind::Integer(n) => write!(f, "{n}"),
            TokenKind::Str(s) => write!(f, "\"{s}\""),
            TokenKind::Hash(s) => write!(f, "#{s}"),
            TokenKind::LParen => f.write_str("("),
            TokenKind::RParen => f.write_str(")"),
            TokenKind::LBrace => f.write_str("{"),
            TokenKind::RBrace => f.write_str("}"),
            TokenKind::Comma => f.write_str(","),
            TokenKind::Semicolon => f.write_str(";"),
            TokenKind::Colon => f.write_str(":"),
            TokenKind::Dot => f.write_str("."),
            TokenKind::DotDot => f.write_str(".."),
            TokenKind::If => f.write_str(":-"),
            TokenKind::Eq => f.write_str("="),
            TokenKind::Neq => f.write_str("!="),
            TokenKind::Lt => f.write_str("<"),
            TokenKind::Le => f.write_str("<="),
            TokenKind::Gt => f.write_str(">"),
            TokenKind::Ge => f.write_str(">="),
            TokenKind::Plus => f.write_str("+"),
            TokenKind::Minus => f.write_str("-"),
            TokenKind::Star => f.write_str("*"),
            TokenKind::Slash => f.write_str("/"),
            TokenKind::Backslash => f.write_str("\\"),
            TokenKind::Bar => f.write_str("|"),
            TokenKind::At => f.write_str("@"),
        }
    }
}

/// Line and column, both 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Position,
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Position,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            chars: text.chars().peekable(),
            pos: Position { line: 1, column: 1 },
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    fn eat(&mut self, expected: char) -> bool {
        if self.peek() == Some(expected) {
            self.bump();
            true
        } else {
            false
        }
    }
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, SyntaxError> {
    let mut cursor = Cursor::new(text);
    let mut tokens: Vec<Token> = Vec::new();

    while let Some(c) = cursor.peek() {
        let pos = cursor.pos;
        if c.is_whitespace() {
            cursor.bump();
            continue;
        }
        if c == '%' {
            cursor.bump();
            if cursor.eat('*') {
                let mut closed = false;
                while let Some(c) = cursor.bump() {
                    if c == '*' && cursor.eat('%') {
                        closed = true;
                        break;
                    }
                }
                if !closed {
                    return Err(SyntaxError::lex(pos, "unterminated block comment"));
                }
            } else {
                while let Some(c) = cursor.peek() {
                    if c == '\n' {
                        break;
                    }
                    cursor.bump();
                }
            }
            continue;
        }

        let kind = if c.is_ascii_alphabetic() || c == '_' {
            let mut word = String::new();
            while let Some(c) = cursor.peek().filter(|c| is_ident_continue(*c)) {
                word.push(c);
                cursor.bump();
            }
            if word == "_" || word.starts_with(|c: char| c.is_ascii_uppercase()) {
                TokenKind::Variable(word)
            } else {
                TokenKind::Ident(word)
            }
        } else if c.is_ascii_digit() {
            TokenKind::Integer(lex_integer(&mut cursor, pos, false)?)
        } else if c == '"' {
            cursor.bump();
            let mut s = String::new();
            loop {
                match cursor.bump() {
                    None | Some('\n') => {
                        return Err(SyntaxError::lex(pos, "unterminated string"));
                    }
                    Some('"') => break,
                    Some('\\') => {
                        s.push('\\');
                        match cursor.bump() {
                            Some('\n') | None => {
                                return Err(SyntaxError::lex(pos, "unterminated string"));
                            }
                            Some(e) => s.push(e),
                        }
                    }
                    Some(c) => s.push(c),
                }
            }
            TokenKind::Str(s)
        } else if c == '#' {
            cursor.bump();
            let mut word = String::new();
            while let Some(c) = cursor.peek().filter(|c| is_ident_continue(*c)) {
                word.push(c);
                cursor.bump();
            }
            if word.is_empty() {
                return Err(SyntaxError::lex(pos, "expected a keyword after `#`"));
            }
            TokenKind::Hash(word)
        } else {
            cursor.bump();
            match c {
                '(' => TokenKind::LParen,
                ')' => TokenKind::RParen,
                '{' => TokenKind::LBrace,
                '}' => TokenKind::RBrace,
                ',' => TokenKind::Comma,
                ';' => TokenKind::Semicolon,
                ':' => {
                    if cursor.eat('-') {
                        TokenKind::If
                    } else {
                        TokenKind::Colon
                    }
                }
                '←' => TokenKind::If,
                '.' => {
                    if cursor.eat('.') {
                        TokenKind::DotDot
                    } else {
                        TokenKind::Dot
                    }
                }
                '=' => {
                    cursor.eat('=');
                    TokenKind::Eq
                }
                '!' => {
                    if cursor.eat('=') {
                        TokenKind::Neq
                    } else {
                        return Err(SyntaxError::lex(pos, "illegal character `!`"));
                    }
                }
                '<' => {
                    if cursor.eat('=') {
                        TokenKind::Le
                    } else if cursor.eat('>') {
                        TokenKind::Neq
                    } else {
                        TokenKind::Lt
                    }
                }
                '>' => {
                    if cursor.eat('=') {
                        TokenKind::Ge
                    } else {
                        TokenKind::Gt
                    }
                }
                '+' => TokenKind::Plus,
                '-' => {
                    let signed = cursor.peek().is_some_and(|c| c.is_ascii_digit())
                        && !tokens.last().is_some_and(|t| t.kind.ends_term());
                    if signed {
                        TokenKind::Integer(lex_integer(&mut cursor, pos, true)?)
                    } else {
                        TokenKind::Minus
                    }
                }
                '*' => TokenKind::Star,
                '/' => TokenKind::Slash,
                '\\' => TokenKind::Backslash,
                '|' => TokenKind::Bar,
                '@' => TokenKind::At,
                other => {
                    return Err(SyntaxError::lex(
                        pos,
                        format!("illegal character `{other}`"),
                    ));
                }
            }
        };
        tokens.push(Token { kind, pos });
    }
    Ok(tokens)
}

fn lex_integer(cursor: &mut Cursor<'_>, pos: Position, negative: bool) -> Result<i64, SyntaxError> {
    let mut digits = String::new();
    if negative {
        digits.push('-');
    }
    while let Some(c) = cursor.peek().filter(|c| c.is_ascii_digit()) {
        digits.push(c);
        cursor.bump();
    }
    digits
        .parse()
        .map_err(|_| SyntaxError::lex(pos, format!("integer `{digits}` out of range")))
}
