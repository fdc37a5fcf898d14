//! Recursive-descent parser.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' unary)?
//! atom  := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'
//! ```
//!
//! `^` is right-associative and binds tighter than a leading minus, so
//! `-r^2` reads as `-(r^2)` and `2^-1` is accepted.

use thiserror::Error;

use super::lexer::{tokenize, LexError, Token, TokenKind};
use super::{BinOp, Expr, Func};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("lex error: {0}")]
    Lex(#[from] LexError),
    #[error("parse error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("function `{name}` at position {pos} takes exactly one argument")]
    Arity { name: String, pos: usize },
}

pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        idx: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(ParseError::Syntax {
            pos: tok.pos,
            message: format!("unexpected trailing {}", describe(&tok.kind)),
        });
    }
    Ok(e)
}

struct Parser {
    tokens: Vec<Token>,
    idx: usize,
    end: usize,
}

fn describe(kind: &TokenKind) -> String {
    match kind {
        TokenKind::Number(v) => format!("number {v}"),
        TokenKind::Ident(s) => format!("identifier `{s}`"),
        TokenKind::Plus => "`+`".into(),
        TokenKind::Minus => "`-`".into(),
        TokenKind::Star => "`*`".into(),
        TokenKind::Slash => "`/`".into(),
        TokenKind::Caret => "`^`".into(),
        TokenKind::LParen => "`(`".into(),
        TokenKind::RParen => "`)`".into(),
        TokenKind::Comma => "`,`".into(),
    }
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx)
    }

    fn peek_kind(&self) -> Option<&TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    fn pos(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).cloned();
        self.idx += 1;
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            message: message.into(),
        })
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<(), ParseError> {
        if self.peek_kind() == Some(&kind) {
            self.idx += 1;
            Ok(())
        } else {
            match self.peek() {
                Some(t) => self.error(format!("expected {what}, found {}", describe(&t.kind))),
                None => self.error(format!("expected {what}, found end of input")),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Plus) => BinOp::Add,
                Some(TokenKind::Minus) => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.idx += 1;
            let rhs = self.term()?;
            lhs = Expr::raw_binary(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek_kind() {
                Some(TokenKind::Star) => BinOp::Mul,
                Some(TokenKind::Slash) => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.idx += 1;
            let rhs = self.unary()?;
            lhs = Expr::raw_binary(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_kind() == Some(&TokenKind::Minus) {
            self.idx += 1;
            return Ok(Expr::raw_neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek_kind() == Some(&TokenKind::Caret) {
            self.idx += 1;
            let exponent = self.unary()?;
            return Ok(Expr::raw_binary(BinOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let Some(tok) = self.bump() else {
            return self.error("unexpected end of input");
        };
        match tok.kind {
            TokenKind::Number(v) => Ok(Expr::constant(v)),
            TokenKind::Ident(name) => match Func::from_name(&name) {
                Some(func) => self.call(func, name, tok.pos),
                None => Ok(Expr::symbol(&name)),
            },
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(ParseError::Syntax {
                pos: tok.pos,
                message: format!("unexpected {}", describe(&other)),
            }),
        }
    }

    fn call(&mut self, func: Func, name: String, pos: usize) -> Result<Expr, ParseError> {
        if self.peek_kind() != Some(&TokenKind::LParen) {
            return Err(ParseError::Arity { name, pos });
        }
        self.idx += 1;
        if self.peek_kind() == Some(&TokenKind::RParen) {
            return Err(ParseError::Arity { name, pos });
        }
        let arg = self.expr()?;
        if self.peek_kind() == Some(&TokenKind::Comma) {
            return Err(ParseError::Arity { name, pos });
        }
        self.expect(TokenKind::RParen, "`)`")?;
        Ok(Expr::raw_func(func, arg))
    }
}
