//! Recursive-descent parser for the expression DSL.
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := atom ['^' integer] | '-' factor
//! atom     := rational | ident | ident '(' expr ')' | '(' expr ')'
//! rational := integer ['/' positive-integer]
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::expr::{Expr, Func, Node};
use crate::chart::Chart;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("non-integer exponent at byte {offset}")]
    NonIntegerExponent { offset: usize },
    #[error("division by literal zero at byte {offset}")]
    ZeroDenominator { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::NonIntegerExponent { offset }
            | ParseError::ZeroDenominator { offset } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
    End,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'.' => Tok::Dot,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = &text[start..i];
                out.push((Tok::Int(digits.parse().expect("ascii digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    chart: &'a Chart,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Expr::raw(Node::Add(acc, rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = Expr::raw(Node::Add(acc, Expr::raw(Node::Neg(rhs))));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.leading_factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = Expr::raw(Node::Mul(acc, rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let at = self.offset();
                    let rhs = self.factor()?;
                    if matches!(rhs.node(), Node::Const(c) if c.is_zero()) {
                        return Err(ParseError::ZeroDenominator { offset: at });
                    }
                    acc = Expr::raw(Node::Div(acc, rhs));
                }
                Tok::Ident(_) | Tok::Int(_) | Tok::LParen => {
                    return self.syntax("implicit multiplication is not allowed");
                }
                _ => return Ok(acc),
            }
        }
    }

    /// A factor that may be a rational literal `n/d`.
    fn leading_factor(&mut self) -> Result<Expr, ParseError> {
        if let (Tok::Int(n), Tok::Slash, Tok::Int(d)) = (
            self.peek().clone(),
            self.toks
                .get(self.pos + 1)
                .map(|t| t.0.clone())
                .unwrap_or(Tok::End),
            self.toks
                .get(self.pos + 2)
                .map(|t| t.0.clone())
                .unwrap_or(Tok::End),
        ) {
            let after = self.toks.get(self.pos + 3).map(|t| &t.0);
            if !matches!(after, Some(Tok::Caret)) {
                let den_offset = self.toks[self.pos + 2].1;
                if d.is_zero() {
                    return Err(ParseError::ZeroDenominator { offset: den_offset });
                }
                self.pos += 3;
                return Ok(Expr::raw(Node::Const(BigRational::new(n, d))));
            }
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if let Tok::Minus = self.peek() {
            self.bump();
            let inner = self.factor()?;
            return Ok(Expr::raw(Node::Neg(inner)));
        }
        let base = self.atom()?;
        if let Tok::Caret = self.peek() {
            self.bump();
            let exp = self.exponent()?;
            return Ok(Expr::raw(Node::IntPow(base, exp)));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ParseError> {
        let at = self.offset();
        let negative = if let Tok::Minus = self.peek() {
            self.bump();
            true
        } else {
            false
        };
        match self.bump() {
            (Tok::Int(n), _) => {
                if let Tok::Dot | Tok::Slash = self.peek() {
                    if matches!(self.peek(), Tok::Dot) {
                        return Err(ParseError::NonIntegerExponent { offset: at });
                    }
                }
                let v: i64 = n.try_into().map_err(|_| ParseError::Syntax {
                    offset: at,
                    message: "exponent out of range".into(),
                })?;
                Ok(if negative { -v } else { v })
            }
            _ => Err(ParseError::NonIntegerExponent { offset: at }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Int(n) => Ok(Expr::raw(Node::Const(BigRational::from_integer(n)))),
            Tok::Ident(name) => {
                if let Tok::LParen = self.peek() {
                    let func = Func::from_name(&name).ok_or(ParseError::UnknownIdentifier {
                        name: name.clone(),
                        offset: at,
                    })?;
                    self.bump();
                    let arg = self.expr()?;
                    self.expect_rparen()?;
                    return Ok(Expr::raw(Node::Func(func, arg)));
                }
                match self.chart.index_of(&name) {
                    Some(i) => Ok(Expr::raw(Node::Coord(i))),
                    None => Err(ParseError::UnknownIdentifier { name, offset: at }),
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            Tok::End => Err(ParseError::Syntax {
                offset: at,
                message: "unexpected end of input".into(),
            }),
            other => Err(ParseError::Syntax {
                offset: at,
                message: format!("unexpected token {other:?}"),
            }),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            _ => self.syntax("expected `)`"),
        }
    }
}

/// Parses DSL text into an (unnormalized) syntax tree over `chart`.
pub fn parse_expr(text: &str, chart: &Chart) -> Result<Expr, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        chart,
    };
    let e = parser.expr()?;
    match parser.peek() {
        Tok::End => Ok(e),
        Tok::RParen => parser.syntax("unbalanced `)`"),
        Tok::Dot => parser.syntax("decimal literals are not allowed"),
        _ => parser.syntax("unexpected trailing input"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::ExactPoint;

    fn chart() -> Chart {
        Chart::new(["q", "p", "z"]).unwrap()
    }

    #[test]
    fn constant_and_negation() {
        let c = chart();
        assert_eq!(parse_expr("1", &c).unwrap().node(), &Node::Const(int(1)));
        assert_eq!(
            parse_expr("-p", &c).unwrap().node(),
            &Node::Neg(Expr::raw(Node::Coord(1)))
        );
    }

    #[test]
    fn negative_power() {
        let c = chart();
        let e = parse_expr("(1 - p)^-1", &c).unwrap();
        let expected = Expr::raw(Node::IntPow(
            Expr::raw(Node::Add(
                Expr::raw(Node::Const(int(1))),
                Expr::raw(Node::Neg(Expr::raw(Node::Coord(1)))),
            )),
            -1,
        ));
        assert_eq!(e, expected);
        let at = ExactPoint::new(vec![int(0), rat(1, 2), int(0)]);
        assert_eq!(e.eval(at.coords()).unwrap(), int(2));
    }

    #[test]
    fn rational_literals_and_precedence() {
        let c = chart();
        let e = parse_expr("1/2*q + 3*p^2 - z/4", &c).unwrap();
        let v = e.eval(&[int(2), int(1), int(8)]).unwrap();
        assert_eq!(v, int(2));
        assert_eq!(
            parse_expr("2/3", &c).unwrap().node(),
            &Node::Const(rat(2, 3))
        );
        assert_eq!(
            parse_expr("-2^2", &c)
                .unwrap()
                .eval::<num_rational::BigRational>(&[])
                .unwrap(),
            int(-4)
        );
    }

    #[test]
    fn functions() {
        let c = chart();
        let e = parse_expr("sin(q) * exp(p - z)", &c).unwrap();
        let v: f64 = e.eval(&[0.5, 1.0, 1.0]).unwrap();
        assert!((v - 0.5f64.sin()).abs() < 1e-15);
    }

    #[test]
    fn errors_carry_offsets() {
        let c = chart();
        assert_eq!(
            parse_expr("q + w", &c),
            Err(ParseError::UnknownIdentifier {
                name: "w".into(),
                offset: 4
            })
        );
        assert_eq!(
            parse_expr("p^q", &c),
            Err(ParseError::NonIntegerExponent { offset: 2 })
        );
        assert_eq!(
            parse_expr("p^1.5", &c),
            Err(ParseError::NonIntegerExponent { offset: 2 })
        );
        assert!(matches!(
            parse_expr("2q", &c),
            Err(ParseError::Syntax { offset: 1, .. })
        ));
        assert!(matches!(
            parse_expr("(q + p", &c),
            Err(ParseError::Syntax { offset: 6, .. })
        ));
        assert!(matches!(
            parse_expr("q/0", &c),
            Err(ParseError::ZeroDenominator { offset: 2 })
        ));
        assert!(matches!(
            parse_expr("tan(q)", &c),
            Err(ParseError::UnknownIdentifier { .. })
        ));
    }
}
