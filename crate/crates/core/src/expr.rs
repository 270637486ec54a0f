//! A small expression language over the reals: decimal literals, the
//! constants `pi`, `e`, `sqrt2`, the four operations, unary minus, and the
//! functions `sqrt`, `recip`, `glb` and `pair`.
//!
//! ```text
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | primary
//! primary := NUMBER | CONST | FUNC "(" expr ("," expr)* ")" | "(" expr ")"
//! ```
//!
//! Literals may be written in floor form, `(-8).765` meaning `-8 + 0.765`.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::arithmetic::{self, ArithError, Fuel};
use crate::computable::{constant, sqrt_rational};
use crate::constructions::{cantor_pair, glb_finite};
use crate::decimal_stream::{DecimalReal, DigitError};
use crate::exact_scaled::ScaledDecimal;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Const {
    Pi,
    E,
    Sqrt2,
}

impl Const {
    pub fn name(self) -> &'static str {
        match self {
            Const::Pi => "pi",
            Const::E => "e",
            Const::Sqrt2 => "sqrt2",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnaryOp {
    Neg,
    Recip,
    Sqrt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinaryOp::Add | BinaryOp::Sub => 1,
            BinaryOp::Mul | BinaryOp::Div => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Glb,
    Pair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Number(ScaledDecimal),
    Const(Const),
    Unary(UnaryOp, Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
    Paren(Box<Expr>),
}

impl Expr {
    pub fn number(s: &str) -> Expr {
        Expr::Number(s.parse().expect("valid decimal literal"))
    }

    pub fn unary(op: UnaryOp, e: Expr) -> Expr {
        Expr::Unary(op, Box::new(e))
    }

    pub fn binary(op: BinaryOp, a: Expr, b: Expr) -> Expr {
        Expr::Binary(op, Box::new(a), Box::new(b))
    }

    /// The expression without grouping nodes.
    pub fn strip_parens(&self) -> Expr {
        match self {
            Expr::Paren(e) => e.strip_parens(),
            Expr::Unary(op, e) => Expr::unary(*op, e.strip_parens()),
            Expr::Binary(op, a, b) => Expr::binary(*op, a.strip_parens(), b.strip_parens()),
            Expr::Call(f, args) => Expr::Call(*f, args.iter().map(Expr::strip_parens).collect()),
            other => other.clone(),
        }
    }

    /// Binding strength when printed: 1 for sums, 2 for products, 3 for
    /// prefix minus, 4 for atoms.
    fn precedence(&self) -> u8 {
        match self {
            Expr::Binary(op, ..) => op.precedence(),
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Number(n) if n.is_negative() && n.scale() == 0 => 3,
            _ => 4,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(n) => write!(f, "{n}"),
            Expr::Const(c) => f.write_str(c.name()),
            Expr::Unary(UnaryOp::Neg, e) => {
                f.write_str("-")?;
                // "-3.7" and "--3" would read back as literals
                if matches!(**e, Expr::Number(_) | Expr::Unary(UnaryOp::Neg, _)) {
                    write!(f, "({e})")
                } else {
                    write_operand(f, e, 3)
                }
            }
            Expr::Unary(UnaryOp::Recip, e) => write!(f, "recip({e})"),
            Expr::Unary(UnaryOp::Sqrt, e) => write!(f, "sqrt({e})"),
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                write_operand(f, a, p)?;
                write!(f, " {} ", op.symbol())?;
                write_operand(f, b, p + 1)
            }
            Expr::Call(func, args) => {
                f.write_str(match func {
                    Func::Glb => "glb",
                    Func::Pair => "pair",
                })?;
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Expr::Paren(e) => write!(f, "({e})"),
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("syntax error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Number(ScaledDecimal),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(n) => format!("number {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const OPERAND: [&str; 5] = ["number", "constant", "function", "'('", "'-'"];

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let digits_from = |mut j: usize| {
        while j < bytes.len() && bytes[j].is_ascii_digit() {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b'(' => {
                // floor-form literal "(-8).765"
                let mut j = i + 1;
                if j < bytes.len() && bytes[j] == b'-' {
                    j += 1;
                }
                let int_end = digits_from(j);
                let frac_end = digits_from(int_end + 2);
                let floor_form = int_end > j
                    && bytes.get(int_end) == Some(&b')')
                    && bytes.get(int_end + 1) == Some(&b'.')
                    && frac_end > int_end + 2;
                if floor_form {
                    i = frac_end;
                    out.push((start, Tok::Number(literal(input, start, frac_end)?)));
                    continue;
                }
                Tok::LParen
            }
            b'0'..=b'9' | b'.' => {
                let mut j = digits_from(i);
                if bytes.get(j) == Some(&b'.') {
                    j = digits_from(j + 1);
                }
                i = j;
                out.push((start, Tok::Number(literal(input, start, j)?)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                i = j;
                out.push((start, Tok::Ident(input[start..j].to_string())));
                continue;
            }
            _ => {
                let ch = input[i..].chars().next().expect("in bounds");
                return Err(ParseError {
                    offset: i,
                    expected: vec!["number", "identifier", "operator", "'('", "')'", "','"],
                    found: format!("'{ch}'"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((input.len(), Tok::End));
    Ok(out)
}

fn literal(input: &str, start: usize, end: usize) -> Result<ScaledDecimal, ParseError> {
    input[start..end].parse().map_err(|_| ParseError {
        offset: start,
        expected: vec!["number"],
        found: format!("'{}'", &input[start..end]),
    })
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError { offset: self.offset(), expected: expected.to_vec(), found: self.peek().describe() }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            lhs = Expr::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() != Tok::Minus {
            return self.primary();
        }
        self.bump();
        if let Tok::Number(n) = self.peek() {
            // "-2.443" is a literal
            let n = n.neg();
            self.bump();
            return Ok(Expr::Number(n));
        }
        Ok(Expr::unary(UnaryOp::Neg, self.unary()?))
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.bump() {
            Tok::Number(n) => Ok(Expr::Number(n)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Expr::Paren(Box::new(e)))
            }
            Tok::Ident(name) => self.named(at, &name),
            _ => {
                self.pos -= 1;
                Err(self.error(&OPERAND))
            }
        }
    }

    fn named(&mut self, at: usize, name: &str) -> Result<Expr, ParseError> {
        let constant = match name {
            "pi" => Some(Const::Pi),
            "e" => Some(Const::E),
            "sqrt2" => Some(Const::Sqrt2),
            _ => None,
        };
        if let Some(c) = constant {
            return Ok(Expr::Const(c));
        }
        let arity = match name {
            "sqrt" | "recip" => 1..=1,
            "pair" => 2..=2,
            "glb" => 1..=usize::MAX,
            _ => {
                return Err(ParseError {
                    offset: at,
                    expected: vec!["pi", "e", "sqrt2", "sqrt", "recip", "glb", "pair"],
                    found: format!("'{name}'"),
                })
            }
        };
        self.expect(Tok::LParen, "'('")?;
        let mut args = vec![self.expr()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.expr()?);
        }
        if !arity.contains(&args.len()) {
            let expected: &'static str = if args.len() < *arity.start() { "','" } else { "')'" };
            return Err(self.error(&[expected]));
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(match name {
            "sqrt" => Expr::unary(UnaryOp::Sqrt, args.pop().expect("one argument")),
            "recip" => Expr::unary(UnaryOp::Recip, args.pop().expect("one argument")),
            "pair" => Expr::Call(Func::Pair, args),
            _ => Expr::Call(Func::Glb, args),
        })
    }
}

pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(input)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["operator", "end of input"]));
    }
    Ok(e)
}

/// The value of an expression. `sqrt` accepts exact non-negative operands
/// only.
pub fn evaluate(e: &Expr, fuel: Fuel) -> Result<DecimalReal, ArithError> {
    Ok(match e {
        Expr::Number(n) => DecimalReal::from_scaled(n.clone()),
        Expr::Const(c) => constant(c.name()).expect("known constant"),
        Expr::Paren(inner) => evaluate(inner, fuel)?,
        Expr::Unary(op, inner) => {
            let x = evaluate(inner, fuel)?;
            match op {
                UnaryOp::Neg => arithmetic::negate(&x, fuel),
                UnaryOp::Recip => arithmetic::reciprocal(&x, fuel)?,
                UnaryOp::Sqrt => sqrt_exact(&x)?,
            }
        }
        Expr::Binary(op, a, b) => {
            let (x, y) = (evaluate(a, fuel)?, evaluate(b, fuel)?);
            match op {
                BinaryOp::Add => arithmetic::add(&x, &y, fuel),
                BinaryOp::Sub => arithmetic::sub(&x, &y, fuel),
                BinaryOp::Mul => arithmetic::mul(&x, &y, fuel),
                BinaryOp::Div => arithmetic::div(&x, &y, fuel)?,
            }
        }
        Expr::Call(Func::Glb, args) => {
            let xs = args.iter().map(|a| evaluate(a, fuel)).collect::<Result<Vec<_>, _>>()?;
            glb_finite(&xs)?
        }
        Expr::Call(Func::Pair, args) => cantor_pair(&evaluate(&args[0], fuel)?, &evaluate(&args[1], fuel)?),
    })
}

fn sqrt_exact(x: &DecimalReal) -> Result<DecimalReal, ArithError> {
    let r: BigRational = x
        .exact_value()
        .ok_or_else(|| ArithError::Domain("sqrt needs an exact operand".into()))?;
    if r.is_negative() {
        return Err(ArithError::Domain(format!("sqrt of negative {r}")));
    }
    sqrt_rational(&r).map_err(|e| match e {
        DigitError::Domain(m) => ArithError::Domain(m),
        other => ArithError::Digit(other),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_expr("pi + sqrt(2)").unwrap(),
            Expr::binary(BinaryOp::Add, Expr::Const(Const::Pi), Expr::unary(UnaryOp::Sqrt, Expr::number("2")))
        );
        assert_eq!(
            parse_expr("glb(1/3, 0.333, 0.3334)").unwrap(),
            Expr::Call(
                Func::Glb,
                vec![
                    Expr::binary(BinaryOp::Div, Expr::number("1"), Expr::number("3")),
                    Expr::number("0.333"),
                    Expr::number("0.3334"),
                ]
            )
        );
        let err = parse_expr("1 + * 2").unwrap_err();
        assert_eq!(err.offset, 4);
        assert!(err.expected.contains(&"number"));
    }

    #[test]
    fn literals() {
        assert_eq!(parse_expr("(-8).765").unwrap(), Expr::number("-7.235"));
        assert_eq!(parse_expr("-2.443").unwrap(), Expr::number("(-3).557"));
        assert_eq!(parse_expr(".5").unwrap(), Expr::number("0.5"));
        assert_eq!(
            parse_expr("(-8) * 2").unwrap(),
            Expr::binary(BinaryOp::Mul, Expr::Paren(Box::new(Expr::number("-8"))), Expr::number("2"))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("1 - 2 - 3 * 4 / 5").unwrap();
        assert_eq!(e.to_string(), "1 - 2 - 3 * 4 / 5");
        let Expr::Binary(BinaryOp::Sub, lhs, rhs) = e else { panic!() };
        assert!(matches!(*lhs, Expr::Binary(BinaryOp::Sub, ..)));
        assert!(matches!(*rhs, Expr::Binary(BinaryOp::Div, ..)));
        assert!(matches!(parse_expr("-pi * 2").unwrap(), Expr::Binary(BinaryOp::Mul, ..)));
    }

    #[test]
    fn render_inserts_needed_parens() {
        let e = Expr::binary(
            BinaryOp::Mul,
            Expr::binary(BinaryOp::Add, Expr::number("1"), Expr::number("2")),
            Expr::binary(BinaryOp::Sub, Expr::number("3"), Expr::number("4")),
        );
        assert_eq!(e.to_string(), "(1 + 2) * (3 - 4)");
        let e = Expr::binary(BinaryOp::Sub, Expr::number("1"), Expr::binary(BinaryOp::Sub, Expr::number("2"), Expr::number("3")));
        assert_eq!(e.to_string(), "1 - (2 - 3)");
        assert_eq!(Expr::unary(UnaryOp::Neg, Expr::number("-3")).to_string(), "-(-3)");
    }

    #[test]
    fn errors() {
        assert_eq!(parse_expr("tau").unwrap_err().offset, 0);
        assert_eq!(parse_expr("pair(1)").unwrap_err().expected, vec!["','"]);
        assert_eq!(parse_expr("(1 + 2").unwrap_err().offset, 6);
        assert_eq!(parse_expr("1 2").unwrap_err().offset, 2);
        assert_eq!(parse_expr("1 # 2").unwrap_err().offset, 2);
    }

    #[test]
    fn evaluates() {
        let f = Fuel::new(100);
        let v = |s: &str| evaluate(&parse_expr(s).unwrap(), f).unwrap();
        assert_eq!(v("(-8).765 + 5.678").as_terminating().unwrap().to_string(), "(-2).443");
        assert_eq!(v("1/3 + 2/3").to_decimal_string(5).unwrap(), "1.00000");
        assert_eq!(v("sqrt(2)").to_decimal_string(4).unwrap(), "1.4142");
        assert_eq!(v("glb(1/3, 0.333, 0.3334)").to_decimal_string(4).unwrap(), "0.3330");
        assert_eq!(v("pair(0.1, 0.2)").to_decimal_string(6).unwrap(), "0.120000");
        assert!(matches!(evaluate(&parse_expr("1/0").unwrap(), f), Err(ArithError::Domain(_))));
        assert!(matches!(evaluate(&parse_expr("sqrt(pi)").unwrap(), f), Err(ArithError::Domain(_))));
    }
}
