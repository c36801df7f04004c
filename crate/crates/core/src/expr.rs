//! Minimal expression language for scalar functions of one variable `t`.
//!
//! The grammar is standard infix arithmetic over real literals, the
//! variable `t`, the unary functions `abs`, `ln`, `exp`, `sqrt`, `sign`,
//! unary minus, the binary operators `+ - * / ^` and the two-argument
//! functions `min(a,b)` / `max(a,b)`. `^` binds tightest and is
//! right-associative; unary minus binds looser than `^`, so `-t^2`
//! parses as `-(t^2)`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use crate::math;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Abs,
    Ln,
    Exp,
    Sqrt,
    Sign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Min,
    Max,
}

/// Abstract syntax tree of an expression in the variable `t`.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    Var,
    Unary(UnaryOp, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ParseError {
    /// Invalid input at `offset` (bytes); `expected` hints at the token class.
    Syntax { offset: usize, expected: &'static str },
    /// A name outside the grammar (`t`, `abs`, `ln`, `exp`, `sqrt`, `sign`, `min`, `max`).
    UnknownIdentifier { offset: usize, name: String },
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { offset, expected } => {
                write!(f, "syntax error at offset {offset}: expected {expected}")
            }
            ParseError::UnknownIdentifier { offset, name } => {
                write!(f, "unknown identifier `{name}` at offset {offset}")
            }
        }
    }
}

impl core::error::Error for ParseError {}

/// Evaluation failure at a concrete point, with the offending
/// subexpression pretty-printed.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainError {
    pub what: &'static str,
    pub subexpr: String,
    pub t: f64,
}

impl fmt::Display for DomainError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "domain error at t = {}: {} in `{}`",
            self.t, self.what, self.subexpr
        )
    }
}

impl core::error::Error for DomainError {}

// --- parser ---------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let e = p.parse_sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(ParseError::Syntax {
            offset: p.pos,
            expected: "end of input or operator",
        });
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_product()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.parse_product()?;
                    lhs = Expr::Binary(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.parse_product()?;
                    lhs = Expr::Binary(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Binary(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    lhs = Expr::Binary(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // Unary minus sits between `*` and `^` in binding strength.
    fn parse_unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.parse_unary()?;
            return Ok(Expr::Unary(UnaryOp::Neg, Box::new(inner)));
        }
        self.parse_power()
    }

    fn parse_power(&mut self) -> Result<Expr, ParseError> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            // Right-associative; the exponent may carry a unary minus.
            let exp = self.parse_unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn parse_atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.parse_sum()?;
                self.expect(b')', "`)`")?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.parse_number(),
            Some(c) if c.is_ascii_alphabetic() => self.parse_ident(),
            _ => Err(ParseError::Syntax {
                offset: self.pos,
                expected: "number, `t`, function or `(`",
            }),
        }
    }

    fn expect(&mut self, c: u8, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax {
                offset: self.pos,
                expected: what,
            })
        }
    }

    fn parse_number(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos == start || (self.pos == start + 1 && self.src[start] == b'.') {
            return Err(ParseError::Syntax {
                offset: start,
                expected: "number",
            });
        }
        if self.pos < self.src.len() && (self.src[self.pos] | 0x20) == b'e' {
            let mark = self.pos;
            self.pos += 1;
            if self.pos < self.src.len() && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            let digits = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if self.pos == digits {
                // Not an exponent after all (e.g. `2e` would be invalid anyway,
                // but `2exp(t)` is not a thing in this grammar either).
                self.pos = mark;
            }
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) => Ok(Expr::Num(v)),
            Err(_) => Err(ParseError::Syntax {
                offset: start,
                expected: "number",
            }),
        }
    }

    fn parse_ident(&mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match name {
            "t" => Ok(Expr::Var),
            "abs" | "ln" | "exp" | "sqrt" | "sign" => {
                let op = match name {
                    "abs" => UnaryOp::Abs,
                    "ln" => UnaryOp::Ln,
                    "exp" => UnaryOp::Exp,
                    "sqrt" => UnaryOp::Sqrt,
                    _ => UnaryOp::Sign,
                };
                self.expect(b'(', "`(`")?;
                let arg = self.parse_sum()?;
                self.expect(b')', "`)`")?;
                Ok(Expr::Unary(op, Box::new(arg)))
            }
            "min" | "max" => {
                let op = if name == "min" { BinOp::Min } else { BinOp::Max };
                self.expect(b'(', "`(`")?;
                let a = self.parse_sum()?;
                self.expect(b',', "`,`")?;
                let b = self.parse_sum()?;
                self.expect(b')', "`)`")?;
                Ok(Expr::Binary(op, Box::new(a), Box::new(b)))
            }
            _ => Err(ParseError::UnknownIdentifier {
                offset: start,
                name: name.to_string(),
            }),
        }
    }
}

// --- printing -------------------------------------------------------------

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            // A negative literal prints with a leading sign, so it binds
            // like a product for parenthesization purposes.
            Expr::Num(v) if v.is_sign_negative() => 2,
            Expr::Num(_) | Expr::Var => 5,
            Expr::Unary(UnaryOp::Neg, _) => 3,
            Expr::Unary(..) => 5, // function call syntax
            Expr::Binary(BinOp::Pow, ..) => 4,
            Expr::Binary(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Binary(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Binary(BinOp::Min | BinOp::Max, ..) => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let prec = self.precedence();
        let parens = prec < min_prec;
        if parens {
            write!(f, "(")?;
        }
        match self {
            Expr::Num(v) => write!(f, "{v}")?,
            Expr::Var => write!(f, "t")?,
            Expr::Unary(UnaryOp::Neg, a) => {
                write!(f, "-")?;
                a.fmt_prec(f, 3)?;
            }
            Expr::Unary(op, a) => {
                let name = match op {
                    UnaryOp::Abs => "abs",
                    UnaryOp::Ln => "ln",
                    UnaryOp::Exp => "exp",
                    UnaryOp::Sqrt => "sqrt",
                    UnaryOp::Sign => "sign",
                    UnaryOp::Neg => unreachable!(),
                };
                write!(f, "{name}(")?;
                a.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            Expr::Binary(op @ (BinOp::Min | BinOp::Max), a, b) => {
                write!(f, "{}(", if *op == BinOp::Min { "min" } else { "max" })?;
                a.fmt_prec(f, 0)?;
                write!(f, ",")?;
                b.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            Expr::Binary(op, a, b) => {
                let (sym, lp, rp) = match op {
                    BinOp::Add => ("+", 1, 2),
                    // `a-b-c` is `(a-b)-c`; force parens on a right-hand sum.
                    BinOp::Sub => ("-", 1, 2),
                    BinOp::Mul => ("*", 2, 3),
                    BinOp::Div => ("/", 2, 3),
                    // Right-associative, left operand must be atomic.
                    BinOp::Pow => ("^", 5, 3),
                    BinOp::Min | BinOp::Max => unreachable!(),
                };
                a.fmt_prec(f, lp)?;
                write!(f, "{sym}")?;
                b.fmt_prec(f, rp)?;
            }
        }
        if parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

// --- evaluation -----------------------------------------------------------

/// IEEE-754 double evaluation at `t`; deterministic for fixed `(e, t)`.
pub fn eval_expr(e: &Expr, t: f64) -> Result<f64, DomainError> {
    let err = |what: &'static str, node: &Expr| DomainError {
        what,
        subexpr: format!("{node}"),
        t,
    };
    match e {
        Expr::Num(v) => Ok(*v),
        Expr::Var => Ok(t),
        Expr::Unary(op, a) => {
            let x = eval_expr(a, t)?;
            match op {
                UnaryOp::Neg => Ok(-x),
                UnaryOp::Abs => Ok(math::abs(x)),
                UnaryOp::Sign => Ok(math::sign(x)),
                UnaryOp::Exp => Ok(math::exp(x)),
                UnaryOp::Ln => {
                    if x <= 0.0 {
                        Err(err("ln of a non-positive value", e))
                    } else {
                        Ok(math::ln(x))
                    }
                }
                UnaryOp::Sqrt => {
                    if x < 0.0 {
                        Err(err("sqrt of a negative value", e))
                    } else {
                        Ok(math::sqrt(x))
                    }
                }
            }
        }
        Expr::Binary(op, a, b) => {
            let x = eval_expr(a, t)?;
            let y = eval_expr(b, t)?;
            match op {
                BinOp::Add => Ok(x + y),
                BinOp::Sub => Ok(x - y),
                BinOp::Mul => Ok(x * y),
                BinOp::Div => {
                    if y == 0.0 {
                        Err(err("division by zero", e))
                    } else {
                        Ok(x / y)
                    }
                }
                BinOp::Min => Ok(x.min(y)),
                BinOp::Max => Ok(x.max(y)),
                BinOp::Pow => {
                    // Non-integer exponent with a negative base is rejected;
                    // users write abs(t)^q*sign(t) explicitly.
                    if x < 0.0 && libm::floor(y) != y {
                        Err(err("negative base with non-integer exponent", e))
                    } else if x == 0.0 && y < 0.0 {
                        Err(err("zero base with negative exponent", e))
                    } else {
                        Ok(math::pow(x, y))
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_src(src: &str, t: f64) -> Result<f64, DomainError> {
        eval_expr(&parse_expr(src).unwrap(), t)
    }

    #[test]
    fn parses_abs_pow() {
        let e = parse_expr("abs(t)^2").unwrap();
        assert_eq!(
            e,
            Expr::Binary(
                BinOp::Pow,
                Box::new(Expr::Unary(UnaryOp::Abs, Box::new(Expr::Var))),
                Box::new(Expr::Num(2.0)),
            )
        );
    }

    #[test]
    fn parses_nested_pow() {
        let e = parse_expr("ln(1+abs(t))^2.5").unwrap();
        match e {
            Expr::Binary(BinOp::Pow, base, exp) => {
                assert!(matches!(*base, Expr::Unary(UnaryOp::Ln, _)));
                assert_eq!(*exp, Expr::Num(2.5));
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn incomplete_input_reports_offset() {
        match parse_expr("t +") {
            Err(ParseError::Syntax { offset: 3, .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        match parse_expr("cos(t)") {
            Err(ParseError::UnknownIdentifier { name, offset: 0 }) => assert_eq!(name, "cos"),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn eval_basics() {
        assert_eq!(eval_src("abs(t)^2", -3.0).unwrap(), 9.0);
        assert_eq!(eval_src("sign(t)", 0.0).unwrap(), 0.0);
        assert_eq!(eval_src("sign(t)", -2.0).unwrap(), -1.0);
        assert!(eval_src("ln(t)", -1.0).is_err());
        assert!(eval_src("sqrt(t)", -1.0).is_err());
        assert!(eval_src("1/t", 0.0).is_err());
    }

    #[test]
    fn precedence() {
        assert_eq!(eval_src("2+3*2", 0.0).unwrap(), 8.0);
        // Unary minus binds looser than `^`.
        assert_eq!(eval_src("-t^2", 1.0).unwrap(), -1.0);
        assert_eq!(eval_src("2^3^2", 0.0).unwrap(), 512.0);
        assert_eq!(eval_src("2^-1", 0.0).unwrap(), 0.5);
        assert_eq!(eval_src("min(3,max(t,1))", 2.0).unwrap(), 2.0);
    }

    #[test]
    fn negative_base_non_integer_exponent_rejected() {
        let e = parse_expr("t^2.5").unwrap();
        assert!(eval_expr(&e, -1.0).is_err());
        assert_eq!(eval_expr(&parse_expr("t^3").unwrap(), -2.0).unwrap(), -8.0);
    }

    #[test]
    fn scientific_literals() {
        assert_eq!(eval_src("1e-3", 0.0).unwrap(), 1e-3);
        assert_eq!(eval_src("2.5E2", 0.0).unwrap(), 250.0);
    }

    #[test]
    fn print_reparse_round_trip_examples() {
        for src in [
            "abs(t)^2",
            "-t^2",
            "(1+t)*(1-t)",
            "min(t,1)-max(t,-1)",
            "ln(1+abs(t))^2.5",
            "2^-t",
            "-(t+1)",
            "t/(1+t^2)",
            "1-(t-2)",
        ] {
            let ast = parse_expr(src).unwrap();
            let printed = alloc::format!("{ast}");
            let reparsed = parse_expr(&printed).unwrap();
            assert_eq!(ast, reparsed, "round trip failed for `{src}` -> `{printed}`");
        }
    }
}
