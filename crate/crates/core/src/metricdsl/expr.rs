//! Scalar expressions over chart coordinates and named parameters.
//!
//! Grammar, lowest to highest precedence:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' unary)?          right-associative
//! atom  := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```
//!
//! `-x^2` therefore means `-(x^2)` and `2^-1` is accepted.

use std::fmt;

use crate::error::{EvalError, JetError, ParseError};
use crate::jet::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Tanh,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

const UNARY_PRECEDENCE: u8 = 3;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Ident(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

/// Identifiers that are always bound.
pub const BUILTIN_CONSTANTS: [(&str, f64); 1] = [("pi", std::f64::consts::PI)];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(src: &'a str) -> Result<Vec<(usize, Tok)>, ParseError> {
        let mut lx = Lexer { src, pos: 0 };
        let mut out = Vec::new();
        while let Some(t) = lx.next_token()? {
            out.push(t);
        }
        Ok(out)
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, ParseError> {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        let start = self.pos;
        let Some(c) = self.peek() else {
            return Ok(None);
        };
        let tok = match c {
            '+' | '-' | '*' | '/' | '^' => {
                self.pos += 1;
                Tok::Op(c)
            }
            '(' => {
                self.pos += 1;
                Tok::LParen
            }
            ')' => {
                self.pos += 1;
                Tok::RParen
            }
            ',' => {
                self.pos += 1;
                Tok::Comma
            }
            c if c.is_ascii_digit() || c == '.' => self.number()?,
            c if c.is_ascii_alphabetic() || c == '_' => {
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Tok::Ident(self.src[start..self.pos].to_string())
            }
            other => {
                return Err(ParseError::Syntax {
                    offset: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        Ok(Some((start, tok)))
    }

    fn number(&mut self) -> Result<Tok, ParseError> {
        let start = self.pos;
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        let mut pos = self.pos;
        let mut n = digits(&mut pos);
        if pos < bytes.len() && bytes[pos] == b'.' {
            pos += 1;
            n += digits(&mut pos);
        }
        if n == 0 {
            return Err(ParseError::Syntax {
                offset: start,
                message: "malformed number".into(),
            });
        }
        if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
            let mut p = pos + 1;
            if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                p += 1;
            }
            if digits(&mut p) == 0 {
                return Err(ParseError::Syntax {
                    offset: pos,
                    message: "malformed exponent".into(),
                });
            }
            pos = p;
        }
        self.pos = pos;
        let text = &self.src[start..pos];
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Tok::Num)
            .ok_or_else(|| ParseError::Syntax {
                offset: start,
                message: format!("number `{text}` out of range"),
            })
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    known: Option<&'a dyn Fn(&str) -> bool>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn syntax(&self, message: String) -> ParseError {
        ParseError::Syntax {
            offset: self.offset(),
            message,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let op = if *c == '+' { BinOp::Add } else { BinOp::Sub };
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek() {
            let op = if *c == '*' { BinOp::Mul } else { BinOp::Div };
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.pos += 1;
                Ok(Expr::Num(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    self.pos += 1;
                    let func =
                        Func::from_name(&name).ok_or_else(|| ParseError::UnknownIdentifier {
                            name: name.clone(),
                            offset,
                        })?;
                    let arg = self.expr()?;
                    let mut found = 1;
                    while self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                        self.expr()?;
                        found += 1;
                    }
                    self.expect(Tok::RParen, "`)`")?;
                    if found != 1 {
                        return Err(ParseError::Arity {
                            func: name,
                            found,
                            offset,
                        });
                    }
                    return Ok(Expr::Call(func, Box::new(arg)));
                }
                let builtin = BUILTIN_CONSTANTS.iter().any(|(n, _)| *n == name);
                if let Some(known) = self.known {
                    if !builtin && !known(&name) {
                        return Err(ParseError::UnknownIdentifier { name, offset });
                    }
                }
                Ok(Expr::Ident(name))
            }
            Some(_) => Err(self.syntax("expected a number, identifier or `(`".into())),
            None => Err(self.syntax("unexpected end of input".into())),
        }
    }
}

fn parse_with(text: &str, known: Option<&dyn Fn(&str) -> bool>) -> Result<Expr, ParseError> {
    let toks = Lexer::tokens(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
        known,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.syntax("unexpected trailing input".into()));
    }
    Ok(e)
}

/// Parse without restricting identifiers.
pub fn parse_expression(text: &str) -> Result<Expr, ParseError> {
    parse_with(text, None)
}

/// Parse, rejecting identifiers that are not coordinates, parameters or `pi`.
pub fn parse_expression_in(text: &str, names: &[&str]) -> Result<Expr, ParseError> {
    let known = |n: &str| names.contains(&n);
    parse_with(text, Some(&known))
}

impl Expr {
    /// Identifiers referenced anywhere in the tree, in first-occurrence order.
    pub fn identifiers(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_idents(&mut out);
        out
    }

    fn collect_idents<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Num(_) => {}
            Expr::Ident(n) => {
                if !out.contains(&n.as_str()) {
                    out.push(n);
                }
            }
            Expr::Neg(e) | Expr::Call(_, e) => e.collect_idents(out),
            Expr::Binary(_, a, b) => {
                a.collect_idents(out);
                b.collect_idents(out);
            }
        }
    }

    pub fn eval<T: ExprValue>(&self, env: &dyn Env<T>) -> Result<T, EvalError> {
        match self {
            Expr::Num(v) => Ok(env.constant(*v)),
            Expr::Ident(name) => env
                .lookup(name)
                .ok_or_else(|| EvalError::Unbound(name.clone())),
            Expr::Neg(e) => Ok(e.eval(env)?.neg_value()),
            Expr::Call(f, e) => Ok(e.eval(env)?.apply(*f)?),
            Expr::Binary(op, a, b) => {
                let a = a.eval(env)?;
                let b = b.eval(env)?;
                Ok(match op {
                    BinOp::Add => a.add_value(&b),
                    BinOp::Sub => a.sub_value(&b),
                    BinOp::Mul => a.mul_value(&b),
                    BinOp::Div => a.div_value(&b)?,
                    BinOp::Pow => a.pow_value(&b)?,
                })
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Num(_) | Expr::Ident(_) | Expr::Call(..) => 5,
            Expr::Neg(_) => UNARY_PRECEDENCE,
            Expr::Binary(op, ..) => op.precedence(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(e: &Expr, parens: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if parens {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Ident(n) => f.write_str(n),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
            Expr::Neg(e) => {
                f.write_str("-")?;
                wrap(e, e.precedence() < UNARY_PRECEDENCE, f)
            }
            Expr::Binary(BinOp::Pow, a, b) => {
                // base must be an atom; exponent parses as `unary`
                wrap(a, a.precedence() <= BinOp::Pow.precedence(), f)?;
                f.write_str("^")?;
                wrap(b, b.precedence() < UNARY_PRECEDENCE, f)
            }
            Expr::Binary(op, a, b) => {
                let p = op.precedence();
                wrap(a, a.precedence() < p, f)?;
                write!(f, " {} ", op.symbol())?;
                wrap(b, b.precedence() <= p, f)
            }
        }
    }
}

/// Variable bindings and constant construction for one evaluation.
pub trait Env<T> {
    fn lookup(&self, name: &str) -> Option<T>;
    fn constant(&self, value: f64) -> T;
}

/// Number types an [`Expr`] can be evaluated over.
///
/// Both implementations follow the same rules for `^`: an exponent with no
/// coordinate dependence and an integral value uses repeated multiplication
/// (any base); any other exponent requires a positive base.
pub trait ExprValue: Sized {
    fn value(&self) -> f64;
    fn is_constant(&self) -> bool;
    fn neg_value(&self) -> Self;
    fn add_value(&self, other: &Self) -> Self;
    fn sub_value(&self, other: &Self) -> Self;
    fn mul_value(&self, other: &Self) -> Self;
    fn div_value(&self, other: &Self) -> Result<Self, JetError>;
    fn powi_value(&self, n: i32) -> Result<Self, JetError>;
    fn powf_value(&self, p: f64) -> Result<Self, JetError>;
    fn ln_value(&self) -> Result<Self, JetError>;
    fn exp_value(&self) -> Result<Self, JetError>;
    fn apply(&self, f: Func) -> Result<Self, JetError>;

    fn pow_value(&self, exponent: &Self) -> Result<Self, JetError> {
        let e = exponent.value();
        if exponent.is_constant() {
            if e.fract() == 0.0 && e.abs() <= i32::MAX as f64 {
                return self.powi_value(e as i32);
            }
            return self.powf_value(e);
        }
        if self.value() <= 0.0 {
            return Err(JetError::Domain {
                func: "pow",
                value: self.value(),
            });
        }
        self.ln_value()?.mul_value(exponent).exp_value()
    }
}

fn finite(v: f64, func: &'static str, arg: f64) -> Result<f64, JetError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(JetError::Domain { func, value: arg })
    }
}

impl ExprValue for f64 {
    fn value(&self) -> f64 {
        *self
    }
    fn is_constant(&self) -> bool {
        true
    }
    fn neg_value(&self) -> Self {
        -self
    }
    fn add_value(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_value(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_value(&self, o: &Self) -> Self {
        self * o
    }
    fn div_value(&self, o: &Self) -> Result<Self, JetError> {
        if *o == 0.0 {
            Err(JetError::DivisionByZero)
        } else {
            Ok(self / o)
        }
    }
    fn powi_value(&self, n: i32) -> Result<Self, JetError> {
        if n < 0 && *self == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        finite(self.powi(n), "pow", *self)
    }
    fn powf_value(&self, p: f64) -> Result<Self, JetError> {
        if *self <= 0.0 {
            return Err(JetError::Domain {
                func: "pow",
                value: *self,
            });
        }
        finite(self.powf(p), "pow", *self)
    }
    fn ln_value(&self) -> Result<Self, JetError> {
        if *self <= 0.0 {
            return Err(JetError::Domain {
                func: "log",
                value: *self,
            });
        }
        Ok(self.ln())
    }
    fn exp_value(&self) -> Result<Self, JetError> {
        finite(self.exp(), "exp", *self)
    }
    fn apply(&self, f: Func) -> Result<Self, JetError> {
        let x = *self;
        match f {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => {
                if x.cos() == 0.0 {
                    Err(JetError::Domain {
                        func: "tan",
                        value: x,
                    })
                } else {
                    finite(x.tan(), "tan", x)
                }
            }
            Func::Exp => self.exp_value(),
            Func::Log => self.ln_value(),
            Func::Sqrt => {
                if x < 0.0 {
                    Err(JetError::Domain {
                        func: "sqrt",
                        value: x,
                    })
                } else {
                    Ok(x.sqrt())
                }
            }
            Func::Sinh => finite(x.sinh(), "sinh", x),
            Func::Cosh => finite(x.cosh(), "cosh", x),
            Func::Tanh => Ok(x.tanh()),
        }
    }
}

impl ExprValue for Jet {
    fn value(&self) -> f64 {
        Jet::value(self)
    }
    fn is_constant(&self) -> bool {
        Jet::is_constant(self)
    }
    fn neg_value(&self) -> Self {
        -self
    }
    fn add_value(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_value(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_value(&self, o: &Self) -> Self {
        self * o
    }
    fn div_value(&self, o: &Self) -> Result<Self, JetError> {
        self.checked_div(o)
    }
    fn powi_value(&self, n: i32) -> Result<Self, JetError> {
        let j = self.powi(n)?;
        finite(j.value(), "pow", Jet::value(self))?;
        Ok(j)
    }
    fn powf_value(&self, p: f64) -> Result<Self, JetError> {
        let j = self.powf(p)?;
        finite(j.value(), "pow", Jet::value(self))?;
        Ok(j)
    }
    fn ln_value(&self) -> Result<Self, JetError> {
        self.ln()
    }
    fn exp_value(&self) -> Result<Self, JetError> {
        let j = self.exp()?;
        finite(j.value(), "exp", Jet::value(self))?;
        Ok(j)
    }
    fn apply(&self, f: Func) -> Result<Self, JetError> {
        let j = match f {
            Func::Sin => self.sin(),
            Func::Cos => self.cos(),
            Func::Tan => self.tan()?,
            Func::Exp => self.exp()?,
            Func::Log => self.ln()?,
            Func::Sqrt => self.sqrt()?,
            Func::Sinh => self.sinh(),
            Func::Cosh => self.cosh(),
            Func::Tanh => self.tanh(),
        };
        if j.is_finite() {
            Ok(j)
        } else {
            Err(JetError::Domain {
                func: f.name(),
                value: Jet::value(self),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::JetSpace;
    use std::sync::Arc;

    struct RealEnv<'a>(&'a [(&'a str, f64)]);
    impl Env<f64> for RealEnv<'_> {
        fn lookup(&self, name: &str) -> Option<f64> {
            self.0.iter().find(|(n, _)| *n == name).map(|(_, v)| *v)
        }
        fn constant(&self, v: f64) -> f64 {
            v
        }
    }

    struct JetEnv {
        space: Arc<JetSpace>,
        x: f64,
    }
    impl Env<Jet> for JetEnv {
        fn lookup(&self, name: &str) -> Option<Jet> {
            (name == "x").then(|| self.space.variable(0, self.x))
        }
        fn constant(&self, v: f64) -> Jet {
            self.space.constant(v)
        }
    }

    #[test]
    fn power_of_function_call() {
        let e = parse_expression("sin(theta)^2").unwrap();
        assert_eq!(
            e,
            Expr::Binary(
                BinOp::Pow,
                Box::new(Expr::Call(Func::Sin, Box::new(Expr::Ident("theta".into())))),
                Box::new(Expr::Num(2.0))
            )
        );
    }

    #[test]
    fn unterminated_call_reports_end_offset() {
        let err = parse_expression("sin(").unwrap_err();
        assert!(
            matches!(err, ParseError::Syntax { offset: 4, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn precedence_and_associativity() {
        let v = |s: &str| parse_expression(s).unwrap().eval(&RealEnv(&[])).unwrap();
        assert_eq!(v("2^3^2"), 512.0);
        assert_eq!(v("-2^2"), -4.0);
        assert_eq!(v("2^-1"), 0.5);
        assert_eq!(v("1 - 2 - 3"), -4.0);
        assert_eq!(v("8 / 4 / 2"), 1.0);
        assert_eq!(v("1 + 2 * 3"), 7.0);
        assert_eq!(v("(1 + 2) * 3"), 9.0);
        assert_eq!(v("2 * -3"), -6.0);
        assert_eq!(v("1.5e1 + .5"), 15.5);
    }

    #[test]
    fn errors_are_structured() {
        assert!(matches!(
            parse_expression_in("x + y", &["x"]),
            Err(ParseError::UnknownIdentifier { offset: 4, .. })
        ));
        assert!(matches!(
            parse_expression("sin(x, y)"),
            Err(ParseError::Arity { found: 2, .. })
        ));
        assert!(matches!(
            parse_expression("foo(x)"),
            Err(ParseError::UnknownIdentifier { .. })
        ));
        assert!(matches!(
            parse_expression("1 +"),
            Err(ParseError::Syntax { offset: 3, .. })
        ));
        assert!(matches!(
            parse_expression("1 $ 2"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(parse_expression_in("pi * x", &["x"]).is_ok());
    }

    #[test]
    fn non_integer_power_needs_positive_base() {
        let env = RealEnv(&[("x", -2.0)]);
        assert!(parse_expression("x^0.5").unwrap().eval(&env).is_err());
        assert_eq!(parse_expression("x^3").unwrap().eval(&env).unwrap(), -8.0);
        assert!(parse_expression("log(x)").unwrap().eval(&env).is_err());
    }

    #[test]
    fn jet_evaluation_matches_central_differences() {
        // d/dx sin(x)^2 at π/4 by a central difference, independent of the jet path
        let e = parse_expression("sin(x)^2").unwrap();
        let x0 = std::f64::consts::FRAC_PI_4;
        let h = 1e-6;
        let f = |x: f64| e.eval(&RealEnv(&[("x", x)])).unwrap();
        let fd = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
        let j = e
            .eval(&JetEnv {
                space: JetSpace::new(1, 1),
                x: x0,
            })
            .unwrap();
        assert!((j.value() - 0.5).abs() < 1e-15);
        assert!((j.partial(&[0]) - 1.0).abs() < 1e-14);
        assert!((j.partial(&[0]) - fd).abs() < 1e-8);
    }

    #[test]
    fn display_reparses() {
        for s in [
            "-(a + b)",
            "(-a)^2",
            "a^b^c",
            "(a^b)^c",
            "a - (b - c)",
            "-a * b",
            "-(a * b)",
            "a^-b",
            "--a",
            "1e-7 * x / (y / z)",
            "sqrt(x)^(1 / 3)",
        ] {
            let e = parse_expression(s).unwrap();
            let again = parse_expression(&e.to_string()).unwrap();
            assert_eq!(e, again, "{s} -> {e}");
        }
    }
}
