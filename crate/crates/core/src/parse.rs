//! Expression text: lexer, LL(1) parser, printer and a generic evaluator.
//!
//! Grammar (explicit `*`, no juxtaposition):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary (('*' | '/') unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)?
//! exponent := '-'? INT | '-'? '(' '-'? INT ('/' INT)? ')'
//! atom     := INT | IDENT ('[' groups ']')? | '(' expr ')'
//! groups   := group (';' group)*
//! group    := (IDENT '=')? value (',' value)*
//! ```
//!
//! `q`, `lambda` and `omega` are reserved scalar names; everything else is
//! resolved by the evaluation context.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::coeff::{QCoeff, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at column {}: {message}", .pos + 1)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        Self {
            pos,
            message: message.into(),
        }
    }

    /// Multi-line diagnostic with a caret under the offending column.
    pub fn render(&self, input: &str) -> String {
        format!(
            "{}\n  {}\n  {}^",
            self,
            input,
            " ".repeat(self.pos.min(input.chars().count()))
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketGroup {
    pub key: Option<String>,
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bracket {
    pub groups: Vec<BracketGroup>,
}

impl Bracket {
    /// Values of a bracket that is a plain comma list of integers, e.g. `[1,2]`.
    pub fn indices(&self) -> Option<Vec<usize>> {
        if self.groups.len() != 1 || self.groups[0].key.is_some() {
            return None;
        }
        self.groups[0]
            .values
            .iter()
            .map(|v| {
                if v.is_integer() && !v.is_negative() {
                    v.to_integer().to_usize()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn group(&self, key: &str) -> Option<&BracketGroup> {
        self.groups.iter().find(|g| g.key.as_deref() == Some(key))
    }
}

impl fmt::Display for Bracket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self
            .groups
            .iter()
            .map(|g| {
                let vals: Vec<String> = g.values.iter().map(fmt_signed_rational).collect();
                match &g.key {
                    Some(k) => format!("{}={}", k, vals.join(",")),
                    None => vals.join(","),
                }
            })
            .collect();
        write!(f, "[{}]", groups.join(";"))
    }
}

fn fmt_signed_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Sym {
        name: String,
        bracket: Option<Bracket>,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Rational),
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Sym { .. } => 5,
        }
    }

    fn write_prec(&self, min: u8, out: &mut String) {
        let paren = self.prec() < min;
        if paren {
            out.push('(');
        }
        match self {
            Expr::Int(n) => out.push_str(&n.to_string()),
            Expr::Sym { name, bracket } => {
                out.push_str(name);
                if let Some(b) = bracket {
                    out.push_str(&b.to_string());
                }
            }
            Expr::Neg(x) => {
                out.push('-');
                x.write_prec(3, out);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_prec(1, out);
                out.push_str(if matches!(self, Expr::Add(..)) {
                    " + "
                } else {
                    " - "
                });
                b.write_prec(2, out);
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_prec(2, out);
                out.push(if matches!(self, Expr::Mul(..)) { '*' } else { '/' });
                b.write_prec(3, out);
            }
            Expr::Pow(b, e) => {
                b.write_prec(5, out);
                out.push('^');
                if e.is_integer() {
                    out.push_str(&e.numer().to_string());
                } else {
                    out.push_str(&format!("({}/{})", e.numer(), e.denom()));
                }
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.write_prec(0, &mut s);
        f.write_str(&s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((start, Tok::Int(text.parse().unwrap())));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()[],;=".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(ParseError::new(i, format!("unexpected character '{}'", c)));
        }
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Op(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(ParseError::new(self.pos(), format!("expected '{}'", c)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(n),
            _ => Err(ParseError::new(pos, "expected an integer")),
        }
    }

    fn signed_rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat('-');
        let n = self.int()?;
        let d = if self.eat('/') {
            let pos = self.pos();
            let d = self.int()?;
            if d.is_zero() {
                return Err(ParseError::new(pos, "zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        let r = Rational::new(n, d);
        Ok(if neg { -r } else { r })
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat('-');
        let e = if self.eat('(') {
            let r = self.signed_rational()?;
            self.expect(')')?;
            r
        } else {
            Rational::from_integer(self.int()?)
        };
        Ok(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => Ok(Expr::Int(n)),
            Tok::Ident(name) => {
                let bracket = if *self.peek() == Tok::Op('[') {
                    self.bump();
                    Some(self.bracket()?)
                } else {
                    None
                };
                Ok(Expr::Sym { name, bracket })
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => Err(ParseError::new(pos, "unexpected end of input")),
            Tok::Op(c) => Err(ParseError::new(pos, format!("unexpected '{}'", c))),
        }
    }

    fn bracket(&mut self) -> Result<Bracket, ParseError> {
        let mut groups = Vec::new();
        loop {
            let key = if let Tok::Ident(k) = self.peek().clone() {
                self.bump();
                self.expect('=')?;
                Some(k)
            } else {
                None
            };
            let mut values = vec![self.signed_rational()?];
            while self.eat(',') {
                values.push(self.signed_rational()?);
            }
            groups.push(BracketGroup { key, values });
            if self.eat(';') {
                continue;
            }
            self.expect(']')?;
            return Ok(Bracket { groups });
        }
    }
}

pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(input)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(ParseError::new(p.pos(), "unexpected trailing input"));
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Reduction(#[from] crate::ncpoly::NormalFormError),
}

/// Target algebra for [`evaluate`].
pub trait EvalContext {
    type Value: Clone;
    fn scalar(&self, c: QCoeff) -> Self::Value;
    fn as_scalar(&self, v: &Self::Value) -> Option<QCoeff>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, EvalError>;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn invert(&self, a: &Self::Value) -> Result<Self::Value, EvalError>;
    fn symbol(&self, name: &str, bracket: Option<&Bracket>) -> Result<Self::Value, EvalError>;
}

fn reserved(name: &str) -> Option<QCoeff> {
    match name {
        "q" => Some(QCoeff::q()),
        "lambda" => Some(QCoeff::lambda()),
        "omega" => Some(QCoeff::omega()),
        _ => None,
    }
}

pub fn evaluate<C: EvalContext>(e: &Expr, ctx: &C) -> Result<C::Value, EvalError> {
    match e {
        Expr::Int(n) => Ok(ctx.scalar(QCoeff::from_rational(Rational::from_integer(n.clone())))),
        Expr::Sym { name, bracket } => match (reserved(name), bracket) {
            (Some(c), None) => Ok(ctx.scalar(c)),
            _ => ctx.symbol(name, bracket.as_ref()),
        },
        Expr::Neg(x) => Ok(ctx.neg(&evaluate(x, ctx)?)),
        Expr::Add(a, b) => Ok(ctx.add(&evaluate(a, ctx)?, &evaluate(b, ctx)?)),
        Expr::Sub(a, b) => Ok(ctx.add(&evaluate(a, ctx)?, &ctx.neg(&evaluate(b, ctx)?))),
        Expr::Mul(a, b) => ctx.mul(&evaluate(a, ctx)?, &evaluate(b, ctx)?),
        Expr::Div(a, b) => {
            let num = evaluate(a, ctx)?;
            let den = evaluate(b, ctx)?;
            match ctx.as_scalar(&den) {
                Some(d) if d.is_zero() => Err(EvalError::Invalid("division by zero".into())),
                Some(d) => ctx.mul(&num, &ctx.scalar(d.inv().expect("nonzero"))),
                None => Err(EvalError::Invalid(
                    "division is only defined by scalars; use ^-1 for inverses".into(),
                )),
            }
        }
        Expr::Pow(base, exp) => {
            if !exp.is_integer() {
                let b = evaluate(base, ctx)?;
                let c = ctx.as_scalar(&b).ok_or_else(|| {
                    EvalError::Invalid("fractional powers apply only to powers of q".into())
                })?;
                let (k, r) = c.as_monomial().ok_or_else(|| {
                    EvalError::Invalid("fractional powers apply only to powers of q".into())
                })?;
                let scaled = Rational::from_integer(k.into()) * exp;
                if !r.is_one() || !scaled.is_integer() {
                    return Err(EvalError::Invalid(format!(
                        "power {} does not give an integer power of q^(1/2)",
                        exp
                    )));
                }
                let k = scaled.to_integer().to_i32().ok_or_else(|| EvalError::Invalid("exponent too large".into()))?;
                return Ok(ctx.scalar(QCoeff::s_pow(k)));
            }
            let n = exp
                .to_integer()
                .to_i32()
                .ok_or_else(|| EvalError::Invalid("exponent too large".into()))?;
            if n.unsigned_abs() > 64 {
                return Err(EvalError::Invalid("exponent too large".into()));
            }
            let b = evaluate(base, ctx)?;
            let b = if n < 0 { ctx.invert(&b)? } else { b };
            let mut acc = ctx.scalar(QCoeff::one());
            for _ in 0..n.unsigned_abs() {
                acc = ctx.mul(&acc, &b)?;
            }
            Ok(acc)
        }
    }
}

struct ScalarCtx;

impl EvalContext for ScalarCtx {
    type Value = QCoeff;
    fn scalar(&self, c: QCoeff) -> QCoeff {
        c
    }
    fn as_scalar(&self, v: &QCoeff) -> Option<QCoeff> {
        Some(v.clone())
    }
    fn add(&self, a: &QCoeff, b: &QCoeff) -> QCoeff {
        a + b
    }
    fn mul(&self, a: &QCoeff, b: &QCoeff) -> Result<QCoeff, EvalError> {
        Ok(a * b)
    }
    fn neg(&self, a: &QCoeff) -> QCoeff {
        -a
    }
    fn invert(&self, a: &QCoeff) -> Result<QCoeff, EvalError> {
        a.inv().map_err(|e| EvalError::Invalid(e.to_string()))
    }
    fn symbol(&self, name: &str, _: Option<&Bracket>) -> Result<QCoeff, EvalError> {
        Err(EvalError::UnknownSymbol(name.to_string()))
    }
}

/// Parses coefficient text such as `q^(1/2) - q^-1` or `lambda/omega`.
pub fn parse_coeff(text: &str) -> Result<QCoeff, EvalError> {
    evaluate(&parse_expr(text)?, &ScalarCtx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn coefficient_grammar() {
        assert_eq!(parse_coeff("q - q^-1").unwrap(), QCoeff::lambda());
        assert_eq!(parse_coeff("q^(1/2)").unwrap(), QCoeff::s_pow(1));
        assert_eq!(parse_coeff("q^(-1/2)").unwrap(), QCoeff::s_pow(-1));
        assert_eq!(
            parse_coeff("lambda/omega").unwrap(),
            QCoeff::s_pow(1) + QCoeff::s_pow(-1)
        );
        assert_eq!(parse_coeff("3/4").unwrap(), QCoeff::from_rational(rat(3, 4)));
        assert_eq!(
            parse_coeff("1/(q - 1)").unwrap(),
            QCoeff::one() / (QCoeff::q() - QCoeff::one())
        );
    }

    #[test]
    fn coefficient_display_round_trips() {
        for text in ["q*lambda", "-q^(3/2)", "1/(q - 1)", "(q^2 + 1)/(q + 3)", "q - 2 + q^-1", "-2/3*omega"] {
            let c = parse_coeff(text).unwrap();
            assert_eq!(parse_coeff(&c.to_string()).unwrap(), c, "{}", text);
        }
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_expr("x)").unwrap_err();
        assert_eq!(err.pos, 1);
        assert!(err.render("x)").ends_with(" ^"));
        assert!(parse_expr("a +").is_err());
        assert!(parse_coeff("zeta").is_err());
    }

    #[test]
    fn brackets() {
        let e = parse_expr("minor[rows=1,2;cols=1,3]").unwrap();
        let Expr::Sym { bracket: Some(b), .. } = &e else { panic!() };
        assert_eq!(b.group("cols").unwrap().values.len(), 2);
        assert_eq!(e.to_string(), "minor[rows=1,2;cols=1,3]");
        let t = parse_expr("t[1,2]").unwrap();
        let Expr::Sym { bracket: Some(b), .. } = &t else { panic!() };
        assert_eq!(b.indices(), Some(vec![1, 2]));
    }

    #[test]
    fn printer_keeps_structure() {
        for text in ["a - (b - c)", "-a^2", "(-a)^2", "a*-b", "-(a*b)", "2*(a + b)^3", "x^(1/2)"] {
            let e = parse_expr(text).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{}", text);
        }
    }
}
