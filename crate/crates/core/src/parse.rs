//! Text input for forms, meromorphic functions and one-variable series.
//!
//! Expressions use `+ - * / ^`, parentheses, juxtaposition as
//! multiplication, integer literals and the imaginary unit `i`. Forms are
//! built from the atoms `dx` and `dy`; series use the variable `z` and
//! `exp(·)`. Decimal literals are rejected.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::coeff::Coeff;
use crate::forms::{form_of_meromorphic, OneForm};
use crate::germs::GermDiff1;
use crate::jets::{Jet1, Jet2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

impl From<ParseError> for crate::Error {
    fn from(e: ParseError) -> Self {
        crate::Error::InvalidInput(e.to_string())
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn err<T>(self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn tokenize(src: &str) -> PResult<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            k += 1;
            continue;
        }
        if c.is_whitespace() {
            k += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && chars[k] == '.' {
                return Pos { line, column: col + (k - start) }
                    .err("decimal literals are not accepted; write p/q");
            }
            let txt: String = chars[start..k].iter().collect();
            col += k - start;
            out.push((Tok::Num(txt.parse().expect("digits")), pos));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            col += k - start;
            out.push((Tok::Ident(chars[start..k].iter().collect()), pos));
            continue;
        }
        if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            k += 1;
            col += 1;
            continue;
        }
        if c == '.' {
            return pos.err("decimal literals are not accepted; write p/q");
        }
        return pos.err(format!("unexpected character '{c}'"));
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

#[derive(Clone, Debug)]
enum Ast {
    Num(BigInt),
    Var(String, Pos),
    Neg(Box<Ast>),
    Bin(char, Box<Ast>, Box<Ast>, Pos),
    Pow(Box<Ast>, u32),
    Call(String, Box<Ast>, Pos),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    k: usize,
}

impl Parser {
    fn new(src: &str) -> PResult<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            k: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.k].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.k].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.k].clone();
        if self.k + 1 < self.toks.len() {
            self.k += 1;
        }
        t
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        match self.peek() {
            Tok::Op(o) if *o == c => {
                self.bump();
                Ok(())
            }
            _ => self.pos().err(format!("expected '{c}'")),
        }
    }

    fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::End => Ok(()),
            _ => self.pos().err("unexpected trailing input"),
        }
    }

    fn sum(&mut self) -> PResult<Ast> {
        let mut lhs = self.product()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            let pos = self.pos();
            self.bump();
            let rhs = self.product()?;
            lhs = Ast::Bin(c, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Tok::Num(_) | Tok::Ident(_) | Tok::Op('('))
    }

    fn product(&mut self) -> PResult<Ast> {
        let mut lhs = self.factor()?;
        loop {
            let pos = self.pos();
            match *self.peek() {
                Tok::Op(c @ ('*' | '/')) => {
                    self.bump();
                    let rhs = self.factor()?;
                    lhs = Ast::Bin(c, Box::new(lhs), Box::new(rhs), pos);
                }
                _ if self.starts_primary() => {
                    let rhs = self.power()?;
                    lhs = Ast::Bin('*', Box::new(lhs), Box::new(rhs), pos);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> PResult<Ast> {
        match self.peek() {
            Tok::Op('-') => {
                self.bump();
                Ok(Ast::Neg(Box::new(self.factor()?)))
            }
            Tok::Op('+') => {
                self.bump();
                self.factor()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> PResult<Ast> {
        let base = self.primary()?;
        if let Tok::Op('^') = self.peek() {
            self.bump();
            let pos = self.pos();
            let e = match self.bump().0 {
                Tok::Num(n) => n,
                Tok::Op('(') => {
                    let n = match self.bump().0 {
                        Tok::Num(n) => n,
                        _ => return pos.err("exponent must be a non-negative integer"),
                    };
                    self.expect(')')?;
                    n
                }
                _ => return pos.err("exponent must be a non-negative integer"),
            };
            let Some(e) = e.to_u32() else {
                return pos.err("exponent too large");
            };
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> PResult<Ast> {
        let (tok, pos) = self.bump();
        match tok {
            Tok::Num(n) => Ok(Ast::Num(n)),
            Tok::Ident(name) => {
                if let Tok::Op('(') = self.peek() {
                    if name == "exp" {
                        self.bump();
                        let arg = self.sum()?;
                        self.expect(')')?;
                        return Ok(Ast::Call(name, Box::new(arg), pos));
                    }
                }
                Ok(Ast::Var(name, pos))
            }
            Tok::Op('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => pos.err("unexpected end of input"),
            Tok::Op(c) => pos.err(format!("unexpected '{c}'")),
        }
    }
}

fn parse_ast(src: &str) -> PResult<Ast> {
    let mut p = Parser::new(src)?;
    let e = p.sum()?;
    p.finish()?;
    Ok(e)
}

fn num_coeff(n: &BigInt) -> Coeff {
    Coeff::from_rational(BigRational::from_integer(n.clone()))
}

/// Values in the plane: a quotient of jets, or a 1-form.
#[derive(Clone, Debug)]
enum PlaneVal {
    Fn(Jet2, Jet2),
    Form(OneForm),
}

fn as_constant(f: &Jet2) -> Option<Coeff> {
    if f.terms().all(|(i, j, _)| i + j == 0) {
        Some(f.constant_term())
    } else {
        None
    }
}

fn normalize(num: Jet2, den: Jet2) -> PlaneVal {
    match as_constant(&den) {
        Some(c) if !c.is_zero() => {
            let n = num.order();
            PlaneVal::Fn(num.scale(&c.inv().expect("nonzero")), Jet2::one(n))
        }
        _ => PlaneVal::Fn(num, den),
    }
}

fn eval_plane(e: &Ast, n: usize) -> PResult<PlaneVal> {
    use PlaneVal::*;
    Ok(match e {
        Ast::Num(v) => Fn(Jet2::constant(num_coeff(v), n), Jet2::one(n)),
        Ast::Var(name, pos) => match name.as_str() {
            "x" => Fn(Jet2::x(n), Jet2::one(n)),
            "y" => Fn(Jet2::y(n), Jet2::one(n)),
            "i" => Fn(Jet2::constant(Coeff::i(), n), Jet2::one(n)),
            "dx" => Form(OneForm::dx(n)),
            "dy" => Form(OneForm::dy(n)),
            other => return pos.err(format!("unknown variable '{other}'")),
        },
        Ast::Call(name, _, pos) => return pos.err(format!("function '{name}' is only available for series")),
        Ast::Neg(a) => match eval_plane(a, n)? {
            Fn(p, q) => Fn(p.scale(&Coeff::from_int(-1)), q),
            Form(w) => Form(w.scale(&Coeff::from_int(-1))),
        },
        Ast::Pow(a, k) => match eval_plane(a, n)? {
            Fn(p, q) => normalize(p.pow(*k as usize), q.pow(*k as usize)),
            Form(_) => return pos_of(a).err("cannot raise a form to a power"),
        },
        Ast::Bin(op, a, b, pos) => {
            let (l, r) = (eval_plane(a, n)?, eval_plane(b, n)?);
            match (op, l, r) {
                ('+', Fn(p, q), Fn(s, t)) => normalize(p.mul(&t).add(&s.mul(&q)), q.mul(&t)),
                ('-', Fn(p, q), Fn(s, t)) => normalize(p.mul(&t).sub(&s.mul(&q)), q.mul(&t)),
                ('*', Fn(p, q), Fn(s, t)) => normalize(p.mul(&s), q.mul(&t)),
                ('/', Fn(p, q), Fn(s, t)) => {
                    if s.is_zero() {
                        return pos.err("division by zero");
                    }
                    normalize(p.mul(&t), q.mul(&s))
                }
                ('+', Form(w), Form(v)) => Form(w.add(&v)),
                ('-', Form(w), Form(v)) => Form(w.sub(&v)),
                ('*', Fn(p, q), Form(w)) | ('*', Form(w), Fn(p, q)) => Form(w.mul_fn(&scalar(p, q, *pos)?)),
                ('/', Form(w), Fn(p, q)) => {
                    if p.is_zero() {
                        return pos.err("division by zero");
                    }
                    Form(w.mul_fn(&scalar(q, p, *pos)?))
                }
                ('*', Form(_), Form(_)) => return pos.err("product of two forms"),
                _ => return pos.err("cannot combine a function and a form here"),
            }
        }
    })
}

fn pos_of(e: &Ast) -> Pos {
    match e {
        Ast::Var(_, p) | Ast::Bin(_, _, _, p) | Ast::Call(_, _, p) => *p,
        Ast::Neg(a) | Ast::Pow(a, _) => pos_of(a),
        Ast::Num(_) => Pos { line: 1, column: 1 },
    }
}

fn scalar(p: Jet2, q: Jet2, pos: Pos) -> PResult<Jet2> {
    match as_constant(&q) {
        Some(c) if !c.is_zero() => Ok(p.scale(&c.inv().expect("nonzero"))),
        _ => pos.err("form coefficients must be polynomial"),
    }
}

/// A parsed input: a 1-form, or a meromorphic function given after `mero:`.
#[derive(Clone, Debug)]
pub enum FormInput {
    Form(OneForm),
    Meromorphic { num: Jet2, den: Jet2 },
}

impl FormInput {
    /// The foliation as a form at order `order`.
    pub fn to_form(&self, order: usize) -> crate::Result<OneForm> {
        match self {
            FormInput::Form(w) => Ok(w.truncate(order)),
            FormInput::Meromorphic { num, den } => {
                Ok(form_of_meromorphic(&num.with_order(order + 1), &den.with_order(order + 1))?.truncate(order))
            }
        }
    }
}

/// Parses a form or a `mero:` function with jets of order `order`; a
/// meromorphic input keeps one extra order so that its form reaches `order`.
pub fn parse_input(text: &str, order: usize) -> PResult<FormInput> {
    let t = text.trim_start();
    if let Some(rest) = t.strip_prefix("mero:") {
        let offset = text.len() - rest.len();
        let ast = parse_ast(rest).map_err(|e| shift_error(e, text, offset))?;
        return match eval_plane(&ast, order + 1).map_err(|e| shift_error(e, text, offset))? {
            PlaneVal::Fn(num, den) => Ok(FormInput::Meromorphic { num, den }),
            PlaneVal::Form(_) => Pos { line: 1, column: 1 }.err("expected a function after 'mero:'"),
        };
    }
    let ast = parse_ast(text)?;
    match eval_plane(&ast, order)? {
        PlaneVal::Form(w) => Ok(FormInput::Form(w)),
        // a bare 0 is the zero form, which is how it prints
        PlaneVal::Fn(num, _) if num.is_zero() => Ok(FormInput::Form(OneForm::zero(order))),
        PlaneVal::Fn(..) => Pos { line: 1, column: 1 }.err("expected a 1-form (terms in dx and dy)"),
    }
}

fn shift_error(mut e: ParseError, text: &str, offset: usize) -> ParseError {
    if e.line == 1 {
        let prefix = &text[..offset];
        if !prefix.contains('\n') {
            e.column += prefix.chars().count();
        }
    }
    e
}

/// Parses a 1-form; `mero:` inputs are converted to their form.
pub fn parse_form(text: &str, order: usize) -> PResult<OneForm> {
    parse_input(text, order).and_then(|fi| {
        fi.to_form(order).map_err(|e| ParseError {
            line: 1,
            column: 1,
            message: e.to_string(),
        })
    })
}

fn exp_series(u: &Jet1) -> Jet1 {
    let n = u.order();
    let mut acc = Jet1::constant(Coeff::one(), n);
    let mut term = Jet1::constant(Coeff::one(), n);
    for k in 1..=n {
        term = term.mul(u).scale(&Coeff::from_frac(1, k as i64));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    acc
}

fn eval_series(e: &Ast, n: usize) -> PResult<Jet1> {
    Ok(match e {
        Ast::Num(v) => Jet1::constant(num_coeff(v), n),
        Ast::Var(name, pos) => match name.as_str() {
            "z" => Jet1::identity(n),
            "i" => Jet1::constant(Coeff::i(), n),
            other => return pos.err(format!("unknown variable '{other}' (series use z)")),
        },
        Ast::Call(name, a, pos) => {
            let u = eval_series(a, n)?;
            if name != "exp" {
                return pos.err(format!("unknown function '{name}'"));
            }
            if !u.coeff(0).is_zero() {
                return pos.err("exp needs an argument vanishing at 0");
            }
            exp_series(&u)
        }
        Ast::Neg(a) => eval_series(a, n)?.scale(&Coeff::from_int(-1)),
        Ast::Pow(a, k) => {
            let b = eval_series(a, n)?;
            let mut acc = Jet1::constant(Coeff::one(), n);
            for _ in 0..*k {
                acc = acc.mul(&b);
            }
            acc
        }
        Ast::Bin(op, a, b, pos) => {
            let (l, r) = (eval_series(a, n)?, eval_series(b, n)?);
            match op {
                '+' => l.add(&r),
                '-' => l.sub(&r),
                '*' => l.mul(&r),
                _ => {
                    if r.is_zero() {
                        return pos.err("division by zero");
                    }
                    match l.div(&r) {
                        Ok(q) => q,
                        Err(err) => return pos.err(err.to_string()),
                    }
                }
            }
        }
    })
}

/// A series in `z` at order `order`.
pub fn parse_series(text: &str, order: usize) -> PResult<Jet1> {
    eval_series(&parse_ast(text)?, order)
}

/// A germ of diffeomorphism in `z`.
pub fn parse_germ(text: &str, order: usize) -> PResult<GermDiff1> {
    let s = parse_series(text, order)?;
    GermDiff1::new(s).map_err(|_| ParseError {
        line: 1,
        column: 1,
        message: "series must vanish at 0 with nonzero linear term".into(),
    })
}

/// A constant expression.
pub fn parse_constant(text: &str) -> PResult<Coeff> {
    let s = parse_series(text, 0)?;
    let full = parse_series(text, 1)?;
    if !full.coeff(1).is_zero() {
        return Pos { line: 1, column: 1 }.err("expected a constant");
    }
    Ok(s.coeff(0))
}

/// `pair: <series> ; <alpha>`, a gluing datum.
pub fn parse_pair(text: &str, order: usize) -> PResult<(GermDiff1, Coeff)> {
    let body = text.trim_start();
    let body = body.strip_prefix("pair:").unwrap_or(body);
    let Some((s, a)) = body.split_once(';') else {
        return Pos { line: 1, column: 1 }.err("expected 'pair: <series> ; <alpha>'");
    };
    Ok((parse_germ(s, order)?, parse_constant(a)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example_form() {
        let w = parse_form("(2*x^3*y - y^3) dx + (x*y^2 - x^4) dy", 8).unwrap();
        assert_eq!(w.a, Jet2::from_int_terms(&[(3, 1, 2), (0, 3, -1)], 8));
        assert_eq!(w.b, Jet2::from_int_terms(&[(1, 2, 1), (4, 0, -1)], 8));
    }

    #[test]
    fn meromorphic_input() {
        let w = parse_form("mero: (y^2 + x^3) / (x*y)", 8).unwrap();
        let v = parse_form("(2*x^3*y - y^3) dx + (x*y^2 - x^4) dy", 8).unwrap();
        assert_eq!(w, v);
        assert_eq!(w.order(), 8);
    }

    #[test]
    fn normalization_and_literals() {
        assert_eq!(parse_form("dx + dx", 4).unwrap(), OneForm::dx(4).scale(&Coeff::from_int(2)));
        let w = parse_form("(1/2 + 3i)*x dy", 4).unwrap();
        assert_eq!(w.b.coeff(1, 0), Coeff::new(BigRational::new(1.into(), 2.into()), BigRational::one() * BigRational::from_integer(3.into())));
        let e = parse_form("x dx +\n 0.5 dy", 4).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_form("w dx", 4).unwrap_err();
        assert!(e.message.contains("unknown variable"));
        assert!(parse_form("dx / 0", 4).is_err());
        assert!(parse_form("dx * dy", 4).is_err());
    }

    #[test]
    fn series() {
        let e = parse_series("exp(z) - 1", 6).unwrap();
        assert_eq!(e.coeff(3), Coeff::from_frac(1, 6));
        let h = parse_series("z/(1 - z)", 6).unwrap();
        assert_eq!(h, Jet1::from_coeffs(vec![Coeff::zero(), Coeff::one(), Coeff::one(), Coeff::one(), Coeff::one(), Coeff::one(), Coeff::one()], 6));
        let (s, a) = parse_pair("pair: z + z^2 ; 5/2", 6).unwrap();
        assert_eq!(s.jet().coeff(2), Coeff::one());
        assert_eq!(a, Coeff::from_frac(5, 2));
    }

    #[test]
    fn printed_forms_parse_back() {
        let w = OneForm::new(
            Jet2::from_terms([(2, 1, Coeff::from_frac(-3, 2)), (0, 2, Coeff::gaussian(1, -2)), (1, 0, Coeff::i())], 6),
            Jet2::from_terms([(0, 0, Coeff::from_int(1)), (3, 1, Coeff::gaussian(0, -1))], 6),
        );
        assert_eq!(parse_form(&w.to_text(), 6).unwrap(), w);
    }
}
