//! Text grammar for polynomials and curve-ring fractions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*      juxtaposition multiplies: 3y^2
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | 'y' | 't' | '(' expr ')'
//! ```
//!
//! Integers are reduced mod `p`; `t` is the generator of the base field
//! `F_p[t]/(m)` and `y` is only available on Weierstrass curves.

use crate::curvering::{CurveSpec, FracElem};
use crate::error::{Error, Result};
use crate::finfield::FqField;
use crate::funcfield::Poly;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Var(char),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                    n = n
                        .checked_mul(10)
                        .and_then(|n| n.checked_add(d as u64))
                        .ok_or_else(|| Error::Parse(format!("integer too large in {text:?}")))?;
                    chars.next();
                }
                out.push(Tok::Num(n));
            }
            'x' | 'y' | 't' => {
                out.push(Tok::Var(c));
                chars.next();
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(Tok::Op(c));
                chars.next();
            }
            _ => return Err(Error::Parse(format!("unexpected {c:?} in {text:?}"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    curve: &'a CurveSpec,
    text: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.text))
    }

    fn expr(&mut self) -> Result<FracElem> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FracElem> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = acc.try_div(&d).map_err(|_| self.err("division by zero"))?;
                }
                Some(Tok::Num(_) | Tok::Var(_) | Tok::Op('(')) => {
                    acc = &acc * &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<FracElem> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<FracElem> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(e)) if e <= u32::MAX as u64 => {
                    self.pos += 1;
                    return Ok(base.pow(e as u32));
                }
                _ => return Err(self.err("expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FracElem> {
        let curve = self.curve;
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        Ok(match tok {
            Tok::Num(n) => {
                let p = curve.field().p() as u64;
                FracElem::from_ring(curve.from_int((n % p) as i64))
            }
            Tok::Var('x') => FracElem::from_ring(curve.x()),
            Tok::Var('y') => FracElem::from_ring(curve.y().map_err(|_| self.err("y on the affine line"))?),
            Tok::Var(_) => {
                if curve.field().k() == 1 {
                    return Err(self.err("t is only defined over extension fields"));
                }
                FracElem::from_ring(curve.constant(&curve.field().generator()))
            }
            Tok::Op('(') => {
                let e = self.expr()?;
                if self.peek() != Some(&Tok::Op(')')) {
                    return Err(self.err("missing ')'"));
                }
                self.pos += 1;
                e
            }
            Tok::Op(c) => return Err(self.err(&format!("unexpected {c:?}"))),
        })
    }
}

pub fn parse_frac(curve: &CurveSpec, text: &str) -> Result<FracElem> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        curve,
        text,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

pub fn parse_poly(field: &FqField, text: &str) -> Result<Poly> {
    let line = CurveSpec::polyline(field);
    let e = parse_frac(&line, text)?;
    match e.as_ring() {
        Some(r) => Ok(r.a().clone()),
        None => Err(Error::Parse(format!("{text:?} is not a polynomial"))),
    }
}
