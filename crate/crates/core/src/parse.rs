//! Parser for form and coefficient expressions.
//!
//! Precedence, loosest first: `+ -`, `* /`, unary `+ -`, `^` (wedge),
//! `**` (integer power). Atoms are integers, parameters, `i`, generator
//! names (including `~w` conjugates) and parenthesized expressions.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeffield::{Coefficient, GaussRational, PI2};
use crate::error::{Error, Result};
use crate::exterior::{Blade, Coframe, Form};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Pow,
    LParen,
    RParen,
}

/// Names an expression may refer to.
#[derive(Clone, Debug)]
pub struct Scope {
    pub coframe: Option<Arc<Coframe>>,
    pub params: BTreeSet<String>,
}

impl Scope {
    pub fn new(coframe: Option<&Arc<Coframe>>, params: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self { coframe: coframe.cloned(), params: params.into_iter().map(Into::into).collect() }
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end: usize,
    scope: &'a Scope,
    coframe: Arc<Coframe>,
}

fn lex(text: &str, line: usize, offset: usize) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = offset + k + 1;
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '*' if chars.get(k + 1) != Some(&'*') => Some(Tok::Star),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            k += 1;
            continue;
        }
        match c {
            ' ' | '\t' => k += 1,
            '*' => {
                out.push((Tok::Pow, col));
                k += 2;
            }
            d if d.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
                let s: String = chars[start..k].iter().collect();
                out.push((Tok::Num(s.parse().expect("digits")), col));
            }
            a if a.is_alphabetic() || a == '_' || a == '~' => {
                let start = k;
                k += 1;
                while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                    k += 1;
                }
                out.push((Tok::Ident(chars[start..k].iter().collect()), col));
            }
            other => {
                return Err(Error::Parse { line, column: col, message: format!("unexpected character `{other}`") })
            }
        }
    }
    Ok(out)
}

/// Parses `text` as a form over the scope's coframe.
///
/// `line` and `offset` locate `text` inside a larger file for error messages.
pub fn form_at(text: &str, scope: &Scope, line: usize, offset: usize) -> Result<Form> {
    let toks = lex(text, line, offset)?;
    let coframe = scope.coframe.clone().unwrap_or_else(Coframe::standard_real);
    let mut p = Parser { toks, pos: 0, line, end: offset + text.chars().count() + 1, scope, coframe };
    if p.toks.is_empty() {
        return Err(p.error_at(p.end, "empty expression"));
    }
    let f = p.expr()?;
    if p.pos < p.toks.len() {
        let col = p.toks[p.pos].1;
        return Err(p.error_at(col, "unexpected trailing input"));
    }
    Ok(f)
}

pub fn form(text: &str, scope: &Scope) -> Result<Form> {
    form_at(text, scope, 1, 0)
}

/// Parses a scalar expression.
pub fn coefficient_at(text: &str, scope: &Scope, line: usize, offset: usize) -> Result<Coefficient> {
    let f = form_at(text, scope, line, offset)?;
    scalar(&f).ok_or_else(|| Error::Parse { line, column: offset + 1, message: "expected a scalar expression".into() })
}

pub fn coefficient(text: &str, params: &[&str]) -> Result<Coefficient> {
    coefficient_at(text, &Scope::new(None, params.iter().copied()), 1, 0)
}

fn scalar(f: &Form) -> Option<Coefficient> {
    f.terms().all(|(b, _)| b == Blade::ONE).then(|| f.coefficient(Blade::ONE))
}

impl Parser<'_> {
    fn error_at(&self, column: usize, msg: &str) -> Error {
        Error::Parse { line: self.line, column, message: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.1)
    }

    fn expr(&mut self) -> Result<Form> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            let neg = match t {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.pos += 1;
            let rhs = self.term()?;
            acc = if neg { &acc - &rhs } else { &acc + &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Form> {
        let mut acc = self.unary()?;
        while let Some(t) = self.peek() {
            let div = match t {
                Tok::Star => false,
                Tok::Slash => true,
                _ => break,
            };
            let col = self.col();
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if div {
                let d = scalar(&rhs).ok_or_else(|| self.error_at(col, "divisor must be a scalar"))?;
                let inv = d.inv().map_err(|_| self.error_at(col, "division by zero"))?;
                acc.scale(&inv)
            } else if let Some(c) = scalar(&acc) {
                rhs.scale(&c)
            } else if let Some(c) = scalar(&rhs) {
                acc.scale(&c)
            } else {
                return Err(self.error_at(col, "`*` needs a scalar operand; use `^` for wedge"));
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Form> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        if self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            return self.unary();
        }
        self.wedge()
    }

    fn wedge(&mut self) -> Result<Form> {
        let mut acc = self.power()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let rhs = self.power()?;
            acc = &acc ^ &rhs;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Form> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Pow) {
            return Ok(base);
        }
        let col = self.col();
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = match self.peek() {
            Some(Tok::Num(n)) => i32::try_from(n.clone()).map_err(|_| self.error_at(self.col(), "exponent too large"))?,
            _ => return Err(self.error_at(self.col(), "expected an integer exponent")),
        };
        self.pos += 1;
        let c = scalar(&base).ok_or_else(|| self.error_at(col, "`**` applies to scalars only"))?;
        let c = c.pow(if neg { -e } else { e }).map_err(|_| self.error_at(col, "zero to a negative power"))?;
        Ok(Form::scalar(&self.coframe, c))
    }

    fn atom(&mut self) -> Result<Form> {
        let col = self.col();
        let Some(tok) = self.peek().cloned() else {
            return Err(self.error_at(col, "unexpected end of expression"));
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(Form::scalar(
                &self.coframe,
                Coefficient::constant(GaussRational::real(BigRational::from_integer(n))),
            )),
            Tok::LParen => {
                let f = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.error_at(self.col(), "expected `)`"));
                }
                self.pos += 1;
                Ok(f)
            }
            Tok::Ident(name) => self.ident(&name),
            _ => Err(self.error_at(col, "expected a number, name or `(`")),
        }
    }

    fn ident(&self, name: &str) -> Result<Form> {
        if let Some(cf) = &self.scope.coframe {
            if let Some(idx) = cf.index_of(name) {
                return Ok(Form::generator(cf, idx));
            }
        }
        if name == "i" {
            return Ok(Form::scalar(&self.coframe, Coefficient::i()));
        }
        if name == PI2 || self.scope.params.contains(name) {
            return Ok(Form::scalar(&self.coframe, Coefficient::var(name)));
        }
        Err(Error::UnknownParameter(name.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_generators() {
        let cf = Coframe::standard_complex();
        let scope = Scope::new(Some(&cf), Vec::<String>::new());
        let f = form("w1^~w3 + w1^w3", &scope).unwrap();
        let expect = &Form::monomial(&cf, &[0, 2], Coefficient::one()) + &Form::monomial(&cf, &[0, 5], Coefficient::one());
        assert_eq!(f, expect);
    }

    #[test]
    fn precedence() {
        let cf = Coframe::standard_real();
        let scope = Scope::new(Some(&cf), ["r", "s"]);
        let f = form("(2*s)/r*e1^e5 - e2^e3", &scope).unwrap();
        let c = &(&Coefficient::int(2) * &Coefficient::var("s")) / &Coefficient::var("r");
        let expect = &Form::monomial(&cf, &[0, 4], c) - &Form::monomial(&cf, &[1, 2], Coefficient::one());
        assert_eq!(f, expect);
        let g = coefficient("(s**4 - 1)/(9*r**2*s**2)", &["r", "s"]).unwrap();
        assert_eq!(g.to_string(), "(s**4 - 1)/(9*r**2*s**2)");
        assert_eq!(coefficient("r**-2", &["r"]).unwrap(), Coefficient::var("r").pow(-2).unwrap());
    }

    #[test]
    fn errors() {
        let cf = Coframe::standard_real();
        let scope = Scope::new(Some(&cf), ["r"]);
        assert_eq!(form("x*e1", &scope), Err(Error::UnknownParameter("x".into())));
        assert!(matches!(form("e1*e2", &scope), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(form("(e1", &scope), Err(Error::Parse { .. })));
        assert!(matches!(form("", &scope), Err(Error::Parse { .. })));
        assert!(matches!(form("e1 / 0", &scope), Err(Error::Parse { .. })));
    }

    #[test]
    fn canonical_text_reparses() {
        let cf = Coframe::standard_complex();
        let scope = Scope::new(Some(&cf), ["r", "u_re", "u_im"]);
        for text in ["(1/2)*i*r**2*w1^~w1 + (u_re + i*u_im)/2*w1^~w2", "-i*w2^~w1 + (3 - 2*i)*w1^w2^~w3"] {
            let f = form(text, &scope).unwrap();
            assert_eq!(form(&f.to_string(), &scope).unwrap(), f, "{f}");
        }
    }
}
