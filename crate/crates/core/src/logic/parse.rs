//! Recursive-descent parser for the ASCII formula syntax (see
//! `docs/formula.ebnf`).

use num_traits::{One, Zero};

use super::ast::{Formula, Term};
use crate::error::{Error, Result};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Q),
    Var(usize),
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { position, message: message.into() })
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => out.push((i, Tok::LParen)),
            b')' => out.push((i, Tok::RParen)),
            b',' => out.push((i, Tok::Comma)),
            b'+' => out.push((i, Tok::Plus)),
            b'-' => out.push((i, Tok::Minus)),
            b'*' => out.push((i, Tok::Star)),
            b'0'..=b'9' => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if i + 1 < b.len() && b[i] == b'/' && b[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < b.len() && b[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < b.len() && b[i] == b'.' {
                    return err(i, "decimal numbers are not accepted; write rationals as p/q");
                }
                let q = crate::rational::parse_q(&src[start..i]).or_else(|e| err(start, e.to_string()))?;
                out.push((start, Tok::Num(q)));
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                let mut word = &src[start..i];
                if word == "dot" && i < b.len() && b[i] == b'-' {
                    i += 1;
                    word = "dot-";
                }
                let tok = match word.strip_prefix('x') {
                    Some(d) if !d.is_empty() && d.bytes().all(|c| c.is_ascii_digit()) => {
                        let n: usize = d.parse().or_else(|_| err(start, "variable index too large"))?;
                        if n == 0 {
                            return err(start, "variables are numbered from x1");
                        }
                        Tok::Var(n)
                    }
                    _ => Tok::Ident(word.to_string()),
                };
                out.push((start, tok));
                continue;
            }
            _ => return err(i, format!("unexpected character {:?}", c as char)),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn at(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.at();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => err(at, format!("expected {what}, found {t:?}")),
            None => err(at, format!("expected {what}, found end of input")),
        }
    }

    fn number(&mut self) -> Result<Q> {
        let at = self.at();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Num(q)) => Ok(if neg { -q } else { q }),
            _ => err(at, "expected a rational number"),
        }
    }

    fn checked(&self, at: usize, t: Term) -> Result<Term> {
        t.check().map_err(|e| Error::Parse { position: at, message: e.to_string() })?;
        Ok(t)
    }

    // term := tprod (('+' | '-') tprod)*
    fn term(&mut self) -> Result<Term> {
        let mut lhs = self.tprod()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = Term::Add(Box::new(lhs), Box::new(self.tprod()?));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = Term::Sub(Box::new(lhs), Box::new(self.tprod()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    // tprod := tunary ('*' tunary)*
    fn tprod(&mut self) -> Result<Term> {
        let at = self.at();
        let mut lhs = self.tunary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.tunary()?;
            lhs = match (literal(&lhs), literal(&rhs)) {
                (Some(c), _) => Term::Scale(c, Box::new(rhs)),
                (None, Some(c)) => Term::Scale(c, Box::new(lhs)),
                _ => self.checked(at, Term::Mul(Box::new(lhs), Box::new(rhs)))?,
            };
        }
        Ok(lhs)
    }

    fn tunary(&mut self) -> Result<Term> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Term::Scale(-Q::one(), Box::new(self.tunary()?)));
        }
        self.tprimary()
    }

    fn tprimary(&mut self) -> Result<Term> {
        let at = self.at();
        match self.next() {
            Some(Tok::Var(i)) => Ok(Term::Var(i)),
            Some(Tok::Num(q)) => Ok(if q.is_zero() {
                Term::Zero
            } else if q.is_one() {
                Term::One
            } else {
                Term::Scale(q, Box::new(Term::One))
            }),
            Some(Tok::LParen) => {
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Some(Tok::Ident(w)) if w == "abs" => {
                self.expect(Tok::LParen, "'('")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                self.checked(at, Term::Abs(Box::new(t)))
            }
            Some(Tok::Ident(w)) if w == "scale" => {
                self.expect(Tok::LParen, "'('")?;
                let c = self.number()?;
                self.expect(Tok::Comma, "','")?;
                let t = self.term()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(Term::Scale(c, Box::new(t)))
            }
            Some(t) => err(at, format!("expected a term, found {t:?}")),
            None => err(at, "expected a term, found end of input"),
        }
    }

    // formula := fprod ('+' fprod)*
    fn formula(&mut self) -> Result<Formula> {
        let mut lhs = self.fprod()?;
        while self.peek() == Some(&Tok::Plus) {
            self.pos += 1;
            lhs = Formula::Add(Box::new(lhs), Box::new(self.fprod()?));
        }
        Ok(lhs)
    }

    // fprod := number '*' fprod | fprimary
    fn fprod(&mut self) -> Result<Formula> {
        let numeric = matches!(self.peek(), Some(Tok::Num(_)))
            || (self.peek() == Some(&Tok::Minus) && matches!(self.peek2(), Some(Tok::Num(_))));
        if numeric {
            let c = self.number()?;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
                return Ok(Formula::Scale(c, Box::new(self.fprod()?)));
            }
            return Ok(Formula::Const(c));
        }
        self.fprimary()
    }

    fn args(&mut self) -> Result<Vec<Formula>> {
        self.expect(Tok::LParen, "'('")?;
        let mut v = vec![self.formula()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            v.push(self.formula()?);
        }
        self.expect(Tok::RParen, "')'")?;
        Ok(v)
    }

    fn fprimary(&mut self) -> Result<Formula> {
        let at = self.at();
        match self.next() {
            Some(Tok::LParen) => {
                let f = self.formula()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(f)
            }
            Some(Tok::Ident(w)) => match w.as_str() {
                "norm" => {
                    self.expect(Tok::LParen, "'('")?;
                    let t = self.term()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Formula::Norm(t))
                }
                "d" => {
                    self.expect(Tok::LParen, "'('")?;
                    let a = self.term()?;
                    self.expect(Tok::Comma, "','")?;
                    let b = self.term()?;
                    self.expect(Tok::RParen, "')'")?;
                    let f = Formula::Dist(a, b);
                    f.check().map_err(|e| Error::Parse { position: at, message: e.to_string() })?;
                    Ok(f)
                }
                "dot-" => {
                    let mut v = self.args()?;
                    if v.len() != 2 {
                        return err(at, "dot- takes exactly two arguments");
                    }
                    let b = v.pop().unwrap();
                    let a = v.pop().unwrap();
                    Ok(Formula::DotMinus(Box::new(a), Box::new(b)))
                }
                "max" => Ok(Formula::Max(self.args()?)),
                "min" => Ok(Formula::Min(self.args()?)),
                "sqrt" => {
                    let mut v = self.args()?;
                    if v.len() != 1 {
                        return err(at, "sqrt takes one argument");
                    }
                    Ok(Formula::Sqrt(Box::new(v.pop().unwrap())))
                }
                "scale" => {
                    self.expect(Tok::LParen, "'('")?;
                    let c = self.number()?;
                    self.expect(Tok::Comma, "','")?;
                    let f = self.formula()?;
                    self.expect(Tok::RParen, "')'")?;
                    Ok(Formula::Scale(c, Box::new(f)))
                }
                other => err(at, format!("unknown connective {other:?}")),
            },
            Some(t) => err(at, format!("expected a formula, found {t:?}")),
            None => err(at, "expected a formula, found end of input"),
        }
    }

    fn finish<T>(&self, v: T) -> Result<T> {
        if self.pos < self.toks.len() {
            return err(self.at(), "trailing input");
        }
        Ok(v)
    }
}

/// The constant a literal term denotes, if it is one.
fn literal(t: &Term) -> Option<Q> {
    match t {
        Term::One => Some(Q::one()),
        Term::Zero => Some(Q::zero()),
        Term::Scale(c, inner) if **inner == Term::One => Some(c.clone()),
        _ => None,
    }
}

pub fn parse_formula(src: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(src)?, pos: 0, end: src.len() };
    let f = p.formula()?;
    p.finish(f)
}

pub fn parse_term(src: &str) -> Result<Term> {
    let mut p = Parser { toks: lex(src)?, pos: 0, end: src.len() };
    let t = p.term()?;
    p.finish(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn psi0_style_atom() {
        let f = parse_formula("norm(abs(x1)+abs(x2))").unwrap();
        assert_eq!(
            f,
            Formula::Norm(Term::Add(
                Box::new(Term::Abs(Box::new(Term::Var(1)))),
                Box::new(Term::Abs(Box::new(Term::Var(2))))
            ))
        );
    }

    #[test]
    fn dotminus() {
        let f = parse_formula("dot-(norm(x1), 1)").unwrap();
        assert_eq!(f, Formula::DotMinus(Box::new(Formula::Norm(Term::Var(1))), Box::new(Formula::Const(qi(1)))));
    }

    #[test]
    fn degree_cap() {
        match parse_formula("norm(x1*x2*x3)") {
            Err(Error::Parse { position, message }) => {
                assert_eq!(position, 5);
                assert!(message.contains("degree"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("norm((x1*x1)*(x1*x1))").is_ok());
        assert!(parse_formula("norm(abs(x1*x2))").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_formula("norm(x1") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 7),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("norm(0.5)").is_err());
        assert!(parse_formula("norm(x0)").is_err());
        assert!(parse_formula("frob(x1)").is_err());
    }

    #[test]
    fn sugar() {
        assert_eq!(parse_term("2*x1").unwrap(), Term::Scale(qi(2), Box::new(Term::Var(1))));
        assert_eq!(parse_term("x1*1/2").unwrap(), Term::Scale(q(1, 2), Box::new(Term::Var(1))));
        assert_eq!(parse_term("-x1").unwrap(), Term::Scale(qi(-1), Box::new(Term::Var(1))));
        assert_eq!(parse_formula("3*norm(x1)").unwrap(), Formula::Scale(qi(3), Box::new(Formula::Norm(Term::Var(1)))));
    }

    #[test]
    fn round_trip() {
        for src in [
            "min(dot-(2*norm(1-x1*x1), 1), dot-(1, 4*norm(x1*x1-(x1*x1)*(x1*x1))))",
            "max(sqrt(norm(x1*x3)), 0, -1/2, d(abs(x1)-abs(x2), abs(x3)))",
            "norm(scale(-3/4, x2) + 0) + scale(2, norm(1))",
        ] {
            let f = parse_formula(src).unwrap();
            let again = parse_formula(&f.to_string()).unwrap();
            assert_eq!(f, again, "{src}");
        }
    }
}
