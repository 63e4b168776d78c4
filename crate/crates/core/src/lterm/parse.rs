use num_traits::{Signed, Zero};

use super::LTerm;
use crate::error::{Error, Result};
use crate::ratcore::{parse_rat, Rat};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Plus,
    Minus,
    Star,
    Join,
    Meet,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (pos, c) = chars[k];
        let next = chars.get(k + 1).map(|&(_, c)| c);
        match c {
            c if c.is_whitespace() => k += 1,
            '+' => {
                out.push((pos, Tok::Plus));
                k += 1;
            }
            '-' | '−' => {
                out.push((pos, Tok::Minus));
                k += 1;
            }
            '*' | '·' => {
                out.push((pos, Tok::Star));
                k += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                k += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                k += 1;
            }
            '∨' => {
                out.push((pos, Tok::Join));
                k += 1;
            }
            '∧' => {
                out.push((pos, Tok::Meet));
                k += 1;
            }
            '\\' if next == Some('/') => {
                out.push((pos, Tok::Join));
                k += 2;
            }
            '/' if next == Some('\\') => {
                out.push((pos, Tok::Meet));
                k += 2;
            }
            c if c.is_ascii_digit() => {
                let start = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                // a fraction bar is only part of the literal when a digit follows
                if k + 1 < chars.len() && chars[k].1 == '/' && chars[k + 1].1.is_ascii_digit() {
                    k += 1;
                    while k < chars.len() && chars[k].1.is_ascii_digit() {
                        k += 1;
                    }
                }
                let end = chars.get(k).map_or(src.len(), |&(p, _)| p);
                let text = &src[chars[start].0..end];
                let q = parse_rat(text).map_err(|_| Error::parse(pos, format!("bad number `{text}`")))?;
                out.push((pos, Tok::Num(q)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = k;
                while k < chars.len() {
                    let d = chars[k].1;
                    if d.is_alphanumeric() || d == '_' || d == '\'' || d == '′' {
                        k += 1;
                    } else {
                        break;
                    }
                }
                let end = chars.get(k).map_or(src.len(), |&(p, _)| p);
                let name = src[chars[start].0..end].replace('′', "'");
                out.push((pos, Tok::Ident(name)));
            }
            other => return Err(Error::parse(pos, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::parse(pos, format!("expected {what}, found {t:?}"))),
            None => Err(Error::parse(pos, format!("expected {what}, found end of input"))),
        }
    }

    // sum := join (('+' | '-') join)*
    fn sum(&mut self) -> Result<LTerm> {
        let mut lhs = self.join()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = LTerm::Add(Box::new(lhs), Box::new(self.join()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = LTerm::Sub(Box::new(lhs), Box::new(self.join()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn join(&mut self) -> Result<LTerm> {
        let mut lhs = self.meet()?;
        while self.peek() == Some(&Tok::Join) {
            self.bump();
            lhs = LTerm::Join(Box::new(lhs), Box::new(self.meet()?));
        }
        Ok(lhs)
    }

    fn meet(&mut self) -> Result<LTerm> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Meet) {
            self.bump();
            lhs = LTerm::Meet(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<LTerm> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(LTerm::Neg(Box::new(self.unary()?)))
            }
            Some(Tok::Num(q)) => {
                self.bump();
                if self.peek() == Some(&Tok::Star) {
                    self.bump();
                    if !q.is_positive() {
                        return Err(Error::parse(pos, "scalar must be positive"));
                    }
                    Ok(LTerm::Scale(q, Box::new(self.unary()?)))
                } else if q.is_zero() {
                    Ok(LTerm::Zero)
                } else {
                    Err(Error::parse(pos, "a nonzero number must be followed by `*`"))
                }
            }
            Some(Tok::Ident(name)) => {
                self.bump();
                let sugar = match name.as_str() {
                    "pos" | "abs" if self.peek() == Some(&Tok::LParen) => Some(name.clone()),
                    _ => None,
                };
                match sugar {
                    Some(f) => {
                        self.bump();
                        let inner = self.sum()?;
                        self.expect(Tok::RParen, "`)`")?;
                        Ok(if f == "pos" {
                            LTerm::Pos(Box::new(inner))
                        } else {
                            LTerm::Abs(Box::new(inner))
                        })
                    }
                    None => Ok(LTerm::Var(name)),
                }
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(t) => Err(Error::parse(pos, format!("unexpected {t:?}"))),
            None => Err(Error::parse(pos, "unexpected end of input")),
        }
    }
}

pub fn parse_lterm(src: &str) -> Result<LTerm> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
    };
    let t = p.sum()?;
    if p.at < p.toks.len() {
        return Err(Error::parse(p.pos(), "trailing input"));
    }
    Ok(t)
}
