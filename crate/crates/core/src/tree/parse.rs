//! The knot expression language.
//!
//! ```text
//! knot := "unknot" | "T(" int "," int ")" | NAME | "sum(" knot { "," knot } ")"
//!       | "cable(" int "," int ";" knot ")" | "splice(" NAME ";" knot { "," knot } ")"
//!       | "mirror(" knot ")" | "rev(" knot ")"
//! ```

use std::fmt;

use super::{Catalogue, SpliceTree};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Unknot,
    Torus(i64, i64),
    Name(String),
    Sum(Vec<Expr>),
    Cable(i64, i64, Box<Expr>),
    Splice(String, Vec<Expr>),
    Mirror(Box<Expr>),
    Rev(Box<Expr>),
}

fn write_list(f: &mut fmt::Formatter<'_>, items: &[Expr]) -> fmt::Result {
    for (i, e) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Unknot => write!(f, "unknot"),
            Expr::Torus(p, q) => write!(f, "T({p},{q})"),
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Sum(xs) => {
                write!(f, "sum(")?;
                write_list(f, xs)?;
                write!(f, ")")
            }
            Expr::Cable(p, q, x) => write!(f, "cable({p},{q};{x})"),
            Expr::Splice(n, xs) => {
                write!(f, "splice({n};")?;
                write_list(f, xs)?;
                write!(f, ")")
            }
            Expr::Mirror(x) => write!(f, "mirror({x})"),
            Expr::Rev(x) => write!(f, "rev({x})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Open,
    Close,
    Comma,
    Semi,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Open => write!(f, "`(`"),
            Tok::Close => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn error(line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize, usize)>> {
        let mut out = Vec::new();
        loop {
            while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
                self.bump();
            }
            let (line, column) = (self.line, self.column);
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::End, line, column));
                return Ok(out);
            };
            let tok = match c {
                '(' | ')' | ',' | ';' => {
                    self.bump();
                    match c {
                        '(' => Tok::Open,
                        ')' => Tok::Close,
                        ',' => Tok::Comma,
                        _ => Tok::Semi,
                    }
                }
                '-' | '0'..='9' => {
                    let mut text = String::new();
                    text.push(self.bump().expect("peeked"));
                    while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                        text.push(self.bump().expect("peeked"));
                    }
                    let n = text
                        .parse()
                        .map_err(|_| Self::error(line, column, format!("bad integer `{text}`")))?;
                    Tok::Int(n)
                }
                c if c.is_ascii_alphabetic() => {
                    let mut text = String::new();
                    while self
                        .chars
                        .peek()
                        .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
                    {
                        text.push(self.bump().expect("peeked"));
                    }
                    Tok::Ident(text)
                }
                other => {
                    return Err(Self::error(
                        line,
                        column,
                        format!("unexpected character `{other}`"),
                    ))
                }
            };
            out.push((tok, line, column));
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let (_, line, column) = &self.toks[self.pos];
        Lexer::error(*line, *column, message)
    }

    fn next(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected {want}, found {}", self.peek())))
        }
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            other => Err(self.error_here(format!("expected an integer, found {other}"))),
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(n) => {
                self.next();
                Ok(n)
            }
            other => Err(self.error_here(format!("expected a name, found {other}"))),
        }
    }

    fn list(&mut self) -> Result<Vec<Expr>> {
        let mut items = vec![self.knot()?];
        while *self.peek() == Tok::Comma {
            self.next();
            items.push(self.knot()?);
        }
        Ok(items)
    }

    fn knot(&mut self) -> Result<Expr> {
        let word = match self.peek().clone() {
            Tok::Ident(w) => w,
            other => return Err(self.error_here(format!("expected a knot, found {other}"))),
        };
        let keyword_start = self.pos;
        self.next();
        let takes_args = matches!(
            word.as_str(),
            "T" | "sum" | "cable" | "splice" | "mirror" | "rev"
        );
        if !takes_args {
            if *self.peek() == Tok::Open {
                return Err(self.error_here(format!("`{word}` takes no arguments")));
            }
            return Ok(if word == "unknot" {
                Expr::Unknot
            } else {
                Expr::Name(word)
            });
        }
        if *self.peek() != Tok::Open {
            self.pos = keyword_start;
            return Err(self.error_here(format!("`{word}` must be followed by `(`")));
        }
        self.next();
        let e = match word.as_str() {
            "T" => {
                let p = self.int()?;
                self.expect(Tok::Comma)?;
                let q = self.int()?;
                Expr::Torus(p, q)
            }
            "sum" => Expr::Sum(self.list()?),
            "cable" => {
                let p = self.int()?;
                self.expect(Tok::Comma)?;
                let q = self.int()?;
                self.expect(Tok::Semi)?;
                Expr::Cable(p, q, Box::new(self.knot()?))
            }
            "splice" => {
                let n = self.name()?;
                self.expect(Tok::Semi)?;
                Expr::Splice(n, self.list()?)
            }
            "mirror" => Expr::Mirror(Box::new(self.knot()?)),
            _ => Expr::Rev(Box::new(self.knot()?)),
        };
        self.expect(Tok::Close)?;
        Ok(e)
    }
}

/// Syntax only; names are not looked up.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let toks = Lexer {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    }
    .tokens()?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.knot()?;
    if *p.peek() != Tok::End {
        return Err(p.error_here(format!("unexpected {} after expression", p.peek())));
    }
    Ok(e)
}

/// Looks names up and builds the (not yet canonical) tree.
pub fn resolve(cat: &Catalogue, e: &Expr) -> Result<SpliceTree> {
    Ok(match e {
        Expr::Unknot => SpliceTree::Unknot,
        Expr::Torus(p, q) => SpliceTree::torus(*p, *q)?,
        Expr::Name(n) => {
            if cat.knot(n).is_some() {
                SpliceTree::leaf(n.clone())
            } else if let Some(l) = cat.link(n) {
                return Err(Error::Arity {
                    name: n.clone(),
                    expected: l.arity,
                    got: 0,
                });
            } else {
                return Err(Error::UnknownGenerator(n.clone()));
            }
        }
        Expr::Sum(xs) => {
            SpliceTree::keychain(xs.iter().map(|x| resolve(cat, x)).collect::<Result<_>>()?)
        }
        Expr::Cable(p, q, x) => SpliceTree::cable(*p, *q, resolve(cat, x)?)?,
        Expr::Splice(n, xs) => {
            super::link_entry(cat, n, xs.len())?;
            SpliceTree::satellite(
                n.clone(),
                xs.iter().map(|x| resolve(cat, x)).collect::<Result<_>>()?,
            )
        }
        Expr::Mirror(x) => resolve(cat, x)?.mirror(),
        Expr::Rev(x) => resolve(cat, x)?.reverse(),
    })
}

pub fn parse_tree(cat: &Catalogue, text: &str) -> Result<SpliceTree> {
    resolve(cat, &parse_expr(text)?)
}

fn flagged(mut e: Expr, mirror: bool, reversed: bool) -> Expr {
    if reversed {
        e = Expr::Rev(Box::new(e));
    }
    if mirror {
        e = Expr::Mirror(Box::new(e));
    }
    e
}

impl SpliceTree {
    /// An expression that resolves back to exactly this tree.
    pub fn to_expr(&self) -> Expr {
        match self {
            SpliceTree::Unknot => Expr::Unknot,
            SpliceTree::Torus { p, q, chirality } => {
                Expr::Torus(*p as i64, *q as i64 * chirality.as_i8() as i64)
            }
            SpliceTree::HypLeaf {
                name,
                mirror,
                reversed,
            } => flagged(Expr::Name(name.clone()), *mirror, *reversed),
            SpliceTree::Keychain { children } if children.is_empty() => Expr::Unknot,
            SpliceTree::Keychain { children } => {
                Expr::Sum(children.iter().map(SpliceTree::to_expr).collect())
            }
            SpliceTree::Cable { p, q, child } => {
                Expr::Cable(*p as i64, *q, Box::new(child.to_expr()))
            }
            SpliceTree::HypSatellite {
                name,
                children,
                mirror,
                reversed,
            } => {
                // mirror(...) also mirrors the slots, so pre-mirror them
                let slots = children
                    .iter()
                    .map(|c| if *mirror { c.mirror() } else { c.clone() })
                    .map(|c| c.to_expr())
                    .collect();
                flagged(Expr::Splice(name.clone(), slots), *mirror, *reversed)
            }
        }
    }
}

impl fmt::Display for SpliceTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}
