//! Words in the free product of a free group on typed symbols with the group
//! of diagonal positive affine maps.
//!
//! Words are read functionally: the word `A B` stands for `A ∘ B`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::cubes::AffineBox;
use crate::error::{structural, Error, Result};
use crate::overlap::OverlapElement;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LetterKind {
    Puck,
    Knot,
    Group,
}

impl LetterKind {
    fn prefix(self) -> &'static str {
        match self {
            LetterKind::Puck => "P",
            LetterKind::Knot => "K",
            LetterKind::Group => "G",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Free {
        kind: LetterKind,
        name: String,
        inverse: bool,
    },
    /// An exact affine map; multiplies by composition.
    Cube(AffineBox),
}

impl Letter {
    pub fn free(kind: LetterKind, name: impl Into<String>) -> Self {
        Letter::Free {
            kind,
            name: name.into(),
            inverse: false,
        }
    }

    pub fn inverse(&self) -> Letter {
        match self {
            Letter::Free {
                kind,
                name,
                inverse,
            } => Letter::Free {
                kind: *kind,
                name: name.clone(),
                inverse: !inverse,
            },
            Letter::Cube(b) => Letter::Cube(b.inverse()),
        }
    }

    fn cancels(&self, next: &Letter) -> bool {
        match (self, next) {
            (
                Letter::Free {
                    kind: k1,
                    name: n1,
                    inverse: i1,
                },
                Letter::Free {
                    kind: k2,
                    name: n2,
                    inverse: i2,
                },
            ) => k1 == k2 && n1 == n2 && i1 != i2,
            _ => false,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::Free {
                kind,
                name,
                inverse,
            } => {
                write!(f, "{}.{}", kind.prefix(), name)?;
                if *inverse {
                    write!(f, "^-1")?;
                }
                Ok(())
            }
            Letter::Cube(b) => write!(f, "{b}"),
        }
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('[') {
            return Ok(Letter::Cube(s.parse()?));
        }
        let (body, inverse) = match s.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let (prefix, name) = body
            .split_once('.')
            .ok_or_else(|| Error::Structural(format!("letter `{s}` lacks a kind prefix")))?;
        let kind = match prefix {
            "P" => LetterKind::Puck,
            "K" => LetterKind::Knot,
            "G" => LetterKind::Group,
            _ => return structural(format!("unknown letter kind `{prefix}`")),
        };
        if !valid_name(name) {
            return structural(format!("invalid letter name `{name}`"));
        }
        Ok(Letter::Free {
            kind,
            name: name.to_string(),
            inverse,
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord::default()
    }

    /// The word exactly as given, unreduced.
    pub fn from_letters(letters: Vec<Letter>) -> Self {
        GroupWord { letters }
    }

    pub fn letter(kind: LetterKind, name: impl Into<String>) -> Self {
        GroupWord {
            letters: vec![Letter::free(kind, name)],
        }
    }

    pub fn cube(map: AffineBox) -> Self {
        reduce(&GroupWord {
            letters: vec![Letter::Cube(map)],
        })
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Free concatenation, no reduction.
    pub fn concat(&self, other: &GroupWord) -> GroupWord {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        GroupWord { letters }
    }

    /// Reduced product `self ∘ other`.
    pub fn mul(&self, other: &GroupWord) -> GroupWord {
        reduce(&self.concat(other))
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    pub fn is_reduced(&self) -> bool {
        reduce(self) == *self
    }
}

/// Reduced product of the words in the order given.
pub fn product<'a>(words: impl IntoIterator<Item = &'a GroupWord>) -> GroupWord {
    let mut stack = Vec::new();
    for w in words {
        for l in &w.letters {
            push_reduced(&mut stack, l.clone());
        }
    }
    GroupWord { letters: stack }
}

fn merge_cubes(a: &AffineBox, b: &AffineBox) -> Option<AffineBox> {
    a.compose(b).ok()
}

fn push_reduced(stack: &mut Vec<Letter>, letter: Letter) {
    if let Letter::Cube(b) = &letter {
        if b.is_identity() {
            return;
        }
    }
    match stack.last() {
        Some(top) if top.cancels(&letter) => {
            stack.pop();
        }
        Some(Letter::Cube(a)) => match &letter {
            Letter::Cube(b) => match merge_cubes(a, b) {
                Some(m) => {
                    stack.pop();
                    if !m.is_identity() {
                        push_reduced(stack, Letter::Cube(m));
                    }
                }
                None => stack.push(letter),
            },
            _ => stack.push(letter),
        },
        _ => stack.push(letter),
    }
}

/// Normal form: no `x x⁻¹`, no adjacent mergeable cubes, no identity cubes.
pub fn reduce(w: &GroupWord) -> GroupWord {
    product([w])
}

/// Applies single rewrite steps at uniformly random positions until none apply.
pub fn reduce_random_order<R: Rng + ?Sized>(w: &GroupWord, rng: &mut R) -> GroupWord {
    let mut letters = w.letters.clone();
    loop {
        let mut sites = Vec::new();
        for (i, l) in letters.iter().enumerate() {
            if matches!(l, Letter::Cube(b) if b.is_identity()) {
                sites.push((i, 1));
            }
            if let Some(next) = letters.get(i + 1) {
                let mergeable = match (l, next) {
                    (Letter::Cube(a), Letter::Cube(b)) => a.dim() == b.dim(),
                    _ => l.cancels(next),
                };
                if mergeable {
                    sites.push((i, 2));
                }
            }
        }
        if sites.is_empty() {
            return GroupWord { letters };
        }
        let (i, width) = sites[rng.gen_range(0..sites.len())];
        if width == 1 {
            letters.remove(i);
            continue;
        }
        let merged = match (&letters[i], &letters[i + 1]) {
            (Letter::Cube(a), Letter::Cube(b)) => merge_cubes(a, b).map(Letter::Cube),
            _ => None,
        };
        letters.drain(i..i + 2);
        if let Some(m) = merged {
            letters.insert(i, m);
        }
    }
}

/// `reduce(a · w · a⁻¹)`.
pub fn conjugate(a: &GroupWord, w: &GroupWord) -> GroupWord {
    product([a, w, &a.inverse()])
}

/// The flattened action of overlapping cubes on words:
/// `L_{σ(n)}.f_{σ(n)} ∘ ⋯ ∘ L_{σ(1)}.f_{σ(1)}` with `L.f = L f L⁻¹`, evaluated
/// on the element's stored witness.
pub fn kappa_prime_act(element: &OverlapElement, f: &[GroupWord]) -> Result<GroupWord> {
    if element.arity() != f.len() {
        return Err(Error::Arity {
            name: "kappa'".into(),
            expected: element.arity(),
            got: f.len(),
        });
    }
    let sigma = element.witness();
    let mut parts = Vec::with_capacity(f.len());
    for pos in (1..=f.len()).rev() {
        let i = sigma.apply(pos);
        let cube = GroupWord::cube(element.cubes()[i - 1].as_affine());
        parts.push(conjugate(&cube, &f[i - 1]));
    }
    Ok(product(&parts))
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for GroupWord {
    type Err = Error;
    /// Reads letters separated by whitespace, unreduced; `1` is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(GroupWord::empty());
        }
        let mut letters = Vec::new();
        let mut token = String::new();
        let mut depth = 0usize;
        for c in s.chars() {
            match c {
                '[' => depth += 1,
                ']' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| Error::Structural("unbalanced `]` in word".into()))?
                }
                _ => {}
            }
            if c.is_whitespace() && depth == 0 {
                if !token.is_empty() {
                    letters.push(token.parse()?);
                    token.clear();
                }
            } else {
                token.push(c);
            }
        }
        if depth != 0 {
            return structural("unbalanced `[` in word");
        }
        if !token.is_empty() {
            letters.push(token.parse()?);
        }
        Ok(GroupWord { letters })
    }
}

impl serde::Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for GroupWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
