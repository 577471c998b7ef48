//! Symbolic splicing diagrams and their structure maps.
//!
//! A diagram of arity `k` is a long-knot word `L₀`, `k` puck words
//! `L₁..L_k`, the unordered set of puck pairs whose interiors are declared to
//! meet, and a height witness `σ` (`σ(1)` lowest). Composites carry the block
//! witness of their factors so that word-level associativity holds on the nose.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{structural, Error, Result};
use crate::perm::{block_perm, Perm};
use crate::word::{conjugate, product, reduce, GroupWord, LetterKind};

#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct SpliceElement {
    base: GroupWord,
    pucks: Vec<GroupWord>,
    overlaps: BTreeSet<(usize, usize)>,
    witness: Perm,
}

impl SpliceElement {
    pub fn new(
        base: GroupWord,
        pucks: Vec<GroupWord>,
        overlaps: impl IntoIterator<Item = (usize, usize)>,
        witness: Perm,
    ) -> Result<Self> {
        let k = pucks.len();
        if witness.len() != k {
            return structural(format!(
                "height permutation on {} points for {} pucks",
                witness.len(),
                k
            ));
        }
        let mut pairs = BTreeSet::new();
        for (i, j) in overlaps {
            if i == j || i == 0 || j == 0 || i > k || j > k {
                return structural(format!("overlap pair ({i}, {j}) out of range"));
            }
            pairs.insert((i.min(j), i.max(j)));
        }
        Ok(SpliceElement {
            base: reduce(&base),
            pucks: pucks.iter().map(reduce).collect(),
            overlaps: pairs,
            witness,
        })
    }

    /// A generator: base `K.{name}`, pucks `P.{name}_i`.
    pub fn generator(
        name: &str,
        k: usize,
        overlaps: impl IntoIterator<Item = (usize, usize)>,
        witness: Perm,
    ) -> Result<Self> {
        let pucks = (1..=k)
            .map(|i| GroupWord::letter(LetterKind::Puck, format!("{name}_{i}")))
            .collect();
        SpliceElement::new(
            GroupWord::letter(LetterKind::Knot, name),
            pucks,
            overlaps,
            witness,
        )
    }

    /// The unit `(Id, Id, e)`.
    pub fn identity() -> Self {
        SpliceElement {
            base: GroupWord::empty(),
            pucks: vec![GroupWord::empty()],
            overlaps: BTreeSet::new(),
            witness: Perm::identity(1),
        }
    }

    /// A long knot, i.e. an arity-0 diagram.
    pub fn knot(word: GroupWord) -> Self {
        SpliceElement {
            base: reduce(&word),
            pucks: Vec::new(),
            overlaps: BTreeSet::new(),
            witness: Perm::identity(0),
        }
    }

    pub fn arity(&self) -> usize {
        self.pucks.len()
    }

    pub fn base(&self) -> &GroupWord {
        &self.base
    }

    pub fn pucks(&self) -> &[GroupWord] {
        &self.pucks
    }

    pub fn overlaps(&self) -> &BTreeSet<(usize, usize)> {
        &self.overlaps
    }

    pub fn overlap(&self, i: usize, j: usize) -> bool {
        self.overlaps.contains(&(i.min(j), i.max(j)))
    }

    pub fn witness(&self) -> &Perm {
        &self.witness
    }

    /// Height constraints `(i, j)`, puck `i` below puck `j`, on meeting pairs.
    pub fn constraints(&self) -> BTreeSet<(usize, usize)> {
        let h = self.witness.inverse();
        self.overlaps
            .iter()
            .map(|&(i, j)| {
                if h.apply(i) < h.apply(j) {
                    (i, j)
                } else {
                    (j, i)
                }
            })
            .collect()
    }

    /// Equality of the underlying classes: words and constraints, any witness.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.base == other.base
            && self.pucks == other.pucks
            && self.overlaps == other.overlaps
            && self.constraints() == other.constraints()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serialisable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: SpliceElement = serde_json::from_value(value.clone())
            .map_err(|e| Error::Structural(format!("bad diagram JSON: {e}")))?;
        SpliceElement::new(raw.base, raw.pucks, raw.overlaps, raw.witness)
    }
}

impl fmt::Display for SpliceElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.base)?;
        for p in &self.pucks {
            write!(f, "; {p}")?;
        }
        write!(f, " | {})", self.witness)
    }
}

fn arity_error(expected: usize, got: usize) -> Error {
    Error::Arity {
        name: "splice".into(),
        expected,
        got,
    }
}

/// `L.F = (L_{σ(k)}.f_{σ(k)}) ∘ ⋯ ∘ (L_{σ(1)}.f_{σ(1)}) ∘ L₀`.
pub fn splice_act(element: &SpliceElement, f: &[GroupWord]) -> Result<GroupWord> {
    if f.len() != element.arity() {
        return Err(arity_error(element.arity(), f.len()));
    }
    let mut parts = Vec::with_capacity(f.len() + 1);
    for pos in (1..=f.len()).rev() {
        let i = element.witness.apply(pos);
        parts.push(conjugate(&element.pucks[i - 1], &f[i - 1]));
    }
    parts.push(element.base.clone());
    Ok(product(&parts))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComposeMode {
    Correct,
    /// Leaves out the closing `J⁻¹` of the top conjugator in the base entry.
    /// Only for exercising the checkers.
    DropConjugator,
}

pub fn splice_compose(outer: &SpliceElement, args: &[SpliceElement]) -> Result<SpliceElement> {
    splice_compose_with(outer, args, ComposeMode::Correct)
}

pub fn splice_compose_with(
    outer: &SpliceElement,
    args: &[SpliceElement],
    mode: ComposeMode,
) -> Result<SpliceElement> {
    let k = outer.arity();
    if args.len() != k {
        return Err(arity_error(k, args.len()));
    }
    let alpha = &outer.witness;
    // conj[pos] = J_{α(pos)} L_{α(pos),0} J_{α(pos)}⁻¹
    let conj: Vec<GroupWord> = (1..=k)
        .map(|pos| {
            let a = alpha.apply(pos);
            let j = &outer.pucks[a - 1];
            if mode == ComposeMode::DropConjugator && pos == k {
                j.mul(&args[a - 1].base)
            } else {
                conjugate(j, &args[a - 1].base)
            }
        })
        .collect();
    // above[pos] = conj[k] ∘ ⋯ ∘ conj[pos+1]
    let mut above = vec![GroupWord::empty(); k + 1];
    for pos in (0..k).rev() {
        above[pos] = above[pos + 1].mul(&conj[pos]);
    }
    let base = above[0].mul(&outer.base);

    let inv_alpha = alpha.inverse();
    let mut pucks = Vec::new();
    let mut owner = Vec::new();
    for (a, arg) in args.iter().enumerate() {
        let prefix = above[inv_alpha.apply(a + 1)].mul(&outer.pucks[a]);
        for (b, l) in arg.pucks.iter().enumerate() {
            pucks.push(prefix.mul(l));
            owner.push((a + 1, b + 1));
        }
    }

    let mut overlaps = BTreeSet::new();
    for x in 0..owner.len() {
        for y in x + 1..owner.len() {
            let ((a, b), (a2, b2)) = (owner[x], owner[y]);
            let meet = if a == a2 {
                args[a - 1].overlap(b, b2)
            } else {
                outer.overlap(a, a2)
            };
            if meet {
                overlaps.insert((x + 1, y + 1));
            }
        }
    }

    let arities: Vec<usize> = args.iter().map(SpliceElement::arity).collect();
    let inners: Vec<Perm> = args.iter().map(|l| l.witness.clone()).collect();
    let witness = block_perm(alpha, &arities, &inners)?;
    Ok(SpliceElement {
        base,
        pucks,
        overlaps,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MismatchLocation {
    Arity,
    Base,
    Puck(usize),
    Witness,
    Overlaps,
}

impl fmt::Display for MismatchLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MismatchLocation::Arity => write!(f, "arity"),
            MismatchLocation::Base => write!(f, "entry 0"),
            MismatchLocation::Puck(i) => write!(f, "puck {i}"),
            MismatchLocation::Witness => write!(f, "height witness"),
            MismatchLocation::Overlaps => write!(f, "overlap pairs"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub location: MismatchLocation,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} differs: {} vs {}",
            self.location, self.left, self.right
        )
    }
}

/// First entry where two diagrams differ, if any.
pub fn compare(left: &SpliceElement, right: &SpliceElement) -> Option<Mismatch> {
    let m = |location, l: String, r: String| {
        Some(Mismatch {
            location,
            left: l,
            right: r,
        })
    };
    if left.arity() != right.arity() {
        return m(
            MismatchLocation::Arity,
            left.arity().to_string(),
            right.arity().to_string(),
        );
    }
    if left.base != right.base {
        return m(
            MismatchLocation::Base,
            left.base.to_string(),
            right.base.to_string(),
        );
    }
    for (i, (l, r)) in left.pucks.iter().zip(&right.pucks).enumerate() {
        if l != r {
            return m(MismatchLocation::Puck(i + 1), l.to_string(), r.to_string());
        }
    }
    if left.witness != right.witness {
        return m(
            MismatchLocation::Witness,
            left.witness.to_string(),
            right.witness.to_string(),
        );
    }
    if left.overlaps != right.overlaps {
        return m(
            MismatchLocation::Overlaps,
            format!("{:?}", left.overlaps),
            format!("{:?}", right.overlaps),
        );
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociativityReport {
    pub holds: bool,
    pub mismatch: Option<Mismatch>,
}

/// Compares `J.(L.M)` with `(J.L).M` entry by entry; `ms[a]` feeds `ls[a]`.
pub fn verify_associativity(
    j: &SpliceElement,
    ls: &[SpliceElement],
    ms: &[Vec<SpliceElement>],
) -> AssociativityReport {
    verify_associativity_with(j, ls, ms, ComposeMode::Correct)
}

pub fn verify_associativity_with(
    j: &SpliceElement,
    ls: &[SpliceElement],
    ms: &[Vec<SpliceElement>],
    mode: ComposeMode,
) -> AssociativityReport {
    let failed = |location, left: String, right: String| AssociativityReport {
        holds: false,
        mismatch: Some(Mismatch {
            location,
            left,
            right,
        }),
    };
    if ls.len() != ms.len() {
        return failed(
            MismatchLocation::Arity,
            ls.len().to_string(),
            ms.len().to_string(),
        );
    }
    let sides = (|| -> Result<(SpliceElement, SpliceElement)> {
        let inner: Vec<SpliceElement> = ls
            .iter()
            .zip(ms)
            .map(|(l, m)| splice_compose_with(l, m, mode))
            .collect::<Result<_>>()?;
        let left = splice_compose_with(j, &inner, mode)?;
        let flat: Vec<SpliceElement> = ms.iter().flatten().cloned().collect();
        let right = splice_compose_with(&splice_compose_with(j, ls, mode)?, &flat, mode)?;
        Ok((left, right))
    })();
    match sides {
        Err(e) => failed(MismatchLocation::Arity, e.to_string(), String::new()),
        Ok((left, right)) => match compare(&left, &right) {
            None => AssociativityReport {
                holds: true,
                mismatch: None,
            },
            Some(mismatch) => AssociativityReport {
                holds: false,
                mismatch: Some(mismatch),
            },
        },
    }
}

/// Element `(g₀; γ; g₁..g_k)` of `Σ*_k ≀ G` with `G` the free group on symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolicWreath {
    pub outer: GroupWord,
    pub perm: Perm,
    pub inner: Vec<GroupWord>,
}

impl SymbolicWreath {
    pub fn new(outer: GroupWord, perm: Perm, inner: Vec<GroupWord>) -> Result<Self> {
        if inner.len() != perm.len() {
            return structural(format!(
                "wreath element on {} slots given {} inner entries",
                perm.len(),
                inner.len()
            ));
        }
        Ok(SymbolicWreath {
            outer: reduce(&outer),
            perm,
            inner: inner.iter().map(reduce).collect(),
        })
    }

    pub fn identity(k: usize) -> Self {
        SymbolicWreath {
            outer: GroupWord::empty(),
            perm: Perm::identity(k),
            inner: vec![GroupWord::empty(); k],
        }
    }

    /// `(e; γ; e..e)`, the image of `Σ_k`.
    pub fn from_perm(perm: Perm) -> Self {
        let k = perm.len();
        SymbolicWreath {
            outer: GroupWord::empty(),
            perm,
            inner: vec![GroupWord::empty(); k],
        }
    }

    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    pub fn inverse(&self) -> Self {
        let perm = self.perm.inverse();
        let inner = (1..=self.arity())
            .map(|i| self.inner[perm.apply(i) - 1].inverse())
            .collect();
        SymbolicWreath {
            outer: self.outer.inverse(),
            perm,
            inner,
        }
    }

    /// `(g₀h₀; γ∘δ; g_{δ(i)}hᵢ)`.
    pub fn mul(&self, other: &SymbolicWreath) -> Result<Self> {
        if self.arity() != other.arity() {
            return structural("wreath arities differ");
        }
        let inner = (1..=self.arity())
            .map(|i| self.inner[other.perm.apply(i) - 1].mul(&other.inner[i - 1]))
            .collect();
        Ok(SymbolicWreath {
            outer: self.outer.mul(&other.outer),
            perm: self.perm.compose(&other.perm)?,
            inner,
        })
    }
}

/// Right action `J.g = (g₀⁻¹J₀g₀; g₀⁻¹J_{γ(i)}gᵢ; γ⁻¹σ)`.
pub fn wreath_act(element: &SpliceElement, g: &SymbolicWreath) -> Result<SpliceElement> {
    if g.arity() != element.arity() {
        return Err(arity_error(element.arity(), g.arity()));
    }
    let g0_inv = g.outer.inverse();
    let base = product([&g0_inv, &element.base, &g.outer]);
    let pucks = (1..=g.arity())
        .map(|i| {
            product([
                &g0_inv,
                &element.pucks[g.perm.apply(i) - 1],
                &g.inner[i - 1],
            ])
        })
        .collect();
    let inv = g.perm.inverse();
    let overlaps = element
        .overlaps
        .iter()
        .map(|&(i, j)| {
            let (x, y) = (inv.apply(i), inv.apply(j));
            (x.min(y), x.max(y))
        })
        .collect();
    Ok(SpliceElement {
        base,
        pucks,
        overlaps,
        witness: inv.compose(&element.witness)?,
    })
}

/// Left action of `G` by `g.L = L.(g⁻¹; id; e..e)`.
pub fn group_act_left(g: &GroupWord, element: &SpliceElement) -> SpliceElement {
    let w = SymbolicWreath {
        outer: g.inverse(),
        perm: Perm::identity(element.arity()),
        inner: vec![GroupWord::empty(); element.arity()],
    };
    wreath_act(element, &w).expect("arities agree")
}

/// Both sides of `(J.g).L = (J.(ḡ.L)).g̃`.
pub fn inner_equivariance_sides(
    j: &SpliceElement,
    g: &SymbolicWreath,
    ls: &[SpliceElement],
) -> Result<(SpliceElement, SpliceElement)> {
    let left = splice_compose(&wreath_act(j, g)?, ls)?;
    if ls.len() != g.arity() {
        return Err(arity_error(g.arity(), ls.len()));
    }
    let inv = g.perm.inverse();
    let moved: Vec<SpliceElement> = (1..=g.arity())
        .map(|m| {
            let src = inv.apply(m);
            group_act_left(&g.inner[src - 1], &ls[src - 1])
        })
        .collect();
    let arities: Vec<usize> = moved.iter().map(SpliceElement::arity).collect();
    let ids: Vec<Perm> = arities.iter().map(|&n| Perm::identity(n)).collect();
    let total = arities.iter().sum();
    let tilde = SymbolicWreath {
        outer: g.outer.clone(),
        perm: block_perm(&g.perm, &arities, &ids)?,
        inner: vec![GroupWord::empty(); total],
    };
    let right = wreath_act(&splice_compose(j, &moved)?, &tilde)?;
    Ok((left, right))
}

/// Both sides of `J.(L.γ) = (J.L).γ` with `γ_a` acting on `L_a`; each `γ_a`
/// must have trivial outer part.
pub fn outer_equivariance_sides(
    j: &SpliceElement,
    ls: &[SpliceElement],
    gammas: &[SymbolicWreath],
) -> Result<(SpliceElement, SpliceElement)> {
    if ls.len() != gammas.len() {
        return Err(arity_error(ls.len(), gammas.len()));
    }
    if gammas.iter().any(|g| !g.outer.is_empty()) {
        return structural("outer equivariance needs trivial outer entries");
    }
    let acted: Vec<SpliceElement> = ls
        .iter()
        .zip(gammas)
        .map(|(l, g)| wreath_act(l, g))
        .collect::<Result<_>>()?;
    let left = splice_compose(j, &acted)?;
    let arities: Vec<usize> = ls.iter().map(SpliceElement::arity).collect();
    let perms: Vec<Perm> = gammas.iter().map(|g| g.perm.clone()).collect();
    let combined = SymbolicWreath {
        outer: GroupWord::empty(),
        perm: block_perm(&Perm::identity(ls.len()), &arities, &perms)?,
        inner: gammas
            .iter()
            .flat_map(|g| g.inner.iter().cloned())
            .collect(),
    };
    let right = wreath_act(&splice_compose(j, ls)?, &combined)?;
    Ok((left, right))
}
