//! Permutations, block permutations, signed permutations and wreath products.
//!
//! Everything is 1-indexed: a [`Perm`] on `{1..n}` stores `images[i-1] = p(i)`.
//! Composition follows function notation, `p.compose(&q) = p ∘ q`, so `q` is
//! applied first.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm {
    images: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;
    fn try_from(images: Vec<usize>) -> Result<Self> {
        Perm::from_images(images)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.images
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (1..=n).collect(),
        }
    }

    /// Builds `i ↦ images[i-1]`, rejecting anything that is not a bijection of `{1..n}`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x == 0 || x > n || seen[x - 1] {
                return structural(format!("{images:?} is not a permutation of 1..{n}"));
            }
            seen[x - 1] = true;
        }
        Ok(Perm { images })
    }

    /// Product of disjoint cycles on `{1..n}`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (1..=n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                if x == 0 || x > n {
                    return structural(format!("cycle entry {x} outside 1..{n}"));
                }
                if touched[x - 1] {
                    return structural(format!("cycles are not disjoint at {x}"));
                }
                touched[x - 1] = true;
                images[x - 1] = cycle[(pos + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    /// The transposition `(a b)` on `{1..n}`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Self> {
        Self::from_cycles(n, &[vec![a, b]])
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x - 1] = i + 1;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.len() != other.len() {
            return structural(format!(
                "cannot compose permutations of {} and {} points",
                self.len(),
                other.len()
            ));
        }
        Ok(Perm {
            images: other.images.iter().map(|&x| self.images[x - 1]).collect(),
        })
    }

    /// Disjoint cycles, each starting at its least element, ordered by that element.
    /// Fixed points appear as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start - 1] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x - 1] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> u64 {
        self.cycles()
            .iter()
            .fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }

    /// Reads `(1 2 3)(4)`; the number of points is the largest entry mentioned.
    /// `()` is the permutation of no points.
    pub fn parse_cycles(text: &str) -> Result<Self> {
        if text.trim() == "()" {
            return Ok(Perm::identity(0));
        }
        let cycles = parse_cycle_groups(text)?;
        let mut cycles_plain = Vec::with_capacity(cycles.len());
        let mut n = 0;
        for group in cycles {
            if group.trailing.is_some() || group.entries.iter().any(|e| e.1.is_some()) {
                return structural("unsigned permutation text carries sign marks");
            }
            let entries: Vec<usize> = group.entries.iter().map(|e| e.0).collect();
            n = n.max(entries.iter().copied().max().unwrap_or(0));
            cycles_plain.push(entries);
        }
        Perm::from_cycles(n, &cycles_plain)
    }

    /// All permutations of `{1..n}` in lexicographic order of their image lists.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Perm {
                images: current.clone(),
            });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                break;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        for cycle in self.cycles() {
            write!(f, "(")?;
            for (k, x) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Block permutation induced by `sigma ∈ Σ_k` together with inner permutations
/// `inners[a] ∈ Σ_{j_a}`:
///
/// `β⁻¹(Σ_{i<a} j_i + b) = Σ_{i<σ⁻¹(a)} j_{σ(i)} + α_a⁻¹(b)`.
pub fn block_perm(sigma: &Perm, arities: &[usize], inners: &[Perm]) -> Result<Perm> {
    let k = sigma.len();
    if arities.len() != k || inners.len() != k {
        return structural(format!(
            "block permutation needs {k} arities and inner permutations, got {} and {}",
            arities.len(),
            inners.len()
        ));
    }
    for (a, (inner, &j)) in inners.iter().zip(arities).enumerate() {
        if inner.len() != j {
            return structural(format!(
                "inner permutation {} acts on {} points but block has {j}",
                a + 1,
                inner.len()
            ));
        }
    }
    let sigma_inv = sigma.inverse();
    let total: usize = arities.iter().sum();

    let mut block_start = Vec::with_capacity(k);
    let mut acc = 0;
    for &j in arities {
        block_start.push(acc);
        acc += j;
    }
    // start of each block in the σ-reordered stacking, indexed by stacking position
    let mut stacked_start = Vec::with_capacity(k);
    acc = 0;
    for i in 1..=k {
        stacked_start.push(acc);
        acc += arities[sigma.apply(i) - 1];
    }

    let mut beta_inv = vec![0; total];
    for a in 1..=k {
        let alpha_inv = inners[a - 1].inverse();
        for b in 1..=arities[a - 1] {
            let src = block_start[a - 1] + b;
            let dst = stacked_start[sigma_inv.apply(a) - 1] + alpha_inv.apply(b);
            beta_inv[src - 1] = dst;
        }
    }
    Ok(Perm::from_images(beta_inv)?.inverse())
}

/// ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Minus,
    Plus,
}

impl Sign {
    pub fn from_i8(s: i8) -> Result<Self> {
        match s {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => structural(format!("{s} is not a sign")),
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Element of `Σ_n ⋉ {±1}^n`, acting on `{±1..±n}` by `i ↦ signs[i]·perm(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    perm: Perm,
    signs: Vec<Sign>,
}

impl SignedPerm {
    pub fn new(perm: Perm, signs: Vec<Sign>) -> Result<Self> {
        if perm.len() != signs.len() {
            return structural(format!(
                "signed permutation on {} points given {} signs",
                perm.len(),
                signs.len()
            ));
        }
        Ok(SignedPerm { perm, signs })
    }

    pub fn identity(n: usize) -> Self {
        SignedPerm {
            perm: Perm::identity(n),
            signs: vec![Sign::Plus; n],
        }
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Image of a signed point `±i`.
    pub fn apply(&self, i: i64) -> i64 {
        let idx = i.unsigned_abs() as usize;
        let image = self.signs[idx - 1].as_i8() as i64 * self.perm.apply(idx) as i64;
        if i < 0 {
            -image
        } else {
            image
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> Result<SignedPerm> {
        let perm = self.perm.compose(&other.perm)?;
        let signs = (1..=self.len())
            .map(|i| other.signs[i - 1] * self.signs[other.perm.apply(i) - 1])
            .collect();
        Ok(SignedPerm { perm, signs })
    }

    pub fn inverse(&self) -> SignedPerm {
        let perm = self.perm.inverse();
        let signs = (1..=self.len())
            .map(|i| self.signs[perm.apply(i) - 1])
            .collect();
        SignedPerm { perm, signs }
    }

    /// Cycles of the underlying permutation paired with the product of signs along each.
    pub fn signed_cycles(&self) -> Vec<(Vec<usize>, Sign)> {
        self.perm
            .cycles()
            .into_iter()
            .map(|c| {
                let s = c.iter().fold(Sign::Plus, |acc, &x| acc * self.signs[x - 1]);
                (c, s)
            })
            .collect()
    }

    /// A `k`-cycle with net sign `−1` has order `2k`.
    pub fn order(&self) -> u64 {
        self.signed_cycles().iter().fold(1u64, |acc, (c, s)| {
            let len = c.len() as u64;
            acc.lcm(&if s.is_plus() { len } else { 2 * len })
        })
    }

    pub fn cycle_type(&self) -> SignedCycleType {
        signed_cycle_type(self)
    }

    /// Representative in the `(a₁ … a_j)−` normal form: within each cycle every
    /// arrow preserves sign except possibly the last.
    pub fn from_signed_cycles(n: usize, cycles: &[(Vec<usize>, Sign)]) -> Result<Self> {
        let plain: Vec<Vec<usize>> = cycles.iter().map(|(c, _)| c.clone()).collect();
        let perm = Perm::from_cycles(n, &plain)?;
        let mut signs = vec![Sign::Plus; n];
        for (c, s) in cycles {
            if let Some(&last) = c.last() {
                signs[last - 1] = *s;
            }
        }
        Ok(SignedPerm { perm, signs })
    }

    /// Reads the cycle notation `(1 2 3)- (4)+`. A trailing sign after `)`
    /// marks the arrow leaving the last entry; an entry written `2-` marks the
    /// arrow leaving that entry. Omitted marks mean `+`.
    pub fn parse(text: &str) -> Result<Self> {
        let groups = parse_cycle_groups(text)?;
        let mut n = 0;
        let mut cycles = Vec::new();
        let mut marks = Vec::new();
        for group in &groups {
            let entries: Vec<usize> = group.entries.iter().map(|e| e.0).collect();
            n = n.max(entries.iter().copied().max().unwrap_or(0));
            let last = group.entries.len() - 1;
            for (pos, (x, mark)) in group.entries.iter().enumerate() {
                let mut sign = mark.unwrap_or(Sign::Plus);
                if pos == last {
                    if let Some(t) = group.trailing {
                        if mark.is_some() {
                            return structural(format!("entry {x} carries two sign marks"));
                        }
                        sign = t;
                    }
                }
                marks.push((*x, sign));
            }
            cycles.push(entries);
        }
        let perm = Perm::from_cycles(n, &cycles)?;
        let mut signs = vec![Sign::Plus; n];
        for (x, s) in marks {
            signs[x - 1] = s;
        }
        Ok(SignedPerm { perm, signs })
    }

    /// Every signed permutation of `{1..n}`.
    pub fn all(n: usize) -> Vec<SignedPerm> {
        let mut out = Vec::new();
        for perm in Perm::all(n) {
            for mask in 0..(1u32 << n) {
                let signs = (0..n)
                    .map(|i| {
                        if mask & (1 << i) != 0 {
                            Sign::Minus
                        } else {
                            Sign::Plus
                        }
                    })
                    .collect();
                out.push(SignedPerm {
                    perm: perm.clone(),
                    signs,
                });
            }
        }
        out
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "()");
        }
        for (ci, cycle) in self.perm.cycles().iter().enumerate() {
            if ci > 0 {
                write!(f, " ")?;
            }
            write!(f, "(")?;
            let last = cycle.len() - 1;
            for (k, &x) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                if k != last && !self.signs[x - 1].is_plus() {
                    write!(f, "-")?;
                }
            }
            write!(f, "){}", self.signs[cycle[last] - 1])?;
        }
        Ok(())
    }
}

/// Multiset of `(length, sign)` pairs; the conjugacy invariant of `Σ_n ≀ Z_2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct SignedCycleType {
    counts: BTreeMap<(usize, Sign), usize>,
}

impl SignedCycleType {
    pub fn from_cycles(cycles: impl IntoIterator<Item = (usize, Sign)>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (len, sign) in cycles {
            if len == 0 {
                return structural("cycle of length 0");
            }
            *counts.entry((len, sign)).or_insert(0) += 1;
        }
        Ok(SignedCycleType { counts })
    }

    /// Cycles listed longest first, `+` before `−` at equal length.
    pub fn cycles(&self) -> Vec<(usize, Sign)> {
        let mut out = Vec::new();
        for (&(len, sign), &m) in self.counts.iter().rev() {
            out.extend(std::iter::repeat_n((len, sign), m));
        }
        out
    }

    pub fn multiplicity(&self, len: usize, sign: Sign) -> usize {
        self.counts.get(&(len, sign)).copied().unwrap_or(0)
    }

    /// Total number of points moved or fixed: `Σ lengths`.
    pub fn degree(&self) -> usize {
        self.counts.iter().map(|(&(len, _), &m)| len * m).sum()
    }

    pub fn num_cycles(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn order(&self) -> u64 {
        self.counts.keys().fold(1u64, |acc, &(len, s)| {
            let len = len as u64;
            acc.lcm(&if s.is_plus() { len } else { 2 * len })
        })
    }

    /// A signed permutation of this type in the `(a₁ … a_j)−` normal form,
    /// cycles placed on consecutive points.
    pub fn witness(&self) -> SignedPerm {
        let n = self.degree();
        let mut next = 1;
        let mut cycles = Vec::new();
        for (len, sign) in self.cycles() {
            cycles.push(((next..next + len).collect::<Vec<_>>(), sign));
            next += len;
        }
        SignedPerm::from_signed_cycles(n, &cycles).expect("consecutive cycles are disjoint")
    }

    /// Reads a cycle type written as cycles, e.g. `(5)-` or `(6)+ (1)+`; each
    /// group's single entry is the cycle length. Full cycles such as
    /// `(1 2 3 4 5)-` are also accepted and contribute their own length.
    pub fn parse(text: &str) -> Result<Self> {
        let groups = parse_cycle_groups(text)?;
        let mut cycles = Vec::new();
        for g in groups {
            if g.entries.iter().any(|e| e.1.is_some()) {
                return structural("cycle type entries cannot carry inner sign marks");
            }
            let sign = g.trailing.unwrap_or(Sign::Plus);
            let len = if g.entries.len() == 1 {
                g.entries[0].0
            } else {
                g.entries.len()
            };
            cycles.push((len, sign));
        }
        SignedCycleType::from_cycles(cycles)
    }
}

impl fmt::Display for SignedCycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "{{}}");
        }
        for (i, (len, sign)) in cycles.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({len}){sign}")?;
        }
        Ok(())
    }
}

pub fn signed_cycle_type(w: &SignedPerm) -> SignedCycleType {
    SignedCycleType::from_cycles(w.signed_cycles().into_iter().map(|(c, s)| (c.len(), s)))
        .expect("cycles are non-empty")
}

/// A finite group given by its multiplication table on `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0
            || table
                .iter()
                .any(|row| row.len() != n || row.iter().any(|&x| x >= n))
        {
            return structural("multiplication table must be square with entries in range");
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::Structural("table has no identity".into()))?;
        let mut inverses = vec![0; n];
        for x in 0..n {
            inverses[x] = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| Error::Structural(format!("element {x} has no inverse")))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return structural("table is not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup {
            table,
            identity,
            inverses,
        })
    }

    /// `Z_2 = {0, 1}` under addition; `1` is the reflection class of `O_2`.
    pub fn z2() -> Self {
        Self::from_table(vec![vec![0, 1], vec![1, 0]]).expect("Z_2 table is valid")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }
}

/// Element `(g₀; γ; g₁, …, g_k)` of `Σ*_k ≀ G`.
///
/// The product is `(g₀; γ; gᵢ)·(h₀; δ; hᵢ) = (g₀h₀; γ∘δ; g_{δ(i)}hᵢ)`, the law
/// under which `J.(g·h) = (J.g).h` for the right action on splicing diagrams.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WreathElement {
    pub outer: usize,
    pub perm: Perm,
    pub inner: Vec<usize>,
}

impl WreathElement {
    pub fn new(group: &FiniteGroup, outer: usize, perm: Perm, inner: Vec<usize>) -> Result<Self> {
        if inner.len() != perm.len() {
            return structural(format!(
                "wreath element on {} slots given {} inner entries",
                perm.len(),
                inner.len()
            ));
        }
        if outer >= group.order() || inner.iter().any(|&g| g >= group.order()) {
            return structural("group entry outside the multiplication table");
        }
        Ok(WreathElement { outer, perm, inner })
    }

    pub fn identity(group: &FiniteGroup, k: usize) -> Self {
        WreathElement {
            outer: group.identity(),
            perm: Perm::identity(k),
            inner: vec![group.identity(); k],
        }
    }

    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    pub fn inverse(&self, group: &FiniteGroup) -> Self {
        let perm = self.perm.inverse();
        let inner = (1..=self.arity())
            .map(|i| group.inv(self.inner[perm.apply(i) - 1]))
            .collect();
        WreathElement {
            outer: group.inv(self.outer),
            perm,
            inner,
        }
    }

    /// Right action on the slot-and-twist set `{0..k} × G`:
    /// `(i, s)·g = (γ⁻¹(i), g_{γ⁻¹(i)}⁻¹ s)`, slot 0 carrying `g₀`.
    pub fn act_on_point(&self, group: &FiniteGroup, slot: usize, twist: usize) -> (usize, usize) {
        if slot == 0 {
            return (0, group.mul(group.inv(self.outer), twist));
        }
        let src = self.perm.inverse().apply(slot);
        (src, group.mul(group.inv(self.inner[src - 1]), twist))
    }
}

pub fn wreath_mul(
    group: &FiniteGroup,
    g: &WreathElement,
    h: &WreathElement,
) -> Result<WreathElement> {
    if g.arity() != h.arity() {
        return structural(format!(
            "cannot multiply wreath elements of arity {} and {}",
            g.arity(),
            h.arity()
        ));
    }
    for x in std::iter::once(&g.outer)
        .chain(&g.inner)
        .chain(std::iter::once(&h.outer))
        .chain(&h.inner)
    {
        if *x >= group.order() {
            return structural("group entry outside the multiplication table");
        }
    }
    let perm = g.perm.compose(&h.perm)?;
    let inner = (1..=g.arity())
        .map(|i| group.mul(g.inner[h.perm.apply(i) - 1], h.inner[i - 1]))
        .collect();
    Ok(WreathElement {
        outer: group.mul(g.outer, h.outer),
        perm,
        inner,
    })
}

struct CycleGroup {
    entries: Vec<(usize, Option<Sign>)>,
    trailing: Option<Sign>,
}

fn parse_cycle_groups(text: &str) -> Result<Vec<CycleGroup>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut groups = Vec::new();
    let err = |pos: usize, msg: &str| Error::Parse {
        line: 1,
        column: pos + 1,
        message: msg.to_string(),
    };
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= chars.len() {
            break;
        }
        if chars[i] != '(' {
            return Err(err(i, "expected `(`"));
        }
        i += 1;
        let mut entries = Vec::new();
        loop {
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == ',' {
                i += 1;
                skip_ws(&mut i);
            }
            if i >= chars.len() {
                return Err(err(i, "unterminated cycle"));
            }
            if chars[i] == ')' {
                i += 1;
                break;
            }
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(err(i, "expected a positive integer"));
            }
            let value: usize = chars[start..i]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| err(start, "integer out of range"))?;
            if value == 0 {
                return Err(err(start, "points are numbered from 1"));
            }
            let mark = match chars.get(i) {
                Some('-') => {
                    i += 1;
                    Some(Sign::Minus)
                }
                Some('+') => {
                    i += 1;
                    Some(Sign::Plus)
                }
                _ => None,
            };
            entries.push((value, mark));
        }
        if entries.is_empty() {
            return Err(err(i - 1, "empty cycle"));
        }
        let trailing = match chars.get(i) {
            Some('-') => {
                i += 1;
                Some(Sign::Minus)
            }
            Some('+') => {
                i += 1;
                Some(Sign::Plus)
            }
            _ => None,
        };
        groups.push(CycleGroup { entries, trailing });
    }
    Ok(groups)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Enumerates pairs `(a, b)` lexicographically, sorts them by
    /// `(σ⁻¹(a), α_a⁻¹(b))` and reads off where each pair lands.
    fn block_perm_oracle(sigma: &Perm, arities: &[usize], inners: &[Perm]) -> Perm {
        let mut pairs = Vec::new();
        for (a, &j) in arities.iter().enumerate() {
            for b in 1..=j {
                pairs.push((a + 1, b));
            }
        }
        let sigma_inv = sigma.inverse();
        let mut sorted = pairs.clone();
        sorted.sort_by_key(|&(a, b)| (sigma_inv.apply(a), inners[a - 1].inverse().apply(b)));
        // β⁻¹(lex position) = sorted position
        let beta_inv: Vec<usize> = pairs
            .iter()
            .map(|p| sorted.iter().position(|q| q == p).unwrap() + 1)
            .collect();
        Perm::from_images(beta_inv).unwrap().inverse()
    }

    #[test]
    fn block_perm_identity_case() {
        let ids: Vec<Perm> = [2, 0, 3].iter().map(|&j| Perm::identity(j)).collect();
        let beta = block_perm(&Perm::identity(3), &[2, 0, 3], &ids).unwrap();
        assert!(beta.is_identity());
    }

    #[test]
    fn block_perm_transposition_example() {
        let sigma = Perm::transposition(2, 1, 2).unwrap();
        let inners = [Perm::identity(1), Perm::identity(2)];
        let beta = block_perm(&sigma, &[1, 2], &inners).unwrap();
        assert_eq!(beta.inverse().images(), &[3, 1, 2]);
        assert_eq!(beta, block_perm_oracle(&sigma, &[1, 2], &inners));
    }

    #[test]
    fn block_perm_three_cycle_on_singletons() {
        let sigma = Perm::from_cycles(3, &[vec![1, 2, 3]]).unwrap();
        let inners = vec![Perm::identity(1); 3];
        let beta = block_perm(&sigma, &[1, 1, 1], &inners).unwrap();
        assert_eq!(beta, sigma);
        assert_eq!(beta, block_perm_oracle(&sigma, &[1, 1, 1], &inners));
    }

    #[test]
    fn block_perm_matches_oracle_exhaustively() {
        for k in 0..=3 {
            for arities in arity_vectors(k, 3) {
                for sigma in Perm::all(k) {
                    for inners in inner_choices(&arities) {
                        assert_eq!(
                            block_perm(&sigma, &arities, &inners).unwrap(),
                            block_perm_oracle(&sigma, &arities, &inners),
                            "σ={sigma} arities={arities:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn block_perm_functoriality() {
        // blocks permuted by σ' and then by σ: the composite of block
        // permutations is the block permutation of the composite
        for k in 0..=3 {
            for arities in arity_vectors(k, 3) {
                let ids: Vec<Perm> = arities.iter().map(|&j| Perm::identity(j)).collect();
                for s in Perm::all(k) {
                    for t in Perm::all(k) {
                        let permuted: Vec<usize> =
                            (1..=k).map(|i| arities[s.apply(i) - 1]).collect();
                        let lhs = block_perm(&s, &arities, &ids)
                            .unwrap()
                            .compose(&block_perm(&t, &permuted, &ids_for(&permuted)).unwrap())
                            .unwrap();
                        let rhs = block_perm(&s.compose(&t).unwrap(), &arities, &ids).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn block_perm_rejects_bad_shapes() {
        let sigma = Perm::identity(2);
        assert!(block_perm(&sigma, &[1], &[Perm::identity(1)]).is_err());
        assert!(block_perm(&sigma, &[1, 2], &[Perm::identity(1), Perm::identity(1)]).is_err());
        assert!(Perm::from_images(vec![1, 1]).is_err());
        assert!(Perm::from_images(vec![0, 1]).is_err());
    }

    fn ids_for(arities: &[usize]) -> Vec<Perm> {
        arities.iter().map(|&j| Perm::identity(j)).collect()
    }

    fn arity_vectors(k: usize, max: usize) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..k {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..=max).map(move |j| {
                        let mut w = v.clone();
                        w.push(j);
                        w
                    })
                })
                .collect();
        }
        out
    }

    fn inner_choices(arities: &[usize]) -> Vec<Vec<Perm>> {
        let mut out = vec![vec![]];
        for &j in arities {
            out = out
                .into_iter()
                .flat_map(|v| {
                    Perm::all(j).into_iter().map(move |p| {
                        let mut w = v.clone();
                        w.push(p);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn perm_text_round_trip() {
        let p = Perm::parse_cycles("(1 2 3)(4)").unwrap();
        assert_eq!(p.images(), &[2, 3, 1, 4]);
        assert_eq!(p.to_string(), "(1 2 3)(4)");
        for p in Perm::all(4) {
            assert_eq!(Perm::parse_cycles(&p.to_string()).unwrap(), p);
        }
        assert!(Perm::parse_cycles("(1 2)(2 3)").is_err());
        assert!(Perm::parse_cycles("(1 2").is_err());
    }

    #[test]
    fn signed_text_round_trip() {
        let w = SignedPerm::parse("(1 2 3)- (4)+").unwrap();
        assert_eq!(w.apply(3), -1);
        assert_eq!(w.apply(1), 2);
        assert_eq!(w.to_string(), "(1 2 3)- (4)+");
        for w in SignedPerm::all(3) {
            assert_eq!(SignedPerm::parse(&w.to_string()).unwrap(), w, "{w}");
        }
        assert!(SignedPerm::parse("(1 2-)-").is_err());
    }

    #[test]
    fn signed_cycle_type_examples() {
        let id = SignedPerm::identity(4);
        assert_eq!(
            signed_cycle_type(&id),
            SignedCycleType::from_cycles(vec![(1, Sign::Plus); 4]).unwrap()
        );

        let order_ten = SignedPerm::parse("(1,2,3,4,5)-").unwrap();
        assert_eq!(
            signed_cycle_type(&order_ten),
            SignedCycleType::from_cycles([(5, Sign::Minus)]).unwrap()
        );
        assert_eq!(order_ten.order(), 10);

        let order_six = SignedPerm::parse("(1,2,3,4,5,6)(7)").unwrap();
        assert_eq!(
            signed_cycle_type(&order_six),
            SignedCycleType::from_cycles([(6, Sign::Plus), (1, Sign::Plus)]).unwrap()
        );
        assert_eq!(order_six.order(), 6);
    }

    fn brute_order(w: &SignedPerm) -> u64 {
        let id = SignedPerm::identity(w.len());
        let mut x = w.clone();
        let mut k = 1;
        while x != id {
            x = x.compose(w).unwrap();
            k += 1;
        }
        k
    }

    #[test]
    fn order_formula_matches_brute_force() {
        for n in 0..=4 {
            for w in SignedPerm::all(n) {
                assert_eq!(w.order(), brute_order(&w));
                assert_eq!(w.cycle_type().order(), w.order());
            }
        }
    }

    #[test]
    fn group_laws_for_signed_perms() {
        let all = SignedPerm::all(3);
        let id = SignedPerm::identity(3);
        for a in &all {
            assert_eq!(a.compose(&a.inverse()).unwrap(), id);
            assert_eq!(a.inverse().compose(a).unwrap(), id);
            for b in all.iter().step_by(7) {
                // action on signed points is compatible with composition
                for i in [-3i64, -2, -1, 1, 2, 3] {
                    assert_eq!(a.compose(b).unwrap().apply(i), a.apply(b.apply(i)));
                }
            }
        }
    }

    fn conjugacy_classes(n: usize) -> Vec<Vec<SignedPerm>> {
        let all = SignedPerm::all(n);
        let mut seen = std::collections::HashSet::new();
        let mut classes = Vec::new();
        for w in &all {
            if seen.contains(w) {
                continue;
            }
            let mut class = std::collections::BTreeSet::new();
            for h in &all {
                class.insert(h.compose(w).unwrap().compose(&h.inverse()).unwrap());
            }
            for c in &class {
                seen.insert(c.clone());
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    #[test]
    fn cycle_type_classifies_conjugacy() {
        for n in 0..=5 {
            let classes = conjugacy_classes(n);
            let mut types = std::collections::HashSet::new();
            for class in &classes {
                let t = class[0].cycle_type();
                assert!(class.iter().all(|w| w.cycle_type() == t));
                assert!(types.insert(t), "two classes share a type for n={n}");
            }
        }
    }

    #[test]
    fn witness_realises_type() {
        for n in 0..=5 {
            for w in SignedPerm::all(n).iter().step_by(5) {
                let t = w.cycle_type();
                assert_eq!(t.witness().cycle_type(), t);
            }
        }
    }

    #[test]
    fn cycle_type_text() {
        let t = SignedCycleType::parse("(5)-").unwrap();
        assert_eq!(t.cycles(), vec![(5, Sign::Minus)]);
        let t = SignedCycleType::parse("(1 2 3 4 5 6)(1)").unwrap();
        assert_eq!(t.cycles(), vec![(6, Sign::Plus), (1, Sign::Plus)]);
        assert_eq!(t.to_string(), "(6)+ (1)+");
        assert_eq!(SignedCycleType::parse(&t.to_string()).unwrap(), t);
    }

    fn z2_wreath_elements(k: usize) -> Vec<WreathElement> {
        let g = FiniteGroup::z2();
        let mut out = Vec::new();
        for perm in Perm::all(k) {
            for outer in 0..2 {
                for mask in 0..(1usize << k) {
                    let inner = (0..k).map(|i| (mask >> i) & 1).collect();
                    out.push(WreathElement::new(&g, outer, perm.clone(), inner).unwrap());
                }
            }
        }
        out
    }

    fn point_rep(g: &FiniteGroup, w: &WreathElement) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for slot in 0..=w.arity() {
            for twist in 0..g.order() {
                v.push(w.act_on_point(g, slot, twist));
            }
        }
        v
    }

    #[test]
    fn wreath_identity_and_inverse() {
        let g = FiniteGroup::z2();
        let e = WreathElement::identity(&g, 3);
        for w in z2_wreath_elements(3) {
            assert_eq!(wreath_mul(&g, &w, &e).unwrap(), w);
            assert_eq!(wreath_mul(&g, &e, &w).unwrap(), w);
            assert_eq!(wreath_mul(&g, &w, &w.inverse(&g)).unwrap(), e);
            assert_eq!(wreath_mul(&g, &w.inverse(&g), &w).unwrap(), e);
        }
    }

    #[test]
    fn wreath_matches_permutation_representation() {
        // act on {0..k} × Z_2 (2(k+1) points) and compare products pointwise
        let g = FiniteGroup::z2();
        let all = z2_wreath_elements(3);
        let reps: std::collections::HashSet<_> = all.iter().map(|w| point_rep(&g, w)).collect();
        assert_eq!(reps.len(), all.len(), "representation is not faithful");
        for a in all.iter().step_by(3) {
            for b in all.iter().step_by(5) {
                let ab = wreath_mul(&g, a, b).unwrap();
                for slot in 0..=3 {
                    for twist in 0..2 {
                        let (s1, t1) = a.act_on_point(&g, slot, twist);
                        let expected = b.act_on_point(&g, s1, t1);
                        assert_eq!(ab.act_on_point(&g, slot, twist), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn wreath_associativity() {
        let g = FiniteGroup::z2();
        let all = z2_wreath_elements(2);
        for a in &all {
            for b in &all {
                for c in all.iter().step_by(3) {
                    let l = wreath_mul(&g, &wreath_mul(&g, a, b).unwrap(), c).unwrap();
                    let r = wreath_mul(&g, a, &wreath_mul(&g, b, c).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn wreath_rejects_mismatch() {
        let g = FiniteGroup::z2();
        let a = WreathElement::identity(&g, 2);
        let b = WreathElement::identity(&g, 3);
        assert!(wreath_mul(&g, &a, &b).is_err());
        assert!(WreathElement::new(&g, 2, Perm::identity(1), vec![0]).is_err());
        assert!(WreathElement::new(&g, 0, Perm::identity(2), vec![0]).is_err());
    }

    #[test]
    fn finite_group_validation() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![0, 1]]).is_err());
        let z3 =
            FiniteGroup::from_table(vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(z3.inv(1), 2);
    }
}
