//! Splice trees of long knots over a catalogue of prime generators.
//!
//! A tree is the JSJ picture of a knot complement: torus and hyperbolic knots
//! are leaves, connected sum is a keychain node, cabling a Seifert node, and
//! hyperbolic satellites are named pattern links with one child per slot.

mod catalogue;
mod parse;

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Sign;

pub use catalogue::{Catalogue, KnotEntry, LinkEntry, LinkSymmetry, CATALOGUE_ENV};
pub use parse::{parse_expr, parse_tree, resolve, Expr};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpliceTree {
    Unknot,
    /// `T(p, ±q)` with `2 ≤ p < q`.
    Torus {
        p: u64,
        q: u64,
        chirality: Sign,
    },
    HypLeaf {
        name: String,
        mirror: bool,
        reversed: bool,
    },
    Keychain {
        children: Vec<SpliceTree>,
    },
    /// The `(p, q)` cable of `child`, `p ≥ 2`.
    Cable {
        p: u64,
        q: i64,
        child: Box<SpliceTree>,
    },
    /// A named pattern link with one companion per slot. `reversed` reverses
    /// the root component only; `mirror` mirrors the pattern.
    HypSatellite {
        name: String,
        children: Vec<SpliceTree>,
        mirror: bool,
        reversed: bool,
    },
}

impl SpliceTree {
    /// The torus knot `T(p, q)`; `T(±1, q)` and `T(0, ±1)` are the unknot.
    pub fn torus(p: i64, q: i64) -> Result<SpliceTree> {
        if p.gcd(&q) != 1 {
            return Err(Error::InvalidParameters(format!(
                "T({p},{q}) needs gcd(p, q) = 1"
            )));
        }
        let (a, b) = (p.unsigned_abs(), q.unsigned_abs());
        if a.min(b) <= 1 {
            return Ok(SpliceTree::Unknot);
        }
        let chirality = if (p < 0) == (q < 0) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        Ok(SpliceTree::Torus {
            p: a.min(b),
            q: a.max(b),
            chirality,
        })
    }

    /// The `(p, q)` cable; a negative `p` is absorbed by reversing the child.
    pub fn cable(p: i64, q: i64, child: SpliceTree) -> Result<SpliceTree> {
        if p.gcd(&q) != 1 || p.unsigned_abs() <= 1 {
            return Err(Error::InvalidParameters(format!(
                "cable({p},{q}) needs gcd(p, q) = 1 and p not dividing q"
            )));
        }
        let (p, q, child) = if p < 0 {
            (-p, -q, child.reverse())
        } else {
            (p, q, child)
        };
        Ok(SpliceTree::Cable {
            p: p as u64,
            q,
            child: Box::new(child),
        })
    }

    pub fn leaf(name: impl Into<String>) -> SpliceTree {
        SpliceTree::HypLeaf {
            name: name.into(),
            mirror: false,
            reversed: false,
        }
    }

    pub fn keychain(children: Vec<SpliceTree>) -> SpliceTree {
        SpliceTree::Keychain { children }
    }

    pub fn satellite(name: impl Into<String>, children: Vec<SpliceTree>) -> SpliceTree {
        SpliceTree::HypSatellite {
            name: name.into(),
            children,
            mirror: false,
            reversed: false,
        }
    }

    /// Mirror image, pushed to the leaves; an involution on trees.
    pub fn mirror(&self) -> SpliceTree {
        match self {
            SpliceTree::Unknot => SpliceTree::Unknot,
            SpliceTree::Torus { p, q, chirality } => SpliceTree::Torus {
                p: *p,
                q: *q,
                chirality: chirality.flip(),
            },
            SpliceTree::HypLeaf {
                name,
                mirror,
                reversed,
            } => SpliceTree::HypLeaf {
                name: name.clone(),
                mirror: !mirror,
                reversed: *reversed,
            },
            SpliceTree::Keychain { children } => SpliceTree::Keychain {
                children: children.iter().map(SpliceTree::mirror).collect(),
            },
            SpliceTree::Cable { p, q, child } => SpliceTree::Cable {
                p: *p,
                q: -q,
                child: Box::new(child.mirror()),
            },
            SpliceTree::HypSatellite {
                name,
                children,
                mirror,
                reversed,
            } => SpliceTree::HypSatellite {
                name: name.clone(),
                children: children.iter().map(SpliceTree::mirror).collect(),
                mirror: !mirror,
                reversed: *reversed,
            },
        }
    }

    /// String orientation reversed; an involution on trees.
    pub fn reverse(&self) -> SpliceTree {
        match self {
            SpliceTree::Unknot | SpliceTree::Torus { .. } => self.clone(),
            SpliceTree::HypLeaf {
                name,
                mirror,
                reversed,
            } => SpliceTree::HypLeaf {
                name: name.clone(),
                mirror: *mirror,
                reversed: !reversed,
            },
            SpliceTree::Keychain { children } => SpliceTree::Keychain {
                children: children.iter().map(SpliceTree::reverse).collect(),
            },
            SpliceTree::Cable { p, q, child } => SpliceTree::Cable {
                p: *p,
                q: *q,
                child: Box::new(child.reverse()),
            },
            SpliceTree::HypSatellite {
                name,
                children,
                mirror,
                reversed,
            } => SpliceTree::HypSatellite {
                name: name.clone(),
                children: children.clone(),
                mirror: *mirror,
                reversed: !reversed,
            },
        }
    }

    fn children(&self) -> &[SpliceTree] {
        match self {
            SpliceTree::Keychain { children } | SpliceTree::HypSatellite { children, .. } => {
                children
            }
            SpliceTree::Cable { child, .. } => std::slice::from_ref(child.as_ref()),
            _ => &[],
        }
    }

    fn children_mut(&mut self) -> &mut [SpliceTree] {
        match self {
            SpliceTree::Keychain { children } | SpliceTree::HypSatellite { children, .. } => {
                children
            }
            SpliceTree::Cable { child, .. } => std::slice::from_mut(child.as_mut()),
            _ => &mut [],
        }
    }

    /// A canonical tree that is neither the unknot nor a connected sum.
    pub fn is_prime(&self) -> bool {
        !matches!(self, SpliceTree::Unknot | SpliceTree::Keychain { .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serialisable")
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph splice {\n");
        let mut next = 0usize;
        dot_node(self, &mut out, &mut next);
        out.push_str("}\n");
        out
    }
}

fn dot_node(t: &SpliceTree, out: &mut String, next: &mut usize) -> usize {
    let id = *next;
    *next += 1;
    let flags = |m: bool, r: bool| match (m, r) {
        (false, false) => String::new(),
        (true, false) => " (mirror)".into(),
        (false, true) => " (rev)".into(),
        (true, true) => " (mirror, rev)".into(),
    };
    let label = match t {
        SpliceTree::Unknot => "unknot".to_string(),
        SpliceTree::Torus { p, q, chirality } => {
            format!(
                "T({p},{}{q})",
                if *chirality == Sign::Minus { "-" } else { "" }
            )
        }
        SpliceTree::HypLeaf {
            name,
            mirror,
            reversed,
        } => format!("{name}{}", flags(*mirror, *reversed)),
        SpliceTree::Keychain { children } => format!("KC({})", children.len()),
        SpliceTree::Cable { p, q, .. } => format!("S({p},{q})"),
        SpliceTree::HypSatellite {
            name,
            mirror,
            reversed,
            ..
        } => format!("{name}{}", flags(*mirror, *reversed)),
    };
    out.push_str(&format!("  n{id} [label=\"{label}\"];\n"));
    for (slot, c) in t.children().iter().enumerate() {
        let child = dot_node(c, out, next);
        out.push_str(&format!("  n{id} -> n{child} [label=\"{}\"];\n", slot + 1));
    }
    id
}

fn unknown(name: &str) -> Error {
    Error::UnknownGenerator(name.to_string())
}

fn link_entry<'a>(cat: &'a Catalogue, name: &str, got: usize) -> Result<&'a LinkEntry> {
    let link = cat.link(name).ok_or_else(|| {
        if cat.knot(name).is_some() {
            Error::Arity {
                name: name.to_string(),
                expected: 0,
                got,
            }
        } else {
            unknown(name)
        }
    })?;
    if link.arity != got {
        return Err(Error::Arity {
            name: name.to_string(),
            expected: link.arity,
            got,
        });
    }
    Ok(link)
}

type SatelliteState = (Vec<SpliceTree>, bool, bool);

fn apply_symmetry(
    cat: &Catalogue,
    s: &LinkSymmetry,
    state: &SatelliteState,
) -> Result<SatelliteState> {
    let inv = s.perm.inverse();
    let children = (1..=s.perm.len())
        .map(|m| {
            let src = inv.apply(m);
            let x = &state.0[src - 1];
            if s.signs[src - 1] == Sign::Minus {
                canonicalize(cat, &x.reverse())
            } else {
                Ok(x.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((
        children,
        state.1 ^ !s.preserves_orientation,
        state.2 ^ (s.outer == Sign::Minus),
    ))
}

/// All states related to `state` by the pattern's symmetry group.
pub(crate) fn satellite_orbit(
    cat: &Catalogue,
    link: &LinkEntry,
    state: SatelliteState,
) -> Result<BTreeSet<SatelliteState>> {
    let mut seen = BTreeSet::new();
    let mut frontier = vec![state.clone()];
    seen.insert(state);
    while let Some(s) = frontier.pop() {
        for sym in &link.symmetries {
            let t = apply_symmetry(cat, sym, &s)?;
            if seen.insert(t.clone()) {
                frontier.push(t);
            }
        }
    }
    Ok(seen)
}

fn satellite_canonical(
    cat: &Catalogue,
    name: &str,
    children: Vec<SpliceTree>,
    mirror: bool,
    reversed: bool,
) -> Result<SpliceTree> {
    let link = link_entry(cat, name, children.len())?;
    if children.contains(&SpliceTree::Unknot) {
        return Err(Error::Reducible(format!(
            "{name} has an unknotted companion"
        )));
    }
    let orbit = satellite_orbit(cat, link, (children, mirror, reversed))?;
    let (children, mirror, reversed) = orbit.into_iter().next().expect("orbit is non-empty");
    Ok(SpliceTree::HypSatellite {
        name: name.to_string(),
        children,
        mirror,
        reversed,
    })
}

fn keychain_canonical(children: Vec<SpliceTree>) -> SpliceTree {
    let mut flat = Vec::new();
    for c in children {
        match c {
            SpliceTree::Unknot => {}
            SpliceTree::Keychain { children } => flat.extend(children),
            other => flat.push(other),
        }
    }
    flat.sort();
    match flat.len() {
        0 => SpliceTree::Unknot,
        1 => flat.pop().expect("one child"),
        _ => SpliceTree::Keychain { children: flat },
    }
}

/// Unique normal form up to isotopy and the catalogue symmetries.
pub fn canonicalize(cat: &Catalogue, t: &SpliceTree) -> Result<SpliceTree> {
    match t {
        SpliceTree::Unknot => Ok(SpliceTree::Unknot),
        SpliceTree::Torus { p, q, chirality } => {
            let q =
                i64::try_from(*q).map_err(|_| Error::InvalidParameters("q too large".into()))?;
            let p =
                i64::try_from(*p).map_err(|_| Error::InvalidParameters("p too large".into()))?;
            SpliceTree::torus(p, q * chirality.as_i8() as i64)
        }
        SpliceTree::HypLeaf {
            name,
            mirror,
            reversed,
        } => {
            let entry = cat.knot(name).ok_or_else(|| {
                if cat.link(name).is_some() {
                    Error::Arity {
                        name: name.clone(),
                        expected: cat.link(name).map_or(0, |l| l.arity),
                        got: 0,
                    }
                } else {
                    unknown(name)
                }
            })?;
            let (mirror, reversed) = entry.reduce_state(*mirror, *reversed);
            Ok(SpliceTree::HypLeaf {
                name: name.clone(),
                mirror,
                reversed,
            })
        }
        SpliceTree::Keychain { children } => Ok(keychain_canonical(
            children
                .iter()
                .map(|c| canonicalize(cat, c))
                .collect::<Result<_>>()?,
        )),
        SpliceTree::Cable { p, q, child } => {
            let child = canonicalize(cat, child)?;
            let p = *p as i64;
            if child == SpliceTree::Unknot {
                return SpliceTree::torus(p, *q);
            }
            SpliceTree::cable(p, *q, child)
        }
        SpliceTree::HypSatellite {
            name,
            children,
            mirror,
            reversed,
        } => {
            let children = children
                .iter()
                .map(|c| canonicalize(cat, c))
                .collect::<Result<Vec<_>>>()?;
            satellite_canonical(cat, name, children, *mirror, *reversed)
        }
    }
}

pub fn is_canonical(cat: &Catalogue, t: &SpliceTree) -> bool {
    canonicalize(cat, t).is_ok_and(|c| c == *t)
}

/// Single-step rewrites available at the root of `t`. Sorting and symmetry
/// reduction wait until the children are normal.
fn root_rewrites(
    cat: &Catalogue,
    t: &SpliceTree,
    children_normal: bool,
) -> Result<Vec<SpliceTree>> {
    let mut out = Vec::new();
    match t {
        SpliceTree::Unknot => {}
        SpliceTree::Torus { .. } => {
            let c = canonicalize(cat, t)?;
            if c != *t {
                out.push(c);
            }
        }
        SpliceTree::HypLeaf { .. } => {
            let c = canonicalize(cat, t)?;
            if c != *t {
                out.push(c);
            }
        }
        SpliceTree::Keychain { children } => {
            for (i, c) in children.iter().enumerate() {
                match c {
                    SpliceTree::Keychain { children: inner } => {
                        let mut next = children[..i].to_vec();
                        next.extend(inner.iter().cloned());
                        next.extend(children[i + 1..].iter().cloned());
                        out.push(SpliceTree::keychain(next));
                    }
                    SpliceTree::Unknot => {
                        let mut next = children.clone();
                        next.remove(i);
                        out.push(SpliceTree::keychain(next));
                    }
                    _ => {}
                }
            }
            match children.len() {
                0 => out.push(SpliceTree::Unknot),
                1 => out.push(children[0].clone()),
                _ => {
                    if out.is_empty() && children_normal && children.windows(2).any(|w| w[0] > w[1])
                    {
                        let mut sorted = children.clone();
                        sorted.sort();
                        out.push(SpliceTree::keychain(sorted));
                    }
                }
            }
        }
        SpliceTree::Cable { p, q, child } => {
            if **child == SpliceTree::Unknot {
                out.push(SpliceTree::torus(*p as i64, *q)?);
            }
        }
        SpliceTree::HypSatellite {
            name,
            children,
            mirror,
            reversed,
        } => {
            link_entry(cat, name, children.len())?;
            if children.contains(&SpliceTree::Unknot) {
                return Err(Error::Reducible(format!(
                    "{name} has an unknotted companion"
                )));
            }
            if children_normal {
                let c = satellite_canonical(cat, name, children.clone(), *mirror, *reversed)?;
                if c != *t {
                    out.push(c);
                }
            }
        }
    }
    Ok(out)
}

fn collect_rewrites(
    cat: &Catalogue,
    t: &SpliceTree,
    path: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, SpliceTree)>,
) -> Result<()> {
    let before = out.len();
    for (i, c) in t.children().iter().enumerate() {
        path.push(i);
        collect_rewrites(cat, c, path, out)?;
        path.pop();
    }
    let children_normal = out.len() == before;
    for r in root_rewrites(cat, t, children_normal)? {
        out.push((path.clone(), r));
    }
    Ok(())
}

fn replace_at(t: &mut SpliceTree, path: &[usize], replacement: SpliceTree) {
    match path.split_first() {
        None => *t = replacement,
        Some((&i, rest)) => replace_at(&mut t.children_mut()[i], rest, replacement),
    }
}

/// Canonicalises by firing applicable rewrites in random order; agrees with
/// [`canonicalize`] whatever the order.
pub fn canonicalize_random_order<R: Rng + ?Sized>(
    cat: &Catalogue,
    t: &SpliceTree,
    rng: &mut R,
) -> Result<SpliceTree> {
    let mut current = t.clone();
    loop {
        let mut sites = Vec::new();
        collect_rewrites(cat, &current, &mut Vec::new(), &mut sites)?;
        if sites.is_empty() {
            return Ok(current);
        }
        let (path, replacement) = sites.swap_remove(rng.gen_range(0..sites.len()));
        replace_at(&mut current, &path, replacement);
    }
}

fn node_count(t: &SpliceTree) -> u64 {
    match t {
        SpliceTree::Unknot => 0,
        SpliceTree::Torus { .. } | SpliceTree::HypLeaf { .. } => 1,
        _ => 1 + t.children().iter().map(node_count).sum::<u64>(),
    }
}

/// Number of pieces of the geometric decomposition; defined on canonical trees.
pub fn complexity(cat: &Catalogue, t: &SpliceTree) -> Result<u64> {
    if !is_canonical(cat, t) {
        return Err(Error::NotCanonical);
    }
    Ok(node_count(t))
}

/// Connected sum; the unknot is the unit.
pub fn connect_sum(cat: &Catalogue, trees: &[SpliceTree]) -> Result<SpliceTree> {
    canonicalize(cat, &SpliceTree::keychain(trees.to_vec()))
}

/// A splicing generator of positive arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `KC(k)`; `KC(1)` is the Hopf link.
    Keychain(usize),
    /// The Seifert link `S(p, q)`, i.e. cabling.
    Seifert(i64, i64),
    Hyperbolic(String),
}

impl Generator {
    pub const HOPF: Generator = Generator::Keychain(1);

    pub fn arity(&self, cat: &Catalogue) -> Result<usize> {
        match self {
            Generator::Keychain(k) => Ok(*k),
            Generator::Seifert(..) => Ok(1),
            Generator::Hyperbolic(name) => {
                cat.link(name).map(|l| l.arity).ok_or_else(|| unknown(name))
            }
        }
    }

    /// Pieces contributed by the generator itself; splicing with the Hopf link
    /// is the identity operation, so it contributes none.
    pub fn complexity(&self) -> u64 {
        match self {
            Generator::Keychain(1) => 0,
            _ => 1,
        }
    }
}

/// Splices `children` into the slots of `gen` and canonicalises.
pub fn splice_graft(
    cat: &Catalogue,
    gen: &Generator,
    children: &[SpliceTree],
) -> Result<SpliceTree> {
    let k = gen.arity(cat)?;
    if children.len() != k {
        return Err(Error::Arity {
            name: format!("{gen:?}"),
            expected: k,
            got: children.len(),
        });
    }
    let raw = match gen {
        Generator::Keychain(_) => SpliceTree::keychain(children.to_vec()),
        Generator::Seifert(p, q) => SpliceTree::cable(*p, *q, children[0].clone())?,
        Generator::Hyperbolic(name) => SpliceTree::satellite(name.clone(), children.to_vec()),
    };
    canonicalize(cat, &raw)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Additivity {
    Additive,
    /// A Hopf-link splice, possibly after unknotted slots collapse a keychain
    /// or a cable; complexity is not additive.
    DegenerateHopf,
    /// Keychain into keychain: the nested keychain nodes merge, and
    /// complexity drops by exactly `merged`.
    DegenerateConnectSum {
        merged: usize,
    },
}

pub fn check_additivity(
    cat: &Catalogue,
    gen: &Generator,
    children: &[SpliceTree],
) -> Result<Additivity> {
    let k = gen.arity(cat)?;
    if children.len() != k {
        return Err(Error::Arity {
            name: format!("{gen:?}"),
            expected: k,
            got: children.len(),
        });
    }
    let children = children
        .iter()
        .map(|c| canonicalize(cat, c))
        .collect::<Result<Vec<_>>>()?;
    match gen {
        Generator::Keychain(_) => {
            let nontrivial = children
                .iter()
                .filter(|c| **c != SpliceTree::Unknot)
                .count();
            if nontrivial <= 1 {
                return Ok(Additivity::DegenerateHopf);
            }
            let merged = children
                .iter()
                .filter(|c| matches!(c, SpliceTree::Keychain { .. }))
                .count();
            if merged > 0 {
                Ok(Additivity::DegenerateConnectSum { merged })
            } else {
                Ok(Additivity::Additive)
            }
        }
        Generator::Seifert(_, q) => {
            if children[0] == SpliceTree::Unknot && q.unsigned_abs() == 1 {
                Ok(Additivity::DegenerateHopf)
            } else {
                Ok(Additivity::Additive)
            }
        }
        Generator::Hyperbolic(name) => {
            if children.contains(&SpliceTree::Unknot) {
                return Err(Error::Reducible(format!(
                    "{name} has an unknotted companion"
                )));
            }
            Ok(Additivity::Additive)
        }
    }
}
