use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::perm::{Perm, Sign};

const BUNDLED: &str = include_str!("../../data/catalogue.json");

pub const CATALOGUE_ENV: &str = "SPLICE_CATALOGUE";

/// Words the expression grammar reserves.
const RESERVED: [&str; 7] = ["unknot", "T", "sum", "cable", "splice", "mirror", "rev"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotEntry {
    pub name: String,
    /// Isotopic to its reverse.
    pub invertible: bool,
    /// Isotopic to its mirror image.
    pub amphichiral: bool,
    /// Isotopic to the reverse of its mirror image.
    pub negative_amphichiral: bool,
}

impl KnotEntry {
    /// The `(mirror, reverse)` states identified with the trivial state.
    pub fn stabiliser(&self) -> Vec<(bool, bool)> {
        let mut gens = Vec::new();
        if self.invertible {
            gens.push((false, true));
        }
        if self.amphichiral {
            gens.push((true, false));
        }
        if self.negative_amphichiral {
            gens.push((true, true));
        }
        let mut group = vec![(false, false)];
        let mut grew = true;
        while grew {
            grew = false;
            for &(a, b) in &gens {
                for (c, d) in group.clone() {
                    let e = (a ^ c, b ^ d);
                    if !group.contains(&e) {
                        group.push(e);
                        grew = true;
                    }
                }
            }
        }
        group.sort();
        group
    }

    /// Least `(mirror, reverse)` state equivalent to the given one.
    pub fn reduce_state(&self, mirror: bool, reversed: bool) -> (bool, bool) {
        self.stabiliser()
            .into_iter()
            .map(|(a, b)| (mirror ^ a, reversed ^ b))
            .min()
            .expect("stabiliser contains the identity")
    }
}

/// One symmetry of a satellite pattern link: slot `i` goes to slot `perm(i)`
/// with orientation `signs[i]`, the root component with orientation `outer`.
/// `preserves_orientation` is false for symmetries that reverse the ambient
/// orientation of the sphere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkSymmetry {
    pub preserves_orientation: bool,
    pub outer: Sign,
    pub perm: Perm,
    pub signs: Vec<Sign>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkEntry {
    pub name: String,
    pub arity: usize,
    /// A generating set of the symmetry group.
    pub symmetries: Vec<LinkSymmetry>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalogue {
    knots: BTreeMap<String, KnotEntry>,
    links: BTreeMap<String, LinkEntry>,
}

#[derive(Deserialize)]
struct RawCatalogue {
    knots: Vec<RawKnot>,
    links: Vec<RawLink>,
}

#[derive(Deserialize)]
struct RawKnot {
    name: String,
    invertible: bool,
    amphichiral: bool,
    negative_amphichiral: bool,
}

#[derive(Deserialize)]
struct RawLink {
    name: String,
    arity: usize,
    symmetries: Vec<RawSymmetry>,
}

#[derive(Deserialize)]
struct RawSymmetry {
    orientation: String,
    outer: String,
    perm: Vec<usize>,
    signs: Vec<String>,
}

fn sign(s: &str) -> Result<Sign> {
    match s {
        "+" => Ok(Sign::Plus),
        "-" => Ok(Sign::Minus),
        _ => Err(Error::Catalogue(format!(
            "sign must be `+` or `-`, got `{s}`"
        ))),
    }
}

fn check_name(name: &str, seen: &mut Vec<String>) -> Result<()> {
    let mut chars = name.chars();
    let ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    if !ok {
        return Err(Error::Catalogue(format!(
            "`{name}` is not a valid generator name"
        )));
    }
    if RESERVED.contains(&name) {
        return Err(Error::Catalogue(format!("`{name}` is a reserved word")));
    }
    if seen.iter().any(|s| s == name) {
        return Err(Error::Catalogue(format!("`{name}` appears twice")));
    }
    seen.push(name.to_string());
    Ok(())
}

impl Catalogue {
    pub fn bundled() -> Self {
        Catalogue::from_json_str(BUNDLED).expect("bundled catalogue is valid")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawCatalogue =
            serde_json::from_str(text).map_err(|e| Error::Catalogue(e.to_string()))?;
        let mut seen = Vec::new();
        let mut knots = BTreeMap::new();
        for k in raw.knots {
            check_name(&k.name, &mut seen)?;
            knots.insert(
                k.name.clone(),
                KnotEntry {
                    name: k.name,
                    invertible: k.invertible,
                    amphichiral: k.amphichiral,
                    negative_amphichiral: k.negative_amphichiral,
                },
            );
        }
        let mut links = BTreeMap::new();
        for l in raw.links {
            check_name(&l.name, &mut seen)?;
            if l.arity == 0 {
                return Err(Error::Catalogue(format!(
                    "link `{}` has no companion slots",
                    l.name
                )));
            }
            let mut symmetries = Vec::new();
            for s in l.symmetries {
                if s.perm.len() != l.arity || s.signs.len() != l.arity {
                    return Err(Error::Catalogue(format!(
                        "symmetry of `{}` does not act on {} slots",
                        l.name, l.arity
                    )));
                }
                let preserves_orientation = match s.orientation.as_str() {
                    "+" => true,
                    "-" => false,
                    other => {
                        return Err(Error::Catalogue(format!(
                            "orientation `{other}` is not + or -"
                        )))
                    }
                };
                symmetries.push(LinkSymmetry {
                    preserves_orientation,
                    outer: sign(&s.outer)?,
                    perm: Perm::from_images(s.perm).map_err(|e| Error::Catalogue(e.to_string()))?,
                    signs: s.signs.iter().map(|x| sign(x)).collect::<Result<_>>()?,
                });
            }
            links.insert(
                l.name.clone(),
                LinkEntry {
                    name: l.name,
                    arity: l.arity,
                    symmetries,
                },
            );
        }
        Ok(Catalogue { knots, links })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Catalogue(format!("{}: {e}", path.display())))?;
        Catalogue::from_json_str(&text)
    }

    /// Explicit path first, then the environment variable, then the bundled file.
    pub fn resolve(path: Option<&Path>) -> Result<Self> {
        if let Some(p) = path {
            return Catalogue::load(p);
        }
        match std::env::var_os(CATALOGUE_ENV) {
            Some(p) if !p.is_empty() => Catalogue::load(Path::new(&p)),
            _ => Ok(Catalogue::bundled()),
        }
    }

    pub fn knot(&self, name: &str) -> Option<&KnotEntry> {
        self.knots.get(name)
    }

    pub fn link(&self, name: &str) -> Option<&LinkEntry> {
        self.links.get(name)
    }

    pub fn knots(&self) -> impl Iterator<Item = &KnotEntry> {
        self.knots.values()
    }

    pub fn links(&self) -> impl Iterator<Item = &LinkEntry> {
        self.links.values()
    }
}
