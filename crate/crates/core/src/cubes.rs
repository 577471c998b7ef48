//! The little `n`-cubes operad over exact rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{structural, Error, Result};
use crate::perm::Perm;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// An increasing affine map `x ↦ scale·x + offset` of the real line.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub scale: Rational,
    pub offset: Rational,
}

impl Affine {
    pub fn new(scale: Rational, offset: Rational) -> Result<Self> {
        if !scale.is_positive() {
            return structural(format!("affine scale {scale} must be positive"));
        }
        Ok(Affine { scale, offset })
    }

    pub fn identity() -> Self {
        Affine {
            scale: Rational::one(),
            offset: Rational::zero(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.scale.is_one() && self.offset.is_zero()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Affine) -> Affine {
        Affine {
            scale: &self.scale * &inner.scale,
            offset: &self.scale * &inner.offset + &self.offset,
        }
    }

    pub fn inverse(&self) -> Affine {
        let scale = self.scale.recip();
        let offset = -(&self.offset * &scale);
        Affine { scale, offset }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        &self.scale * x + &self.offset
    }

    /// Image of `[-1, 1]` as `(left, right)`.
    pub fn image(&self) -> (Rational, Rational) {
        (&self.offset - &self.scale, &self.offset + &self.scale)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x", self.scale)?;
        if self.offset.is_negative() {
            write!(f, "-{}", -&self.offset)
        } else {
            write!(f, "+{}", self.offset)
        }
    }
}

impl FromStr for Affine {
    type Err = Error;

    /// `a*x+b` or `a*x-b` with rationals written `p` or `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Structural(format!("`{s}` is not of the form a*x+b"));
        let (scale, rest) = s.split_once("*x").ok_or_else(bad)?;
        let scale = parse_rational(scale)?;
        let offset = if rest.is_empty() {
            Rational::zero()
        } else if let Some(r) = rest.strip_prefix('+') {
            parse_rational(r)?
        } else if let Some(r) = rest.strip_prefix('-') {
            -parse_rational(r)?
        } else {
            return Err(bad());
        };
        Affine::new(scale, offset)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Structural(format!("`{s}` is not a rational number"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// An increasing affine self-map of `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LittleInterval(Affine);

impl LittleInterval {
    /// Requires `scale > 0` and `|offset| + scale ≤ 1`.
    pub fn new(scale: Rational, offset: Rational) -> Result<Self> {
        let map = Affine::new(scale, offset)?;
        if map.offset.abs() + &map.scale > Rational::one() {
            return structural(format!("{map} does not map [-1,1] into itself"));
        }
        Ok(LittleInterval(map))
    }

    pub fn identity() -> Self {
        LittleInterval(Affine::identity())
    }

    pub fn map(&self) -> &Affine {
        &self.0
    }

    pub fn scale(&self) -> &Rational {
        &self.0.scale
    }

    pub fn offset(&self) -> &Rational {
        &self.0.offset
    }

    pub fn compose(&self, inner: &LittleInterval) -> LittleInterval {
        LittleInterval(self.0.compose(&inner.0))
    }

    /// Value at `-1`, the bottom of the image.
    pub fn bottom(&self) -> Rational {
        self.0.image().0
    }

    /// Open images intersect.
    pub fn interiors_meet(&self, other: &LittleInterval) -> bool {
        let (l1, r1) = self.0.image();
        let (l2, r2) = other.0.image();
        l1.max(l2) < r1.min(r2)
    }
}

impl fmt::Display for LittleInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for LittleInterval {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let a: Affine = s.parse()?;
        LittleInterval::new(a.scale, a.offset)
    }
}

/// A product of little intervals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LittleCube {
    factors: Vec<LittleInterval>,
}

impl LittleCube {
    pub fn new(factors: Vec<LittleInterval>) -> Self {
        LittleCube { factors }
    }

    pub fn identity(dim: usize) -> Self {
        LittleCube {
            factors: vec![LittleInterval::identity(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[LittleInterval] {
        &self.factors
    }

    pub fn compose(&self, inner: &LittleCube) -> Result<LittleCube> {
        if self.dim() != inner.dim() {
            return structural(format!(
                "cannot compose cubes of dimension {} and {}",
                self.dim(),
                inner.dim()
            ));
        }
        Ok(LittleCube {
            factors: self
                .factors
                .iter()
                .zip(&inner.factors)
                .map(|(a, b)| a.compose(b))
                .collect(),
        })
    }

    /// Open boxes meet iff every axis' open intervals meet.
    pub fn interiors_meet(&self, other: &LittleCube) -> bool {
        self.factors
            .iter()
            .zip(&other.factors)
            .all(|(a, b)| a.interiors_meet(b))
    }

    /// Splits off the last axis: `(L^π, L^ν)`.
    pub fn split_last(&self) -> Option<(LittleCube, LittleInterval)> {
        let (last, rest) = self.factors.split_last()?;
        Some((LittleCube::new(rest.to_vec()), last.clone()))
    }

    /// The same cube read as an invertible affine map of `ℝⁿ`.
    pub fn as_affine(&self) -> AffineBox {
        AffineBox::new(self.factors.iter().map(|f| f.map().clone()).collect())
    }
}

impl fmt::Display for LittleCube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for LittleCube {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Structural(format!("`{s}` is not a bracketed cube")))?;
        if inner.trim().is_empty() {
            return Ok(LittleCube::new(vec![]));
        }
        let factors = inner
            .split(',')
            .map(|p| p.parse())
            .collect::<Result<Vec<LittleInterval>>>()?;
        Ok(LittleCube::new(factors))
    }
}

/// A diagonal invertible affine map of `ℝⁿ` with positive scales; the group
/// generated by little cubes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineBox {
    factors: Vec<Affine>,
}

impl AffineBox {
    pub fn new(factors: Vec<Affine>) -> Self {
        AffineBox { factors }
    }

    pub fn identity(dim: usize) -> Self {
        AffineBox {
            factors: vec![Affine::identity(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Affine] {
        &self.factors
    }

    pub fn is_identity(&self) -> bool {
        self.factors.iter().all(Affine::is_identity)
    }

    pub fn compose(&self, inner: &AffineBox) -> Result<AffineBox> {
        if self.dim() != inner.dim() {
            return structural(format!(
                "cannot compose affine maps of dimension {} and {}",
                self.dim(),
                inner.dim()
            ));
        }
        Ok(AffineBox {
            factors: self
                .factors
                .iter()
                .zip(&inner.factors)
                .map(|(a, b)| a.compose(b))
                .collect(),
        })
    }

    pub fn inverse(&self) -> AffineBox {
        AffineBox {
            factors: self.factors.iter().map(Affine::inverse).collect(),
        }
    }
}

impl fmt::Display for AffineBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for AffineBox {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Structural(format!("`{s}` is not a bracketed affine map")))?;
        if inner.trim().is_empty() {
            return Ok(AffineBox::new(vec![]));
        }
        let factors = inner
            .split(',')
            .map(|p| p.parse())
            .collect::<Result<Vec<Affine>>>()?;
        Ok(AffineBox::new(factors))
    }
}

/// `j` little `n`-cubes with pairwise disjoint interiors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubesElement {
    dim: usize,
    cubes: Vec<LittleCube>,
}

impl CubesElement {
    pub fn new(dim: usize, cubes: Vec<LittleCube>) -> Result<Self> {
        if let Some(c) = cubes.iter().find(|c| c.dim() != dim) {
            return structural(format!("cube {c} is not {dim}-dimensional"));
        }
        for i in 0..cubes.len() {
            for k in i + 1..cubes.len() {
                if cubes[i].interiors_meet(&cubes[k]) {
                    return structural(format!(
                        "cubes {} and {} have overlapping interiors",
                        i + 1,
                        k + 1
                    ));
                }
            }
        }
        Ok(CubesElement { dim, cubes })
    }

    /// The operad unit in arity 1.
    pub fn identity(dim: usize) -> Self {
        CubesElement {
            dim,
            cubes: vec![LittleCube::identity(dim)],
        }
    }

    /// The base point of `C_n(0)`.
    pub fn empty(dim: usize) -> Self {
        CubesElement { dim, cubes: vec![] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.cubes.len()
    }

    pub fn cubes(&self) -> &[LittleCube] {
        &self.cubes
    }

    /// JSON array of cubes, each an array of `[scale, offset]` string pairs.
    pub fn to_json(&self) -> serde_json::Value {
        cubes_to_json(&self.cubes)
    }
}

pub(crate) fn cubes_to_json(cubes: &[LittleCube]) -> serde_json::Value {
    serde_json::Value::Array(
        cubes
            .iter()
            .map(|c| {
                serde_json::Value::Array(
                    c.factors()
                        .iter()
                        .map(|f| serde_json::json!([f.scale().to_string(), f.offset().to_string()]))
                        .collect(),
                )
            })
            .collect(),
    )
}

impl fmt::Display for CubesElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C_{}(", self.dim)?;
        for (i, c) in self.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `(L, J₁, …, J_k) ↦ (L₁∘J₁, …, L_k∘J_k)`.
pub fn cube_compose(outer: &CubesElement, args: &[CubesElement]) -> Result<CubesElement> {
    if outer.arity() != args.len() {
        return structural(format!(
            "element of arity {} given {} arguments",
            outer.arity(),
            args.len()
        ));
    }
    let mut cubes = Vec::with_capacity(args.iter().map(CubesElement::arity).sum());
    for (l, arg) in outer.cubes.iter().zip(args) {
        if arg.dim != outer.dim {
            return structural(format!(
                "argument of dimension {} inside a {}-cube",
                arg.dim, outer.dim
            ));
        }
        for j in &arg.cubes {
            cubes.push(l.compose(j)?);
        }
    }
    Ok(CubesElement {
        dim: outer.dim,
        cubes,
    })
}

/// Right action `(L.σ)ᵢ = L_{σ(i)}`.
pub fn sigma_act(element: &CubesElement, sigma: &Perm) -> Result<CubesElement> {
    if sigma.len() != element.arity() {
        return structural(format!(
            "permutation on {} points acting on arity {}",
            sigma.len(),
            element.arity()
        ));
    }
    Ok(CubesElement {
        dim: element.dim,
        cubes: (1..=sigma.len())
            .map(|i| element.cubes[sigma.apply(i) - 1].clone())
            .collect(),
    })
}
