//! Seeded random instances for the property suites.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cubes::{rat, CubesElement, LittleCube, LittleInterval, Rational};
use crate::overlap::{overlap_canonical, OverlapElement};
use crate::perm::Perm;
use crate::splice::{SpliceElement, SymbolicWreath};
use crate::tree::{Catalogue, SpliceTree};
use crate::word::{GroupWord, Letter, LetterKind};

pub fn perm<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Perm {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(rng);
    Perm::from_images(images).expect("a shuffle is a bijection")
}

fn fraction<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    let d = *[1i64, 2, 3, 4, 6, 8].choose(rng).expect("non-empty");
    rat(rng.gen_range(1..=d), d)
}

/// A little interval with image inside `[lo, hi]`; the whole segment half the time.
fn interval_in<R: Rng + ?Sized>(rng: &mut R, lo: &Rational, hi: &Rational) -> LittleInterval {
    let (l, r) = if rng.gen_bool(0.5) {
        (lo.clone(), hi.clone())
    } else {
        let width = hi - lo;
        let l = lo + &width * (Rational::from_integer(1.into()) - fraction(rng)) / rat(2, 1);
        let r = &l + (hi - &l) * fraction(rng);
        (l, r)
    };
    LittleInterval::new((&r - &l) / rat(2, 1), (&r + &l) / rat(2, 1)).expect("inside [-1, 1]")
}

/// `j` cubes in `[-1,1]ⁿ`, disjoint along one random axis.
pub fn cubes_element<R: Rng + ?Sized>(rng: &mut R, dim: usize, arity: usize) -> CubesElement {
    if arity == 0 {
        return CubesElement::empty(dim);
    }
    let axis = rng.gen_range(0..dim);
    let grid = 2 * arity as i64 + rng.gen_range(0..4);
    let mut cuts: Vec<i64> = (1..grid).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<i64> = cuts.into_iter().take(arity - 1).collect();
    cuts.sort_unstable();
    let mut bounds = vec![rat(-1, 1)];
    bounds.extend(cuts.iter().map(|&c| rat(2 * c - grid, grid)));
    bounds.push(rat(1, 1));
    let mut cubes: Vec<LittleCube> = (0..arity)
        .map(|i| {
            LittleCube::new(
                (0..dim)
                    .map(|a| {
                        if a == axis {
                            interval_in(rng, &bounds[i], &bounds[i + 1])
                        } else {
                            interval_in(rng, &rat(-1, 1), &rat(1, 1))
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    cubes.shuffle(rng);
    CubesElement::new(dim, cubes).expect("disjoint along the chosen axis")
}

/// Cubes on a quarter grid so that meeting, touching and disjoint pairs all occur.
pub fn overlap_cubes<R: Rng + ?Sized>(rng: &mut R, dim: usize, arity: usize) -> Vec<LittleCube> {
    (0..arity)
        .map(|_| {
            LittleCube::new(
                (0..dim)
                    .map(|_| {
                        let l = rng.gen_range(-4..4);
                        let r = rng.gen_range(l + 1..=4);
                        LittleInterval::new(rat(r - l, 8), rat(r + l, 8)).expect("inside [-1, 1]")
                    })
                    .collect(),
            )
        })
        .collect()
}

pub fn overlap_element<R: Rng + ?Sized>(rng: &mut R, dim: usize, arity: usize) -> OverlapElement {
    let cubes = overlap_cubes(rng, dim, arity);
    overlap_canonical(dim, cubes, &perm(rng, arity)).expect("shapes agree")
}

/// Another witness for the same class: a uniformly chosen step-by-step
/// linearisation of the constraints.
pub fn equivalent_representative<R: Rng + ?Sized>(
    rng: &mut R,
    e: &OverlapElement,
) -> OverlapElement {
    let n = e.arity();
    let mut placed = vec![false; n + 1];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let ready: Vec<usize> = (1..=n)
            .filter(|&i| {
                !placed[i]
                    && e.constraints()
                        .iter()
                        .all(|&(below, above)| above != i || placed[below])
            })
            .collect();
        let pick = *ready.choose(rng).expect("constraints are acyclic");
        placed[pick] = true;
        order.push(pick);
    }
    OverlapElement::with_witness(
        e.dim(),
        e.cubes().to_vec(),
        Perm::from_images(order).expect("bijective"),
    )
    .expect("shapes agree")
}

pub fn word<R: Rng + ?Sized>(rng: &mut R, len: usize, names: &[&str]) -> GroupWord {
    let letters = (0..len)
        .map(|_| {
            if rng.gen_bool(0.2) {
                let c = overlap_cubes(rng, 1, 1).pop().expect("one cube");
                return Letter::Cube(c.as_affine());
            }
            let kind = *[LetterKind::Knot, LetterKind::Group, LetterKind::Puck]
                .choose(rng)
                .expect("non-empty");
            let l = Letter::free(kind, *names.choose(rng).expect("non-empty"));
            if rng.gen_bool(0.5) {
                l.inverse()
            } else {
                l
            }
        })
        .collect();
    GroupWord::from_letters(letters)
}

/// A generator diagram with random overlaps and witness, its words
/// sometimes decorated with group letters.
pub fn splice_generator<R: Rng + ?Sized>(rng: &mut R, name: &str, arity: usize) -> SpliceElement {
    let mut overlaps = Vec::new();
    for i in 1..=arity {
        for j in i + 1..=arity {
            if rng.gen_bool(0.5) {
                overlaps.push((i, j));
            }
        }
    }
    let e =
        SpliceElement::generator(name, arity, overlaps, perm(rng, arity)).expect("valid generator");
    if !rng.gen_bool(0.3) {
        return e;
    }
    let decorate =
        |w: &GroupWord, tag: String| w.concat(&GroupWord::letter(LetterKind::Group, tag));
    let base = decorate(e.base(), format!("{name}_g0"));
    let pucks = e
        .pucks()
        .iter()
        .enumerate()
        .map(|(i, p)| decorate(p, format!("{name}_g{}", i + 1)))
        .collect();
    SpliceElement::new(
        base,
        pucks,
        e.overlaps().iter().copied(),
        e.witness().clone(),
    )
    .expect("valid")
}

pub fn symbolic_wreath<R: Rng + ?Sized>(
    rng: &mut R,
    arity: usize,
    tag: &str,
    trivial_outer: bool,
) -> SymbolicWreath {
    let letter = |rng: &mut R, i: usize| {
        if rng.gen_bool(0.25) {
            GroupWord::empty()
        } else {
            GroupWord::letter(LetterKind::Group, format!("{tag}{i}"))
        }
    };
    let outer = if trivial_outer {
        GroupWord::empty()
    } else {
        letter(rng, 0)
    };
    let inner = (1..=arity).map(|i| letter(rng, i)).collect();
    SymbolicWreath::new(outer, perm(rng, arity), inner).expect("arity agrees")
}

fn coprime_pair<R: Rng + ?Sized>(rng: &mut R, lo: i64, hi: i64) -> (i64, i64) {
    use num_integer::Integer;
    loop {
        let p = rng.gen_range(lo..=hi);
        let q = rng.gen_range(lo..=hi);
        if p != q && p.gcd(&q) == 1 {
            return (p, q);
        }
    }
}

/// A raw prime tree of the given depth, mirrors and reversals included.
pub fn prime_tree<R: Rng + ?Sized>(rng: &mut R, cat: &Catalogue, depth: usize) -> SpliceTree {
    let choice = if depth == 0 {
        rng.gen_range(0..2)
    } else {
        rng.gen_range(0..4)
    };
    let t = match choice {
        0 => {
            let (p, q) = coprime_pair(rng, 2, 9);
            SpliceTree::torus(p, if rng.gen_bool(0.5) { q } else { -q }).expect("coprime")
        }
        1 => {
            let knots: Vec<_> = cat.knots().map(|k| k.name.clone()).collect();
            SpliceTree::leaf(knots.choose(rng).expect("catalogue has knots").clone())
        }
        2 => {
            let p = rng.gen_range(2..=4);
            let q = loop {
                let q = rng.gen_range(-7i64..=7);
                if num_integer::Integer::gcd(&p, &q) == 1 {
                    break q;
                }
            };
            SpliceTree::cable(p, q, prime_tree(rng, cat, depth - 1)).expect("valid cable")
        }
        _ => {
            let links: Vec<_> = cat.links().collect();
            let link = links.choose(rng).expect("catalogue has links");
            let children = (0..link.arity)
                .map(|_| knotted_tree(rng, cat, depth - 1))
                .collect();
            SpliceTree::satellite(link.name.clone(), children)
        }
    };
    let t = if rng.gen_bool(0.3) { t.mirror() } else { t };
    if rng.gen_bool(0.3) {
        t.reverse()
    } else {
        t
    }
}

/// A raw tree that is never the unknot once canonicalised.
pub fn knotted_tree<R: Rng + ?Sized>(rng: &mut R, cat: &Catalogue, depth: usize) -> SpliceTree {
    if depth > 0 && rng.gen_bool(0.25) {
        let k = rng.gen_range(2..=3);
        let mut children: Vec<SpliceTree> =
            (0..k).map(|_| prime_tree(rng, cat, depth - 1)).collect();
        if rng.gen_bool(0.3) {
            children.push(SpliceTree::Unknot);
        }
        return SpliceTree::keychain(children);
    }
    // cables with |q| = 1 around an unknot would collapse, so keep prime leaves knotted
    prime_tree(rng, cat, depth)
}
