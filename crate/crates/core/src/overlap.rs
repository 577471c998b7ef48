//! The operad `C′_n` of overlapping `n`-cubes.
//!
//! An element is a tuple of little cubes together with a height order. Two
//! height orders are identified when they agree on every pair of cubes whose
//! interiors meet, so an element is stored as its cubes plus the induced
//! "strictly below" relation on meeting pairs. `witness` is one linear order
//! realising that relation: heights are read as `witness(1)` at the bottom up
//! to `witness(j)` at the top.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};
use std::fmt;

use crate::cubes::{cubes_to_json, CubesElement, LittleCube};
use crate::error::{structural, Result};
use crate::perm::{block_perm, Perm};

#[derive(Debug, Clone)]
pub struct OverlapElement {
    dim: usize,
    cubes: Vec<LittleCube>,
    constraints: BTreeSet<(usize, usize)>,
    witness: Perm,
}

impl PartialEq for OverlapElement {
    fn eq(&self, other: &Self) -> bool {
        overlap_eq(self, other)
    }
}

impl Eq for OverlapElement {}

impl std::hash::Hash for OverlapElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.dim.hash(state);
        self.cubes.hash(state);
        self.constraints.hash(state);
    }
}

impl OverlapElement {
    /// Representative `(cubes, σ)` kept as given; equality is still up to the
    /// equivalence relation.
    pub fn with_witness(dim: usize, cubes: Vec<LittleCube>, sigma: Perm) -> Result<Self> {
        if sigma.len() != cubes.len() {
            return structural(format!(
                "height permutation on {} points for {} cubes",
                sigma.len(),
                cubes.len()
            ));
        }
        if let Some(c) = cubes.iter().find(|c| c.dim() != dim) {
            return structural(format!("cube {c} is not {dim}-dimensional"));
        }
        let constraints = induced_constraints(&cubes, &sigma);
        Ok(OverlapElement {
            dim,
            cubes,
            constraints,
            witness: sigma,
        })
    }

    /// The unit `(Id, e)`.
    pub fn identity(dim: usize) -> Self {
        OverlapElement {
            dim,
            cubes: vec![LittleCube::identity(dim)],
            constraints: BTreeSet::new(),
            witness: Perm::identity(1),
        }
    }

    /// `k` full cubes stacked in index order; the multiplicative suboperad.
    pub fn stacked_identities(dim: usize, k: usize) -> Self {
        overlap_canonical(dim, vec![LittleCube::identity(dim); k], &Perm::identity(k))
            .expect("shapes agree")
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

    /// Pairs `(i, k)`: cube `i` lies strictly below cube `k` and their interiors meet.
    pub fn constraints(&self) -> &BTreeSet<(usize, usize)> {
        &self.constraints
    }

    pub fn witness(&self) -> &Perm {
        &self.witness
    }

    /// Height of cube `i`, i.e. `σ⁻¹(i)` for the stored witness.
    pub fn height(&self, i: usize) -> usize {
        self.witness.inverse().apply(i)
    }

    /// Same class, witness replaced by the lexicographically least linearisation.
    pub fn canonical(&self) -> Self {
        OverlapElement {
            dim: self.dim,
            cubes: self.cubes.clone(),
            constraints: self.constraints.clone(),
            witness: least_linear_extension(self.arity(), &self.constraints),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.witness == least_linear_extension(self.arity(), &self.constraints)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "dim": self.dim,
            "cubes": cubes_to_json(&self.cubes),
            "below": self.constraints.iter().map(|&(i, k)| [i, k]).collect::<Vec<_>>(),
            "witness": self.witness.images(),
        })
    }

    /// The constraint DAG; an edge `i -> k` means cube `i` is below cube `k`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph overlap {\n  rankdir=BT;\n");
        for (i, c) in self.cubes.iter().enumerate() {
            out.push_str(&format!("  c{} [label=\"{}: {}\"];\n", i + 1, i + 1, c));
        }
        for (i, k) in &self.constraints {
            out.push_str(&format!("  c{i} -> c{k};\n"));
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for OverlapElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C'_{}(", self.dim)?;
        for (i, c) in self.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, " | {})", self.witness)
    }
}

fn induced_constraints(cubes: &[LittleCube], sigma: &Perm) -> BTreeSet<(usize, usize)> {
    let height = sigma.inverse();
    let mut out = BTreeSet::new();
    for i in 1..=cubes.len() {
        for k in i + 1..=cubes.len() {
            if cubes[i - 1].interiors_meet(&cubes[k - 1]) {
                if height.apply(i) < height.apply(k) {
                    out.insert((i, k));
                } else {
                    out.insert((k, i));
                }
            }
        }
    }
    out
}

/// Kahn's algorithm always taking the least available index.
fn least_linear_extension(n: usize, below: &BTreeSet<(usize, usize)>) -> Perm {
    let mut indegree = vec![0usize; n + 1];
    let mut succ = vec![Vec::new(); n + 1];
    for &(i, k) in below {
        indegree[k] += 1;
        succ[i].push(k);
    }
    let mut ready: BinaryHeap<Reverse<usize>> =
        (1..=n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(i)) = ready.pop() {
        order.push(i);
        for &k in &succ[i] {
            indegree[k] -= 1;
            if indegree[k] == 0 {
                ready.push(Reverse(k));
            }
        }
    }
    Perm::from_images(order).expect("constraints induced by a linear order are acyclic")
}

/// The class of `(cubes, σ)` with its canonical witness.
pub fn overlap_canonical(
    dim: usize,
    cubes: Vec<LittleCube>,
    sigma: &Perm,
) -> Result<OverlapElement> {
    Ok(OverlapElement::with_witness(dim, cubes, sigma.clone())?.canonical())
}

pub fn overlap_eq(a: &OverlapElement, b: &OverlapElement) -> bool {
    a.dim == b.dim && a.cubes == b.cubes && a.constraints == b.constraints
}

/// Composite keeping the block witness `block_perm(σ, arities, αᵢ)` as representative.
pub fn overlap_compose_representative(
    outer: &OverlapElement,
    args: &[OverlapElement],
) -> Result<OverlapElement> {
    if outer.arity() != args.len() {
        return structural(format!(
            "element of arity {} given {} arguments",
            outer.arity(),
            args.len()
        ));
    }
    let mut cubes = Vec::new();
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
    let arities: Vec<usize> = args.iter().map(OverlapElement::arity).collect();
    let inners: Vec<Perm> = args.iter().map(|a| a.witness.clone()).collect();
    let beta = block_perm(&outer.witness, &arities, &inners)?;
    OverlapElement::with_witness(outer.dim, cubes, beta)
}

/// Structure map of `C′_n`, result in canonical form.
pub fn overlap_compose(outer: &OverlapElement, args: &[OverlapElement]) -> Result<OverlapElement> {
    Ok(overlap_compose_representative(outer, args)?.canonical())
}

/// Right action `(L, α).τ = (L∘τ, τ⁻¹α)`.
pub fn overlap_sigma_act(element: &OverlapElement, tau: &Perm) -> Result<OverlapElement> {
    if tau.len() != element.arity() {
        return structural(format!(
            "permutation on {} points acting on arity {}",
            tau.len(),
            element.arity()
        ));
    }
    let cubes = (1..=tau.len())
        .map(|i| element.cubes[tau.apply(i) - 1].clone())
        .collect();
    let witness = tau.inverse().compose(&element.witness)?;
    OverlapElement::with_witness(element.dim, cubes, witness)
}

/// Projection `C_{n+1} → C′_n`: drop the last axis and order cubes by the
/// bottom of their last-axis interval, ties kept in index order.
pub fn project_to_overlap(element: &CubesElement) -> Result<OverlapElement> {
    if element.dim() == 0 {
        return structural("cannot project 0-dimensional cubes");
    }
    let mut flat = Vec::with_capacity(element.arity());
    let mut tops = Vec::with_capacity(element.arity());
    for c in element.cubes() {
        let (pi, nu) = c.split_last().expect("dimension is positive");
        flat.push(pi);
        tops.push(nu.bottom());
    }
    let mut order: Vec<usize> = (1..=element.arity()).collect();
    order.sort_by(|&a, &b| tops[a - 1].cmp(&tops[b - 1]));
    let sigma = Perm::from_images(order)?;
    overlap_canonical(element.dim() - 1, flat, &sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubes::{cube_compose, rat, LittleInterval};

    fn cube1(scale: (i64, i64), offset: (i64, i64)) -> LittleCube {
        LittleCube::new(vec![LittleInterval::new(
            rat(scale.0, scale.1),
            rat(offset.0, offset.1),
        )
        .unwrap()])
    }

    #[test]
    fn disjoint_cubes_have_no_constraints() {
        let cubes = vec![cube1((1, 2), (-1, 2)), cube1((1, 2), (1, 2))];
        let a = overlap_canonical(1, cubes.clone(), &Perm::identity(2)).unwrap();
        let b = overlap_canonical(1, cubes, &Perm::transposition(2, 1, 2).unwrap()).unwrap();
        assert!(a.constraints().is_empty());
        assert!(overlap_eq(&a, &b));
        assert_eq!(a.witness(), b.witness());
    }

    #[test]
    fn identical_cubes_force_order() {
        let cubes = vec![LittleCube::identity(1); 2];
        let a = overlap_canonical(1, cubes.clone(), &Perm::identity(2)).unwrap();
        assert_eq!(
            a.constraints().iter().copied().collect::<Vec<_>>(),
            vec![(1, 2)]
        );
        let b = overlap_canonical(1, cubes, &Perm::transposition(2, 1, 2).unwrap()).unwrap();
        assert_eq!(
            b.constraints().iter().copied().collect::<Vec<_>>(),
            vec![(2, 1)]
        );
        assert!(!overlap_eq(&a, &b));
        assert!(overlap_eq(&a, &a));
    }

    #[test]
    fn only_meeting_pair_is_recorded() {
        // cube 1 on the left, cubes 2 and 3 overlapping on the right
        let cubes = vec![
            cube1((1, 4), (-3, 4)),
            cube1((1, 4), (1, 4)),
            cube1((1, 4), (1, 2)),
        ];
        for sigma in Perm::all(3) {
            let e = overlap_canonical(1, cubes.clone(), &sigma).unwrap();
            let inv = sigma.inverse();
            let expected = if inv.apply(2) < inv.apply(3) {
                (2, 3)
            } else {
                (3, 2)
            };
            assert_eq!(
                e.constraints().iter().copied().collect::<Vec<_>>(),
                vec![expected]
            );
        }
    }

    #[test]
    fn canonical_witness_is_least_linear_extension() {
        let cubes = vec![LittleCube::identity(1); 3];
        let sigma = Perm::from_images(vec![3, 1, 2]).unwrap();
        let e = overlap_canonical(1, cubes, &sigma).unwrap();
        // full overlap: only one linear extension
        assert_eq!(e.witness(), &sigma);

        let cubes = vec![
            cube1((1, 4), (-3, 4)),
            cube1((1, 4), (1, 4)),
            cube1((1, 4), (1, 2)),
        ];
        let e = overlap_canonical(1, cubes, &Perm::from_images(vec![3, 2, 1]).unwrap()).unwrap();
        assert_eq!(e.witness().images(), &[1, 3, 2]);
        assert!(e.is_canonical());
    }

    #[test]
    fn compose_with_identity() {
        let cubes = vec![LittleCube::identity(1), cube1((1, 2), (0, 1))];
        let e = overlap_canonical(1, cubes, &Perm::transposition(2, 1, 2).unwrap()).unwrap();
        let id = OverlapElement::identity(1);
        assert_eq!(overlap_compose(&e, &[id.clone(), id.clone()]).unwrap(), e);
        assert_eq!(overlap_compose(&id, std::slice::from_ref(&e)).unwrap(), e);
    }

    #[test]
    fn grafting_inside_one_cube_keeps_inner_constraints() {
        let outer = overlap_canonical(1, vec![cube1((1, 2), (1, 2))], &Perm::identity(1)).unwrap();
        let inner_cubes = vec![
            cube1((1, 2), (-1, 2)),
            LittleCube::identity(1),
            cube1((1, 2), (1, 2)),
        ];
        for sigma in Perm::all(3) {
            let inner = overlap_canonical(1, inner_cubes.clone(), &sigma).unwrap();
            let c = overlap_compose(&outer, std::slice::from_ref(&inner)).unwrap();
            // intersection oracle on the composite cubes directly
            let h = sigma.inverse();
            for i in 1..=3 {
                for k in 1..=3 {
                    let meets = i != k && c.cubes()[i - 1].interiors_meet(&c.cubes()[k - 1]);
                    let below = meets && h.apply(i) < h.apply(k);
                    assert_eq!(c.constraints().contains(&(i, k)), below);
                    assert_eq!(inner.constraints().contains(&(i, k)), below);
                }
            }
        }
    }

    #[test]
    fn multiplicative_suboperad_closed() {
        for k in 0..=3 {
            for js in [[0usize, 1, 2], [2, 2, 2], [1, 0, 3]] {
                let outer = OverlapElement::stacked_identities(2, k);
                let args: Vec<_> = js[..k]
                    .iter()
                    .map(|&j| OverlapElement::stacked_identities(2, j))
                    .collect();
                let total = js[..k].iter().sum();
                let c = overlap_compose(&outer, &args).unwrap();
                assert_eq!(c, OverlapElement::stacked_identities(2, total));
            }
        }
    }

    #[test]
    fn projection_example() {
        // two 2-cubes whose first-axis projections overlap, L1^t > L2^t
        let l1: LittleCube = "[1/2*x+0, 1/4*x+1/2]".parse().unwrap();
        let l2: LittleCube = "[1/2*x+1/4, 1/4*x-1/2]".parse().unwrap();
        let e = CubesElement::new(2, vec![l1, l2]).unwrap();
        let p = project_to_overlap(&e).unwrap();
        assert_eq!(p.witness(), &Perm::transposition(2, 1, 2).unwrap());
        assert_eq!(
            p.constraints().iter().copied().collect::<Vec<_>>(),
            vec![(2, 1)]
        );
        let reversed = overlap_canonical(1, p.cubes().to_vec(), &Perm::identity(2)).unwrap();
        assert!(!overlap_eq(&p, &reversed));
    }

    #[test]
    fn projection_of_side_by_side_cubes_is_unconstrained() {
        let l1: LittleCube = "[1/2*x-1/2, 1/4*x+1/2]".parse().unwrap();
        let l2: LittleCube = "[1/2*x+1/2, 1/4*x-1/2]".parse().unwrap();
        let e = CubesElement::new(2, vec![l1, l2]).unwrap();
        let p = project_to_overlap(&e).unwrap();
        let same_with_id = overlap_canonical(1, p.cubes().to_vec(), &Perm::identity(2)).unwrap();
        assert!(p.constraints().is_empty());
        assert!(overlap_eq(&p, &same_with_id));
    }

    #[test]
    fn projection_of_single_cube() {
        let e = CubesElement::new(2, vec!["[1/2*x+0, 1/3*x+0]".parse().unwrap()]).unwrap();
        let p = project_to_overlap(&e).unwrap();
        assert_eq!(p.arity(), 1);
        assert!(p.witness().is_identity());
        assert_eq!(p.cubes()[0].to_string(), "[1/2*x+0]");
    }

    #[test]
    fn projection_commutes_with_composition_example() {
        let outer = CubesElement::new(
            2,
            vec![
                "[1/2*x+0, 1/4*x+1/2]".parse().unwrap(),
                "[1/2*x+1/4, 1/4*x-1/2]".parse().unwrap(),
            ],
        )
        .unwrap();
        let a = CubesElement::new(
            2,
            vec![
                "[1*x+0, 1/2*x-1/2]".parse().unwrap(),
                "[1*x+0, 1/2*x+1/2]".parse().unwrap(),
            ],
        )
        .unwrap();
        let b = CubesElement::identity(2);
        let lhs =
            project_to_overlap(&cube_compose(&outer, &[a.clone(), b.clone()]).unwrap()).unwrap();
        let rhs = overlap_compose(
            &project_to_overlap(&outer).unwrap(),
            &[
                project_to_overlap(&a).unwrap(),
                project_to_overlap(&b).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn emitters() {
        let e = overlap_canonical(1, vec![LittleCube::identity(1); 2], &Perm::identity(2)).unwrap();
        assert!(e.to_dot().contains("c1 -> c2"));
        assert_eq!(e.to_json()["below"], serde_json::json!([[1, 2]]));
    }
}
