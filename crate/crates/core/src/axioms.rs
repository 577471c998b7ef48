//! Randomised verification of the operad axioms.
//!
//! Trial `i` of a run with seed `s` draws from ChaCha8 stream `i` of seed
//! `s`, so reports are reproducible however the trials are scheduled.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cubes::{cube_compose, sigma_act, CubesElement};
use crate::error::{Error, Result};
use crate::overlap::{
    overlap_compose, overlap_compose_representative, overlap_sigma_act, project_to_overlap,
    OverlapElement,
};
use crate::perm::{block_perm, Perm};
use crate::random;
use crate::splice::{
    compare, inner_equivariance_sides, outer_equivariance_sides, splice_act, splice_compose,
    verify_associativity_with, wreath_act, ComposeMode, SpliceElement, SymbolicWreath,
};
use crate::word::{kappa_prime_act, reduce, GroupWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operad {
    Cubes,
    Overlap,
    Splice,
}

impl Operad {
    pub fn name(self) -> &'static str {
        match self {
            Operad::Cubes => "cubes",
            Operad::Overlap => "overlap",
            Operad::Splice => "splice",
        }
    }

    pub fn axioms(self) -> &'static [&'static str] {
        match self {
            Operad::Cubes => &["associativity", "symmetry", "identity"],
            Operad::Overlap => &[
                "associativity",
                "symmetry",
                "identity",
                "well-defined",
                "projection",
                "action",
            ],
            Operad::Splice => &[
                "associativity",
                "symmetry",
                "identity",
                "equivariance",
                "action",
            ],
        }
    }
}

impl FromStr for Operad {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cubes" => Ok(Operad::Cubes),
            "overlap" => Ok(Operad::Overlap),
            "splice" => Ok(Operad::Splice),
            other => Err(Error::Structural(format!("unknown operad `{other}`"))),
        }
    }
}

/// Outcome of one axiom on one instance; `Err` carries the counterexample.
pub type Check = (&'static str, std::result::Result<(), String>);

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

fn list<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn verdict(holds: bool, detail: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if holds {
        Ok(())
    } else {
        Err(detail())
    }
}

fn symmetry_perm(sigma: &Perm, arities: &[usize], fault: bool) -> Perm {
    let ids: Vec<Perm> = arities.iter().map(|&n| Perm::identity(n)).collect();
    let p = block_perm(sigma, arities, &ids).expect("arities agree");
    if fault {
        p.inverse()
    } else {
        p
    }
}

fn permuted<T: Clone>(items: &[T], sigma: &Perm) -> Vec<T> {
    (1..=sigma.len())
        .map(|i| items[sigma.apply(i) - 1].clone())
        .collect()
}

/// `fault` replaces the symmetry permutation by its inverse.
pub fn cubes_trial<R: Rng + ?Sized>(rng: &mut R, fault: bool) -> Vec<Check> {
    let dim = rng.gen_range(1..=3);
    let k = rng.gen_range(0..=3);
    let j = random::cubes_element(rng, dim, k);
    let ls: Vec<CubesElement> = (0..k)
        .map(|_| {
            let a = rng.gen_range(0..=3);
            random::cubes_element(rng, dim, a)
        })
        .collect();
    let ms: Vec<Vec<CubesElement>> = ls
        .iter()
        .map(|l| {
            (0..l.arity())
                .map(|_| {
                    let a = rng.gen_range(0..=2);
                    random::cubes_element(rng, dim, a)
                })
                .collect()
        })
        .collect();
    let describe = || format!("J = {j}; L = [{}]", list(&ls));

    let inner: Vec<CubesElement> = ls
        .iter()
        .zip(&ms)
        .map(|(l, m)| cube_compose(l, m).expect("arities agree"))
        .collect();
    let flat: Vec<CubesElement> = ms.iter().flatten().cloned().collect();
    let jl = cube_compose(&j, &ls).expect("arities agree");
    let assoc = cube_compose(&j, &inner).expect("arities agree")
        == cube_compose(&jl, &flat).expect("arities agree");

    let sigma = random::perm(rng, k);
    let arities: Vec<usize> = ls.iter().map(CubesElement::arity).collect();
    let lhs = cube_compose(
        &sigma_act(&j, &sigma).expect("sizes agree"),
        &permuted(&ls, &sigma),
    )
    .expect("arities agree");
    let rhs = sigma_act(&jl, &symmetry_perm(&sigma, &arities, fault)).expect("sizes agree");
    let taus: Vec<Perm> = arities.iter().map(|&n| random::perm(rng, n)).collect();
    let acted: Vec<CubesElement> = ls
        .iter()
        .zip(&taus)
        .map(|(l, t)| sigma_act(l, t).expect("sizes agree"))
        .collect();
    let inner_lhs = cube_compose(&j, &acted).expect("arities agree");
    let inner_rhs = sigma_act(
        &jl,
        &block_perm(&Perm::identity(k), &arities, &taus).expect("sizes agree"),
    )
    .expect("sizes agree");
    let sym = lhs == rhs && inner_lhs == inner_rhs;

    let id = CubesElement::identity(dim);
    let ident = cube_compose(&j, &vec![id.clone(); k]).expect("arities agree") == j
        && cube_compose(&id, std::slice::from_ref(&j)).expect("arities agree") == j;

    vec![
        ("associativity", verdict(assoc, describe)),
        (
            "symmetry",
            verdict(sym, || format!("{}; sigma = {sigma}", describe())),
        ),
        ("identity", verdict(ident, describe)),
    ]
}

/// `fault` replaces the symmetry permutation by its inverse.
pub fn overlap_trial<R: Rng + ?Sized>(rng: &mut R, fault: bool) -> Vec<Check> {
    let dim = rng.gen_range(1..=2);
    let k = rng.gen_range(0..=3);
    let j = random::overlap_element(rng, dim, k);
    let ls: Vec<OverlapElement> = (0..k)
        .map(|_| {
            let a = rng.gen_range(0..=3);
            random::overlap_element(rng, dim, a)
        })
        .collect();
    let ms: Vec<Vec<OverlapElement>> = ls
        .iter()
        .map(|l| {
            (0..l.arity())
                .map(|_| {
                    let a = rng.gen_range(0..=2);
                    random::overlap_element(rng, dim, a)
                })
                .collect()
        })
        .collect();
    let describe = || format!("J = {j}; L = [{}]", list(&ls));

    let inner: Vec<OverlapElement> = ls
        .iter()
        .zip(&ms)
        .map(|(l, m)| overlap_compose(l, m).expect("arities agree"))
        .collect();
    let flat: Vec<OverlapElement> = ms.iter().flatten().cloned().collect();
    let jl = overlap_compose(&j, &ls).expect("arities agree");
    let assoc = overlap_compose(&j, &inner).expect("arities agree")
        == overlap_compose(&jl, &flat).expect("arities agree");

    let sigma = random::perm(rng, k);
    let arities: Vec<usize> = ls.iter().map(OverlapElement::arity).collect();
    let lhs = overlap_compose(
        &overlap_sigma_act(&j, &sigma).expect("sizes agree"),
        &permuted(&ls, &sigma),
    )
    .expect("arities agree");
    let rhs = overlap_sigma_act(&jl, &symmetry_perm(&sigma, &arities, fault)).expect("sizes agree");
    let taus: Vec<Perm> = arities.iter().map(|&n| random::perm(rng, n)).collect();
    let acted: Vec<OverlapElement> = ls
        .iter()
        .zip(&taus)
        .map(|(l, t)| overlap_sigma_act(l, t).expect("sizes agree"))
        .collect();
    let inner_lhs = overlap_compose(&j, &acted).expect("arities agree");
    let inner_rhs = overlap_sigma_act(
        &jl,
        &block_perm(&Perm::identity(k), &arities, &taus).expect("sizes agree"),
    )
    .expect("sizes agree");
    let sym = lhs == rhs && inner_lhs == inner_rhs;

    let id = OverlapElement::identity(dim);
    let ident = overlap_compose(&j, &vec![id.clone(); k]).expect("arities agree") == j
        && overlap_compose(&id, std::slice::from_ref(&j)).expect("arities agree") == j;

    let j2 = random::equivalent_representative(rng, &j);
    let ls2: Vec<OverlapElement> = ls
        .iter()
        .map(|l| random::equivalent_representative(rng, l))
        .collect();
    let c1 = overlap_compose(&j, &ls).expect("arities agree");
    let c2 = overlap_compose(&j2, &ls2).expect("arities agree");
    let well_defined = c1 == c2 && c1.witness() == c2.witness();

    let cj = random::cubes_element(rng, dim + 1, k);
    let cls: Vec<CubesElement> = (0..k)
        .map(|_| {
            let a = rng.gen_range(0..=3);
            random::cubes_element(rng, dim + 1, a)
        })
        .collect();
    let projected: Vec<OverlapElement> = cls
        .iter()
        .map(|c| project_to_overlap(c).expect("positive dimension"))
        .collect();
    let proj_lhs = project_to_overlap(&cube_compose(&cj, &cls).expect("arities agree"))
        .expect("positive dimension");
    let proj_rhs = overlap_compose(
        &project_to_overlap(&cj).expect("positive dimension"),
        &projected,
    )
    .expect("arities agree");
    let projection = proj_lhs == proj_rhs;

    let names = ["a", "b", "c"];
    let total: usize = arities.iter().sum();
    let xs: Vec<GroupWord> = (0..total)
        .map(|_| {
            let len = rng.gen_range(0..=6);
            random::word(rng, len, &names)
        })
        .collect();
    let rep = overlap_compose_representative(&j, &ls).expect("arities agree");
    let mut offset = 0;
    let mut inner_words = Vec::new();
    for l in &ls {
        inner_words
            .push(kappa_prime_act(l, &xs[offset..offset + l.arity()]).expect("arity agrees"));
        offset += l.arity();
    }
    let act_assoc = kappa_prime_act(&rep, &xs).expect("arity agrees")
        == kappa_prime_act(&j, &inner_words).expect("arity agrees");
    let ys: Vec<GroupWord> = (0..k)
        .map(|_| {
            let len = rng.gen_range(0..=6);
            random::word(rng, len, &names)
        })
        .collect();
    let moved: Vec<GroupWord> = permuted(&ys, &sigma.inverse());
    let act_sym = kappa_prime_act(&overlap_sigma_act(&j, &sigma).expect("sizes agree"), &ys)
        .expect("arity agrees")
        == kappa_prime_act(&j, &moved).expect("arity agrees");
    let f = random::word(rng, 6, &names);
    let act_id =
        kappa_prime_act(&id, std::slice::from_ref(&f)).expect("arity agrees") == reduce(&f);

    vec![
        ("associativity", verdict(assoc, describe)),
        (
            "symmetry",
            verdict(sym, || format!("{}; sigma = {sigma}", describe())),
        ),
        ("identity", verdict(ident, describe)),
        (
            "well-defined",
            verdict(well_defined, || format!("{} vs J' = {j2}", describe())),
        ),
        (
            "projection",
            verdict(projection, || format!("J = {cj}; L = [{}]", list(&cls))),
        ),
        (
            "action",
            verdict(act_assoc && act_sym && act_id, || {
                format!("{}; x = [{}]", describe(), list(&xs))
            }),
        ),
    ]
}

fn splice_args<R: Rng + ?Sized>(
    rng: &mut R,
    prefix: &str,
    count: usize,
    max_arity: usize,
) -> Vec<SpliceElement> {
    (0..count)
        .map(|i| {
            let a = rng.gen_range(0..=max_arity);
            random::splice_generator(rng, &format!("{prefix}{i}"), a)
        })
        .collect()
}

/// `fault` drops one conjugator from the composition.
pub fn splice_trial<R: Rng + ?Sized>(rng: &mut R, fault: bool) -> Vec<Check> {
    let k = rng.gen_range(0..=3);
    let j = random::splice_generator(rng, "J", k);
    let ls = splice_args(rng, "A", k, 2);
    let ms: Vec<Vec<SpliceElement>> = ls
        .iter()
        .enumerate()
        .map(|(a, l)| splice_args(rng, &format!("M{a}_"), l.arity(), 2))
        .collect();
    let describe = || format!("J = {j}; L = [{}]", list(&ls));
    let mode = if fault {
        ComposeMode::DropConjugator
    } else {
        ComposeMode::Correct
    };

    let report = verify_associativity_with(&j, &ls, &ms, mode);
    let assoc = match report.mismatch {
        None => Ok(()),
        Some(m) => Err(format!("{}; {m}", describe())),
    };

    let jl = splice_compose(&j, &ls).expect("arities agree");
    let sigma = random::perm(rng, k);
    let arities: Vec<usize> = ls.iter().map(SpliceElement::arity).collect();
    let lhs = splice_compose(
        &wreath_act(&j, &SymbolicWreath::from_perm(sigma.clone())).expect("arity agrees"),
        &permuted(&ls, &sigma),
    )
    .expect("arities agree");
    let rhs = wreath_act(
        &jl,
        &SymbolicWreath::from_perm(symmetry_perm(&sigma, &arities, false)),
    )
    .expect("arity agrees");
    let sym = verdict(compare(&lhs, &rhs).is_none(), || {
        format!(
            "{}; sigma = {sigma}; {}",
            describe(),
            compare(&lhs, &rhs).expect("differs")
        )
    });

    let id = SpliceElement::identity();
    let ident = splice_compose(&j, &vec![id.clone(); k]).expect("arities agree") == j
        && splice_compose(&id, std::slice::from_ref(&j)).expect("arities agree") == j;

    let g = random::symbolic_wreath(rng, k, "g", false);
    let (il, ir) = inner_equivariance_sides(&j, &g, &ls).expect("arities agree");
    let gammas: Vec<SymbolicWreath> = ls
        .iter()
        .enumerate()
        .map(|(a, l)| random::symbolic_wreath(rng, l.arity(), &format!("h{a}_"), true))
        .collect();
    let (ol, or) = outer_equivariance_sides(&j, &ls, &gammas).expect("arities agree");
    let equivariance = match compare(&il, &ir).or_else(|| compare(&ol, &or)) {
        None => Ok(()),
        Some(m) => Err(format!("{}; {m}", describe())),
    };

    let names = ["x", "y", "z"];
    let total: usize = arities.iter().sum();
    let fs: Vec<GroupWord> = (0..total)
        .map(|_| {
            let len = rng.gen_range(0..=4);
            random::word(rng, len, &names)
        })
        .collect();
    let mut offset = 0;
    let mut inner_words = Vec::new();
    for l in &ls {
        inner_words.push(splice_act(l, &fs[offset..offset + l.arity()]).expect("arity agrees"));
        offset += l.arity();
    }
    let act_assoc = splice_act(&jl, &fs).expect("arity agrees")
        == splice_act(&j, &inner_words).expect("arity agrees");
    let ys: Vec<GroupWord> = (0..k)
        .map(|_| {
            let len = rng.gen_range(0..=4);
            random::word(rng, len, &names)
        })
        .collect();
    let jsig = wreath_act(&j, &SymbolicWreath::from_perm(sigma.clone())).expect("arity agrees");
    let act_sym = splice_act(&jsig, &ys).expect("arity agrees")
        == splice_act(&j, &permuted(&ys, &sigma.inverse())).expect("arity agrees");
    let f = random::word(rng, 4, &names);
    let act_id = splice_act(&id, std::slice::from_ref(&f)).expect("arity agrees") == reduce(&f);

    vec![
        ("associativity", assoc),
        ("symmetry", sym),
        ("identity", verdict(ident, describe)),
        ("equivariance", equivariance),
        (
            "action",
            verdict(act_assoc && act_sym && act_id, || {
                format!("{}; F = [{}]", describe(), list(&fs))
            }),
        ),
    ]
}

pub fn run_trial(operad: Operad, seed: u64, trial: usize, fault: bool) -> Vec<Check> {
    let mut rng = trial_rng(seed, trial);
    match operad {
        Operad::Cubes => cubes_trial(&mut rng, fault),
        Operad::Overlap => overlap_trial(&mut rng, fault),
        Operad::Splice => splice_trial(&mut rng, fault),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub axiom: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub axiom: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub operad: Operad,
    pub trials: usize,
    pub seed: u64,
    pub tallies: Vec<Tally>,
    pub first_failure: Option<Counterexample>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "operad": self.operad.name(),
            "trials": self.trials,
            "seed": self.seed,
            "axioms": self.tallies.iter().map(|t| serde_json::json!({
                "axiom": t.axiom, "passed": t.passed, "failed": t.failed,
            })).collect::<Vec<_>>(),
            "first_counterexample": self.first_failure.as_ref().map(|c| serde_json::json!({
                "trial": c.trial, "axiom": c.axiom, "detail": c.detail,
            })),
            "result": if self.passed() { "pass" } else { "fail" },
        })
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "operad: {}", self.operad.name())?;
        writeln!(f, "trials: {}", self.trials)?;
        writeln!(f, "seed: {}", self.seed)?;
        for t in &self.tallies {
            writeln!(
                f,
                "{}: {}/{} passed",
                t.axiom,
                t.passed,
                t.passed + t.failed
            )?;
        }
        if let Some(c) = &self.first_failure {
            writeln!(
                f,
                "first counterexample (trial {}, {}): {}",
                c.trial, c.axiom, c.detail
            )?;
        }
        writeln!(f, "result: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Runs `trials` seeded instances in parallel and merges them in trial order.
pub fn run_axioms(operad: Operad, trials: usize, seed: u64, fault: bool) -> AxiomReport {
    let outcomes: Vec<Vec<Check>> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(operad, seed, t, fault))
        .collect();
    let mut tallies: Vec<Tally> = operad
        .axioms()
        .iter()
        .map(|&axiom| Tally {
            axiom,
            passed: 0,
            failed: 0,
        })
        .collect();
    let mut first_failure = None;
    for (trial, checks) in outcomes.into_iter().enumerate() {
        for (axiom, result) in checks {
            let tally = tallies
                .iter_mut()
                .find(|t| t.axiom == axiom)
                .expect("axiom is listed");
            match result {
                Ok(()) => tally.passed += 1,
                Err(detail) => {
                    tally.failed += 1;
                    if first_failure.is_none() {
                        first_failure = Some(Counterexample {
                            trial,
                            axiom,
                            detail,
                        });
                    }
                }
            }
        }
    }
    AxiomReport {
        operad,
        trials,
        seed,
        tallies,
        first_failure,
    }
}
