//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails. Runs without the libtest harness so the lines always print.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;

use splice_operad::axioms::{run_axioms, trial_rng, Operad};
use splice_operad::cli;
use splice_operad::geom::{
    bump, moebius_scale_raw, random_sphere_point, selftest, shrink, stereo, SpherePoint,
};
use splice_operad::perm::{signed_cycle_type, Perm, Sign, SignedCycleType, SignedPerm};
use splice_operad::random;
use splice_operad::realize::{
    check_representation, check_representation_with, enumerate_types, feasible_k, ActionParams,
    Convention,
};
use splice_operad::splice::{
    compare, inner_equivariance_sides, outer_equivariance_sides, verify_associativity,
    verify_associativity_with, ComposeMode, SpliceElement,
};
use splice_operad::tree::{
    canonicalize, canonicalize_random_order, check_additivity, complexity, parse_expr, parse_tree,
    splice_graft, Additivity, Catalogue, Expr, Generator, SpliceTree,
};

type Outcome = Result<String, Box<dyn std::error::Error>>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

const SEED: u64 = 20240607;

// 1. Operad axiom suites

fn operad_axioms() -> Outcome {
    let start = Instant::now();
    let mut parts = Vec::new();
    for op in [Operad::Cubes, Operad::Overlap, Operad::Splice] {
        let report = run_axioms(op, 10_000, SEED, false);
        for axiom in ["associativity", "symmetry", "identity"] {
            let t = report.tallies.iter().find(|t| t.axiom == axiom).unwrap();
            ensure(t.passed == 10_000 && t.failed == 0, || {
                format!(
                    "{} {axiom}: {} of 10000 passed\n{report}",
                    op.name(),
                    t.passed
                )
            })?;
        }
        ensure(report.passed(), || report.to_string())?;
        parts.push(format!("{} 3x10000", op.name()));
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("runtime {elapsed:.1?} exceeds 60 s")
    })?;
    Ok(format!("{} in {elapsed:.1?}", parts.join(", ")))
}

// 2. Associativity certificate and its negative control

fn splice_instance(trial: usize) -> (SpliceElement, Vec<SpliceElement>, Vec<Vec<SpliceElement>>) {
    let mut r = trial_rng(SEED ^ 0x2, trial);
    let k = r.gen_range(0..=3);
    let j = random::splice_generator(&mut r, "J", k);
    let ls: Vec<SpliceElement> = (0..k)
        .map(|a| {
            let n = r.gen_range(0..=2);
            random::splice_generator(&mut r, &format!("A{a}"), n)
        })
        .collect();
    let ms = ls
        .iter()
        .enumerate()
        .map(|(a, l)| {
            (0..l.arity())
                .map(|b| {
                    let n = r.gen_range(0..=2);
                    random::splice_generator(&mut r, &format!("M{a}_{b}"), n)
                })
                .collect()
        })
        .collect();
    (j, ls, ms)
}

fn associativity_certificate() -> Outcome {
    let mut caught = 0;
    let mut first = None;
    for trial in 0..10_000 {
        let (j, ls, ms) = splice_instance(trial);
        let report = verify_associativity(&j, &ls, &ms);
        ensure(report.holds, || {
            format!("trial {trial}: {}", report.mismatch.as_ref().unwrap())
        })?;
        let broken = verify_associativity_with(&j, &ls, &ms, ComposeMode::DropConjugator);
        if let Some(m) = broken.mismatch {
            caught += 1;
            first.get_or_insert(format!("{}", m.location));
        }
    }
    // a fixed instance the dropped conjugator must break
    let j = SpliceElement::generator("J", 2, [(1, 2)], Perm::identity(2))?;
    let a = SpliceElement::generator("A", 2, [], Perm::identity(2))?;
    let b = SpliceElement::generator("B", 1, [], Perm::identity(1))?;
    let c = SpliceElement::generator("C", 0, [], Perm::identity(0))?;
    let ms = vec![vec![c.clone(), b.clone()], vec![c]];
    let control = verify_associativity_with(&j, &[a, b], &ms, ComposeMode::DropConjugator);
    let m = control
        .mismatch
        .ok_or("negative control passed on the fixed instance")?;
    ensure(caught > 0, || "negative control never failed".into())?;
    Ok(format!(
        "10000/10000 hold; dropped conjugator fails {caught}/10000 (first at {}), fixed instance at {}",
        first.unwrap(),
        m.location
    ))
}

// 3. Equivariance

fn equivariance() -> Outcome {
    for trial in 0..1000 {
        let mut r = trial_rng(SEED ^ 0x3, trial);
        let k = r.gen_range(0..=3);
        let j = random::splice_generator(&mut r, "J", k);
        let ls: Vec<SpliceElement> = (0..k)
            .map(|a| {
                let n = r.gen_range(0..=3);
                random::splice_generator(&mut r, &format!("A{a}"), n)
            })
            .collect();
        let g = random::symbolic_wreath(&mut r, k, "g", false);
        let (l, rt) = inner_equivariance_sides(&j, &g, &ls).map_err(|e| e.to_string())?;
        if let Some(m) = compare(&l, &rt) {
            return Err(format!("inner identity, trial {trial}: {m}").into());
        }
        let gammas: Vec<_> = ls
            .iter()
            .enumerate()
            .map(|(a, x)| random::symbolic_wreath(&mut r, x.arity(), &format!("h{a}_"), true))
            .collect();
        let (l, rt) = outer_equivariance_sides(&j, &ls, &gammas).map_err(|e| e.to_string())?;
        if let Some(m) = compare(&l, &rt) {
            return Err(format!("outer identity, trial {trial}: {m}").into());
        }
    }
    Ok("inner and outer identities on 1000/1000 instances".into())
}

// 4. Unique decomposition of connected sums

fn random_prime<R: Rng>(r: &mut R, cat: &Catalogue) -> SpliceTree {
    loop {
        let depth = r.gen_range(0..=1);
        let t = canonicalize(cat, &random::prime_tree(r, cat, depth)).unwrap();
        if t != SpliceTree::Unknot {
            return t;
        }
    }
}

/// Random binary bracketing of `items`, with stray unknots and double
/// mirrors or reversals sprinkled in.
fn bracket<R: Rng>(r: &mut R, items: &[SpliceTree]) -> SpliceTree {
    let t = if items.len() == 1 {
        items[0].clone()
    } else {
        let cut = r.gen_range(1..items.len());
        let mut children = vec![bracket(r, &items[..cut]), bracket(r, &items[cut..])];
        if r.gen_bool(0.2) {
            children.insert(r.gen_range(0..=children.len()), SpliceTree::Unknot);
        }
        SpliceTree::keychain(children)
    };
    match r.gen_range(0..4) {
        0 => t.mirror().mirror(),
        1 => t.reverse().reverse(),
        _ => t,
    }
}

fn schubert() -> Outcome {
    let cat = Catalogue::bundled();
    let mut seen: BTreeMap<SpliceTree, Vec<SpliceTree>> = BTreeMap::new();
    for trial in 0..1000 {
        let mut r = trial_rng(SEED ^ 0x4, trial);
        let m = r.gen_range(1..=5);
        let mut primes: Vec<SpliceTree> = (0..m).map(|_| random_prime(&mut r, &cat)).collect();
        primes.sort();
        // the canonical form is the sorted multiset itself
        let expected = if m == 1 {
            primes[0].clone()
        } else {
            SpliceTree::Keychain {
                children: primes.clone(),
            }
        };
        for _ in 0..5 {
            let mut order = primes.clone();
            order.shuffle(&mut r);
            let raw = bracket(&mut r, &order);
            let c = canonicalize(&cat, &raw).map_err(|e| e.to_string())?;
            ensure(c == expected, || {
                format!("trial {trial}: {raw} gave {c}, expected {expected}")
            })?;
            ensure(canonicalize(&cat, &c).unwrap() == c, || {
                format!("not idempotent on {c}")
            })?;
            let other = canonicalize_random_order(&cat, &raw, &mut r).map_err(|e| e.to_string())?;
            ensure(other == c, || {
                format!("rule order changed {raw}: {other} vs {c}")
            })?;
        }
        if let Some(prev) = seen.insert(expected.clone(), primes.clone()) {
            ensure(prev == primes, || {
                format!("{prev:?} and {primes:?} share {expected}")
            })?;
        }
    }
    // near misses: one prime mirrored or reversed must change the form
    let mut near = 0;
    for primes in seen.values() {
        for (i, p) in primes.iter().enumerate() {
            for variant in [p.mirror(), p.reverse()] {
                let v = canonicalize(&cat, &variant).unwrap();
                let mut changed = primes.clone();
                changed[i] = v;
                changed.sort();
                let form = canonicalize(&cat, &SpliceTree::keychain(changed.clone())).unwrap();
                let same = canonicalize(&cat, &SpliceTree::keychain(primes.clone())).unwrap();
                ensure((form == same) == (&changed == primes), || {
                    format!("{primes:?} vs {changed:?}")
                })?;
                near += 1;
            }
        }
    }
    Ok(format!(
        "1000 multisets x 5 presentations agree, {} distinct forms, {near} near-miss pairs separated",
        seen.len()
    ))
}

// 5. Complexity

fn count_nodes(v: &serde_json::Value) -> u64 {
    let own = u64::from(v["kind"].as_str() != Some("unknot"));
    let children: u64 = v["children"]
        .as_array()
        .map(|cs| cs.iter().map(count_nodes).sum())
        .unwrap_or(0);
    own + children + v.get("child").map(count_nodes).unwrap_or(0)
}

fn coprime(a: i64, b: i64) -> bool {
    num_integer::Integer::gcd(&a, &b) == 1
}

fn complexity_anchors() -> Outcome {
    let cat = Catalogue::bundled();
    let c = |text: &str| -> Result<u64, String> {
        let t = canonicalize(&cat, &parse_tree(&cat, text).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        complexity(&cat, &t).map_err(|e| e.to_string())
    };
    ensure(c("unknot")? == 0, || "c(unknot) != 0".into())?;
    for leaf in ["T(2,3)", "T(3,-2)", "T(5,7)", "mirror(T(2,5))"] {
        ensure(c(leaf)? == 1, || format!("c({leaf}) != 1"))?;
    }
    for k in cat.knots() {
        for text in [k.name.clone(), format!("mirror(rev({}))", k.name)] {
            ensure(c(&text)? == 1, || format!("c({text}) != 1"))?;
        }
    }
    ensure(c("sum(T(2,3),T(2,3))")? == 3, || {
        "connect sum of trefoils".into()
    })?;
    ensure(c("cable(2,3;T(2,5))")? == 2, || "cable".into())?;
    ensure(c("splice(whitehead;T(2,3))")? == 2, || {
        "whitehead satellite".into()
    })?;
    ensure(Generator::HOPF.complexity() == 0, || {
        "Hopf generator".into()
    })?;

    let mut tally: BTreeMap<&str, usize> = BTreeMap::new();
    for trial in 0..1000 {
        let mut r = trial_rng(SEED ^ 0x5, trial);
        let forced = trial % 4 == 0;
        let links: Vec<_> = cat.links().map(|l| l.name.clone()).collect();
        let gen = if forced {
            Generator::Keychain(r.gen_range(2..=3))
        } else {
            match r.gen_range(0..3) {
                0 => Generator::Keychain(r.gen_range(1..=3)),
                1 => loop {
                    let (p, q) = (r.gen_range(2..=5), r.gen_range(-7i64..=7));
                    if q != 0 && coprime(p, q) {
                        break Generator::Seifert(p, q);
                    }
                },
                _ => Generator::Hyperbolic(links.choose(&mut r).unwrap().clone()),
            }
        };
        let k = gen.arity(&cat).unwrap();
        // forced merges keep every slot knotted so no Hopf collapse intervenes
        let mut children: Vec<SpliceTree> = (0..k)
            .map(|_| {
                if !forced && !matches!(gen, Generator::Hyperbolic(_)) && r.gen_bool(0.15) {
                    SpliceTree::Unknot
                } else {
                    let depth = r.gen_range(0..=1);
                    random::knotted_tree(&mut r, &cat, depth)
                }
            })
            .collect();
        if forced {
            let i = r.gen_range(0..k);
            let parts = r.gen_range(2..=3);
            children[i] =
                SpliceTree::keychain((0..parts).map(|_| random_prime(&mut r, &cat)).collect());
        }
        let canon: Vec<SpliceTree> = children
            .iter()
            .map(|t| canonicalize(&cat, t).unwrap())
            .collect();
        let sum: u64 = canon.iter().map(|t| count_nodes(&t.to_json())).sum();
        let graft = splice_graft(&cat, &gen, &children).map_err(|e| e.to_string())?;
        let cg = complexity(&cat, &graft).map_err(|e| e.to_string())?;
        ensure(cg == count_nodes(&graft.to_json()), || {
            format!("complexity of {graft}")
        })?;
        let verdict = check_additivity(&cat, &gen, &children).map_err(|e| e.to_string())?;
        let additive = gen.complexity() + sum;
        match verdict {
            Additivity::Additive => {
                ensure(cg == additive, || {
                    format!(
                        "{gen:?} on {canon:?}: additive verdict but c = {cg}, expected {additive}"
                    )
                })?;
                *tally.entry("additive").or_default() += 1;
            }
            Additivity::DegenerateConnectSum { merged } => {
                let keychains = canon
                    .iter()
                    .filter(|t| matches!(t, SpliceTree::Keychain { .. }))
                    .count();
                ensure(merged == keychains && merged > 0, || {
                    format!("merged {merged} of {keychains}")
                })?;
                ensure(cg + merged as u64 == additive, || {
                    format!("{gen:?} on {canon:?}: c = {cg}, additive {additive}, merged {merged}")
                })?;
                *tally.entry("degenerate(b)").or_default() += 1;
            }
            Additivity::DegenerateHopf => {
                ensure(cg <= additive, || {
                    format!("Hopf splice raised complexity: {graft}")
                })?;
                *tally.entry("degenerate(a)").or_default() += 1;
            }
        }
        if forced {
            ensure(
                matches!(verdict, Additivity::DegenerateConnectSum { .. }),
                || format!("forced merge gave {verdict:?} for {canon:?}"),
            )?;
        }
    }
    ensure(
        tally.get("degenerate(b)").copied().unwrap_or(0) >= 250,
        || format!("too few forced merges: {tally:?}"),
    )?;
    Ok(format!("anchors exact; 1000 grafts {tally:?}"))
}

// 6. Realisation

/// Templates read straight off the five rules.
fn templates(n: u64, p: i64, q: i64) -> Vec<(usize, Sign, u8)> {
    let gp = num_integer::Integer::gcd(&p.unsigned_abs(), &n);
    let gq = num_integer::Integer::gcd(&q.unsigned_abs(), &n);
    let mut out = vec![(n as usize, Sign::Plus, 1)];
    if gq > 1 {
        out.push(((n / gq) as usize, Sign::Plus, 2));
        out.push((1, Sign::Plus, 5));
    }
    if gp > 1 {
        out.push(((n / gp) as usize, Sign::Plus, 3));
    }
    if gp == 2 {
        out.push(((n / 2) as usize, Sign::Minus, 4));
    }
    out
}

fn combination(target: u64, parts: &[u64]) -> bool {
    match parts.split_first() {
        None => target == 0,
        Some((&p, rest)) => (0..=target / p).any(|c| combination(target - c * p, rest)),
    }
}

/// Accepts iff some assignment of rules to cycles satisfies every condition.
fn brute_accept(n: u64, p: i64, q: i64, cycles: &[(usize, Sign)], fixed_only: bool) -> bool {
    let tm = templates(n, p, q);
    let gp = num_integer::Integer::gcd(&p.unsigned_abs(), &n);
    let gq = num_integer::Integer::gcd(&q.unsigned_abs(), &n);
    let k: u64 = cycles.iter().map(|c| c.0 as u64).sum();
    fn go(
        i: usize,
        cycles: &[(usize, Sign)],
        tm: &[(usize, Sign, u8)],
        used: &mut Vec<u8>,
        ok: &mut dyn FnMut(&[u8]) -> bool,
    ) -> bool {
        if i == cycles.len() {
            return ok(used);
        }
        for &(l, s, rule) in tm {
            if (l, s) == cycles[i] {
                used.push(rule);
                let hit = go(i + 1, cycles, tm, used, ok);
                used.pop();
                if hit {
                    return true;
                }
            }
        }
        false
    }
    let mut ok = |rules: &[u8]| {
        let fives = rules.iter().filter(|&&r| r == 5).count();
        let twos = rules.contains(&2);
        match fives {
            0 => !fixed_only && combination(k, &[n, n / gq, n / gp]),
            1 => !twos && combination(k - 1, &[n, n / gp]),
            _ => false,
        }
    };
    go(0, cycles, &tm, &mut Vec::new(), &mut ok)
}

/// All signed cycle types of degree `k`, parts in non-increasing order.
fn signed_partitions(k: usize) -> Vec<Vec<(usize, Sign)>> {
    fn go(
        left: usize,
        max: (usize, Sign),
        cur: &mut Vec<(usize, Sign)>,
        out: &mut Vec<Vec<(usize, Sign)>>,
    ) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for len in (1..=left.min(max.0)).rev() {
            for sign in [Sign::Minus, Sign::Plus] {
                if (len, sign) > max {
                    continue;
                }
                cur.push((len, sign));
                go(left - len, (len, sign), cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(k, (k, Sign::Plus), &mut Vec::new(), &mut out);
    out
}

fn realization() -> Outcome {
    let order_ten = ActionParams::new(10, 5, 2, Convention::SecondIsP)?;
    let t = signed_cycle_type(&SignedPerm::parse("(1 2 3 4 5)-")?);
    let v = check_representation(&order_ten, &t);
    ensure(v.accepted && t.degree() == 5, || format!("order 10: {v}"))?;
    ensure(v.citations.iter().any(|c| c.rule == 4), || {
        format!("order 10 cites {v}")
    })?;
    ensure(feasible_k(&order_ten, 5, false), || {
        "order 10, k = 5".into()
    })?;

    let order_six_perm = SignedPerm::parse("(1 2 3 4 5 6)(7)")?;
    let t = signed_cycle_type(&order_six_perm);
    for conv in [Convention::SecondIsP, Convention::FirstIsP] {
        let order_six = ActionParams::new(6, 3, 2, conv)?;
        let v = check_representation_with(&order_six, &t, true);
        ensure(v.accepted && t.degree() == 7, || {
            format!("order 6 ({conv:?}): {v}")
        })?;
        ensure(v.citations.iter().any(|c| c.rule == 5), || {
            format!("order 6 cites {v}")
        })?;
        ensure(feasible_k(&order_six, 7, true), || {
            "order 6, k - 1 = 6".into()
        })?;
    }

    let t = SignedCycleType::parse("(2)+ (1)+")?;
    let v = check_representation(&order_ten, &t);
    ensure(
        !v.accepted && v.reasons.iter().any(|r| r.contains("exclusive")),
        || format!("exclusivity: {v}"),
    )?;

    let mut checked = 0usize;
    let mut accepted = 0usize;
    let mut exclusive = 0usize;
    for n in 1..=12u64 {
        for first in -5i64..=5 {
            for second in -5i64..=5 {
                if !coprime(first, second) {
                    continue;
                }
                let a = ActionParams::new(n, first, second, Convention::SecondIsP)?;
                for k in 0..=7 {
                    let mut listed = BTreeSet::new();
                    for parts in signed_partitions(k) {
                        let t = SignedCycleType::from_cycles(parts.iter().copied())?;
                        for fixed in [false, true] {
                            let want = brute_accept(n, a.p, a.q, &t.cycles(), fixed);
                            let got = check_representation_with(&a, &t, fixed);
                            ensure(got.accepted == want, || {
                                format!("n={n} p={} q={} {t} fixed={fixed}: {got}", a.p, a.q)
                            })?;
                            checked += 1;
                            if !fixed && got.reasons.iter().any(|r| r.contains("exclusive")) {
                                exclusive += 1;
                            }
                        }
                        if check_representation(&a, &t).accepted {
                            accepted += 1;
                            listed.insert(t.clone());
                            let w = t.witness();
                            ensure(signed_cycle_type(&w) == t && n % w.order() == 0, || {
                                format!("witness for {t} at n={n} has order {}", w.order())
                            })?;
                        }
                    }
                    let enumerated: BTreeSet<_> = enumerate_types(&a, k).into_iter().collect();
                    ensure(enumerated == listed, || {
                        format!("enumeration at n={n} k={k}")
                    })?;
                }
            }
        }
    }
    ensure(exclusive > 0, || "no exclusivity rejections met".into())?;
    Ok(format!(
        "order-10 and order-6 examples accepted; {checked} verdicts match the rule oracle, {accepted} witnesses verified, {exclusive} exclusivity rejections"
    ))
}

// 7. Geometry

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn geometry() -> Outcome {
    let report = selftest(SEED, 1000);
    ensure(report.passed(), || report.to_string())?;

    let mut r = trial_rng(SEED ^ 0x7, 0);
    let mut worst = [0.0f64; 5];
    for _ in 0..1000 {
        let dim = r.gen_range(1..=4);
        let p = random_sphere_point(&mut r, dim);
        // stay inside the chart: away from the pole -p
        let q = loop {
            let q = random_sphere_point(&mut r, dim);
            if q.coords()
                .iter()
                .zip(p.coords())
                .map(|(a, b)| a * b)
                .sum::<f64>()
                > -0.9
            {
                break q;
            }
        };
        let t = r.gen_range(0.1..10.0);
        let s = r.gen_range(0.1..10.0);
        let m = moebius_scale_raw(&p, t, &q)?;
        worst[0] = worst[0].max((m.iter().map(|x| x * x).sum::<f64>().sqrt() - 1.0).abs());
        let mq = SpherePoint::new(m.clone())?;
        let lhs = moebius_scale_raw(&p, s, &mq)?;
        worst[1] = worst[1].max(dist(&lhs, &moebius_scale_raw(&p, s * t, &q)?));
        worst[2] = worst[2]
            .max(dist(&moebius_scale_raw(&p, 1.0, &q)?, q.coords()))
            .max(dist(&moebius_scale_raw(&p, t, &p)?, p.coords()))
            .max(dist(
                &moebius_scale_raw(&p, t, &p.antipode())?,
                p.antipode().coords(),
            ));
        let base = stereo(&p, &q)?;
        let scaled = stereo(&p, &mq)?;
        let size = base.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
        let expected: Vec<f64> = base.iter().map(|x| x / t).collect();
        worst[3] = worst[3].max(dist(&scaled, &expected) / size);
        // shrink: identity at t = 1 and outside the unit ball, bit for bit
        let x: Vec<f64> = (0..dim).map(|_| r.gen_range(-2.0..2.0)).collect();
        let v: Vec<f64> = (0..dim).map(|_| r.gen_range(-0.5..0.5)).collect();
        let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
        let (y, w) = shrink(1.0, &x, &v)?;
        ensure(y == x && w == v, || format!("shrink(1) moved {x:?} {v:?}"))?;
        if norm >= 1.0 {
            let (y, w) = shrink(r.gen_range(0.0..1.0), &x, &v)?;
            ensure(y == x && w == v, || {
                format!("shrink moved {x:?} outside the support")
            })?;
        }
    }
    // circle: tan(θ'/2) = tan(θ/2) / 2 at t = 2
    let p = SpherePoint::new(vec![1.0, 0.0])?;
    for i in 1..100 {
        let theta = -3.0 + 6.0 * i as f64 / 100.0;
        let q = SpherePoint::new(vec![theta.cos(), theta.sin()])?;
        let m = moebius_scale_raw(&p, 2.0, &q)?;
        let half = (m[1].atan2(m[0]) / 2.0).tan();
        worst[4] = worst[4].max((half - (theta / 2.0).tan() / 2.0).abs());
    }
    let limits = [1e-12, 1e-9, 1e-12, 1e-9, 1e-9];
    let names = [
        "unit norm",
        "semigroup",
        "identity/fixed points",
        "conjugation 1/t",
        "half angle",
    ];
    for ((w, l), n) in worst.iter().zip(limits).zip(names) {
        ensure(w <= &l, || format!("{n}: {w:e} > {l:e}"))?;
    }
    ensure(bump(0.0) == 0.0 && bump(-0.0) == 0.0, || "bump(0)".into())?;
    for t in [1.0, 1.5, 3.0, 100.0] {
        ensure(bump(t) == 1.0 && bump(-t) == 1.0, || format!("bump({t})"))?;
    }
    ensure(
        bump(-0.3) == bump(0.3) && bump(0.3) > 0.0 && bump(0.3) < 1.0,
        || "bump(±0.3)".into(),
    )?;
    let (y, w) = shrink(0.0, &[0.0, 0.0], &[0.3, -0.4])?;
    ensure(y == [0.0, 0.0] && w == [0.0, 0.0], || {
        "shrink(0, 0, v)".into()
    })?;
    Ok(format!(
        "self-test {} checks ok; worst errors {:.1e} {:.1e} {:.1e} {:.1e} {:.1e}",
        report.checks.len(),
        worst[0],
        worst[1],
        worst[2],
        worst[3],
        worst[4]
    ))
}

// 8. Command line

fn leaves() -> Vec<Expr> {
    ["unknot", "T(2,3)", "T(3,-2)", "fig8", "k5_2", "k8_17"]
        .iter()
        .map(|s| parse_expr(s).unwrap())
        .collect()
}

/// Every expression with at most two levels of generators over `atoms`.
fn grow(atoms: &[Expr]) -> Vec<Expr> {
    let mut out = atoms.to_vec();
    for a in atoms {
        let b = Box::new(a.clone());
        out.push(Expr::Mirror(b.clone()));
        out.push(Expr::Rev(b.clone()));
        out.push(Expr::Cable(2, 1, b.clone()));
        out.push(Expr::Cable(3, -5, b.clone()));
        out.push(Expr::Splice("whitehead".into(), vec![a.clone()]));
        for c in atoms {
            out.push(Expr::Sum(vec![a.clone(), c.clone()]));
            out.push(Expr::Splice("borromean".into(), vec![a.clone(), c.clone()]));
        }
    }
    out
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = cli::run(
        std::iter::once("splice").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn command_line() -> Outcome {
    let cat = Catalogue::bundled();
    let depth1 = grow(&leaves());
    let corpus = grow(&depth1);
    let mut raw_ok = 0;
    let mut canon_ok = 0;
    for e in &corpus {
        let text = e.to_string();
        ensure(parse_expr(&text).ok().as_ref() == Some(e), || {
            format!("expression {text}")
        })?;
        let Ok(t) = parse_tree(&cat, &text) else {
            continue;
        };
        let again = parse_tree(&cat, &t.to_string()).map_err(|err| format!("{t}: {err}"))?;
        ensure(again == t, || {
            format!("{text}: printed {t} reparses to {again}")
        })?;
        raw_ok += 1;
        if let Ok(c) = canonicalize(&cat, &t) {
            let back = parse_tree(&cat, &c.to_string()).map_err(|err| format!("{c}: {err}"))?;
            ensure(back == c, || {
                format!("{text}: canonical {c} reparses to {back}")
            })?;
            canon_ok += 1;
        }
    }

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    for op in ["cubes", "overlap", "splice"] {
        let args = ["axioms", "--operad", op, "--trials", "500", "--seed", "77"];
        let (code, first) = run_cli(&args);
        let (_, second) = run_cli(&args);
        let (_, serial) = single.install(|| run_cli(&args));
        ensure(code == 0, || format!("{op} axioms exit {code}"))?;
        ensure(first == second && first == serial, || {
            format!("{op} report differs between runs")
        })?;
        let binary = std::process::Command::new(env!("CARGO_BIN_EXE_splice"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(binary.stdout == first, || {
            format!("{op} binary output differs")
        })?;
    }
    Ok(format!(
        "{} corpus expressions, {raw_ok} trees and {canon_ok} canonical forms round-trip; axiom reports byte-identical",
        corpus.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("operad axiom suites", operad_axioms),
        ("associativity certificate", associativity_certificate),
        ("equivariance", equivariance),
        ("unique decomposition", schubert),
        ("complexity", complexity_anchors),
        ("realization", realization),
        ("geometry", geometry),
        ("command line", command_line),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into());
            Err(msg.into())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.1}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
