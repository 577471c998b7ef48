//! Signed cycle types realisable by a cyclic group `Z_n` acting on a
//! satellite pattern through a `(p, q)` circle action.
//!
//! Rules, with `p` and `q` as the rules use them:
//! 1. `(n, +)` always;
//! 2. `(n / gcd(q, n), +)` when `gcd(q, n) > 1`;
//! 3. `(n / gcd(p, n), +)` when `gcd(p, n) > 1`;
//! 4. `(n / 2, −)` when `gcd(p, n) = 2`;
//! 5. `(1, +)` when `gcd(q, n) > 1`, for a component on the singular fibre.
//!
//! Rule 5 is used at most once and never together with rule 2.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::perm::{Sign, SignedCycleType};

/// Which displayed parameter plays the role of `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    /// An action written `(a, b)` has `p = b`, `q = a`.
    #[default]
    SecondIsP,
    /// An action written `(a, b)` has `p = a`, `q = b`.
    FirstIsP,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ActionParams {
    pub n: u64,
    /// `p` as the rules use it.
    pub p: i64,
    /// `q` as the rules use it.
    pub q: i64,
}

impl ActionParams {
    /// Parameters for an action displayed as `(first, second)`.
    pub fn new(n: u64, first: i64, second: i64, convention: Convention) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameters("n must be positive".into()));
        }
        if first.gcd(&second) != 1 {
            return Err(Error::InvalidParameters(format!(
                "({first},{second}) must be coprime"
            )));
        }
        let (p, q) = match convention {
            Convention::SecondIsP => (second, first),
            Convention::FirstIsP => (first, second),
        };
        Ok(ActionParams { n, p, q })
    }

    pub fn gcd_p(&self) -> u64 {
        self.p.unsigned_abs().gcd(&self.n)
    }

    pub fn gcd_q(&self) -> u64 {
        self.q.unsigned_abs().gcd(&self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Template {
    pub len: usize,
    pub sign: Sign,
    pub rule: u8,
}

impl fmt::Display for Template {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}){} by rule ({})", self.len, self.sign, self.rule)
    }
}

pub fn admissible_cycles(a: &ActionParams) -> Vec<Template> {
    let n = a.n as usize;
    let (gp, gq) = (a.gcd_p() as usize, a.gcd_q() as usize);
    let mut out = vec![Template {
        len: n,
        sign: Sign::Plus,
        rule: 1,
    }];
    if gq > 1 {
        out.push(Template {
            len: n / gq,
            sign: Sign::Plus,
            rule: 2,
        });
    }
    if gp > 1 {
        out.push(Template {
            len: n / gp,
            sign: Sign::Plus,
            rule: 3,
        });
    }
    if gp == 2 {
        out.push(Template {
            len: n / 2,
            sign: Sign::Minus,
            rule: 4,
        });
    }
    if gq > 1 {
        out.push(Template {
            len: 1,
            sign: Sign::Plus,
            rule: 5,
        });
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub accepted: bool,
    /// One rule per cycle, longest cycles first, when accepted.
    pub citations: Vec<Template>,
    pub reasons: Vec<String>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.accepted {
            write!(f, "accepted")?;
            for c in &self.citations {
                write!(f, "\n  {c}")?;
            }
        } else {
            write!(f, "rejected")?;
            for r in &self.reasons {
                write!(f, "\n  {r}")?;
            }
        }
        Ok(())
    }
}

/// Whether `target` is a non-negative integer combination of `parts`.
fn representable(target: u64, parts: &[u64]) -> bool {
    let target = target as usize;
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for &part in parts.iter().filter(|&&p| p > 0) {
        for v in part as usize..=target {
            if reach[v - part as usize] {
                reach[v] = true;
            }
        }
    }
    reach[target]
}

/// The integer-combination condition on the number of slot components `k`.
pub fn feasible_k(a: &ActionParams, k: u64, fixed_component: bool) -> bool {
    let n = a.n;
    if fixed_component {
        k >= 1 && representable(k - 1, &[n, n / a.gcd_p()])
    } else {
        representable(k, &[n, n / a.gcd_q(), n / a.gcd_p()])
    }
}

fn describe(len: usize, sign: Sign) -> String {
    format!("({len}){sign}")
}

pub fn check_representation(a: &ActionParams, t: &SignedCycleType) -> Verdict {
    check_representation_with(a, t, false)
}

/// `fixed_only` restricts to realisations with a component on the singular fibre.
pub fn check_representation_with(
    a: &ActionParams,
    t: &SignedCycleType,
    fixed_only: bool,
) -> Verdict {
    let templates = admissible_cycles(a);
    let cycles = t.cycles();
    let k = t.degree() as u64;
    let first_rule = |len: usize, sign: Sign, allowed: &dyn Fn(u8) -> bool| {
        templates
            .iter()
            .find(|tm| tm.len == len && tm.sign == sign && allowed(tm.rule))
            .copied()
    };
    let mut reasons = Vec::new();

    // without a fixed component
    let plain: Vec<Option<Template>> = cycles
        .iter()
        .map(|&(len, sign)| first_rule(len, sign, &|r| r != 5))
        .collect();
    if !fixed_only {
        if plain.iter().all(Option::is_some) {
            if feasible_k(a, k, false) {
                return Verdict {
                    accepted: true,
                    citations: plain.into_iter().flatten().collect(),
                    reasons,
                };
            }
            reasons.push(format!(
                "k = {k} is not a non-negative integer combination of {}, {}, {}",
                a.n,
                a.n / a.gcd_q(),
                a.n / a.gcd_p()
            ));
        } else {
            let bad: Vec<String> = cycles
                .iter()
                .zip(&plain)
                .filter(|(_, m)| m.is_none())
                .map(|(&(l, s), _)| describe(l, s))
                .collect();
            reasons.push(format!(
                "without rule (5): {} match no template",
                bad.join(" ")
            ));
        }
    }

    // with one component on the singular fibre
    let singular = first_rule(1, Sign::Plus, &|r| r == 5);
    match (singular, cycles.iter().position(|&c| c == (1, Sign::Plus))) {
        (None, _) => reasons.push(format!("rule (5) unavailable: gcd(q, n) = {}", a.gcd_q())),
        (Some(_), None) => reasons.push("rule (5) needs a (1)+ cycle".into()),
        (Some(fixed), Some(at)) => {
            let mut citations = Vec::new();
            let mut clashes = Vec::new();
            let mut repeated = 0usize;
            let mut unmatched = Vec::new();
            for (i, &(len, sign)) in cycles.iter().enumerate() {
                if i == at {
                    citations.push(fixed);
                    continue;
                }
                match first_rule(len, sign, &|r| r != 5 && r != 2) {
                    Some(tm) => citations.push(tm),
                    None if first_rule(len, sign, &|r| r == 2).is_some() => {
                        clashes.push(describe(len, sign))
                    }
                    None if (len, sign) == (1, Sign::Plus) => repeated += 1,
                    None => unmatched.push(describe(len, sign)),
                }
            }
            if !clashes.is_empty() {
                reasons.push(format!(
                    "rules (5) and (2) are exclusive: {} needs rule (2)",
                    clashes.join(" ")
                ));
            }
            if repeated > 0 {
                reasons.push("rule (5) may be used at most once".into());
            }
            if !unmatched.is_empty() {
                reasons.push(format!(
                    "with rule (5): {} match no template",
                    unmatched.join(" ")
                ));
            }
            if clashes.is_empty() && repeated == 0 && unmatched.is_empty() {
                if feasible_k(a, k, true) {
                    return Verdict {
                        accepted: true,
                        citations,
                        reasons: Vec::new(),
                    };
                }
                reasons.push(format!(
                    "k - 1 = {} is not a non-negative integer combination of {}, {}",
                    k.saturating_sub(1),
                    a.n,
                    a.n / a.gcd_p()
                ));
            }
        }
    }
    Verdict {
        accepted: false,
        citations: Vec::new(),
        reasons,
    }
}

/// Every accepted signed cycle type on `k` points, built from the templates.
pub fn enumerate_types(a: &ActionParams, k: usize) -> Vec<SignedCycleType> {
    let mut shapes: Vec<(usize, Sign)> = admissible_cycles(a)
        .into_iter()
        .map(|t| (t.len, t.sign))
        .collect();
    shapes.sort();
    shapes.dedup();
    let mut out = Vec::new();
    let mut counts = BTreeMap::new();
    fn go(
        a: &ActionParams,
        shapes: &[(usize, Sign)],
        idx: usize,
        left: usize,
        counts: &mut BTreeMap<(usize, Sign), usize>,
        out: &mut Vec<SignedCycleType>,
    ) {
        if left == 0 {
            let cycles = counts.iter().flat_map(|(&c, &m)| std::iter::repeat_n(c, m));
            let t = SignedCycleType::from_cycles(cycles).expect("lengths are positive");
            if check_representation(a, &t).accepted {
                out.push(t);
            }
            return;
        }
        if idx == shapes.len() {
            return;
        }
        let (len, sign) = shapes[idx];
        for m in 0..=left / len {
            if m > 0 {
                counts.insert((len, sign), m);
            }
            go(a, shapes, idx + 1, left - m * len, counts, out);
            counts.remove(&(len, sign));
        }
    }
    go(a, &shapes, 0, k, &mut counts, &mut out);
    out
}
