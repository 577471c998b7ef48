//! Command-line front end. `run` is the whole program; the binary only
//! forwards the process arguments and exit status.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

use crate::axioms::{run_axioms, Operad};
use crate::error::{Error, Result};
use crate::geom::selftest;
use crate::perm::{signed_cycle_type, SignedCycleType, SignedPerm};
use crate::realize::{
    admissible_cycles, check_representation_with, enumerate_types, ActionParams, Convention,
};
use crate::tree::{canonicalize, complexity, parse_tree, Catalogue, SpliceTree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "splice",
    version,
    about = "Splice trees of long knots and randomised checks of the cubes, overlap and splice operads"
)]
pub struct Cli {
    /// Knot and link catalogue (JSON); falls back to $SPLICE_CATALOGUE, then the bundled file.
    #[arg(long, global = true, value_name = "PATH")]
    pub catalogue: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the canonical form of a splice expression.
    Canon(ExprArgs),
    /// Print the complexity (number of JSJ pieces) of a splice expression.
    Complexity(ExprArgs),
    /// Decide whether two expressions denote the same long knot; exit 1 if not.
    Eq {
        left: String,
        right: String,
        #[arg(long)]
        json: bool,
    },
    /// Run seeded random instances of the operad axioms.
    Axioms(AxiomArgs),
    /// Check or enumerate signed cycle types realised by a cyclic (p,q) action.
    Realize(RealizeArgs),
    /// Numerical kernels.
    Geom {
        #[command(subcommand)]
        action: GeomAction,
    },
    /// Emit an expression's canonical tree as DOT or JSON.
    #[command(group(ArgGroup::new("format").required(true).args(["dot", "json"])))]
    Emit {
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        json: bool,
        expr: String,
    },
}

#[derive(Debug, Args)]
pub struct ExprArgs {
    pub expr: String,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OperadArg {
    Cubes,
    Overlap,
    Splice,
}

impl From<OperadArg> for Operad {
    fn from(o: OperadArg) -> Self {
        match o {
            OperadArg::Cubes => Operad::Cubes,
            OperadArg::Overlap => Operad::Overlap,
            OperadArg::Splice => Operad::Splice,
        }
    }
}

#[derive(Debug, Args)]
pub struct AxiomArgs {
    #[arg(long, value_enum)]
    pub operad: OperadArg,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
    /// Runs a deliberately broken composition.
    #[arg(long, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
pub enum ConventionArg {
    /// The second displayed parameter plays the role of p.
    #[default]
    Default,
    /// The first displayed parameter plays the role of p.
    Swap,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("query").required(true).args(["cycles", "perm", "enumerate"])))]
pub struct RealizeArgs {
    /// Order of the cyclic group.
    #[arg(long)]
    pub n: u64,
    /// First displayed parameter of the (p,q) action.
    #[arg(long, allow_hyphen_values = true)]
    pub p: i64,
    /// Second displayed parameter of the (p,q) action.
    #[arg(long, allow_hyphen_values = true)]
    pub q: i64,
    /// Signed cycle type, e.g. "(5)-" or "(6)+ (1)+".
    #[arg(long)]
    pub cycles: Option<String>,
    /// A signed permutation whose cycle type is checked, e.g. "(1 2 3 4 5 6)(7)".
    #[arg(long)]
    pub perm: Option<String>,
    /// Only accept realisations with one component on a singular fibre.
    #[arg(long)]
    pub fixed: bool,
    #[arg(long, value_enum, default_value_t = ConventionArg::Default)]
    pub convention: ConventionArg,
    /// List every accepted type on `--k` components.
    #[arg(long, requires = "k")]
    pub enumerate: bool,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum GeomAction {
    /// Check the kernel identities on random samples and print the worst errors.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn json_line(out: &mut dyn Write, v: &serde_json::Value) -> Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(v).expect("values serialise")
    )
    .map_err(io)
}

fn io(e: std::io::Error) -> Error {
    Error::Structural(format!("write failed: {e}"))
}

fn canonical(cat: &Catalogue, expr: &str) -> Result<SpliceTree> {
    canonicalize(cat, &parse_tree(cat, expr)?)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let catalogue = || Catalogue::resolve(cli.catalogue.as_deref());
    match &cli.command {
        Command::Canon(a) => {
            let t = canonical(&catalogue()?, &a.expr)?;
            if a.json {
                json_line(
                    out,
                    &serde_json::json!({ "expr": t.to_string(), "tree": t.to_json() }),
                )?;
            } else {
                writeln!(out, "{t}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Complexity(a) => {
            let cat = catalogue()?;
            let t = canonical(&cat, &a.expr)?;
            let c = complexity(&cat, &t)?;
            if a.json {
                json_line(
                    out,
                    &serde_json::json!({ "expr": t.to_string(), "complexity": c }),
                )?;
            } else {
                writeln!(out, "{c}").map_err(io)?;
            }
            Ok(EXIT_OK)
        }
        Command::Eq { left, right, json } => {
            let cat = catalogue()?;
            let l = canonical(&cat, left)?;
            let r = canonical(&cat, right)?;
            let equal = l == r;
            if *json {
                json_line(
                    out,
                    &serde_json::json!({ "equal": equal, "left": l.to_string(), "right": r.to_string() }),
                )?;
            } else if equal {
                writeln!(out, "equal: {l}").map_err(io)?;
            } else {
                writeln!(out, "different: {l} vs {r}").map_err(io)?;
            }
            Ok(if equal {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            })
        }
        Command::Axioms(a) => {
            let report = run_axioms(a.operad.into(), a.trials as usize, a.seed, a.inject_fault);
            if a.json {
                json_line(out, &report.to_json())?;
            } else {
                write!(out, "{report}").map_err(io)?;
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            })
        }
        Command::Realize(a) => realize(a, out),
        Command::Geom {
            action:
                GeomAction::Selftest {
                    seed,
                    samples,
                    json,
                },
        } => {
            let report = selftest(*seed, *samples);
            if *json {
                let checks: Vec<_> = report
                    .checks
                    .iter()
                    .map(|c| {
                        serde_json::json!({
                            "name": c.name,
                            "max_error": c.max_error,
                            "tolerance": c.tolerance,
                            "passed": c.passed(),
                        })
                    })
                    .collect();
                json_line(
                    out,
                    &serde_json::json!({ "samples": report.samples, "checks": checks, "passed": report.passed() }),
                )?;
            } else {
                write!(out, "{report}").map_err(io)?;
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_PROPERTY_FAILURE
            })
        }
        Command::Emit { dot, expr, .. } => {
            let t = canonical(&catalogue()?, expr)?;
            if *dot {
                write!(out, "{}", t.to_dot()).map_err(io)?;
            } else {
                json_line(out, &t.to_json())?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn realize(a: &RealizeArgs, out: &mut dyn Write) -> Result<i32> {
    let convention = match a.convention {
        ConventionArg::Default => Convention::SecondIsP,
        ConventionArg::Swap => Convention::FirstIsP,
    };
    let params = ActionParams::new(a.n, a.p, a.q, convention)?;
    if a.enumerate {
        let k = a.k.expect("clap requires --k");
        let types: Vec<SignedCycleType> = enumerate_types(&params, k)
            .into_iter()
            .filter(|t| !a.fixed || check_representation_with(&params, t, true).accepted)
            .collect();
        if a.json {
            let list: Vec<String> = types.iter().map(|t| t.to_string()).collect();
            json_line(
                out,
                &serde_json::json!({ "n": a.n, "p": params.p, "q": params.q, "k": k, "types": list }),
            )?;
        } else {
            for t in &types {
                writeln!(out, "{t}").map_err(io)?;
            }
        }
        return Ok(EXIT_OK);
    }
    let t = match (&a.cycles, &a.perm) {
        (Some(c), _) => SignedCycleType::parse(c)?,
        (None, Some(p)) => signed_cycle_type(&SignedPerm::parse(p)?),
        (None, None) => unreachable!("clap requires a query"),
    };
    let verdict = check_representation_with(&params, &t, a.fixed);
    if a.json {
        let citations: Vec<_> = verdict
            .citations
            .iter()
            .map(|c| serde_json::json!({ "length": c.len, "sign": c.sign.to_string(), "rule": c.rule }))
            .collect();
        let templates: Vec<String> = admissible_cycles(&params)
            .iter()
            .map(|c| c.to_string())
            .collect();
        json_line(
            out,
            &serde_json::json!({
                "type": t.to_string(),
                "p": params.p,
                "q": params.q,
                "templates": templates,
                "accepted": verdict.accepted,
                "citations": citations,
                "reasons": verdict.reasons,
            }),
        )?;
    } else {
        writeln!(out, "{t}: {verdict}").map_err(io)?;
    }
    Ok(if verdict.accepted {
        EXIT_OK
    } else {
        EXIT_PROPERTY_FAILURE
    })
}
