//! The `lb2p` command line.
//!
//! Exit codes: 0 for a definitive answer (VALID, SAT, UNSAT, CERT, PASS),
//! 1 for a negative verification (INVALID, FAIL, NOTAPPLICABLE), 2 for usage
//! or input format errors, 3 when the solver runs out of budget.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lb2p_core::biregular::{solve_biregular, BiregularOutcome};
use lb2p_core::reduction::roles::{parse_roles, write_roles};
use lb2p_core::reduction::{
    assignment_to_partition, partition_to_assignment, reduce, verify_gadget, Assignment,
    GadgetKind, ReductionArtifact, ReductionError, ReductionKind,
};
use lb2p_core::solver::{brute_force, decide, SolverConfig, Verdict, DEFAULT_NODE_BUDGET};
use lb2p_core::{check, parse_graph, Graph, Mode, TwoPartition};

const FORMATS: &str = "\
File formats:
  GRAPH      first line `n m`, then m lines `u v` with 0 <= u, v < n;
             no loops, no repeated edges, blank trailing lines ignored
  PARTITION  one line of n characters from {0,1}; character i labels vertex i
  FORMULA    `p nae3 n k`, then k lines of three distinct variables in 1..=n;
             every variable occurs in exactly four clauses; lines starting
             with `c` are comments
  ASSIGNMENT one line of n characters from {0,1}; character i is variable i+1
  ROLES      written by `reduce`:
               lb2p-roles 1
               reduction <bireg|even|subcubic|odd>
               r <R>                        (bireg only)
               instance <n> <k>
               clause <a> <b> <c>           (k lines)
               vertex <index> <tag> <i> [<j>]
             tags: p var slot | q clause copy | v clause | g var local |
                   y|z|b clause position; role numbers are 1-based

Exit codes: 0 definitive answer, 1 negative verification,
            2 usage or format error, 3 solver budget exhausted";

#[derive(Parser, Debug)]
#[command(name = "lb2p", version, about = "Locally balanced 2-partitions of graphs", after_help = FORMATS)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a partition; prints VALID or INVALID followed by the bad vertices
    Check {
        #[arg(long)]
        mode: ModeArg,
        graph: PathBuf,
        partition: PathBuf,
    },
    /// Decide whether a locally balanced partition exists
    Solve {
        #[arg(long)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        /// Maximum number of branching decisions
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
        graph: PathBuf,
    },
    /// Open-mode partition or bad cycle for a (2, odd)-biregular graph
    Biregular { graph: PathBuf },
    /// Reduce a formula to a graph; writes PREFIX.graph and PREFIX.roles
    Reduce {
        #[arg(long, value_enum)]
        target: Target,
        /// Number of clause copies is 2r (bireg only)
        #[arg(long, default_value_t = 1)]
        r: usize,
        /// Output prefix; defaults to the formula path without extension
        #[arg(long)]
        out: Option<PathBuf>,
        formula: PathBuf,
    },
    /// Map a satisfying assignment to a balanced partition of a reduction
    Lift {
        graph: PathBuf,
        roles: PathBuf,
        assignment: PathBuf,
    },
    /// Read the assignment encoded by a balanced partition of a reduction
    Extract {
        graph: PathBuf,
        roles: PathBuf,
        partition: PathBuf,
    },
    /// Gadget utilities
    Gadget {
        #[command(subcommand)]
        action: GadgetAction,
    },
}

#[derive(Subcommand, Debug)]
enum GadgetAction {
    /// Machine-check a gadget's contract; prints PASS or FAIL with details
    Verify {
        #[arg(long)]
        name: GadgetName,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Open,
    Closed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Open => Mode::Open,
            ModeArg::Closed => Mode::Closed,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Auto,
    Brute,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Target {
    Bireg,
    Even,
    Subcubic,
    Odd,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GadgetName {
    F1,
    F2,
    Forcing,
    F4,
}

impl From<GadgetName> for GadgetKind {
    fn from(g: GadgetName) -> GadgetKind {
        match g {
            GadgetName::F1 => GadgetKind::F1,
            GadgetName::F2 => GadgetKind::F2,
            GadgetName::Forcing => GadgetKind::Forcing,
            GadgetName::F4 => GadgetKind::F4,
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?).with_context(|| format!("{}", path.display()))
}

fn load_partition(path: &Path, n: usize) -> Result<TwoPartition> {
    let p = TwoPartition::parse(&read(path)?).with_context(|| format!("{}", path.display()))?;
    if p.len() != n {
        bail!(
            "{}: partition has {} labels but the graph has {n} vertices",
            path.display(),
            p.len()
        );
    }
    Ok(p)
}

fn load_artifact(graph: &Path, roles: &Path) -> Result<ReductionArtifact> {
    let g = load_graph(graph)?;
    parse_roles(&read(roles)?, g).with_context(|| format!("{}", roles.display()))
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Check {
            mode,
            graph,
            partition,
        } => {
            let g = load_graph(&graph)?;
            let p = load_partition(&partition, g.n())?;
            let bad = check(&g, &p, mode.into())?;
            if bad.is_empty() {
                writeln!(out, "VALID")?;
                Ok(0)
            } else {
                let list: Vec<String> = bad.iter().map(|v| v.to_string()).collect();
                writeln!(out, "INVALID {}", list.join(" "))?;
                Ok(1)
            }
        }
        Command::Solve {
            mode,
            method,
            budget,
            graph,
        } => {
            let g = load_graph(&graph)?;
            let outcome = match method {
                Method::Brute => brute_force(&g, mode.into())?,
                Method::Auto => decide(
                    &g,
                    mode.into(),
                    &[],
                    &SolverConfig {
                        node_budget: budget,
                    },
                ),
            };
            match outcome.verdict {
                Verdict::Sat(p) => {
                    writeln!(out, "SAT\n{p}")?;
                    Ok(0)
                }
                Verdict::Unsat => {
                    writeln!(out, "UNSAT")?;
                    Ok(0)
                }
                Verdict::Timeout => {
                    writeln!(out, "TIMEOUT")?;
                    Ok(3)
                }
            }
        }
        Command::Biregular { graph } => {
            let g = load_graph(&graph)?;
            match solve_biregular(&g) {
                Ok(BiregularOutcome::Witness(p)) => {
                    writeln!(out, "SAT\n{p}")?;
                    Ok(0)
                }
                Ok(BiregularOutcome::Certificate(c)) => {
                    let list: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
                    writeln!(out, "CERT\n{}", list.join(" "))?;
                    Ok(0)
                }
                Err(reason) => {
                    writeln!(out, "NOTAPPLICABLE {reason}")?;
                    Ok(1)
                }
            }
        }
        Command::Reduce {
            target,
            r,
            out: prefix,
            formula,
        } => {
            let inst = lb2p_core::reduction::parse_nae(&read(&formula)?)
                .with_context(|| format!("{}", formula.display()))?;
            let kind = match target {
                Target::Bireg => ReductionKind::Biregular { r },
                Target::Even => ReductionKind::Even,
                Target::Subcubic => ReductionKind::Subcubic,
                Target::Odd => ReductionKind::Odd,
            };
            let art = reduce(&inst, kind)?;
            let prefix = prefix.unwrap_or_else(|| formula.with_extension(""));
            let graph_path = with_suffix(&prefix, "graph");
            let roles_path = with_suffix(&prefix, "roles");
            fs::write(&graph_path, art.graph.to_edge_list())
                .with_context(|| format!("cannot write {}", graph_path.display()))?;
            fs::write(&roles_path, write_roles(&art))
                .with_context(|| format!("cannot write {}", roles_path.display()))?;
            writeln!(out, "{}", art.summary())?;
            Ok(0)
        }
        Command::Lift {
            graph,
            roles,
            assignment,
        } => {
            let art = load_artifact(&graph, &roles)?;
            let a = Assignment::parse(&read(&assignment)?)
                .with_context(|| format!("{}", assignment.display()))?;
            match assignment_to_partition(&art, &a) {
                Ok(p) => {
                    writeln!(out, "{p}")?;
                    Ok(0)
                }
                Err(ReductionError::UnsatAssignment { clause }) => {
                    writeln!(out, "UNSAT clause {}", clause + 1)?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Extract {
            graph,
            roles,
            partition,
        } => {
            let art = load_artifact(&graph, &roles)?;
            let p = load_partition(&partition, art.graph.n())?;
            match partition_to_assignment(&art, &p) {
                Ok(a) => {
                    writeln!(out, "{a}")?;
                    Ok(0)
                }
                Err(ReductionError::InvalidPartition { violations }) => {
                    let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                    writeln!(out, "INVALID {}", list.join(" "))?;
                    Ok(1)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Gadget {
            action: GadgetAction::Verify { name },
        } => {
            let gadget = GadgetKind::from(name).build();
            match verify_gadget(&gadget) {
                Ok(()) => {
                    writeln!(out, "PASS")?;
                    Ok(0)
                }
                Err(failure) => {
                    writeln!(out, "FAIL {failure}")?;
                    Ok(1)
                }
            }
        }
    }
}

fn with_suffix(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}
