//! Text form of a reduction's role map.
//!
//! ```text
//! lb2p-roles 1
//! reduction <bireg|even|subcubic|odd>
//! r <R>                     (bireg only)
//! instance <n> <k>
//! clause <a> <b> <c>        (k lines, 1-based variables)
//! vertex <index> <tag> <i> [<j>]   (one line per vertex, in index order)
//! ```
//!
//! Vertex indices are 0-based as in the graph file. Role numbers are 1-based:
//! `p var slot`, `q clause copy`, `v clause`, `g var local`, and
//! `y|z|b clause position`.

use thiserror::Error;

use super::construct::{ReductionArtifact, ReductionError, ReductionKind, Role};
use super::nae::{NaeError, NaeInstance};
use crate::graph::Graph;

const MAGIC: &str = "lb2p-roles 1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RolesError {
    #[error("roles line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("roles file instance: {0}")]
    Instance(#[from] NaeError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

pub fn write_roles(art: &ReductionArtifact) -> String {
    let mut s = format!("{MAGIC}\nreduction {}\n", art.kind.name());
    if let ReductionKind::Biregular { r } = art.kind {
        s.push_str(&format!("r {r}\n"));
    }
    let inst = &art.instance;
    s.push_str(&format!("instance {} {}\n", inst.n(), inst.k()));
    for c in inst.clauses() {
        s.push_str(&format!("clause {} {} {}\n", c[0] + 1, c[1] + 1, c[2] + 1));
    }
    for (v, role) in art.roles.iter().enumerate() {
        let (tag, nums) = match *role {
            Role::P { var, slot } => ("p", vec![var, slot]),
            Role::Q { clause, copy } => ("q", vec![clause, copy]),
            Role::V { clause } => ("v", vec![clause]),
            Role::Internal { var, local } => ("g", vec![var, local]),
            Role::Y { clause, pos } => ("y", vec![clause, pos]),
            Role::Z { clause, pos } => ("z", vec![clause, pos]),
            Role::B { clause, pos } => ("b", vec![clause, pos]),
        };
        s.push_str(&format!("vertex {v} {tag}"));
        for x in nums {
            s.push_str(&format!(" {}", x + 1));
        }
        s.push('\n');
    }
    s
}

/// Parses a role file and checks it against `graph`.
pub fn parse_roles(text: &str, graph: Graph) -> Result<ReductionArtifact, RolesError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| RolesError::Format {
            line: 0,
            reason: format!("unexpected end of file, expected {what}"),
        })
    };

    let (line, l) = next("header")?;
    if l != MAGIC {
        return Err(fmt_err(line, format!("expected {MAGIC:?}")));
    }
    let (line, l) = next("reduction")?;
    let name = l
        .strip_prefix("reduction ")
        .ok_or_else(|| fmt_err(line, "expected `reduction <name>`".into()))?;
    let mut kind: ReductionKind = name.trim().parse().map_err(|e| fmt_err(line, e))?;
    if let ReductionKind::Biregular { .. } = kind {
        let (line, l) = next("r")?;
        let r = match fields(l, "r", line)?[..] {
            [r] => r,
            _ => return Err(fmt_err(line, "expected `r <R>`".into())),
        };
        kind = ReductionKind::Biregular { r };
    }
    let (line, l) = next("instance")?;
    let (n, k) = match fields(l, "instance", line)?[..] {
        [n, k] => (n, k),
        _ => return Err(fmt_err(line, "expected `instance <n> <k>`".into())),
    };
    let mut clauses = Vec::with_capacity(k);
    for _ in 0..k {
        let (line, l) = next("clause")?;
        match fields(l, "clause", line)?[..] {
            [a, b, c] if [a, b, c].iter().all(|&x| (1..=n).contains(&x)) => {
                clauses.push([a - 1, b - 1, c - 1])
            }
            _ => {
                return Err(fmt_err(
                    line,
                    "expected `clause <a> <b> <c>` with 1-based variables".into(),
                ))
            }
        }
    }
    let instance = NaeInstance::new(n, clauses)?;

    let mut roles = Vec::new();
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let ["vertex", idx, tag, ref rest @ ..] = toks[..] else {
            return Err(fmt_err(line, "expected `vertex <index> <tag> ...`".into()));
        };
        if idx.parse::<usize>().ok() != Some(roles.len()) {
            return Err(fmt_err(
                line,
                format!("expected vertex index {}", roles.len()),
            ));
        }
        let nums = rest
            .iter()
            .map(|t| match t.parse::<usize>() {
                Ok(x) if x >= 1 => Ok(x - 1),
                _ => Err(fmt_err(line, format!("bad 1-based number {t:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let role = match (tag, &nums[..]) {
            ("p", &[var, slot]) => Role::P { var, slot },
            ("q", &[clause, copy]) => Role::Q { clause, copy },
            ("v", &[clause]) => Role::V { clause },
            ("g", &[var, local]) => Role::Internal { var, local },
            ("y", &[clause, pos]) => Role::Y { clause, pos },
            ("z", &[clause, pos]) => Role::Z { clause, pos },
            ("b", &[clause, pos]) => Role::B { clause, pos },
            _ => return Err(fmt_err(line, format!("bad role record {l:?}"))),
        };
        roles.push(role);
    }
    Ok(ReductionArtifact::from_parts(kind, instance, graph, roles)?)
}

fn fmt_err(line: usize, reason: String) -> RolesError {
    RolesError::Format { line, reason }
}

fn fields(l: &str, key: &str, line: usize) -> Result<Vec<usize>, RolesError> {
    let mut toks = l.split_whitespace();
    if toks.next() != Some(key) {
        return Err(fmt_err(line, format!("expected `{key} ...`")));
    }
    toks.map(|t| {
        t.parse()
            .map_err(|_| fmt_err(line, format!("not a non-negative integer: {t:?}")))
    })
    .collect()
}
