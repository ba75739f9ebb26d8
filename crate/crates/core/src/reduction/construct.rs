//! The four reductions and the maps between assignments and partitions.
//!
//! Every output vertex carries a [`Role`] naming the construction element it
//! came from. Variable gadgets occupy the lowest indices, followed by the
//! clause side (clause vertices, and for the odd reduction one F4 per
//! clause); occurrence edges join the two.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::gadget::{f4_completion, verified_gadget, Gadget, GadgetFailure, GadgetKind};
use super::nae::{first_unsatisfied, nae_eval, Assignment, NaeInstance};
use crate::balance::{check, phi_star, BalanceError, Mode, TwoPartition};
use crate::graph::{bipartition, classify, embed_gadget, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    /// Open mode on `(3, 8r)`-biregular graphs.
    Biregular { r: usize },
    /// Open mode on even bipartite graphs of maximum degree 4.
    Even,
    /// Closed mode on bipartite graphs of maximum degree 3.
    Subcubic,
    /// Closed mode on odd graphs of maximum degree 3.
    Odd,
}

impl ReductionKind {
    pub fn mode(self) -> Mode {
        match self {
            ReductionKind::Biregular { .. } | ReductionKind::Even => Mode::Open,
            ReductionKind::Subcubic | ReductionKind::Odd => Mode::Closed,
        }
    }

    /// Name used on the command line and in role files.
    pub fn name(self) -> &'static str {
        match self {
            ReductionKind::Biregular { .. } => "bireg",
            ReductionKind::Even => "even",
            ReductionKind::Subcubic => "subcubic",
            ReductionKind::Odd => "odd",
        }
    }

    /// Vertex count of the output for `n` variables and `k` clauses.
    pub fn vertex_count(self, n: usize, k: usize) -> usize {
        match self {
            ReductionKind::Biregular { r } => n + 2 * r * k,
            ReductionKind::Even => 16 * n + 3 * k,
            ReductionKind::Subcubic => 30 * n + k,
            ReductionKind::Odd => 30 * n + 10 * k,
        }
    }

    fn variable_gadget(self) -> Option<GadgetKind> {
        match self {
            ReductionKind::Biregular { .. } => None,
            ReductionKind::Even => Some(GadgetKind::F1),
            ReductionKind::Subcubic | ReductionKind::Odd => Some(GadgetKind::Forcing),
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReductionKind::Biregular { r } => write!(f, "bireg r={r}"),
            other => f.write_str(other.name()),
        }
    }
}

/// What a vertex of a reduction output stands for. All indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    /// Input `slot` of the gadget of variable `var`; the biregular reduction
    /// has one such vertex per variable, with slot 0.
    P {
        var: usize,
        slot: usize,
    },
    /// Copy `copy` of the vertex of clause `clause`.
    Q {
        clause: usize,
        copy: usize,
    },
    /// The vertex joined to both clause copies in the even reduction.
    V {
        clause: usize,
    },
    /// A non-input vertex of the gadget of variable `var`.
    Internal {
        var: usize,
        local: usize,
    },
    /// F4 vertices of clause `clause`; `pos` is the position inside it.
    Y {
        clause: usize,
        pos: usize,
    },
    Z {
        clause: usize,
        pos: usize,
    },
    B {
        clause: usize,
        pos: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("r must be at least 1")]
    BadR,
    #[error("gadget contract failed: {0}")]
    Gadget(#[from] GadgetFailure),
    #[error("assignment has {got} values but the instance has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("clause {} is monochrome under the assignment", clause + 1)]
    UnsatAssignment { clause: usize },
    #[error(transparent)]
    Partition(#[from] BalanceError),
    #[error("partition is not locally balanced at {} vertices, first {}", violations.len(), violations[0])]
    InvalidPartition { violations: Vec<usize> },
    #[error("role map inconsistent with the construction: {0}")]
    RoleMismatch(String),
}

/// A reduction output together with its role map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionArtifact {
    pub kind: ReductionKind,
    pub instance: NaeInstance,
    pub graph: Graph,
    pub roles: Vec<Role>,
    index: HashMap<Role, usize>,
}

impl ReductionArtifact {
    /// Assembles an artifact from parts and audits it against the
    /// construction rules.
    pub fn from_parts(
        kind: ReductionKind,
        instance: NaeInstance,
        graph: Graph,
        roles: Vec<Role>,
    ) -> Result<Self, ReductionError> {
        if roles.len() != graph.n() {
            return Err(ReductionError::RoleMismatch(format!(
                "{} roles for {} vertices",
                roles.len(),
                graph.n()
            )));
        }
        let mut index = HashMap::with_capacity(roles.len());
        for (v, &role) in roles.iter().enumerate() {
            if index.insert(role, v).is_some() {
                return Err(ReductionError::RoleMismatch(format!(
                    "role {role:?} used twice"
                )));
            }
        }
        let art = ReductionArtifact {
            kind,
            instance,
            graph,
            roles,
            index,
        };
        audit_roles(&art)?;
        Ok(art)
    }

    pub fn mode(&self) -> Mode {
        self.kind.mode()
    }

    pub fn vertex(&self, role: Role) -> Option<usize> {
        self.index.get(&role).copied()
    }

    fn at(&self, role: Role) -> usize {
        self.vertex(role)
            .unwrap_or_else(|| panic!("role {role:?} missing from artifact"))
    }

    /// Short description such as `11 vertices (3,8)-biregular`.
    pub fn summary(&self) -> String {
        let c = classify(&self.graph);
        let class = match self.kind {
            ReductionKind::Biregular { r } => format!("(3,{})-biregular", 8 * r),
            ReductionKind::Even => format!("even bipartite max-degree {}", c.max_degree),
            ReductionKind::Subcubic => format!("bipartite max-degree {}", c.max_degree),
            ReductionKind::Odd => format!("odd max-degree {}", c.max_degree),
        };
        format!("{} vertices {class}", self.graph.n())
    }
}

/// Collects vertices and edges while remembering roles.
struct Builder {
    graph: Graph,
    roles: Vec<Role>,
}

impl Builder {
    fn new() -> Self {
        Builder {
            graph: Graph::empty(0),
            roles: Vec::new(),
        }
    }

    fn add(&mut self, role: Role) -> usize {
        self.roles.push(role);
        self.graph.add_vertex()
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.graph
            .add_edge(u, v)
            .expect("construction edges are simple");
    }

    /// Appends a copy of the gadget of variable `var` and returns the index
    /// of its first vertex.
    fn embed(&mut self, gadget: &Gadget, var: usize) -> usize {
        let (g, offset) = embed_gadget(&self.graph, &gadget.element, &[]).expect("no attachments");
        debug_assert_eq!(offset, self.roles.len());
        self.graph = g;
        self.roles
            .extend((0..gadget.n()).map(|local| gadget_role(gadget, var, local)));
        offset
    }

    fn finish(self, kind: ReductionKind, inst: &NaeInstance) -> ReductionArtifact {
        let art = ReductionArtifact::from_parts(kind, inst.clone(), self.graph, self.roles)
            .expect("construction agrees with its own rules");
        assert_eq!(art.graph.n(), kind.vertex_count(inst.n(), inst.k()));
        assert_class(&art);
        art
    }
}

fn gadget_role(gadget: &Gadget, var: usize, local: usize) -> Role {
    match gadget.inputs().iter().position(|&p| p == local) {
        Some(slot) => Role::P { var, slot },
        None => Role::Internal { var, local },
    }
}

fn assert_class(art: &ReductionArtifact) {
    if art.graph.n() == 0 {
        return;
    }
    let c = classify(&art.graph);
    let bip = bipartition(&art.graph).is_some();
    match art.kind {
        ReductionKind::Biregular { r } => {
            assert!(bip, "biregular output must be bipartite");
            assert_eq!(c.biregular, Some((3, 8 * r)), "biregular output degrees");
        }
        ReductionKind::Even => {
            assert!(c.is_even && bip && c.max_degree == 4, "even output class");
        }
        ReductionKind::Subcubic => {
            assert!(bip && c.max_degree == 3, "subcubic output class");
        }
        ReductionKind::Odd => {
            assert!(c.is_odd && c.max_degree == 3, "odd output class");
        }
    }
}

/// `p_i` joined to all `2r` copies of every clause containing `x_i`.
pub fn reduce_open_biregular(
    inst: &NaeInstance,
    r: usize,
) -> Result<ReductionArtifact, ReductionError> {
    if r == 0 {
        return Err(ReductionError::BadR);
    }
    let mut b = Builder::new();
    let p: Vec<usize> = (0..inst.n())
        .map(|var| b.add(Role::P { var, slot: 0 }))
        .collect();
    for (clause, c) in inst.clauses().iter().enumerate() {
        for copy in 0..2 * r {
            let q = b.add(Role::Q { clause, copy });
            for &x in c {
                b.edge(p[x], q);
            }
        }
    }
    Ok(b.finish(ReductionKind::Biregular { r }, inst))
}

/// Embeds one copy of `gadget` per variable and returns, per variable, the
/// global index of each input. Gadgets come first in the vertex order so that
/// the solver, which branches on the lowest index, decides variables first.
fn embed_variables(b: &mut Builder, gadget: &Gadget, n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .map(|var| {
            let offset = b.embed(gadget, var);
            gadget.inputs().iter().map(|&l| offset + l).collect()
        })
        .collect()
}

/// One F1 per variable; clause copies `q1, q2` joined to `v` and to the
/// occurrence inputs.
pub fn reduce_open_even(inst: &NaeInstance) -> Result<ReductionArtifact, ReductionError> {
    let f1 = verified_gadget(GadgetKind::F1)?;
    let mut b = Builder::new();
    let p = embed_variables(&mut b, f1, inst.n());
    let mut q = Vec::with_capacity(inst.k());
    for clause in 0..inst.k() {
        let q1 = b.add(Role::Q { clause, copy: 0 });
        let q2 = b.add(Role::Q { clause, copy: 1 });
        let v = b.add(Role::V { clause });
        b.edge(q1, v);
        b.edge(q2, v);
        q.push([q1, q2]);
    }
    for (var, occ) in inst.occurrences().iter().enumerate() {
        for (slot, &(j, _)) in occ.iter().enumerate() {
            for host in q[j] {
                b.edge(p[var][slot], host);
            }
        }
    }
    Ok(b.finish(ReductionKind::Even, inst))
}

/// One forcing tree per variable; one clause vertex per clause.
pub fn reduce_closed_subcubic(inst: &NaeInstance) -> Result<ReductionArtifact, ReductionError> {
    let forcing = verified_gadget(GadgetKind::Forcing)?;
    let mut b = Builder::new();
    let p = embed_variables(&mut b, forcing, inst.n());
    let q: Vec<usize> = (0..inst.k())
        .map(|clause| b.add(Role::Q { clause, copy: 0 }))
        .collect();
    for (var, occ) in inst.occurrences().iter().enumerate() {
        for (slot, &(j, _)) in occ.iter().enumerate() {
            b.edge(p[var][slot], q[j]);
        }
    }
    Ok(b.finish(ReductionKind::Subcubic, inst))
}

/// As the subcubic reduction, plus one F4 per clause whose `y` at the
/// occurrence position is joined to the occurrence input.
pub fn reduce_closed_odd(inst: &NaeInstance) -> Result<ReductionArtifact, ReductionError> {
    let forcing = verified_gadget(GadgetKind::Forcing)?;
    let f4 = verified_gadget(GadgetKind::F4)?;
    let mut b = Builder::new();
    let p = embed_variables(&mut b, forcing, inst.n());
    let mut q = Vec::with_capacity(inst.k());
    let mut y = Vec::with_capacity(inst.k());
    for clause in 0..inst.k() {
        q.push(b.add(Role::Q { clause, copy: 0 }));
        let offset = b.roles.len();
        let (g, _) = embed_gadget(&b.graph, &f4.element, &[]).expect("no attachments");
        b.graph = g;
        for local in 0..f4.n() {
            let pos = local / 3;
            b.roles.push(match local % 3 {
                0 => Role::Y { clause, pos },
                1 => Role::Z { clause, pos },
                _ => Role::B { clause, pos },
            });
        }
        y.push(f4.inputs().iter().map(|&l| offset + l).collect::<Vec<_>>());
    }
    for (var, occ) in inst.occurrences().iter().enumerate() {
        for (slot, &(j, pos)) in occ.iter().enumerate() {
            b.edge(p[var][slot], q[j]);
            b.edge(p[var][slot], y[j][pos]);
        }
    }
    Ok(b.finish(ReductionKind::Odd, inst))
}

/// Runs the reduction of `kind`.
pub fn reduce(
    inst: &NaeInstance,
    kind: ReductionKind,
) -> Result<ReductionArtifact, ReductionError> {
    match kind {
        ReductionKind::Biregular { r } => reduce_open_biregular(inst, r),
        ReductionKind::Even => reduce_open_even(inst),
        ReductionKind::Subcubic => reduce_closed_subcubic(inst),
        ReductionKind::Odd => reduce_closed_odd(inst),
    }
}

/// Recomputes the edge set from the roles alone and compares it with the
/// graph. Also checks that every expected role is present.
pub fn audit_roles(art: &ReductionArtifact) -> Result<(), ReductionError> {
    let inst = &art.instance;
    let occ = inst.occurrences();
    let mismatch = |msg: String| Err(ReductionError::RoleMismatch(msg));
    let gadget = match art.kind.variable_gadget() {
        Some(kind) => Some(verified_gadget(kind)?),
        None => None,
    };
    let copies = match art.kind {
        ReductionKind::Biregular { r } => 2 * r,
        ReductionKind::Even => 2,
        _ => 1,
    };

    let mut expected: Vec<Role> = Vec::new();
    for var in 0..inst.n() {
        match gadget {
            None => expected.push(Role::P { var, slot: 0 }),
            Some(g) => expected.extend((0..g.n()).map(|local| gadget_role(g, var, local))),
        }
    }
    for clause in 0..inst.k() {
        expected.extend((0..copies).map(|copy| Role::Q { clause, copy }));
        match art.kind {
            ReductionKind::Even => expected.push(Role::V { clause }),
            ReductionKind::Odd => {
                for pos in 0..3 {
                    expected.extend([
                        Role::Y { clause, pos },
                        Role::Z { clause, pos },
                        Role::B { clause, pos },
                    ]);
                }
            }
            _ => {}
        }
    }
    let have: BTreeSet<Role> = art.roles.iter().copied().collect();
    let want: BTreeSet<Role> = expected.into_iter().collect();
    if have != want {
        let extra = have.difference(&want).next();
        let missing = want.difference(&have).next();
        return mismatch(format!("unexpected {extra:?}, missing {missing:?}"));
    }

    let at = |role: Role| art.at(role);
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut add = |u: usize, v: usize| {
        edges.insert((u.min(v), u.max(v)));
    };
    if let Some(g) = gadget {
        for var in 0..inst.n() {
            for (a, b) in g.graph().edges() {
                add(at(gadget_role(g, var, a)), at(gadget_role(g, var, b)));
            }
        }
    }
    for (var, o) in occ.iter().enumerate() {
        for (slot, &(clause, pos)) in o.iter().enumerate() {
            let slot = if gadget.is_some() { slot } else { 0 };
            let p = at(Role::P { var, slot });
            for copy in 0..copies {
                add(p, at(Role::Q { clause, copy }));
            }
            if art.kind == ReductionKind::Odd {
                add(p, at(Role::Y { clause, pos }));
            }
        }
    }
    for clause in 0..inst.k() {
        match art.kind {
            ReductionKind::Even => {
                for copy in 0..2 {
                    add(at(Role::Q { clause, copy }), at(Role::V { clause }));
                }
            }
            ReductionKind::Odd => {
                for pos in 0..3 {
                    let yv = at(Role::Y { clause, pos });
                    add(yv, at(Role::Z { clause, pos }));
                    add(yv, at(Role::B { clause, pos }));
                    add(
                        at(Role::B { clause, pos }),
                        at(Role::B {
                            clause,
                            pos: (pos + 1) % 3,
                        }),
                    );
                }
            }
            _ => {}
        }
    }
    let actual: BTreeSet<(usize, usize)> = art.graph.edges().into_iter().collect();
    if actual != edges {
        let extra = actual.difference(&edges).next();
        let missing = edges.difference(&actual).next();
        return mismatch(format!(
            "unexpected edge {extra:?}, missing edge {missing:?}"
        ));
    }
    Ok(())
}

/// The partition built from a satisfying assignment.
pub fn assignment_to_partition(
    art: &ReductionArtifact,
    a: &Assignment,
) -> Result<TwoPartition, ReductionError> {
    let inst = &art.instance;
    if a.len() != inst.n() {
        return Err(ReductionError::AssignmentLength {
            expected: inst.n(),
            got: a.len(),
        });
    }
    if let Some(clause) = first_unsatisfied(inst, a) {
        return Err(ReductionError::UnsatAssignment { clause });
    }
    let gadget = match art.kind.variable_gadget() {
        Some(kind) => Some(verified_gadget(kind)?),
        None => None,
    };
    let completions: [Vec<u8>; 2] = match gadget {
        Some(g) => [0, 1].map(|beta| {
            g.complete(beta)
                .expect("variable gadgets carry a completion")
        }),
        None => [Vec::new(), Vec::new()],
    };
    let g = &art.graph;
    let mut labels: Vec<Option<u8>> = vec![None; g.n()];

    // variable side and the fixed clause copies
    for (v, role) in art.roles.iter().enumerate() {
        labels[v] = match *role {
            Role::P { var, slot } => {
                let beta = a.value(var);
                Some(match gadget {
                    Some(gd) => completions[beta as usize][gd.inputs()[slot]],
                    None => beta,
                })
            }
            Role::Internal { var, local } => Some(completions[a.value(var) as usize][local]),
            Role::Q { copy, .. } if matches!(art.kind, ReductionKind::Biregular { .. }) => {
                Some(((copy + 1) % 2) as u8)
            }
            Role::Q { copy, .. } if art.kind == ReductionKind::Even => Some(u8::from(copy == 0)),
            _ => None,
        };
    }
    let sum = |labels: &[Option<u8>], vs: &mut dyn Iterator<Item = usize>| -> i32 {
        vs.map(|u| phi_star(labels[u].expect("neighbor labeled earlier")))
            .sum()
    };
    let cancel = |s: i32| u8::from(s < 0);

    // vertices whose label cancels a neighborhood sum
    for v in 0..g.n() {
        match art.roles[v] {
            Role::V { clause } => {
                let q1 = art.at(Role::Q { clause, copy: 0 });
                let s = sum(
                    &labels,
                    &mut g.neighbors(q1).iter().copied().filter(|&u| u != v),
                );
                labels[v] = Some(cancel(s));
            }
            Role::Q { .. } if art.mode() == Mode::Closed => {
                let s = sum(
                    &labels,
                    &mut g
                        .neighbors(v)
                        .iter()
                        .copied()
                        .filter(|&u| matches!(art.roles[u], Role::P { .. })),
                );
                labels[v] = Some(cancel(s));
            }
            _ => {}
        }
    }

    // F4 vertices
    if art.kind == ReductionKind::Odd {
        for (clause, c) in inst.clauses().iter().enumerate() {
            let qlabel = labels[art.at(Role::Q { clause, copy: 0 })].expect("clause labeled");
            let mut plabels = [0u8; 3];
            for pos in 0..3 {
                let yv = art.at(Role::Y { clause, pos });
                let p = g
                    .neighbors(yv)
                    .iter()
                    .copied()
                    .find(|&u| matches!(art.roles[u], Role::P { var, .. } if var == c[pos]))
                    .expect("y joined to its occurrence input");
                plabels[pos] = labels[p].expect("inputs labeled");
            }
            let local = f4_completion(qlabel, plabels);
            for pos in 0..3 {
                labels[art.at(Role::Y { clause, pos })] = Some(local[3 * pos]);
                labels[art.at(Role::Z { clause, pos })] = Some(local[3 * pos + 1]);
                labels[art.at(Role::B { clause, pos })] = Some(local[3 * pos + 2]);
            }
        }
    }

    let p = TwoPartition::new(
        labels
            .into_iter()
            .map(|l| l.expect("every role receives a label"))
            .collect(),
    );
    let bad = check(g, &p, art.mode())?;
    assert!(bad.is_empty(), "lifted partition invalid at {bad:?}");
    Ok(p)
}

/// Reads the assignment off a locally balanced partition: `x_i` is the label
/// of the first input of variable `i`.
pub fn partition_to_assignment(
    art: &ReductionArtifact,
    p: &TwoPartition,
) -> Result<Assignment, ReductionError> {
    let violations = check(&art.graph, p, art.mode())?;
    if !violations.is_empty() {
        return Err(ReductionError::InvalidPartition { violations });
    }
    let a = Assignment(
        (0..art.instance.n())
            .map(|var| p.label(art.at(Role::P { var, slot: 0 })))
            .collect(),
    );
    assert!(
        nae_eval(&art.instance, &a),
        "balanced partition must encode a satisfying assignment"
    );
    Ok(a)
}

impl FromStr for ReductionKind {
    type Err = String;

    /// Parses `even`, `subcubic`, `odd`, or `bireg` (with `r = 1`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bireg" => Ok(ReductionKind::Biregular { r: 1 }),
            "even" => Ok(ReductionKind::Even),
            "subcubic" => Ok(ReductionKind::Subcubic),
            "odd" => Ok(ReductionKind::Odd),
            other => Err(format!(
                "unknown reduction {other:?} (expected bireg, even, subcubic or odd)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reduction::nae::parse_nae;
    use crate::reduction::roles::{parse_roles, write_roles};
    use crate::solver::{decide, SolverConfig, Verdict};

    fn four_copies() -> NaeInstance {
        parse_nae("p nae3 3 4\n1 2 3\n1 2 3\n1 2 3\n1 2 3\n").unwrap()
    }

    fn all(inst: &NaeInstance) -> Vec<ReductionArtifact> {
        vec![
            reduce_open_biregular(inst, 1).unwrap(),
            reduce_open_even(inst).unwrap(),
            reduce_closed_subcubic(inst).unwrap(),
            reduce_closed_odd(inst).unwrap(),
        ]
    }

    #[test]
    fn vertex_counts() {
        let counts: Vec<usize> = all(&four_copies()).iter().map(|a| a.graph.n()).collect();
        assert_eq!(counts, vec![11, 60, 94, 130]);
        let r2 = reduce_open_biregular(&four_copies(), 2).unwrap();
        assert_eq!(classify(&r2.graph).biregular, Some((3, 16)));
        assert_eq!(
            reduce_open_biregular(&four_copies(), 0),
            Err(ReductionError::BadR)
        );
    }

    #[test]
    fn biregular_degrees_and_summary() {
        let a = reduce_open_biregular(&four_copies(), 1).unwrap();
        for var in 0..3 {
            assert_eq!(a.graph.degree(a.at(Role::P { var, slot: 0 })), 8);
        }
        assert_eq!(a.summary(), "11 vertices (3,8)-biregular");
    }

    #[test]
    fn even_degrees() {
        let a = reduce_open_even(&four_copies()).unwrap();
        for (v, role) in a.roles.iter().enumerate() {
            let want = match role {
                Role::P { .. } | Role::Q { .. } => 4,
                _ => 2,
            };
            assert_eq!(a.graph.degree(v), want, "{role:?}");
        }
    }

    #[test]
    fn lift_and_extract_round_trip() {
        let inst = four_copies();
        let x = Assignment(vec![0, 0, 1]);
        for art in all(&inst) {
            let p = assignment_to_partition(&art, &x).unwrap();
            assert!(check(&art.graph, &p, art.mode()).unwrap().is_empty());
            let back = partition_to_assignment(&art, &p).unwrap();
            assert_eq!(back, x, "{}", art.kind);
        }
    }

    #[test]
    fn monochrome_assignment_rejected() {
        for art in all(&four_copies()) {
            assert_eq!(
                assignment_to_partition(&art, &Assignment(vec![1, 1, 1])),
                Err(ReductionError::UnsatAssignment { clause: 0 })
            );
        }
    }

    #[test]
    fn flipped_gadget_input_is_invalid() {
        let art = reduce_closed_subcubic(&four_copies()).unwrap();
        let p = assignment_to_partition(&art, &Assignment(vec![0, 0, 1])).unwrap();
        let mut labels = p.into_labels();
        let v = art.at(Role::P { var: 0, slot: 2 });
        labels[v] = 1 - labels[v];
        assert!(matches!(
            partition_to_assignment(&art, &TwoPartition::new(labels)),
            Err(ReductionError::InvalidPartition { .. })
        ));
    }

    #[test]
    fn solver_agrees_on_small_instance() {
        for art in all(&four_copies()) {
            let out = decide(&art.graph, art.mode(), &[], &SolverConfig::default());
            let Verdict::Sat(p) = out.verdict else {
                panic!("{} should be satisfiable", art.kind)
            };
            let a = partition_to_assignment(&art, &p).unwrap();
            assert!(nae_eval(&art.instance, &a));
        }
    }

    #[test]
    fn roles_round_trip_and_tamper_detection() {
        for art in all(&four_copies()) {
            let text = write_roles(&art);
            let back = parse_roles(&text, art.graph.clone()).unwrap();
            assert_eq!(back, art);
        }
        let art = reduce_closed_odd(&four_copies()).unwrap();
        let text = write_roles(&art);
        // swap the roles of two F4 vertices
        let tampered = text.replacen(" z 1 1\n", " z 1 9\n", 1);
        assert!(parse_roles(&tampered, art.graph.clone()).is_err());
        let mut roles = art.roles.clone();
        roles.swap(1, 2);
        assert!(matches!(
            ReductionArtifact::from_parts(art.kind, art.instance.clone(), art.graph.clone(), roles),
            Err(ReductionError::RoleMismatch(_))
        ));
    }
}
