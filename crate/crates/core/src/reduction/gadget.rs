//! Gadgets used by the reductions and the machine check of their contracts.
//!
//! A gadget is a small graph with ordered input vertices. Forcing gadgets
//! (F1, F2 and the tree `forcing`) promise two things when the balance
//! constraints of the inputs are waived: every valid labeling gives all
//! inputs the same label, and for each input value there is a labeling in
//! which every balance computed inside the gadget is exactly 0, inputs
//! included. F4 is a clause gadget; its contract is checked in a small
//! harness, see [`f4_harness`].

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use thiserror::Error;

use crate::balance::{balance_report, phi_star, Mode, TwoPartition};
use crate::graph::{Graph, ReductionElement};
use crate::solver::{brute_force_enumerate, enumerate, SolveError, SolverConfig};

/// Gadgets up to this size are also enumerated by brute force.
const BRUTE_CROSS_CHECK: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GadgetKind {
    /// 16-cycle, open mode, four inputs.
    F1,
    /// 6-vertex tree, closed mode, two inputs.
    F2,
    /// 30-vertex odd-degree tree, closed mode, four inputs.
    Forcing,
    /// Clause gadget, closed mode, three inputs.
    F4,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 4] = [
        GadgetKind::F1,
        GadgetKind::F2,
        GadgetKind::Forcing,
        GadgetKind::F4,
    ];

    pub fn build(self) -> Gadget {
        match self {
            GadgetKind::F1 => gadget_f1(),
            GadgetKind::F2 => gadget_f2(),
            GadgetKind::Forcing => gadget_forcing(),
            GadgetKind::F4 => gadget_f4(),
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GadgetKind::F1 => "f1",
            GadgetKind::F2 => "f2",
            GadgetKind::Forcing => "forcing",
            GadgetKind::F4 => "f4",
        })
    }
}

impl FromStr for GadgetKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "f1" => Ok(GadgetKind::F1),
            "f2" => Ok(GadgetKind::F2),
            "forcing" => Ok(GadgetKind::Forcing),
            "f4" => Ok(GadgetKind::F4),
            other => Err(format!(
                "unknown gadget {other:?} (expected f1, f2, forcing or f4)"
            )),
        }
    }
}

/// Label of a vertex in the completion, relative to the input value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Same,
    Flip,
}

impl Rule {
    pub fn apply(self, beta: u8) -> u8 {
        match self {
            Rule::Same => beta,
            Rule::Flip => 1 - beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub mode: Mode,
    pub element: ReductionElement,
    /// Human-readable vertex names, e.g. `p1`, `u3`, `l2.1`.
    pub names: Vec<String>,
    /// Completion rule per vertex; `None` for F4.
    pub completion: Option<Vec<Rule>>,
    /// Every valid labeling equals the completion for its input value.
    pub rigid: bool,
}

impl Gadget {
    pub fn graph(&self) -> &Graph {
        &self.element.graph
    }

    pub fn inputs(&self) -> &[usize] {
        &self.element.inputs
    }

    pub fn n(&self) -> usize {
        self.element.graph.n()
    }

    /// Local index of the vertex called `name`.
    pub fn vertex(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }

    /// Labels of the completion for input value `beta`.
    pub fn complete(&self, beta: u8) -> Option<Vec<u8>> {
        self.completion
            .as_ref()
            .map(|rules| rules.iter().map(|r| r.apply(beta)).collect())
    }

    /// The same gadget with one vertex deleted and later indices shifted
    /// down. Used to build broken variants.
    pub fn without_vertex(&self, v: usize) -> Gadget {
        assert!(!self.element.is_input(v), "cannot delete an input");
        let shift = |u: usize| if u > v { u - 1 } else { u };
        let mut names = self.names.clone();
        names.remove(v);
        Gadget {
            kind: self.kind,
            mode: self.mode,
            element: ReductionElement::new(
                self.graph().remove_vertex(v),
                self.inputs().iter().map(|&u| shift(u)).collect(),
            ),
            names,
            completion: self.completion.clone().map(|mut c| {
                c.remove(v);
                c
            }),
            rigid: self.rigid,
        }
    }
}

/// Builds a gadget from named vertices and named edges.
fn assemble(
    kind: GadgetKind,
    mode: Mode,
    vertices: &[(&str, Rule)],
    edges: &[(&str, &str)],
    inputs: &[&str],
    rigid: bool,
) -> Gadget {
    let names: Vec<String> = vertices.iter().map(|(s, _)| s.to_string()).collect();
    let id = |s: &str| {
        names
            .iter()
            .position(|x| x == s)
            .unwrap_or_else(|| panic!("unknown gadget vertex {s}"))
    };
    let edges: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (id(a), id(b))).collect();
    let graph = Graph::from_edges(names.len(), &edges).expect("gadget edges are simple");
    let inputs = inputs.iter().map(|s| id(s)).collect();
    Gadget {
        kind,
        mode,
        element: ReductionElement::new(graph, inputs),
        completion: Some(vertices.iter().map(|&(_, r)| r).collect()),
        names,
        rigid,
    }
}

/// The 16-cycle `p1 u1 u2 u3 p2 u4 u5 u6 p3 u7 u8 u9 p4 u10 u11 u12`;
/// local index equals cycle position.
pub fn gadget_f1() -> Gadget {
    let mut vertices: Vec<(String, Rule)> = Vec::new();
    for l in 1..=4 {
        vertices.push((format!("p{l}"), Rule::Same));
        vertices.push((format!("u{}", 3 * l - 2), Rule::Same));
        vertices.push((format!("u{}", 3 * l - 1), Rule::Flip));
        vertices.push((format!("u{}", 3 * l), Rule::Flip));
    }
    let names: Vec<&str> = vertices.iter().map(|(s, _)| s.as_str()).collect();
    let edges: Vec<(&str, &str)> = (0..16).map(|i| (names[i], names[(i + 1) % 16])).collect();
    let vs: Vec<(&str, Rule)> = vertices.iter().map(|(s, r)| (s.as_str(), *r)).collect();
    assemble(
        GadgetKind::F1,
        Mode::Open,
        &vs,
        &edges,
        &["p1", "p2", "p3", "p4"],
        false,
    )
}

/// Tree with edges `v3v1, v3v2, v3v4, v4v5, v4v6` and inputs `v1, v2`.
pub fn gadget_f2() -> Gadget {
    use Rule::*;
    assemble(
        GadgetKind::F2,
        Mode::Closed,
        &[
            ("v1", Same),
            ("v2", Same),
            ("v3", Flip),
            ("v4", Flip),
            ("v5", Same),
            ("v6", Same),
        ],
        &[
            ("v3", "v1"),
            ("v3", "v2"),
            ("v3", "v4"),
            ("v4", "v5"),
            ("v4", "v6"),
        ],
        &["v1", "v2"],
        true,
    )
}

/// 30-vertex tree in which every vertex has degree 1 or 3.
///
/// Each input `p_m` hangs off `a_m`, which also carries the pendant path
/// `b_m` with leaves `l_m.1, l_m.2`. Junction `j1` joins `a1, a2`; `j2` joins
/// `a3, a4`. Each junction feeds `r_h` (with leaf `lr_h`), and both feeders
/// meet at `s`, which carries `t` with leaves `lt1, lt2`.
pub fn gadget_forcing() -> Gadget {
    use Rule::*;
    let mut vs: Vec<(String, Rule)> = Vec::new();
    for m in 1..=4 {
        vs.push((format!("p{m}"), Same));
    }
    for m in 1..=4 {
        vs.push((format!("a{m}"), Flip));
        vs.push((format!("b{m}"), Flip));
        vs.push((format!("l{m}.1"), Same));
        vs.push((format!("l{m}.2"), Same));
    }
    for h in 1..=2 {
        vs.push((format!("j{h}"), Same));
        vs.push((format!("r{h}"), Same));
        vs.push((format!("lr{h}"), Flip));
    }
    vs.push(("s".into(), Flip));
    vs.push(("t".into(), Flip));
    vs.push(("lt1".into(), Same));
    vs.push(("lt2".into(), Same));

    let mut es: Vec<(String, String)> = Vec::new();
    let mut e = |a: String, b: String| es.push((a, b));
    for m in 1..=4 {
        e(format!("a{m}"), format!("b{m}"));
        e(format!("b{m}"), format!("l{m}.1"));
        e(format!("b{m}"), format!("l{m}.2"));
        e(format!("a{m}"), format!("p{m}"));
        e(format!("a{m}"), format!("j{}", (m + 1) / 2));
    }
    for h in 1..=2 {
        e(format!("j{h}"), format!("r{h}"));
        e(format!("r{h}"), format!("lr{h}"));
        e(format!("r{h}"), "s".into());
    }
    e("s".into(), "t".into());
    e("t".into(), "lt1".into());
    e("t".into(), "lt2".into());

    let vs: Vec<(&str, Rule)> = vs.iter().map(|(s, r)| (s.as_str(), *r)).collect();
    let es: Vec<(&str, &str)> = es.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    assemble(
        GadgetKind::Forcing,
        Mode::Closed,
        &vs,
        &es,
        &["p1", "p2", "p3", "p4"],
        true,
    )
}

/// Clause gadget: `z_t - y_t - b_t` for `t = 1..3` plus the triangle
/// `b1 b2 b3`; inputs `y1, y2, y3`. Vertex `3(t-1) + {0, 1, 2}` is
/// `y_t, z_t, b_t`.
pub fn gadget_f4() -> Gadget {
    let mut names = Vec::new();
    let mut edges = Vec::new();
    for t in 0..3 {
        names.extend([
            format!("y{}", t + 1),
            format!("z{}", t + 1),
            format!("b{}", t + 1),
        ]);
        edges.push((3 * t + 1, 3 * t));
        edges.push((3 * t, 3 * t + 2));
    }
    edges.extend([(2, 5), (2, 8), (5, 8)]);
    let graph = Graph::from_edges(9, &edges).expect("gadget edges are simple");
    Gadget {
        kind: GadgetKind::F4,
        mode: Mode::Closed,
        element: ReductionElement::new(graph, vec![0, 3, 6]),
        names,
        completion: None,
        rigid: false,
    }
}

/// Labels of the F4 vertices for a clause vertex labeled `q` whose three
/// occurrence vertices are labeled `p`.
pub fn f4_completion(q: u8, p: [u8; 3]) -> Vec<u8> {
    p.iter().flat_map(|&pt| [1 - q, q, 1 - pt]).collect()
}

/// F4 plus a clause vertex `q` (index 9) and three occurrence vertices
/// `p_t` (indices 10..13) with edges `q p_t` and `p_t y_t`. The `p_t` are
/// the waived vertices.
pub fn f4_harness(f4: &Gadget) -> (Graph, usize, [usize; 3]) {
    let q = f4.n();
    let p = [q + 1, q + 2, q + 3];
    let mut edges = f4.graph().edges();
    for (t, &pt) in p.iter().enumerate() {
        edges.push((q, pt));
        edges.push((pt, f4.inputs()[t]));
    }
    (
        Graph::from_edges(q + 4, &edges).expect("harness edges are simple"),
        q,
        p,
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GadgetFailure {
    #[error("solver gave up: {0}")]
    Solver(#[from] SolveError),
    #[error("solver and brute force disagree on the valid labelings")]
    OracleMismatch,
    #[error("valid labeling {labeling} gives the inputs different labels")]
    InputsDiffer { labeling: TwoPartition },
    #[error("valid labeling {labeling} differs from the completion for its input value")]
    NotRigid { labeling: TwoPartition },
    #[error("completion for input value {beta} leaves balance {balance} at vertex {vertex}")]
    Completion {
        beta: u8,
        vertex: usize,
        balance: i32,
    },
    #[error("completion for input value {beta} is not a valid labeling")]
    CompletionMissing { beta: u8 },
    #[error("occurrence pattern {pattern}: valid labeling exists = {found}, expected {expected}")]
    Harness {
        pattern: String,
        found: bool,
        expected: bool,
    },
}

/// All labelings that are valid except at the waived vertices, from the
/// solver, cross-checked against brute force on small graphs.
fn valid_labelings(
    g: &Graph,
    mode: Mode,
    waived: &[usize],
) -> Result<Vec<TwoPartition>, GadgetFailure> {
    let sols = enumerate(g, mode, waived, &SolverConfig::default())?;
    if g.n() <= BRUTE_CROSS_CHECK && brute_force_enumerate(g, mode, waived)? != sols {
        return Err(GadgetFailure::OracleMismatch);
    }
    Ok(sols)
}

/// Checks a gadget's contract. F4 is checked in [`f4_harness`]: a valid
/// labeling exists exactly for the non-monochrome occurrence patterns, and
/// the explicit completion leaves every balance other than those of the
/// occurrence vertices at 0 and contributes 0 to each of those.
pub fn verify_gadget(g: &Gadget) -> Result<(), GadgetFailure> {
    if g.kind == GadgetKind::F4 {
        return verify_f4(g);
    }
    let sols = valid_labelings(g.graph(), g.mode, g.inputs())?;
    for s in &sols {
        let first = s.label(g.inputs()[0]);
        if g.inputs().iter().any(|&p| s.label(p) != first) {
            return Err(GadgetFailure::InputsDiffer {
                labeling: s.clone(),
            });
        }
    }
    for beta in 0..=1u8 {
        let labels = g
            .complete(beta)
            .expect("forcing gadgets carry a completion");
        let p = TwoPartition::new(labels);
        let report = balance_report(g.graph(), &p).expect("completion length");
        if let Some((vertex, &balance)) = report
            .balances(g.mode)
            .iter()
            .enumerate()
            .find(|(_, &b)| b != 0)
        {
            return Err(GadgetFailure::Completion {
                beta,
                vertex,
                balance,
            });
        }
        if g.inputs().iter().any(|&v| p.label(v) != beta) {
            return Err(GadgetFailure::CompletionMissing { beta });
        }
        if !sols.contains(&p) {
            return Err(GadgetFailure::CompletionMissing { beta });
        }
    }
    if g.rigid {
        for s in &sols {
            let beta = s.label(g.inputs()[0]);
            if g.complete(beta).as_deref() != Some(s.labels()) {
                return Err(GadgetFailure::NotRigid {
                    labeling: s.clone(),
                });
            }
        }
    }
    Ok(())
}

fn verify_f4(g: &Gadget) -> Result<(), GadgetFailure> {
    let (h, _, p) = f4_harness(g);
    let sols = valid_labelings(&h, Mode::Closed, &p)?;
    for mask in 0..8u8 {
        let pat = [mask >> 2 & 1, mask >> 1 & 1, mask & 1];
        let expected = pat.iter().any(|&x| x != pat[0]);
        let found = sols
            .iter()
            .any(|s| p.iter().zip(pat).all(|(&v, x)| s.label(v) == x));
        let pattern: String = pat.iter().map(|x| x.to_string()).collect();
        if found != expected {
            return Err(GadgetFailure::Harness {
                pattern,
                found,
                expected,
            });
        }
        if !expected {
            continue;
        }
        // the clause vertex takes the label cancelling its three neighbors
        let sum: i32 = pat.iter().map(|&x| phi_star(x)).sum();
        let qlabel = u8::from(sum < 0);
        let mut labels = f4_completion(qlabel, pat);
        labels.push(qlabel);
        labels.extend(pat);
        let part = TwoPartition::new(labels);
        let report = balance_report(&h, &part).expect("harness labeling length");
        for v in 0..h.n() {
            let own = if p.contains(&v) {
                phi_star(part.label(v))
            } else {
                0
            };
            let balance = report.closed[v] - own;
            if balance != 0 {
                return Err(GadgetFailure::Completion {
                    beta: qlabel,
                    vertex: v,
                    balance,
                });
            }
        }
    }
    Ok(())
}

/// The gadget of `kind`, verified once per process.
pub fn verified_gadget(kind: GadgetKind) -> Result<&'static Gadget, GadgetFailure> {
    static CACHE: [OnceLock<Result<Gadget, GadgetFailure>>; 4] = [
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
        OnceLock::new(),
    ];
    let slot = GadgetKind::ALL
        .iter()
        .position(|&k| k == kind)
        .expect("known kind");
    CACHE[slot]
        .get_or_init(|| {
            let g = kind.build();
            verify_gadget(&g).map(|()| g)
        })
        .as_ref()
        .map_err(Clone::clone)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::classify;

    #[test]
    fn f1_shape_and_contract() {
        let g = gadget_f1();
        assert_eq!(g.n(), 16);
        assert!((0..16).all(|v| g.graph().degree(v) == 2));
        assert_eq!(g.inputs(), &[0, 4, 8, 12]);
        verify_gadget(&g).unwrap();
        let sols = enumerate(g.graph(), Mode::Open, g.inputs(), &SolverConfig::default()).unwrap();
        assert_eq!(sols.len(), 32);
    }

    #[test]
    fn f1_completion_pattern() {
        let g = gadget_f1();
        let c = g.complete(0).unwrap();
        for l in 1..=4 {
            assert_eq!(c[g.vertex(&format!("u{}", 3 * l - 2)).unwrap()], 0);
            assert_eq!(c[g.vertex(&format!("u{}", 3 * l - 1)).unwrap()], 1);
            assert_eq!(c[g.vertex(&format!("u{}", 3 * l)).unwrap()], 1);
        }
    }

    #[test]
    fn f2_exhaustive() {
        let g = gadget_f2();
        verify_gadget(&g).unwrap();
        let v = |s: &str| g.vertex(s).unwrap();
        let sols = brute_force_enumerate(g.graph(), Mode::Closed, g.inputs()).unwrap();
        assert_eq!(sols.len(), 2);
        for s in sols {
            let b = s.label(v("v1"));
            assert_eq!(s.label(v("v3")), 1 - b);
            assert_eq!(s.label(v("v4")), 1 - b);
            assert_eq!(s.label(v("v5")), b);
            assert_eq!(s.label(v("v6")), b);
        }
    }

    #[test]
    fn forcing_gadget_shape() {
        let g = gadget_forcing();
        assert_eq!(g.n(), 30);
        assert_eq!(g.graph().m(), 29);
        assert_eq!(g.graph().components().len(), 1);
        assert!((0..30).all(|v| g.graph().degree(v) % 2 == 1));
        assert!(g.inputs().iter().all(|&p| g.graph().degree(p) == 1));
        let c = classify(g.graph());
        assert!(c.is_odd && c.max_degree == 3);
        verify_gadget(&g).unwrap();
        let sols = enumerate(
            g.graph(),
            Mode::Closed,
            g.inputs(),
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(sols.len(), 2);
    }

    #[test]
    fn forcing_gadget_without_block_leaf_fails() {
        let g = gadget_forcing();
        let broken = g.without_vertex(g.vertex("l1.1").unwrap());
        assert!(matches!(
            verify_gadget(&broken),
            Err(GadgetFailure::InputsDiffer { .. })
        ));
    }

    #[test]
    fn f4_in_harness() {
        let g = gadget_f4();
        assert_eq!(g.n(), 9);
        verify_gadget(&g).unwrap();
        let (h, _, _) = f4_harness(&g);
        // with the occurrence vertices attached, y and b have degree 3
        assert!((0..9).all(|v| h.degree(v) % 2 == 1));
    }

    #[test]
    fn cache_returns_verified_gadgets() {
        for kind in GadgetKind::ALL {
            assert_eq!(verified_gadget(kind).unwrap().kind, kind);
            assert_eq!(kind.to_string().parse::<GadgetKind>().unwrap(), kind);
        }
    }
}
