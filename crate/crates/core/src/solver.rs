//! Exact decision and enumeration of locally-balanced 2-partitions.
//!
//! Every non-waived vertex contributes one cardinality constraint: among the
//! `s` vertices of its scope (open or closed neighborhood) the number of 1s
//! lies in `[s / 2, (s + 1) / 2]`. Propagation fixes the remaining scope
//! variables whenever a constraint reaches either end of that range; the
//! degree-2 open rule and the leaf closed rule are both special cases.
//!
//! Search branches on the lowest unassigned vertex, value 0 first, so the
//! first witness found is the lexicographically smallest valid labeling and
//! enumeration yields labelings in lexicographic order.

use thiserror::Error;

use crate::balance::{balance_report, Mode, TwoPartition};
use crate::graph::Graph;

/// Largest vertex count accepted by the brute-force oracle.
pub const BRUTE_FORCE_CAP: usize = 25;

/// Default node budget for [`decide`] and [`enumerate`].
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Maximum number of branching decisions before giving up.
    pub node_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("graph has {n} vertices; brute force is capped at {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("node budget of {0} exceeded")]
    BudgetExceeded(u64),
}

/// Propagation found a constraint that can no longer be met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("constraint of vertex {vertex} cannot be satisfied")]
pub struct Conflict {
    pub vertex: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub nodes: u64,
    pub propagations: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat(TwoPartition),
    Unsat,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOutcome {
    pub verdict: Verdict,
    pub stats: SolveStats,
}

impl SolveOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, Verdict::Sat(_))
    }

    pub fn witness(&self) -> Option<&TwoPartition> {
        match &self.verdict {
            Verdict::Sat(p) => Some(p),
            _ => None,
        }
    }
}

/// The per-vertex balance constraints of a graph in one mode.
#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    mode: Mode,
    scopes: Vec<Vec<usize>>,
    waived: Vec<bool>,
    /// vertex -> active constraints whose scope contains it
    watch: Vec<Vec<usize>>,
}

impl ConstraintSystem {
    /// Panics if a waived vertex is out of range.
    pub fn new(g: &Graph, mode: Mode, waived: &[usize]) -> Self {
        let n = g.n();
        let mut is_waived = vec![false; n];
        for &v in waived {
            assert!(v < n, "waived vertex {v} out of range");
            is_waived[v] = true;
        }
        let scopes: Vec<Vec<usize>> = (0..n)
            .map(|v| {
                let mut s = g.neighbors(v).to_vec();
                if mode == Mode::Closed {
                    let pos = s.binary_search(&v).unwrap_err();
                    s.insert(pos, v);
                }
                s
            })
            .collect();
        let mut watch = vec![Vec::new(); n];
        for (c, scope) in scopes.iter().enumerate() {
            if is_waived[c] {
                continue;
            }
            for &u in scope {
                watch[u].push(c);
            }
        }
        ConstraintSystem {
            mode,
            scopes,
            waived: is_waived,
            watch,
        }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.scopes.len()
    }

    pub fn scope(&self, v: usize) -> &[usize] {
        &self.scopes[v]
    }

    pub fn is_waived(&self, v: usize) -> bool {
        self.waived[v]
    }

    /// Admissible values of the `±1` sum over the scope of `v`.
    pub fn admissible_sums(&self, v: usize) -> &'static [i32] {
        if self.scopes[v].len().is_multiple_of(2) {
            &[0]
        } else {
            &[-1, 1]
        }
    }

    /// Inclusive range of the number of 1s allowed in the scope of `v`.
    fn ones_range(&self, v: usize) -> (usize, usize) {
        let s = self.scopes[v].len();
        (s / 2, s.div_ceil(2))
    }

    /// True if `p` meets every non-waived constraint.
    pub fn is_satisfied_by(&self, p: &TwoPartition) -> bool {
        (0..self.n()).filter(|&v| !self.waived[v]).all(|v| {
            let ones = self.scopes[v].iter().filter(|&&u| p.label(u) == 1).count();
            let (lo, hi) = self.ones_range(v);
            (lo..=hi).contains(&ones)
        })
    }
}

/// Mutable search state over a constraint system.
struct State<'a> {
    cs: &'a ConstraintSystem,
    value: Vec<Option<u8>>,
    ones: Vec<usize>,
    zeros: Vec<usize>,
    trail: Vec<usize>,
    pending: Vec<usize>,
    queued: Vec<bool>,
    stats: SolveStats,
}

impl<'a> State<'a> {
    fn new(cs: &'a ConstraintSystem) -> Self {
        let n = cs.n();
        State {
            cs,
            value: vec![None; n],
            ones: vec![0; n],
            zeros: vec![0; n],
            trail: Vec::new(),
            pending: Vec::new(),
            queued: vec![false; n],
            stats: SolveStats::default(),
        }
    }

    fn enqueue(&mut self, c: usize) {
        if !self.queued[c] {
            self.queued[c] = true;
            self.pending.push(c);
        }
    }

    fn assign(&mut self, v: usize, val: u8) {
        debug_assert!(self.value[v].is_none());
        self.value[v] = Some(val);
        self.trail.push(v);
        for i in 0..self.cs.watch[v].len() {
            let c = self.cs.watch[v][i];
            if val == 1 {
                self.ones[c] += 1;
            } else {
                self.zeros[c] += 1;
            }
            self.enqueue(c);
        }
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().unwrap();
            let val = self.value[v].take().unwrap();
            for &c in &self.cs.watch[v] {
                if val == 1 {
                    self.ones[c] -= 1;
                } else {
                    self.zeros[c] -= 1;
                }
            }
        }
        for c in self.pending.drain(..) {
            self.queued[c] = false;
        }
    }

    fn enqueue_all(&mut self) {
        for c in 0..self.cs.n() {
            if !self.cs.waived[c] {
                self.enqueue(c);
            }
        }
    }

    fn propagate(&mut self) -> Result<(), Conflict> {
        while let Some(c) = self.pending.pop() {
            self.queued[c] = false;
            let scope_len = self.cs.scopes[c].len();
            let (lo, hi) = self.cs.ones_range(c);
            let ones = self.ones[c];
            let free = scope_len - ones - self.zeros[c];
            if ones > hi || ones + free < lo {
                for c in self.pending.drain(..) {
                    self.queued[c] = false;
                }
                return Err(Conflict { vertex: c });
            }
            if free == 0 {
                continue;
            }
            let forced = if ones == hi {
                0
            } else if ones + free == lo {
                1
            } else {
                continue;
            };
            for i in 0..scope_len {
                let u = self.cs.scopes[c][i];
                if self.value[u].is_none() {
                    self.assign(u, forced);
                    self.stats.propagations += 1;
                }
            }
        }
        Ok(())
    }

    fn labels(&self) -> TwoPartition {
        TwoPartition::new(self.value.iter().map(|v| v.unwrap()).collect())
    }

    /// Depth-first search calling `sink` on every complete assignment that
    /// satisfies all constraints; stops early when `sink` returns `true`.
    /// Returns whether the search was stopped by `sink`.
    fn search(
        &mut self,
        budget: u64,
        sink: &mut dyn FnMut(TwoPartition) -> bool,
    ) -> Result<bool, SolveError> {
        struct Frame {
            var: usize,
            next: u8,
            mark: usize,
        }
        let n = self.cs.n();
        self.enqueue_all();
        if self.propagate().is_err() {
            return Ok(false);
        }
        let mut frames: Vec<Frame> = Vec::new();
        let mut descend_from = Some(0);
        loop {
            if let Some(from) = descend_from.take() {
                match (from..n).find(|&v| self.value[v].is_none()) {
                    None => {
                        if sink(self.labels()) {
                            return Ok(true);
                        }
                    }
                    Some(var) => frames.push(Frame {
                        var,
                        next: 0,
                        mark: self.trail.len(),
                    }),
                }
            }
            let Some(top) = frames.last_mut() else {
                return Ok(false);
            };
            let (var, val, mark) = (top.var, top.next, top.mark);
            self.undo(mark);
            if val > 1 {
                frames.pop();
                continue;
            }
            top.next += 1;
            self.stats.nodes += 1;
            if self.stats.nodes > budget {
                return Err(SolveError::BudgetExceeded(budget));
            }
            self.assign(var, val);
            if self.propagate().is_ok() {
                descend_from = Some(var + 1);
            }
        }
    }
}

/// Runs constraint propagation to a fixpoint from a partial assignment.
pub fn propagate(
    cs: &ConstraintSystem,
    partial: &[Option<u8>],
) -> Result<Vec<Option<u8>>, Conflict> {
    assert_eq!(partial.len(), cs.n(), "partial assignment length");
    let mut st = State::new(cs);
    for (v, &val) in partial.iter().enumerate() {
        if let Some(val) = val {
            assert!(val <= 1, "labels must be 0 or 1");
            st.assign(v, val);
        }
    }
    st.enqueue_all();
    st.propagate()?;
    Ok(st.value)
}

/// Decides whether `g` has a labeling satisfying every non-waived vertex's
/// constraint in `mode`, returning the lexicographically first one.
pub fn decide(g: &Graph, mode: Mode, waived: &[usize], config: &SolverConfig) -> SolveOutcome {
    let cs = ConstraintSystem::new(g, mode, waived);
    let mut st = State::new(&cs);
    let mut found = None;
    let result = st.search(config.node_budget, &mut |p| {
        found = Some(p);
        true
    });
    let verdict = match (result, found) {
        (Err(_), _) => Verdict::Timeout,
        (Ok(_), Some(p)) => {
            assert_witness(g, &cs, &p);
            Verdict::Sat(p)
        }
        (Ok(_), None) => Verdict::Unsat,
    };
    SolveOutcome {
        verdict,
        stats: st.stats,
    }
}

/// All labelings satisfying every non-waived constraint, in lexicographic
/// order.
pub fn enumerate(
    g: &Graph,
    mode: Mode,
    waived: &[usize],
    config: &SolverConfig,
) -> Result<Vec<TwoPartition>, SolveError> {
    let cs = ConstraintSystem::new(g, mode, waived);
    let mut st = State::new(&cs);
    let mut out = Vec::new();
    st.search(config.node_budget, &mut |p| {
        out.push(p);
        false
    })?;
    for p in &out {
        assert_witness(g, &cs, p);
    }
    Ok(out)
}

fn assert_witness(g: &Graph, cs: &ConstraintSystem, p: &TwoPartition) {
    let report = balance_report(g, p).expect("witness length matches graph");
    let bad: Vec<usize> = report
        .violations(cs.mode())
        .into_iter()
        .filter(|&v| !cs.is_waived(v))
        .collect();
    assert!(
        bad.is_empty(),
        "solver produced an invalid witness {p}: {bad:?}"
    );
}

/// Scope bitmasks with vertex `v` at bit `n - 1 - v`, so that counting
/// masks upward visits labelings in lexicographic order.
fn scope_masks(cs: &ConstraintSystem) -> Vec<(u64, u32)> {
    let n = cs.n();
    (0..n)
        .filter(|&v| !cs.is_waived(v))
        .map(|v| {
            let mask = cs.scope(v).iter().fold(0u64, |m, &u| m | 1 << (n - 1 - u));
            (mask, cs.scope(v).len() as u32)
        })
        .collect()
}

fn brute_iter(
    g: &Graph,
    mode: Mode,
    waived: &[usize],
) -> Result<impl Iterator<Item = TwoPartition>, SolveError> {
    let n = g.n();
    if n > BRUTE_FORCE_CAP {
        return Err(SolveError::TooLarge {
            n,
            cap: BRUTE_FORCE_CAP,
        });
    }
    let cs = ConstraintSystem::new(g, mode, waived);
    let masks = scope_masks(&cs);
    Ok((0..1u64 << n)
        .filter(move |&labels| {
            masks.iter().all(|&(m, s)| {
                let ones = (labels & m).count_ones();
                (2 * ones).abs_diff(s) <= 1
            })
        })
        .map(move |labels| TwoPartition::from_mask(n, labels)))
}

/// Oracle: tries all `2^n` labelings in lexicographic order.
pub fn brute_force(g: &Graph, mode: Mode) -> Result<SolveOutcome, SolveError> {
    let first = brute_iter(g, mode, &[])?.next();
    Ok(SolveOutcome {
        verdict: match first {
            Some(p) => Verdict::Sat(p),
            None => Verdict::Unsat,
        },
        stats: SolveStats::default(),
    })
}

/// Oracle counterpart of [`enumerate`].
pub fn brute_force_enumerate(
    g: &Graph,
    mode: Mode,
    waived: &[usize],
) -> Result<Vec<TwoPartition>, SolveError> {
    Ok(brute_iter(g, mode, waived)?.collect())
}
