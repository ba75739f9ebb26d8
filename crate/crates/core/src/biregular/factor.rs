//! `[k, k+1]`-factors of regular multigraphs.
//!
//! The construction orients an even-degree multigraph along closed trails so
//! that every vertex has equal in- and out-degree, then picks exactly `a`
//! outgoing and `a` incoming arcs per vertex with a bipartite max-flow. The
//! result has degree exactly `2a` everywhere. Odd-regular inputs first get a
//! perfect matching of auxiliary edges, which costs at most one unit of
//! degree per vertex when removed again; this handles odd `k`. For even `k`
//! the orientation of the augmented graph feeds a flow with per-vertex lower
//! and upper bounds instead.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::MultiGraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("multigraph is not regular")]
    NotRegular,
    #[error("need 1 <= k < r, got k = {k}, r = {r}")]
    BadK { k: usize, r: usize },
}

/// Spanning subgraph given as a sorted list of edge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorResult {
    pub edges: Vec<usize>,
}

impl FactorResult {
    pub fn contains(&self, e: usize) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn degrees(&self, m: &MultiGraph) -> Vec<usize> {
        let mut d = vec![0; m.n()];
        for &e in &self.edges {
            let (u, v) = m.edges()[e];
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// True if every degree lies in `[lo, hi]`.
    pub fn degrees_within(&self, m: &MultiGraph, lo: usize, hi: usize) -> bool {
        self.degrees(m).iter().all(|d| (lo..=hi).contains(d))
    }
}

/// A `[k, k+1]`-factor of an `r`-regular multigraph, `1 <= k < r`.
pub fn kk1_factor(m: &MultiGraph, k: usize) -> Result<FactorResult, FactorError> {
    let r = m.regularity().ok_or(FactorError::NotRegular)?;
    if k == 0 || k >= r {
        return Err(FactorError::BadK { k, r });
    }
    let edges = if k + 1 == r {
        (0..m.edges().len()).collect()
    } else if r % 2 == 0 {
        exact_even_factor(m.n(), m.edges(), k.div_ceil(2))
    } else if k % 2 == 1 {
        odd_regular_factor(m, k)
    } else {
        odd_regular_even_factor(m, k)
    };
    let result = FactorResult { edges };
    assert!(
        result.degrees_within(m, k, k + 1),
        "factor construction violated its degree bounds"
    );
    Ok(result)
}

/// `[k, k+1]`-factor of an odd-regular multigraph for odd `k`.
fn odd_regular_factor(m: &MultiGraph, k: usize) -> Vec<usize> {
    let n = m.n();
    // odd-regular graphs have an even number of vertices
    debug_assert_eq!(n % 2, 0);
    let real = m.edges().len();
    let mut edges = m.edges().to_vec();
    edges.extend((0..n / 2).map(|i| (2 * i, 2 * i + 1)));
    exact_even_factor(n, &edges, k.div_ceil(2))
        .into_iter()
        .filter(|&e| e < real)
        .collect()
}

/// `[k, k+1]`-factor of an odd-regular multigraph for even `k`.
///
/// After orienting `G` plus a perfect matching of auxiliary edges with equal
/// in- and out-degree, every vertex has `(r-1)/2` real arcs on one side and
/// `(r+1)/2` on the other. Taking exactly `k/2` arcs on the smaller side and
/// `k/2` or `k/2 + 1` on the larger one gives degree `k` or `k+1`. Weight
/// `k/(r-1)` on every real arc meets these bounds fractionally, so an
/// integral choice exists and a bounded flow finds it.
fn odd_regular_even_factor(m: &MultiGraph, k: usize) -> Vec<usize> {
    let n = m.n();
    debug_assert_eq!(n % 2, 0);
    let real = m.edges().len();
    let mut edges = m.edges().to_vec();
    edges.extend((0..n / 2).map(|i| (2 * i, 2 * i + 1)));
    let arcs = euler_orientation(n, &edges);
    let mut out_real = vec![0usize; n];
    let mut in_real = vec![0usize; n];
    for &(t, h) in &arcs[..real] {
        out_real[t] += 1;
        in_real[h] += 1;
    }
    let half = k / 2;
    let bounds = |own: usize, other: usize| {
        if own < other {
            (half, half)
        } else {
            (half, half + 1)
        }
    };
    let (source, sink) = (0, 1);
    let out_node = |v: usize| 2 + v;
    let in_node = |v: usize| 2 + n + v;
    let mut net = BoundedFlow::new(2 + 2 * n);
    for v in 0..n {
        let (lo, hi) = bounds(out_real[v], in_real[v]);
        net.add_arc(source, out_node(v), lo, hi);
        let (lo, hi) = bounds(in_real[v], out_real[v]);
        net.add_arc(in_node(v), sink, lo, hi);
    }
    let handles: Vec<usize> = arcs[..real]
        .iter()
        .map(|&(t, h)| net.add_arc(out_node(t), in_node(h), 0, 1))
        .collect();
    net.add_arc(sink, source, 0, usize::MAX / 4);
    assert!(
        net.feasible(),
        "bounded flow for an even k must be feasible"
    );
    let mut chosen: Vec<usize> = handles
        .iter()
        .enumerate()
        .filter(|&(_, &h)| net.flow_on(h) == 1)
        .map(|(e, _)| e)
        .collect();
    chosen.sort_unstable();
    chosen
}

/// Circulation with lower and upper arc bounds, reduced to max-flow.
struct BoundedFlow {
    net: FlowNetwork,
    excess: Vec<i64>,
    lower: Vec<usize>,
}

impl BoundedFlow {
    fn new(nodes: usize) -> Self {
        BoundedFlow {
            // two extra nodes for the auxiliary source and sink
            net: FlowNetwork::new(nodes + 2),
            excess: vec![0; nodes],
            lower: Vec::new(),
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, lo: usize, hi: usize) -> usize {
        self.excess[to] += lo as i64;
        self.excess[from] -= lo as i64;
        let id = self.net.add_arc(from, to, hi - lo);
        self.lower.push(lo);
        id
    }

    fn flow_on(&self, arc: usize) -> usize {
        self.lower[arc / 2] + self.net.flow_on(arc)
    }

    fn feasible(&mut self) -> bool {
        let nodes = self.excess.len();
        let (s, t) = (nodes, nodes + 1);
        let mut need = 0;
        for v in 0..nodes {
            let e = self.excess[v];
            if e > 0 {
                self.net.add_arc(s, v, e as usize);
                need += e as usize;
            } else if e < 0 {
                self.net.add_arc(v, t, (-e) as usize);
            }
        }
        self.net.max_flow(s, t) == need
    }
}

/// Subgraph of an even-regular multigraph with every degree exactly `2a`.
fn exact_even_factor(n: usize, edges: &[(usize, usize)], a: usize) -> Vec<usize> {
    let arcs = euler_orientation(n, edges);
    // flow network: source, sink, out-copies, in-copies
    let (source, sink) = (0, 1);
    let out_node = |v: usize| 2 + v;
    let in_node = |v: usize| 2 + n + v;
    let mut net = FlowNetwork::new(2 + 2 * n);
    for v in 0..n {
        net.add_arc(source, out_node(v), a);
        net.add_arc(in_node(v), sink, a);
    }
    let handles: Vec<usize> = arcs
        .iter()
        .map(|&(from, to)| net.add_arc(out_node(from), in_node(to), 1))
        .collect();
    let flow = net.max_flow(source, sink);
    assert_eq!(
        flow,
        a * n,
        "regular bipartite graph must have an {a}-factor"
    );
    let mut chosen: Vec<usize> = handles
        .iter()
        .enumerate()
        .filter(|&(_, &h)| net.flow_on(h) == 1)
        .map(|(e, _)| e)
        .collect();
    chosen.sort_unstable();
    chosen
}

/// Orients every edge so that each vertex has in-degree equal to out-degree.
/// Requires all degrees even. Returns `(tail, head)` per edge.
fn euler_orientation(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut inc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        inc[u].push((e, v));
        inc[v].push((e, u));
    }
    debug_assert!(inc.iter().all(|l| l.len() % 2 == 0));
    let mut used = vec![false; edges.len()];
    let mut cursor = vec![0usize; n];
    let mut arcs = vec![(0, 0); edges.len()];
    for start in 0..n {
        // walk closed trails from `start` until its edges are exhausted
        loop {
            let mut cur = start;
            let mut moved = false;
            loop {
                while cursor[cur] < inc[cur].len() && used[inc[cur][cursor[cur]].0] {
                    cursor[cur] += 1;
                }
                let Some(&(e, w)) = inc[cur].get(cursor[cur]) else {
                    break;
                };
                used[e] = true;
                arcs[e] = (cur, w);
                cur = w;
                moved = true;
            }
            debug_assert_eq!(cur, start, "trail in an even graph closes");
            if !moved {
                break;
            }
        }
    }
    arcs
}

/// Dinic max-flow on a small integer network.
struct FlowNetwork {
    // (head, residual capacity); arc i and i ^ 1 are mates
    arcs: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    original: Vec<usize>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); nodes],
            original: Vec::new(),
        }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: usize) -> usize {
        let id = self.arcs.len();
        self.arcs.push((to, cap));
        self.arcs.push((from, 0));
        self.out[from].push(id);
        self.out[to].push(id + 1);
        self.original.push(cap);
        self.original.push(0);
        id
    }

    fn flow_on(&self, arc: usize) -> usize {
        self.original[arc] - self.arcs[arc].1
    }

    fn max_flow(&mut self, source: usize, sink: usize) -> usize {
        let nodes = self.out.len();
        let mut total = 0;
        loop {
            let mut level = vec![usize::MAX; nodes];
            level[source] = 0;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.out[u] {
                    let (w, cap) = self.arcs[a];
                    if cap > 0 && level[w] == usize::MAX {
                        level[w] = level[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            if level[sink] == usize::MAX {
                return total;
            }
            let mut next = vec![0usize; nodes];
            loop {
                let pushed = self.augment(source, sink, usize::MAX, &level, &mut next);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(
        &mut self,
        u: usize,
        sink: usize,
        limit: usize,
        level: &[usize],
        next: &mut [usize],
    ) -> usize {
        if u == sink {
            return limit;
        }
        while next[u] < self.out[u].len() {
            let a = self.out[u][next[u]];
            let (w, cap) = self.arcs[a];
            if cap > 0 && level[w] == level[u] + 1 {
                let pushed = self.augment(w, sink, limit.min(cap), level, next);
                if pushed > 0 {
                    self.arcs[a].1 -= pushed;
                    self.arcs[a ^ 1].1 += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive oracle: every edge subset whose degrees lie in [k, k+1].
    fn all_factors(m: &MultiGraph, k: usize) -> Vec<Vec<usize>> {
        let e = m.edges().len();
        assert!(e <= 20);
        (0..1u32 << e)
            .map(|mask| (0..e).filter(|&i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|sel| FactorResult { edges: sel.clone() }.degrees_within(m, k, k + 1))
            .collect()
    }

    #[test]
    fn triple_edge() {
        let m = MultiGraph::new(2, vec![(0, 1); 3]);
        let oracle = all_factors(&m, 1);
        assert_eq!(oracle.len(), 6);
        let f = kk1_factor(&m, 1).unwrap();
        assert!(oracle.contains(&f.edges));
        assert_eq!(kk1_factor(&m, 1).unwrap(), f);
    }

    #[test]
    fn k4_factor() {
        let k4 = MultiGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let f = kk1_factor(&k4, 1).unwrap();
        assert!(f.degrees_within(&k4, 1, 2));
        assert!(all_factors(&k4, 1).contains(&f.edges));
        let f = kk1_factor(&k4, 2).unwrap();
        assert!(f.degrees_within(&k4, 2, 3));
    }

    #[test]
    fn four_cycle() {
        let c4 = MultiGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
        let f = kk1_factor(&c4, 1).unwrap();
        assert!(f.degrees_within(&c4, 1, 2));
    }

    #[test]
    fn even_regular_all_k() {
        // 4-regular: doubled C5
        let mut edges: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend(edges.clone());
        let m = MultiGraph::new(5, edges);
        for k in 1..4 {
            let f = kk1_factor(&m, k).unwrap();
            assert!(f.degrees_within(&m, k, k + 1), "k = {k}");
        }
    }

    #[test]
    fn odd_regular_even_k() {
        // 5-regular on two vertices, k = 2 goes through the bounded flow
        let m = MultiGraph::new(2, vec![(0, 1); 5]);
        let f = kk1_factor(&m, 2).unwrap();
        assert!(f.degrees_within(&m, 2, 3));
        assert!(all_factors(&m, 2).contains(&f.edges));
    }

    #[test]
    fn odd_regular_all_k() {
        // 5-regular multigraph on 8 vertices; k = 2 needs the bounded flow
        let edges = vec![
            (3, 6),
            (2, 3),
            (0, 4),
            (7, 3),
            (3, 1),
            (6, 4),
            (4, 7),
            (7, 2),
            (2, 6),
            (7, 1),
            (6, 0),
            (2, 5),
            (2, 4),
            (0, 3),
            (1, 5),
            (6, 5),
            (1, 5),
            (7, 4),
            (0, 5),
            (0, 1),
        ];
        let m = MultiGraph::new(8, edges);
        for k in 1..5 {
            let f = kk1_factor(&m, k).unwrap();
            assert!(f.degrees_within(&m, k, k + 1), "k = {k}");
        }
        // 7-regular on two vertices: k = 2 and k = 4
        let m = MultiGraph::new(2, vec![(0, 1); 7]);
        for k in 1..7 {
            assert!(
                all_factors(&m, k).contains(&kk1_factor(&m, k).unwrap().edges),
                "k = {k}"
            );
        }
    }

    #[test]
    fn precondition_errors() {
        let m = MultiGraph::new(3, vec![(0, 1), (1, 2)]);
        assert_eq!(kk1_factor(&m, 1).unwrap_err(), FactorError::NotRegular);
        let m = MultiGraph::new(2, vec![(0, 1); 3]);
        assert_eq!(
            kk1_factor(&m, 0).unwrap_err(),
            FactorError::BadK { k: 0, r: 3 }
        );
        assert_eq!(
            kk1_factor(&m, 3).unwrap_err(),
            FactorError::BadK { k: 3, r: 3 }
        );
    }

    #[test]
    fn orientation_is_balanced() {
        let edges = vec![
            (0, 1),
            (1, 2),
            (2, 0),
            (0, 3),
            (3, 4),
            (4, 0),
            (1, 2),
            (2, 1),
        ];
        let arcs = euler_orientation(5, &edges);
        let mut bal = [0i32; 5];
        for (e, &(t, h)) in arcs.iter().enumerate() {
            let (u, v) = edges[e];
            assert!((t, h) == (u, v) || (t, h) == (v, u));
            bal[t] += 1;
            bal[h] -= 1;
        }
        assert_eq!(bal, [0; 5]);
    }
}
