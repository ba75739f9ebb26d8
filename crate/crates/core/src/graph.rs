//! Simple graphs, multigraphs and the structural queries the rest of the
//! crate is built on.
//!
//! Vertices are dense indices `0..n`. Role names used by the reductions live
//! elsewhere; nothing in this module knows about them.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Errors raised while building a [`Graph`] from an edge list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
}

/// Errors raised by [`parse_graph`]. Line numbers are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: malformed input: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range (n = {n})")]
    OutOfRange {
        line: usize,
        vertex: usize,
        n: usize,
    },
    #[error("line {line}: self-loop at vertex {vertex}")]
    Loop { line: usize, vertex: usize },
    #[error("line {line}: duplicate edge {u}-{v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

impl ParseError {
    /// Line the error refers to, when it refers to one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Malformed { line, .. }
            | ParseError::OutOfRange { line, .. }
            | ParseError::Loop { line, .. }
            | ParseError::DuplicateEdge { line, .. } => Some(*line),
            ParseError::EdgeCount { .. } => None,
        }
    }
}

/// Undirected simple graph stored as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Graph on `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Cycle `0-1-...-(n-1)-0`. Requires `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle edges are simple")
    }

    /// Path `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("path edges are simple")
    }

    /// Complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("complete graph edges are simple")
    }

    /// Complete bipartite graph with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..a {
            for v in a..a + b {
                edges.push((u, v));
            }
        }
        Graph::from_edges(a + b, &edges).expect("complete bipartite edges are simple")
    }

    /// Replaces every edge by a path of length two through a new vertex.
    /// Original vertices keep their indices; subdivision vertices follow in
    /// canonical edge order.
    pub fn subdivide(&self) -> Self {
        let edges = self.edges();
        let n = self.n();
        let mut out = Vec::with_capacity(2 * edges.len());
        for (i, &(u, v)) in edges.iter().enumerate() {
            out.push((u, n + i));
            out.push((v, n + i));
        }
        Graph::from_edges(n + edges.len(), &out).expect("subdivision is simple")
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::OutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(u.min(v), u.max(v))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(())
            }
        }
    }

    pub(crate) fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Sorted open neighborhood of `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Canonical edge list: each edge as `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Graph with vertex `v` deleted; higher indices shift down by one.
    pub fn remove_vertex(&self, v: usize) -> Self {
        let shift = |w: usize| if w > v { w - 1 } else { w };
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .filter(|&(a, b)| a != v && b != v)
            .map(|(a, b)| (shift(a), shift(b)))
            .collect();
        Graph::from_edges(self.n() - 1, &edges).expect("subgraph of a simple graph is simple")
    }

    /// Connected components, each sorted, ordered by their lowest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Canonical edge-list document accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut s = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

/// Parses the edge-list format: a header line `n m` followed by `m` lines
/// `u v`. Blank lines after the last edge are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (hline, header) = lines.next().ok_or(ParseError::Malformed {
        line: 1,
        reason: "missing header".into(),
    })?;
    let [n, m] = parse_pair(hline, header)?;
    let mut g = Graph::empty(n);
    let mut found = 0;
    for (line, body) in lines {
        if body.trim().is_empty() {
            continue;
        }
        if found == m {
            return Err(ParseError::Malformed {
                line,
                reason: format!("more than {m} edge lines"),
            });
        }
        let [u, v] = parse_pair(line, body)?;
        g.add_edge(u, v).map_err(|e| match e {
            GraphError::OutOfRange { vertex, n } => ParseError::OutOfRange { line, vertex, n },
            GraphError::Loop(vertex) => ParseError::Loop { line, vertex },
            GraphError::DuplicateEdge(u, v) => ParseError::DuplicateEdge { line, u, v },
        })?;
        found += 1;
    }
    if found != m {
        return Err(ParseError::EdgeCount { expected: m, found });
    }
    Ok(g)
}

fn parse_pair(line: usize, body: &str) -> Result<[usize; 2], ParseError> {
    let mut it = body.split_whitespace();
    let mut next = || -> Result<usize, ParseError> {
        let tok = it.next().ok_or_else(|| ParseError::Malformed {
            line,
            reason: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| ParseError::Malformed {
            line,
            reason: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let pair = [next()?, next()?];
    if it.next().is_some() {
        return Err(ParseError::Malformed {
            line,
            reason: "trailing tokens".into(),
        });
    }
    Ok(pair)
}

/// Undirected multigraph. Parallel edges are allowed, loops are not.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl MultiGraph {
    /// Panics on a loop or an out-of-range endpoint.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Self {
        for &(u, v) in &edges {
            assert!(u < n && v < n, "edge {u}-{v} out of range for n = {n}");
            assert_ne!(u, v, "multigraph loops are not supported");
        }
        MultiGraph { n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// Common degree if every vertex has the same degree.
    pub fn regularity(&self) -> Option<usize> {
        let d = self.degrees();
        match d.split_first() {
            None => Some(0),
            Some((&first, rest)) => rest.iter().all(|&x| x == first).then_some(first),
        }
    }

    /// Incidence lists: for each vertex, `(edge index, other endpoint)`.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push((e, v));
            inc[v].push((e, u));
        }
        inc
    }

    /// Two-colors the multigraph, or returns an odd cycle as a closed
    /// sequence of edge indices `e_0, ..., e_{L-1}` together with the vertex
    /// each edge starts from.
    pub fn two_coloring(&self) -> Result<Vec<u8>, OddCycle> {
        let inc = self.incidence();
        let mut color: Vec<Option<u8>> = vec![None; self.n];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.n];
        let mut depth = vec![0usize; self.n];
        for s in 0..self.n {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(0);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for &(e, w) in &inc[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(1 - cu);
                            parent[w] = Some((e, u));
                            depth[w] = depth[u] + 1;
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => {
                            return Err(odd_cycle(&parent, &depth, u, w, e));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(color.into_iter().map(Option::unwrap).collect())
    }
}

/// Simple odd cycle in a multigraph: `steps[i] = (from, edge, to)`, with
/// `steps[i].to == steps[i + 1].from` cyclically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCycle {
    pub steps: Vec<(usize, usize, usize)>,
}

fn odd_cycle(
    parent: &[Option<(usize, usize)>],
    depth: &[usize],
    u: usize,
    w: usize,
    closing: usize,
) -> OddCycle {
    // climb both endpoints to their lowest common ancestor in the BFS tree
    let (mut a, mut b) = (u, w);
    let mut up_a = Vec::new();
    let mut up_b = Vec::new();
    while depth[a] > depth[b] {
        let (e, p) = parent[a].unwrap();
        up_a.push((a, e, p));
        a = p;
    }
    while depth[b] > depth[a] {
        let (e, p) = parent[b].unwrap();
        up_b.push((b, e, p));
        b = p;
    }
    while a != b {
        let (ea, pa) = parent[a].unwrap();
        up_a.push((a, ea, pa));
        a = pa;
        let (eb, pb) = parent[b].unwrap();
        up_b.push((b, eb, pb));
        b = pb;
    }
    // lca -> ... -> u, then u -> w, then w -> ... -> lca
    let mut steps: Vec<_> = up_a.iter().rev().map(|&(c, e, p)| (p, e, c)).collect();
    steps.push((u, closing, w));
    steps.extend(up_b.iter().copied());
    OddCycle { steps }
}

/// Bipartition of a simple graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side_x: BTreeSet<usize>,
    pub side_y: BTreeSet<usize>,
}

impl Bipartition {
    pub fn contains_x(&self, v: usize) -> bool {
        self.side_x.contains(&v)
    }

    /// True if every edge of `g` crosses the bipartition and the sides cover
    /// the vertex set.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.side_x.is_disjoint(&self.side_y)
            && self.side_x.len() + self.side_y.len() == g.n()
            && self.side_x.iter().chain(&self.side_y).all(|&v| v < g.n())
            && g.edges()
                .iter()
                .all(|&(u, v)| self.side_x.contains(&u) != self.side_x.contains(&v))
    }
}

/// Bipartition with the lowest vertex of every component on side X, or
/// `None` if the graph has an odd cycle.
pub fn bipartition(g: &Graph) -> Option<Bipartition> {
    let mut side: Vec<Option<bool>> = vec![None; g.n()];
    for s in 0..g.n() {
        if side[s].is_some() {
            continue;
        }
        side[s] = Some(true);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let su = side[u].unwrap();
            for &w in g.neighbors(u) {
                match side[w] {
                    None => {
                        side[w] = Some(!su);
                        queue.push_back(w);
                    }
                    Some(sw) if sw == su => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let mut bip = Bipartition {
        side_x: BTreeSet::new(),
        side_y: BTreeSet::new(),
    };
    for (v, s) in side.into_iter().enumerate() {
        if s.unwrap() {
            bip.side_x.insert(v);
        } else {
            bip.side_y.insert(v);
        }
    }
    debug_assert!(bip.is_valid_for(g));
    Some(bip)
}

/// Degree-class summary of a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub is_even: bool,
    pub is_odd: bool,
    pub max_degree: usize,
    /// `(a, b)` with `a <= b` when the graph is bipartite with one side
    /// `a`-regular and the other `b`-regular.
    pub biregular: Option<(usize, usize)>,
}

pub fn classify(g: &Graph) -> ClassReport {
    let degrees: Vec<usize> = (0..g.n()).map(|v| g.degree(v)).collect();
    ClassReport {
        is_even: degrees.iter().all(|d| d % 2 == 0),
        is_odd: degrees.iter().all(|d| d % 2 == 1),
        max_degree: g.max_degree(),
        biregular: biregular_degrees(g),
    }
}

fn biregular_degrees(g: &Graph) -> Option<(usize, usize)> {
    if g.n() == 0 {
        return None;
    }
    let bip = bipartition(g)?;
    // Each component may be flipped independently, so collect the degree
    // sets of both sides per component and look for one consistent (a, b).
    let mut sides: Vec<(BTreeSet<usize>, BTreeSet<usize>)> = Vec::new();
    for comp in g.components() {
        let mut x = BTreeSet::new();
        let mut y = BTreeSet::new();
        for v in comp {
            if bip.contains_x(v) {
                x.insert(g.degree(v));
            } else {
                y.insert(g.degree(v));
            }
        }
        if x.len() > 1 || y.len() > 1 {
            return None;
        }
        sides.push((x, y));
    }
    let single = |s: &BTreeSet<usize>| s.iter().next().copied();
    let fits = |a: usize, b: usize| {
        sides.iter().all(|(x, y)| {
            let (dx, dy) = (single(x), single(y));
            let ok = |p: Option<usize>, q: Option<usize>| {
                p.is_none_or(|d| d == a) && q.is_none_or(|d| d == b)
            };
            ok(dx, dy) || ok(dy, dx)
        })
    };
    let (x0, y0) = &sides[0];
    let a = single(x0)?;
    let candidates = match single(y0) {
        Some(b) => vec![(a, b)],
        // first component is an isolated vertex; the partner degree must
        // come from some other component
        None => {
            let mut c: Vec<(usize, usize)> = sides
                .iter()
                .flat_map(|(x, y)| x.iter().chain(y.iter()).map(move |&d| (a, d)))
                .collect();
            c.push((a, a));
            c
        }
    };
    candidates
        .into_iter()
        .find(|&(a, b)| fits(a, b))
        .map(|(a, b)| (a.min(b), a.max(b)))
}

/// Breadth-first edge distances from `source`; `None` for unreachable
/// vertices.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<Option<usize>> {
    assert!(source < g.n(), "source {source} out of range");
    let mut dist = vec![None; g.n()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(du + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// A graph together with an ordered list of input vertices through which it
/// may be attached to a host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionElement {
    pub graph: Graph,
    pub inputs: Vec<usize>,
}

impl ReductionElement {
    pub fn new(graph: Graph, inputs: Vec<usize>) -> Self {
        let distinct: BTreeSet<_> = inputs.iter().collect();
        assert_eq!(distinct.len(), inputs.len(), "inputs must be distinct");
        assert!(inputs.iter().all(|&v| v < graph.n()), "input out of range");
        ReductionElement { graph, inputs }
    }

    pub fn is_input(&self, v: usize) -> bool {
        self.inputs.contains(&v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("gadget vertex {0} is not an input")]
    NonInputAttachment(usize),
    #[error("gadget vertex {vertex} out of range (gadget has {n} vertices)")]
    GadgetOutOfRange { vertex: usize, n: usize },
    #[error("host vertex {vertex} out of range (host has {n} vertices)")]
    HostOutOfRange { vertex: usize, n: usize },
    #[error("attachment edge between gadget vertex {gadget} and host vertex {host} given twice")]
    DuplicateAttachment { gadget: usize, host: usize },
}

/// Disjoint union of `host` and the element's graph plus one edge per
/// attachment `(gadget vertex, host vertex)`. Only input vertices may be
/// attached. Gadget vertex `v` becomes `offset + v` in the result, where the
/// returned offset equals `host.n()`.
pub fn embed_gadget(
    host: &Graph,
    element: &ReductionElement,
    attachments: &[(usize, usize)],
) -> Result<(Graph, usize), EmbedError> {
    let offset = host.n();
    let mut g = host.clone();
    for _ in 0..element.graph.n() {
        g.add_vertex();
    }
    for (u, v) in element.graph.edges() {
        g.add_edge(offset + u, offset + v)
            .expect("gadget edges are simple");
    }
    for &(gv, hv) in attachments {
        if gv >= element.graph.n() {
            return Err(EmbedError::GadgetOutOfRange {
                vertex: gv,
                n: element.graph.n(),
            });
        }
        if !element.is_input(gv) {
            return Err(EmbedError::NonInputAttachment(gv));
        }
        if hv >= host.n() {
            return Err(EmbedError::HostOutOfRange {
                vertex: hv,
                n: host.n(),
            });
        }
        g.add_edge(offset + gv, hv)
            .map_err(|_| EmbedError::DuplicateAttachment {
                gadget: gv,
                host: hv,
            })?;
    }
    Ok((g, offset))
}
