//! Polynomial-time decision for `(2, 2k+1)`-biregular bipartite graphs.
//!
//! Such a graph has a locally-balanced open 2-partition exactly when it has
//! no cycle whose length is 2 mod 4. Collapsing every degree-2 vertex into an
//! edge between its two neighbors gives a `(2k+1)`-regular multigraph on the
//! other side; a cycle of the graph through `m` high-degree vertices has
//! length `2m`, so bad cycles are exactly the odd cycles of the collapsed
//! multigraph. When there is none, a `[k, k+1]`-factor labels the degree-2
//! side and distances mod 4 label the rest. Otherwise an odd cycle is lifted
//! back into a certificate.

mod factor;

pub use factor::{kk1_factor, FactorError, FactorResult};

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::balance::{check, Mode, TwoPartition};
use crate::graph::{bfs_distances, bipartition, Bipartition, Graph, MultiGraph};

/// Why a graph is outside the `(2, 2k+1)`-biregular class.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NotApplicable {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("no vertex has degree 2")]
    NoDegreeTwoSide,
    #[error("every vertex has degree 2; the other side must have odd degree 2k+1 >= 3")]
    NoOddSide,
    #[error("vertex {vertex} has degree {degree}; expected 2 or {expected}")]
    WrongDegree {
        vertex: usize,
        degree: usize,
        expected: String,
    },
    #[error("edge {0}-{1} joins two vertices on the same degree side")]
    SameSideEdge(usize, usize),
}

/// A simple cycle of length 2 mod 4, listed without repeating the first
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate {
    pub vertices: Vec<usize>,
}

impl CycleCertificate {
    /// Checks simplicity, edges against `g`, and the length residue.
    pub fn verify(&self, g: &Graph) -> bool {
        let len = self.vertices.len();
        let distinct: BTreeSet<_> = self.vertices.iter().collect();
        len >= 3
            && len % 4 == 2
            && distinct.len() == len
            && (0..len).all(|i| g.has_edge(self.vertices[i], self.vertices[(i + 1) % len]))
    }
}

/// The collapsed multigraph on the high-degree side.
#[derive(Debug, Clone)]
pub struct ReducedMultigraph {
    pub multigraph: MultiGraph,
    /// Graph vertex of each multigraph vertex, ascending.
    pub y_vertices: Vec<usize>,
    /// Degree-2 vertex that produced each multigraph edge.
    pub provenance: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BiregularOutcome {
    Witness(TwoPartition),
    Certificate(CycleCertificate),
}

/// Identifies the degree-2 side `X` and the odd side `Y`, returning the
/// bipartition and `k` with `|N(y)| = 2k+1`.
pub fn validate_2odd_biregular(g: &Graph) -> Result<(Bipartition, usize), NotApplicable> {
    if g.n() == 0 {
        return Err(NotApplicable::Empty);
    }
    if bipartition(g).is_none() {
        return Err(NotApplicable::NotBipartite);
    }
    let (x, y): (Vec<usize>, Vec<usize>) = (0..g.n()).partition(|&v| g.degree(v) == 2);
    if x.is_empty() {
        return Err(NotApplicable::NoDegreeTwoSide);
    }
    let Some(&first) = y.first() else {
        return Err(NotApplicable::NoOddSide);
    };
    let d = g.degree(first);
    if d < 3 || d.is_multiple_of(2) {
        return Err(NotApplicable::WrongDegree {
            vertex: first,
            degree: d,
            expected: "an odd degree >= 3".into(),
        });
    }
    if let Some(&v) = y.iter().find(|&&v| g.degree(v) != d) {
        return Err(NotApplicable::WrongDegree {
            vertex: v,
            degree: g.degree(v),
            expected: d.to_string(),
        });
    }
    if let Some((u, v)) = g
        .edges()
        .into_iter()
        .find(|&(u, v)| (g.degree(u) == 2) == (g.degree(v) == 2))
    {
        return Err(NotApplicable::SameSideEdge(u, v));
    }
    let bip = Bipartition {
        side_x: x.into_iter().collect(),
        side_y: y.into_iter().collect(),
    };
    Ok((bip, (d - 1) / 2))
}

/// Collapses each degree-2 vertex into an edge between its neighbors.
pub fn build_reduced(g: &Graph, bip: &Bipartition) -> ReducedMultigraph {
    let y_vertices: Vec<usize> = bip.side_y.iter().copied().collect();
    let index: HashMap<usize, usize> = y_vertices
        .iter()
        .enumerate()
        .map(|(i, &y)| (y, i))
        .collect();
    let mut edges = Vec::with_capacity(bip.side_x.len());
    let mut provenance = Vec::with_capacity(bip.side_x.len());
    for &x in &bip.side_x {
        let nbrs = g.neighbors(x);
        assert_eq!(nbrs.len(), 2, "vertex {x} on the degree-2 side");
        edges.push((index[&nbrs[0]], index[&nbrs[1]]));
        provenance.push(x);
    }
    let multigraph = MultiGraph::new(y_vertices.len(), edges);
    let expected = y_vertices.first().map_or(0, |&y| g.degree(y));
    assert_eq!(
        multigraph.regularity(),
        Some(expected),
        "collapsed multigraph is regular"
    );
    ReducedMultigraph {
        multigraph,
        y_vertices,
        provenance,
    }
}

/// Witness partition or bad-cycle certificate for a `(2, 2k+1)`-biregular
/// graph.
pub fn solve_biregular(g: &Graph) -> Result<BiregularOutcome, NotApplicable> {
    let (bip, k) = validate_2odd_biregular(g)?;
    let reduced = build_reduced(g, &bip);
    match reduced.multigraph.two_coloring() {
        Err(odd) => {
            let mut walk = Vec::with_capacity(2 * odd.steps.len());
            for &(from, e, _) in &odd.steps {
                walk.push(reduced.y_vertices[from]);
                walk.push(reduced.provenance[e]);
            }
            let cert = CycleCertificate {
                vertices: shorten_to_bad_cycle(walk, |v| bip.side_y.contains(&v)),
            };
            assert!(cert.verify(g), "lifted certificate must be a bad cycle");
            Ok(BiregularOutcome::Certificate(cert))
        }
        Ok(_) => {
            let factor =
                kk1_factor(&reduced.multigraph, k).expect("collapsed graph is (2k+1)-regular");
            let mut labels = vec![0u8; g.n()];
            for (e, &x) in reduced.provenance.iter().enumerate() {
                labels[x] = u8::from(factor.contains(e));
            }
            for comp in g.components() {
                let root = *comp
                    .iter()
                    .find(|v| bip.side_y.contains(v))
                    .expect("every component meets the odd side");
                let dist = bfs_distances(g, root);
                for &y in comp.iter().filter(|v| bip.side_y.contains(v)) {
                    let d = dist[y].expect("same component");
                    debug_assert_eq!(d % 2, 0);
                    labels[y] = u8::from(d.is_multiple_of(4));
                }
            }
            let p = TwoPartition::new(labels);
            let bad = check(g, &p, Mode::Open).expect("labels cover the graph");
            assert!(
                bad.is_empty(),
                "biregular witness failed the checker at {bad:?}"
            );
            Ok(BiregularOutcome::Witness(p))
        }
    }
}

/// Whether the graph has a cycle of length 2 mod 4.
pub fn has_bad_cycle(g: &Graph) -> Result<bool, NotApplicable> {
    let (bip, _) = validate_2odd_biregular(g)?;
    Ok(build_reduced(g, &bip).multigraph.two_coloring().is_err())
}

/// Shrinks a closed walk of length 2 mod 4 to a simple cycle of the same
/// residue.
///
/// The walk is a vertex sequence whose last vertex is adjacent to the first.
/// It must be the lift of an odd closed walk of the collapsed multigraph:
/// it alternates between `is_high` vertices and degree-2 vertices, and each
/// degree-2 vertex sits between its two distinct neighbors. Splitting at a
/// repeated high vertex yields two closed walks of even length summing to
/// 2 mod 4, so exactly one keeps the residue; that one is kept.
pub fn shorten_to_bad_cycle(mut walk: Vec<usize>, is_high: impl Fn(usize) -> bool) -> Vec<usize> {
    assert_eq!(walk.len() % 4, 2, "walk length must be 2 mod 4");
    loop {
        let mut first_seen: HashMap<usize, usize> = HashMap::new();
        let repeat = walk.iter().enumerate().find_map(|(j, &v)| {
            if !is_high(v) {
                return None;
            }
            first_seen.insert(v, j).map(|i| (i, j))
        });
        let Some((i, j)) = repeat else {
            return walk;
        };
        walk = if (j - i) % 4 == 2 {
            walk[i..j].to_vec()
        } else {
            let mut outer = walk[..i].to_vec();
            outer.extend_from_slice(&walk[j..]);
            outer
        };
        debug_assert_eq!(walk.len() % 4, 2);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::brute_force;

    fn theta(odd: usize) -> Graph {
        // two hubs joined by `odd` internally disjoint paths of length two
        Graph::complete_bipartite(2, odd)
    }

    #[test]
    fn validate_examples() {
        let (bip, k) = validate_2odd_biregular(&theta(3)).unwrap();
        assert_eq!(bip.side_x, BTreeSet::from([2, 3, 4]));
        assert_eq!(k, 1);

        assert_eq!(
            validate_2odd_biregular(&Graph::cycle(6)).unwrap_err(),
            NotApplicable::NoOddSide
        );
        let sub = Graph::complete(4).subdivide();
        let (bip, k) = validate_2odd_biregular(&sub).unwrap();
        assert_eq!(bip.side_x.len(), 6);
        assert_eq!(k, 1);

        assert_eq!(
            validate_2odd_biregular(&Graph::cycle(3)).unwrap_err(),
            NotApplicable::NotBipartite
        );
        assert!(matches!(
            validate_2odd_biregular(&Graph::complete_bipartite(2, 4)).unwrap_err(),
            NotApplicable::WrongDegree { degree: 4, .. }
        ));
        assert_eq!(
            validate_2odd_biregular(&Graph::empty(0)).unwrap_err(),
            NotApplicable::Empty
        );
        assert_eq!(
            validate_2odd_biregular(&Graph::complete_bipartite(3, 3)).unwrap_err(),
            NotApplicable::NoDegreeTwoSide
        );
    }

    #[test]
    fn reduced_examples() {
        let g = theta(3);
        let (bip, _) = validate_2odd_biregular(&g).unwrap();
        let r = build_reduced(&g, &bip);
        assert_eq!(r.multigraph.n(), 2);
        assert_eq!(r.multigraph.edges(), &[(0, 1); 3]);
        assert_eq!(r.provenance, vec![2, 3, 4]);

        let g = Graph::complete(4).subdivide();
        let (bip, _) = validate_2odd_biregular(&g).unwrap();
        let r = build_reduced(&g, &bip);
        let mut pairs: Vec<_> = r.multigraph.edges().to_vec();
        pairs.sort_unstable();
        assert_eq!(pairs, Graph::complete(4).edges());

        let g = theta(5);
        let (bip, k) = validate_2odd_biregular(&g).unwrap();
        assert_eq!(k, 2);
        assert_eq!(build_reduced(&g, &bip).multigraph.edges(), &[(0, 1); 5]);
    }

    #[test]
    fn theta_has_witness() {
        let g = theta(3);
        let BiregularOutcome::Witness(p) = solve_biregular(&g).unwrap() else {
            panic!("expected a witness");
        };
        // hub 0 at distance 0, hub 1 at distance 2
        assert_eq!(p.label(0), 1);
        assert_eq!(p.label(1), 0);
        let ones = (2..5).filter(|&x| p.label(x) == 1).count();
        assert!((1..=2).contains(&ones));
        assert!(brute_force(&g, Mode::Open).unwrap().is_sat());
        assert!(!has_bad_cycle(&g).unwrap());
    }

    #[test]
    fn subdivided_k4_has_certificate() {
        let g = Graph::complete(4).subdivide();
        let BiregularOutcome::Certificate(c) = solve_biregular(&g).unwrap() else {
            panic!("expected a certificate");
        };
        assert_eq!(c.vertices.len(), 6);
        assert!(c.verify(&g));
        assert!(has_bad_cycle(&g).unwrap());
        assert!(!brute_force(&g, Mode::Open).unwrap().is_sat());
    }

    #[test]
    fn subdivided_k33_has_witness() {
        let g = Graph::complete_bipartite(3, 3).subdivide();
        assert!(!has_bad_cycle(&g).unwrap());
        assert!(matches!(
            solve_biregular(&g).unwrap(),
            BiregularOutcome::Witness(_)
        ));
    }

    #[test]
    fn six_cycle_not_applicable() {
        assert!(solve_biregular(&Graph::cycle(6)).is_err());
        assert!(has_bad_cycle(&Graph::cycle(6)).is_err());
    }

    #[test]
    fn shortening_picks_the_bad_half() {
        // subdivided K4: hubs 0..4, subdivision vertex of hub pair (a, b)
        // is 4 + index in canonical edge order
        let g = Graph::complete(4).subdivide();
        let sub = |a: usize, b: usize| {
            4 + Graph::complete(4)
                .edges()
                .iter()
                .position(|&e| e == (a, b))
                .unwrap()
        };
        // triangle 0-1-2 preceded by a back-and-forth detour 0-3-0
        let walk = vec![
            0,
            sub(0, 3),
            3,
            sub(0, 3),
            0,
            sub(0, 1),
            1,
            sub(1, 2),
            2,
            sub(0, 2),
        ];
        let cyc = shorten_to_bad_cycle(walk, |v| v < 4);
        let cert = CycleCertificate { vertices: cyc };
        assert!(cert.verify(&g));
        assert_eq!(cert.vertices.len(), 6);
    }

    #[test]
    fn certificate_rejects_bad_input() {
        let g = Graph::cycle(6);
        assert!(CycleCertificate {
            vertices: (0..6).collect()
        }
        .verify(&g));
        assert!(!CycleCertificate {
            vertices: vec![0, 1, 2, 3, 4]
        }
        .verify(&g));
        assert!(!CycleCertificate {
            vertices: vec![0, 1, 0, 1, 0, 1]
        }
        .verify(&g));
        let g8 = Graph::cycle(8);
        assert!(!CycleCertificate {
            vertices: (0..8).collect()
        }
        .verify(&g8));
    }
}
