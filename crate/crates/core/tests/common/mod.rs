//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use lb2p_core::graph::{Graph, MultiGraph};
use lb2p_core::reduction::NaeInstance;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Erdos-Renyi graph: each pair is an edge with probability `p`.
pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// `r`-regular loopless multigraph on `n` vertices from the configuration
/// model, resampled until no loop appears. `n * r` must be even.
pub fn random_regular_multigraph(rng: &mut impl Rng, n: usize, r: usize) -> MultiGraph {
    assert!((n * r).is_multiple_of(2) && n >= 2);
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, r)).collect();
        stubs.shuffle(rng);
        let edges: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
        if edges.iter().all(|&(u, v)| u != v) {
            return MultiGraph::new(n, edges);
        }
    }
}

/// Simple graph whose vertices `0..m.n()` are those of `m` and where edge
/// `i` of `m` becomes the path through the new vertex `m.n() + i`.
pub fn subdivide_multigraph(m: &MultiGraph) -> Graph {
    let n = m.n();
    let edges: Vec<(usize, usize)> = m
        .edges()
        .iter()
        .enumerate()
        .flat_map(|(i, &(u, v))| [(u, n + i), (v, n + i)])
        .collect();
    Graph::from_edges(n + m.edges().len(), &edges).unwrap()
}

/// A `(2, d)`-biregular graph: the subdivision of a random `d`-regular
/// multigraph on `y` vertices.
pub fn random_biregular(rng: &mut impl Rng, y: usize, d: usize) -> Graph {
    subdivide_multigraph(&random_regular_multigraph(rng, y, d))
}

/// Random valid instance: every variable's four occurrences are shuffled
/// into clauses, resampling until no clause repeats a variable.
pub fn random_instance(rng: &mut impl Rng, n: usize) -> NaeInstance {
    assert_eq!(n % 3, 0);
    loop {
        let mut occ: Vec<usize> = (0..n).flat_map(|x| [x; 4]).collect();
        occ.shuffle(rng);
        let clauses: Vec<[usize; 3]> = occ.chunks(3).map(|c| [c[0], c[1], c[2]]).collect();
        if let Ok(inst) = NaeInstance::new(n, clauses) {
            return inst;
        }
    }
}

/// Every valid instance on `n` variables, as a multiset of clauses listed in
/// increasing order of their sorted variable triples.
pub fn all_instances(n: usize) -> Vec<NaeInstance> {
    if !n.is_multiple_of(3) {
        return Vec::new();
    }
    let k = 4 * n / 3;
    let mut triples = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                triples.push([a, b, c]);
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k);
    let mut count = vec![0usize; n];
    fn rec(
        start: usize,
        k: usize,
        triples: &[[usize; 3]],
        chosen: &mut Vec<[usize; 3]>,
        count: &mut [usize],
        out: &mut Vec<NaeInstance>,
    ) {
        if chosen.len() == k {
            out.push(NaeInstance::new(count.len(), chosen.clone()).unwrap());
            return;
        }
        for i in start..triples.len() {
            let t = triples[i];
            if t.iter().any(|&x| count[x] == 4) {
                continue;
            }
            // the lowest variable still short of four occurrences must be
            // covered by this or a later triple; triples are sorted by their
            // first element, so once it is passed it can never be covered
            if let Some(low) = count.iter().position(|&c| c < 4) {
                if t[0] > low {
                    break;
                }
            }
            for &x in &t {
                count[x] += 1;
            }
            chosen.push(t);
            rec(i, k, triples, chosen, count, out);
            chosen.pop();
            for &x in &t {
                count[x] -= 1;
            }
        }
    }
    rec(0, k, &triples, &mut chosen, &mut count, &mut out);
    out
}
