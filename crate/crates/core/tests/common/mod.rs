#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use sftconj::graph::is_essential;
use sftconj::search::minimal_image_graph;
use sftconj::{BlockMap, DirectedGraph};

pub fn graph(vertices: &[&str], edges: &[(&str, &str)]) -> DirectedGraph {
    DirectedGraph::from_edges(vertices, edges).unwrap()
}

pub fn collapse_example() -> (DirectedGraph, DirectedGraph, BlockMap) {
    let g = graph(
        &["a", "b", "c", "d", "e"],
        &[("a", "b"), ("b", "a"), ("a", "c"), ("c", "d"), ("d", "e"), ("e", "a"), ("c", "b"), ("e", "e")],
    );
    let h = graph(&["a", "b"], &[("a", "b"), ("b", "a"), ("b", "b")]);
    let phi = BlockMap::one_block([("a", "a"), ("b", "b"), ("c", "b"), ("d", "b"), ("e", "b")]).unwrap();
    (g, h, phi)
}

/// The six-vertex core `a -> f -> {c -> b, e -> d} -> a` shared by both
/// reducible examples.
const CORE: [(&str, &str); 7] = [("a", "f"), ("f", "c"), ("c", "b"), ("b", "a"), ("f", "e"), ("e", "d"), ("d", "a")];

pub fn unreached_example() -> (DirectedGraph, DirectedGraph, BlockMap) {
    let mut edges = CORE.to_vec();
    edges.extend([("g", "g"), ("d", "g")]);
    let g = graph(&["a", "b", "c", "d", "e", "f", "g"], &edges);
    let h = graph(
        &["a", "bd", "c", "e", "f", "g"],
        &[("a", "f"), ("f", "c"), ("f", "e"), ("c", "bd"), ("e", "bd"), ("bd", "a"), ("g", "g"), ("bd", "g")],
    );
    let phi = BlockMap::one_block([
        ("a", "a"),
        ("b", "bd"),
        ("c", "c"),
        ("d", "bd"),
        ("e", "e"),
        ("f", "f"),
        ("g", "g"),
    ])
    .unwrap();
    (g, h, phi)
}

pub fn diamond_example() -> (DirectedGraph, DirectedGraph, BlockMap) {
    let mut edges = CORE.to_vec();
    edges.extend([("g", "g"), ("c", "g"), ("e", "g")]);
    let g = graph(&["a", "b", "c", "d", "e", "f", "g"], &edges);
    let h = graph(
        &["a", "b", "ce", "d", "f", "g"],
        &[("a", "f"), ("f", "ce"), ("ce", "b"), ("ce", "d"), ("b", "a"), ("d", "a"), ("g", "g"), ("ce", "g")],
    );
    let phi = BlockMap::one_block([
        ("a", "a"),
        ("b", "b"),
        ("c", "ce"),
        ("d", "d"),
        ("e", "ce"),
        ("f", "f"),
        ("g", "g"),
    ])
    .unwrap();
    (g, h, phi)
}

/// Vertices `v0..v{n-1}`; bit `u * n + v` of `mask` is the edge `u -> v`.
pub fn from_mask(n: usize, mask: u32, prefix: &str) -> DirectedGraph {
    let mut g = DirectedGraph::new();
    for i in 0..n {
        g.add_vertex(format!("{prefix}{i}")).unwrap();
    }
    for u in 0..n {
        for v in 0..n {
            if mask >> (u * n + v) & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn canonical(n: usize, mask: u32, perms: &[Vec<usize>]) -> u32 {
    perms
        .iter()
        .map(|p| {
            let mut m = 0u32;
            for u in 0..n {
                for v in 0..n {
                    if mask >> (u * n + v) & 1 == 1 {
                        m |= 1 << (p[u] * n + p[v]);
                    }
                }
            }
            m
        })
        .min()
        .unwrap()
}

/// One adjacency mask per isomorphism class of essential graphs on exactly
/// `n` vertices (the least mask of the class).
pub fn essential_classes(n: usize) -> Vec<u32> {
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    for mask in 0..(1u32 << (n * n)) {
        if !is_essential(&from_mask(n, mask, "v")) {
            continue;
        }
        seen.insert(canonical(n, mask, &perms));
    }
    seen.into_iter().collect()
}

/// Every vertex map from `g` to `h` as a 1-block code.
pub fn all_maps(g: &DirectedGraph, h: &DirectedGraph) -> Vec<BlockMap> {
    let (n, m) = (g.vertex_count(), h.vertex_count());
    let total = m.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut pairs = Vec::with_capacity(n);
            for v in 0..n {
                pairs.push((g.name(v).to_string(), h.name(code % m).to_string()));
                code /= m;
            }
            BlockMap::one_block(pairs).unwrap()
        })
        .collect()
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64, prefix: &str) -> DirectedGraph {
    let mut g = DirectedGraph::new();
    for i in 0..n {
        g.add_vertex(format!("{prefix}{i}")).unwrap();
    }
    for u in 0..n {
        for v in 0..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// A random essential graph on exactly `n` vertices.
pub fn random_essential(rng: &mut ChaCha8Rng, n: usize, p: f64) -> DirectedGraph {
    loop {
        let g = random_graph(rng, n, p, "v");
        if is_essential(&g) {
            return g;
        }
    }
}

/// A random irreducible graph: a Hamiltonian cycle in shuffled order plus
/// about `extra` random chords.
pub fn random_irreducible(rng: &mut ChaCha8Rng, n: usize, extra: usize) -> DirectedGraph {
    let mut g = DirectedGraph::new();
    for i in 0..n {
        g.add_vertex(format!("v{i}")).unwrap();
    }
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for i in 0..n {
        g.insert_edge(order[i], order[(i + 1) % n]);
    }
    for _ in 0..extra {
        g.insert_edge(rng.gen_range(0..n), rng.gen_range(0..n));
    }
    g
}

/// A random partition of `0..n` into at most `blocks` classes and the
/// resulting onto 1-block code.
pub fn random_quotient(rng: &mut ChaCha8Rng, g: &DirectedGraph, blocks: usize) -> (DirectedGraph, BlockMap) {
    let n = g.vertex_count();
    let mut block_of: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    // relabel to a restricted growth string
    let mut seen = Vec::new();
    for b in block_of.iter_mut() {
        let pos = seen.iter().position(|x| x == b).unwrap_or_else(|| {
            seen.push(*b);
            seen.len() - 1
        });
        *b = pos;
    }
    minimal_image_graph(g, &block_of)
}
