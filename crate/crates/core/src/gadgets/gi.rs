use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

/// A simple undirected graph; only used as input to the isomorphism
/// reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UndirectedGraph {
    names: Vec<String>,
    edges: BTreeSet<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        Self { names: (0..n).map(|i| format!("v{i}")).collect(), edges: BTreeSet::new() }
    }

    pub fn from_edges<V: AsRef<str>>(vertices: &[V], edges: &[(V, V)]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let distinct: BTreeSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::Gadget("repeated vertex name".into()));
        }
        let mut g = Self { names, edges: BTreeSet::new() };
        for (u, v) in edges {
            let find = |s: &str| {
                g.names
                    .iter()
                    .position(|n| n == s)
                    .ok_or_else(|| Error::UnknownVertex(s.to_string()))
            };
            let (u, v) = (find(u.as_ref())?, find(v.as_ref())?);
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::Gadget("undirected graphs here have no self-loops".into()));
        }
        assert!(u < self.names.len() && v < self.names.len(), "edge endpoint out of range");
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for w in 0..n {
                if !seen[w] && self.has_edge(v, w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Both orientations of every edge.
    pub fn doubled(&self) -> DirectedGraph {
        let mut d = DirectedGraph::new();
        for n in &self.names {
            d.add_vertex(n.clone()).expect("distinct names");
        }
        for (u, v) in self.edges() {
            d.insert_edge(u, v);
            d.insert_edge(v, u);
        }
        d
    }
}

/// Doubles both graphs; for connected inputs of equal size the doubled
/// vertex shifts admit a 1-block conjugacy iff the graphs are isomorphic.
pub fn gi_to_digraphs(g1: &UndirectedGraph, g2: &UndirectedGraph) -> Result<(DirectedGraph, DirectedGraph)> {
    for (i, g) in [g1, g2].into_iter().enumerate() {
        if !g.is_connected() {
            return Err(Error::Gadget(format!("graph {} is not connected", i + 1)));
        }
    }
    Ok((g1.doubled(), g2.doubled()))
}

/// A vertex bijection `p` with `{u, v}` an edge of `g1` iff `{p[u], p[v]}`
/// is an edge of `g2`, by backtracking with degree pruning.
pub fn find_isomorphism(g1: &UndirectedGraph, g2: &UndirectedGraph) -> Option<Vec<usize>> {
    let n = g1.vertex_count();
    if n != g2.vertex_count() || g1.edges.len() != g2.edges.len() {
        return None;
    }
    let d1: Vec<usize> = (0..n).map(|v| g1.degree(v)).collect();
    let d2: Vec<usize> = (0..n).map(|v| g2.degree(v)).collect();
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];

    fn extend(
        g1: &UndirectedGraph,
        g2: &UndirectedGraph,
        d1: &[usize],
        d2: &[usize],
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let v = map.len();
        if v == d1.len() {
            return true;
        }
        for w in 0..d1.len() {
            if used[w] || d1[v] != d2[w] {
                continue;
            }
            if (0..v).any(|u| g1.has_edge(u, v) != g2.has_edge(map[u], w)) {
                continue;
            }
            used[w] = true;
            map.push(w);
            if extend(g1, g2, d1, d2, map, used) {
                return true;
            }
            map.pop();
            used[w] = false;
        }
        false
    }

    extend(g1, g2, &d1, &d2, &mut map, &mut used).then_some(map)
}
