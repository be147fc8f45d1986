//! Graph presentations of vertex and edge shifts, and the structural
//! primitives the verification pipeline is built from.
//!
//! Vertices are addressed by dense indices in insertion order. Every place
//! where an algorithm is free to pick "some" vertex resolves to the least
//! index, so all results are reproducible.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A directed graph without parallel edges; presents the vertex shift of its
/// bi-infinite walks.
#[derive(Clone, Debug, Default)]
pub struct DirectedGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.succ == other.succ
    }
}

impl Eq for DirectedGraph {}

impl DirectedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex names and named edges.
    pub fn from_edges<V, E>(vertices: &[V], edges: &[(E, E)]) -> Result<Self>
    where
        V: AsRef<str>,
        E: AsRef<str>,
    {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (u, v) in edges {
            let u = g.vertex(u.as_ref())?;
            let v = g.vertex(v.as_ref())?;
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateVertex(name));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        self.succ.push(Vec::new());
        self.pred.push(Vec::new());
        Ok(id)
    }

    /// Adds `u -> v`, failing if the edge is already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if !self.insert_edge(u, v) {
            return Err(Error::DuplicateEdge(
                self.names[u].clone(),
                self.names[v].clone(),
            ));
        }
        Ok(())
    }

    /// Adds `u -> v` if absent; returns whether the edge was new.
    pub fn insert_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u < self.names.len() && v < self.names.len(), "edge endpoint out of range");
        match self.succ[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.succ[u].insert(pos, v);
                let pos = self.pred[v].binary_search(&u).unwrap_err();
                self.pred[v].insert(pos, u);
                true
            }
        }
    }

    pub fn add_edge_by_name(&mut self, u: &str, v: &str) -> Result<()> {
        let (u, v) = (self.vertex(u)?, self.vertex(v)?);
        self.add_edge(u, v)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Like [`index_of`](Self::index_of) but reports unknown names as errors.
    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// Out-neighbours, sorted ascending.
    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    /// In-neighbours, sorted ascending.
    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn adjacency(&self) -> &[Vec<usize>] {
        &self.succ
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.succ[u].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(u, out)| out.iter().map(move |&v| (u, v)))
    }

    pub fn edge_names(&self) -> Vec<(String, String)> {
        self.edges()
            .map(|(u, v)| (self.names[u].clone(), self.names[v].clone()))
            .collect()
    }

    /// The subgraph induced by the vertices with `keep[v]`, in the original
    /// relative order, together with the old index of every new vertex.
    pub fn induced_subgraph(&self, keep: &[bool]) -> (DirectedGraph, Vec<usize>) {
        let kept: Vec<usize> = (0..self.vertex_count()).filter(|&v| keep[v]).collect();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        let mut sub = DirectedGraph::new();
        for &v in &kept {
            new_id[v] = sub
                .add_vertex(self.names[v].clone())
                .expect("names are unique");
        }
        for &u in &kept {
            for &v in &self.succ[u] {
                if keep[v] {
                    sub.insert_edge(new_id[u], new_id[v]);
                }
            }
        }
        (sub, kept)
    }
}

/// A directed multigraph with uniquely labelled edges; presents the edge
/// shift of its bi-infinite walks, read as label sequences.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiGraph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<LabeledEdge>,
    labels: HashMap<String, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledEdge {
    pub label: String,
    pub source: usize,
    pub target: usize,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<V, E>(vertices: &[V], edges: &[(E, E, E)]) -> Result<Self>
    where
        V: AsRef<str>,
        E: AsRef<str>,
    {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (label, u, v) in edges {
            let u = g.vertex(u.as_ref())?;
            let v = g.vertex(v.as_ref())?;
            g.add_edge(label.as_ref(), u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, name: impl Into<String>) -> Result<usize> {
        let name = name.into();
        if self.index.contains_key(&name) {
            return Err(Error::DuplicateVertex(name));
        }
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        Ok(id)
    }

    pub fn add_edge(&mut self, label: impl Into<String>, source: usize, target: usize) -> Result<usize> {
        let label = label.into();
        assert!(source < self.names.len() && target < self.names.len(), "edge endpoint out of range");
        if self.labels.contains_key(&label) {
            return Err(Error::DuplicateLabel(label));
        }
        let id = self.edges.len();
        self.labels.insert(label.clone(), id);
        self.edges.push(LabeledEdge { label, source, target });
        Ok(id)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn edges(&self) -> &[LabeledEdge] {
        &self.edges
    }

    pub fn edge_by_label(&self, label: &str) -> Option<&LabeledEdge> {
        self.labels.get(label).map(|&i| &self.edges[i])
    }

    /// Entry `(u, v)` counts the parallel edges from `u` to `v`.
    pub fn adjacency_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.vertex_count();
        let mut a = vec![vec![0u64; n]; n];
        for e in &self.edges {
            a[e.source][e.target] += 1;
        }
        a
    }
}

/// Anything with a nonnegative integer adjacency matrix.
pub trait CountingAdjacency {
    fn vertex_count(&self) -> usize;
    /// `(target, multiplicity)` lists per vertex, multiplicities nonzero.
    fn weighted_successors(&self) -> Vec<Vec<(usize, u64)>>;
}

impl CountingAdjacency for DirectedGraph {
    fn vertex_count(&self) -> usize {
        self.names.len()
    }

    fn weighted_successors(&self) -> Vec<Vec<(usize, u64)>> {
        self.succ
            .iter()
            .map(|out| out.iter().map(|&v| (v, 1)).collect())
            .collect()
    }
}

impl CountingAdjacency for MultiGraph {
    fn vertex_count(&self) -> usize {
        self.names.len()
    }

    fn weighted_successors(&self) -> Vec<Vec<(usize, u64)>> {
        self.adjacency_matrix()
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .enumerate()
                    .filter(|&(_, c)| c > 0)
                    .collect()
            })
            .collect()
    }
}

/// Exact traces `tr(A^1), ..., tr(A^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceSequence {
    values: Vec<BigUint>,
}

impl TraceSequence {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `tr(A^power)`, 1-based.
    pub fn get(&self, power: usize) -> &BigUint {
        &self.values[power - 1]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    /// The least power at which the two sequences differ, over their common
    /// length.
    pub fn first_difference(&self, other: &TraceSequence) -> Option<usize> {
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| a != b)
            .map(|i| i + 1)
    }
}

/// Strongly connected components of an adjacency list, in reverse
/// topological order of the condensation; members of each component are
/// sorted. Iterative Tarjan.
pub fn components_of(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut frames: Vec<(usize, usize)> = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        frames.push((root, 0));

        while let Some(top) = frames.len().checked_sub(1) {
            let (v, pos) = frames[top];
            if pos < adj[v].len() {
                frames[top].1 += 1;
                let w = adj[v][pos];
                if index[w] == UNVISITED {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Component id per vertex for a list of components.
pub(crate) fn component_ids(n: usize, comps: &[Vec<usize>]) -> Vec<usize> {
    let mut id = vec![0; n];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            id[v] = c;
        }
    }
    id
}

/// Whether a component carries at least one edge (and so at least one cycle).
pub(crate) fn component_has_edge(adj: &[Vec<usize>], comp: &[usize]) -> bool {
    comp.len() > 1 || adj[comp[0]].contains(&comp[0])
}

/// Vertices that survive iterated removal of stranded vertices.
pub fn essential_mask(g: &DirectedGraph) -> Vec<bool> {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut indeg: Vec<usize> = (0..n).map(|v| g.predecessors(v).len()).collect();
    let mut outdeg: Vec<usize> = (0..n).map(|v| g.successors(v).len()).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0 || outdeg[v] == 0).collect();
    for &v in &queue {
        alive[v] = false;
    }
    while let Some(v) = queue.pop_front() {
        for &w in g.successors(v) {
            if alive[w] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    alive[w] = false;
                    queue.push_back(w);
                }
            }
        }
        for &u in g.predecessors(v) {
            if alive[u] {
                outdeg[u] -= 1;
                if outdeg[u] == 0 {
                    alive[u] = false;
                    queue.push_back(u);
                }
            }
        }
    }
    alive
}

pub fn is_essential(g: &DirectedGraph) -> bool {
    (0..g.vertex_count()).all(|v| !g.successors(v).is_empty() && !g.predecessors(v).is_empty())
}

/// The maximal essential subgraph; presents the same shift.
pub fn trim_to_essential(g: &DirectedGraph) -> DirectedGraph {
    g.induced_subgraph(&essential_mask(g)).0
}

pub fn strongly_connected_components(g: &DirectedGraph) -> Vec<Vec<usize>> {
    components_of(g.adjacency())
}

/// Essential, strongly connected and nonempty.
pub fn is_irreducible(g: &DirectedGraph) -> bool {
    !g.is_empty() && is_essential(g) && strongly_connected_components(g).len() == 1
}

/// A shortest cycle `v = c[0], c[1], ...` through `v` (closing edge from the
/// last vertex back to `v` implicit). BFS visits successors in ascending
/// order, so ties go to the lexicographically least cycle.
pub fn shortest_cycle_through(g: &DirectedGraph, v: usize) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([v]);
    seen[v] = true;
    while let Some(u) = queue.pop_front() {
        if g.has_edge(u, v) {
            let mut cycle = vec![u];
            let mut x = u;
            while x != v {
                x = parent[x];
                cycle.push(x);
            }
            cycle.reverse();
            return Some(cycle);
        }
        for &w in g.successors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

pub fn reverse_edges(g: &DirectedGraph) -> DirectedGraph {
    DirectedGraph {
        names: g.names.clone(),
        index: g.index.clone(),
        succ: g.pred.clone(),
        pred: g.succ.clone(),
    }
}

/// Exact `tr(A^i)` for `i = 1..=n`.
///
/// Counts closed walks one start vertex at a time, walking only inside the
/// start's strongly connected component (a closed walk never leaves it).
pub fn trace_powers<G: CountingAdjacency + ?Sized>(g: &G, n: usize) -> TraceSequence {
    assert!(n >= 1, "trace_powers needs n >= 1");
    let succ = g.weighted_successors();
    let plain: Vec<Vec<usize>> = succ
        .iter()
        .map(|out| out.iter().map(|&(v, _)| v).collect())
        .collect();
    let comps = components_of(&plain);
    let comp_id = component_ids(plain.len(), &comps);
    let starts: Vec<usize> = comps
        .iter()
        .filter(|c| component_has_edge(&plain, c))
        .flatten()
        .copied()
        .collect();

    let zero = || vec![BigUint::zero(); n];
    let values = starts
        .par_iter()
        .map(|&s| closed_walks_from(&succ, &comp_id, s, n))
        .reduce(zero, |mut acc, part| {
            for (a, p) in acc.iter_mut().zip(part) {
                *a += p;
            }
            acc
        });
    TraceSequence { values }
}

fn closed_walks_from(succ: &[Vec<(usize, u64)>], comp_id: &[usize], s: usize, n: usize) -> Vec<BigUint> {
    let members: Vec<usize> = (0..succ.len()).filter(|&v| comp_id[v] == comp_id[s]).collect();
    let mut cur = vec![BigUint::zero(); succ.len()];
    let mut next = cur.clone();
    cur[s] = BigUint::one();
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        for &u in &members {
            if cur[u].is_zero() {
                continue;
            }
            for &(w, mult) in &succ[u] {
                if comp_id[w] != comp_id[s] {
                    continue;
                }
                if mult == 1 {
                    next[w] += &cur[u];
                } else {
                    next[w] += &cur[u] * mult;
                }
            }
        }
        for &u in &members {
            cur[u].set_zero();
        }
        std::mem::swap(&mut cur, &mut next);
        out.push(cur[s].clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vertices: &[&str], edges: &[(&str, &str)]) -> DirectedGraph {
        DirectedGraph::from_edges(vertices, edges).unwrap()
    }

    fn names(g: &DirectedGraph, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| g.name(v).to_string()).collect()
    }

    fn unreached_source() -> DirectedGraph {
        graph(
            &["a", "b", "c", "d", "e", "f", "g"],
            &[
                ("a", "f"),
                ("f", "c"),
                ("f", "e"),
                ("c", "b"),
                ("e", "d"),
                ("b", "a"),
                ("d", "a"),
                ("d", "g"),
                ("g", "g"),
            ],
        )
    }

    fn collapse_source() -> DirectedGraph {
        graph(
            &["a", "b", "c", "d", "e"],
            &[
                ("a", "b"),
                ("b", "a"),
                ("a", "c"),
                ("c", "d"),
                ("d", "e"),
                ("e", "a"),
                ("c", "b"),
                ("e", "e"),
            ],
        )
    }

    #[test]
    fn duplicate_edges_and_vertices_are_rejected() {
        let mut g = graph(&["a", "b"], &[("a", "b")]);
        assert!(matches!(g.add_edge(0, 1), Err(Error::DuplicateEdge(..))));
        assert!(matches!(g.add_vertex("a"), Err(Error::DuplicateVertex(_))));
        assert!(matches!(
            DirectedGraph::from_edges(&["a"], &[("a", "z")]),
            Err(Error::UnknownVertex(_))
        ));
    }

    #[test]
    fn trim_removes_dangling_parts() {
        let g = collapse_source();
        assert_eq!(trim_to_essential(&g), g);

        let path = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        assert!(trim_to_essential(&path).is_empty());

        let mut with_sink = collapse_source();
        let x = with_sink.add_vertex("x").unwrap();
        with_sink.add_edge(0, x).unwrap();
        assert_eq!(trim_to_essential(&with_sink), collapse_source());
    }

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&collapse_source()));
        assert!(!is_irreducible(&unreached_source()));
        assert!(is_irreducible(&graph(&["v"], &[("v", "v")])));
        assert!(!is_irreducible(&graph(&["v"], &[])));
        assert!(!is_irreducible(&DirectedGraph::new()));
    }

    #[test]
    fn scc_order_is_reverse_topological() {
        let two = graph(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert_eq!(strongly_connected_components(&two), vec![vec![0, 1]]);

        let chain = graph(&["a", "b"], &[("a", "b")]);
        assert_eq!(strongly_connected_components(&chain), vec![vec![1], vec![0]]);

        let g = unreached_source();
        let comps = strongly_connected_components(&g);
        assert_eq!(comps, vec![vec![6], vec![0, 1, 2, 3, 4, 5]]);
    }

    #[test]
    fn shortest_cycles() {
        let lp = graph(&["v"], &[("v", "v")]);
        assert_eq!(shortest_cycle_through(&lp, 0), Some(vec![0]));

        let two = graph(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert_eq!(shortest_cycle_through(&two, 0), Some(vec![0, 1]));

        let g = unreached_source();
        let c = shortest_cycle_through(&g, 0).unwrap();
        assert_eq!(names(&g, &c), ["a", "f", "c", "b"]);

        let path = graph(&["a", "b"], &[("a", "b")]);
        assert_eq!(shortest_cycle_through(&path, 0), None);
    }

    #[test]
    fn traces_of_small_graphs() {
        let lp = graph(&["v"], &[("v", "v")]);
        let t = trace_powers(&lp, 5);
        assert!(t.values().iter().all(|x| *x == BigUint::one()));

        let golden = graph(&["a", "b"], &[("a", "b"), ("b", "a"), ("b", "b")]);
        let expected: Vec<BigUint> = [1u32, 3, 4, 7, 11].iter().map(|&x| x.into()).collect();
        assert_eq!(trace_powers(&golden, 5).values(), expected.as_slice());
        assert_eq!(trace_powers(&collapse_source(), 5).values(), expected.as_slice());
    }

    #[test]
    fn traces_do_not_overflow() {
        // full shift on 3 symbols: tr(A^i) = 3^i
        let g = graph(
            &["a", "b", "c"],
            &[
                ("a", "a"),
                ("a", "b"),
                ("a", "c"),
                ("b", "a"),
                ("b", "b"),
                ("b", "c"),
                ("c", "a"),
                ("c", "b"),
                ("c", "c"),
            ],
        );
        let t = trace_powers(&g, 90);
        assert_eq!(*t.get(90), BigUint::from(3u32).pow(90));
    }

    #[test]
    fn multigraph_traces_use_multiplicities() {
        let g = MultiGraph::from_edges(&["a"], &[("e", "a", "a"), ("f", "a", "a")]).unwrap();
        let t = trace_powers(&g, 4);
        assert_eq!(*t.get(4), BigUint::from(16u32));
        assert!(matches!(
            MultiGraph::from_edges(&["a"], &[("e", "a", "a"), ("e", "a", "a")]),
            Err(Error::DuplicateLabel(_))
        ));
    }

    #[test]
    fn reversal() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let r = reverse_edges(&g);
        assert!(r.has_edge(1, 0) && !r.has_edge(0, 1));
        assert_eq!(reverse_edges(&r), g);
        let lp = graph(&["v"], &[("v", "v")]);
        assert_eq!(reverse_edges(&lp), lp);
    }
}
