//! Exhaustive decision procedures at desk scale: existence of a k-block
//! conjugacy, 1-block size reduction, and hitting sets.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::block_map::BlockMap;
use crate::error::{Error, Result};
use crate::graph::{trace_powers, trim_to_essential, DirectedGraph};
use crate::shift::block_presentation;
use crate::verifier::verify;

/// Searches for a `k`-block conjugacy from the shift of `g` onto that of
/// `h`.
///
/// Candidate tables are built one block at a time and abandoned as soon as
/// an edge between two assigned blocks has no image edge, so only graph
/// homomorphisms `g^[k] -> h` are completed; each completed one is handed to
/// [`verify`]. The budget caps the number of partial assignments. The map
/// returned is the first accepted one in a fixed deterministic order and is
/// defined on the paths of the essential part of `g`.
pub fn decide_k_block_conjugacy(
    g: &DirectedGraph,
    h: &DirectedGraph,
    k: usize,
    budget: u64,
) -> Result<Option<BlockMap>> {
    if k == 0 {
        return Err(Error::InvalidCode("block size must be at least 1".into()));
    }
    let gt = trim_to_essential(g);
    let ht = trim_to_essential(h);
    if gt.is_empty() || ht.is_empty() {
        return Ok((gt.is_empty() && ht.is_empty()).then(|| BlockMap::new(k, 0).expect("k >= 1")));
    }
    // conjugate shifts have the same number of points of every period
    let n = gt.vertex_count().max(ht.vertex_count());
    if trace_powers(&gt, n) != trace_powers(&ht, n) {
        return Ok(None);
    }

    let pres = block_presentation(&gt, k);
    let lifted = &pres.graph;
    let order = bfs_order(lifted);
    let m = order.len();
    let mut assigned: Vec<Option<usize>> = vec![None; m];
    let mut cursor = vec![0usize; m];
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut nodes = 0u64;
    let mut depth = 0;
    candidates[0] = (0..ht.vertex_count()).collect();

    let to_map = |assigned: &[Option<usize>]| -> BlockMap {
        let mut map = BlockMap::new(k, 0).expect("k >= 1");
        for (b, img) in pres.blocks.iter().zip(assigned) {
            let word = b.iter().map(|&v| gt.name(v).to_string()).collect();
            map.insert(word, ht.name(img.expect("complete"))).expect("distinct blocks");
        }
        map
    };

    loop {
        let p = order[depth];
        // a stale value would be checked against itself through a loop
        assigned[p] = None;
        if cursor[depth] == candidates[depth].len() {
            cursor[depth] = 0;
            if depth == 0 {
                return Ok(None);
            }
            depth -= 1;
            continue;
        }
        let u = candidates[depth][cursor[depth]];
        cursor[depth] += 1;
        nodes += 1;
        if nodes > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let fits = lifted.successors(p).iter().all(|&q| assigned[q].map_or(true, |w| ht.has_edge(u, w)))
            && lifted.predecessors(p).iter().all(|&q| assigned[q].map_or(true, |w| ht.has_edge(w, u)))
            && (!lifted.has_edge(p, p) || ht.has_edge(u, u));
        if !fits {
            continue;
        }
        assigned[p] = Some(u);
        if depth + 1 == m {
            let onto = {
                let used: BTreeSet<usize> = assigned.iter().flatten().copied().collect();
                used.len() == ht.vertex_count()
            };
            if onto {
                let map = to_map(&assigned);
                if verify(&gt, &ht, &map).is_conjugacy {
                    return Ok(Some(map));
                }
            }
            assigned[p] = None;
            continue;
        }
        depth += 1;
        let next = order[depth];
        // restrict to neighbours of an assigned predecessor when there is one
        candidates[depth] = match lifted.predecessors(next).iter().find_map(|&q| assigned[q]) {
            Some(w) => ht.successors(w).to_vec(),
            None => match lifted.successors(next).iter().find_map(|&q| assigned[q]) {
                Some(w) => ht.predecessors(w).to_vec(),
                None => (0..ht.vertex_count()).collect(),
            },
        };
        cursor[depth] = 0;
    }
}

/// Vertices in breadth-first order over edges of either direction, so that
/// every vertex after the first of its weak component has an earlier
/// neighbour.
fn bfs_order(g: &DirectedGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.successors(v).iter().chain(g.predecessors(v)) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// Calls `visit` on every restricted growth string of length `n` with
/// exactly `blocks` distinct values, in lexicographic order, until it
/// returns `true`.
pub fn for_each_partition(
    n: usize,
    blocks: usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
) -> Result<bool> {
    fn go(
        rgs: &mut Vec<usize>,
        used: usize,
        n: usize,
        blocks: usize,
        visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        let i = rgs.len();
        if i == n {
            return if used == blocks { visit(rgs) } else { Ok(false) };
        }
        // enough positions left to open the missing blocks
        for c in 0..=used.min(blocks - 1) {
            let used2 = used.max(c + 1);
            if used2 + (n - i - 1) < blocks {
                continue;
            }
            rgs.push(c);
            let stop = go(rgs, used2, n, blocks, visit)?;
            rgs.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
    if blocks == 0 {
        return if n == 0 { visit(&[]) } else { Ok(false) };
    }
    go(&mut Vec::with_capacity(n), 0, n, blocks, visit)
}

/// The quotient of `g` by a partition given as block ids per vertex: one
/// vertex per block, named by its members joined with `+`, and an edge
/// wherever some member edge exists. Returns the graph and the map.
pub fn minimal_image_graph(g: &DirectedGraph, block_of: &[usize]) -> (DirectedGraph, BlockMap) {
    let count = block_of.iter().copied().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<&str>> = vec![Vec::new(); count];
    for (v, &b) in block_of.iter().enumerate() {
        members[b].push(g.name(v));
    }
    let names: Vec<String> = members.iter().map(|m| m.join("+")).collect();
    let mut image = DirectedGraph::new();
    for name in &names {
        image.add_vertex(name.clone()).expect("blocks are disjoint");
    }
    for (x, y) in g.edges() {
        image.insert_edge(block_of[x], block_of[y]);
    }
    let phi = BlockMap::one_block((0..g.vertex_count()).map(|v| (g.name(v), names[block_of[v]].as_str())))
        .expect("distinct vertices");
    (image, phi)
}

/// Looks for a 1-block conjugacy from `g` onto a graph with `|V_g| - ell`
/// vertices by trying every partition of the vertices into that many blocks
/// (lexicographic in restricted growth strings) and its minimal image
/// graph. The budget caps the number of partitions tried.
pub fn search_one_block_reduction(
    g: &DirectedGraph,
    ell: usize,
    budget: u64,
) -> Result<Option<(BlockMap, DirectedGraph)>> {
    let n = g.vertex_count();
    if ell > n {
        return Ok(None);
    }
    let mut tried = 0u64;
    let mut found = None;
    for_each_partition(n, n - ell, &mut |rgs| {
        tried += 1;
        if tried > budget {
            return Err(Error::BudgetExceeded { budget });
        }
        let (image, phi) = minimal_image_graph(g, rgs);
        if verify(g, &image, &phi).is_conjugacy {
            found = Some((phi, image));
            return Ok(true);
        }
        Ok(false)
    })?;
    Ok(found)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HittingSetInstance {
    pub sets: Vec<Vec<String>>,
    pub universe: Vec<String>,
    pub t: usize,
}

impl HittingSetInstance {
    pub fn new<S: AsRef<str>>(sets: &[&[S]], universe: &[S], t: usize) -> Result<Self> {
        let inst = Self {
            sets: sets.iter().map(|s| s.iter().map(|x| x.as_ref().to_string()).collect()).collect(),
            universe: universe.iter().map(|x| x.as_ref().to_string()).collect(),
            t,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: Self = serde_json::from_str(text)?;
        inst.validate()?;
        Ok(inst)
    }

    /// Universe elements distinct, every set element in the universe, no
    /// repeated elements within a set.
    pub fn validate(&self) -> Result<()> {
        let universe: BTreeSet<&str> = self.universe.iter().map(String::as_str).collect();
        if universe.len() != self.universe.len() {
            return Err(Error::Contract("universe has repeated elements".into()));
        }
        for (i, set) in self.sets.iter().enumerate() {
            let distinct: BTreeSet<&str> = set.iter().map(String::as_str).collect();
            if distinct.len() != set.len() {
                return Err(Error::Contract(format!("set {i} has repeated elements")));
            }
            if let Some(x) = set.iter().find(|x| !universe.contains(x.as_str())) {
                return Err(Error::Contract(format!("set {i} element `{x}` is not in the universe")));
            }
        }
        Ok(())
    }

    pub fn is_hitting_set(&self, candidate: &[String]) -> bool {
        self.sets.iter().all(|s| s.iter().any(|x| candidate.contains(x)))
    }
}

/// A smallest hitting set of size at most `t`, trying sizes in increasing
/// order and subsets in lexicographic order of universe positions.
pub fn hitting_set_brute(instance: &HittingSetInstance) -> Option<Vec<String>> {
    let n = instance.universe.len();
    for size in 0..=instance.t.min(n) {
        let mut pick: Vec<usize> = (0..size).collect();
        loop {
            let candidate: Vec<String> = pick.iter().map(|&i| instance.universe[i].clone()).collect();
            if instance.is_hitting_set(&candidate) {
                return Some(candidate);
            }
            // next combination
            let Some(i) = (0..size).rev().find(|&i| pick[i] < n - size + i) else { break };
            pick[i] += 1;
            for j in i + 1..size {
                pick[j] = pick[j - 1] + 1;
            }
        }
    }
    None
}
