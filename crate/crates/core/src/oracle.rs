//! An independent, exponential-time conjugacy check for small instances.
//!
//! Injectivity: a 1-block code on an essential graph is injective on points
//! iff every pair `(x, y)` with equal image that lies on a bi-infinite walk
//! of the pair graph is diagonal. Surjectivity: every path of the target
//! must be the image of a path of the source, which is decided by running
//! the subset construction of the labelled source graph along the target.

use std::collections::{HashMap, VecDeque};

use crate::block_map::BlockMap;
use crate::error::{Error, Result};
use crate::graph::{essential_mask, trim_to_essential, DirectedGraph};
use crate::shift::block_presentation;
use crate::verdict::{Failure, Verdict, Witness};

#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    /// Largest admissible number of length-`k` paths in the trimmed source.
    pub max_blocks: usize,
    /// Largest number of (target vertex, subset) states explored.
    pub max_subsets: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        Self { max_blocks: 64, max_subsets: 1 << 20 }
    }
}

pub fn oracle_is_conjugacy(g: &DirectedGraph, h: &DirectedGraph, phi: &BlockMap) -> Result<Verdict> {
    oracle_is_conjugacy_with(g, h, phi, OracleLimits::default())
}

pub fn oracle_is_conjugacy_with(
    g: &DirectedGraph,
    h: &DirectedGraph,
    phi: &BlockMap,
    limits: OracleLimits,
) -> Result<Verdict> {
    let k = phi.block_size();
    // every key must be a word of g
    for (word, image) in phi.iter() {
        let ok = word.iter().all(|s| g.index_of(s).is_some())
            && word
                .windows(2)
                .all(|w| g.has_edge(g.index_of(&w[0]).unwrap(), g.index_of(&w[1]).unwrap()));
        if !ok || h.index_of(image).is_none() {
            return Ok(Verdict::invalid(word.to_vec(), "bad table entry"));
        }
    }
    let gt = trim_to_essential(g);
    let ht = trim_to_essential(h);
    let pres = block_presentation(&gt, k);
    if pres.blocks.len() > limits.max_blocks {
        return Err(Error::SizeCap(format!(
            "{} source blocks, oracle limit {}",
            pres.blocks.len(),
            limits.max_blocks
        )));
    }
    let mut image = Vec::new();
    for b in &pres.blocks {
        let word: Vec<String> = b.iter().map(|&v| gt.name(v).to_string()).collect();
        let Some(sym) = phi.get(&word) else {
            return Ok(Verdict::invalid(word, "no image"));
        };
        let Some(u) = ht.index_of(sym) else {
            return Ok(Verdict::invalid(word, "image outside the target's points"));
        };
        image.push(u);
    }
    let lifted = &pres.graph;
    for (p, q) in lifted.edges() {
        if !ht.has_edge(image[p], image[q]) {
            return Ok(Verdict::invalid(vec![lifted.name(p).into(), lifted.name(q).into()], "edge image"));
        }
    }

    if !injective(lifted, &image) {
        return Ok(Verdict::failed(Failure::NotInjective, None));
    }
    match unreached_word(lifted, &ht, &image, limits.max_subsets)? {
        Some(word) => Ok(Verdict::failed(Failure::NotSurjective, Some(Witness::UnreachedWord { word }))),
        None => Ok(Verdict::conjugacy()),
    }
}

fn injective(g: &DirectedGraph, image: &[usize]) -> bool {
    let mut pairs = DirectedGraph::new();
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let n = g.vertex_count();
    for x in 0..n {
        for y in 0..n {
            if image[x] == image[y] {
                let id = pairs.add_vertex(format!("{x},{y}")).expect("fresh");
                index.insert((x, y), id);
            }
        }
    }
    for (&(x, y), &p) in &index {
        for &x2 in g.successors(x) {
            for &y2 in g.successors(y) {
                if let Some(&q) = index.get(&(x2, y2)) {
                    pairs.insert_edge(p, q);
                }
            }
        }
    }
    let alive = essential_mask(&pairs);
    index.iter().all(|(&(x, y), &p)| !alive[p] || x == y)
}

/// A path of `h` that no path of `g` maps onto, if any.
fn unreached_word(g: &DirectedGraph, h: &DirectedGraph, image: &[usize], cap: usize) -> Result<Option<Vec<String>>> {
    type State = (usize, Vec<usize>);
    let mut parent: HashMap<State, Option<State>> = HashMap::new();
    let mut queue: VecDeque<State> = VecDeque::new();
    for u in 0..h.vertex_count() {
        let subset: Vec<usize> = (0..g.vertex_count()).filter(|&x| image[x] == u).collect();
        let state = (u, subset);
        if state.1.is_empty() {
            return Ok(Some(vec![h.name(u).to_string()]));
        }
        parent.insert(state.clone(), None);
        queue.push_back(state);
    }
    while let Some(state) = queue.pop_front() {
        let (u, subset) = &state;
        for &u2 in h.successors(*u) {
            let mut next: Vec<usize> = subset
                .iter()
                .flat_map(|&x| g.successors(x).iter().copied())
                .filter(|&y| image[y] == u2)
                .collect();
            next.sort_unstable();
            next.dedup();
            let empty = next.is_empty();
            let child = (u2, next);
            if parent.contains_key(&child) {
                continue;
            }
            parent.insert(child.clone(), Some(state.clone()));
            if empty {
                let mut word = Vec::new();
                let mut cur = Some(child);
                while let Some(s) = cur {
                    word.push(h.name(s.0).to_string());
                    cur = parent[&s].clone();
                }
                word.reverse();
                return Ok(Some(word));
            }
            if parent.len() > cap {
                return Err(Error::BudgetExceeded { budget: cap as u64 });
            }
            queue.push_back(child);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(vertices: &[&str], edges: &[(&str, &str)]) -> DirectedGraph {
        DirectedGraph::from_edges(vertices, edges).unwrap()
    }

    #[test]
    fn basic_answers() {
        let two = graph(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert!(oracle_is_conjugacy(&two, &two, &BlockMap::identity(&two)).unwrap().is_conjugacy);

        let lp = graph(&["x"], &[("x", "x")]);
        let phi = BlockMap::one_block([("a", "x"), ("b", "x")]).unwrap();
        assert_eq!(oracle_is_conjugacy(&two, &lp, &phi).unwrap().failure, Failure::NotInjective);

        let golden = graph(&["a", "b"], &[("a", "b"), ("b", "a"), ("b", "b")]);
        let v = oracle_is_conjugacy(&two, &golden, &BlockMap::identity(&two)).unwrap();
        assert_eq!(v.failure, Failure::NotSurjective);
        assert_eq!(v.witness, Some(Witness::UnreachedWord { word: vec!["b".into(), "b".into()] }));
    }

    #[test]
    fn size_cap() {
        let full = graph(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")]);
        let limits = OracleLimits { max_blocks: 1, max_subsets: 10 };
        assert!(matches!(
            oracle_is_conjugacy_with(&full, &full, &BlockMap::identity(&full), limits),
            Err(Error::SizeCap(_))
        ));
    }
}
