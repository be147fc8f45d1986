//! State amalgamation and state splitting, the elementary conjugacies.
//!
//! Naming follows the neighbourhood that must agree: an out-amalgamation
//! merges two states with equal out-neighbourhoods and disjoint
//! in-neighbourhoods; an in-amalgamation is the mirror image. An out-split
//! partitions the out-neighbourhood, so it is undone by an in-amalgamation.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::block_map::BlockMap;
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AmalgamationKind {
    InAmalgamation,
    OutAmalgamation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmalgamationStep {
    pub kind: AmalgamationKind,
    pub merged: (String, String),
    pub new_name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitKind {
    /// Partition the out-neighbourhood; both halves keep every in-edge.
    Out,
    /// Partition the in-neighbourhood; both halves keep every out-edge.
    In,
}

fn disjoint(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// Which amalgamation, if any, applies to the distinct states `u` and `v`.
pub fn can_amalgamate(g: &DirectedGraph, u: usize, v: usize) -> Option<AmalgamationKind> {
    if u == v {
        return None;
    }
    if g.successors(u) == g.successors(v) && disjoint(g.predecessors(u), g.predecessors(v)) {
        return Some(AmalgamationKind::OutAmalgamation);
    }
    if g.predecessors(u) == g.predecessors(v) && disjoint(g.successors(u), g.successors(v)) {
        return Some(AmalgamationKind::InAmalgamation);
    }
    None
}

/// Merges `u` and `v` into `new_name`, which takes the earlier of their two
/// positions; every other vertex keeps its relative order.
pub fn amalgamate(g: &DirectedGraph, u: usize, v: usize, new_name: &str) -> Result<DirectedGraph> {
    if can_amalgamate(g, u, v).is_none() {
        return Err(Error::Contract(format!(
            "`{}` and `{}` cannot be amalgamated",
            g.name(u),
            g.name(v)
        )));
    }
    if let Some(w) = g.index_of(new_name) {
        if w != u && w != v {
            return Err(Error::DuplicateVertex(new_name.to_string()));
        }
    }
    let (keep, drop) = (u.min(v), u.max(v));
    let mut out = DirectedGraph::new();
    let mut new_id = vec![0; g.vertex_count()];
    for x in 0..g.vertex_count() {
        if x == drop {
            continue;
        }
        let name = if x == keep { new_name } else { g.name(x) };
        new_id[x] = out.add_vertex(name)?;
    }
    new_id[drop] = new_id[keep];
    for (x, y) in g.edges() {
        out.insert_edge(new_id[x], new_id[y]);
    }
    Ok(out)
}

/// Splits `v` into `names.0` (at `v`'s position) and `names.1` (right after
/// it). `first_part` lists the neighbours of the partitioned side that go to
/// the first copy; the rest go to the second. Self-loops count `v` as its own
/// neighbour on both sides.
pub fn split(
    g: &DirectedGraph,
    v: usize,
    kind: SplitKind,
    first_part: &[usize],
    names: (&str, &str),
) -> Result<DirectedGraph> {
    let side = match kind {
        SplitKind::Out => g.successors(v),
        SplitKind::In => g.predecessors(v),
    };
    let first: BTreeSet<usize> = first_part.iter().copied().collect();
    if first.len() != first_part.len() || !first.iter().all(|x| side.contains(x)) {
        return Err(Error::Contract("first part must be a subset of the split neighbourhood".into()));
    }
    if first.is_empty() || first.len() == side.len() {
        return Err(Error::Contract("both parts of a split must be nonempty".into()));
    }
    for n in [names.0, names.1] {
        if g.index_of(n).is_some_and(|w| w != v) {
            return Err(Error::DuplicateVertex(n.to_string()));
        }
    }
    if names.0 == names.1 {
        return Err(Error::DuplicateVertex(names.0.to_string()));
    }

    let mut out = DirectedGraph::new();
    let mut new_id = vec![0; g.vertex_count()];
    let mut second = 0;
    for x in 0..g.vertex_count() {
        if x == v {
            new_id[x] = out.add_vertex(names.0)?;
            second = out.add_vertex(names.1)?;
        } else {
            new_id[x] = out.add_vertex(g.name(x))?;
        }
    }
    let v1 = new_id[v];
    let copy_of = |neighbour: usize| if first.contains(&neighbour) { v1 } else { second };
    for (x, y) in g.edges() {
        let sources = match (kind, x == v) {
            (_, false) => vec![new_id[x]],
            (SplitKind::Out, true) => vec![copy_of(y)],
            (SplitKind::In, true) => vec![v1, second],
        };
        let targets = match (kind, y == v) {
            (_, false) => vec![new_id[y]],
            (SplitKind::In, true) => vec![copy_of(x)],
            (SplitKind::Out, true) => vec![v1, second],
        };
        for &s in &sources {
            for &t in &targets {
                out.insert_edge(s, t);
            }
        }
    }
    Ok(out)
}

/// Applies amalgamation steps in order, checking each against
/// [`can_amalgamate`] at the time it is applied. Returns the final graph and
/// the composite 1-block map from the vertices of `g` onto it.
pub fn apply_schedule(g: &DirectedGraph, steps: &[AmalgamationStep]) -> Result<(DirectedGraph, BlockMap)> {
    let mut current = g.clone();
    // current name of the class of every original vertex
    let mut class: Vec<String> = g.names().to_vec();
    for (i, step) in steps.iter().enumerate() {
        let u = current.vertex(&step.merged.0)?;
        let v = current.vertex(&step.merged.1)?;
        match can_amalgamate(&current, u, v) {
            Some(kind) if kind == step.kind => {}
            found => {
                return Err(Error::Contract(format!(
                    "step {i}: `{}` and `{}` do not admit {:?} (found {found:?})",
                    step.merged.0, step.merged.1, step.kind
                )))
            }
        }
        current = amalgamate(&current, u, v, &step.new_name)?;
        let renamed: HashMap<&str, ()> = [(step.merged.0.as_str(), ()), (step.merged.1.as_str(), ())].into();
        for c in class.iter_mut() {
            if renamed.contains_key(c.as_str()) {
                *c = step.new_name.clone();
            }
        }
    }
    let phi = BlockMap::one_block(g.names().iter().zip(&class)).expect("distinct source names");
    Ok((current, phi))
}
