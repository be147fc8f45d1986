use crate::error::Result;
use crate::graph::MultiGraph;

use super::check_gadget_k;

fn copy_vertices(g: &MultiGraph) -> Result<MultiGraph> {
    let mut out = MultiGraph::new();
    for v in g.names() {
        out.add_vertex(v.clone())?;
    }
    Ok(out)
}

/// Edge-shift versions of the vertex gadgets. In the source, each edge
/// `e: x -> y` becomes the edge path `e__in, e__1, .., e__{k-1}`, the two
/// parallel edges `e__{k}t`, `e__{k}b`, then `e__out`, through new vertices
/// `e__s1 .. e__s{k+1}`. In the target, each edge `f: x -> y` becomes
/// `f__in`, two disjoint edge paths `f__{i}t`, `f__{i}b` (i = 1..k), then
/// `f__out`. Read as vertex shifts (edges as vertices) these are exactly
/// the vertex gadgets of the vertex presentations.
pub fn edge_gadget_pair(g: &MultiGraph, h: &MultiGraph, k: usize) -> Result<(MultiGraph, MultiGraph)> {
    check_gadget_k(k)?;

    let mut gs = copy_vertices(g)?;
    for e in g.edges() {
        let l = &e.label;
        let stops = (1..=k + 1)
            .map(|i| gs.add_vertex(format!("{l}__s{i}")))
            .collect::<Result<Vec<_>>>()?;
        gs.add_edge(format!("{l}__in"), e.source, stops[0])?;
        for i in 1..k {
            gs.add_edge(format!("{l}__{i}"), stops[i - 1], stops[i])?;
        }
        gs.add_edge(format!("{l}__{k}t"), stops[k - 1], stops[k])?;
        gs.add_edge(format!("{l}__{k}b"), stops[k - 1], stops[k])?;
        gs.add_edge(format!("{l}__out"), stops[k], e.target)?;
    }

    let mut ht = copy_vertices(h)?;
    for f in h.edges() {
        let l = &f.label;
        let fork = ht.add_vertex(format!("{l}__s"))?;
        let join = ht.add_vertex(format!("{l}__e"))?;
        ht.add_edge(format!("{l}__in"), f.source, fork)?;
        for side in ['t', 'b'] {
            let mut at = fork;
            for i in 1..k {
                let next = ht.add_vertex(format!("{l}__{side}{i}"))?;
                ht.add_edge(format!("{l}__{i}{side}"), at, next)?;
                at = next;
            }
            ht.add_edge(format!("{l}__{k}{side}"), at, join)?;
        }
        ht.add_edge(format!("{l}__out"), join, f.target)?;
    }
    Ok((gs, ht))
}
