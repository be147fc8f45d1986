use crate::error::Result;
use crate::graph::DirectedGraph;

use super::check_gadget_k;

fn source_gadget(g: &DirectedGraph, k: usize) -> Result<DirectedGraph> {
    let mut out = DirectedGraph::new();
    for v in g.names() {
        let mut chain = vec![format!("{v}__in")];
        chain.extend((1..k).map(|i| format!("{v}__{i}")));
        let ids = chain
            .into_iter()
            .map(|n| out.add_vertex(n))
            .collect::<Result<Vec<_>>>()?;
        let top = out.add_vertex(format!("{v}__{k}t"))?;
        let bottom = out.add_vertex(format!("{v}__{k}b"))?;
        let exit = out.add_vertex(format!("{v}__out"))?;
        for w in ids.windows(2) {
            out.add_edge(w[0], w[1])?;
        }
        let last = *ids.last().expect("k >= 2");
        out.add_edge(last, top)?;
        out.add_edge(last, bottom)?;
        out.add_edge(top, exit)?;
        out.add_edge(bottom, exit)?;
    }
    link_gadgets(g, &mut out)?;
    Ok(out)
}

fn target_gadget(h: &DirectedGraph, k: usize) -> Result<DirectedGraph> {
    let mut out = DirectedGraph::new();
    for u in h.names() {
        let entry = out.add_vertex(format!("{u}__in"))?;
        let mut rails = Vec::new();
        for side in ['t', 'b'] {
            let rail = (1..=k)
                .map(|i| out.add_vertex(format!("{u}__{i}{side}")))
                .collect::<Result<Vec<_>>>()?;
            rails.push(rail);
        }
        let exit = out.add_vertex(format!("{u}__out"))?;
        for rail in &rails {
            out.add_edge(entry, rail[0])?;
            for w in rail.windows(2) {
                out.add_edge(w[0], w[1])?;
            }
            out.add_edge(rail[k - 1], exit)?;
        }
    }
    link_gadgets(h, &mut out)?;
    Ok(out)
}

fn link_gadgets(g: &DirectedGraph, out: &mut DirectedGraph) -> Result<()> {
    for (x, y) in g.edges() {
        let from = out.vertex(&format!("{}__out", g.name(x)))?;
        let to = out.vertex(&format!("{}__in", g.name(y)))?;
        out.add_edge(from, to)?;
    }
    Ok(())
}

/// Replaces every vertex `v` of `g` by the chain `v__in, v__1, ..,
/// v__{k-1}` forking into `v__{k}t` / `v__{k}b` and rejoining at `v__out`,
/// and every vertex `u` of `h` by `u__in` followed by two disjoint length-`k`
/// rails `u__{i}t`, `u__{i}b` into `u__out`. Each edge `x -> y` becomes
/// `x__out -> y__in`. A 1-block conjugacy between `g` and `h` exists iff a
/// `k`-block conjugacy exists between the two gadget graphs.
pub fn vertex_gadget_pair(g: &DirectedGraph, h: &DirectedGraph, k: usize) -> Result<(DirectedGraph, DirectedGraph)> {
    check_gadget_k(k)?;
    Ok((source_gadget(g, k)?, target_gadget(h, k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::graph::{is_essential, trace_powers};

    #[test]
    fn counts() {
        let g = DirectedGraph::from_edges(&["a", "b"], &[("a", "b"), ("b", "a"), ("b", "b")]).unwrap();
        for k in 2..5 {
            let (gp, hp) = vertex_gadget_pair(&g, &g, k).unwrap();
            assert_eq!(gp.vertex_count(), (k + 3) * 2);
            assert_eq!(gp.edge_count(), (k + 3) * 2 + 3);
            assert_eq!(hp.vertex_count(), (2 * k + 2) * 2);
            assert_eq!(hp.edge_count(), (2 * k + 2) * 2 + 3);
            assert!(is_essential(&gp) && is_essential(&hp));
        }
    }

    #[test]
    fn self_loop_gadgets() {
        let lp = DirectedGraph::from_edges(&["v"], &[("v", "v")]).unwrap();
        let (gp, hp) = vertex_gadget_pair(&lp, &lp, 2).unwrap();
        assert_eq!(gp.names(), ["v__in", "v__1", "v__2t", "v__2b", "v__out"]);
        assert_eq!(hp.names(), ["v__in", "v__1t", "v__2t", "v__1b", "v__2b", "v__out"]);
        // both have exactly two cycles of length k + 2 = 4 and none shorter
        for g in [&gp, &hp] {
            let t = trace_powers(g, 4);
            assert_eq!(t.values()[..3], [0u32.into(), 0u32.into(), 0u32.into()]);
            assert_eq!(*t.get(4), 8u32.into());
        }
    }

    #[test]
    fn k_one_is_rejected() {
        let lp = DirectedGraph::from_edges(&["v"], &[("v", "v")]).unwrap();
        assert!(matches!(vertex_gadget_pair(&lp, &lp, 1), Err(Error::Gadget(_))));
    }
}
