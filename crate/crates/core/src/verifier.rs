//! Polynomial-time verification that a block code is a conjugacy.
//!
//! Irreducible 1-block instances are decided by cycle-map injectivity (an
//! off-diagonal cycle in the meta-graph of equal-image pairs) plus equality
//! of cycle counts. Reducible instances are first made irreducible by
//! collapsing sink and source components and joining them through a new
//! vertex `*`, which preserves conjugacy in both directions.

use std::collections::HashSet;

use crate::block_map::BlockMap;
use crate::error::{Error, Result};
use crate::graph::{
    component_ids, components_of, is_essential, is_irreducible, shortest_cycle_through, trace_powers,
    trim_to_essential, DirectedGraph, MultiGraph,
};
use crate::shift::{block_presentation, diamond_from_pairs, edge_to_vertex, table_defect, word_as_path, PairGraph};
use crate::verdict::{Failure, Verdict, Witness};

/// A 1-block code as a vertex map `phi[v]` from `g` into `h`.
#[derive(Clone, Debug)]
pub(crate) struct Instance {
    pub g: DirectedGraph,
    pub h: DirectedGraph,
    pub phi: Vec<usize>,
}

impl Instance {
    pub fn from_names(g: &DirectedGraph, h: &DirectedGraph, phi: &BlockMap) -> Result<Self> {
        if phi.block_size() != 1 {
            return Err(Error::Contract(format!(
                "expected a 1-block map, got block size {}",
                phi.block_size()
            )));
        }
        let mut map = Vec::with_capacity(g.vertex_count());
        for v in g.names() {
            let image = phi
                .get_symbol(v)
                .ok_or_else(|| Error::InvalidCode(format!("vertex `{v}` has no image")))?;
            let u = h
                .index_of(image)
                .ok_or_else(|| Error::InvalidCode(format!("image `{image}` of `{v}` is not a target vertex")))?;
            map.push(u);
        }
        for (x, y) in g.edges() {
            if !h.has_edge(map[x], map[y]) {
                return Err(Error::InvalidCode(format!(
                    "edge `{}` -> `{}` maps to a non-edge",
                    g.name(x),
                    g.name(y)
                )));
            }
        }
        Ok(Self { g: g.clone(), h: h.clone(), phi: map })
    }

    pub fn into_names(self) -> (DirectedGraph, DirectedGraph, BlockMap) {
        let phi = BlockMap::one_block(
            self.phi
                .iter()
                .enumerate()
                .map(|(v, &u)| (self.g.name(v), self.h.name(u))),
        )
        .expect("vertex names are distinct");
        (self.g, self.h, phi)
    }

    fn reversed(&self) -> Self {
        Self {
            g: crate::graph::reverse_edges(&self.g),
            h: crate::graph::reverse_edges(&self.h),
            phi: self.phi.clone(),
        }
    }

    /// A name that is free in both graphs.
    fn fresh_name(&self, base: &str) -> String {
        let taken = |n: &str| self.g.index_of(n).is_some() || self.h.index_of(n).is_some();
        if !taken(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| !taken(n))
            .expect("some suffix is free")
    }

    fn add_twin(&mut self, base: &str) -> (usize, usize) {
        let name = self.fresh_name(base);
        let t = self.h.add_vertex(name.clone()).expect("fresh");
        let t2 = self.g.add_vertex(name).expect("fresh");
        self.phi.push(t);
        (t2, t)
    }
}

/// Whether `phi` is total on the length-`k` paths of `g` and sends every
/// length-`k+1` path of `g` to an edge of `h`.
pub fn is_valid_block_map(g: &DirectedGraph, h: &DirectedGraph, phi: &BlockMap) -> bool {
    let pres = block_presentation(g, phi.block_size());
    if table_defect(g, g, &pres.blocks, phi).is_some() {
        return false;
    }
    let image: Option<Vec<usize>> = pres
        .blocks
        .iter()
        .map(|b| {
            let word: Vec<String> = b.iter().map(|&v| g.name(v).to_string()).collect();
            h.index_of(phi.get(&word).expect("total"))
        })
        .collect();
    let Some(image) = image else { return false };
    let ok = pres.graph.edges().all(|(p, q)| h.has_edge(image[p], image[q]));
    ok
}

/// The meta-graph test: the cycle map of a 1-block code is injective iff no
/// strongly connected component of the equal-image pair graph carries an
/// edge and an off-diagonal pair. On failure the witness is a pair of
/// distinct cycles with the same image.
pub fn is_injective_cycle_map(
    g: &DirectedGraph,
    h: &DirectedGraph,
    phi: &BlockMap,
) -> Result<(bool, Option<Witness>)> {
    let inst = Instance::from_names(g, h, phi)?;
    let pg = PairGraph::build(&inst.g, &inst.phi);
    Ok(match pg.off_diagonal_cycle() {
        None => (true, None),
        Some(cycle) => {
            let first: Vec<usize> = cycle.iter().map(|p| p.0).collect();
            let second: Vec<usize> = cycle.iter().map(|p| p.1).collect();
            let name = |vs: &[usize], gr: &DirectedGraph| vs.iter().map(|&v| gr.name(v).to_string()).collect();
            let image: Vec<usize> = first.iter().map(|&v| inst.phi[v]).collect();
            (
                false,
                Some(Witness::CyclePair {
                    first: name(&first, &inst.g),
                    second: name(&second, &inst.g),
                    image: name(&image, &inst.h),
                }),
            )
        }
    })
}

/// Vertex and edge counts of the meta-graph of a 1-block code.
pub fn meta_graph_size(g: &DirectedGraph, h: &DirectedGraph, phi: &BlockMap) -> Result<(usize, usize)> {
    let inst = Instance::from_names(g, h, phi)?;
    let pg = PairGraph::build(&inst.g, &inst.phi);
    Ok((pg.pairs.len(), pg.edge_count()))
}

/// Decides an irreducible 1-block instance: injective cycle map and equal
/// traces up to `max(|V_g|, |V_h|)`.
pub fn is_conjugacy_irreducible(g: &DirectedGraph, h: &DirectedGraph, phi: &BlockMap) -> Result<Verdict> {
    if !is_irreducible(g) || !is_irreducible(h) {
        return Err(Error::Contract("both graphs must be irreducible".into()));
    }
    let inst = Instance::from_names(g, h, phi)?;
    let verdict = decide_irreducible(&inst);
    if verdict.failure == Failure::NotInjective {
        let (_, witness) = is_injective_cycle_map(g, h, phi)?;
        return Ok(Verdict::failed(Failure::NotInjective, witness));
    }
    Ok(verdict)
}

/// The irreducible decision on indices; a not-injective verdict carries no
/// witness (callers translate one into their own symbols).
fn decide_irreducible(inst: &Instance) -> Verdict {
    let pg = PairGraph::build(&inst.g, &inst.phi);
    if pg.off_diagonal_cycle().is_some() {
        return Verdict::failed(Failure::NotInjective, None);
    }
    let n = inst.g.vertex_count().max(inst.h.vertex_count());
    let tg = trace_powers(&inst.g, n);
    let th = trace_powers(&inst.h, n);
    match tg.first_difference(&th) {
        None => Verdict::conjugacy(),
        Some(i) => Verdict::failed(
            Failure::NotSurjective,
            Some(Witness::TraceMismatch {
                power: i,
                source_trace: tg.get(i).to_string(),
                target_trace: th.get(i).to_string(),
            }),
        ),
    }
}

fn check_augmentable(inst: &Instance) -> Result<()> {
    if !is_essential(&inst.g) || !is_essential(&inst.h) {
        return Err(Error::Contract("both graphs must be essential".into()));
    }
    Ok(())
}

/// Replaces every sink component of `h` (other than a self-loop vertex with
/// a single preimage) by a new self-loop vertex `t` hanging off it, and adds
/// a matching `t'` to `g` fed by the preimages of the chosen vertex that can
/// run into a cycle over the chosen shortest cycle.
pub fn add_sink_components(
    g: &DirectedGraph,
    h: &DirectedGraph,
    phi: &BlockMap,
) -> Result<(DirectedGraph, DirectedGraph, BlockMap)> {
    let inst = Instance::from_names(g, h, phi)?;
    check_augmentable(&inst)?;
    Ok(sink_step(&inst, "__sink").into_names())
}

/// The mirror image of [`add_sink_components`] under edge reversal.
pub fn add_source_components(
    g: &DirectedGraph,
    h: &DirectedGraph,
    phi: &BlockMap,
) -> Result<(DirectedGraph, DirectedGraph, BlockMap)> {
    let inst = Instance::from_names(g, h, phi)?;
    check_augmentable(&inst)?;
    Ok(source_step(&inst).into_names())
}

/// Joins all sink states to all source states through a new vertex `*` in
/// both graphs. Every sink and source component of `h` must already be a
/// single vertex with a single preimage.
pub fn augment_to_irreducible(
    g: &DirectedGraph,
    h: &DirectedGraph,
    phi: &BlockMap,
) -> Result<(DirectedGraph, DirectedGraph, BlockMap)> {
    let inst = Instance::from_names(g, h, phi)?;
    check_augmentable(&inst)?;
    Ok(star_step(&inst)?.into_names())
}

/// Sink and source components of `h`, each sorted, ordered by least member.
fn terminal_components(h: &DirectedGraph) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let comps = components_of(h.adjacency());
    let id = component_ids(h.vertex_count(), &comps);
    let mut sinks = Vec::new();
    let mut sources = Vec::new();
    for (c, members) in comps.iter().enumerate() {
        if members.iter().all(|&v| h.successors(v).iter().all(|&w| id[w] == c)) {
            sinks.push(members.clone());
        }
        if members.iter().all(|&v| h.predecessors(v).iter().all(|&w| id[w] == c)) {
            sources.push(members.clone());
        }
    }
    sinks.sort();
    sources.sort();
    (sinks, sources)
}

fn sink_step(inst: &Instance, base: &str) -> Instance {
    let (sinks, _) = terminal_components(&inst.h);
    let mut out = inst.clone();
    for comp in &sinks {
        let in_comp: HashSet<usize> = comp.iter().copied().collect();
        let pre: Vec<usize> = (0..inst.g.vertex_count())
            .filter(|&x| in_comp.contains(&inst.phi[x]))
            .collect();
        if comp.len() == 1 && pre.len() == 1 {
            continue;
        }
        let v = comp[0];
        let cycle = shortest_cycle_through(&inst.h, v).expect("sink components of essential graphs carry cycles");
        let cycle_edges: HashSet<(usize, usize)> = (0..cycle.len())
            .map(|i| (cycle[i], cycle[(i + 1) % cycle.len()]))
            .collect();
        let on_cycle: HashSet<usize> = cycle.iter().copied().collect();

        // pullback of the cycle inside the preimage component
        let members: Vec<usize> = pre.iter().copied().filter(|&x| on_cycle.contains(&inst.phi[x])).collect();
        let in_pullback: HashSet<usize> = members.iter().copied().collect();
        let (in_pullback, cycle_edges) = (&in_pullback, &cycle_edges);
        let pull_succ = |x: usize| {
            inst.g
                .successors(x)
                .iter()
                .copied()
                .filter(move |&y| in_pullback.contains(&y) && cycle_edges.contains(&(inst.phi[x], inst.phi[y])))
        };
        // vertices that can run into a cycle: drop dead ends until stable
        let mut alive: HashSet<usize> = in_pullback.clone();
        loop {
            let dead: Vec<usize> = alive
                .iter()
                .copied()
                .filter(|&x| !pull_succ(x).any(|y| alive.contains(&y)))
                .collect();
            if dead.is_empty() {
                break;
            }
            for x in dead {
                alive.remove(&x);
            }
        }
        let mut feeders: Vec<usize> = members
            .iter()
            .copied()
            .filter(|&x| inst.phi[x] == v && alive.contains(&x))
            .collect();
        feeders.sort_unstable();

        let (t2, t) = out.add_twin(base);
        out.h.insert_edge(t, t);
        out.h.insert_edge(v, t);
        out.g.insert_edge(t2, t2);
        for x in feeders {
            out.g.insert_edge(x, t2);
        }
    }
    out
}

fn source_step(inst: &Instance) -> Instance {
    sink_step(&inst.reversed(), "__source").reversed()
}

fn star_step(inst: &Instance) -> Result<Instance> {
    let (sinks, sources) = terminal_components(&inst.h);
    let preimage = |u: usize| -> Vec<usize> { (0..inst.g.vertex_count()).filter(|&x| inst.phi[x] == u).collect() };
    let mut ends = Vec::new();
    for (kind, comps) in [("sink", &sinks), ("source", &sources)] {
        let mut states = Vec::new();
        for comp in comps {
            let pre = preimage(comp[0]);
            if comp.len() != 1 || pre.len() != 1 {
                return Err(Error::Contract(format!(
                    "{kind} component containing `{}` is not a single vertex with a single preimage",
                    inst.h.name(comp[0])
                )));
            }
            states.push((pre[0], comp[0]));
        }
        ends.push(states);
    }
    let mut out = inst.clone();
    let (star2, star) = out.add_twin("*");
    for &(x, u) in &ends[0] {
        out.g.insert_edge(x, star2);
        out.h.insert_edge(u, star);
    }
    for &(x, u) in &ends[1] {
        out.g.insert_edge(star2, x);
        out.h.insert_edge(star, u);
    }
    Ok(out)
}

/// The full augmentation pipeline on an essential instance.
pub(crate) fn augment(inst: &Instance) -> Instance {
    let sinks = sink_step(inst, "__sink");
    let both = source_step(&sinks);
    star_step(&both).expect("sink and source steps leave singleton terminal components")
}

/// A trimmed, lifted 1-block instance plus what is needed to read results
/// back in the symbols of the source graph.
struct Prepared {
    inst: Instance,
    source: DirectedGraph,
    blocks: Vec<Vec<usize>>,
}

fn prepare(g: &DirectedGraph, h: &DirectedGraph, phi: &BlockMap) -> std::result::Result<Prepared, Verdict> {
    for (word, image) in phi.iter() {
        if word_as_path(g, word).is_none() {
            return Err(Verdict::invalid(word.to_vec(), "not a path of the source graph"));
        }
        if h.index_of(image).is_none() {
            return Err(Verdict::invalid(word.to_vec(), format!("image `{image}` is not a target vertex")));
        }
    }
    let gt = trim_to_essential(g);
    let ht = trim_to_essential(h);
    let pres = block_presentation(&gt, phi.block_size());
    if let Some((word, problem)) = table_defect(g, &gt, &pres.blocks, phi) {
        return Err(Verdict::invalid(word, problem));
    }

    if gt.is_empty() {
        if ht.is_empty() {
            return Err(Verdict::conjugacy());
        }
        let cycle = (0..ht.vertex_count())
            .find_map(|v| shortest_cycle_through(&ht, v))
            .expect("essential graphs carry cycles");
        return Err(Verdict::failed(
            Failure::NotSurjective,
            Some(Witness::UnreachedWord {
                word: cycle.iter().map(|&v| ht.name(v).to_string()).collect(),
            }),
        ));
    }

    let word_of = |b: &[usize]| -> Vec<String> { b.iter().map(|&v| gt.name(v).to_string()).collect() };
    let mut image = Vec::with_capacity(pres.blocks.len());
    for b in &pres.blocks {
        let word = word_of(b);
        let sym = phi.get(&word).expect("checked total");
        match ht.index_of(sym) {
            Some(u) => image.push(u),
            None => {
                return Err(Verdict::invalid(
                    word,
                    format!("image `{sym}` does not occur in any point of the target"),
                ))
            }
        }
    }
    for (p, q) in pres.graph.edges() {
        if !ht.has_edge(image[p], image[q]) {
            let mut word = word_of(&pres.blocks[p]);
            word.push(gt.name(*pres.blocks[q].last().expect("nonempty")).to_string());
            return Err(Verdict::invalid(word, "image is not a path of the target"));
        }
    }
    Ok(Prepared {
        inst: Instance { g: pres.graph, h: ht, phi: image },
        source: gt,
        blocks: pres.blocks,
    })
}

impl Prepared {
    /// Classifies a failed instance: not injective (with a cycle pair or a
    /// diamond in source symbols) when the pair graph has an off-diagonal
    /// point, otherwise not surjective.
    fn failure(&self, surjectivity_witness: Option<Witness>) -> Verdict {
        let pg = PairGraph::build(&self.inst.g, &self.inst.phi);
        if let Some(cycle) = pg.off_diagonal_cycle() {
            let spell = |pick: fn(&(usize, usize)) -> usize| -> Vec<String> {
                cycle
                    .iter()
                    .map(|p| self.source.name(self.blocks[pick(p)][0]).to_string())
                    .collect()
            };
            let image = cycle
                .iter()
                .map(|p| self.inst.h.name(self.inst.phi[p.0]).to_string())
                .collect();
            return Verdict::failed(
                Failure::NotInjective,
                Some(Witness::CyclePair { first: spell(|p| p.0), second: spell(|p| p.1), image }),
            );
        }
        if let Some(path) = pg.diamond_path() {
            return Verdict::failed(
                Failure::NotInjective,
                Some(diamond_from_pairs(&self.source, &self.blocks, &path).into()),
            );
        }
        Verdict::failed(Failure::NotSurjective, surjectivity_witness)
    }

    fn decide(&self) -> Verdict {
        let inst = &self.inst;
        if is_irreducible(&inst.g) && is_irreducible(&inst.h) {
            let v = decide_irreducible(inst);
            return match v.failure {
                Failure::None => v,
                _ => self.failure(v.witness),
            };
        }
        let star = augment(inst);
        if !is_irreducible(&star.g) || !is_irreducible(&star.h) {
            // the augmented target is irreducible and a conjugacy would carry
            // that over to the augmented source
            return self.failure(None);
        }
        let v = decide_irreducible(&star);
        match v.failure {
            Failure::None => v,
            _ => self.failure(v.witness),
        }
    }
}

/// Decides whether the sliding block code `phi` from the vertex shift of `g`
/// to that of `h` is a conjugacy. Never fails: malformed codes yield an
/// `invalid_code` verdict.
pub fn verify(g: &DirectedGraph, h: &DirectedGraph, phi: &BlockMap) -> Verdict {
    match prepare(g, h, phi) {
        Ok(prepared) => prepared.decide(),
        Err(verdict) => verdict,
    }
}

/// [`verify`] for edge shifts: both multigraphs are read through their
/// vertex presentations, so `phi` maps words of edge labels to edge labels.
pub fn verify_edge_shift(g: &MultiGraph, h: &MultiGraph, phi: &BlockMap) -> Verdict {
    verify(&edge_to_vertex(g), &edge_to_vertex(h), phi)
}
