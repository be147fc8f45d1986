//! Constructions on shift spaces: higher block presentations, recoding of
//! block codes, cycles and their images, diamonds, entropy.

use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::block_map::BlockMap;
use crate::error::{Error, Result};
use crate::graph::{
    component_has_edge, components_of, trim_to_essential, DirectedGraph, MultiGraph,
};
use crate::verdict::Witness;

/// Default node budget for [`enumerate_cycles`].
pub const DEFAULT_CYCLE_BUDGET: u64 = 10_000_000;

/// `g^[k]` together with the length-`k` path of `g` behind each vertex.
#[derive(Clone, Debug)]
pub struct BlockPresentation {
    pub graph: DirectedGraph,
    pub blocks: Vec<Vec<usize>>,
}

/// Builds `g^[k]`. Block vertices are named by joining the symbols with `.`;
/// should that collide with another block's name, a `~<n>` suffix keeps the
/// names unique.
pub fn block_presentation(g: &DirectedGraph, k: usize) -> BlockPresentation {
    assert!(k >= 1, "block length must be positive");
    if k == 1 {
        return BlockPresentation {
            graph: g.clone(),
            blocks: (0..g.vertex_count()).map(|v| vec![v]).collect(),
        };
    }
    let mut blocks = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..g.vertex_count()).rev().map(|v| vec![v]).collect();
    while let Some(path) = stack.pop() {
        if path.len() == k {
            blocks.push(path);
            continue;
        }
        let last = *path.last().expect("paths are nonempty");
        for &w in g.successors(last).iter().rev() {
            let mut next = path.clone();
            next.push(w);
            stack.push(next);
        }
    }

    let lookup: HashMap<&[usize], usize> = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_slice(), i))
        .collect();
    let mut graph = DirectedGraph::new();
    for b in &blocks {
        let base = b.iter().map(|&v| g.name(v)).collect::<Vec<_>>().join(".");
        let mut name = base.clone();
        let mut n = 1;
        while graph.index_of(&name).is_some() {
            name = format!("{base}~{n}");
            n += 1;
        }
        graph.add_vertex(name).expect("fresh name");
    }
    let mut next = Vec::with_capacity(k);
    for (i, b) in blocks.iter().enumerate() {
        for &w in g.successors(b[k - 1]) {
            next.clear();
            next.extend_from_slice(&b[1..]);
            next.push(w);
            let j = lookup[next.as_slice()];
            graph.insert_edge(i, j);
        }
    }
    BlockPresentation { graph, blocks }
}

pub fn higher_block_graph(g: &DirectedGraph, k: usize) -> DirectedGraph {
    block_presentation(g, k).graph
}

fn symbols(g: &DirectedGraph, path: &[usize]) -> Vec<String> {
    path.iter().map(|&v| g.name(v).to_string()).collect()
}

/// Whether a word of symbols is a path of `g`; returns the vertex indices.
pub(crate) fn word_as_path(g: &DirectedGraph, word: &[String]) -> Option<Vec<usize>> {
    let path: Vec<usize> = word.iter().map(|s| g.index_of(s)).collect::<Option<_>>()?;
    path.windows(2).all(|w| g.has_edge(w[0], w[1])).then_some(path)
}

/// First defect found when reading `phi` on `g`: a key that is not a path
/// of `keys_in` (a supergraph of `g`) or a block of `g` with no key. Keys
/// are checked in table order, then blocks in presentation order.
pub(crate) fn table_defect(
    keys_in: &DirectedGraph,
    g: &DirectedGraph,
    blocks: &[Vec<usize>],
    phi: &BlockMap,
) -> Option<(Vec<String>, String)> {
    for (word, _) in phi.iter() {
        if word_as_path(keys_in, word).is_none() {
            return Some((word.to_vec(), "not a path of the source graph".into()));
        }
    }
    for b in blocks {
        let word = symbols(g, b);
        if phi.get(&word).is_none() {
            return Some((word, "path of the source graph has no image".into()));
        }
    }
    None
}

/// Recodes a `k`-block map on `g` as a 1-block map on `g^[k]`.
pub fn lift_block_map(g: &DirectedGraph, phi: &BlockMap) -> Result<(DirectedGraph, BlockMap)> {
    let pres = block_presentation(g, phi.block_size());
    if let Some((word, problem)) = table_defect(g, g, &pres.blocks, phi) {
        return Err(Error::InvalidCode(format!("`{}`: {problem}", word.join(" "))));
    }
    let mut lifted = BlockMap::new(1, 0)?;
    for (i, b) in pres.blocks.iter().enumerate() {
        let image = phi.get(&symbols(g, b)).expect("checked total");
        lifted.insert(vec![pres.graph.name(i).to_string()], image)?;
    }
    Ok((pres.graph, lifted))
}

/// The vertex presentation of an edge shift: edges become vertices and
/// consecutive edges become edges.
pub fn edge_to_vertex(g: &MultiGraph) -> DirectedGraph {
    let mut out = DirectedGraph::new();
    for e in g.edges() {
        out.add_vertex(e.label.clone()).expect("labels are unique");
    }
    let mut leaving: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        leaving[e.source].push(i);
    }
    for (i, e) in g.edges().iter().enumerate() {
        for &j in &leaving[e.target] {
            out.insert_edge(i, j);
        }
    }
    out
}

pub fn enumerate_cycles(g: &DirectedGraph, n: usize) -> Result<Vec<Vec<String>>> {
    enumerate_cycles_with_budget(g, n, DEFAULT_CYCLE_BUDGET)
}

/// All cycles of length exactly `n`, every rotation listed separately, in
/// lexicographic order of vertex indices. The budget bounds the number of
/// partial paths explored.
pub fn enumerate_cycles_with_budget(g: &DirectedGraph, n: usize, budget: u64) -> Result<Vec<Vec<String>>> {
    assert!(n >= 1, "cycle length must be positive");
    let mut out = Vec::new();
    let mut nodes = 0u64;
    for s in 0..g.vertex_count() {
        let mut path = vec![s];
        let mut cursor = vec![0usize];
        while let Some(pos) = cursor.last_mut() {
            let v = *path.last().expect("nonempty");
            if path.len() == n {
                if g.has_edge(v, s) {
                    out.push(symbols(g, &path));
                }
                path.pop();
                cursor.pop();
                continue;
            }
            let succ = g.successors(v);
            if *pos == succ.len() {
                path.pop();
                cursor.pop();
                continue;
            }
            let w = succ[*pos];
            *pos += 1;
            nodes += 1;
            if nodes > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            path.push(w);
            cursor.push(0);
        }
    }
    Ok(out)
}

/// Symbol-wise image of a cycle under a 1-block map.
pub fn cycle_image(phi: &BlockMap, cycle: &[String]) -> Result<Vec<String>> {
    if phi.block_size() != 1 {
        return Err(Error::Contract("cycle images are taken under 1-block maps".into()));
    }
    cycle
        .iter()
        .map(|s| {
            phi.get_symbol(s)
                .map(str::to_string)
                .ok_or_else(|| Error::InvalidCode(format!("symbol `{s}` has no image")))
        })
        .collect()
}

/// The graph on pairs `(x, y)` with equal images, with coordinate-wise edges
/// between such pairs. `pair_id(x, y)` is a dense index.
pub(crate) struct PairGraph {
    pub pairs: Vec<(usize, usize)>,
    pub adj: Vec<Vec<usize>>,
    class: Vec<usize>,
    pos: Vec<usize>,
    offset: Vec<usize>,
    size: Vec<usize>,
}

impl PairGraph {
    /// `image` assigns each vertex of `g` an arbitrary class id.
    pub fn build(g: &DirectedGraph, image: &[usize]) -> Self {
        let n = g.vertex_count();
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut class = vec![0; n];
        let mut pos = vec![0; n];
        let mut size: Vec<usize> = Vec::new();
        let mut members: Vec<Vec<usize>> = Vec::new();
        for v in 0..n {
            let c = *ids.entry(image[v]).or_insert_with(|| {
                size.push(0);
                members.push(Vec::new());
                size.len() - 1
            });
            class[v] = c;
            pos[v] = size[c];
            size[c] += 1;
            members[c].push(v);
        }
        let mut offset = Vec::with_capacity(size.len());
        let mut total = 0;
        for &s in &size {
            offset.push(total);
            total += s * s;
        }
        let mut pairs = Vec::with_capacity(total);
        for m in &members {
            for &x in m {
                for &y in m {
                    pairs.push((x, y));
                }
            }
        }
        let mut pg = PairGraph { pairs, adj: Vec::new(), class, pos, offset, size };
        let adj = pg
            .pairs
            .par_iter()
            .map(|&(x, y)| {
                let mut row = Vec::new();
                for &x2 in g.successors(x) {
                    for &y2 in g.successors(y) {
                        if pg.class[x2] == pg.class[y2] {
                            row.push(pg.id(x2, y2));
                        }
                    }
                }
                row.sort_unstable();
                row
            })
            .collect();
        pg.adj = adj;
        pg
    }

    pub fn id(&self, x: usize, y: usize) -> usize {
        let c = self.class[x];
        debug_assert_eq!(c, self.class[y]);
        self.offset[c] + self.pos[x] * self.size[c] + self.pos[y]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn is_diagonal(&self, p: usize) -> bool {
        let (x, y) = self.pairs[p];
        x == y
    }

    /// Some SCC with an edge that contains an off-diagonal pair, as a cycle
    /// of pairs through the least such pair.
    pub fn off_diagonal_cycle(&self) -> Option<Vec<(usize, usize)>> {
        let comps = components_of(&self.adj);
        let mut comp_of = vec![usize::MAX; self.pairs.len()];
        let mut best: Option<usize> = None;
        for (c, members) in comps.iter().enumerate() {
            if !component_has_edge(&self.adj, members) {
                continue;
            }
            for &p in members {
                comp_of[p] = c;
            }
            if let Some(&p) = members.iter().find(|&&p| !self.is_diagonal(p)) {
                best = Some(best.map_or(p, |b: usize| b.min(p)));
            }
        }
        let start = best?;
        let comp = comp_of[start];
        // BFS inside the component back to `start`.
        let mut parent: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        let mut seen = HashSet::from([start]);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if comp_of[w] != comp {
                    continue;
                }
                if w == start {
                    let mut cycle = vec![u];
                    let mut x = u;
                    while x != start {
                        x = parent[&x];
                        cycle.push(x);
                    }
                    cycle.reverse();
                    return Some(cycle.into_iter().map(|p| self.pairs[p]).collect());
                }
                if seen.insert(w) {
                    parent.insert(w, u);
                    queue.push_back(w);
                }
            }
        }
        unreachable!("a component with an edge has a cycle through each member")
    }

    /// A path diagonal, off-diagonal.., diagonal (at least one off-diagonal
    /// pair), found by BFS from every diagonal pair at once.
    pub fn diamond_path(&self) -> Option<Vec<(usize, usize)>> {
        let n = self.pairs.len();
        let mut parent = vec![usize::MAX; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for d in (0..n).filter(|&p| self.is_diagonal(p)) {
            for &w in &self.adj[d] {
                if !self.is_diagonal(w) && !seen[w] {
                    seen[w] = true;
                    parent[w] = d;
                    queue.push_back(w);
                }
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if self.is_diagonal(w) {
                    let mut path = vec![w, u];
                    let mut x = u;
                    while !self.is_diagonal(x) {
                        x = parent[x];
                        path.push(x);
                    }
                    path.reverse();
                    return Some(path.into_iter().map(|p| self.pairs[p]).collect());
                }
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Two words with common first and last `k` symbols and equal image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diamond {
    pub prefix: Vec<String>,
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub suffix: Vec<String>,
}

impl From<Diamond> for Witness {
    fn from(d: Diamond) -> Self {
        Witness::Diamond { prefix: d.prefix, left: d.left, right: d.right, suffix: d.suffix }
    }
}

/// Reads a path of pairs in `g^[k]` back as a diamond in the symbols of `g`.
pub(crate) fn diamond_from_pairs(
    g: &DirectedGraph,
    blocks: &[Vec<usize>],
    path: &[(usize, usize)],
) -> Diamond {
    let k = blocks[path[0].0].len();
    let spell = |pick: fn(&(usize, usize)) -> usize| -> Vec<String> {
        let mut word = symbols(g, &blocks[pick(&path[0])]);
        for p in &path[1..] {
            word.push(g.name(*blocks[pick(p)].last().expect("nonempty")).to_string());
        }
        word
    };
    let left = spell(|p| p.0);
    let right = spell(|p| p.1);
    let r = path.len() - 1;
    Diamond {
        prefix: left[..k].to_vec(),
        left: left[k..r].to_vec(),
        right: right[k..r].to_vec(),
        suffix: left[r..].to_vec(),
    }
}

/// Searches for a diamond collapsed by `phi` among the words of the shift
/// presented by `g`.
pub fn collapses_diamond(g: &DirectedGraph, phi: &BlockMap) -> Result<Option<Diamond>> {
    let trimmed = trim_to_essential(g);
    let pres = block_presentation(&trimmed, phi.block_size());
    if let Some((word, problem)) = table_defect(g, &trimmed, &pres.blocks, phi) {
        return Err(Error::InvalidCode(format!("`{}`: {problem}", word.join(" "))));
    }
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let image: Vec<usize> = pres
        .blocks
        .iter()
        .map(|b| {
            let sym = phi.get(&symbols(&trimmed, b)).expect("checked total");
            let next = ids.len();
            *ids.entry(sym).or_insert(next)
        })
        .collect();
    let pg = PairGraph::build(&pres.graph, &image);
    Ok(pg
        .diamond_path()
        .map(|path| diamond_from_pairs(&trimmed, &pres.blocks, &path)))
}

/// Default iteration cap for [`entropy_estimate`].
pub const DEFAULT_ENTROPY_ITERATIONS: usize = 1_000_000;

/// `log2` of the spectral radius of the adjacency matrix of the essential
/// part of `g`, accurate to `tol`.
pub fn entropy_estimate(g: &DirectedGraph, tol: f64) -> Result<f64> {
    entropy_estimate_with(g, tol, DEFAULT_ENTROPY_ITERATIONS)
}

/// Power iteration on `A + I` for every nontrivial strongly connected
/// component, started from the all-ones vector. `A + I` is primitive there,
/// so the Collatz–Wielandt quotients `min/max (Bx)_i / x_i` close in on
/// `rho(A) + 1` from both sides; iteration stops once the bracket for
/// `log2 rho(A)` is narrower than `tol`.
pub fn entropy_estimate_with(g: &DirectedGraph, tol: f64, max_iter: usize) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Contract("tolerance must be positive".into()));
    }
    let g = trim_to_essential(g);
    if g.is_empty() {
        return Err(Error::EmptyShift);
    }
    let comps = components_of(g.adjacency());
    let mut best = f64::NEG_INFINITY;
    for comp in comps.iter().filter(|c| component_has_edge(g.adjacency(), c)) {
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let succ: Vec<Vec<usize>> = comp
            .iter()
            .map(|&v| g.successors(v).iter().filter_map(|w| local.get(w).copied()).collect())
            .collect();
        best = best.max(component_entropy(&succ, tol, max_iter)?);
    }
    Ok(best)
}

fn component_entropy(succ: &[Vec<usize>], tol: f64, max_iter: usize) -> Result<f64> {
    let n = succ.len();
    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    for _ in 0..max_iter {
        for i in 0..n {
            y[i] = x[i] + succ[i].iter().map(|&j| x[j]).sum::<f64>();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let q = y[i] / x[i];
            lo = lo.min(q);
            hi = hi.max(q);
        }
        // every row of A has a nonzero entry, so lo >= 2 and rho(A) >= 1
        let (lo, hi) = ((lo - 1.0).log2(), (hi - 1.0).log2());
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
        let scale = y.iter().cloned().fold(0.0, f64::max);
        for i in 0..n {
            x[i] = y[i] / scale;
        }
    }
    Err(Error::NoConvergence(max_iter))
}
