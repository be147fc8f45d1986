use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_essential, DirectedGraph};

/// The partition `{alpha}, A, B, C` behind the structure property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructurePartition {
    pub alpha: String,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightWidget {
    pub name: String,
    #[serde(rename = "K")]
    pub k: usize,
    pub a: Vec<String>,
    pub b: Vec<String>,
    pub c: Vec<String>,
    pub a_star: Vec<String>,
    pub c_star: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Alpha,
    A,
    B,
    C,
}

fn parts(g: &DirectedGraph, p: &StructurePartition) -> Option<Vec<Part>> {
    let mut part = vec![None; g.vertex_count()];
    let groups: [(Part, &[String]); 4] = [
        (Part::Alpha, std::slice::from_ref(&p.alpha)),
        (Part::A, &p.a),
        (Part::B, &p.b),
        (Part::C, &p.c),
    ];
    for (kind, names) in groups {
        for n in names {
            let v = g.index_of(n)?;
            if part[v].replace(kind).is_some() {
                return None;
            }
        }
    }
    part.into_iter().collect()
}

/// Essential, and `p` partitions the vertices so that
/// 1. `N+(alpha) = N-(alpha) = {alpha} ∪ A ∪ C`;
/// 2. every `a` in `A` has `N-(a) = {a, alpha}` and
///    `{a, alpha} ⊆ N+(a) ⊆ {a, alpha} ∪ B`;
/// 3. every `c` in `C` has `N+(c) = {c, alpha}` and
///    `{c, alpha} ⊆ N-(c) ⊆ {c, alpha} ∪ B`;
/// 4. every `b` in `B` has `N-(b) ⊆ A` and `N+(b) ⊆ C`.
pub fn has_structure_property(g: &DirectedGraph, p: &StructurePartition) -> bool {
    let Some(part) = parts(g, p) else { return false };
    if !is_essential(g) {
        return false;
    }
    let alpha = g.index_of(&p.alpha).expect("checked");
    let set = |vs: &[usize]| vs.iter().copied().collect::<HashSet<usize>>();

    let ring: HashSet<usize> = (0..g.vertex_count())
        .filter(|&v| matches!(part[v], Part::Alpha | Part::A | Part::C))
        .collect();
    if set(g.successors(alpha)) != ring || set(g.predecessors(alpha)) != ring {
        return false;
    }
    (0..g.vertex_count()).all(|v| {
        let (succ, pred) = (g.successors(v), g.predecessors(v));
        let base = HashSet::from([v, alpha]);
        match part[v] {
            Part::Alpha => true,
            Part::A => {
                set(pred) == base
                    && base.iter().all(|x| succ.contains(x))
                    && succ.iter().all(|&w| base.contains(&w) || part[w] == Part::B)
            }
            Part::C => {
                set(succ) == base
                    && base.iter().all(|x| pred.contains(x))
                    && pred.iter().all(|&w| base.contains(&w) || part[w] == Part::B)
            }
            Part::B => pred.iter().all(|&w| part[w] == Part::A) && succ.iter().all(|&w| part[w] == Part::C),
        }
    })
}

/// Attaches `weight[A*, C*]` with parameter `K`: new vertices
/// `A_w = a1..a{K/2}`, `B_w = b1..bK`, `C_w = c1..c{K/2}` with
/// `b{2i-1}: [A* ∪ {a1..a{i-1}}, c{i}]` and `b{2i}: [a{i}, C* ∪ {c1..c{i}}]`,
/// plus the self-loops and `alpha` edges that keep the structure property.
/// The widget takes the first free name `w<id>`.
pub fn attach_weight_widget(
    g: &DirectedGraph,
    p: &StructurePartition,
    a_star: &[String],
    c_star: &[String],
    k: usize,
) -> Result<(DirectedGraph, StructurePartition, WeightWidget)> {
    if k < 2 || k % 2 != 0 {
        return Err(Error::Gadget(format!("widget parameter K must be even and at least 2, got {k}")));
    }
    if a_star.is_empty() || c_star.is_empty() {
        return Err(Error::Gadget("attachment sets must be nonempty".into()));
    }
    if let Some(x) = a_star.iter().find(|x| !p.a.contains(x)) {
        return Err(Error::Gadget(format!("`{x}` is not in A")));
    }
    if let Some(x) = c_star.iter().find(|x| !p.c.contains(x)) {
        return Err(Error::Gadget(format!("`{x}` is not in C")));
    }
    if !has_structure_property(g, p) {
        return Err(Error::Gadget("host graph does not have the structure property".into()));
    }
    let id = (1..)
        .find(|i| {
            let prefix = format!("w{i}__");
            !g.names().iter().any(|n| n.starts_with(&prefix))
        })
        .expect("some id is free");
    let name = format!("w{id}");
    let half = k / 2;
    let widget = WeightWidget {
        name: name.clone(),
        k,
        a: (1..=half).map(|i| format!("{name}__a{i}")).collect(),
        b: (1..=k).map(|i| format!("{name}__b{i}")).collect(),
        c: (1..=half).map(|i| format!("{name}__c{i}")).collect(),
        a_star: a_star.to_vec(),
        c_star: c_star.to_vec(),
    };

    let mut out = g.clone();
    for n in widget.a.iter().chain(&widget.b).chain(&widget.c) {
        out.add_vertex(n.clone())?;
    }
    let id_of = |out: &DirectedGraph, n: &str| out.index_of(n).expect("present");
    let alpha = id_of(&out, &p.alpha);
    let a_star: Vec<usize> = a_star.iter().map(|n| id_of(&out, n)).collect();
    let c_star: Vec<usize> = c_star.iter().map(|n| id_of(&out, n)).collect();
    let aw: Vec<usize> = widget.a.iter().map(|n| id_of(&out, n)).collect();
    let bw: Vec<usize> = widget.b.iter().map(|n| id_of(&out, n)).collect();
    let cw: Vec<usize> = widget.c.iter().map(|n| id_of(&out, n)).collect();
    for i in 0..half {
        let (odd, even) = (bw[2 * i], bw[2 * i + 1]);
        for &x in a_star.iter().chain(&aw[..i]) {
            out.add_edge(x, odd)?;
        }
        out.add_edge(odd, cw[i])?;
        out.add_edge(aw[i], even)?;
        for &y in c_star.iter().chain(&cw[..=i]) {
            out.add_edge(even, y)?;
        }
    }
    for &x in aw.iter().chain(&cw) {
        out.add_edge(x, x)?;
        out.add_edge(x, alpha)?;
        out.add_edge(alpha, x)?;
    }

    let mut partition = p.clone();
    partition.a.extend(widget.a.iter().cloned());
    partition.b.extend(widget.b.iter().cloned());
    partition.c.extend(widget.c.iter().cloned());
    Ok((out, partition, widget))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// alpha with A = {x}, C = {y} and one B vertex v: x -> v -> y.
    fn host() -> (DirectedGraph, StructurePartition) {
        let g = DirectedGraph::from_edges(
            &["alpha", "x", "v", "y"],
            &[
                ("alpha", "alpha"),
                ("alpha", "x"),
                ("x", "alpha"),
                ("x", "x"),
                ("alpha", "y"),
                ("y", "alpha"),
                ("y", "y"),
                ("x", "v"),
                ("v", "y"),
            ],
        )
        .unwrap();
        let p = StructurePartition {
            alpha: "alpha".into(),
            a: vec!["x".into()],
            b: vec!["v".into()],
            c: vec!["y".into()],
        };
        (g, p)
    }

    fn names(g: &DirectedGraph, vs: &[usize]) -> Vec<String> {
        vs.iter().map(|&v| g.name(v).to_string()).collect()
    }

    #[test]
    fn host_has_the_property() {
        let (g, p) = host();
        assert!(has_structure_property(&g, &p));
        let mut no_loop = DirectedGraph::new();
        for n in g.names() {
            no_loop.add_vertex(n.clone()).unwrap();
        }
        for (u, v) in g.edges().filter(|&(u, v)| !(u == 0 && v == 0)) {
            no_loop.add_edge(u, v).unwrap();
        }
        assert!(!has_structure_property(&no_loop, &p));
        let bad = StructurePartition { b: vec![], ..p.clone() };
        assert!(!has_structure_property(&g, &bad));
    }

    #[test]
    fn widget_with_k_four_shape() {
        let (g, p) = host();
        let (out, q, w) = attach_weight_widget(&g, &p, &["x".into()], &["y".into()], 4).unwrap();
        assert!(has_structure_property(&out, &q));
        assert_eq!(out.vertex_count(), g.vertex_count() + 8);
        let nb = |i: usize| out.vertex(&w.b[i]).unwrap();
        let ins = |i| names(&out, out.predecessors(nb(i)));
        let outs = |i| names(&out, out.successors(nb(i)));
        assert_eq!(ins(0), ["x"]);
        assert_eq!(outs(0), ["w1__c1"]);
        assert_eq!(ins(1), ["w1__a1"]);
        assert_eq!(outs(1), ["y", "w1__c1"]);
        assert_eq!(ins(2), ["x", "w1__a1"]);
        assert_eq!(outs(2), ["w1__c2"]);
        assert_eq!(ins(3), ["w1__a2"]);
        assert_eq!(outs(3), ["y", "w1__c1", "w1__c2"]);

        // the activator v can absorb the whole widget
        use crate::amalgamation::{apply_schedule, AmalgamationKind::*, AmalgamationStep};
        let mut cur = "v".to_string();
        let mut steps = Vec::new();
        for (i, b) in w.b.iter().enumerate() {
            let kind = if i % 2 == 0 { InAmalgamation } else { OutAmalgamation };
            let new = format!("{cur}+{b}");
            steps.push(AmalgamationStep { kind, merged: (cur.clone(), b.clone()), new_name: new.clone() });
            cur = new;
        }
        let (end, _) = apply_schedule(&out, &steps).unwrap();
        assert_eq!(end.vertex_count(), out.vertex_count() - 4);

        // a second widget gets the next name
        let (_, _, w2) = attach_weight_widget(&out, &q, &["x".into()], &["y".into()], 2).unwrap();
        assert_eq!(w2.name, "w2");
    }

    #[test]
    fn widget_with_k_two() {
        let (g, p) = host();
        let (out, q, w) = attach_weight_widget(&g, &p, &["x".into()], &["y".into()], 2).unwrap();
        assert!(has_structure_property(&out, &q));
        let b1 = out.vertex(&w.b[0]).unwrap();
        let b2 = out.vertex(&w.b[1]).unwrap();
        assert_eq!(names(&out, out.predecessors(b1)), ["x"]);
        assert_eq!(names(&out, out.successors(b1)), ["w1__c1"]);
        assert_eq!(names(&out, out.predecessors(b2)), ["w1__a1"]);
        assert_eq!(names(&out, out.successors(b2)), ["y", "w1__c1"]);
        assert_eq!(w.a.len() + w.b.len() + w.c.len(), 4);
    }

    #[test]
    fn bad_parameters() {
        let (g, p) = host();
        let x = vec!["x".to_string()];
        let y = vec!["y".to_string()];
        assert!(attach_weight_widget(&g, &p, &x, &y, 3).is_err());
        assert!(attach_weight_widget(&g, &p, &x, &y, 0).is_err());
        assert!(attach_weight_widget(&g, &p, &[], &y, 2).is_err());
        assert!(attach_weight_widget(&g, &p, &y, &y, 2).is_err());
    }
}
