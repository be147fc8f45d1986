//! The reduction from hitting set to minimizing a 1-block image, and the
//! amalgamation schedule that realizes a hitting set inside it.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::structure::{attach_weight_widget, StructurePartition, WeightWidget};
use crate::amalgamation::{AmalgamationKind, AmalgamationStep};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::search::HittingSetInstance;

#[derive(Clone, Copy, Debug)]
pub struct ReductionOptions {
    /// Widget parameter; `None` means `5mn` (rounded up to even).
    pub k: Option<usize>,
    /// `false` stops after the connectors and the `alpha` wiring.
    pub widgets: bool,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        Self { k: None, widgets: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WidgetRole {
    /// `weight[S_i, {s, beta}]`
    Incidence { set: String, element: String },
    /// `weight[hit(s), {s}]`
    Element { element: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidgetRecord {
    pub role: WidgetRole,
    pub widget: WeightWidget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMetadata {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "K")]
    pub k: usize,
    /// `K` below `5mn`: fine for exercising the schedule, too small for the
    /// hardness argument.
    pub test_scale: bool,
    /// `S1..Sm`, in instance order.
    pub sets: Vec<String>,
    pub set_members: Vec<Vec<String>>,
    pub universe: Vec<String>,
    pub alpha: String,
    pub beta: String,
    pub widgets: Vec<WidgetRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HittingSetReduction {
    pub graph: DirectedGraph,
    pub partition: StructurePartition,
    pub metadata: ReductionMetadata,
}

pub(crate) fn connector_name(set: &str, target: &str) -> String {
    format!("b[{set},{target}]")
}

pub fn hitting_set_reduction(inst: &HittingSetInstance, opts: ReductionOptions) -> Result<HittingSetReduction> {
    inst.validate()?;
    let (m, n) = (inst.sets.len(), inst.universe.len());
    if m == 0 {
        return Err(Error::Gadget("the instance has no sets".into()));
    }
    let used: HashSet<&str> = inst.sets.iter().flatten().map(String::as_str).collect();
    if let Some(x) = inst.universe.iter().find(|x| !used.contains(x.as_str())) {
        return Err(Error::Gadget(format!("element `{x}` is in no set")));
    }
    let full_k = 5 * m * n;
    let k = match opts.k {
        Some(k) if k < 2 || k % 2 == 1 => {
            return Err(Error::Gadget(format!("widget parameter K must be even and at least 2, got {k}")))
        }
        Some(k) => k,
        None => (full_k + full_k % 2).max(2),
    };

    let sets: Vec<String> = (1..=m).map(|i| format!("S{i}")).collect();
    let (alpha, beta) = ("alpha".to_string(), "beta".to_string());
    let mut connectors = Vec::new();
    for (si, members) in sets.iter().zip(&inst.sets) {
        for s in members {
            connectors.push((si.clone(), s.clone()));
        }
    }
    for si in &sets {
        connectors.push((si.clone(), beta.clone()));
    }

    let mut g = DirectedGraph::new();
    let b_names: Vec<String> = connectors.iter().map(|(a, c)| connector_name(a, c)).collect();
    let all = sets.iter().chain(&inst.universe).chain([&beta]).chain(&b_names).chain([&alpha]);
    for name in all {
        g.add_vertex(name.clone())
            .map_err(|_| Error::Gadget(format!("vertex name `{name}` is used twice")))?;
    }
    let id = |g: &DirectedGraph, n: &str| g.index_of(n).expect("just added");
    for ((a, c), b) in connectors.iter().zip(&b_names) {
        let (a, b, c) = (id(&g, a), id(&g, b), id(&g, c));
        g.add_edge(a, b)?;
        g.add_edge(b, c)?;
    }
    let a_id = id(&g, &alpha);
    g.add_edge(a_id, a_id)?;
    for x in sets.iter().chain(&inst.universe).chain([&beta]) {
        let x = id(&g, x);
        g.add_edge(x, x)?;
        g.add_edge(x, a_id)?;
        g.add_edge(a_id, x)?;
    }
    let mut partition = StructurePartition {
        alpha: alpha.clone(),
        a: sets.clone(),
        b: b_names,
        c: inst.universe.iter().cloned().chain([beta.clone()]).collect(),
    };

    let mut widgets = Vec::new();
    if opts.widgets {
        let mut plan = Vec::new();
        for (si, members) in sets.iter().zip(&inst.sets) {
            for s in members {
                let role = WidgetRole::Incidence { set: si.clone(), element: s.clone() };
                plan.push((role, vec![si.clone()], vec![s.clone(), beta.clone()]));
            }
        }
        for s in &inst.universe {
            let hit: Vec<String> =
                sets.iter().zip(&inst.sets).filter(|(_, mem)| mem.contains(s)).map(|(si, _)| si.clone()).collect();
            plan.push((WidgetRole::Element { element: s.clone() }, hit, vec![s.clone()]));
        }
        for (role, a_star, c_star) in plan {
            let (next, p, widget) = attach_weight_widget(&g, &partition, &a_star, &c_star, k)?;
            g = next;
            partition = p;
            widgets.push(WidgetRecord { role, widget });
        }
    }

    let metadata = ReductionMetadata {
        m,
        n,
        k,
        test_scale: k < full_k,
        sets,
        set_members: inst.sets.clone(),
        universe: inst.universe.clone(),
        alpha,
        beta,
        widgets,
    };
    Ok(HittingSetReduction { graph: g, partition, metadata })
}

/// Merges `cur` with each `b` of the widget in turn: odd positions share the
/// in-neighbourhood, even positions the out-neighbourhood.
fn absorb_widget(cur: &mut String, widget: &WeightWidget, steps: &mut Vec<AmalgamationStep>) {
    for (i, b) in widget.b.iter().enumerate() {
        let kind = if i % 2 == 0 { AmalgamationKind::InAmalgamation } else { AmalgamationKind::OutAmalgamation };
        merge(cur, b, kind, steps);
    }
}

fn merge(cur: &mut String, other: &str, kind: AmalgamationKind, steps: &mut Vec<AmalgamationStep>) {
    let new_name = format!("{cur}+{other}");
    steps.push(AmalgamationStep { kind, merged: (cur.clone(), other.to_string()), new_name: new_name.clone() });
    *cur = new_name;
}

/// The amalgamations that shrink the reduction graph by at least
/// `(m + n - t) K` vertices given a hitting set of size `t`.
pub fn activation_schedule(red: &HittingSetReduction, hitting_set: &[String]) -> Result<Vec<AmalgamationStep>> {
    let md = &red.metadata;
    let chosen: BTreeSet<&str> = hitting_set.iter().map(String::as_str).collect();
    if let Some(x) = chosen.iter().find(|x| !md.universe.iter().any(|u| u == *x)) {
        return Err(Error::Contract(format!("`{x}` is not an element of the universe")));
    }
    let widget_for = |role: &WidgetRole| md.widgets.iter().find(|w| &w.role == role).map(|w| &w.widget);

    let mut steps = Vec::new();
    for (si, members) in md.sets.iter().zip(&md.set_members) {
        let pick = md
            .universe
            .iter()
            .find(|u| chosen.contains(u.as_str()) && members.contains(u))
            .ok_or_else(|| Error::Contract(format!("not a hitting set: misses {si}")))?;
        let mut cur = connector_name(si, pick);
        merge(&mut cur, &connector_name(si, &md.beta), AmalgamationKind::InAmalgamation, &mut steps);
        if let Some(w) = widget_for(&WidgetRole::Incidence { set: si.clone(), element: pick.clone() }) {
            absorb_widget(&mut cur, w, &mut steps);
        }
    }
    for s in md.universe.iter().filter(|u| !chosen.contains(u.as_str())) {
        let mut hit = md.sets.iter().zip(&md.set_members).filter(|(_, mem)| mem.contains(s)).map(|(si, _)| si);
        let mut cur = connector_name(hit.next().expect("every element is in a set"), s);
        for si in hit {
            merge(&mut cur, &connector_name(si, s), AmalgamationKind::OutAmalgamation, &mut steps);
        }
        if let Some(w) = widget_for(&WidgetRole::Element { element: s.clone() }) {
            absorb_widget(&mut cur, w, &mut steps);
        }
    }
    Ok(steps)
}
