//! JSON documents for graphs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, MultiGraph};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDocument {
    vertices: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multi_edges: Option<Vec<(String, String, String)>>,
}

/// Either presentation, as read from a document.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyGraph {
    Vertex(DirectedGraph),
    Edge(MultiGraph),
}

pub fn parse_any_graph(text: &str) -> Result<AnyGraph> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    match (doc.edges, doc.multi_edges) {
        (Some(_), Some(_)) => Err(Error::GraphFormat(
            "a document has either \"edges\" or \"multi_edges\", not both".into(),
        )),
        (edges, None) => Ok(AnyGraph::Vertex(DirectedGraph::from_edges(
            &doc.vertices,
            &edges.unwrap_or_default(),
        )?)),
        (None, Some(multi)) => Ok(AnyGraph::Edge(MultiGraph::from_edges(&doc.vertices, &multi)?)),
    }
}

pub fn parse_graph(text: &str) -> Result<DirectedGraph> {
    match parse_any_graph(text)? {
        AnyGraph::Vertex(g) => Ok(g),
        AnyGraph::Edge(_) => Err(Error::GraphFormat("expected \"edges\", found \"multi_edges\"".into())),
    }
}

pub fn parse_multigraph(text: &str) -> Result<MultiGraph> {
    match parse_any_graph(text)? {
        AnyGraph::Edge(g) => Ok(g),
        AnyGraph::Vertex(_) => Err(Error::GraphFormat("expected \"multi_edges\"".into())),
    }
}

pub fn graph_to_value(g: &DirectedGraph) -> serde_json::Value {
    let doc = GraphDocument {
        vertices: g.names().to_vec(),
        edges: Some(g.edge_names()),
        multi_edges: None,
    };
    serde_json::to_value(doc).expect("graph documents serialize")
}

pub fn multigraph_to_value(g: &MultiGraph) -> serde_json::Value {
    let doc = GraphDocument {
        vertices: g.names().to_vec(),
        edges: None,
        multi_edges: Some(
            g.edges()
                .iter()
                .map(|e| (e.label.clone(), g.name(e.source).to_string(), g.name(e.target).to_string()))
                .collect(),
        ),
    };
    serde_json::to_value(doc).expect("graph documents serialize")
}

pub fn graph_to_json(g: &DirectedGraph) -> String {
    graph_to_value(g).to_string()
}

pub fn multigraph_to_json(g: &MultiGraph) -> String {
    multigraph_to_value(g).to_string()
}
