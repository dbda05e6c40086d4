//! Text formats for graphs: DOT, JSON and a flat edge list.
//!
//! Edges always come out in canonical order, so output is byte-stable.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generators::{generate, Family, FamilySpec, GeneratorError};
use crate::graph::{Graph, GraphError, Label};

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("malformed graph document: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error("document does not match {0}")]
    NotFamilyMember(FamilySpec),
    #[error("document names a family but no level count")]
    MissingLevels,
    #[error("unknown format {0:?} (expected dot, json or edgelist)")]
    UnknownFormat(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Dot,
    Json,
    Edgelist,
}

impl FromStr for Format {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" | "gv" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            "edgelist" | "edges" | "txt" => Ok(Format::Edgelist),
            _ => Err(ExportError::UnknownFormat(s.to_string())),
        }
    }
}

/// JSON shape of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    #[serde(default)]
    pub family: Option<Family>,
    #[serde(default)]
    pub n: Option<u32>,
    pub vertices: Vec<Label>,
    pub edges: Vec<[Label; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<BTreeMap<Label, u32>>,
}

impl GraphDocument {
    pub fn from_graph(g: &Graph) -> Self {
        let levels = g.has_levels().then(|| {
            g.labels()
                .iter()
                .map(|&v| (v, g.level_of(v).expect("levels present")))
                .collect()
        });
        GraphDocument {
            family: g.origin().map(|s| s.family),
            n: g.origin().map(|s| s.n),
            vertices: g.labels().to_vec(),
            edges: g.edges().map(|(a, b)| [a, b]).collect(),
            levels,
        }
    }

    /// Rebuilds the graph. A document naming a family must describe exactly
    /// that family member, and yields the generated graph.
    pub fn into_graph(self) -> Result<Graph, ExportError> {
        let edges = self.edges.iter().map(|e| (e[0], e[1]));
        let g = match &self.levels {
            Some(levels) => {
                if let Some(&v) = self.vertices.iter().find(|v| !levels.contains_key(v)) {
                    return Err(GraphError::MissingLevel(v).into());
                }
                let extra = levels.keys().find(|v| !self.vertices.contains(v));
                if let Some(&v) = extra {
                    return Err(GraphError::UnknownVertex(v).into());
                }
                Graph::with_levels(levels, edges)?
            }
            None => Graph::from_edges(self.vertices.iter().copied(), edges)?,
        };
        match (self.family, self.n) {
            (Some(family), Some(n)) => {
                let spec = FamilySpec::new(family, n)?;
                let expected = generate(spec)?;
                let same_structure = expected.labels() == g.labels()
                    && expected.edges().eq(g.edges())
                    && (!g.has_levels() || expected == g);
                if !same_structure {
                    return Err(ExportError::NotFamilyMember(spec));
                }
                Ok(expected)
            }
            (Some(_), None) => Err(ExportError::MissingLevels),
            _ => Ok(g),
        }
    }
}

pub fn to_json(g: &Graph) -> String {
    serde_json::to_string_pretty(&GraphDocument::from_graph(g)).expect("documents serialize")
}

pub fn from_json(text: &str) -> Result<Graph, ExportError> {
    serde_json::from_str::<GraphDocument>(text)?.into_graph()
}

pub fn to_dot(g: &Graph) -> String {
    let name = match g.origin() {
        Some(spec) => format!("\"{spec}\""),
        None => "G".to_string(),
    };
    let mut out = format!("graph {name} {{\n");
    for &v in g.labels() {
        let _ = writeln!(out, "  {v};");
    }
    for (a, b) in g.edges() {
        let _ = writeln!(out, "  {a} -- {b};");
    }
    out.push_str("}\n");
    out
}

pub fn to_edge_list(g: &Graph) -> String {
    g.edges().map(|(a, b)| format!("{a} {b}\n")).collect()
}

pub fn render(g: &Graph, format: Format) -> String {
    match format {
        Format::Dot => to_dot(g),
        Format::Json => to_json(g),
        Format::Edgelist => to_edge_list(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(family: Family, n: u32) -> FamilySpec {
        FamilySpec::new(family, n).unwrap()
    }

    #[test]
    fn sibling_tree_edge_list() {
        let g = generate(spec(Family::SiblingTree, 1)).unwrap();
        assert_eq!(to_edge_list(&g), "1 2\n1 3\n2 3\n");
    }

    #[test]
    fn json_counts_and_round_trip() {
        let g = generate(spec(Family::Hypertree, 3)).unwrap();
        let text = to_json(&g);
        let doc: GraphDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(doc.vertices.len(), 15);
        assert_eq!(doc.edges.len(), 21);
        assert_eq!(doc.family, Some(Family::Hypertree));
        assert_eq!(doc.levels.as_ref().unwrap()[&9], 3);
        let back = from_json(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.origin(), g.origin());
    }

    #[test]
    fn tampered_family_document_is_rejected() {
        let g = generate(spec(Family::Hypertree, 2)).unwrap();
        let mut doc = GraphDocument::from_graph(&g);
        doc.edges.pop();
        assert!(matches!(
            doc.into_graph(),
            Err(ExportError::NotFamilyMember(_))
        ));
    }

    #[test]
    fn generic_document() {
        let text = r#"{"vertices":[1,2,3],"edges":[[2,3],[1,2]]}"#;
        let g = from_json(text).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(!g.has_levels());
        assert!(g.origin().is_none());
        let bad = r#"{"vertices":[1,2],"edges":[[1,5]]}"#;
        assert!(matches!(
            from_json(bad),
            Err(ExportError::Graph(GraphError::UnknownVertex(5)))
        ));
    }

    #[test]
    fn dot_layout() {
        let g = generate(spec(Family::SiblingTree, 1)).unwrap();
        let dot = to_dot(&g);
        assert!(dot.starts_with("graph \"ST(1)\" {\n"));
        let edges: Vec<&str> = dot.lines().filter(|l| l.contains("--")).collect();
        assert_eq!(edges, ["  1 -- 2;", "  1 -- 3;", "  2 -- 3;"]);
        assert!(dot.ends_with("}\n"));
    }

    #[test]
    fn formats_parse() {
        assert_eq!("DOT".parse::<Format>().unwrap(), Format::Dot);
        assert_eq!("edgelist".parse::<Format>().unwrap(), Format::Edgelist);
        assert!("xml".parse::<Format>().is_err());
    }
}
