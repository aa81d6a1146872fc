//! JSON graph files.
//!
//! ```json
//! {
//!   "nodes": ["s", "r", "t"],
//!   "source": "s",
//!   "destination": "t",
//!   "edges": [
//!     {"from": "s", "to": "r", "channel": {"kind": "bsc", "p": 0.1}},
//!     {"from": "r", "to": "t", "channel": {"kind": "matrix", "rows": [[0.9, 0.1], [0.2, 0.8]]}, "id": 7}
//!   ]
//! }
//! ```
//!
//! Edges without an `id` get their position in the list.

use std::collections::HashMap;
use std::path::Path;

use netexp_core::graph::{ChannelEdge, ChannelGraph};
use netexp_core::Dmc;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum GraphFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed graph file: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl ToString) -> GraphFileError {
    GraphFileError::Invalid {
        field: field.into(),
        message: message.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelSpec {
    Bsc { p: f64 },
    Bec { p: f64 },
    Ksym { k: usize, p: f64 },
    Matrix { rows: Vec<Vec<f64>> },
}

impl ChannelSpec {
    pub fn build(&self) -> netexp_core::Result<Dmc> {
        match self {
            Self::Bsc { p } => Dmc::bsc(*p),
            Self::Bec { p } => Dmc::bec(*p),
            Self::Ksym { k, p } => Dmc::ksym(*k, *p),
            Self::Matrix { rows } => Dmc::new(rows),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub from: String,
    pub to: String,
    pub channel: ChannelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: Vec<String>,
    pub source: String,
    pub destination: String,
    pub edges: Vec<EdgeSpec>,
}

impl GraphFile {
    pub fn parse(text: &str) -> Result<Self, GraphFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, GraphFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| GraphFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Validates ids and channels and builds the core graph.
    pub fn to_graph(&self) -> Result<ChannelGraph, GraphFileError> {
        let mut index = HashMap::with_capacity(self.nodes.len());
        for (i, name) in self.nodes.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(invalid(format!("nodes[{i}]"), format!("duplicate node id `{name}`")));
            }
        }
        let lookup = |field: String, name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| invalid(field, format!("unknown node `{name}`")))
        };
        let source = lookup("source".into(), &self.source)?;
        let destination = lookup("destination".into(), &self.destination)?;
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut seen_ids = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            let id = e.id.unwrap_or(i);
            if let Some(prev) = seen_ids.insert(id, i) {
                return Err(invalid(format!("edges[{i}].id"), format!("id {id} already used by edges[{prev}]")));
            }
            edges.push(ChannelEdge {
                tail: lookup(format!("edges[{i}].from"), &e.from)?,
                head: lookup(format!("edges[{i}].to"), &e.to)?,
                channel: e.channel.build().map_err(|err| invalid(format!("edges[{i}].channel"), err))?,
                id,
            });
        }
        ChannelGraph::new(self.nodes.len(), source, destination, edges, Some(self.nodes.clone()))
            .map_err(|err| invalid("graph", err))
    }

    /// Same graph with every edge id explicit and edges ordered by id.
    pub fn normalized(&self) -> Self {
        let mut edges: Vec<EdgeSpec> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeSpec {
                id: Some(e.id.unwrap_or(i)),
                ..e.clone()
            })
            .collect();
        edges.sort_by_key(|e| e.id);
        Self {
            edges,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph files always serialize");
        s.push('\n');
        s
    }
}
