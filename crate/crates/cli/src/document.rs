//! The JSON graph document: labelled vertices, oriented edges and optional
//! external momenta, with rationals written as strings.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use symanzik_core::rational::{format_rational, parse_rational};
use symanzik_core::symanzik::MomentumAssignment;
use symanzik_core::{Multigraph, Rational, RationalMatrix};

use crate::error::{CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub version: u32,
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub momenta: Option<MomentaRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: usize,
    pub tail: String,
    pub head: String,
}

/// Vertices missing from `p` carry zero momentum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentaRecord {
    pub dim: usize,
    pub form: Vec<Vec<String>>,
    pub p: BTreeMap<String, Vec<String>>,
}

/// A validated document in internal form.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub labels: Vec<String>,
    pub graph: Multigraph,
    pub momenta: Option<MomentumAssignment>,
}

fn rational(s: &str, what: &str) -> Result<Rational> {
    parse_rational(s).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("graph document: {e}")))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Validates labels, edge ids, rationals, the form and momentum conservation.
    pub fn load(&self) -> Result<Loaded> {
        if self.version != FORMAT_VERSION {
            return Err(CliError::Input(format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                self.version
            )));
        }
        let mut index = HashMap::new();
        for (i, label) in self.vertices.iter().enumerate() {
            if index.insert(label.as_str(), i).is_some() {
                return Err(CliError::Input(format!("duplicate vertex label {label:?}")));
            }
        }
        let m = self.edges.len();
        let mut slots: Vec<Option<(usize, usize)>> = vec![None; m];
        let vertex = |label: &str, id: usize| {
            index
                .get(label)
                .copied()
                .ok_or_else(|| CliError::Input(format!("edge {id} references unknown vertex {label:?}")))
        };
        for e in &self.edges {
            if e.id >= m {
                return Err(CliError::Input(format!("edge id {} outside 0..{m}", e.id)));
            }
            if slots[e.id].is_some() {
                return Err(CliError::Input(format!("duplicate edge id {}", e.id)));
            }
            slots[e.id] = Some((vertex(&e.tail, e.id)?, vertex(&e.head, e.id)?));
        }
        let graph = Multigraph::new(self.vertices.len(), slots.into_iter().flatten())?;

        let momenta = match &self.momenta {
            None => None,
            Some(rec) => Some(rec.load(&self.vertices, &index)?),
        };
        Ok(Loaded {
            labels: self.vertices.clone(),
            graph,
            momenta,
        })
    }

    /// Edges sorted by id, rationals in lowest terms, every vertex listed in `p`.
    pub fn normalized(&self) -> Result<Self> {
        let loaded = self.load()?;
        Ok(Self::from_loaded(&loaded))
    }

    pub fn from_loaded(loaded: &Loaded) -> Self {
        let labels = &loaded.labels;
        let edges = loaded
            .graph
            .edges()
            .iter()
            .enumerate()
            .map(|(id, e)| EdgeRecord {
                id,
                tail: labels[e.tail].clone(),
                head: labels[e.head].clone(),
            })
            .collect();
        let momenta = loaded.momenta.as_ref().map(|mom| {
            let form = mom.form().row_vecs().iter().map(|r| r.iter().map(format_rational).collect()).collect();
            let p = labels
                .iter()
                .zip(mom.vectors())
                .map(|(l, v)| (l.clone(), v.iter().map(format_rational).collect()))
                .collect();
            MomentaRecord {
                dim: mom.dim(),
                form,
                p,
            }
        });
        GraphDocument {
            version: FORMAT_VERSION,
            vertices: labels.clone(),
            edges,
            momenta,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

impl MomentaRecord {
    fn load(&self, labels: &[String], index: &HashMap<&str, usize>) -> Result<MomentumAssignment> {
        let dim = self.dim;
        if dim == 0 {
            return Err(CliError::Input("momenta: dim must be positive".into()));
        }
        if self.form.len() != dim || self.form.iter().any(|r| r.len() != dim) {
            return Err(CliError::Input(format!("momenta: form must be {dim}x{dim}")));
        }
        let rows = self
            .form
            .iter()
            .map(|r| r.iter().map(|x| rational(x, "momenta.form")).collect())
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        let form = RationalMatrix::from_rows(dim, rows)?;
        let mut p = vec![vec![Rational::from_integer(0.into()); dim]; labels.len()];
        for (label, coords) in &self.p {
            let v = *index
                .get(label.as_str())
                .ok_or_else(|| CliError::Input(format!("momenta: unknown vertex {label:?}")))?;
            if coords.len() != dim {
                return Err(CliError::Input(format!(
                    "momenta: vertex {label:?} has {} coordinates, expected {dim}",
                    coords.len()
                )));
            }
            p[v] = coords
                .iter()
                .map(|x| rational(x, "momenta.p"))
                .collect::<Result<_>>()?;
        }
        MomentumAssignment::new(form, p).map_err(|e| CliError::Input(format!("momenta: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const C3: &str = r#"{
        "version": 1,
        "vertices": ["a", "b", "c"],
        "edges": [
            {"id": 2, "tail": "c", "head": "a"},
            {"id": 0, "tail": "a", "head": "b"},
            {"id": 1, "tail": "b", "head": "c"}
        ],
        "momenta": {"dim": 1, "form": [["1"]], "p": {"a": ["2/2"], "b": ["1"], "c": ["-2"]}}
    }"#;

    #[test]
    fn loads_and_normalizes() {
        let doc = GraphDocument::parse(C3).unwrap();
        let loaded = doc.load().unwrap();
        assert_eq!(loaded.graph.m(), 3);
        assert_eq!(loaded.graph.edge(2).tail, 2);
        let norm = doc.normalized().unwrap();
        assert_eq!(norm.edges[0].id, 0);
        assert_eq!(norm.momenta.as_ref().unwrap().p["a"], vec!["1".to_string()]);
        assert_eq!(norm.normalized().unwrap(), norm);
    }

    #[test]
    fn rejects_bad_documents() {
        let cases = [
            C3.replace("\"c\"]", "\"a\"]"),
            C3.replace("\"id\": 2", "\"id\": 0"),
            C3.replace("\"-2\"", "\"-3\""),
            C3.replace("\"version\": 1", "\"version\": 2"),
            C3.replace("\"2/2\"", "\"1/0\""),
            C3.replace("\"head\": \"a\"", "\"head\": \"z\""),
        ];
        for text in cases {
            let err = GraphDocument::parse(&text).and_then(|d| d.load()).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{err}");
        }
    }

    #[test]
    fn missing_vertices_have_zero_momentum() {
        let text = C3.replace(r#""a": ["2/2"], "b": ["1"], "c": ["-2"]"#, r#""a": ["1"], "c": ["-1"]"#);
        let loaded = GraphDocument::parse(&text).unwrap().load().unwrap();
        assert!(loaded.momenta.unwrap().vertex(1)[0] == Rational::from_integer(0.into()));
    }
}
