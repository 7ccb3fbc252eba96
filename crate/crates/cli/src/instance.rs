//! JSON instance files: a weighted graph as a list of vertex names, a
//! list of edges by index, and a weight map keyed by vertex index.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use psi_arrangements::rational::{format_rational, parse_rational};
use psi_arrangements::{PsiGraph, Rational};

/// On-disk instance format.  Weights are strings (`"2"`, `"-1/3"`) so
/// exactness survives any JSON toolchain.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
    /// Vertex index (as a string key) to its weight values.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub psi: BTreeMap<String, Vec<String>>,
}

impl InstanceFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        let file: InstanceFile = serde_json::from_str(&text)
            .with_context(|| format!("{} is not a valid instance file", path.display()))?;
        Ok(file)
    }

    /// Validates and converts to a graph.  Every diagnostic names the
    /// offending entry.
    pub fn to_graph(&self) -> Result<PsiGraph> {
        let n = self.vertices.len();
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            if a >= n || b >= n {
                bail!(
                    "edge #{k} ({a}, {b}) references a vertex out of range (the file lists {n} vertices)"
                );
            }
        }
        let mut psi: Vec<Vec<Rational>> = vec![Vec::new(); n];
        for (key, values) in &self.psi {
            let v: usize = key
                .trim()
                .parse()
                .with_context(|| format!("psi key {key:?} is not a vertex index"))?;
            if v >= n {
                bail!("psi key {key:?} is out of range (the file lists {n} vertices)");
            }
            for (k, text) in values.iter().enumerate() {
                let value = parse_rational(text).with_context(|| {
                    format!("psi[{key:?}][{k}] = {text:?} is not a rational number")
                })?;
                psi[v].push(value);
            }
        }
        PsiGraph::with_names(self.vertices.clone(), &self.edges, psi)
            .context("invalid instance")
    }

    /// The canonical form of a graph: edges sorted, weights sorted and
    /// keyed by index, empty weight sets omitted.
    pub fn from_graph(graph: &PsiGraph) -> Self {
        let psi = (0..graph.n())
            .filter(|&v| !graph.psi(v).is_empty())
            .map(|v| {
                (
                    v.to_string(),
                    graph.psi(v).iter().map(format_rational).collect(),
                )
            })
            .collect();
        InstanceFile {
            vertices: graph.names().to_vec(),
            edges: graph.edges().to_vec(),
            psi,
        }
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).context("serialize instance")?;
        text.push('\n');
        std::fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
    }
}
