//! Reading and writing graphs as JSON documents.
//!
//! A graph file is one JSON object: `vertices` is a list of names, `edges`
//! a list of `[tail, head]` name pairs, and three optional maps refine it —
//! `labels` maps `"tail,head"` to a rendering symbol, `dims` maps a vertex
//! name to its matrix dimension (default 1), `weights` maps `"tail,head"`
//! to a matrix as nested lists whose entries are numbers or `[re, im]`
//! pairs, and `poly_weights` maps `"tail,head"` to an integer coefficient
//! list in ascending powers for the exact scalar weighting. `dims` and
//! `weights` only take effect together; scalar computations ignore them.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pathsum::{EdgeWeights, WeightedQuiver};
use crate::poly::Poly;
use crate::quiver::{Quiver, VertexId};
use crate::ratfn::RationalFn;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    labels: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    dims: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    weights: BTreeMap<String, Vec<Vec<NumOrPair>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    poly_weights: BTreeMap<String, Vec<i64>>,
}

/// A matrix entry: a real number, or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum NumOrPair {
    Real(f64),
    Pair(f64, f64),
}

impl NumOrPair {
    fn to_complex(self) -> Complex64 {
        match self {
            NumOrPair::Real(x) => Complex64::new(x, 0.0),
            NumOrPair::Pair(re, im) => Complex64::new(re, im),
        }
    }
}

/// Everything a graph file can describe.
#[derive(Debug)]
pub struct GraphData {
    pub quiver: Quiver,
    /// Present when the file supplies matrix weights.
    pub weights: Option<WeightedQuiver>,
    /// Exact per-edge scalar weights; empty means every edge weighs z.
    pub poly_weights: EdgeWeights,
}

fn json_err(text: &str, e: serde_json::Error) -> Error {
    let line = e.line().max(1);
    let offset = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum::<usize>()
        + e.column().saturating_sub(1);
    Error::Parse {
        offset,
        message: e.to_string(),
    }
}

fn split_edge_key(q: &Quiver, key: &str) -> Result<(VertexId, VertexId)> {
    let Some((t, h)) = key.split_once(',') else {
        return Err(Error::Parse {
            offset: 0,
            message: format!("edge key `{key}` is not of the form `tail,head`"),
        });
    };
    Ok((q.require_vertex(t)?, q.require_vertex(h)?))
}

fn matrix_from_rows(key: &str, rows: &[Vec<NumOrPair>]) -> Result<DMatrix<Complex64>> {
    let nrows = rows.len();
    let ncols = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Parse {
            offset: 0,
            message: format!("weight matrix for edge `{key}` has ragged rows"),
        });
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| {
        rows[i][j].to_complex()
    }))
}

/// Parses a graph file. Malformed documents report a byte offset; names
/// and edge keys are checked against the declared vertices and edges.
pub fn load_graph(text: &str) -> Result<GraphData> {
    let file: GraphFile = serde_json::from_str(text).map_err(|e| json_err(text, e))?;
    let quiver = Quiver::new(file.vertices, &file.edges)?;
    let quiver = if file.labels.is_empty() {
        quiver
    } else {
        let pairs = file
            .labels
            .iter()
            .map(|(key, symbol)| Ok((split_edge_key(&quiver, key)?, symbol.clone())))
            .collect::<Result<Vec<_>>>()?;
        quiver.with_labels(&pairs)?
    };

    let weights = if file.weights.is_empty() {
        None
    } else {
        let dims = file
            .dims
            .iter()
            .map(|(name, &d)| Ok((quiver.require_vertex(name)?, d)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        let mats = file
            .weights
            .iter()
            .map(|(key, rows)| Ok((split_edge_key(&quiver, key)?, matrix_from_rows(key, rows)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Some(WeightedQuiver::new(quiver.clone(), dims, mats)?)
    };

    let mut poly_weights = EdgeWeights::new();
    for (key, coeffs) in &file.poly_weights {
        let (t, h) = split_edge_key(&quiver, key)?;
        if !quiver.has_edge(t, h) {
            return Err(Error::MissingEdge(
                quiver.vertex_name(t).to_string(),
                quiver.vertex_name(h).to_string(),
            ));
        }
        poly_weights.insert((t, h), RationalFn::from_poly(Poly::from_integers(coeffs)));
    }

    Ok(GraphData {
        quiver,
        weights,
        poly_weights,
    })
}

/// Serializes a quiver (vertices, edges, labels) as a graph file.
pub fn graph_to_json(q: &Quiver) -> String {
    let name = |v: VertexId| q.vertex_name(v).to_string();
    let file = GraphFile {
        vertices: q.vertices().map(name).collect(),
        edges: q.edges().map(|(t, h)| (name(t), name(h))).collect(),
        labels: q
            .edges()
            .filter_map(|(t, h)| {
                q.edge_label(t, h)
                    .map(|sym| (format!("{},{}", name(t), name(h)), sym.to_string()))
            })
            .collect(),
        dims: BTreeMap::new(),
        weights: BTreeMap::new(),
        poly_weights: BTreeMap::new(),
    };
    serde_json::to_string_pretty(&file).expect("graph files always serialize")
}
