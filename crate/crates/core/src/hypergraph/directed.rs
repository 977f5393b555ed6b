use std::collections::{BTreeSet, HashMap};

use super::{Hypergraph, Vertex};
use crate::error::{Error, Result};
use crate::label::{show_tuple, Label};

/// A set of ordered k-tuples of pairwise distinct vertices.
///
/// Vertices keep their declaration order; edges are stored as tuples of
/// vertex indices, so edge order is lexicographic in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedHypergraph {
    vertices: Vec<Label>,
    index: HashMap<Label, Vertex>,
    colors: Vec<u32>,
    k: usize,
    edges: BTreeSet<Vec<Vertex>>,
}

impl DirectedHypergraph {
    /// Builds and validates a hypergraph from labelled edges. Duplicate
    /// vertices and duplicate edges are collapsed.
    pub fn new<V, E>(vertices: V, k: usize, edges: E) -> Result<Self>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = Vec<Label>>,
    {
        if k == 0 {
            return Err(Error::ZeroArity);
        }
        let mut labels = Vec::new();
        let mut index = HashMap::new();
        for v in vertices {
            if !index.contains_key(&v) {
                index.insert(v.clone(), labels.len() as Vertex);
                labels.push(v);
            }
        }
        let mut set = BTreeSet::new();
        for e in edges {
            let shown = show_tuple(&e);
            if e.len() != k {
                return Err(Error::WrongEdgeLength { edge: shown, expected: k, found: e.len() });
            }
            let mut tuple = Vec::with_capacity(k);
            for v in &e {
                match index.get(v) {
                    Some(&i) => tuple.push(i),
                    None => return Err(Error::UnknownVertex { edge: shown, vertex: v.to_string() }),
                }
            }
            if has_repeat(&tuple) {
                return Err(Error::RepeatedCoordinate { edge: shown });
            }
            set.insert(tuple);
        }
        let colors = vec![0; labels.len()];
        Ok(DirectedHypergraph { vertices: labels, index, colors, k, edges: set })
    }

    /// Builds from vertex indices into `vertices`.
    pub fn from_indices<E>(vertices: Vec<Label>, k: usize, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = Vec<Vertex>>,
    {
        let g = DirectedHypergraph::new(vertices, k, std::iter::empty())?;
        let mut set = BTreeSet::new();
        for e in edges {
            g.check_flat(&e)?;
            set.insert(e);
        }
        Ok(g.with_edges(set))
    }

    pub fn vertices(&self) -> &[Label] {
        &self.vertices
    }

    pub fn vertex_index(&self, label: &Label) -> Option<Vertex> {
        self.index.get(label).copied()
    }

    /// Converts a labelled tuple to an index tuple in this graph's universe.
    pub fn edge_from_labels(&self, labels: &[Label]) -> Result<Vec<Vertex>> {
        let shown = show_tuple(labels);
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            match self.index.get(l) {
                Some(&i) => out.push(i),
                None => return Err(Error::UniverseMismatch { tuple: shown, reason: format!("unknown vertex {l}") }),
            }
        }
        self.check_flat(&out)?;
        Ok(out)
    }

    pub fn edge_labels(&self, edge: &[Vertex]) -> Vec<Label> {
        edge.iter().map(|&v| self.vertices[v as usize].clone()).collect()
    }

    fn check_flat(&self, tuple: &[Vertex]) -> Result<()> {
        let mismatch = |reason: String| Error::UniverseMismatch { tuple: show_tuple(tuple), reason };
        if tuple.len() != self.k {
            return Err(mismatch(format!("length {} but arity {}", tuple.len(), self.k)));
        }
        if let Some(v) = tuple.iter().find(|&&v| v as usize >= self.vertices.len()) {
            return Err(mismatch(format!("vertex index {v} out of range")));
        }
        if has_repeat(tuple) {
            return Err(mismatch("repeated coordinate".into()));
        }
        Ok(())
    }
}

pub(crate) fn has_repeat(t: &[Vertex]) -> bool {
    t.iter().enumerate().any(|(i, a)| t[i + 1..].contains(a))
}

impl Hypergraph for DirectedHypergraph {
    type Edge = Vec<Vertex>;

    fn arity(&self) -> usize {
        self.k
    }

    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn edges(&self) -> &BTreeSet<Vec<Vertex>> {
        &self.edges
    }

    fn colors(&self) -> &[u32] {
        &self.colors
    }

    fn color_count(&self) -> usize {
        1
    }

    fn is_partite(&self) -> bool {
        false
    }

    fn flatten(&self, edge: &Vec<Vertex>) -> Vec<Vertex> {
        edge.clone()
    }

    fn unflatten(&self, flat: &[Vertex]) -> Result<Vec<Vertex>> {
        self.check_flat(flat)?;
        Ok(flat.to_vec())
    }

    fn check_tuple(&self, edge: &Vec<Vertex>) -> Result<()> {
        self.check_flat(edge)
    }

    fn with_edges(&self, edges: BTreeSet<Vec<Vertex>>) -> Self {
        DirectedHypergraph { edges, ..self.clone() }
    }

    fn vertex_name(&self, v: Vertex) -> String {
        self.vertices[v as usize].to_string()
    }

    fn describe_edge(&self, edge: &Vec<Vertex>) -> String {
        show_tuple(&self.edge_labels(edge))
    }
}
