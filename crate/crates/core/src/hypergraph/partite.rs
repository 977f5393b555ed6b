use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::{Hypergraph, Vertex};
use crate::error::{Error, Result};
use crate::label::{show_tuple, Label};

/// An edge of a partite hypergraph: a strictly increasing tuple of part
/// indices and, for each of them, a vertex index local to that part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypedEdge {
    #[serde(rename = "type")]
    pub ty: Vec<usize>,
    pub tuple: Vec<Vertex>,
}

impl TypedEdge {
    pub fn new(ty: Vec<usize>, tuple: Vec<Vertex>) -> Self {
        TypedEdge { ty, tuple }
    }
}

/// A t-partite k-uniform hypergraph. Parts are indexed from 0. The same
/// label may occur in several parts; a vertex is identified by its part and
/// its label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartiteHypergraph {
    parts: Vec<Vec<Label>>,
    index: Vec<HashMap<Label, Vertex>>,
    offsets: Vec<Vertex>,
    colors: Vec<u32>,
    k: usize,
    edges: BTreeSet<TypedEdge>,
}

impl PartiteHypergraph {
    /// Builds and validates a partite hypergraph from labelled edges.
    /// Edge types must already be strictly increasing; they are not sorted.
    pub fn new<E>(parts: Vec<Vec<Label>>, k: usize, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = (Vec<usize>, Vec<Label>)>,
    {
        let g = PartiteHypergraph::empty(parts, k)?;
        let mut set = BTreeSet::new();
        for (ty, labels) in edges {
            let shown = show_tuple(&labels);
            g.check_type(&ty)?;
            if labels.len() != ty.len() {
                return Err(Error::WrongEdgeLength { edge: shown, expected: ty.len(), found: labels.len() });
            }
            let mut tuple = Vec::with_capacity(k);
            for (&p, l) in ty.iter().zip(&labels) {
                match g.index[p].get(l) {
                    Some(&i) => tuple.push(i),
                    None => return Err(Error::PartMismatch { edge: shown, part: p, vertex: l.to_string() }),
                }
            }
            set.insert(TypedEdge { ty, tuple });
        }
        Ok(g.with_edges(set))
    }

    /// Builds from local vertex indices.
    pub fn from_typed<E>(parts: Vec<Vec<Label>>, k: usize, edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = TypedEdge>,
    {
        let g = PartiteHypergraph::empty(parts, k)?;
        let mut set = BTreeSet::new();
        for e in edges {
            g.check_tuple(&e)?;
            set.insert(e);
        }
        Ok(g.with_edges(set))
    }

    fn empty(parts: Vec<Vec<Label>>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroArity);
        }
        if k > parts.len() {
            return Err(Error::BadEdgeType { ty: vec![], reason: "arity exceeds the number of parts" });
        }
        let mut clean = Vec::with_capacity(parts.len());
        let mut index = Vec::with_capacity(parts.len());
        let mut offsets = Vec::with_capacity(parts.len());
        let mut colors = Vec::new();
        for (p, part) in parts.into_iter().enumerate() {
            let mut labels = Vec::new();
            let mut map = HashMap::new();
            for l in part {
                if !map.contains_key(&l) {
                    map.insert(l.clone(), labels.len() as Vertex);
                    labels.push(l);
                }
            }
            offsets.push(colors.len() as Vertex);
            colors.extend(std::iter::repeat_n(p as u32, labels.len()));
            clean.push(labels);
            index.push(map);
        }
        Ok(PartiteHypergraph { parts: clean, index, offsets, colors, k, edges: BTreeSet::new() })
    }

    pub fn parts(&self) -> &[Vec<Label>] {
        &self.parts
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    pub fn part_index(&self, part: usize, label: &Label) -> Option<Vertex> {
        self.index.get(part).and_then(|m| m.get(label).copied())
    }

    /// First flat vertex of each part.
    pub fn offsets(&self) -> &[Vertex] {
        &self.offsets
    }

    pub fn edge_labels(&self, edge: &TypedEdge) -> Vec<Label> {
        edge.ty.iter().zip(&edge.tuple).map(|(&p, &v)| self.parts[p][v as usize].clone()).collect()
    }

    /// Edges of one type.
    pub fn edges_of_type<'a>(&'a self, ty: &'a [usize]) -> impl Iterator<Item = &'a TypedEdge> + 'a {
        self.edges.iter().filter(move |e| e.ty == ty)
    }

    fn check_type(&self, ty: &[usize]) -> Result<()> {
        let bad = |reason| Err(Error::BadEdgeType { ty: ty.to_vec(), reason });
        if ty.len() != self.k {
            return bad("type length differs from the arity");
        }
        if ty.iter().any(|&p| p >= self.parts.len()) {
            return bad("part index out of range");
        }
        if ty.windows(2).any(|w| w[0] >= w[1]) {
            return bad("part indices must be distinct and strictly increasing");
        }
        Ok(())
    }
}

impl Hypergraph for PartiteHypergraph {
    type Edge = TypedEdge;

    fn arity(&self) -> usize {
        self.k
    }

    fn vertex_count(&self) -> usize {
        self.colors.len()
    }

    fn edges(&self) -> &BTreeSet<TypedEdge> {
        &self.edges
    }

    fn colors(&self) -> &[u32] {
        &self.colors
    }

    fn color_count(&self) -> usize {
        self.parts.len()
    }

    fn is_partite(&self) -> bool {
        true
    }

    fn flatten(&self, edge: &TypedEdge) -> Vec<Vertex> {
        edge.ty.iter().zip(&edge.tuple).map(|(&p, &v)| self.offsets[p] + v).collect()
    }

    fn unflatten(&self, flat: &[Vertex]) -> Result<TypedEdge> {
        let n = self.colors.len();
        if let Some(v) = flat.iter().find(|&&v| v as usize >= n) {
            return Err(Error::UniverseMismatch {
                tuple: show_tuple(flat),
                reason: format!("vertex index {v} out of range"),
            });
        }
        let ty: Vec<usize> = flat.iter().map(|&v| self.colors[v as usize] as usize).collect();
        let tuple = flat.iter().zip(&ty).map(|(&v, &p)| v - self.offsets[p]).collect();
        let e = TypedEdge { ty, tuple };
        self.check_tuple(&e)?;
        Ok(e)
    }

    fn check_tuple(&self, edge: &TypedEdge) -> Result<()> {
        let mismatch = |reason: String| Error::UniverseMismatch {
            tuple: format!("{:?}:{}", edge.ty, show_tuple(&edge.tuple)),
            reason,
        };
        if let Err(e) = self.check_type(&edge.ty) {
            return Err(mismatch(e.to_string()));
        }
        if edge.tuple.len() != edge.ty.len() {
            return Err(mismatch("tuple length differs from type length".into()));
        }
        for (&p, &v) in edge.ty.iter().zip(&edge.tuple) {
            if v as usize >= self.parts[p].len() {
                return Err(mismatch(format!("index {v} outside part {p}")));
            }
        }
        Ok(())
    }

    fn with_edges(&self, edges: BTreeSet<TypedEdge>) -> Self {
        PartiteHypergraph { edges, ..self.clone() }
    }

    fn vertex_name(&self, v: Vertex) -> String {
        let p = self.colors[v as usize] as usize;
        format!("{}@{}", self.parts[p][(v - self.offsets[p]) as usize], p)
    }

    fn describe_edge(&self, edge: &TypedEdge) -> String {
        format!("{:?}:{}", edge.ty, show_tuple(&self.edge_labels(edge)))
    }
}
