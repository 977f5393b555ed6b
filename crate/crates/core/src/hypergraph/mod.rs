//! Directed and t-partite k-uniform hypergraphs.
//!
//! Both flavors share a flat view used by the search kernel and by group
//! actions: vertices are numbered `0..vertex_count()` and each vertex carries
//! a color (its part index, or `0` for directed hypergraphs). A homomorphism
//! is then a color-preserving vertex map sending edges to edges.

mod directed;
mod partite;
pub(crate) mod search;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use num_rational::Ratio;

pub(crate) use directed::has_repeat;
pub use directed::DirectedHypergraph;
pub use partite::{PartiteHypergraph, TypedEdge};
pub use search::{
    count_homomorphisms, find_homomorphism, for_each_homomorphism, is_free, HomCount, Homomorphism, DEFAULT_BUDGET,
};

use crate::error::{Error, Result};

/// Flat vertex index.
pub type Vertex = u32;

/// Common interface of [`DirectedHypergraph`] and [`PartiteHypergraph`].
pub trait Hypergraph: Clone + Debug {
    type Edge: Clone + Ord + Hash + Debug;

    fn arity(&self) -> usize;

    fn vertex_count(&self) -> usize;

    fn edges(&self) -> &BTreeSet<Self::Edge>;

    /// Color of every flat vertex.
    fn colors(&self) -> &[u32];

    fn color_count(&self) -> usize;

    /// Whether edges are typed by parts.
    fn is_partite(&self) -> bool;

    /// Flat vertex indices of the edge's coordinates.
    fn flatten(&self, edge: &Self::Edge) -> Vec<Vertex>;

    /// Inverse of [`Hypergraph::flatten`]; fails for tuples outside the edge universe.
    fn unflatten(&self, flat: &[Vertex]) -> Result<Self::Edge>;

    /// Succeeds iff `edge` belongs to this hypergraph's edge universe.
    fn check_tuple(&self, edge: &Self::Edge) -> Result<()>;

    /// Same vertex structure, different edge set. Edges must already be in-universe.
    fn with_edges(&self, edges: BTreeSet<Self::Edge>) -> Self;

    fn vertex_name(&self, v: Vertex) -> String;

    fn describe_edge(&self, edge: &Self::Edge) -> String;

    /// Size of the tuple universe used for removal ratios: `|V|^k`.
    fn universe_size(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.vertex_count()), self.arity())
    }

    fn contains_edge(&self, edge: &Self::Edge) -> bool {
        self.edges().contains(edge)
    }

    fn edge_count(&self) -> usize {
        self.edges().len()
    }
}

/// Checks that a template and a host can be compared by homomorphisms.
pub fn check_compatible<H: Hypergraph>(template: &H, host: &H) -> Result<()> {
    if template.arity() != host.arity() {
        return Err(Error::ArityMismatch(format!(
            "template arity {} vs host arity {}",
            template.arity(),
            host.arity()
        )));
    }
    if template.color_count() != host.color_count() {
        return Err(Error::ArityMismatch(format!(
            "template has {} parts, host has {}",
            template.color_count(),
            host.color_count()
        )));
    }
    Ok(())
}

/// `G ∖ S`. Tuples of `S` need not be edges of `G`, but must lie in its universe.
pub fn subtract<H: Hypergraph>(graph: &H, removal: &BTreeSet<H::Edge>) -> Result<H> {
    for e in removal {
        graph.check_tuple(e)?;
    }
    let edges = graph.edges().iter().filter(|e| !removal.contains(*e)).cloned().collect();
    Ok(graph.with_edges(edges))
}

/// Exact rational `count / total`.
pub fn ratio(count: &BigUint, total: &BigUint) -> Ratio<BigUint> {
    Ratio::new(count.clone(), total.clone())
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn render_ratio(r: &Ratio<BigUint>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}
