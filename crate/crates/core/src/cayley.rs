//! Cayley graphs `Cy(T, S)` and the removal of `ab = c` solutions.
//!
//! `Cy(T, S)` has vertex set `T` and an edge `(a, b)` whenever `a·b⁻¹ ∈ S`.
//! Homomorphisms of the transitive triangle `{(1,2), (1,3), (2,3)}` into it
//! are exactly the triples `f` with `f(1)f(2)⁻¹`, `f(2)f(3)⁻¹` and
//! `f(1)f(3)⁻¹` in `S`, so there are `|T|` of them per solution of `ab = c`
//! in `S`. Right diagonal translations `(a, b) ↦ (ag, bg)` are automorphisms,
//! and their orbits on edges are the classes `{(a, b) : a·b⁻¹ = s}`.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::groups::{Element, FiniteGroup, GroupAction, Permutation};
use crate::hypergraph::{self, DirectedHypergraph, Vertex};
use crate::label::Label;
use crate::removal::{self, RemovalCertificate, Strategy, SymmetrizedCertificate};

#[derive(Debug, Clone)]
pub struct CayleyGraph {
    group: FiniteGroup,
    connection: BTreeSet<Element>,
    graph: DirectedHypergraph,
}

impl CayleyGraph {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn connection_set(&self) -> &BTreeSet<Element> {
        &self.connection
    }

    /// Vertex `i` of the graph is group element `Element(i)`.
    pub fn graph(&self) -> &DirectedHypergraph {
        &self.graph
    }
}

fn check_subset(group: &FiniteGroup, set: &BTreeSet<Element>) -> Result<()> {
    match set.iter().find(|e| e.0 >= group.order()) {
        Some(e) => Err(Error::UnknownElement(format!("#{}", e.0))),
        None => Ok(()),
    }
}

/// Builds `Cy(T, S)`.
pub fn cayley_graph(group: &FiniteGroup, connection: &BTreeSet<Element>) -> Result<CayleyGraph> {
    check_subset(group, connection)?;
    if connection.contains(&group.identity()) {
        return Err(Error::IdentityInConnectionSet);
    }
    let edges = group
        .elements()
        .flat_map(|b| connection.iter().map(move |&s| vec![group.multiply(s, b).0 as Vertex, b.0 as Vertex]));
    let graph = DirectedHypergraph::from_indices(group.labels().to_vec(), 2, edges)?;
    Ok(CayleyGraph { group: group.clone(), connection: connection.clone(), graph })
}

/// The transitive triangle template on vertices `1, 2, 3`.
pub fn triangle_template() -> DirectedHypergraph {
    let l = |x: i64| Label::Int(x);
    DirectedHypergraph::new([l(1), l(2), l(3)], 2, [vec![l(1), l(2)], vec![l(1), l(3)], vec![l(2), l(3)]])
        .expect("triangle template is well formed")
}

/// Number of pairs `(a, b) ∈ S²` with `a·b ∈ S`.
pub fn count_schur_solutions(group: &FiniteGroup, set: &BTreeSet<Element>) -> Result<u64> {
    check_subset(group, set)?;
    Ok(set.iter().map(|&a| set.iter().filter(|&&b| set.contains(&group.multiply(a, b))).count() as u64).sum())
}

/// Both sides of the triangle identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleIdentity {
    pub hom_count: BigUint,
    pub solution_count: u64,
    pub order: usize,
    pub holds: bool,
}

/// Checks `hom(triangle, Cy(T, S)) = |T|·#{(a, b) ∈ S² : ab ∈ S}`.
pub fn verify_triangle_identity(
    group: &FiniteGroup,
    set: &BTreeSet<Element>,
    budget: Option<u64>,
) -> Result<TriangleIdentity> {
    let cy = cayley_graph(group, set)?;
    let homs = hypergraph::count_homomorphisms(&triangle_template(), cy.graph(), budget)?;
    let solutions = count_schur_solutions(group, set)?;
    let holds = homs.count == BigUint::from(group.order()) * BigUint::from(solutions);
    Ok(TriangleIdentity { hom_count: homs.count, solution_count: solutions, order: group.order(), holds })
}

/// Diagonal right translations `(a, b) ↦ (ag, bg)` for `g` in the group's
/// canonical generating set.
pub fn translation_action(group: &FiniteGroup) -> GroupAction {
    let gens = group
        .generators()
        .into_iter()
        .map(|g| {
            let map = group.elements().map(|x| group.multiply(x, g).0 as Vertex).collect();
            Permutation::new(map).expect("right translation is a bijection")
        })
        .collect();
    GroupAction::new(gens, group.order(), 2).expect("generators act on the group's elements")
}

/// `a·b⁻¹`, the label of the translation orbit of `(a, b)`.
pub fn edge_orbit_label(group: &FiniteGroup, a: Element, b: Element) -> Result<Element> {
    let inv = group.try_invert(b)?;
    let label = group.try_multiply(a, inv)?;
    if a == b {
        return Err(Error::DiagonalPair(group.label(a).to_string()));
    }
    Ok(label)
}

/// Output of [`green_pipeline`].
#[derive(Debug, Clone)]
pub struct GreenOutcome {
    /// Elements removed from the connection set.
    pub shrink: BTreeSet<Element>,
    pub remaining: BTreeSet<Element>,
    pub remaining_solutions: u64,
    pub initial_solutions: u64,
    pub raw: RemovalCertificate<Vec<Vertex>>,
    pub symmetrized: SymmetrizedCertificate<Vec<Vertex>>,
}

impl GreenOutcome {
    /// `|S″|·|T| = |S′| ≤ 3·|S_raw|` and no solution survives.
    pub fn sound(&self, order: usize) -> bool {
        self.remaining_solutions == 0
            && self.shrink.len() * order == self.symmetrized.certificate.removed_count
            && self.symmetrized.certificate.removed_count <= 3 * self.raw.removed_count
            && self.symmetrized.all_checks_pass()
    }
}

/// Finds a removal set for the triangle in `Cy(T, S)`, symmetrizes it under
/// translations, and reads off the connection-set elements to delete.
pub fn green_pipeline(
    group: &FiniteGroup,
    set: &BTreeSet<Element>,
    strategy: Strategy,
    budget: Option<u64>,
) -> Result<GreenOutcome> {
    let cy = cayley_graph(group, set)?;
    let template = triangle_template();
    let raw = removal::find_removal(&template, cy.graph(), strategy, budget)?;
    let action = translation_action(group);
    let symmetrized = removal::certify_symmetrized(&template, cy.graph(), &raw, &action, "right translations", budget)?;
    let shrink: BTreeSet<Element> = symmetrized
        .certificate
        .removal_set
        .iter()
        .map(|e| edge_orbit_label(group, Element(e[0] as usize), Element(e[1] as usize)))
        .collect::<Result<BTreeSet<_>>>()?
        .intersection(set)
        .copied()
        .collect();
    let remaining: BTreeSet<Element> = set.difference(&shrink).copied().collect();
    Ok(GreenOutcome {
        remaining_solutions: count_schur_solutions(group, &remaining)?,
        initial_solutions: count_schur_solutions(group, set)?,
        shrink,
        remaining,
        raw,
        symmetrized,
    })
}
