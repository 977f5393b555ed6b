//! Copies of a template, removal sets, and orbit symmetrization.
//!
//! A removal set `S` makes `G ∖ S` free of the template `F`. Removal sets are
//! searched inside `edges(G)` as hitting sets of the copy list (the edge-image
//! sets of all homomorphisms). Given a group of automorphisms of `G`, a
//! removal set is symmetrized by taking the union of the orbits `O` that meet
//! `S` with `|O| ≤ m·|O ∩ S|`, where `m = |edges(F)|`. That union is invariant,
//! has at most `m·|S|` tuples, and is again a removal set.

mod hitting;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupAction;
use crate::hypergraph::{self, check_compatible, Hypergraph, Vertex};

/// How a removal set was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exact,
    Greedy,
    /// Supplied by the caller, or derived from another certificate.
    External,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Strategy::Exact),
            "greedy" => Ok(Strategy::Greedy),
            "external" => Ok(Strategy::External),
            other => Err(format!("unknown strategy {other:?} (expected exact or greedy)")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Exact => "exact",
            Strategy::Greedy => "greedy",
            Strategy::External => "external",
        })
    }
}

/// Deduplicated edge-image sets of all homomorphisms `F → G`, sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyList<E> {
    pub copies: Vec<BTreeSet<E>>,
}

impl<E: Ord + Clone> CopyList<E> {
    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    /// Union of all copies.
    pub fn edges(&self) -> BTreeSet<E> {
        self.copies.iter().flatten().cloned().collect()
    }

    pub fn is_hit_by(&self, set: &BTreeSet<E>) -> bool {
        self.copies.iter().all(|c| c.iter().any(|e| set.contains(e)))
    }
}

/// A removal set with re-checkable evidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemovalCertificate<E> {
    pub removal_set: BTreeSet<E>,
    pub removed_count: usize,
    /// `|V(G)|^k`.
    pub universe_size: BigUint,
    /// `removed_count / universe_size`.
    pub achieved_epsilon: Ratio<BigUint>,
    pub freeness_checked: bool,
    pub strategy: Strategy,
    pub invariant_under: Option<String>,
}

impl<E> RemovalCertificate<E> {
    fn new<H>(graph: &H, removal_set: BTreeSet<E>, strategy: Strategy, freeness_checked: bool) -> Self
    where
        H: Hypergraph<Edge = E>,
    {
        let universe_size = graph.universe_size();
        let removed_count = removal_set.len();
        let achieved_epsilon = hypergraph::ratio(&BigUint::from(removed_count), &universe_size);
        RemovalCertificate {
            removal_set,
            removed_count,
            universe_size,
            achieved_epsilon,
            freeness_checked,
            strategy,
            invariant_under: None,
        }
    }

    /// Re-runs the freeness check.
    pub fn revalidate<H>(&self, template: &H, graph: &H, budget: Option<u64>) -> Result<bool>
    where
        H: Hypergraph<Edge = E>,
    {
        verify_removal(template, graph, &self.removal_set, budget)
    }
}

/// Options for [`min_removal_exact`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ExactOptions {
    /// Node budget shared by copy enumeration and branch and bound.
    pub budget: Option<u64>,
    /// Largest copy list the exact search accepts.
    pub cap: Option<usize>,
}

/// One edge-image set per homomorphism, deduplicated.
pub fn enumerate_copies<H: Hypergraph>(template: &H, graph: &H, budget: Option<u64>) -> Result<CopyList<H::Edge>> {
    Ok(copies_by_id(template, graph, budget)?.into_copy_list())
}

struct IdCopies<E> {
    edges: Vec<E>,
    copies: Vec<Vec<usize>>,
}

impl<E: Clone + Ord> IdCopies<E> {
    fn into_copy_list(self) -> CopyList<E> {
        let copies = self.copies.iter().map(|c| c.iter().map(|&i| self.edges[i].clone()).collect()).collect();
        CopyList { copies }
    }

    fn to_set(&self, ids: &[usize]) -> BTreeSet<E> {
        ids.iter().map(|&i| self.edges[i].clone()).collect()
    }
}

/// Copies as sorted lists of edge ids, where edge ids follow the order of `edges(G)`.
fn copies_by_id<H: Hypergraph>(template: &H, graph: &H, budget: Option<u64>) -> Result<IdCopies<H::Edge>> {
    check_compatible(template, graph)?;
    let edges: Vec<H::Edge> = graph.edges().iter().cloned().collect();
    let id: BTreeMap<Vec<Vertex>, usize> = edges.iter().enumerate().map(|(i, e)| (graph.flatten(e), i)).collect();
    let f_edges: Vec<Vec<Vertex>> = template.edges().iter().map(|e| template.flatten(e)).collect();
    let mut seen = BTreeSet::new();
    let mut buf = Vec::new();
    hypergraph::search::for_each_core_assignment(template, graph, budget, |assign| {
        let mut copy: Vec<usize> = f_edges
            .iter()
            .map(|e| {
                buf.clear();
                buf.extend(e.iter().map(|&v| assign[v as usize]));
                id[&buf]
            })
            .collect();
        copy.sort_unstable();
        copy.dedup();
        seen.insert(copy);
    })?;
    Ok(IdCopies { edges, copies: seen.into_iter().collect() })
}

fn require_edges<H: Hypergraph>(template: &H) -> Result<()> {
    if template.edge_count() == 0 {
        Err(Error::EmptyTemplate)
    } else {
        Ok(())
    }
}

/// A minimum-cardinality removal set inside `edges(G)`, by branch and bound
/// over the copy list. The result is re-verified against `G`.
pub fn min_removal_exact<H: Hypergraph>(
    template: &H,
    graph: &H,
    options: ExactOptions,
) -> Result<RemovalCertificate<H::Edge>> {
    require_edges(template)?;
    let ids = copies_by_id(template, graph, options.budget)?;
    if let Some(cap) = options.cap {
        if ids.copies.len() > cap {
            return Err(Error::CapExceeded { cap, found: ids.copies.len() });
        }
    }
    let budget = options.budget.unwrap_or(hypergraph::DEFAULT_BUDGET);
    let (best, _) = hitting::minimum(&ids.copies, ids.edges.len(), budget)?;
    let set = ids.to_set(&best);
    let free = verify_removal(template, graph, &set, options.budget)?;
    Ok(RemovalCertificate::new(graph, set, Strategy::Exact, free))
}

/// Greedy removal: repeatedly delete the edge lying in the most remaining
/// copies, ties going to the lexicographically least edge.
pub fn greedy_removal<H: Hypergraph>(
    template: &H,
    graph: &H,
    budget: Option<u64>,
) -> Result<RemovalCertificate<H::Edge>> {
    require_edges(template)?;
    let ids = copies_by_id(template, graph, budget)?;
    let chosen = hitting::greedy(&ids.copies, ids.edges.len());
    let set = ids.to_set(&chosen);
    let free = verify_removal(template, graph, &set, budget)?;
    Ok(RemovalCertificate::new(graph, set, Strategy::Greedy, free))
}

/// Runs the removal search named by `strategy`.
pub fn find_removal<H: Hypergraph>(
    template: &H,
    graph: &H,
    strategy: Strategy,
    budget: Option<u64>,
) -> Result<RemovalCertificate<H::Edge>> {
    match strategy {
        Strategy::Exact => min_removal_exact(template, graph, ExactOptions { budget, cap: None }),
        Strategy::Greedy | Strategy::External => greedy_removal(template, graph, budget),
    }
}

/// True iff `G ∖ S` has no homomorphic copy of `F`.
pub fn verify_removal<H: Hypergraph>(
    template: &H,
    graph: &H,
    removal: &BTreeSet<H::Edge>,
    budget: Option<u64>,
) -> Result<bool> {
    let rest = hypergraph::subtract(graph, removal)?;
    hypergraph::is_free(template, &rest, budget)
}

/// Wraps a caller-supplied removal set in a certificate, checking freeness.
pub fn certify_external<H: Hypergraph>(
    template: &H,
    graph: &H,
    removal: BTreeSet<H::Edge>,
    budget: Option<u64>,
) -> Result<RemovalCertificate<H::Edge>> {
    let free = verify_removal(template, graph, &removal, budget)?;
    Ok(RemovalCertificate::new(graph, removal, Strategy::External, free))
}

/// Per-orbit record of a symmetrization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecision<E> {
    /// Least tuple of the orbit.
    pub representative: E,
    pub size: usize,
    pub hits: usize,
    pub selected: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symmetrized<E> {
    pub set: BTreeSet<E>,
    pub factor: usize,
    pub orbits: Vec<OrbitDecision<E>>,
}

/// Checks that every generator maps `edges(G)` onto itself.
pub fn check_automorphisms<H: Hypergraph>(graph: &H, action: &GroupAction) -> Result<()> {
    let flat: BTreeSet<Vec<Vertex>> = graph.edges().iter().map(|e| graph.flatten(e)).collect();
    check_action_universe(graph, action)?;
    match action.first_non_automorphism(&flat) {
        None => Ok(()),
        Some((generator, t)) => {
            Err(Error::NotAutomorphism { generator, edge: graph.describe_edge(&graph.unflatten(&t)?) })
        }
    }
}

fn check_action_universe<H: Hypergraph>(graph: &H, action: &GroupAction) -> Result<()> {
    if action.arity() != graph.arity() || action.generators()[0].degree() != graph.vertex_count() {
        return Err(Error::UniverseMismatch {
            tuple: "<action>".into(),
            reason: format!(
                "action on {}-tuples of {} vertices, graph has arity {} and {} vertices",
                action.arity(),
                action.generators()[0].degree(),
                graph.arity(),
                graph.vertex_count()
            ),
        });
    }
    Ok(())
}

/// The union of the orbits `O` meeting `S` with `|O| ≤ m·|O ∩ S|`.
pub fn symmetrize<H: Hypergraph>(
    graph: &H,
    m: usize,
    removal: &BTreeSet<H::Edge>,
    action: &GroupAction,
) -> Result<BTreeSet<H::Edge>> {
    Ok(symmetrize_detailed(graph, m, removal, action)?.set)
}

/// [`symmetrize`], also reporting every orbit that meets `S`.
pub fn symmetrize_detailed<H: Hypergraph>(
    graph: &H,
    m: usize,
    removal: &BTreeSet<H::Edge>,
    action: &GroupAction,
) -> Result<Symmetrized<H::Edge>> {
    if m == 0 {
        return Err(Error::EmptyTemplate);
    }
    for e in removal {
        graph.check_tuple(e)?;
    }
    check_automorphisms(graph, action)?;
    let flat: BTreeSet<Vec<Vertex>> = removal.iter().map(|e| graph.flatten(e)).collect();
    let mut set = BTreeSet::new();
    let mut orbits = Vec::new();
    for orbit in action.orbits_touching(&flat)? {
        let selected = orbit.size() <= m * orbit.hits;
        let representative = graph.unflatten(orbit.members.first().expect("orbits are nonempty"))?;
        if selected {
            for t in &orbit.members {
                set.insert(graph.unflatten(t)?);
            }
        }
        orbits.push(OrbitDecision { representative, size: orbit.size(), hits: orbit.hits, selected });
    }
    Ok(Symmetrized { set, factor: m, orbits })
}

/// A symmetrized removal set with all the checks that make it trustworthy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrizedCertificate<E> {
    pub certificate: RemovalCertificate<E>,
    pub raw_count: usize,
    pub factor: usize,
    pub orbits: Vec<OrbitDecision<E>>,
    /// `|S′| ≤ m·|S|`.
    pub size_bound_holds: bool,
    /// Every generator maps `S′` onto itself.
    pub invariant: bool,
    /// Every generator is an automorphism of `G ∖ S′`.
    pub complement_symmetric: bool,
}

impl<E> SymmetrizedCertificate<E> {
    pub fn all_checks_pass(&self) -> bool {
        self.size_bound_holds && self.invariant && self.complement_symmetric && self.certificate.freeness_checked
    }
}

/// Symmetrizes a raw removal certificate under `action` with factor
/// `|edges(F)|`, then re-verifies invariance, the size bound, freeness of
/// `G ∖ S′` and that the generators remain automorphisms of `G ∖ S′`.
pub fn certify_symmetrized<H: Hypergraph>(
    template: &H,
    graph: &H,
    raw: &RemovalCertificate<H::Edge>,
    action: &GroupAction,
    action_name: &str,
    budget: Option<u64>,
) -> Result<SymmetrizedCertificate<H::Edge>> {
    require_edges(template)?;
    let m = template.edge_count();
    let sym = symmetrize_detailed(graph, m, &raw.removal_set, action)?;
    let flat: BTreeSet<Vec<Vertex>> = sym.set.iter().map(|e| graph.flatten(e)).collect();
    let invariant = action.is_invariant(&flat)?;
    let rest = hypergraph::subtract(graph, &sym.set)?;
    let rest_flat: BTreeSet<Vec<Vertex>> = rest.edges().iter().map(|e| rest.flatten(e)).collect();
    let complement_symmetric = action.first_non_automorphism(&rest_flat).is_none();
    let free = hypergraph::is_free(template, &rest, budget)?;
    let size_bound_holds = sym.set.len() <= m * raw.removed_count;
    let mut certificate = RemovalCertificate::new(graph, sym.set, raw.strategy, free);
    certificate.invariant_under = Some(action_name.to_string());
    Ok(SymmetrizedCertificate {
        certificate,
        raw_count: raw.removed_count,
        factor: m,
        orbits: sym.orbits,
        size_bound_holds,
        invariant,
        complement_symmetric,
    })
}
