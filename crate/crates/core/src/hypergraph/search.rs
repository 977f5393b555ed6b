//! Backtracking homomorphism search.
//!
//! Template vertices that lie on at least one edge are assigned in a static
//! order (descending edge-degree, ties by index). Candidates for a vertex are
//! drawn from the host's pair index for the most selective already-assigned
//! neighbour, and every template edge is checked as soon as its last vertex
//! is assigned. Isolated template vertices never constrain anything and are
//! accounted for by a multiplicative factor.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::{check_compatible, Hypergraph, Vertex};
use crate::error::{Error, Result};

/// Default cap on backtracking nodes.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

const UNASSIGNED: Vertex = Vertex::MAX;

/// A color-preserving vertex map from a template to a host, stored on flat
/// vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Homomorphism {
    images: Vec<Vertex>,
}

impl Homomorphism {
    pub fn new(images: Vec<Vertex>) -> Self {
        Homomorphism { images }
    }

    pub fn images(&self) -> &[Vertex] {
        &self.images
    }

    pub fn image(&self, v: Vertex) -> Vertex {
        self.images[v as usize]
    }

    /// Re-checks the homomorphism property from scratch.
    pub fn is_valid<H: Hypergraph>(&self, template: &H, host: &H) -> bool {
        if self.images.len() != template.vertex_count() {
            return false;
        }
        let colors_ok = self
            .images
            .iter()
            .enumerate()
            .all(|(v, &x)| (x as usize) < host.vertex_count() && template.colors()[v] == host.colors()[x as usize]);
        colors_ok
            && template.edges().iter().all(|e| {
                let flat: Vec<Vertex> = template.flatten(e).iter().map(|&v| self.image(v)).collect();
                match host.unflatten(&flat) {
                    Ok(img) => host.contains_edge(&img),
                    Err(_) => false,
                }
            })
    }

    /// The image of a template edge, as a host edge.
    pub fn edge_image<H: Hypergraph>(&self, template: &H, host: &H, edge: &H::Edge) -> Result<H::Edge> {
        let flat: Vec<Vertex> = template.flatten(edge).iter().map(|&v| self.image(v)).collect();
        host.unflatten(&flat)
    }

    /// `(template vertex, host vertex)` names, in template vertex order.
    pub fn describe<H: Hypergraph>(&self, template: &H, host: &H) -> Vec<(String, String)> {
        self.images.iter().enumerate().map(|(v, &x)| (template.vertex_name(v as Vertex), host.vertex_name(x))).collect()
    }
}

/// Result of counting homomorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomCount {
    pub count: BigUint,
    /// Number of color-preserving maps, `|V(G)|^|V(F)|` for directed graphs.
    pub total_maps: BigUint,
    pub density: Ratio<BigUint>,
    /// Backtracking nodes visited.
    pub nodes: u64,
}

struct Step {
    vertex: Vertex,
    color: u32,
    /// `(position of earlier vertex, earlier vertex, position of this vertex)`.
    pairs: Vec<(u8, Vertex, u8)>,
    /// Template edges completed by this step, as flat tuples.
    completes: Vec<Vec<Vertex>>,
}

struct Kernel {
    steps: Vec<Step>,
    isolated: Vec<Vertex>,
    template_vertices: usize,
    host_colors: Vec<u32>,
    by_color: Vec<Vec<Vertex>>,
    edge_set: HashSet<Vec<Vertex>>,
    pair_index: HashMap<(u8, Vertex, u8), Vec<Vertex>>,
    budget: u64,
}

impl Kernel {
    fn new<H: Hypergraph>(template: &H, host: &H, budget: Option<u64>) -> Result<Self> {
        check_compatible(template, host)?;
        let n = template.vertex_count();
        let f_edges: Vec<Vec<Vertex>> = template.edges().iter().map(|e| template.flatten(e)).collect();

        let mut degree = vec![0usize; n];
        for e in &f_edges {
            for &v in e {
                degree[v as usize] += 1;
            }
        }
        let mut order: Vec<Vertex> = (0..n as Vertex).filter(|&v| degree[v as usize] > 0).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(degree[v as usize]), v));
        let isolated = (0..n as Vertex).filter(|&v| degree[v as usize] == 0).collect();

        let mut rank = vec![usize::MAX; n];
        for (d, &v) in order.iter().enumerate() {
            rank[v as usize] = d;
        }
        let mut steps: Vec<Step> = order
            .iter()
            .map(|&v| Step {
                vertex: v,
                color: template.colors()[v as usize],
                pairs: Vec::new(),
                completes: Vec::new(),
            })
            .collect();
        for e in &f_edges {
            let last = e.iter().map(|&v| rank[v as usize]).max().unwrap_or(0);
            steps[last].completes.push(e.clone());
            for (j, &v) in e.iter().enumerate() {
                for (i, &u) in e.iter().enumerate() {
                    if rank[u as usize] < rank[v as usize] {
                        let c = (i as u8, u, j as u8);
                        let s = &mut steps[rank[v as usize]];
                        if !s.pairs.contains(&c) {
                            s.pairs.push(c);
                        }
                    }
                }
            }
        }

        let host_colors = host.colors().to_vec();
        let mut by_color = vec![Vec::new(); host.color_count()];
        for (x, &c) in host_colors.iter().enumerate() {
            by_color[c as usize].push(x as Vertex);
        }
        let mut edge_set = HashSet::with_capacity(host.edge_count());
        let mut pair_index: HashMap<(u8, Vertex, u8), Vec<Vertex>> = HashMap::new();
        for e in host.edges() {
            let flat = host.flatten(e);
            for (i, &a) in flat.iter().enumerate() {
                for (j, &b) in flat.iter().enumerate() {
                    if i != j {
                        pair_index.entry((i as u8, a, j as u8)).or_default().push(b);
                    }
                }
            }
            edge_set.insert(flat);
        }
        for list in pair_index.values_mut() {
            list.sort_unstable();
            list.dedup();
        }

        Ok(Kernel {
            steps,
            isolated,
            template_vertices: n,
            host_colors,
            by_color,
            edge_set,
            pair_index,
            budget: budget.unwrap_or(DEFAULT_BUDGET),
        })
    }

    fn total_maps<H: Hypergraph>(&self, template: &H) -> BigUint {
        template.colors().iter().fold(BigUint::one(), |acc, &c| acc * BigUint::from(self.by_color[c as usize].len()))
    }

    /// Number of ways to place the isolated template vertices.
    fn isolated_factor(&self, colors: &[u32]) -> BigUint {
        self.isolated
            .iter()
            .fold(BigUint::one(), |acc, &v| acc * BigUint::from(self.by_color[colors[v as usize] as usize].len()))
    }

    /// Visits every assignment of the non-isolated template vertices.
    /// Isolated entries are left as `UNASSIGNED`.
    fn visit<V>(&self, nodes: &mut u64, visitor: &mut V) -> Result<()>
    where
        V: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        let mut assign = vec![UNASSIGNED; self.template_vertices];
        let mut buf = Vec::new();
        // a Break only means the visitor is done
        let _ = self.descend(0, &mut assign, &mut buf, nodes, visitor)?;
        Ok(())
    }

    fn descend<V>(
        &self,
        depth: usize,
        assign: &mut Vec<Vertex>,
        buf: &mut Vec<Vertex>,
        nodes: &mut u64,
        visitor: &mut V,
    ) -> Result<ControlFlow<()>>
    where
        V: FnMut(&[Vertex]) -> ControlFlow<()>,
    {
        let Some(step) = self.steps.get(depth) else {
            return Ok(visitor(assign));
        };
        let mut lists = Vec::with_capacity(step.pairs.len());
        for &(i, u, j) in &step.pairs {
            match self.pair_index.get(&(i, assign[u as usize], j)) {
                Some(l) => lists.push(l.as_slice()),
                None => return Ok(ControlFlow::Continue(())),
            }
        }
        let source: &[Vertex] = match lists.iter().min_by_key(|l| l.len()) {
            Some(l) => l,
            None => &self.by_color[step.color as usize],
        };
        for &x in source {
            *nodes += 1;
            if *nodes > self.budget {
                return Err(Error::BudgetExceeded { budget: self.budget, nodes: *nodes });
            }
            if self.host_colors[x as usize] != step.color {
                continue;
            }
            if !lists.iter().all(|l| l.binary_search(&x).is_ok()) {
                continue;
            }
            assign[step.vertex as usize] = x;
            let complete_ok = step.completes.iter().all(|e| {
                buf.clear();
                buf.extend(e.iter().map(|&v| assign[v as usize]));
                self.edge_set.contains(buf.as_slice())
            });
            if complete_ok {
                if let ControlFlow::Break(()) = self.descend(depth + 1, assign, buf, nodes, visitor)? {
                    assign[step.vertex as usize] = UNASSIGNED;
                    return Ok(ControlFlow::Break(()));
                }
            }
            assign[step.vertex as usize] = UNASSIGNED;
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// Counts all maps `V(F) → V(G)` (color-preserving, not necessarily
/// injective) that send every edge of `F` to an edge of `G`.
pub fn count_homomorphisms<H: Hypergraph>(template: &H, host: &H, budget: Option<u64>) -> Result<HomCount> {
    let kernel = Kernel::new(template, host, budget)?;
    let total_maps = kernel.total_maps(template);
    if total_maps.is_zero() {
        return Err(Error::NoMaps);
    }
    let mut core = 0u64;
    let mut nodes = 0u64;
    kernel.visit(&mut nodes, &mut |_| {
        core += 1;
        ControlFlow::Continue(())
    })?;
    let count = BigUint::from(core) * kernel.isolated_factor(template.colors());
    let density = Ratio::new(count.clone(), total_maps.clone());
    Ok(HomCount { count, total_maps, density, nodes })
}

/// Returns one homomorphism if any exists. Isolated template vertices go to
/// the first host vertex of their color.
pub fn find_homomorphism<H: Hypergraph>(template: &H, host: &H, budget: Option<u64>) -> Result<Option<Homomorphism>> {
    let kernel = Kernel::new(template, host, budget)?;
    if kernel.isolated.iter().any(|&v| kernel.by_color[template.colors()[v as usize] as usize].is_empty()) {
        return Ok(None);
    }
    let mut found = None;
    let mut nodes = 0;
    kernel.visit(&mut nodes, &mut |a| {
        found = Some(a.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found.map(|mut images| {
        for &v in &kernel.isolated {
            images[v as usize] = kernel.by_color[template.colors()[v as usize] as usize][0];
        }
        Homomorphism { images }
    }))
}

/// True iff there is no homomorphism from `template` to `host`. Stops at the first one found.
pub fn is_free<H: Hypergraph>(template: &H, host: &H, budget: Option<u64>) -> Result<bool> {
    Ok(find_homomorphism(template, host, budget)?.is_none())
}

/// Calls `visitor` once per homomorphism, including every placement of
/// isolated template vertices.
pub fn for_each_homomorphism<H, V>(template: &H, host: &H, budget: Option<u64>, mut visitor: V) -> Result<()>
where
    H: Hypergraph,
    V: FnMut(&Homomorphism) -> ControlFlow<()>,
{
    let kernel = Kernel::new(template, host, budget)?;
    let colors = template.colors();
    let choices: Vec<&[Vertex]> =
        kernel.isolated.iter().map(|&v| kernel.by_color[colors[v as usize] as usize].as_slice()).collect();
    if choices.iter().any(|c| c.is_empty()) {
        return Ok(());
    }
    let mut nodes = 0;
    kernel.visit(&mut nodes, &mut |a| {
        let mut hom = Homomorphism { images: a.to_vec() };
        let mut digits = vec![0usize; choices.len()];
        loop {
            for (slot, &v) in kernel.isolated.iter().enumerate() {
                hom.images[v as usize] = choices[slot][digits[slot]];
            }
            visitor(&hom)?;
            let mut carry = true;
            for (slot, d) in digits.iter_mut().enumerate() {
                *d += 1;
                if *d < choices[slot].len() {
                    carry = false;
                    break;
                }
                *d = 0;
            }
            if carry {
                return ControlFlow::Continue(());
            }
        }
    })?;
    Ok(())
}

/// Visits the assignments of non-isolated template vertices only; used for
/// copy enumeration, where isolated vertices do not affect edge images.
pub(crate) fn for_each_core_assignment<H, V>(template: &H, host: &H, budget: Option<u64>, mut visitor: V) -> Result<()>
where
    H: Hypergraph,
    V: FnMut(&[Vertex]),
{
    let kernel = Kernel::new(template, host, budget)?;
    if kernel.isolated.iter().any(|&v| kernel.by_color[template.colors()[v as usize] as usize].is_empty()) {
        return Ok(());
    }
    let mut nodes = 0;
    kernel.visit(&mut nodes, &mut |a| {
        visitor(a);
        ControlFlow::Continue(())
    })?;
    Ok(())
}
