use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, PartiteHypergraph, Vertex};
use crate::label::show_tuple;

/// A bijection of `0..n`, stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<Vertex>,
}

impl Permutation {
    pub fn new(map: Vec<Vertex>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &x in &map {
            match seen.get_mut(x as usize) {
                Some(s) if !*s => *s = true,
                Some(_) => return Err(Error::InvalidPermutation(format!("{x} is hit twice"))),
                None => return Err(Error::InvalidPermutation(format!("{x} is out of range"))),
            }
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n as Vertex).collect() }
    }

    pub fn degree(&self) -> usize {
        self.map.len()
    }

    pub fn apply(&self, v: Vertex) -> Vertex {
        self.map[v as usize]
    }

    pub fn apply_tuple(&self, t: &[Vertex]) -> Vec<Vertex> {
        t.iter().map(|&v| self.apply(v)).collect()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.map
    }
}

/// One bijection per part of a partite vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitePermutation {
    parts: Vec<Permutation>,
}

impl PartitePermutation {
    pub fn new(parts: Vec<Permutation>) -> Self {
        PartitePermutation { parts }
    }

    pub fn parts(&self) -> &[Permutation] {
        &self.parts
    }

    /// The induced permutation of flat vertices, given each part's first flat index.
    pub fn flatten(&self, offsets: &[Vertex], sizes: &[usize]) -> Result<Permutation> {
        if self.parts.len() != sizes.len() {
            return Err(Error::InvalidPermutation(format!("{} part maps for {} parts", self.parts.len(), sizes.len())));
        }
        let mut map = Vec::with_capacity(sizes.iter().sum());
        for (p, (perm, &size)) in self.parts.iter().zip(sizes).enumerate() {
            if perm.degree() != size {
                return Err(Error::InvalidPermutation(format!(
                    "part {p} map has degree {} but the part has {size} vertices",
                    perm.degree()
                )));
            }
            map.extend(perm.as_slice().iter().map(|&x| offsets[p] + x));
        }
        Ok(Permutation { map })
    }
}

/// An orbit together with how many of its tuples lie in a given set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitInfo {
    pub members: BTreeSet<Vec<Vertex>>,
    pub hits: usize,
}

impl OrbitInfo {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// A group given by generators, acting coordinatewise on k-tuples of flat
/// vertices. The tuple universe is that of a hypergraph: tuples of pairwise
/// distinct vertices, and in the partite case tuples whose parts are
/// strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    generators: Vec<Permutation>,
    colors: Vec<u32>,
    partite: bool,
    k: usize,
}

impl GroupAction {
    /// Action on the k-tuples of a directed vertex set of size `n`.
    pub fn new(generators: Vec<Permutation>, n: usize, k: usize) -> Result<Self> {
        GroupAction::build(generators, vec![0; n], false, k)
    }

    /// Action on the edge universe of `graph`. Every generator must map each
    /// part onto itself.
    pub fn for_graph<H: Hypergraph>(graph: &H, generators: Vec<Permutation>) -> Result<Self> {
        let colors = graph.colors().to_vec();
        for (i, g) in generators.iter().enumerate() {
            if g.degree() == colors.len() {
                if let Some(v) = (0..colors.len()).find(|&v| colors[g.apply(v as Vertex) as usize] != colors[v]) {
                    return Err(Error::InvalidPermutation(format!(
                        "generator {i} moves vertex {} to another part",
                        graph.vertex_name(v as Vertex)
                    )));
                }
            }
        }
        GroupAction::build(generators, colors, graph.is_partite(), graph.arity())
    }

    /// Action of per-part permutations on a partite hypergraph's universe.
    pub fn for_partite(graph: &PartiteHypergraph, generators: &[PartitePermutation]) -> Result<Self> {
        let sizes: Vec<usize> = graph.parts().iter().map(Vec::len).collect();
        let flat = generators.iter().map(|g| g.flatten(graph.offsets(), &sizes)).collect::<Result<Vec<_>>>()?;
        GroupAction::build(flat, graph.colors().to_vec(), true, graph.arity())
    }

    fn build(generators: Vec<Permutation>, colors: Vec<u32>, partite: bool, k: usize) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::NoGenerators);
        }
        if let Some(g) = generators.iter().find(|g| g.degree() != colors.len()) {
            return Err(Error::InvalidPermutation(format!(
                "generator of degree {} on a universe of {} vertices",
                g.degree(),
                colors.len()
            )));
        }
        Ok(GroupAction { generators, colors, partite, k })
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn check_tuple(&self, t: &[Vertex]) -> Result<()> {
        let mismatch = |reason: String| Err(Error::UniverseMismatch { tuple: show_tuple(t), reason });
        if t.len() != self.k {
            return mismatch(format!("length {} but arity {}", t.len(), self.k));
        }
        if let Some(v) = t.iter().find(|&&v| v as usize >= self.colors.len()) {
            return mismatch(format!("vertex {v} out of range"));
        }
        if crate::hypergraph::has_repeat(t) {
            return mismatch("repeated coordinate".into());
        }
        if self.partite && t.windows(2).any(|w| self.colors[w[0] as usize] >= self.colors[w[1] as usize]) {
            return mismatch("parts are not strictly increasing".into());
        }
        Ok(())
    }

    /// The orbit of `x`: the smallest generator-closed set containing it,
    /// found by breadth-first closure with a sorted frontier.
    pub fn orbit_of_tuple(&self, x: &[Vertex]) -> Result<BTreeSet<Vec<Vertex>>> {
        self.check_tuple(x)?;
        Ok(self.closure(x))
    }

    fn closure(&self, x: &[Vertex]) -> BTreeSet<Vec<Vertex>> {
        let mut seen = BTreeSet::new();
        seen.insert(x.to_vec());
        let mut frontier = seen.clone();
        while !frontier.is_empty() {
            let mut next = BTreeSet::new();
            for t in &frontier {
                for g in &self.generators {
                    let img = g.apply_tuple(t);
                    if !seen.contains(&img) {
                        seen.insert(img.clone());
                        next.insert(img);
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    /// Orbits meeting `set`, in order of their least element of `set`, each
    /// annotated with the number of its tuples in `set`.
    pub fn orbits_touching(&self, set: &BTreeSet<Vec<Vertex>>) -> Result<Vec<OrbitInfo>> {
        for t in set {
            self.check_tuple(t)?;
        }
        let mut covered: BTreeSet<&Vec<Vertex>> = BTreeSet::new();
        let mut out = Vec::new();
        for t in set {
            if covered.contains(t) {
                continue;
            }
            let members = self.closure(t);
            let hits = set.iter().filter(|s| members.contains(*s)).count();
            covered.extend(set.iter().filter(|s| members.contains(*s)));
            out.push(OrbitInfo { members, hits });
        }
        Ok(out)
    }

    /// True iff every generator maps `set` onto itself.
    pub fn is_invariant(&self, set: &BTreeSet<Vec<Vertex>>) -> Result<bool> {
        for t in set {
            self.check_tuple(t)?;
        }
        Ok(self.generators.iter().all(|g| set.iter().all(|t| set.contains(&g.apply_tuple(t)))))
    }

    /// Index of the first generator that is not an automorphism of `edges`,
    /// with the offending tuple.
    pub fn first_non_automorphism(&self, edges: &BTreeSet<Vec<Vertex>>) -> Option<(usize, Vec<Vertex>)> {
        self.generators
            .iter()
            .enumerate()
            .find_map(|(i, g)| edges.iter().find(|t| !edges.contains(&g.apply_tuple(t))).map(|t| (i, t.clone())))
    }
}
