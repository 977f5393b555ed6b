//! Cayley hypergraphs over a finite Abelian group `A` and the diagonal
//! arithmetic-progression pipeline.
//!
//! An instance has `t` parts, each a copy of `A`, and a subgroup `H ≤ A^t`
//! acting on part `j` by translation with the `j`-th coordinate. For each
//! edge type `C_i` (a k-subset of the parts) a homomorphism
//! `ψ_i : A^{C_i} → A` with kernel `p_i(H)` and a level set `S_i ⊆ A` are
//! given; the type-`C_i` edges are the tuples `r` with `ψ_i(r) ∈ S_i`. Since
//! `ψ_i` vanishes on `p_i(H)`, every element of `H` is an automorphism, and
//! the `H`-orbits of type-`C_i` tuples are exactly the fibres of `ψ_i`.
//!
//! The arithmetic-progression family takes `k = t − 1`, `C_i` = all parts but
//! `i`, and `ψ_i(a) = Σ_{j≠i} (j − i)·a_j`. A homomorphism from the complete
//! template (one vertex per part, one edge per `C_i`) picks `a ∈ A^t`, and the
//! values `x_i = ψ_i(a)` form the progression with start `Σ_j (j−1)a_j` and
//! difference `−Σ_j a_j`. Each progression arises from `|A|^{t−2}` choices of `a`.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigUint;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::groups::{Element, FiniteGroup, GroupAction, PartitePermutation, Permutation};
use crate::hypergraph::{self, Hypergraph, PartiteHypergraph, TypedEdge, Vertex, DEFAULT_BUDGET};
use crate::label::Label;
use crate::removal::{self, RemovalCertificate, Strategy, SymmetrizedCertificate};

/// `ψ(r) = Σ_j coeffs[j]·r_j` on the tuples of one edge type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiSpec {
    pub ty: Vec<usize>,
    pub coeffs: Vec<i64>,
}

/// Generators of a subgroup `H ≤ A^t`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgroupSpec {
    pub generators: Vec<Vec<Element>>,
}

impl SubgroupSpec {
    /// All elements of the generated subgroup, by breadth-first closure.
    /// Fails once more than `cap` elements are found.
    pub fn closure(&self, group: &FiniteGroup, t: usize, cap: u64) -> Result<BTreeSet<Vec<Element>>> {
        let zero = vec![group.identity(); t];
        let mut seen = BTreeSet::new();
        seen.insert(zero.clone());
        let mut queue = VecDeque::from([zero]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y: Vec<Element> = x.iter().zip(g).map(|(&a, &b)| group.multiply(a, b)).collect();
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > cap {
                        return Err(Error::BudgetExceeded { budget: cap, nodes: seen.len() as u64 });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }
}

/// A realized Cayley hypergraph `H_{k,t}(A, {S_i}, C)`.
#[derive(Debug, Clone)]
pub struct CayleyHypergraphInstance {
    group: FiniteGroup,
    t: usize,
    k: usize,
    psi: Vec<PsiSpec>,
    sets: Vec<BTreeSet<Element>>,
    subgroup: SubgroupSpec,
    graph: PartiteHypergraph,
}

impl CayleyHypergraphInstance {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn parts(&self) -> usize {
        self.t
    }

    pub fn arity(&self) -> usize {
        self.k
    }

    pub fn psi_specs(&self) -> &[PsiSpec] {
        &self.psi
    }

    pub fn sets(&self) -> &[BTreeSet<Element>] {
        &self.sets
    }

    pub fn subgroup(&self) -> &SubgroupSpec {
        &self.subgroup
    }

    /// Vertex `v` of part `j` is group element `Element(v)`.
    pub fn graph(&self) -> &PartiteHypergraph {
        &self.graph
    }

    /// Index of the ψ-map whose edge type is `ty`.
    pub fn psi_index(&self, ty: &[usize]) -> Option<usize> {
        self.psi.iter().position(|p| p.ty == ty)
    }

    /// `ψ_i` of a tuple given by local vertex indices (= element indices).
    pub fn psi_value(&self, i: usize, tuple: &[Vertex]) -> Element {
        let elems: Vec<Element> = tuple.iter().map(|&v| Element(v as usize)).collect();
        evaluate(&self.group, &self.psi[i].coeffs, &elems)
    }

    /// Per-part translation by each generator of `H`.
    pub fn action(&self) -> GroupAction {
        let n = self.group.order();
        let mut gens: Vec<PartitePermutation> = self
            .subgroup
            .generators
            .iter()
            .map(|h| {
                PartitePermutation::new(
                    h.iter()
                        .map(|&hj| {
                            let map = (0..n).map(|x| self.group.multiply(Element(x), hj).0 as Vertex).collect();
                            Permutation::new(map).expect("translation is a bijection")
                        })
                        .collect(),
                )
            })
            .collect();
        if gens.is_empty() {
            gens.push(PartitePermutation::new(vec![Permutation::identity(n); self.t]));
        }
        GroupAction::for_partite(&self.graph, &gens).expect("translations preserve parts")
    }
}

fn evaluate(group: &FiniteGroup, coeffs: &[i64], elems: &[Element]) -> Element {
    coeffs.iter().zip(elems).fold(group.identity(), |acc, (&c, &x)| group.multiply(acc, group.scale(x, c)))
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInstance(msg.into())
}

/// Visits every tuple in `A^k` in lexicographic order of element indices.
fn for_each_tuple(order: usize, k: usize, mut f: impl FnMut(&[Vertex])) {
    if order == 0 {
        return;
    }
    let mut t = vec![0 as Vertex; k];
    loop {
        f(&t);
        let mut pos = k;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            t[pos] += 1;
            if (t[pos] as usize) < order {
                break;
            }
            t[pos] = 0;
        }
    }
}

/// Builds and validates `H_{k,t}(A, {S_i}, C)`.
///
/// Validation certifies `ker ψ_i = p_i(H)` for every `i`: each generator of
/// `H` projects into the kernel, `|p_i(H)| = |A|^{k−1}` and `ψ_i` is onto.
pub fn build_instance(
    group: &FiniteGroup,
    t: usize,
    k: usize,
    psi: Vec<PsiSpec>,
    sets: Vec<BTreeSet<Element>>,
    subgroup: SubgroupSpec,
    budget: Option<u64>,
) -> Result<CayleyHypergraphInstance> {
    if group.moduli().is_none() {
        return Err(Error::NotAbelian);
    }
    let budget = budget.unwrap_or(DEFAULT_BUDGET);
    if k == 0 || k > t {
        return Err(invalid(format!("need 1 ≤ k ≤ t, got k = {k}, t = {t}")));
    }
    if psi.len() != sets.len() {
        return Err(invalid(format!("{} psi maps but {} level sets", psi.len(), sets.len())));
    }
    let mut types = BTreeSet::new();
    for (i, p) in psi.iter().enumerate() {
        if p.ty.len() != k || p.coeffs.len() != k {
            return Err(invalid(format!("psi {i}: type and coefficients must have length k = {k}")));
        }
        if p.ty.iter().any(|&j| j >= t) || p.ty.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::BadEdgeType {
                ty: p.ty.clone(),
                reason: "psi type must be strictly increasing part indices",
            });
        }
        if !types.insert(p.ty.clone()) {
            return Err(invalid(format!("edge type {:?} appears twice", p.ty)));
        }
    }
    for s in &sets {
        if let Some(e) = s.iter().find(|e| e.0 >= group.order()) {
            return Err(Error::UnknownElement(format!("#{}", e.0)));
        }
    }
    for h in &subgroup.generators {
        if h.len() != t || h.iter().any(|e| e.0 >= group.order()) {
            return Err(invalid("subgroup generators must be t-tuples of group elements"));
        }
    }
    let order = group.order();
    let per_type = (order as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    let enumeration = per_type.saturating_mul(psi.len() as u128);
    if enumeration > budget as u128 {
        return Err(Error::BudgetExceeded { budget, nodes: u64::try_from(enumeration).unwrap_or(u64::MAX) });
    }

    for (i, p) in psi.iter().enumerate() {
        for h in &subgroup.generators {
            let proj: Vec<Element> = p.ty.iter().map(|&j| h[j]).collect();
            if evaluate(group, &p.coeffs, &proj) != group.identity() {
                return Err(Error::KernelMismatch {
                    index: i,
                    reason: format!("psi does not vanish on the projection of generator {h:?}"),
                });
            }
        }
    }
    let elements = subgroup.closure(group, t, budget)?;
    let expected = (order as u128).pow(k as u32 - 1);
    for (i, p) in psi.iter().enumerate() {
        let projections: BTreeSet<Vec<Element>> =
            elements.iter().map(|h| p.ty.iter().map(|&j| h[j]).collect()).collect();
        if projections.len() as u128 != expected {
            return Err(Error::KernelMismatch {
                index: i,
                reason: format!("|p(H)| = {} but |A|^(k-1) = {expected}", projections.len()),
            });
        }
        let mut image = vec![false; order];
        for_each_tuple(order, k, |r| {
            let elems: Vec<Element> = r.iter().map(|&v| Element(v as usize)).collect();
            image[evaluate(group, &p.coeffs, &elems).0] = true;
        });
        if !image.iter().all(|&b| b) {
            return Err(Error::KernelMismatch { index: i, reason: "psi is not surjective".into() });
        }
    }

    let mut edges = Vec::new();
    for (p, s) in psi.iter().zip(&sets) {
        for_each_tuple(order, k, |r| {
            let elems: Vec<Element> = r.iter().map(|&v| Element(v as usize)).collect();
            if s.contains(&evaluate(group, &p.coeffs, &elems)) {
                edges.push(TypedEdge::new(p.ty.clone(), r.to_vec()));
            }
        });
    }
    let parts = vec![group.labels().to_vec(); t];
    let graph = PartiteHypergraph::from_typed(parts, k, edges)?;
    Ok(CayleyHypergraphInstance { group: group.clone(), t, k, psi, sets, subgroup, graph })
}

/// The ψ-maps of the progression family: part `i` omitted, coefficients `j − i`.
pub fn ap_psi_specs(t: usize) -> Vec<PsiSpec> {
    (0..t)
        .map(|i| {
            let ty: Vec<usize> = (0..t).filter(|&j| j != i).collect();
            let coeffs = ty.iter().map(|&j| j as i64 - i as i64).collect();
            PsiSpec { ty, coeffs }
        })
        .collect()
}

/// Generators of `H = {a ∈ A^t : Σ a_j = 0, Σ (j−1) a_j = 0}`: the free
/// coordinates `a_3..a_t` range over unit vectors of `A`, and `a_1, a_2` are
/// solved from the two constraints.
pub fn ap_subgroup(group: &FiniteGroup, t: usize) -> SubgroupSpec {
    let units: Vec<Element> = group.generators().into_iter().filter(|&g| g != group.identity()).collect();
    let mut generators = Vec::new();
    for m in 2..t {
        for &u in &units {
            let mut h = vec![group.identity(); t];
            h[0] = group.scale(u, m as i64 - 1);
            h[1] = group.scale(u, -(m as i64));
            h[m] = u;
            generators.push(h);
        }
    }
    SubgroupSpec { generators }
}

/// The arithmetic-progression instance for `t ≥ 3` level sets.
pub fn ap_instance(
    group: &FiniteGroup,
    t: usize,
    sets: Vec<BTreeSet<Element>>,
    budget: Option<u64>,
) -> Result<CayleyHypergraphInstance> {
    if group.moduli().is_none() {
        return Err(Error::NotAbelian);
    }
    if t < 3 {
        return Err(invalid(format!("progression instances need t ≥ 3, got {t}")));
    }
    if sets.len() != t {
        return Err(invalid(format!("expected {t} sets, got {}", sets.len())));
    }
    build_instance(group, t, t - 1, ap_psi_specs(t), sets, ap_subgroup(group, t), budget)
}

/// `t` single-vertex parts and, for each part `i`, one edge on the other `t − 1` parts.
pub fn complete_partite_template(t: usize) -> Result<PartiteHypergraph> {
    if t < 3 {
        return Err(invalid(format!("template needs t ≥ 3, got {t}")));
    }
    let parts = (0..t).map(|p| vec![Label::from(p)]).collect();
    let edges = (0..t).map(|i| TypedEdge::new((0..t).filter(|&j| j != i).collect(), vec![0; t - 1]));
    PartiteHypergraph::from_typed(parts, t - 1, edges)
}

/// Number of pairs `(x, d) ∈ A²` with `x + i·d ∈ S_i` for `i = 0..t`.
pub fn count_diagonal_aps(group: &FiniteGroup, sets: &[BTreeSet<Element>]) -> Result<u64> {
    if group.moduli().is_none() {
        return Err(Error::NotAbelian);
    }
    for s in sets {
        if let Some(e) = s.iter().find(|e| e.0 >= group.order()) {
            return Err(Error::UnknownElement(format!("#{}", e.0)));
        }
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Ok(0);
    }
    let mut count = 0;
    for x in group.elements() {
        for d in group.elements() {
            if sets.iter().enumerate().all(|(i, s)| s.contains(&group.multiply(x, group.scale(d, i as i64)))) {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApReport {
    pub ap_count: u64,
    pub hom_count: BigUint,
    /// `|A|^{t−2}`.
    pub multiplicity: BigUint,
    pub consistent: bool,
}

/// Compares `hom(template_t, ap_instance)` with `|A|^{t−2}·ap_count`.
pub fn verify_ap_correspondence(
    group: &FiniteGroup,
    t: usize,
    sets: &[BTreeSet<Element>],
    budget: Option<u64>,
) -> Result<ApReport> {
    let inst = ap_instance(group, t, sets.to_vec(), budget)?;
    let template = complete_partite_template(t)?;
    let hom_count = hypergraph::count_homomorphisms(&template, inst.graph(), budget)?.count;
    let ap_count = count_diagonal_aps(group, sets)?;
    let multiplicity = num_traits::pow(BigUint::from(group.order()), t - 2);
    let consistent = hom_count == &multiplicity * BigUint::from(ap_count);
    Ok(ApReport { ap_count, hom_count, multiplicity, consistent })
}

/// Result of shrinking the level sets of a Cayley hypergraph.
#[derive(Debug, Clone)]
pub struct ShrinkOutcome {
    /// `S″_i`, one per ψ-map.
    pub shrink: Vec<BTreeSet<Element>>,
    pub remaining: Vec<BTreeSet<Element>>,
    pub raw: RemovalCertificate<TypedEdge>,
    pub symmetrized: SymmetrizedCertificate<TypedEdge>,
    /// The instance rebuilt on `{S_i ∖ S″_i}` has exactly the edges of `G ∖ S′`.
    pub reconstruction_holds: bool,
}

impl ShrinkOutcome {
    pub fn shrink_total(&self) -> usize {
        self.shrink.iter().map(BTreeSet::len).sum()
    }

    /// `|S″_i| / |A|` per level set.
    pub fn shrink_fractions(&self, order: usize) -> Vec<Ratio<BigUint>> {
        self.shrink.iter().map(|s| hypergraph::ratio(&BigUint::from(s.len()), &BigUint::from(order))).collect()
    }
}

/// Removes `template` from the instance, symmetrizes under `H`, and maps
/// each removed fibre `ψ_i^{-1}(x)` back to the level-set element `x`.
pub fn shrink_level_sets(
    inst: &CayleyHypergraphInstance,
    template: &PartiteHypergraph,
    strategy: Strategy,
    budget: Option<u64>,
) -> Result<ShrinkOutcome> {
    let raw = removal::find_removal(template, inst.graph(), strategy, budget)?;
    let action = inst.action();
    let symmetrized = removal::certify_symmetrized(template, inst.graph(), &raw, &action, "H translations", budget)?;
    let mut shrink = vec![BTreeSet::new(); inst.psi.len()];
    for e in &symmetrized.certificate.removal_set {
        let i = inst.psi_index(&e.ty).ok_or_else(|| invalid(format!("removed tuple of unknown type {:?}", e.ty)))?;
        let x = inst.psi_value(i, &e.tuple);
        if inst.sets[i].contains(&x) {
            shrink[i].insert(x);
        }
    }
    let remaining: Vec<BTreeSet<Element>> =
        inst.sets.iter().zip(&shrink).map(|(s, r)| s.difference(r).copied().collect()).collect();
    let rebuilt = build_instance(
        &inst.group,
        inst.t,
        inst.k,
        inst.psi.clone(),
        remaining.clone(),
        inst.subgroup.clone(),
        budget,
    )?;
    let subtracted = hypergraph::subtract(inst.graph(), &symmetrized.certificate.removal_set)?;
    let reconstruction_holds = rebuilt.graph().edges() == subtracted.edges();
    Ok(ShrinkOutcome { shrink, remaining, raw, symmetrized, reconstruction_holds })
}

#[derive(Debug, Clone)]
pub struct DiagonalOutcome {
    pub initial_aps: u64,
    pub remaining_aps: u64,
    pub outcome: ShrinkOutcome,
}

impl DiagonalOutcome {
    /// No progression survives, the reconstruction identity holds, and
    /// `Σ|S″_i|·|A|^{t−2} = |S′| ≤ t·|S_raw|`.
    pub fn sound(&self, order: usize, t: usize) -> bool {
        let sym = &self.outcome.symmetrized;
        let fibre = (order as u128).pow(t as u32 - 2);
        self.remaining_aps == 0
            && self.outcome.reconstruction_holds
            && self.outcome.shrink_total() as u128 * fibre == sym.certificate.removed_count as u128
            && sym.certificate.removed_count <= t * self.outcome.raw.removed_count
            && sym.all_checks_pass()
    }
}

/// Shrinks `S_1..S_t` until no diagonal progression `x_i ∈ S_i` remains.
pub fn diagonal_pipeline(
    group: &FiniteGroup,
    t: usize,
    sets: Vec<BTreeSet<Element>>,
    strategy: Strategy,
    budget: Option<u64>,
) -> Result<DiagonalOutcome> {
    let initial_aps = count_diagonal_aps(group, &sets)?;
    let inst = ap_instance(group, t, sets, budget)?;
    let template = complete_partite_template(t)?;
    let outcome = shrink_level_sets(&inst, &template, strategy, budget)?;
    let remaining_aps = count_diagonal_aps(group, &outcome.remaining)?;
    Ok(DiagonalOutcome { initial_aps, remaining_aps, outcome })
}
