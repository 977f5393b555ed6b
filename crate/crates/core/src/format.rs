//! JSON file formats for hypergraphs, groups, actions, Cayley hypergraph
//! instances and removal certificates.
//!
//! ```json
//! {"kind": "directed", "k": 2, "vertices": [1, 2, 3], "edges": [[1, 2], [1, 3], [2, 3]]}
//! {"kind": "partite", "k": 2, "parts": [["a"], ["a"], ["a"]],
//!  "edges": [{"type": [0, 1], "tuple": ["a", "a"]}]}
//! {"type": "cyclic-product", "moduli": [2, 3]}
//! {"type": "table", "elements": ["e", "x"], "table": [["e", "x"], ["x", "e"]]}
//! ```
//!
//! Part indices are 0-based. Action files list generators as `[from, to]`
//! label pairs; unlisted vertices are fixed. For partite graphs each
//! generator is a list of such pair lists, one per part.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::cayley_hyper::{PsiSpec, SubgroupSpec};
use crate::error::Error;
use crate::groups::{Element, FiniteGroup, GroupAction, PartitePermutation, Permutation};
use crate::hypergraph::{render_ratio, DirectedHypergraph, Hypergraph, PartiteHypergraph, TypedEdge, Vertex};
use crate::label::Label;
use crate::removal::{RemovalCertificate, SymmetrizedCertificate};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Invalid {
        field: String,
        #[source]
        source: Error,
    },
    #[error("{0}")]
    Schema(String),
}

pub type FormatResult<T> = std::result::Result<T, FormatError>;

fn invalid(field: impl Into<String>) -> impl FnOnce(Error) -> FormatError {
    let field = field.into();
    move |source| FormatError::Invalid { field, source }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum HypergraphFile {
    Directed { k: usize, vertices: Vec<Label>, edges: Vec<Vec<Label>> },
    Partite { k: usize, parts: Vec<Vec<Label>>, edges: Vec<PartiteEdgeFile> },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartiteEdgeFile {
    #[serde(rename = "type")]
    ty: Vec<usize>,
    tuple: Vec<Label>,
}

/// Either flavor of hypergraph, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyHypergraph {
    Directed(DirectedHypergraph),
    Partite(PartiteHypergraph),
}

impl AnyHypergraph {
    pub fn kind(&self) -> &'static str {
        match self {
            AnyHypergraph::Directed(_) => "directed",
            AnyHypergraph::Partite(_) => "partite",
        }
    }
}

pub fn parse_hypergraph(text: &str) -> FormatResult<AnyHypergraph> {
    match serde_json::from_str::<HypergraphFile>(text)? {
        HypergraphFile::Directed { k, vertices, edges } => {
            match DirectedHypergraph::new(vertices.clone(), k, edges.clone()) {
                Ok(g) => Ok(AnyHypergraph::Directed(g)),
                Err(e) => {
                    // locate the offending edge for the diagnostic
                    let at = edges
                        .iter()
                        .position(|edge| DirectedHypergraph::new(vertices.clone(), k, [edge.clone()]).is_err());
                    Err(invalid(at.map_or("k".to_string(), |i| format!("edges[{i}]")))(e))
                }
            }
        }
        HypergraphFile::Partite { k, parts, edges } => {
            let typed: Vec<(Vec<usize>, Vec<Label>)> = edges.into_iter().map(|e| (e.ty, e.tuple)).collect();
            match PartiteHypergraph::new(parts.clone(), k, typed.clone()) {
                Ok(g) => Ok(AnyHypergraph::Partite(g)),
                Err(e) => {
                    let at =
                        typed.iter().position(|edge| PartiteHypergraph::new(parts.clone(), k, [edge.clone()]).is_err());
                    Err(invalid(at.map_or("k".to_string(), |i| format!("edges[{i}]")))(e))
                }
            }
        }
    }
}

pub fn directed_to_json(g: &DirectedHypergraph) -> Value {
    let edges: Vec<Vec<Label>> = g.edges().iter().map(|e| g.edge_labels(e)).collect();
    serde_json::to_value(HypergraphFile::Directed { k: g.arity(), vertices: g.vertices().to_vec(), edges })
        .expect("hypergraph serializes")
}

pub fn partite_to_json(g: &PartiteHypergraph) -> Value {
    let edges = g.edges().iter().map(|e| PartiteEdgeFile { ty: e.ty.clone(), tuple: g.edge_labels(e) }).collect();
    serde_json::to_value(HypergraphFile::Partite { k: g.arity(), parts: g.parts().to_vec(), edges })
        .expect("hypergraph serializes")
}

pub fn hypergraph_to_json(g: &AnyHypergraph) -> Value {
    match g {
        AnyHypergraph::Directed(g) => directed_to_json(g),
        AnyHypergraph::Partite(g) => partite_to_json(g),
    }
}

/// Edges rendered with labels, in the same shape as the hypergraph format.
pub trait EdgeJson: Hypergraph {
    fn edge_to_json(&self, e: &Self::Edge) -> Value;
    fn edge_from_json(&self, v: &Value) -> Result<Self::Edge, Error>;
}

impl EdgeJson for DirectedHypergraph {
    fn edge_to_json(&self, e: &Vec<Vertex>) -> Value {
        json!(self.edge_labels(e))
    }

    fn edge_from_json(&self, v: &Value) -> Result<Vec<Vertex>, Error> {
        let labels: Vec<Label> = serde_json::from_value(v.clone())
            .map_err(|e| Error::UniverseMismatch { tuple: v.to_string(), reason: e.to_string() })?;
        self.edge_from_labels(&labels)
    }
}

impl EdgeJson for PartiteHypergraph {
    fn edge_to_json(&self, e: &TypedEdge) -> Value {
        json!({"type": e.ty, "tuple": self.edge_labels(e)})
    }

    fn edge_from_json(&self, v: &Value) -> Result<TypedEdge, Error> {
        let mismatch = |reason: String| Error::UniverseMismatch { tuple: v.to_string(), reason };
        let f: PartiteEdgeFile = serde_json::from_value(v.clone()).map_err(|e| mismatch(e.to_string()))?;
        if f.ty.len() != f.tuple.len() {
            return Err(mismatch("type and tuple lengths differ".into()));
        }
        let mut tuple = Vec::with_capacity(f.tuple.len());
        for (&p, l) in f.ty.iter().zip(&f.tuple) {
            tuple.push(self.part_index(p, l).ok_or_else(|| mismatch(format!("{l} is not in part {p}")))?);
        }
        let e = TypedEdge::new(f.ty, tuple);
        self.check_tuple(&e)?;
        Ok(e)
    }
}

fn biguint_json(x: &BigUint) -> Value {
    match u64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

pub fn certificate_to_json<H: EdgeJson>(graph: &H, cert: &RemovalCertificate<H::Edge>) -> Value {
    json!({
        "strategy": cert.strategy,
        "removal_set": cert.removal_set.iter().map(|e| graph.edge_to_json(e)).collect::<Vec<_>>(),
        "removed_count": cert.removed_count,
        "universe_size": biguint_json(&cert.universe_size),
        "achieved_epsilon": render_ratio(&cert.achieved_epsilon),
        "freeness_checked": cert.freeness_checked,
        "invariant_under": cert.invariant_under,
    })
}

pub fn symmetrized_to_json<H: EdgeJson>(graph: &H, cert: &SymmetrizedCertificate<H::Edge>) -> Value {
    let orbits: Vec<Value> = cert
        .orbits
        .iter()
        .map(|o| {
            json!({
                "representative": graph.edge_to_json(&o.representative),
                "size": o.size,
                "hits": o.hits,
                "selected": o.selected,
                "test": format!("{} {} {}·{}", o.size, if o.selected { "≤" } else { ">" }, cert.factor, o.hits),
            })
        })
        .collect();
    json!({
        "certificate": certificate_to_json(graph, &cert.certificate),
        "raw_count": cert.raw_count,
        "factor": cert.factor,
        "size_report": format!(
            "{} ≤ {}·{}",
            cert.certificate.removed_count, cert.factor, cert.raw_count
        ),
        "size_bound_holds": cert.size_bound_holds,
        "invariant": cert.invariant,
        "complement_symmetric": cert.complement_symmetric,
        "orbits": orbits,
    })
}

/// Reads the removal set of a certificate. Accepts a bare certificate, a
/// symmetrized certificate, or a run report carrying either.
pub fn parse_removal_set<H: EdgeJson>(graph: &H, text: &str) -> FormatResult<BTreeSet<H::Edge>> {
    let v: Value = serde_json::from_str(text)?;
    let mut cur = &v;
    loop {
        if let Some(set) = cur.get("removal_set") {
            let arr = set.as_array().ok_or_else(|| FormatError::Schema("removal_set must be a list".into()))?;
            let mut out = BTreeSet::new();
            for (i, e) in arr.iter().enumerate() {
                out.insert(graph.edge_from_json(e).map_err(invalid(format!("removal_set[{i}]")))?);
            }
            return Ok(out);
        }
        match ["result", "symmetrized", "certificate"].iter().find_map(|k| cur.get(*k)) {
            Some(inner) => cur = inner,
            None => return Err(FormatError::Schema("no removal_set found".into())),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
enum GroupFile {
    CyclicProduct {
        moduli: Vec<u64>,
    },
    Table {
        elements: Vec<Label>,
        table: Vec<Vec<Label>>,
        #[serde(default, rename = "verify-assoc", alias = "verify_assoc")]
        verify_assoc: bool,
    },
}

pub fn parse_group_value(v: &Value) -> FormatResult<FiniteGroup> {
    match serde_json::from_value::<GroupFile>(v.clone())? {
        GroupFile::CyclicProduct { moduli } => FiniteGroup::cyclic_product(&moduli).map_err(invalid("moduli")),
        GroupFile::Table { elements, table, verify_assoc } => {
            FiniteGroup::from_table(elements, table, verify_assoc).map_err(invalid("table"))
        }
    }
}

pub fn parse_group(text: &str) -> FormatResult<FiniteGroup> {
    parse_group_value(&serde_json::from_str(text)?)
}

/// An element in the group's notation: a residue for a single cyclic
/// factor, a residue list or `"(r1,r2)"` string for products, and the
/// declared label for table groups.
pub fn parse_element(group: &FiniteGroup, v: &Value) -> Result<Element, Error> {
    if let Some(items) = v.as_array() {
        let residues: Option<Vec<i64>> = items.iter().map(Value::as_i64).collect();
        return match residues {
            Some(r) if group.moduli().is_some() => group.from_residues(&r),
            _ => Err(Error::UnknownElement(v.to_string())),
        };
    }
    let label: Label = serde_json::from_value(v.clone()).map_err(|_| Error::UnknownElement(v.to_string()))?;
    if let Ok(e) = group.element(&label) {
        return Ok(e);
    }
    if let (Label::Str(s), Some(_)) = (&label, group.moduli()) {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let residues: std::result::Result<Vec<i64>, _> = inner.split(',').map(|x| x.trim().parse()).collect();
        if let Ok(r) = residues {
            return group.from_residues(&r);
        }
    }
    Err(Error::UnknownElement(label.to_string()))
}

pub fn element_to_json(group: &FiniteGroup, e: Element) -> Value {
    match group.moduli() {
        Some([_]) => json!(group.residues(e)[0]),
        Some(_) => json!(group.residues(e)),
        None => json!(group.label(e)),
    }
}

pub fn element_set_to_json(group: &FiniteGroup, set: &BTreeSet<Element>) -> Value {
    Value::Array(set.iter().map(|&e| element_to_json(group, e)).collect())
}

pub fn parse_element_set(group: &FiniteGroup, v: &Value, field: &str) -> FormatResult<BTreeSet<Element>> {
    let arr = v.as_array().ok_or_else(|| FormatError::Schema(format!("{field} must be a list")))?;
    arr.iter().enumerate().map(|(i, x)| parse_element(group, x).map_err(invalid(format!("{field}[{i}]")))).collect()
}

/// Parses a connection-set argument: a JSON list, or comma-separated
/// elements such as `1,2,3`.
pub fn parse_element_list(group: &FiniteGroup, text: &str) -> FormatResult<BTreeSet<Element>> {
    let trimmed = text.trim();
    let v: Value = match serde_json::from_str(trimmed) {
        Ok(v @ Value::Array(_)) => v,
        _ if trimmed.is_empty() => json!([]),
        _ => Value::Array(
            trimmed
                .split(',')
                .map(|s| {
                    let s = s.trim();
                    s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::from(s))
                })
                .collect(),
        ),
    };
    parse_element_set(group, &v, "set")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionFile {
    generators: Vec<Value>,
}

fn pairs_to_map(
    labels: &[Label],
    index: impl Fn(&Label) -> Option<Vertex>,
    v: &Value,
    field: &str,
) -> FormatResult<Permutation> {
    let pairs: Vec<(Label, Label)> = serde_json::from_value(v.clone())
        .map_err(|e| FormatError::Schema(format!("{field}: expected a list of [from, to] pairs ({e})")))?;
    let mut map: Vec<Vertex> = (0..labels.len() as Vertex).collect();
    let mut assigned = HashMap::new();
    for (from, to) in &pairs {
        let unknown = |l: &Label| FormatError::Invalid {
            field: field.to_string(),
            source: Error::InvalidPermutation(format!("unknown vertex {l}")),
        };
        let a = index(from).ok_or_else(|| unknown(from))?;
        let b = index(to).ok_or_else(|| unknown(to))?;
        if assigned.insert(a, b).is_some() {
            return Err(invalid(field)(Error::InvalidPermutation(format!("{from} mapped twice"))));
        }
        map[a as usize] = b;
    }
    Permutation::new(map).map_err(invalid(field))
}

/// Reads an action file against the graph whose automorphisms it lists.
pub fn parse_action(graph: &AnyHypergraph, text: &str) -> FormatResult<GroupAction> {
    let file: ActionFile = serde_json::from_str(text)?;
    match graph {
        AnyHypergraph::Directed(g) => {
            let gens = file
                .generators
                .iter()
                .enumerate()
                .map(|(i, v)| pairs_to_map(g.vertices(), |l| g.vertex_index(l), v, &format!("generators[{i}]")))
                .collect::<FormatResult<Vec<_>>>()?;
            GroupAction::for_graph(g, gens).map_err(invalid("generators"))
        }
        AnyHypergraph::Partite(g) => {
            let mut gens = Vec::new();
            for (i, v) in file.generators.iter().enumerate() {
                let per_part = v
                    .as_array()
                    .filter(|a| a.len() == g.part_count())
                    .ok_or_else(|| FormatError::Schema(format!("generators[{i}] needs one pair list per part")))?;
                let perms = per_part
                    .iter()
                    .enumerate()
                    .map(|(p, pv)| {
                        pairs_to_map(&g.parts()[p], |l| g.part_index(p, l), pv, &format!("generators[{i}][{p}]"))
                    })
                    .collect::<FormatResult<Vec<_>>>()?;
                gens.push(PartitePermutation::new(perms));
            }
            GroupAction::for_partite(g, &gens).map_err(invalid("generators"))
        }
    }
}

/// A Cayley hypergraph instance description.
#[derive(Debug, Clone)]
pub enum InstanceSpec {
    General {
        group: FiniteGroup,
        t: usize,
        k: usize,
        psi: Vec<PsiSpec>,
        sets: Vec<BTreeSet<Element>>,
        subgroup: SubgroupSpec,
    },
    /// The progression family; the group may come from elsewhere (e.g. the command line).
    Ap { group: Option<FiniteGroup>, t: usize, sets: Vec<Value> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PsiFile {
    #[serde(rename = "type")]
    ty: Vec<usize>,
    coeffs: Vec<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    #[serde(default)]
    family: Option<String>,
    #[serde(default)]
    group: Option<Value>,
    t: usize,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    psi: Vec<PsiFile>,
    sets: Vec<Value>,
    #[serde(default)]
    subgroup_generators: Vec<Vec<Value>>,
}

pub fn parse_instance(text: &str) -> FormatResult<InstanceSpec> {
    let f: InstanceFile = serde_json::from_str(text)?;
    let group = f.group.as_ref().map(parse_group_value).transpose()?;
    match f.family.as_deref() {
        Some("ap") => Ok(InstanceSpec::Ap { group, t: f.t, sets: f.sets }),
        Some(other) => Err(FormatError::Schema(format!("unknown family {other:?}"))),
        None => {
            let group = group.ok_or_else(|| FormatError::Schema("general instances need a group".into()))?;
            let k = f.k.ok_or_else(|| FormatError::Schema("general instances need k".into()))?;
            let sets = f
                .sets
                .iter()
                .enumerate()
                .map(|(i, v)| parse_element_set(&group, v, &format!("sets[{i}]")))
                .collect::<FormatResult<Vec<_>>>()?;
            let generators = f
                .subgroup_generators
                .iter()
                .enumerate()
                .map(|(i, h)| {
                    h.iter()
                        .enumerate()
                        .map(|(j, x)| {
                            parse_element(&group, x).map_err(invalid(format!("subgroup_generators[{i}][{j}]")))
                        })
                        .collect::<FormatResult<Vec<_>>>()
                })
                .collect::<FormatResult<Vec<_>>>()?;
            let psi = f.psi.into_iter().map(|p| PsiSpec { ty: p.ty, coeffs: p.coeffs }).collect();
            Ok(InstanceSpec::General { group, t: f.t, k, psi, sets, subgroup: SubgroupSpec { generators } })
        }
    }
}

/// Reads level sets: a JSON list of element lists, or an AP-family instance object.
pub fn parse_sets(group: &FiniteGroup, text: &str) -> FormatResult<(Option<usize>, Vec<BTreeSet<Element>>)> {
    let v: Value = serde_json::from_str(text)?;
    let (t, raw) = match &v {
        Value::Array(items) => (None, items.clone()),
        Value::Object(_) => match parse_instance(text)? {
            InstanceSpec::Ap { t, sets, .. } => (Some(t), sets),
            InstanceSpec::General { .. } => {
                return Err(FormatError::Schema("expected a list of sets or an ap-family instance".into()))
            }
        },
        _ => return Err(FormatError::Schema("expected a list of sets".into())),
    };
    let sets = raw
        .iter()
        .enumerate()
        .map(|(i, s)| parse_element_set(group, s, &format!("sets[{i}]")))
        .collect::<FormatResult<Vec<_>>>()?;
    Ok((t, sets))
}
