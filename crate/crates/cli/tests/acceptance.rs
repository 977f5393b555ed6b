//! Acceptance suite. Every check compares the library (and, for the worked
//! numbers, the `symrem` binary) against brute-force oracles written here
//! from the definitions. Prints one line per criterion.

use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use symrem::cayley;
use symrem::cayley_hyper;
use symrem::groups::{Element, FiniteGroup, GroupAction, PartitePermutation, Permutation};
use symrem::hypergraph::{self, DirectedHypergraph, Hypergraph, PartiteHypergraph, TypedEdge, Vertex};
use symrem::removal::{self, ExactOptions, Strategy};
use symrem::Label;

// ---------------------------------------------------------------------------
// oracles

/// Calls `f` on every map `i ↦ x[i]` with `x[i] < ranges[i]`.
fn for_each_map(ranges: &[usize], mut f: impl FnMut(&[usize])) {
    if ranges.contains(&0) {
        return;
    }
    let mut x = vec![0; ranges.len()];
    loop {
        f(&x);
        let mut i = 0;
        loop {
            if i == x.len() {
                return;
            }
            x[i] += 1;
            if x[i] < ranges[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

type Tuple = Vec<usize>;
/// A partite tuple: (part indices, local vertex indices).
type Typed = (Vec<usize>, Vec<usize>);

/// A plain directed hypergraph: `n` vertices `0..n` and a set of tuples.
#[derive(Clone)]
struct Plain {
    n: usize,
    k: usize,
    edges: BTreeSet<Tuple>,
}

/// A plain partite hypergraph: part sizes and typed tuples.
#[derive(Clone)]
struct PlainPartite {
    sizes: Vec<usize>,
    k: usize,
    edges: BTreeSet<Typed>,
}

fn homs_plain(f: &Plain, g: &Plain) -> u64 {
    let mut count = 0;
    for_each_map(&vec![g.n; f.n], |m| {
        if f.edges.iter().all(|e| g.edges.contains(&e.iter().map(|&v| m[v]).collect::<Vec<_>>())) {
            count += 1;
        }
    });
    count
}

/// Edge-image sets of all homomorphisms, deduplicated.
fn copies_plain(f: &Plain, g: &Plain) -> BTreeSet<BTreeSet<Tuple>> {
    let mut out = BTreeSet::new();
    for_each_map(&vec![g.n; f.n], |m| {
        let image: BTreeSet<Tuple> = f.edges.iter().map(|e| e.iter().map(|&v| m[v]).collect()).collect();
        if image.iter().all(|e| g.edges.contains(e)) {
            out.insert(image);
        }
    });
    out
}

/// Template vertices are listed part by part; a map sends each template
/// vertex to a vertex of the same part of `g`.
fn homs_partite(f: &PlainPartite, g: &PlainPartite) -> u64 {
    let mut slots = Vec::new();
    let mut offset = vec![0; f.sizes.len()];
    for (p, &s) in f.sizes.iter().enumerate() {
        offset[p] = slots.len();
        slots.extend(std::iter::repeat_n(g.sizes[p], s));
    }
    let mut count = 0;
    for_each_map(&slots, |m| {
        let ok = f.edges.iter().all(|(ty, tuple)| {
            let img: Vec<usize> = ty.iter().zip(tuple).map(|(&p, &v)| m[offset[p] + v]).collect();
            g.edges.contains(&(ty.clone(), img))
        });
        if ok {
            count += 1;
        }
    });
    count
}

fn mod_n(x: i64, n: usize) -> usize {
    x.rem_euclid(n as i64) as usize
}

/// Ordered (x, d) ∈ Z_n² with x + i·d ∈ S_i for every i.
fn aps(n: usize, sets: &[BTreeSet<usize>]) -> u64 {
    let mut c = 0;
    for x in 0..n {
        for d in 0..n {
            if sets.iter().enumerate().all(|(i, s)| s.contains(&((x + i * d) % n))) {
                c += 1;
            }
        }
    }
    c
}

/// `Σ_{j≠i} (j − i)·a_j` with 1-based `i` and `j`.
fn psi(n: usize, i: usize, a: &[usize]) -> usize {
    let t = a.len();
    let s: i64 = (1..=t).filter(|&j| j != i).map(|j| (j as i64 - i as i64) * a[j - 1] as i64).sum();
    mod_n(s, n)
}

/// Points of Z_n^t satisfying `ψ_i(a without coordinate i) ∈ S_i` for all i.
fn ap_homs(n: usize, sets: &[BTreeSet<usize>]) -> u64 {
    let t = sets.len();
    let mut c = 0;
    for_each_map(&vec![n; t], |a| {
        if (1..=t).all(|i| sets[i - 1].contains(&psi(n, i, a))) {
            c += 1;
        }
    });
    c
}

/// Edges of the progression hypergraph, by definition: type = parts other
/// than `i`, tuple = residues on those parts, kept when ψ_i lands in S_i.
fn ap_edges(n: usize, sets: &[BTreeSet<usize>]) -> BTreeSet<Typed> {
    let t = sets.len();
    let mut out = BTreeSet::new();
    for i in 1..=t {
        let ty: Vec<usize> = (0..t).filter(|&p| p != i - 1).collect();
        for_each_map(&vec![n; t - 1], |r| {
            let mut a = vec![0; t];
            for (&p, &x) in ty.iter().zip(r) {
                a[p] = x;
            }
            if sets[i - 1].contains(&psi(n, i, &a)) {
                out.insert((ty.clone(), r.to_vec()));
            }
        });
    }
    out
}

/// Smallest number of elements meeting every copy, by trying all subsets of
/// each size in turn.
fn min_hitting_exhaustive(copies: &BTreeSet<BTreeSet<Tuple>>) -> usize {
    let universe: Vec<Tuple> = copies.iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let masks: Vec<u64> =
        copies.iter().map(|c| c.iter().map(|e| 1u64 << universe.iter().position(|u| u == e).unwrap()).sum()).collect();
    let u = universe.len();
    for size in 0..=u {
        let mut found = false;
        combinations(u, size, &mut |chosen: u64| {
            if !found && masks.iter().all(|m| m & chosen != 0) {
                found = true;
            }
        });
        if found {
            return size;
        }
    }
    unreachable!("the whole universe hits every copy")
}

fn combinations(n: usize, k: usize, f: &mut dyn FnMut(u64)) {
    fn rec(start: usize, n: usize, k: usize, acc: u64, f: &mut dyn FnMut(u64)) {
        if k == 0 {
            f(acc);
            return;
        }
        for i in start..=n - k {
            rec(i + 1, n, k - 1, acc | 1 << i, f);
        }
    }
    rec(0, n, k, 0, f)
}

// ---------------------------------------------------------------------------
// conversions to the library

fn labels(n: usize) -> Vec<Label> {
    (0..n).map(Label::from).collect()
}

fn to_lib(g: &Plain) -> DirectedHypergraph {
    let edges = g.edges.iter().map(|e| e.iter().map(|&v| v as Vertex).collect());
    DirectedHypergraph::from_indices(labels(g.n), g.k, edges).unwrap()
}

fn to_lib_partite(g: &PlainPartite) -> PartiteHypergraph {
    let parts = g.sizes.iter().map(|&s| labels(s)).collect();
    let edges =
        g.edges.iter().map(|(ty, tuple)| TypedEdge::new(ty.clone(), tuple.iter().map(|&v| v as Vertex).collect()));
    PartiteHypergraph::from_typed(parts, g.k, edges).unwrap()
}

fn from_lib_tuple(e: &[Vertex]) -> Tuple {
    e.iter().map(|&v| v as usize).collect()
}

fn from_lib_typed(e: &TypedEdge) -> Typed {
    (e.ty.clone(), from_lib_tuple(&e.tuple))
}

fn z(n: usize) -> FiniteGroup {
    FiniteGroup::cyclic_product(&[n as u64]).unwrap()
}

fn el(g: &FiniteGroup, r: usize) -> Element {
    g.from_residues(&[r as i64]).unwrap()
}

fn lib_set(g: &FiniteGroup, s: &BTreeSet<usize>) -> BTreeSet<Element> {
    s.iter().map(|&r| el(g, r)).collect()
}

fn residues(g: &FiniteGroup, s: &BTreeSet<Element>) -> BTreeSet<usize> {
    s.iter().map(|&e| g.residues(e)[0] as usize).collect()
}

fn distinct_tuples(n: usize, k: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    for_each_map(&vec![n; k], |x| {
        if x.iter().collect::<HashSet<_>>().len() == k {
            out.push(x.to_vec());
        }
    });
    out
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize, p: f64) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

fn random_plain(rng: &mut ChaCha8Rng, n: std::ops::RangeInclusive<usize>, k: usize, p: std::ops::Range<f64>) -> Plain {
    let n = rng.gen_range(n);
    let p = rng.gen_range(p);
    let edges = distinct_tuples(n, k).into_iter().filter(|_| rng.gen_bool(p)).collect();
    Plain { n, k, edges }
}

fn typed_universe(sizes: &[usize], k: usize) -> Vec<Typed> {
    let mut out = Vec::new();
    for_each_map(&vec![2; sizes.len()], |pick| {
        if pick.iter().sum::<usize>() != k {
            return;
        }
        let ty: Vec<usize> = (0..sizes.len()).filter(|&p| pick[p] == 1).collect();
        let ranges: Vec<usize> = ty.iter().map(|&p| sizes[p]).collect();
        for_each_map(&ranges, |x| out.push((ty.clone(), x.to_vec())));
    });
    out
}

fn triangle() -> Plain {
    Plain { n: 3, k: 2, edges: [vec![0, 1], vec![0, 2], vec![1, 2]].into_iter().collect() }
}

fn four_point() -> Plain {
    Plain { n: 4, k: 3, edges: [vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]].into_iter().collect() }
}

fn partite_triangle() -> PlainPartite {
    PlainPartite {
        sizes: vec![1, 1, 1],
        k: 2,
        edges: [(vec![0, 1], vec![0, 0]), (vec![0, 2], vec![0, 0]), (vec![1, 2], vec![0, 0])].into_iter().collect(),
    }
}

// ---------------------------------------------------------------------------
// criteria

struct Verdict {
    failures: Vec<String>,
    summary: String,
}

fn hom_oracle_equivalence(rng: &mut ChaCha8Rng) -> Verdict {
    let mut failures = Vec::new();
    let (mut directed, mut partite) = (0, 0);
    for round in 0..200 {
        let k = rng.gen_range(2..=3);
        if round % 4 == 3 {
            let f_sizes: Vec<usize> = loop {
                let s: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
                if s.iter().sum::<usize>() <= 4 {
                    break s;
                }
            };
            let g_sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=2)).collect();
            let pf = rng.gen_range(0.2..0.6);
            let pg = rng.gen_range(0.2..0.9);
            let f = PlainPartite {
                edges: typed_universe(&f_sizes, k).into_iter().filter(|_| rng.gen_bool(pf)).collect(),
                sizes: f_sizes,
                k,
            };
            let g = PlainPartite {
                edges: typed_universe(&g_sizes, k).into_iter().filter(|_| rng.gen_bool(pg)).collect(),
                sizes: g_sizes,
                k,
            };
            let expected = homs_partite(&f, &g);
            let total: u64 = f.sizes.iter().zip(&g.sizes).map(|(&a, &b)| (b as u64).pow(a as u32)).product();
            let got = hypergraph::count_homomorphisms(&to_lib_partite(&f), &to_lib_partite(&g), None).unwrap();
            if got.count.to_string() != expected.to_string() || got.total_maps.to_string() != total.to_string() {
                failures.push(format!("partite round {round}: {} vs {expected}", got.count));
            }
            partite += 1;
        } else {
            let f = random_plain(rng, 1..=4, k, 0.2..0.6);
            let g = random_plain(rng, 1..=6, k, 0.2..0.9);
            let expected = homs_plain(&f, &g);
            let got = hypergraph::count_homomorphisms(&to_lib(&f), &to_lib(&g), None).unwrap();
            let total = (g.n as u64).pow(f.n as u32);
            if got.count.to_string() != expected.to_string() || got.total_maps.to_string() != total.to_string() {
                failures.push(format!("directed round {round}: {} vs {expected}", got.count));
            }
            directed += 1;
        }
    }
    Verdict { failures, summary: format!("{directed} directed and {partite} partite pairs") }
}

/// Orbits of `universe` under the cyclic group generated by `step`.
fn cyclic_orbits<T: Ord + Clone>(universe: &[T], step: impl Fn(&T) -> T) -> Vec<BTreeSet<T>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for x in universe {
        if seen.contains(x) {
            continue;
        }
        let mut orbit = BTreeSet::new();
        let mut y = x.clone();
        while orbit.insert(y.clone()) {
            y = step(&y);
        }
        seen.extend(orbit.iter().cloned());
        out.push(orbit);
    }
    out
}

fn union_of_orbits<T: Ord + Clone>(rng: &mut ChaCha8Rng, orbits: &[BTreeSet<T>]) -> BTreeSet<T> {
    let p = rng.gen_range(0.3..0.8);
    orbits.iter().filter(|_| rng.gen_bool(p)).flatten().cloned().collect()
}

/// Checks (a)–(d) of a symmetrized set `sym` against the raw set `raw`.
/// `free(s)` tells whether `G ∖ s` has no copy of the template.
#[allow(clippy::too_many_arguments)]
fn check_symmetrized<T: Ord + Clone + std::fmt::Debug>(
    what: &str,
    edges: &BTreeSet<T>,
    raw: &BTreeSet<T>,
    sym: &BTreeSet<T>,
    m: usize,
    step: impl Fn(&T) -> T,
    free: impl Fn(&BTreeSet<T>) -> bool,
    failures: &mut Vec<String>,
) {
    if !free(raw) {
        failures.push(format!("{what}: greedy output is not a removal set"));
    }
    if !sym.iter().all(|x| sym.contains(&step(x))) {
        failures.push(format!("{what}: (a) not invariant"));
    }
    if sym.len() > m * raw.len() {
        failures.push(format!("{what}: (b) {} > {}·{}", sym.len(), m, raw.len()));
    }
    if !free(sym) {
        failures.push(format!("{what}: (c) remainder still contains the template"));
    }
    let rest: BTreeSet<T> = edges.difference(sym).cloned().collect();
    if !rest.iter().all(|x| rest.contains(&step(x))) {
        failures.push(format!("{what}: (d) generator is not an automorphism of the remainder"));
    }
}

fn symmetrization_suite(rng: &mut ChaCha8Rng) -> Verdict {
    let mut failures = Vec::new();
    let mut removed = (0, 0);
    for round in 0..100 {
        match round % 3 {
            0 | 2 => {
                let (template, n) = if round % 3 == 0 {
                    (triangle(), rng.gen_range(3..=10))
                } else {
                    (four_point(), rng.gen_range(4..=7))
                };
                let k = template.k;
                let shift = rng.gen_range(0..n);
                let step = move |x: &Tuple| x.iter().map(|&v| (v + shift) % n).collect::<Tuple>();
                let orbits = cyclic_orbits(&distinct_tuples(n, k), step);
                let g = Plain { n, k, edges: union_of_orbits(rng, &orbits) };
                let (lf, lg) = (to_lib(&template), to_lib(&g));
                let perm = Permutation::new((0..n).map(|v| ((v + shift) % n) as Vertex).collect()).unwrap();
                let action = GroupAction::new(vec![perm], n, k).unwrap();
                let raw = removal::greedy_removal(&lf, &lg, None).unwrap();
                let sym = removal::symmetrize(&lg, lf.edge_count(), &raw.removal_set, &action).unwrap();
                let raw: BTreeSet<Tuple> = raw.removal_set.iter().map(|e| from_lib_tuple(e)).collect();
                let sym: BTreeSet<Tuple> = sym.iter().map(|e| from_lib_tuple(e)).collect();
                removed.0 += raw.len();
                removed.1 += sym.len();
                let free = |s: &BTreeSet<Tuple>| {
                    let rest = Plain { n, k, edges: g.edges.difference(s).cloned().collect() };
                    homs_plain(&template, &rest) == 0
                };
                let name = format!("round {round} (n={n}, shift {shift})");
                check_symmetrized(&name, &g.edges, &raw, &sym, template.edges.len(), step, free, &mut failures);
            }
            _ => {
                let template = partite_triangle();
                let n = rng.gen_range(2..=3);
                let shifts: Vec<usize> = (0..3).map(|_| rng.gen_range(0..n)).collect();
                let sh = shifts.clone();
                let step = move |(ty, x): &Typed| -> Typed {
                    (ty.clone(), ty.iter().zip(x).map(|(&p, &v)| (v + sh[p]) % n).collect())
                };
                let orbits = cyclic_orbits(&typed_universe(&[n; 3], 2), &step);
                let g = PlainPartite { sizes: vec![n; 3], k: 2, edges: union_of_orbits(rng, &orbits) };
                let (lf, lg) = (to_lib_partite(&template), to_lib_partite(&g));
                let gen = PartitePermutation::new(
                    shifts
                        .iter()
                        .map(|&s| Permutation::new((0..n).map(|v| ((v + s) % n) as Vertex).collect()).unwrap())
                        .collect(),
                );
                let action = GroupAction::for_partite(&lg, &[gen]).unwrap();
                let raw = removal::greedy_removal(&lf, &lg, None).unwrap();
                let sym = removal::symmetrize(&lg, lf.edge_count(), &raw.removal_set, &action).unwrap();
                let raw: BTreeSet<Typed> = raw.removal_set.iter().map(from_lib_typed).collect();
                let sym: BTreeSet<Typed> = sym.iter().map(from_lib_typed).collect();
                removed.0 += raw.len();
                removed.1 += sym.len();
                let free = |s: &BTreeSet<Typed>| {
                    let rest =
                        PlainPartite { sizes: g.sizes.clone(), k: 2, edges: g.edges.difference(s).cloned().collect() };
                    homs_partite(&template, &rest) == 0
                };
                let name = format!("round {round} (partite n={n}, shifts {shifts:?})");
                check_symmetrized(&name, &g.edges, &raw, &sym, 3, step, free, &mut failures);
            }
        }
    }
    Verdict {
        failures,
        summary: format!("100 instances, {} raw and {} symmetrized tuples in total", removed.0, removed.1),
    }
}

/// The symmetric group on three letters as composition of permutations.
fn s3_table() -> (Vec<[usize; 3]>, FiniteGroup) {
    let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [1, 2, 0], [2, 0, 1], [0, 2, 1], [2, 1, 0], [1, 0, 2]];
    let name = |p: &[usize; 3]| Label::from(format!("{}{}{}", p[0], p[1], p[2]));
    let table = perms.iter().map(|a| perms.iter().map(|b| name(&[a[b[0]], a[b[1]], a[b[2]]])).collect()).collect();
    let g = FiniteGroup::from_table(perms.iter().map(name).collect(), table, true).unwrap();
    (perms, g)
}

fn triangle_identity(rng: &mut ChaCha8Rng) -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut run = |group: &FiniteGroup,
                   set: BTreeSet<usize>,
                   mul: &dyn Fn(usize, usize) -> usize,
                   inv: &dyn Fn(usize) -> usize| {
        let order = group.order();
        let schur = set.iter().map(|&a| set.iter().filter(|&&b| set.contains(&mul(a, b))).count() as u64).sum::<u64>();
        let in_s = |x: usize, y: usize| set.contains(&mul(x, inv(y)));
        let mut homs = 0u64;
        for_each_map(&[order; 3], |m| {
            if in_s(m[0], m[1]) && in_s(m[0], m[2]) && in_s(m[1], m[2]) {
                homs += 1;
            }
        });
        let lib_set: BTreeSet<Element> = set.iter().map(|&i| Element(i)).collect();
        let id = cayley::verify_triangle_identity(group, &lib_set, None).unwrap();
        checked += 1;
        if !(id.holds
            && id.solution_count == schur
            && id.hom_count.to_string() == homs.to_string()
            && homs == order as u64 * schur)
        {
            failures.push(format!(
                "{group} {set:?}: homs {} vs {homs}, solutions {} vs {schur}",
                id.hom_count, id.solution_count
            ));
        }
    };
    for n in 1..=12usize {
        let g = z(n);
        // Element(i) of Z_n is the residue i
        assert!((0..n).all(|r| el(&g, r) == Element(r)));
        let mul = move |a: usize, b: usize| (a + b) % n;
        let inv = move |a: usize| (n - a) % n;
        if n <= 8 {
            for mask in 0u32..1 << n {
                if mask & 1 == 0 {
                    run(&g, (0..n).filter(|&i| mask & 1 << i != 0).collect(), &mul, &inv);
                }
            }
        } else {
            for _ in 0..100 {
                let s: BTreeSet<usize> = random_subset(rng, n, 0.5).into_iter().filter(|&x| x != 0).collect();
                run(&g, s, &mul, &inv);
            }
        }
    }
    let (perms, s3) = s3_table();
    let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
    let mul = |a: usize, b: usize| {
        let (p, q) = (perms[a], perms[b]);
        idx([p[q[0]], p[q[1]], p[q[2]]])
    };
    let inv = |a: usize| {
        let p = perms[a];
        let mut r = [0; 3];
        for i in 0..3 {
            r[p[i]] = i;
        }
        idx(r)
    };
    for mask in 0u32..1 << 6 {
        if mask & 1 == 0 {
            run(&s3, (0..6).filter(|&i| mask & 1 << i != 0).collect(), &mul, &inv);
        }
    }
    for _ in 0..100 {
        let s: BTreeSet<usize> = random_subset(rng, 6, 0.5).into_iter().filter(|&x| x != 0).collect();
        run(&s3, s, &mul, &inv);
    }
    Verdict { failures, summary: format!("{checked} connection sets") }
}

fn ap_correspondence(rng: &mut ChaCha8Rng) -> Verdict {
    let mut failures = Vec::new();
    let mut checked = 0;
    let mut run = |n: usize, sets: Vec<BTreeSet<usize>>| {
        let t = sets.len();
        let g = z(n);
        let lib: Vec<BTreeSet<Element>> = sets.iter().map(|s| lib_set(&g, s)).collect();
        let r = cayley_hyper::verify_ap_correspondence(&g, t, &lib, None).unwrap();
        let (ap, homs) = (aps(n, &sets), ap_homs(n, &sets));
        checked += 1;
        if !(r.consistent
            && r.ap_count == ap
            && r.hom_count.to_string() == homs.to_string()
            && homs == (n as u64).pow(t as u32 - 2) * ap)
        {
            failures.push(format!("Z_{n} {sets:?}: homs {} vs {homs}, aps {} vs {ap}", r.hom_count, r.ap_count));
        }
    };
    for n in 1..=4usize {
        let all: Vec<BTreeSet<usize>> =
            (0u32..1 << n).map(|mask| (0..n).filter(|&i| mask & 1 << i != 0).collect()).collect();
        for a in &all {
            for b in &all {
                for c in &all {
                    run(n, vec![a.clone(), b.clone(), c.clone()]);
                }
            }
        }
    }
    for (t, max_n) in [(3, 7), (4, 5)] {
        for n in 1..=max_n {
            for _ in 0..50 {
                let p = rng.gen_range(0.3..0.9);
                run(n, (0..t).map(|_| random_subset(rng, n, p)).collect());
            }
        }
    }
    Verdict { failures, summary: format!("{checked} set lists") }
}

/// Runs the progression pipeline and checks it against the oracles. Returns
/// the total shrink.
fn checked_pipeline(n: usize, sets: &[BTreeSet<usize>], strategy: Strategy, failures: &mut Vec<String>) -> usize {
    let t = sets.len();
    let g = z(n);
    let lib: Vec<BTreeSet<Element>> = sets.iter().map(|s| lib_set(&g, s)).collect();
    let what = format!("Z_{n} {sets:?} ({strategy})");
    let d = match cayley_hyper::diagonal_pipeline(&g, t, lib.clone(), strategy, None) {
        Ok(d) => d,
        Err(e) => {
            failures.push(format!("{what}: {e}"));
            return 0;
        }
    };
    let o = &d.outcome;
    let shrink: Vec<BTreeSet<usize>> = o.shrink.iter().map(|s| residues(&g, s)).collect();
    let remaining: Vec<BTreeSet<usize>> =
        sets.iter().zip(&shrink).map(|(s, r)| s.difference(r).copied().collect()).collect();
    if shrink.iter().zip(sets).any(|(r, s)| !r.is_subset(s)) {
        failures.push(format!("{what}: shrink set outside its level set"));
    }
    if aps(n, &remaining) != 0 || d.remaining_aps != 0 {
        failures.push(format!("{what}: progressions survive in {remaining:?}"));
    }
    // the instance on the shrunken sets must equal the instance minus S′
    let inst = cayley_hyper::ap_instance(&g, t, lib, None).unwrap();
    let to_residue = |e: &TypedEdge| -> Typed {
        let tuple =
            e.ty.iter()
                .zip(&e.tuple)
                .map(|(&p, &v)| match &inst.graph().parts()[p][v as usize] {
                    Label::Int(r) => *r as usize,
                    l => panic!("unexpected label {l}"),
                })
                .collect();
        (e.ty.clone(), tuple)
    };
    let all: BTreeSet<Typed> = inst.graph().edges().iter().map(to_residue).collect();
    if all != ap_edges(n, sets) {
        failures.push(format!("{what}: instance edges differ from the level-set definition"));
    }
    let removed: BTreeSet<Typed> = o.symmetrized.certificate.removal_set.iter().map(to_residue).collect();
    let subtracted: BTreeSet<Typed> = all.difference(&removed).cloned().collect();
    if subtracted != ap_edges(n, &remaining) || !o.reconstruction_holds {
        failures.push(format!("{what}: reconstruction fails"));
    }
    let total: usize = shrink.iter().map(BTreeSet::len).sum();
    if total * n.pow(t as u32 - 2) != removed.len() || removed.len() > t * o.raw.removed_count {
        failures.push(format!("{what}: size accounting fails"));
    }
    total
}

fn pipeline_soundness(rng: &mut ChaCha8Rng) -> Verdict {
    let mut failures = Vec::new();
    let mut shrunk = 0;
    for round in 0..50 {
        let n = rng.gen_range(1..=7);
        let p = rng.gen_range(0.3..0.9);
        let sets: Vec<BTreeSet<usize>> = (0..3).map(|_| random_subset(rng, n, p)).collect();
        let strategy = if round % 2 == 0 { Strategy::Exact } else { Strategy::Greedy };
        shrunk += checked_pipeline(n, &sets, strategy, &mut failures);
    }
    Verdict { failures, summary: format!("50 instances, {shrunk} elements removed in total") }
}

fn trivial_floor() -> Verdict {
    let mut failures = Vec::new();
    let mut totals = Vec::new();
    for n in 1..=6 {
        let full: BTreeSet<usize> = (0..n).collect();
        for strategy in [Strategy::Exact, Strategy::Greedy] {
            let total = checked_pipeline(n, &vec![full.clone(); 3], strategy, &mut failures);
            if total < n {
                failures.push(format!("Z_{n} ({strategy}): total shrink {total} < {n}"));
            }
            totals.push(total);
        }
    }
    Verdict { failures, summary: format!("n = 1..6, exact and greedy, total shrinks {totals:?}") }
}

fn exact_optimality(rng: &mut ChaCha8Rng) -> Verdict {
    let mut failures = Vec::new();
    let path = Plain { n: 3, k: 2, edges: [vec![0, 1], vec![1, 2]].into_iter().collect() };
    let star3 = Plain { n: 4, k: 3, edges: [vec![0, 1, 2], vec![0, 1, 3]].into_iter().collect() };
    let templates = [triangle(), path, star3];
    let mut found = 0;
    let mut max_copies = 0;
    while found < 30 {
        let f = &templates[found % 3];
        let g = random_plain(rng, 4..=6, f.k, 0.2..0.6);
        let copies = copies_plain(f, &g);
        if copies.is_empty() || copies.len() > 15 {
            continue;
        }
        found += 1;
        max_copies = max_copies.max(copies.len());
        let expected = min_hitting_exhaustive(&copies);
        let cert = removal::min_removal_exact(&to_lib(f), &to_lib(&g), ExactOptions::default()).unwrap();
        let set: BTreeSet<Tuple> = cert.removal_set.iter().map(|e| from_lib_tuple(e)).collect();
        if cert.removed_count != expected || !copies.iter().all(|c| !c.is_disjoint(&set)) {
            failures.push(format!("instance {found}: {} vs {expected}", cert.removed_count));
        }
    }
    Verdict { failures, summary: format!("30 instances, up to {max_copies} copies") }
}

struct Cli {
    dir: PathBuf,
}

impl Cli {
    fn new() -> Self {
        let dir = std::env::temp_dir().join(format!("symrem-acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Cli { dir }
    }

    fn file(&self, name: &str, text: &str) -> String {
        let p = self.dir.join(name);
        std::fs::write(&p, text).unwrap();
        p.display().to_string()
    }

    fn run(&self, args: &[&str]) -> Result<Value, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_symrem"))
            .arg("--format")
            .arg("structured")
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
        }
        let v: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
        Ok(v["result"].clone())
    }
}

fn worked_numbers() -> Verdict {
    let mut failures = Vec::new();
    let mut expect = |what: &str, got: String, want: String| {
        if got != want {
            failures.push(format!("{what}: got {got}, expected {want}"));
        }
    };
    // oracle values
    let schur = |n: usize, s: &[usize]| {
        let s: BTreeSet<usize> = s.iter().copied().collect();
        s.iter().map(|&a| s.iter().filter(|&&b| s.contains(&((a + b) % n))).count()).sum::<usize>()
    };
    let cayley_homs = |n: usize, s: &[usize]| {
        let g = Plain {
            n,
            k: 2,
            edges: distinct_tuples(n, 2).into_iter().filter(|e| s.contains(&((e[0] + n - e[1]) % n))).collect(),
        };
        homs_plain(&triangle(), &g)
    };
    let s01: Vec<BTreeSet<usize>> = vec![[0, 1].into_iter().collect(); 3];
    let oracle = [
        ("Z_5 {1,2} solutions", schur(5, &[1, 2]).to_string(), "1"),
        ("Z_5 {1,2} homs", cayley_homs(5, &[1, 2]).to_string(), "5"),
        ("Z_6 {1,2,3} solutions", schur(6, &[1, 2, 3]).to_string(), "3"),
        ("Z_6 {1,2,3} homs", cayley_homs(6, &[1, 2, 3]).to_string(), "18"),
        ("Z_5 t=3 ap_count", aps(5, &s01).to_string(), "2"),
        ("Z_5 t=3 hom_count", ap_homs(5, &s01).to_string(), "10"),
    ];
    for (what, got, want) in &oracle {
        expect(&format!("oracle {what}"), got.clone(), want.to_string());
    }
    let o = |i: usize| oracle[i].1.clone();

    // library
    let z5 = z(5);
    let id = cayley::verify_triangle_identity(&z5, &lib_set(&z5, &[1, 2].into()), None).unwrap();
    expect("library Z_5 solutions", id.solution_count.to_string(), o(0));
    expect("library Z_5 homs", id.hom_count.to_string(), o(1));
    let z6 = z(6);
    let s123 = lib_set(&z6, &[1, 2, 3].into());
    let id = cayley::verify_triangle_identity(&z6, &s123, None).unwrap();
    expect("library Z_6 solutions", id.solution_count.to_string(), o(2));
    expect("library Z_6 homs", id.hom_count.to_string(), o(3));
    let green = cayley::green_pipeline(&z6, &s123, Strategy::Exact, None).unwrap();
    let diff_one: BTreeSet<Tuple> = (0..6).map(|b| vec![(b + 1) % 6, b]).collect();
    let sym: BTreeSet<Tuple> = green.symmetrized.certificate.removal_set.iter().map(|e| from_lib_tuple(e)).collect();
    expect("library Z_6 symmetrized removal", format!("{sym:?}"), format!("{diff_one:?}"));
    let libs01: Vec<BTreeSet<Element>> = s01.iter().map(|s| lib_set(&z5, s)).collect();
    let r = cayley_hyper::verify_ap_correspondence(&z5, 3, &libs01, None).unwrap();
    expect("library Z_5 ap_count", r.ap_count.to_string(), o(4));
    expect("library Z_5 ap homs", r.hom_count.to_string(), o(5));

    // command line
    let cli = Cli::new();
    let z5f = cli.file("z5.json", r#"{"type":"cyclic-product","moduli":[5]}"#);
    let z6f = cli.file("z6.json", r#"{"type":"cyclic-product","moduli":[6]}"#);
    let setsf = cli.file("sets.json", "[[0,1],[0,1],[0,1]]");
    let tri = cli.file("triangle.json", r#"{"kind":"directed","k":2,"vertices":[1,2,3],"edges":[[1,2],[1,3],[2,3]]}"#);
    let graphf = cli.dir.join("z6-cayley.json").display().to_string();
    let act = cli.file("translations.json", r#"{"generators":[[[0,1],[1,2],[2,3],[3,4],[4,5],[5,0]]]}"#);
    let cli_check = |args: &[&str], fields: &[(&str, String)], failures: &mut Vec<String>| match cli.run(args) {
        Ok(v) => {
            for (path, want) in fields {
                let got = v.pointer(path).map(|x| match x {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                });
                if got.as_deref() != Some(want.as_str()) {
                    failures.push(format!("cli {args:?} {path}: got {got:?}, expected {want}"));
                }
            }
        }
        Err(e) => failures.push(e),
    };
    let mut cli_failures = Vec::new();
    cli_check(
        &["cayley", "verify", "--group", &z5f, "--set", "1,2"],
        &[("/solution_count", o(0)), ("/hom_count", o(1)), ("/holds", "true".into())],
        &mut cli_failures,
    );
    cli_check(
        &["cayley", "verify", "--group", &z6f, "--set", "1,2,3"],
        &[("/solution_count", o(2)), ("/hom_count", o(3))],
        &mut cli_failures,
    );
    cli_check(
        &["cayley", "shrink", "--group", &z6f, "--set", "1,2,3"],
        &[
            ("/symmetrized/certificate/removed_count", "6".into()),
            ("/symmetrized/size_report", "6 ≤ 3·6".into()),
            ("/shrink", "[1]".into()),
            ("/remaining_solutions", "0".into()),
        ],
        &mut cli_failures,
    );
    cli_check(&["cayley", "build", "--group", &z6f, "--set", "1,2,3", "--out", &graphf], &[], &mut cli_failures);
    let want_edges = serde_json::to_string(&diff_one).unwrap();
    cli_check(
        &["remove", "--template", &tri, "--graph", &graphf, "--strategy", "exact", "--action", &act],
        &[("/symmetrized/certificate/removal_set", want_edges), ("/symmetrized/size_report", "6 ≤ 3·6".into())],
        &mut cli_failures,
    );
    cli_check(
        &["ap", "verify", "--moduli", "5", "--t", "3", "--sets", &setsf],
        &[("/ap_count", o(4)), ("/hom_count", o(5)), ("/consistent", "true".into())],
        &mut cli_failures,
    );
    failures.extend(cli_failures);
    let _ = std::fs::remove_dir_all(&cli.dir);
    Verdict { failures, summary: "Z_5 {1,2}: 1, 5; Z_6 {1,2,3}: 3, 18, 6 edges; Z_5 t=3: 2, 10".into() }
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    type Criterion<'a> = (&'a str, Option<Duration>, Box<dyn FnMut(&mut ChaCha8Rng) -> Verdict + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("hom-count oracle equivalence", Some(Duration::from_secs(60)), Box::new(hom_oracle_equivalence)),
        ("symmetrization invariants", None, Box::new(symmetrization_suite)),
        ("triangle identity on Cayley graphs", Some(Duration::from_secs(120)), Box::new(triangle_identity)),
        ("progression correspondence", Some(Duration::from_secs(300)), Box::new(ap_correspondence)),
        ("progression pipeline soundness", None, Box::new(pipeline_soundness)),
        ("trivial-progression floor", None, Box::new(|_: &mut ChaCha8Rng| trivial_floor())),
        ("exact removal optimality", Some(Duration::from_secs(60)), Box::new(exact_optimality)),
        ("worked numbers", None, Box::new(|_: &mut ChaCha8Rng| worked_numbers())),
    ];
    let mut failed = 0;
    for (i, (name, limit, mut run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut v = run(&mut rng);
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                v.failures.push(format!("took {elapsed:.1?}, limit {limit:?}"));
            }
        }
        let status = if v.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status} {name}: {} ({elapsed:.2?})", i + 1, v.summary);
        for f in v.failures.iter().take(10) {
            println!("    {f}");
        }
        if !v.failures.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
