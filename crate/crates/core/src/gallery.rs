//! Named graph constructors and fast extremality checkers for concrete
//! families, each cross-validated against the generic engine in tests.
//!
//! Checkers are pure functions of their input; nothing is cached between
//! calls, so oracle comparisons stay trustworthy.

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::extremal::{is_minimal, ClassSpec, SearchMode};
use crate::formula::rng_from_seed;
use crate::morphism::embeds;
use crate::structure::{Signature, Structure};

/// Largest part size of the Henson defect scan by default.
pub const DEFAULT_HENSON_CAP: usize = 4;

/// A pair (H, K) with K inside H that no outside vertex completes: no vertex
/// adjacent to all of K and to nothing in H minus K. An empty defect list
/// within the scanned cap is necessary for extending every such pair, never
/// sufficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HensonDefect {
    pub h: Vec<usize>,
    pub k: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Deg2Kind {
    NotMaximal,
    Maximal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Deg2Tail {
    Empty,
    K1,
    K2,
}

/// Shape of a maximal degree-two graph: disjoint cycles plus at most one
/// short tail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deg2Decomposition {
    pub cycles: Vec<usize>,
    pub tail: Deg2Tail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deg2Classification {
    pub kind: Deg2Kind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Deg2Decomposition>,
}

fn graph_from_edges(domain: usize, edges: &[(usize, usize)]) -> Structure {
    let mut pairs = Vec::with_capacity(edges.len() * 2);
    for &(x, y) in edges {
        pairs.push((x, y));
        pairs.push((y, x));
    }
    Structure::from_binary_pairs(domain, &pairs).expect("edge list in range")
}

/// The cycle on k vertices, k at least 3.
pub fn cycle(k: usize) -> Structure {
    assert!(k >= 3, "a cycle needs at least 3 vertices");
    let edges: Vec<(usize, usize)> = (0..k).map(|i| (i, (i + 1) % k)).collect();
    graph_from_edges(k, &edges)
}

/// The path on k vertices.
pub fn path(k: usize) -> Structure {
    assert!(k >= 1, "a path needs at least 1 vertex");
    let edges: Vec<(usize, usize)> = (1..k).map(|i| (i - 1, i)).collect();
    graph_from_edges(k, &edges)
}

/// The complete graph on k vertices.
pub fn complete(k: usize) -> Structure {
    assert!(k >= 1, "a complete graph needs at least 1 vertex");
    let edges: Vec<(usize, usize)> = (0..k).tuple_combinations().collect();
    graph_from_edges(k, &edges)
}

/// The edgeless graph on k vertices.
pub fn empty_graph(k: usize) -> Structure {
    assert!(k >= 1, "a graph needs at least 1 vertex");
    Structure::empty(Signature::binary(), k).expect("non-empty domain")
}

/// The complete multipartite graph with the given part sizes.
pub fn complete_multipartite(sizes: &[usize]) -> Structure {
    assert!(!sizes.is_empty(), "need at least one part");
    blowup(&complete(sizes.len()), sizes).expect("sizes match the part count")
}

/// A tournament on k vertices: exactly one direction per pair. Without a
/// seed the orientation follows the vertex order; with one, each pair is
/// flipped by a seeded coin.
pub fn tournament(k: usize, seed: Option<u64>) -> Structure {
    assert!(k >= 1, "a tournament needs at least 1 vertex");
    let mut rng = seed.map(rng_from_seed);
    let mut pairs = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let forward = match &mut rng {
                None => true,
                Some(rng) => rng.gen_bool(0.5),
            };
            pairs.push(if forward { (i, j) } else { (j, i) });
        }
    }
    Structure::from_binary_pairs(k, &pairs).expect("pairs in range")
}

/// Replaces each vertex x of a graph by an independent cloud of `sizes[x]`
/// vertices, joining clouds completely exactly when their originals are
/// adjacent.
pub fn blowup(g: &Structure, sizes: &[usize]) -> Result<Structure> {
    if !g.is_graph() {
        return Err(Error::NotAGraph);
    }
    if sizes.len() != g.domain() {
        return Err(Error::SizesMismatch { expected: g.domain(), got: sizes.len() });
    }
    if sizes.iter().any(|&s| s == 0) {
        return Err(Error::Precondition("blowup sizes must be positive".into()));
    }
    let mut start = Vec::with_capacity(sizes.len());
    let mut total = 0usize;
    for &s in sizes {
        start.push(total);
        total += s;
    }
    let mut edges = Vec::new();
    for x in 0..g.domain() {
        for y in x + 1..g.domain() {
            if g.contains_tuple(0, &[x, y]) {
                for u in start[x]..start[x] + sizes[x] {
                    for v in start[y]..start[y] + sizes[y] {
                        edges.push((u, v));
                    }
                }
            }
        }
    }
    Ok(graph_from_edges(total, &edges))
}

/// Disjoint union, with the second structure's vertices shifted up.
pub fn disjoint_union(a: &Structure, b: &Structure) -> Result<Structure> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch);
    }
    let shift = a.domain();
    let domain = shift + b.domain();
    let mut relations = Vec::with_capacity(a.signature().len());
    for (rel, &arity) in a.signature().arities().iter().enumerate() {
        let mut tuples: Vec<Vec<usize>> = a.relation_tuples(rel);
        for t in b.relation_tuples(rel) {
            tuples.push(t.into_iter().map(|x| x + shift).collect());
        }
        let _ = arity;
        relations.push(tuples);
    }
    Structure::new(a.signature().clone(), domain, relations)
}

fn unordered_edges(g: &Structure) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for t in g.relation_tuples(0) {
        if t[0] < t[1] {
            out.push((t[0], t[1]));
        }
    }
    Ok(out)
}

fn has_clique(g: &Structure, verts: &[usize]) -> bool {
    verts
        .iter()
        .tuple_combinations()
        .all(|(&x, &y)| g.contains_tuple(0, &[x, y]))
}

fn contains_kn(g: &Structure, n: usize) -> Result<bool> {
    if n > g.domain() {
        return Ok(false);
    }
    embeds(&complete(n), g)
}

/// Maximality test for K_n-free graphs by the witness criterion: every
/// non-edge {x, y} lies in some n-set whose only missing edge is {x, y}.
/// On fewer than n vertices no such set exists, so only complete graphs
/// pass, which matches genuine maximality there.
pub fn is_maximal_knfree(g: &Structure, n: usize) -> Result<bool> {
    if !g.is_graph() {
        return Err(Error::NotAGraph);
    }
    if n < 3 {
        return Err(Error::Precondition("clique size must be at least 3".into()));
    }
    if contains_kn(g, n)? {
        return Err(Error::NotKnFree(n));
    }
    let domain = g.domain();
    for x in 0..domain {
        for y in x + 1..domain {
            if g.contains_tuple(0, &[x, y]) {
                continue;
            }
            let witness = (0..domain)
                .filter(|&v| v != x && v != y)
                .combinations(n.saturating_sub(2))
                .any(|rest| {
                    let mut set = vec![x, y];
                    set.extend(rest);
                    set.iter()
                        .tuple_combinations()
                        .all(|(&a, &b)| (a, b) == (x, y) || g.contains_tuple(0, &[a, b]))
                });
            if !witness {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// In a maximal K_n-free graph on at least n-1 vertices, every vertex lies
/// in a complete subgraph on n-1 vertices.
pub fn every_vertex_in_kn1(g: &Structure, n: usize) -> Result<bool> {
    if g.domain() + 1 < n {
        return Err(Error::Precondition(format!(
            "need at least {} vertices",
            n - 1
        )));
    }
    if !is_maximal_knfree(g, n)? {
        return Err(Error::Precondition("graph is not maximal".into()));
    }
    for x in 0..g.domain() {
        let found = (0..g.domain())
            .filter(|&v| v != x)
            .combinations(n - 2)
            .any(|rest| {
                let mut set = vec![x];
                set.extend(rest);
                has_clique(g, &set)
            });
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks that maximality among K_n-free graphs and minimality of the
/// complement among graphs without an independent n-set decide alike,
/// using the generic engine for the complement side.
pub fn knfree_duality(g: &Structure, n: usize) -> Result<bool> {
    if !g.is_graph() {
        return Err(Error::NotAGraph);
    }
    let direct = if contains_kn(g, n)? {
        false
    } else {
        is_maximal_knfree(g, n)?
    };
    let en = empty_graph(n).to_json_string();
    let spec = ClassSpec::from_json_str(&format!(
        "{{\"builtins\":[\"irreflexive\",\"symmetric\"],\"forbidden\":[{en}]}}"
    ))?;
    let gc = g.graph_complement()?;
    let dual = if !spec.member(&gc)? {
        false
    } else {
        is_minimal(&gc, &spec, SearchMode::Exact, None)?.certified
    };
    Ok(direct == dual)
}

fn decoded_relations(s: &Structure) -> Vec<Vec<Vec<usize>>> {
    (0..s.signature().len()).map(|rel| s.relation_tuples(rel)).collect()
}

fn tuples_within<'a>(
    relations: &'a [Vec<Vec<usize>>],
    inside: impl Fn(usize) -> bool + Copy + 'a,
) -> impl Iterator<Item = (usize, &'a Vec<usize>)> {
    relations.iter().enumerate().flat_map(move |(rel, tuples)| {
        tuples
            .iter()
            .filter(move |t| t.iter().all(|&x| inside(x)))
            .map(move |t| (rel, t))
    })
}

/// Minimality test for structures where every m-subset carries a tuple:
/// each tuple must own an m-subset on which it is the only tuple, so
/// removing it empties that subset.
pub fn min_omit_empty_check(s: &Structure, m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::Precondition("subset size must be positive".into()));
    }
    let pattern = Structure::empty(s.signature().clone(), m)?;
    if embeds(&pattern, s)? {
        return Err(Error::Precondition(
            "some m-subset carries no tuple at all".into(),
        ));
    }
    let relations = decoded_relations(s);
    for (_, tuple) in tuples_within(&relations, |_| true) {
        let support: Vec<usize> = tuple.iter().copied().unique().sorted().collect();
        if support.len() > m {
            return Ok(false);
        }
        let witness = (0..s.domain())
            .filter(|v| !support.contains(v))
            .combinations(m - support.len())
            .any(|rest| {
                let mut set = support.clone();
                set.extend(rest);
                let inside = |x: usize| set.contains(&x);
                tuples_within(&relations, inside).count() == 1
            });
        if !witness {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Dual of [`min_omit_empty_check`] for structures where no m-subset is
/// completely full: each absent tuple must own an m-subset on which it is
/// the only gap.
pub fn max_omit_full_check(s: &Structure, m: usize) -> Result<bool> {
    if m == 0 {
        return Err(Error::Precondition("subset size must be positive".into()));
    }
    let pattern = Structure::full(s.signature().clone(), m)?;
    if embeds(&pattern, s)? {
        return Err(Error::Precondition("some m-subset is completely full".into()));
    }
    let complement = s.complement()?;
    let relations = decoded_relations(&complement);
    for (_, gap) in tuples_within(&relations, |_| true) {
        let support: Vec<usize> = gap.iter().copied().unique().sorted().collect();
        if support.len() > m {
            return Ok(false);
        }
        let witness = (0..s.domain())
            .filter(|v| !support.contains(v))
            .combinations(m - support.len())
            .any(|rest| {
                let mut set = support.clone();
                set.extend(rest);
                let inside = |x: usize| set.contains(&x);
                tuples_within(&relations, inside).count() == 1
            });
        if !witness {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decomposition of a minimal member: loops on a proper part of the domain,
/// and on the rest an orientation whose symmetrization is the complement of
/// a maximal K_m-free graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinBinaryDecomposition {
    pub domain: usize,
    pub loops: Vec<usize>,
    pub orientation: Structure,
}

impl MinBinaryDecomposition {
    /// Rebuilds the structure the decomposition came from.
    pub fn reconstruct(&self) -> Structure {
        let mut s = self.orientation.clone();
        for &x in &self.loops {
            s.insert_code(0, (x * self.domain + x) as u64);
        }
        s
    }
}

/// Splits a minimal structure (every m-subset carries a tuple, no tuple
/// removable) into its loop part and its orientation part, verifying the
/// characterization along the way.
pub fn decompose_min_binary(s: &Structure, m: usize) -> Result<MinBinaryDecomposition> {
    if s.signature() != &Signature::binary() {
        return Err(Error::Precondition("need a single binary relation".into()));
    }
    if m < 2 {
        return Err(Error::Precondition("subset size must be at least 2".into()));
    }
    if !min_omit_empty_check(s, m)? {
        return Err(Error::Precondition("structure is not minimal".into()));
    }
    let domain = s.domain();
    let loops: Vec<usize> = (0..domain)
        .filter(|&x| s.contains_tuple(0, &[x, x]))
        .collect();
    let rest: Vec<usize> = (0..domain).filter(|x| !loops.contains(x)).collect();
    let mut orientation = Structure::empty(Signature::binary(), domain)?;
    for t in s.relation_tuples(0) {
        if t[0] == t[1] {
            continue;
        }
        if loops.contains(&t[0]) || loops.contains(&t[1]) {
            return Err(Error::Precondition(
                "characterization violated: edge touches a loop vertex".into(),
            ));
        }
        if s.contains_tuple(0, &[t[1], t[0]]) {
            return Err(Error::Precondition(
                "characterization violated: orientation not antisymmetric".into(),
            ));
        }
        orientation.insert_code(0, (t[0] * domain + t[1]) as u64);
    }
    if rest.len() + 1 < m {
        return Err(Error::Precondition(
            "characterization violated: loop-free part too small".into(),
        ));
    }
    let restricted = orientation.induced_substructure(&rest)?.symmetric_closure();
    let gc = restricted.graph_complement()?;
    let ok = if m == 2 {
        // maximal K_2-free means edgeless, so the orientation is a tournament
        gc.total_tuples() == 0
    } else {
        is_maximal_knfree(&gc, m)?
    };
    if !ok {
        return Err(Error::Precondition(
            "characterization violated: complement not maximal".into(),
        ));
    }
    Ok(MinBinaryDecomposition { domain, loops, orientation })
}

/// All pairs (H, K) within the size cap that no outside vertex completes.
/// H runs over vertex subsets by size then lexicographic order, K over
/// subsets of H whose induced copy has no K_{n-1}.
pub fn henson_defects(g: &Structure, n: usize, cap: Option<usize>) -> Result<Vec<HensonDefect>> {
    if !g.is_graph() {
        return Err(Error::NotAGraph);
    }
    if n < 3 {
        return Err(Error::Precondition("clique size must be at least 3".into()));
    }
    if contains_kn(g, n)? {
        return Err(Error::NotKnFree(n));
    }
    let cap = cap.unwrap_or(DEFAULT_HENSON_CAP);
    let mut defects = Vec::new();
    for size in 0..=cap.min(g.domain()) {
        for h in (0..g.domain()).combinations(size) {
            for k_size in 0..=h.len() {
                for k in h.iter().copied().combinations(k_size) {
                    let clique_free = if k.len() + 1 < n {
                        true
                    } else {
                        !has_any_clique(g, &k, n - 1)
                    };
                    if !clique_free {
                        continue;
                    }
                    let completable = (0..g.domain()).filter(|v| !h.contains(v)).any(|v| {
                        k.iter().all(|&u| g.contains_tuple(0, &[v, u]))
                            && h.iter()
                                .filter(|u| !k.contains(u))
                                .all(|&u| !g.contains_tuple(0, &[v, u]))
                    });
                    if !completable {
                        defects.push(HensonDefect { h: h.clone(), k });
                    }
                }
            }
        }
    }
    Ok(defects)
}

fn has_any_clique(g: &Structure, within: &[usize], size: usize) -> bool {
    within
        .iter()
        .copied()
        .combinations(size)
        .any(|c| has_clique(g, &c))
}

/// Classifies a graph of degree at most 2: maximal exactly when its
/// components are cycles plus at most one tail that is a point or an edge.
/// Any two vertices of degree below 2 could otherwise take a joining edge.
pub fn classify_max_deg2(g: &Structure) -> Result<Deg2Classification> {
    if !g.is_graph() {
        return Err(Error::NotAGraph);
    }
    for v in 0..g.domain() {
        if g.degree(0, v)? > 2 {
            return Err(Error::DegreeBoundViolated(v));
        }
    }
    let mut seen = vec![false; g.domain()];
    let mut cycles = Vec::new();
    let mut tails = Vec::new();
    for start in 0..g.domain() {
        if seen[start] {
            continue;
        }
        let mut stack = vec![start];
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(v) = stack.pop() {
            comp.push(v);
            for u in 0..g.domain() {
                if !seen[u] && g.contains_tuple(0, &[v, u]) {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        let edge_count = comp
            .iter()
            .map(|&v| g.degree(0, v).unwrap())
            .sum::<usize>()
            / 2;
        if edge_count == comp.len() {
            cycles.push(comp.len());
        } else {
            tails.push(comp.len());
        }
    }
    cycles.sort_unstable();
    let maximal = match tails.as_slice() {
        [] => Some(Deg2Tail::Empty),
        [1] => Some(Deg2Tail::K1),
        [2] => Some(Deg2Tail::K2),
        _ => None,
    };
    Ok(match maximal {
        Some(tail) => Deg2Classification {
            kind: Deg2Kind::Maximal,
            decomposition: Some(Deg2Decomposition { cycles, tail }),
        },
        None => Deg2Classification { kind: Deg2Kind::NotMaximal, decomposition: None },
    })
}

/// Breadth-first spanning tree from vertex 0 of a connected graph.
pub fn spanning_tree(g: &Structure) -> Result<Structure> {
    if !g.is_graph() {
        return Err(Error::NotAGraph);
    }
    let mut seen = vec![false; g.domain()];
    let mut queue = std::collections::VecDeque::from([0usize]);
    seen[0] = true;
    let mut edges = Vec::new();
    while let Some(v) = queue.pop_front() {
        for u in 0..g.domain() {
            if !seen[u] && g.contains_tuple(0, &[v, u]) {
                seen[u] = true;
                edges.push((v, u));
                queue.push_back(u);
            }
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(Error::Disconnected);
    }
    Ok(graph_from_edges(g.domain(), &edges))
}

/// A connected graph is minimal connected exactly when it is a tree.
pub fn is_minimal_connected(g: &Structure) -> Result<bool> {
    if !g.is_graph() {
        return Err(Error::NotAGraph);
    }
    if !g.is_connected_rel(0)? {
        return Err(Error::Disconnected);
    }
    Ok(unordered_edges(g)?.len() == g.domain() - 1)
}

/// Does every subset of each listed size carry between k and l edges?
/// Edges are counted unordered here; the class-spec route counts ordered
/// tuples, exactly twice as many on graphs.
pub fn local_bounds_member(g: &Structure, sizes: &[usize], k: u64, l: u64) -> Result<bool> {
    if !g.is_graph() {
        return Err(Error::NotAGraph);
    }
    if k > l {
        return Err(Error::MalformedBounds(format!("need k <= l, got ({k}, {l})")));
    }
    let edges = unordered_edges(g)?;
    for &m in sizes {
        if m == 0 {
            return Err(Error::MalformedBounds("subset size 0".into()));
        }
        if m > g.domain() {
            continue;
        }
        for set in (0..g.domain()).combinations(m) {
            let count = edges
                .iter()
                .filter(|(x, y)| set.contains(x) && set.contains(y))
                .count() as u64;
            if count < k || count > l {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
