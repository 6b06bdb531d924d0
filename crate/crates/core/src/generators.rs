//! Instance and hypergraph generators: the reduction gadgets, the star
//! family, and seeded random inputs.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`, so a seed
//! reproduces the same output on every platform.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::{Decomposition, DecompositionKind, Node};
use crate::engine::{QueryInstance, Structure};
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, Hypergraph, SHypergraph, VertexSet};
use crate::query::QueryBuilder;
use crate::scalar::Weight;

/// Loopless undirected graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    n: usize,
    /// Normalised as `(min, max)`.
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
            }
            if u.max(v) >= n {
                return Err(Error::InvalidInput(format!("edge {u} {v} outside {n} vertices")));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(SimpleGraph { n, edges: set })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        SimpleGraph { n, edges }
    }

    pub fn empty(n: usize) -> Self {
        SimpleGraph { n, edges: BTreeSet::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Number of `k`-vertex cliques, by enumerating vertex subsets.
    pub fn count_cliques(&self, k: usize) -> u64 {
        let mut count = 0;
        for_each_subset(self.n, k, &mut |s| {
            if s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| self.has_edge(u, v))) {
                count += 1;
            }
        });
        count
    }

    /// Whether some `k` vertices are pairwise non-adjacent.
    pub fn has_independent_set(&self, k: usize) -> bool {
        let mut found = false;
        for_each_subset(self.n, k, &mut |s| {
            found |= s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| !self.has_edge(u, v)));
        });
        found
    }
}

fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, f);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

pub fn gen_random_graph(n: usize, edge_probability: f64, seed: u64) -> SimpleGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(edge_probability))
        .collect::<Vec<_>>();
    SimpleGraph::new(n, edges).expect("generated pairs are valid")
}

fn gadget_value(v: usize, w: usize, i: usize, j: usize) -> String {
    format!("({v},{w},{i},{j})")
}

/// The star query `ans(v1..vk) :- P1(z,v1), ..., Pk(z,vk)` whose answers
/// are exactly the vertex tuples of `g` that are not `k`-cliques.
///
/// `z` ranges over `(v,w,i,j)` gadgets naming a missing edge (or a
/// repeated vertex, `v = w`) between positions `i` and `j`; every other
/// relation accepts such a gadget with any vertex.
///
/// # Panics
/// If `k == 0`.
pub fn gen_clique_star_instance(g: &SimpleGraph, k: usize) -> QueryInstance {
    assert!(k >= 1, "clique size must be positive");
    let n = g.n();
    let leaves: Vec<String> = (1..=k).map(|i| format!("v{i}")).collect();
    let mut builder = QueryBuilder::new("ans");
    for (i, leaf) in leaves.iter().enumerate() {
        builder.atom(&format!("P{}", i + 1), ["z", leaf.as_str()]);
    }
    builder.free(leaves.iter().map(String::as_str)).expect("leaf names are distinct");
    let query = builder.finish();

    let mut s = Structure::new();
    let vertex: Vec<u32> = (0..n).map(|v| s.intern(&v.to_string())).collect();
    for i in 1..=k {
        let predicate = format!("P{i}");
        s.declare(&predicate, 2).expect("fresh predicate");
        for v in 0..n {
            for w in 0..n {
                if v != w && g.has_edge(v, w) {
                    continue;
                }
                for j in (1..=k).filter(|&j| j != i) {
                    let a = s.intern(&gadget_value(v, w, i, j));
                    s.add_row(&predicate, vec![a, vertex[v]]).expect("arity two");
                    let b = s.intern(&gadget_value(w, v, j, i));
                    s.add_row(&predicate, vec![b, vertex[v]]).expect("arity two");
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for a in (1..=k).filter(|&a| a != i) {
                    for b in (1..=k).filter(|&b| b != i) {
                        let z = s.intern(&gadget_value(x, y, a, b));
                        for c in 0..n {
                            s.add_row(&predicate, vec![z, vertex[c]]).expect("arity two");
                        }
                    }
                }
            }
        }
    }
    QueryInstance::new(query, s).expect("generated instance is consistent")
}

/// The hypergraph with vertices `v_i` (`v` in `g`, `i ∈ [k]`), edges
/// `V_i = {v_i}`, `H_v = {v_1..v_k}` and `{v_i, u_j}` for every edge `uv`,
/// together with its one-node decomposition guarded by `V_1..V_k`.
///
/// Edge ids: `V_i` is `i-1`, `H_v` is `k+v`, the pair edges follow in
/// sorted order.
///
/// # Panics
/// If `k == 0`.
pub fn gen_is_hardness_hypergraph<W: Weight>(g: &SimpleGraph, k: usize) -> (Hypergraph, Decomposition<W>) {
    assert!(k >= 1, "independent set size must be positive");
    let n = g.n();
    let id = |v: usize, i: usize| v * k + i;
    let names: Vec<String> = (0..n).flat_map(|v| (1..=k).map(move |i| format!("v{v}_{i}"))).collect();
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for i in 0..k {
        edges.push((0..n).map(|v| id(v, i)).collect());
    }
    for v in 0..n {
        edges.push((0..k).map(|i| id(v, i)).collect());
    }
    let mut pairs = BTreeSet::new();
    for &(u, v) in g.edges() {
        for i in 0..k {
            for j in 0..k {
                let (a, b) = (id(v, i), id(u, j));
                pairs.insert((a.min(b), a.max(b)));
            }
        }
    }
    edges.extend(pairs.into_iter().map(|(a, b)| vec![a, b]));
    let h = Hypergraph::new(names, edges).expect("ids are in range");

    let node = Node::new(0, None, (0..k).collect(), h.vertices().clone());
    (h, Decomposition::new(DecompositionKind::Ghd, vec![node]))
}

/// The star with centre `z`, leaves `y1..yn` and `S` = the leaves.
pub fn gen_g_star(n: usize) -> SHypergraph {
    let mut names = vec!["z".to_string()];
    names.extend((1..=n).map(|i| format!("y{i}")));
    let edges = (1..=n).map(|i| vec![0, i]).collect();
    let h = Hypergraph::new(names, edges).expect("ids are in range");
    let s = (1..=n).collect();
    SHypergraph::new(h, s).expect("leaves are vertices")
}

/// Adds one fresh vertex `x` to every edge and sets `S` to the original
/// vertices, so that the S-star size equals the maximum independent set of
/// `h`. Every vertex of `h` must lie in an edge.
pub fn gen_obs_equivalent(h: &Hypergraph) -> Result<SHypergraph> {
    if let Some(&v) = h.isolated_vertices().iter().next() {
        return Err(Error::InvalidInput(format!("vertex `{}` lies in no edge", h.name(v))));
    }
    let mut names: Vec<String> = h.names().as_ref().clone();
    let mut fresh = "x".to_string();
    while names.contains(&fresh) {
        fresh.push('_');
    }
    let x = names.len();
    names.push(fresh);
    let edges = h
        .edges()
        .iter()
        .map(|e| {
            let mut vertices = e.vertices.clone();
            vertices.insert(x);
            Edge { id: e.id, vertices }
        })
        .collect();
    let mut vertices = h.vertices().clone();
    vertices.insert(x);
    let augmented = Hypergraph::from_parts(Arc::new(names), vertices, edges);
    SHypergraph::new(augmented, h.vertices().clone())
}

#[derive(Clone, Debug)]
pub struct RandomInstanceParams {
    pub vars: usize,
    pub atoms: usize,
    pub max_arity: usize,
    pub domain: usize,
    /// Chance that a possible tuple is present in a relation.
    pub density: f64,
    /// Chance that a variable is free.
    pub free_probability: f64,
    pub seed: u64,
}

impl Default for RandomInstanceParams {
    fn default() -> Self {
        RandomInstanceParams { vars: 6, atoms: 4, max_arity: 3, domain: 3, density: 0.5, free_probability: 0.5, seed: 0 }
    }
}

/// A random query instance. Every variable is placed in some atom (which
/// may push an atom past `max_arity` when `vars` exceeds the total
/// arity); about a quarter of the atoms reuse an earlier predicate of the
/// same arity.
pub fn gen_random_instance(params: &RandomInstanceParams) -> QueryInstance {
    assert!(params.vars >= 1 && params.atoms >= 1 && params.max_arity >= 1 && params.domain >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let names: Vec<String> = (0..params.vars).map(|i| format!("x{i}")).collect();

    let mut args: Vec<Vec<usize>> = (0..params.atoms)
        .map(|_| {
            let arity = rng.gen_range(1..=params.max_arity);
            (0..arity).map(|_| rng.gen_range(0..params.vars)).collect()
        })
        .collect();
    let used: BTreeSet<usize> = args.iter().flatten().copied().collect();
    for v in (0..params.vars).filter(|v| !used.contains(v)) {
        let a = rng.gen_range(0..params.atoms);
        let slots: Vec<usize> = (0..args[a].len()).collect();
        let counts = |x: usize, args: &[Vec<usize>]| args.iter().flatten().filter(|&&y| y == x).count();
        // overwrite an argument whose variable occurs elsewhere, else append
        match slots.iter().copied().find(|&p| counts(args[a][p], &args) > 1) {
            Some(p) => args[a][p] = v,
            None => args[a].push(v),
        }
    }

    let mut predicates: Vec<(String, usize)> = Vec::new();
    let mut builder = QueryBuilder::new("ans");
    for (i, a) in args.iter().enumerate() {
        let reusable: Vec<&(String, usize)> = predicates.iter().filter(|(_, ar)| *ar == a.len()).collect();
        let name = match reusable.choose(&mut rng) {
            Some((name, _)) if rng.gen_bool(0.25) => name.clone(),
            _ => format!("R{i}"),
        };
        if !predicates.iter().any(|(p, _)| p == &name) {
            predicates.push((name.clone(), a.len()));
        }
        builder.atom(&name, a.iter().map(|&v| names[v].as_str()));
    }
    let free: Vec<&str> = names.iter().filter(|_| rng.gen_bool(params.free_probability)).map(String::as_str).collect();
    builder.free(free).expect("names are distinct");
    let query = builder.finish();

    let mut s = Structure::new();
    let values: Vec<u32> = (0..params.domain).map(|d| s.intern(&format!("d{d}"))).collect();
    for (name, arity) in &predicates {
        s.declare(name, *arity).expect("fresh predicate");
        let total = params.domain.pow(*arity as u32);
        for code in 0..total {
            if rng.gen_bool(params.density) {
                let mut rest = code;
                let row = (0..*arity)
                    .map(|_| {
                        let v = values[rest % params.domain];
                        rest /= params.domain;
                        v
                    })
                    .collect();
                s.add_row(name, row).expect("declared arity");
            }
        }
    }
    QueryInstance::new(query, s).expect("generated instance is consistent")
}

#[derive(Clone, Debug)]
pub struct RandomHypergraphParams {
    pub vertices: usize,
    pub edges: usize,
    pub max_arity: usize,
    pub seed: u64,
}

/// A random acyclic hypergraph built by ear addition: each new edge takes a
/// random subset of an existing edge plus fresh vertices. At most
/// `vertices` vertices are created; every vertex lies in an edge.
pub fn gen_random_acyclic(params: &RandomHypergraphParams) -> Hypergraph {
    assert!(params.max_arity >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut next = 0usize;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    for _ in 0..params.edges {
        let mut edge: BTreeSet<usize> = BTreeSet::new();
        if let Some(host) = edges.choose(&mut rng) {
            let keep = rng.gen_range(0..=host.len().min(params.max_arity));
            edge.extend(host.choose_multiple(&mut rng, keep).copied());
        }
        let room = params.max_arity - edge.len();
        let fresh = rng.gen_range(usize::from(edge.is_empty())..=room).min(params.vertices - next);
        edge.extend(next..next + fresh);
        next += fresh;
        if edge.is_empty() {
            break;
        }
        edges.push(edge.into_iter().collect());
    }
    let names = (0..next).map(|v| format!("a{v}")).collect();
    Hypergraph::new(names, edges).expect("ids are in range")
}

/// A random hypergraph: each edge is a uniform random vertex subset of
/// size `1..=max_arity`. Vertices may end up isolated.
pub fn gen_random_hypergraph(params: &RandomHypergraphParams) -> Hypergraph {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let all: Vec<usize> = (0..params.vertices).collect();
    let edges = (0..params.edges)
        .map(|_| {
            let size = rng.gen_range(1..=params.max_arity.min(params.vertices).max(1));
            all.choose_multiple(&mut rng, size).copied().collect()
        })
        .collect();
    let names = (0..params.vertices).map(|v| format!("a{v}")).collect();
    Hypergraph::new(names, edges).expect("ids are in range")
}

/// `S`-hypergraph of a random hypergraph with each vertex in `S` with
/// probability `s_probability`.
pub fn gen_random_s_hypergraph(params: &RandomHypergraphParams, s_probability: f64) -> SHypergraph {
    let h = gen_random_hypergraph(params);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x5eed);
    let s: VertexSet = h.vertices().iter().copied().filter(|_| rng.gen_bool(s_probability)).collect();
    SHypergraph::new(h, s).expect("subset of vertices")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{gyo_join_tree, verify};
    use crate::Rational;

    #[test]
    fn graph_validation_and_cliques() {
        assert!(SimpleGraph::new(2, [(0, 0)]).is_err());
        assert!(SimpleGraph::new(2, [(0, 2)]).is_err());
        let k4 = SimpleGraph::complete(4);
        assert_eq!(k4.count_cliques(3), 4);
        assert_eq!(k4.count_cliques(4), 1);
        assert!(!k4.has_independent_set(2));
        assert!(SimpleGraph::empty(3).has_independent_set(3));
    }

    #[test]
    fn clique_star_shape() {
        let inst = gen_clique_star_instance(&SimpleGraph::complete(3), 3);
        let sh = inst.s_hypergraph();
        assert_eq!(sh.hypergraph.num_vertices(), 4);
        assert_eq!(sh.s.len(), 3);
        assert_eq!(sh.s_components().len(), 1);
    }

    #[test]
    fn single_clique_relation_is_empty() {
        let inst = gen_clique_star_instance(&SimpleGraph::complete(3), 1);
        assert!(inst.structure.table("P1").unwrap().rows.is_empty());
    }

    #[test]
    fn hardness_hypergraph_witness_verifies() {
        let g = SimpleGraph::new(2, [(0, 1)]).unwrap();
        let (h, d) = gen_is_hardness_hypergraph::<Rational>(&g, 2);
        assert_eq!(h.num_vertices(), 4);
        let report = verify(&h, &d).unwrap();
        assert_eq!(report.width, Some(Rational::from_integer(2.into())));
    }

    #[test]
    fn g_star_and_obs_equivalent() {
        let star = gen_g_star(3);
        assert_eq!((star.hypergraph.num_vertices(), star.hypergraph.num_edges()), (4, 3));
        let tri = crate::fixtures::triangle();
        let sh = gen_obs_equivalent(&tri).unwrap();
        assert_eq!(sh.s, *tri.vertices());
        assert_eq!(sh.s_components().len(), 1);
        assert!(gen_obs_equivalent(&Hypergraph::from_index_edges(2, &[&[0]])).is_err());
    }

    #[test]
    fn random_generators_are_deterministic() {
        let p = RandomInstanceParams { seed: 42, ..RandomInstanceParams::default() };
        let a = gen_random_instance(&p);
        let b = gen_random_instance(&p);
        assert_eq!(a, b);
        assert_eq!(crate::format::write_facts(&a.structure), crate::format::write_facts(&b.structure));
        assert!(a.query.uncovered_vars().is_empty());
    }

    #[test]
    fn random_acyclic_is_acyclic() {
        for seed in 0..200 {
            let h = gen_random_acyclic(&RandomHypergraphParams { vertices: 20, edges: 8, max_arity: 4, seed });
            assert!(gyo_join_tree::<Rational>(&h).is_acyclic(), "seed {seed}: {h}");
            assert!(h.isolated_vertices().is_empty());
        }
    }
}
