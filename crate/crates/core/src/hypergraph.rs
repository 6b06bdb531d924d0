//! Hypergraphs, S-hypergraphs and S-components.
//!
//! Vertex ids index a shared name table, so induced subhypergraphs keep the
//! ids of their parent. Edge ids are likewise preserved under induction: the
//! induced edge `e ∩ V'` carries the id of `e`, which is its provenance.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::query::Query;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub vertices: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypergraph {
    names: Arc<Vec<String>>,
    vertices: VertexSet,
    /// Sorted by id.
    edges: Vec<Edge>,
}

impl Hypergraph {
    /// A hypergraph over `names` (vertex `i` is `names[i]`) whose edge `j`
    /// is `edges[j]`.
    pub fn new(names: Vec<String>, edges: Vec<Vec<VertexId>>) -> Result<Self> {
        let n = names.len();
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(id, vs)| {
                let vertices: VertexSet = vs.into_iter().collect();
                match vertices.iter().find(|&&v| v >= n) {
                    Some(&v) => Err(Error::UnknownVertex(v)),
                    None => Ok(Edge { id, vertices }),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Hypergraph { names: Arc::new(names), vertices: (0..n).collect(), edges })
    }

    /// Convenience constructor naming vertices by their index.
    pub fn from_index_edges(n: usize, edges: &[&[VertexId]]) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        Self::new(names, edges.iter().map(|e| e.to_vec()).collect()).expect("edge vertex out of range")
    }

    /// Convenience constructor naming vertices by string; vertices are
    /// created in first-appearance order.
    pub fn from_named_edges(edges: &[&[&str]]) -> Self {
        let mut names: Vec<String> = Vec::new();
        let mut ids = Vec::new();
        for edge in edges {
            let mut e = Vec::new();
            for &name in edge.iter() {
                let id = match names.iter().position(|n| n == name) {
                    Some(id) => id,
                    None => {
                        names.push(name.to_string());
                        names.len() - 1
                    }
                };
                e.push(id);
            }
            ids.push(e);
        }
        Self::new(names, ids).expect("ids are in range by construction")
    }

    /// Builds a hypergraph sharing this one's name table.
    pub(crate) fn with_parts(&self, vertices: VertexSet, mut edges: Vec<Edge>) -> Hypergraph {
        edges.sort_by_key(|e| e.id);
        Hypergraph { names: Arc::clone(&self.names), vertices, edges }
    }

    /// Builds a hypergraph over an existing name table.
    pub(crate) fn from_parts(names: Arc<Vec<String>>, vertices: VertexSet, mut edges: Vec<Edge>) -> Hypergraph {
        edges.sort_by_key(|e| e.id);
        Hypergraph { names, vertices, edges }
    }

    pub fn names(&self) -> &Arc<Vec<String>> {
        &self.names
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.names.iter().position(|n| n == name).filter(|v| self.vertices.contains(v))
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok().map(|i| &self.edges[i])
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    /// The deduplicated, nonempty edge family used for independence and
    /// cover computations.
    pub fn edge_family(&self) -> Vec<VertexSet> {
        let family: BTreeSet<&VertexSet> = self.edges.iter().map(|e| &e.vertices).filter(|e| !e.is_empty()).collect();
        family.into_iter().cloned().collect()
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter().filter(move |e| e.vertices.contains(&v))
    }

    /// Vertices lying in no edge.
    pub fn isolated_vertices(&self) -> VertexSet {
        let covered: VertexSet = self.edges.iter().flat_map(|e| e.vertices.iter().copied()).collect();
        self.vertices.difference(&covered).copied().collect()
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.edges.iter().any(|e| e.vertices.contains(&u) && e.vertices.contains(&v))
    }

    /// No edge contains two members of `set`.
    pub fn is_independent(&self, set: &VertexSet) -> bool {
        self.edges.iter().all(|e| e.vertices.intersection(set).nth(1).is_none())
    }

    /// `H[vs]`: vertex set `vs`, edges `e ∩ vs` for every edge meeting `vs`.
    pub fn induced(&self, vs: &VertexSet) -> Result<Hypergraph> {
        if let Some(&v) = vs.iter().find(|v| !self.vertices.contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| {
                let vertices: VertexSet = e.vertices.intersection(vs).copied().collect();
                (!vertices.is_empty()).then_some(Edge { id: e.id, vertices })
            })
            .collect();
        Ok(self.with_parts(vs.clone(), edges))
    }

    /// Maximal path-connected vertex classes, ordered by minimum vertex id.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let ids: Vec<VertexId> = self.vertices.iter().copied().collect();
        let index: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut uf = UnionFind::new(ids.len());
        for e in &self.edges {
            let mut it = e.vertices.iter();
            if let Some(first) = it.next() {
                for v in it {
                    uf.union(index[first], index[v]);
                }
            }
        }
        let mut classes: BTreeMap<usize, VertexSet> = BTreeMap::new();
        for (i, &v) in ids.iter().enumerate() {
            classes.entry(uf.find(i)).or_default().insert(v);
        }
        let mut out: Vec<VertexSet> = classes.into_values().collect();
        out.sort_by_key(|c| *c.iter().next().expect("classes are nonempty"));
        out
    }

    /// Clique expansion of every edge. Edge ids of the result are fresh.
    pub fn primal_graph(&self) -> Hypergraph {
        let pairs: BTreeSet<(VertexId, VertexId)> = self
            .edges
            .iter()
            .flat_map(|e| {
                let vs: Vec<VertexId> = e.vertices.iter().copied().collect();
                let mut pairs = Vec::new();
                for i in 0..vs.len() {
                    for j in i + 1..vs.len() {
                        pairs.push((vs[i], vs[j]));
                    }
                }
                pairs
            })
            .collect();
        let edges = pairs
            .into_iter()
            .enumerate()
            .map(|(id, (u, v))| Edge { id, vertices: [u, v].into_iter().collect() })
            .collect();
        self.with_parts(self.vertices.clone(), edges)
    }

    /// Renders a vertex set with display names.
    pub fn display_set(&self, set: &VertexSet) -> String {
        let names: Vec<&str> = set.iter().map(|&v| self.name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={} E=[", self.display_set(&self.vertices))?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", e.id, self.display_set(&e.vertices))?;
        }
        write!(f, "]")
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as representative
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// A hypergraph with a distinguished vertex set `S` (the free variables).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SHypergraph {
    pub hypergraph: Hypergraph,
    pub s: VertexSet,
}

/// One S-component: the core `C` (a component of `H[V−S]`), its closure
/// `V'` (the union of edges meeting `C`), the induced hypergraph `H[V']`
/// and `S ∩ V'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SComponent {
    pub core: VertexSet,
    pub closure: VertexSet,
    pub induced: Hypergraph,
    pub s_vertices: VertexSet,
}

impl SComponent {
    /// Ids of the original edges that produced the induced edges.
    pub fn provenance(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.induced.edge_ids()
    }

    /// `H[V' ∩ S]`, on which independence among S-vertices is decided.
    pub fn s_restricted(&self) -> Hypergraph {
        self.induced.induced(&self.s_vertices).expect("S-vertices lie in the closure")
    }
}

impl SHypergraph {
    pub fn new(hypergraph: Hypergraph, s: VertexSet) -> Result<Self> {
        if let Some(&v) = s.iter().find(|v| !hypergraph.vertices().contains(v)) {
            return Err(Error::UnknownVertex(v));
        }
        Ok(SHypergraph { hypergraph, s })
    }

    /// The canonical S-hypergraph of a query: one vertex per variable, one
    /// edge per atom (edge id = atom ordinal), `S` = free variables.
    pub fn from_query(query: &Query) -> Result<Self> {
        if let Some(&v) = query.uncovered_vars().first() {
            return Err(Error::VariableWithoutAtom(query.vars[v].clone()));
        }
        let edges = query.atoms.iter().map(|a| a.args.clone()).collect();
        let hypergraph = Hypergraph::new(query.vars.clone(), edges)?;
        Ok(SHypergraph { hypergraph, s: query.free_set() })
    }

    pub fn quantified(&self) -> VertexSet {
        self.hypergraph.vertices().difference(&self.s).copied().collect()
    }

    pub fn s_components(&self) -> Vec<SComponent> {
        let h = &self.hypergraph;
        let rest = h.induced(&self.quantified()).expect("subset of vertices");
        rest.connected_components()
            .into_iter()
            .map(|core| {
                let closure: VertexSet = h
                    .edges()
                    .iter()
                    .filter(|e| !e.vertices.is_disjoint(&core))
                    .flat_map(|e| e.vertices.iter().copied())
                    .chain(core.iter().copied())
                    .collect();
                let induced = h.induced(&closure).expect("closure is a vertex subset");
                let s_vertices = closure.intersection(&self.s).copied().collect();
                SComponent { core, closure, induced, s_vertices }
            })
            .collect()
    }
}
