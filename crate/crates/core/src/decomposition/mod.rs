//! Join-tree, generalized-hypertree, hingetree, tree and fractional
//! hypertree decompositions.
//!
//! A [`Decomposition`] is a rooted tree of guarded blocks `(λ_t, χ_t)`.
//! Guards hold edge ids of the decomposed hypergraph; fractional
//! decompositions additionally carry per-node edge weights of scalar type `W`.

mod elimination;
mod gyo;
mod hinge;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{Edge, EdgeId, Hypergraph, VertexId, VertexSet};
use crate::scalar::Weight;
use crate::Rational;

pub use elimination::{ghd_search, ghd_search_with, tree_decompose, tree_decompose_with, GhdSearchConfig, TreeConfig};
pub use gyo::{gyo_join_tree, GyoOutcome};
pub use hinge::hinge_decompose;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecompositionKind {
    JoinTree,
    Ghd,
    Hinge,
    Tree,
    Fractional,
}

impl fmt::Display for DecompositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DecompositionKind::JoinTree => "jointree",
            DecompositionKind::Ghd => "ghd",
            DecompositionKind::Hinge => "hinge",
            DecompositionKind::Tree => "tree",
            DecompositionKind::Fractional => "fractional",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for DecompositionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jointree" => Ok(DecompositionKind::JoinTree),
            "ghd" => Ok(DecompositionKind::Ghd),
            "hinge" => Ok(DecompositionKind::Hinge),
            "tree" => Ok(DecompositionKind::Tree),
            "fractional" => Ok(DecompositionKind::Fractional),
            other => Err(Error::InvalidInput(format!("unknown decomposition kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Node<W = Rational> {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub guard: BTreeSet<EdgeId>,
    pub bag: VertexSet,
    /// Only meaningful for fractional decompositions.
    pub weights: BTreeMap<EdgeId, W>,
}

impl<W> Node<W> {
    pub fn new(id: NodeId, parent: Option<NodeId>, guard: BTreeSet<EdgeId>, bag: VertexSet) -> Self {
        Node { id, parent, guard, bag, weights: BTreeMap::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<W = Rational> {
    pub kind: DecompositionKind,
    pub nodes: Vec<Node<W>>,
}

/// Tagged findings of [`verify`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "tag", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Violation {
    Connectedness { vertex: VertexId },
    EdgeUncovered { edge: EdgeId },
    GuardGap { node: NodeId, vertex: VertexId },
    GuardSize { node: NodeId, size: usize },
    HingeIntersection { first: NodeId, second: NodeId },
    HingeUnion { node: NodeId },
    HingeEdgeMissing { edge: EdgeId },
    WeightDeficit { node: NodeId, vertex: VertexId },
    NegativeWeight { node: NodeId, edge: EdgeId },
}

impl Violation {
    pub fn tag(&self) -> &'static str {
        match self {
            Violation::Connectedness { .. } => "CONNECTEDNESS",
            Violation::EdgeUncovered { .. } => "EDGE_UNCOVERED",
            Violation::GuardGap { .. } => "GUARD_GAP",
            Violation::GuardSize { .. } => "GUARD_SIZE",
            Violation::HingeIntersection { .. } => "HINGE_INTERSECTION",
            Violation::HingeUnion { .. } => "HINGE_UNION",
            Violation::HingeEdgeMissing { .. } => "HINGE_EDGE_MISSING",
            Violation::WeightDeficit { .. } => "WEIGHT_DEFICIT",
            Violation::NegativeWeight { .. } => "NEGATIVE_WEIGHT",
        }
    }

    /// Human-readable rendering with vertex names from `h`.
    pub fn describe(&self, h: &Hypergraph) -> String {
        match self {
            Violation::Connectedness { vertex } => format!("CONNECTEDNESS({})", h.name(*vertex)),
            Violation::EdgeUncovered { edge } => format!("EDGE_UNCOVERED({edge})"),
            Violation::GuardGap { node, vertex } => format!("GUARD_GAP({node},{})", h.name(*vertex)),
            Violation::GuardSize { node, size } => format!("GUARD_SIZE({node},{size})"),
            Violation::HingeIntersection { first, second } => format!("HINGE_INTERSECTION({first},{second})"),
            Violation::HingeUnion { node } => format!("HINGE_UNION({node})"),
            Violation::HingeEdgeMissing { edge } => format!("HINGE_EDGE_MISSING({edge})"),
            Violation::WeightDeficit { node, vertex } => format!("WEIGHT_DEFICIT({node},{})", h.name(*vertex)),
            Violation::NegativeWeight { node, edge } => format!("NEGATIVE_WEIGHT({node},{edge})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WidthReport<W = Rational> {
    pub kind: DecompositionKind,
    /// Present only when `violations` is empty.
    pub width: Option<W>,
    pub violations: Vec<Violation>,
}

impl<W> WidthReport<W> {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.violations.iter().any(|v| v.tag() == tag)
    }
}

/// Positions, children lists and traversal orders of a decomposition tree.
#[derive(Clone, Debug)]
pub(crate) struct TreeIndex {
    pub(crate) position: HashMap<NodeId, usize>,
    pub(crate) parent: Vec<Option<usize>>,
    pub(crate) children: Vec<Vec<usize>>,
    pub(crate) root: usize,
    /// Parents before children.
    pub(crate) preorder: Vec<usize>,
}

impl TreeIndex {
    pub(crate) fn postorder(&self) -> impl Iterator<Item = usize> + '_ {
        self.preorder.iter().rev().copied()
    }
}

impl<W: Weight> Decomposition<W> {
    pub fn new(kind: DecompositionKind, nodes: Vec<Node<W>>) -> Self {
        Decomposition { kind, nodes }
    }

    /// One node guarding every edge, with the bag holding every vertex that
    /// lies in an edge.
    pub fn single_node(h: &Hypergraph, kind: DecompositionKind) -> Self {
        let guard: BTreeSet<EdgeId> = h.edge_ids().collect();
        let bag: VertexSet = h.edges().iter().flat_map(|e| e.vertices.iter().copied()).collect();
        let mut node = Node::new(0, None, guard.clone(), bag);
        if kind == DecompositionKind::Fractional {
            node.weights = guard.iter().map(|&e| (e, W::one())).collect();
        }
        Decomposition { kind, nodes: vec![node] }
    }

    pub fn with_kind(mut self, kind: DecompositionKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn node(&self, id: NodeId) -> Option<&Node<W>> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn node_mut(&mut self, id: NodeId) -> Option<&mut Node<W>> {
        self.nodes.iter_mut().find(|n| n.id == id)
    }

    pub fn root(&self) -> Option<NodeId> {
        self.nodes.iter().find(|n| n.parent.is_none()).map(|n| n.id)
    }

    pub fn guard_width(&self) -> usize {
        self.nodes.iter().map(|n| n.guard.len()).max().unwrap_or(0)
    }

    /// The same tree with integral weights: `ψ_t(e) = 1` for `e ∈ λ_t`.
    pub fn to_fractional(&self) -> Decomposition<W> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| {
                let mut node = n.clone();
                node.weights = n.guard.iter().map(|&e| (e, W::one())).collect();
                node
            })
            .collect();
        Decomposition { kind: DecompositionKind::Fractional, nodes }
    }

    /// Converts the weight scalar, e.g. from exact rationals to floats.
    pub fn map_weights<V, F: Fn(&W) -> V>(&self, f: F) -> Decomposition<V> {
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                id: n.id,
                parent: n.parent,
                guard: n.guard.clone(),
                bag: n.bag.clone(),
                weights: n.weights.iter().map(|(&e, w)| (e, f(w))).collect(),
            })
            .collect();
        Decomposition { kind: self.kind, nodes }
    }

    pub(crate) fn index(&self) -> Result<TreeIndex> {
        let mut position = HashMap::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if position.insert(n.id, i).is_some() {
                return Err(Error::MalformedTree(format!("node id {} used twice", n.id)));
            }
        }
        let mut parent = vec![None; self.nodes.len()];
        let mut children = vec![Vec::new(); self.nodes.len()];
        let mut roots = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            match n.parent {
                None => roots.push(i),
                Some(p) => {
                    let &pi = position
                        .get(&p)
                        .ok_or_else(|| Error::IdMismatch(format!("parent node {p} of node {}", n.id)))?;
                    parent[i] = Some(pi);
                    children[pi].push(i);
                }
            }
        }
        if roots.len() != 1 {
            return Err(Error::MalformedTree(format!("expected exactly one root, found {}", roots.len())));
        }
        let root = roots[0];
        let mut preorder = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![root];
        while let Some(i) = stack.pop() {
            preorder.push(i);
            stack.extend(children[i].iter().rev().copied());
        }
        if preorder.len() != self.nodes.len() {
            return Err(Error::MalformedTree("parent pointers contain a cycle".into()));
        }
        Ok(TreeIndex { position, parent, children, root, preorder })
    }
}

fn edge_vertices<'a>(h: &'a Hypergraph, id: EdgeId) -> Result<&'a VertexSet> {
    h.edge(id).map(|e| &e.vertices).ok_or_else(|| Error::IdMismatch(format!("edge {id}")))
}

/// Checks the conditions of `d.kind` against `h` and reports the width.
///
/// All violations are collected; the width is only reported for a valid
/// decomposition. Dangling ids and malformed trees are errors rather than
/// findings.
pub fn verify<W: Weight>(h: &Hypergraph, d: &Decomposition<W>) -> Result<WidthReport<W>> {
    let index = d.index()?;
    for n in &d.nodes {
        for &e in n.guard.iter().chain(n.weights.keys()) {
            edge_vertices(h, e)?;
        }
        if let Some(&v) = n.bag.iter().find(|v| !h.vertices().contains(v)) {
            return Err(Error::IdMismatch(format!("vertex {v} in node {}", n.id)));
        }
    }

    let mut violations = Vec::new();
    check_connectedness(h, d, &index, &mut violations);

    match d.kind {
        DecompositionKind::Tree => {
            for e in h.edges() {
                if !pairs_covered(&e.vertices, d) {
                    violations.push(Violation::EdgeUncovered { edge: e.id });
                }
            }
        }
        _ => {
            for e in h.edges() {
                if !d.nodes.iter().any(|n| e.vertices.is_subset(&n.bag)) {
                    violations.push(Violation::EdgeUncovered { edge: e.id });
                }
            }
        }
    }

    if matches!(d.kind, DecompositionKind::JoinTree | DecompositionKind::Ghd | DecompositionKind::Hinge) {
        for n in &d.nodes {
            let covered = guard_union(h, &n.guard)?;
            for &v in n.bag.difference(&covered) {
                violations.push(Violation::GuardGap { node: n.id, vertex: v });
            }
        }
    }

    if d.kind == DecompositionKind::JoinTree {
        for n in &d.nodes {
            if n.guard.len() > 1 {
                violations.push(Violation::GuardSize { node: n.id, size: n.guard.len() });
            }
        }
    }

    if d.kind == DecompositionKind::Hinge {
        check_hinge(h, d, &mut violations)?;
    }

    let mut fractional_width = W::zero();
    if d.kind == DecompositionKind::Fractional {
        for n in &d.nodes {
            let mut total = W::zero();
            for (&e, w) in &n.weights {
                if w.is_negative_weight() {
                    violations.push(Violation::NegativeWeight { node: n.id, edge: e });
                }
                total = total + w.clone();
            }
            for &v in &n.bag {
                let mut cover = W::zero();
                for (&e, w) in &n.weights {
                    if edge_vertices(h, e)?.contains(&v) {
                        cover = cover + w.clone();
                    }
                }
                if cover < W::one() {
                    violations.push(Violation::WeightDeficit { node: n.id, vertex: v });
                }
            }
            if total > fractional_width {
                fractional_width = total;
            }
        }
    }

    violations.sort();
    violations.dedup();
    let width = violations.is_empty().then(|| match d.kind {
        DecompositionKind::Fractional => fractional_width,
        DecompositionKind::Tree => {
            let max_bag = d.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0);
            W::from_usize(max_bag.saturating_sub(1)).expect("width fits the scalar")
        }
        _ => W::from_usize(d.guard_width()).expect("width fits the scalar"),
    });
    Ok(WidthReport { kind: d.kind, width, violations })
}

fn guard_union(h: &Hypergraph, guard: &BTreeSet<EdgeId>) -> Result<VertexSet> {
    let mut out = VertexSet::new();
    for &e in guard {
        out.extend(edge_vertices(h, e)?.iter().copied());
    }
    Ok(out)
}

fn pairs_covered<W>(edge: &VertexSet, d: &Decomposition<W>) -> bool {
    let vs: Vec<VertexId> = edge.iter().copied().collect();
    for i in 0..vs.len() {
        for j in i + 1..vs.len() {
            if !d.nodes.iter().any(|n| n.bag.contains(&vs[i]) && n.bag.contains(&vs[j])) {
                return false;
            }
        }
    }
    true
}

/// A vertex's nodes form a subtree iff at most one of them has a parent
/// outside the set.
fn check_connectedness<W>(h: &Hypergraph, d: &Decomposition<W>, index: &TreeIndex, out: &mut Vec<Violation>) {
    for &v in h.vertices() {
        let tops = (0..d.nodes.len())
            .filter(|&i| d.nodes[i].bag.contains(&v))
            .filter(|&i| match index.parent[i] {
                None => true,
                Some(p) => !d.nodes[p].bag.contains(&v),
            })
            .count();
        if tops > 1 {
            out.push(Violation::Connectedness { vertex: v });
        }
    }
}

fn check_hinge<W: Weight>(h: &Hypergraph, d: &Decomposition<W>, out: &mut Vec<Violation>) -> Result<()> {
    let guards: Vec<Vec<&VertexSet>> = d
        .nodes
        .iter()
        .map(|n| n.guard.iter().map(|&e| edge_vertices(h, e)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    for (i, n) in d.nodes.iter().enumerate() {
        let union: VertexSet = guards[i].iter().flat_map(|e| e.iter().copied()).collect();
        if union != n.bag {
            out.push(Violation::HingeUnion { node: n.id });
        }
        for (j, m) in d.nodes.iter().enumerate().skip(i + 1) {
            let common: VertexSet = n.bag.intersection(&m.bag).copied().collect();
            if common.is_empty() {
                continue;
            }
            let in_first = guards[i].iter().any(|e| common.is_subset(e));
            let in_second = guards[j].iter().any(|e| common.is_subset(e));
            if !(in_first && in_second) {
                out.push(Violation::HingeIntersection { first: n.id, second: m.id });
            }
        }
    }
    let guarded: BTreeSet<EdgeId> = d.nodes.iter().flat_map(|n| n.guard.iter().copied()).collect();
    for e in h.edges() {
        if !guarded.contains(&e.id) {
            out.push(Violation::HingeEdgeMissing { edge: e.id });
        }
    }
    Ok(())
}

/// Restriction of `d` (a decomposition of `h`) to `H[vs]`: bags become
/// `χ_t ∩ vs` and guards keep the edges meeting `vs`. The tree is unchanged;
/// emptied nodes stay in place.
pub fn induced_decomposition<W: Weight>(h: &Hypergraph, d: &Decomposition<W>, vs: &VertexSet) -> Result<Decomposition<W>> {
    let keeps = |e: EdgeId| -> Result<bool> { Ok(!edge_vertices(h, e)?.is_disjoint(vs)) };
    let mut nodes = Vec::with_capacity(d.nodes.len());
    for n in &d.nodes {
        let mut guard = BTreeSet::new();
        for &e in &n.guard {
            if keeps(e)? {
                guard.insert(e);
            }
        }
        let mut weights = BTreeMap::new();
        for (&e, w) in &n.weights {
            if keeps(e)? {
                weights.insert(e, w.clone());
            }
        }
        nodes.push(Node { id: n.id, parent: n.parent, guard, bag: n.bag.intersection(vs).copied().collect(), weights });
    }
    Ok(Decomposition { kind: d.kind, nodes })
}

/// `H' = (V, {χ_t})`: one edge per nonempty bag, with edge id = node id.
pub fn blocks_hypergraph<W: Weight>(h: &Hypergraph, d: &Decomposition<W>) -> Hypergraph {
    let edges = d
        .nodes
        .iter()
        .filter(|n| !n.bag.is_empty())
        .map(|n| Edge { id: n.id, vertices: n.bag.clone() })
        .collect();
    h.with_parts(h.vertices().clone(), edges)
}

/// The blocks hypergraph together with its join tree, which is `d`'s tree
/// with each node guarded by its own bag.
pub fn blocks_join_tree<W: Weight>(h: &Hypergraph, d: &Decomposition<W>) -> (Hypergraph, Decomposition<W>) {
    let blocks = blocks_hypergraph(h, d);
    let nodes = d
        .nodes
        .iter()
        .map(|n| {
            let guard = if n.bag.is_empty() { BTreeSet::new() } else { [n.id].into_iter().collect() };
            Node::new(n.id, n.parent, guard, n.bag.clone())
        })
        .collect();
    (blocks, Decomposition { kind: DecompositionKind::JoinTree, nodes })
}

/// Builds a rooted decomposition from an undirected tree on node indices.
pub(crate) fn root_tree<W>(
    kind: DecompositionKind,
    blocks: Vec<(BTreeSet<EdgeId>, VertexSet)>,
    tree_edges: &[(usize, usize)],
    root: usize,
) -> Decomposition<W> {
    let n = blocks.len();
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([root]);
    seen[root] = true;
    while let Some(a) = queue.pop_front() {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                parent[b] = Some(a);
                queue.push_back(b);
            }
        }
    }
    let nodes = blocks
        .into_iter()
        .enumerate()
        .map(|(i, (guard, bag))| Node::new(i, parent[i], guard, bag))
        .collect();
    Decomposition { kind, nodes }
}
