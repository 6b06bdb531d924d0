//! Decompositions from vertex elimination orderings.
//!
//! Both the tree decomposition search and the bounded-width GHD search
//! minimise, over elimination orderings, the largest bag cost. Small
//! instances are solved exactly by dynamic programming over the set of
//! already eliminated vertices; larger ones fall back to the min-fill
//! ordering, which is sound but may miss a decomposition that exists.
//!
//! For GHDs, vertices with identical incident edges are merged first. Such
//! twins can always share their bags, so the quotient is exact and usually
//! much smaller.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, VertexId, VertexSet};
use crate::scalar::Weight;

use super::gyo::gyo_join_tree;
use super::{Decomposition, DecompositionKind, Node};

#[derive(Clone, Debug)]
pub struct GhdSearchConfig {
    /// Largest number of twin classes searched exactly.
    pub exact_limit: usize,
    /// Maximum number of dynamic-programming transitions.
    pub budget: u64,
}

impl Default for GhdSearchConfig {
    fn default() -> Self {
        GhdSearchConfig { exact_limit: 18, budget: 50_000_000 }
    }
}

impl GhdSearchConfig {
    /// Whether a `None` from [`ghd_search_with`] on `h` is a proof that no
    /// decomposition of the requested width exists.
    pub fn is_exact_for(&self, h: &Hypergraph) -> bool {
        twin_classes(h).len() <= self.exact_limit.min(MAX_EXACT)
    }
}

#[derive(Clone, Debug)]
pub struct TreeConfig {
    pub exact_limit: usize,
    pub budget: u64,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig { exact_limit: 12, budget: 50_000_000 }
    }
}

const MAX_EXACT: usize = 26;

/// Searches for a GHD of width at most `k` with default settings.
pub fn ghd_search<W: Weight>(h: &Hypergraph, k: usize) -> Result<Option<Decomposition<W>>> {
    ghd_search_with(h, k, &GhdSearchConfig::default())
}

pub fn ghd_search_with<W: Weight>(h: &Hypergraph, k: usize, config: &GhdSearchConfig) -> Result<Option<Decomposition<W>>> {
    if let Some(jt) = gyo_join_tree::<W>(h).join_tree() {
        let d = jt.with_kind(DecompositionKind::Ghd);
        return Ok((d.guard_width() <= k).then_some(d));
    }
    if k == 0 {
        return Ok(None);
    }

    let classes = twin_classes(h);
    let class_of: HashMap<VertexId, usize> =
        classes.iter().enumerate().flat_map(|(c, members)| members.iter().map(move |&v| (v, c))).collect();
    let mut cover_edges: BTreeMap<BTreeSet<usize>, EdgeId> = BTreeMap::new();
    for e in h.edges() {
        let cs: BTreeSet<usize> = e.vertices.iter().map(|v| class_of[v]).collect();
        if !cs.is_empty() {
            cover_edges.entry(cs).or_insert(e.id);
        }
    }
    let adj = adjacency(classes.len(), cover_edges.keys());
    let coverer = Coverer::new(&cover_edges);

    let order = if classes.len() <= config.exact_limit.min(MAX_EXACT) {
        let masks = to_masks(&adj);
        let mut memo: HashMap<u64, Option<u32>> = HashMap::new();
        let mut cost = |bag: u64| *memo.entry(bag).or_insert_with(|| coverer.min_cover_mask(bag, k).map(|c| c.len() as u32));
        match exact_order(&masks, &mut cost, config.budget)? {
            Some((_, order)) => order,
            None => return Ok(None),
        }
    } else {
        min_fill_order(&adj)
    };

    let tree = tree_from_order(&adj, &order);
    let mut nodes = Vec::with_capacity(tree.len());
    for (i, (bag, parent)) in tree.into_iter().enumerate() {
        let Some(guard) = coverer.min_cover(&bag, k) else {
            return Ok(None);
        };
        let vertices: VertexSet = bag.iter().flat_map(|&c| classes[c].iter().copied()).collect();
        nodes.push(Node::new(i, parent, guard.into_iter().collect(), vertices));
    }
    Ok(Some(Decomposition::new(DecompositionKind::Ghd, nodes)))
}

/// Computes a tree decomposition of the primal graph of `h`, optimal when
/// `h` has at most the configured number of vertices.
pub fn tree_decompose<W: Weight>(h: &Hypergraph) -> Result<Decomposition<W>> {
    tree_decompose_with(h, &TreeConfig::default())
}

pub fn tree_decompose_with<W: Weight>(h: &Hypergraph, config: &TreeConfig) -> Result<Decomposition<W>> {
    let ids: Vec<VertexId> = h.vertices().iter().copied().collect();
    if ids.is_empty() {
        let node = Node::new(0, None, BTreeSet::new(), VertexSet::new());
        return Ok(Decomposition::new(DecompositionKind::Tree, vec![node]));
    }
    let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<BTreeSet<usize>> = h.edges().iter().map(|e| e.vertices.iter().map(|v| index[v]).collect()).collect();
    let adj = adjacency(ids.len(), edges.iter());

    let order = if ids.len() <= config.exact_limit.min(MAX_EXACT) {
        let masks = to_masks(&adj);
        let mut cost = |bag: u64| Some(bag.count_ones() - 1);
        exact_order(&masks, &mut cost, config.budget)?.expect("every ordering is admissible").1
    } else {
        min_fill_order(&adj)
    };

    let nodes = tree_from_order(&adj, &order)
        .into_iter()
        .enumerate()
        .map(|(i, (bag, parent))| Node::new(i, parent, BTreeSet::new(), bag.iter().map(|&x| ids[x]).collect()))
        .collect();
    Ok(Decomposition::new(DecompositionKind::Tree, nodes))
}

/// Vertices lying in at least one edge, grouped by their incident edge
/// sets and ordered by smallest member.
fn twin_classes(h: &Hypergraph) -> Vec<VertexSet> {
    let mut by_signature: BTreeMap<Vec<EdgeId>, VertexSet> = BTreeMap::new();
    for &v in h.vertices() {
        let signature: Vec<EdgeId> = h.incident_edges(v).map(|e| e.id).collect();
        if !signature.is_empty() {
            by_signature.entry(signature).or_default().insert(v);
        }
    }
    let mut classes: Vec<VertexSet> = by_signature.into_values().collect();
    classes.sort_by_key(|c| *c.iter().next().expect("nonempty"));
    classes
}

fn adjacency<'a>(n: usize, edges: impl Iterator<Item = &'a BTreeSet<usize>>) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); n];
    for e in edges {
        for &a in e {
            for &b in e {
                if a != b {
                    adj[a].insert(b);
                }
            }
        }
    }
    adj
}

fn to_masks(adj: &[BTreeSet<usize>]) -> Vec<u64> {
    adj.iter().map(|ns| ns.iter().fold(0u64, |m, &b| m | (1 << b))).collect()
}

/// Minimum edge covers of class sets, searched up to a size bound.
struct Coverer {
    /// Distinct class sets with the lowest edge id producing each.
    edges: Vec<(BTreeSet<usize>, EdgeId)>,
}

impl Coverer {
    fn new(edges: &BTreeMap<BTreeSet<usize>, EdgeId>) -> Self {
        let mut list: Vec<(BTreeSet<usize>, EdgeId)> = edges.iter().map(|(cs, &id)| (cs.clone(), id)).collect();
        list.sort_by_key(|&(_, id)| id);
        Coverer { edges: list }
    }

    fn min_cover_mask(&self, bag: u64, k: usize) -> Option<Vec<EdgeId>> {
        let set: BTreeSet<usize> = (0..64).filter(|&c| bag & (1 << c) != 0).collect();
        self.min_cover(&set, k)
    }

    /// A minimum cover of `bag` with at most `k` edges, preferring low ids.
    fn min_cover(&self, bag: &BTreeSet<usize>, k: usize) -> Option<Vec<EdgeId>> {
        if bag.is_empty() {
            return Some(Vec::new());
        }
        let parts: Vec<(BTreeSet<usize>, EdgeId)> = self
            .edges
            .iter()
            .map(|(cs, id)| (cs.intersection(bag).copied().collect::<BTreeSet<usize>>(), *id))
            .filter(|(part, _)| !part.is_empty())
            .collect();
        let candidates: Vec<(BTreeSet<usize>, EdgeId)> = parts
            .iter()
            .filter(|(part, id)| {
                !parts.iter().any(|(other, oid)| (other != part && part.is_subset(other)) || (other == part && oid < id))
            })
            .cloned()
            .collect();
        let chosen = if bag.len() <= 64 {
            let local: BTreeMap<usize, usize> = bag.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let masks: Vec<u64> =
                candidates.iter().map(|(part, _)| part.iter().fold(0u64, |m, c| m | (1 << local[c]))).collect();
            let target = if bag.len() == 64 { u64::MAX } else { (1u64 << bag.len()) - 1 };
            (1..=k.min(masks.len())).find_map(|size| {
                let mut chosen = Vec::with_capacity(size);
                search_mask_cover(&masks, target, 0, size, &mut chosen).then_some(chosen)
            })
        } else {
            (1..=k.min(candidates.len())).find_map(|size| {
                let mut chosen = Vec::with_capacity(size);
                search_set_cover(&candidates, bag, &BTreeSet::new(), size, &mut chosen).then_some(chosen)
            })
        }?;
        let mut ids: Vec<EdgeId> = chosen.iter().map(|&i| candidates[i].1).collect();
        ids.sort_unstable();
        Some(ids)
    }
}

// The lowest uncovered element must be covered by one of the remaining picks.
fn search_mask_cover(masks: &[u64], target: u64, covered: u64, left: usize, chosen: &mut Vec<usize>) -> bool {
    if covered & target == target {
        return true;
    }
    if left == 0 {
        return false;
    }
    let need = 1u64 << (target & !covered).trailing_zeros();
    for (i, &m) in masks.iter().enumerate() {
        if m & need == 0 {
            continue;
        }
        chosen.push(i);
        if search_mask_cover(masks, target, covered | m, left - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn search_set_cover(
    candidates: &[(BTreeSet<usize>, EdgeId)],
    bag: &BTreeSet<usize>,
    covered: &BTreeSet<usize>,
    left: usize,
    chosen: &mut Vec<usize>,
) -> bool {
    let Some(need) = bag.difference(covered).next() else {
        return true;
    };
    if left == 0 {
        return false;
    }
    for (i, (part, _)) in candidates.iter().enumerate() {
        if !part.contains(need) {
            continue;
        }
        chosen.push(i);
        let next: BTreeSet<usize> = covered.union(part).copied().collect();
        if search_set_cover(candidates, bag, &next, left - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Vertices outside `eliminated ∪ {v}` reachable from `v` through
/// eliminated vertices: the neighbourhood of `v` at its elimination.
fn elimination_neighbours(adj: &[u64], eliminated: u64, v: usize) -> u64 {
    let mut visited = 1u64 << v;
    let mut frontier = 1u64 << v;
    let mut result = 0u64;
    while frontier != 0 {
        let u = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let next = adj[u] & !visited;
        visited |= next;
        result |= next & !eliminated;
        frontier |= next & eliminated;
    }
    result
}

/// Minimises the largest bag cost over all elimination orderings.
/// `cost` returns `None` for inadmissible bags.
fn exact_order<F>(adj: &[u64], cost: &mut F, budget: u64) -> Result<Option<(u32, Vec<usize>)>>
where
    F: FnMut(u64) -> Option<u32>,
{
    let n = adj.len();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let states = 1usize << n;
    let mut best = vec![u32::MAX; states];
    let mut last = vec![u8::MAX; states];
    best[0] = 0;
    let mut steps = 0u64;
    for s in 0..states {
        if best[s] == u32::MAX {
            continue;
        }
        let set = s as u64;
        for v in 0..n {
            if set & (1 << v) != 0 {
                continue;
            }
            steps += 1;
            if steps > budget {
                return Err(Error::BudgetExceeded(format!("elimination search over {n} units exceeded {budget} steps")));
            }
            let bag = (1u64 << v) | elimination_neighbours(adj, set, v);
            let Some(c) = cost(bag) else { continue };
            let value = best[s].max(c);
            let t = s | (1 << v);
            if value < best[t] {
                best[t] = value;
                last[t] = v as u8;
            }
        }
    }
    let full = full as usize;
    if best[full] == u32::MAX {
        return Ok(None);
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    Ok(Some((best[full], order)))
}

/// Greedy ordering by fewest fill edges, ties to the lowest index.
fn min_fill_order(adj: &[BTreeSet<usize>]) -> Vec<usize> {
    let mut graph = adj.to_vec();
    let mut alive: BTreeSet<usize> = (0..adj.len()).collect();
    let mut order = Vec::with_capacity(adj.len());
    while !alive.is_empty() {
        let v = *alive
            .iter()
            .min_by_key(|&&v| {
                let ns: Vec<usize> = graph[v].iter().copied().collect();
                let mut fill = 0usize;
                for i in 0..ns.len() {
                    for j in i + 1..ns.len() {
                        if !graph[ns[i]].contains(&ns[j]) {
                            fill += 1;
                        }
                    }
                }
                (fill, v)
            })
            .expect("nonempty");
        eliminate(&mut graph, v);
        alive.remove(&v);
        order.push(v);
    }
    order
}

fn eliminate(graph: &mut [BTreeSet<usize>], v: usize) -> BTreeSet<usize> {
    let ns = std::mem::take(&mut graph[v]);
    for &a in &ns {
        graph[a].remove(&v);
        for &b in &ns {
            if a != b {
                graph[a].insert(b);
            }
        }
    }
    ns
}

/// Bags and parent pointers of the decomposition induced by `order`, with
/// bags contained in their parent's bag merged away. The last node is the
/// root.
fn tree_from_order(adj: &[BTreeSet<usize>], order: &[usize]) -> Vec<(BTreeSet<usize>, Option<usize>)> {
    let n = order.len();
    let mut position = vec![0usize; adj.len()];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let mut graph = adj.to_vec();
    let mut bags = Vec::with_capacity(n);
    for &v in order {
        let mut bag = eliminate(&mut graph, v);
        bag.insert(v);
        bags.push(bag);
    }
    let mut parent: Vec<Option<usize>> = bags
        .iter()
        .enumerate()
        .map(|(i, bag)| bag.iter().map(|&u| position[u]).filter(|&p| p != i).min())
        .collect();
    let root = n - 1;
    for (i, p) in parent.iter_mut().enumerate() {
        if p.is_none() && i != root {
            *p = Some(root);
        }
    }

    let mut removed = vec![false; n];
    for i in 0..n {
        let Some(p) = parent[i] else { continue };
        if bags[i].is_subset(&bags[p]) {
            removed[i] = true;
            for q in parent.iter_mut() {
                if *q == Some(i) {
                    *q = Some(p);
                }
            }
        }
    }
    let mut new_index = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if !removed[i] {
            new_index[i] = next;
            next += 1;
        }
    }
    (0..n)
        .filter(|&i| !removed[i])
        .map(|i| (std::mem::take(&mut bags[i]), parent[i].map(|p| new_index[p])))
        .collect()
}
