//! Hingetree decompositions by repeated splitting of guard sets.
//!
//! Every node starts as one guard set. A node `F` splits along `e ∈ F` when
//! the edges of `F − {e}` fall into two or more classes that are connected
//! only through vertices outside `e`; each class plus `e` becomes a node.
//! Neighbours stay attached to the part holding the edge they share with
//! `F`, which keeps every pairwise bag intersection inside one guard edge.
//! At the fixpoint, nodes guarded by exactly two edges are split into two
//! single-edge nodes, so acyclic inputs come out with width one.

use std::collections::BTreeSet;

use crate::hypergraph::{EdgeId, Hypergraph, UnionFind, VertexSet};
use crate::scalar::Weight;

use super::{root_tree, Decomposition, DecompositionKind};

struct Link {
    a: usize,
    b: usize,
    shared: Option<EdgeId>,
}

/// Classes of `F − {e}` under "share a vertex outside `e`", ordered by
/// smallest edge id.
fn split_classes(h: &Hypergraph, guard: &BTreeSet<EdgeId>, e: EdgeId) -> Vec<BTreeSet<EdgeId>> {
    let sep = &h.edge(e).expect("guard edge exists").vertices;
    let rest: Vec<EdgeId> = guard.iter().copied().filter(|&f| f != e).collect();
    let outside: Vec<VertexSet> =
        rest.iter().map(|&f| h.edge(f).expect("guard edge exists").vertices.difference(sep).copied().collect()).collect();
    let mut uf = UnionFind::new(rest.len());
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            if !outside[i].is_disjoint(&outside[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut classes: Vec<BTreeSet<EdgeId>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; rest.len()];
    for i in 0..rest.len() {
        let r = uf.find(i);
        match root_of[r] {
            Some(c) => {
                classes[c].insert(rest[i]);
            }
            None => {
                root_of[r] = Some(classes.len());
                classes.push([rest[i]].into_iter().collect());
            }
        }
    }
    classes
}

/// Computes a hingetree decomposition of `h` (kind [`DecompositionKind::Hinge`]).
pub fn hinge_decompose<W: Weight>(h: &Hypergraph) -> Decomposition<W> {
    let mut guards: Vec<BTreeSet<EdgeId>> = vec![h.edge_ids().collect()];
    let mut links: Vec<Link> = Vec::new();

    'refine: loop {
        for p in 0..guards.len() {
            if guards[p].len() < 2 {
                continue;
            }
            let edges: Vec<EdgeId> = guards[p].iter().copied().collect();
            for e in edges {
                let classes = split_classes(h, &guards[p], e);
                if classes.len() < 2 {
                    continue;
                }
                let mut positions = vec![p];
                for _ in 1..classes.len() {
                    positions.push(guards.len());
                    guards.push(BTreeSet::new());
                }
                for (class, &pos) in classes.iter().zip(&positions) {
                    let mut g = class.clone();
                    g.insert(e);
                    guards[pos] = g;
                }
                for link in &mut links {
                    let Some(g) = link.shared else { continue };
                    let target = classes.iter().position(|c| c.contains(&g)).map_or(p, |c| positions[c]);
                    if link.a == p {
                        link.a = target;
                    }
                    if link.b == p {
                        link.b = target;
                    }
                }
                for &pos in &positions[1..] {
                    links.push(Link { a: p, b: pos, shared: Some(e) });
                }
                continue 'refine;
            }
        }
        break;
    }

    for p in 0..guards.len() {
        if guards[p].len() != 2 {
            continue;
        }
        let (e, f) = {
            let mut it = guards[p].iter().copied();
            (it.next().expect("two edges"), it.next().expect("two edges"))
        };
        let q = guards.len();
        guards[p] = [e].into_iter().collect();
        guards.push([f].into_iter().collect());
        for link in &mut links {
            if link.shared == Some(f) {
                if link.a == p {
                    link.a = q;
                }
                if link.b == p {
                    link.b = q;
                }
            }
        }
        links.push(Link { a: p, b: q, shared: None });
    }

    let blocks = guards
        .into_iter()
        .map(|g| {
            let bag = g.iter().flat_map(|&e| h.edge(e).expect("guard edge exists").vertices.iter().copied()).collect();
            (g, bag)
        })
        .collect();
    let tree_edges: Vec<(usize, usize)> = links.iter().map(|l| (l.a, l.b)).collect();
    root_tree(DecompositionKind::Hinge, blocks, &tree_edges, 0)
}
