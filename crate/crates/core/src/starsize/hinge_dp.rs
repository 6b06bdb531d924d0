//! Maximum independent sets over hingetree decompositions.
//!
//! In a hingetree decomposition two vertices of a bag are adjacent exactly
//! when some guard edge of that bag contains both, and each separator
//! `χ_b ∩ χ_c` lies inside one guard edge, so an independent set meets it
//! at most once. A child therefore only reports `J_∅` (its best set
//! avoiding the separator) and `J_v` for each separator vertex `v` (its
//! best set through `v`). At a node, vertices with the same guard-edge
//! signature are interchangeable up to what they gain from the children;
//! the best member of each class is kept and the node picks a family of
//! classes with pairwise disjoint signatures.

use std::collections::{BTreeMap, HashMap};

use crate::decomposition::{verify, Decomposition, DecompositionKind};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::scalar::Weight;

use super::{candidates, describe, ISWitness, Method};

/// `None` is `J_∅`; `Some(v)` is the best set through `v`.
type Reports = HashMap<Option<VertexId>, VertexSet>;

pub fn max_is_hinge_fpt<W: Weight>(h: &Hypergraph, d: &Decomposition<W>, restrict_to: Option<&VertexSet>) -> Result<ISWitness> {
    let report = verify(h, &d.clone().with_kind(DecompositionKind::Hinge))?;
    if !report.is_valid() {
        return Err(Error::NotHinge(describe(h, &report.violations)));
    }
    let cands = candidates(h, restrict_to)?;
    let index = d.index()?;
    let n = d.nodes.len();
    let mut reports: Vec<Reports> = vec![Reports::new(); n];

    for t in index.postorder() {
        let node = &d.nodes[t];
        let guard: Vec<&VertexSet> = node.guard.iter().map(|&e| &h.edge(e).expect("verified guard").vertices).collect();
        if guard.len() > 64 {
            return Err(Error::TooLarge(format!("guard of node {} has more than 64 edges", node.id)));
        }
        let children: Vec<(usize, VertexSet)> = index.children[t]
            .iter()
            .map(|&c| (c, node.bag.intersection(&d.nodes[c].bag).copied().collect()))
            .collect();

        let mut members: Vec<Member> = Vec::new();
        for &u in node.bag.intersection(&cands) {
            let signature = guard.iter().enumerate().filter(|(_, e)| e.contains(&u)).fold(0u64, |m, (i, _)| m | (1 << i));
            let mut gain = 1i64;
            for (c, sep) in &children {
                if sep.contains(&u) {
                    let r = &reports[*c];
                    gain += r[&Some(u)].len() as i64 - 1 - r[&None].len() as i64;
                }
            }
            members.push(Member { vertex: u, signature, gain });
        }

        let parent_sep: VertexSet = match index.parent[t] {
            Some(p) => node.bag.intersection(&d.nodes[p].bag).copied().collect(),
            None => VertexSet::new(),
        };
        let assemble = |sigma: &[VertexId]| -> VertexSet {
            let mut set: VertexSet = sigma.iter().copied().collect();
            for (c, sep) in &children {
                let through = sigma.iter().copied().find(|v| sep.contains(v));
                set.extend(reports[*c][&through].iter().copied());
            }
            set
        };

        let mut mine = Reports::new();
        let avoiding: Vec<Member> = members.iter().filter(|m| !parent_sep.contains(&m.vertex)).cloned().collect();
        mine.insert(None, assemble(&best_packing(&avoiding, None)));
        for m in members.iter().filter(|m| parent_sep.contains(&m.vertex)) {
            let others: Vec<Member> = avoiding.iter().filter(|o| o.signature & m.signature == 0).cloned().collect();
            mine.insert(Some(m.vertex), assemble(&best_packing(&others, Some(m.vertex))));
        }
        reports[t] = mine;
        for &c in &index.children[t] {
            reports[c] = Reports::new();
        }
    }

    let mut best = reports[index.root].remove(&None).unwrap_or_default();
    let bagged: VertexSet = d.nodes.iter().flat_map(|node| node.bag.iter().copied()).collect();
    best.extend(cands.difference(&bagged).copied());
    ISWitness::checked(h, best, Method::HingeFpt, None)
}

#[derive(Clone, Debug)]
struct Member {
    vertex: VertexId,
    signature: u64,
    gain: i64,
}

/// Picks the best member of each signature class, then the family of
/// classes with pairwise disjoint signatures maximising the total gain.
/// `forced` is added on top of the chosen family.
fn best_packing(members: &[Member], forced: Option<VertexId>) -> Vec<VertexId> {
    let mut classes: BTreeMap<u64, &Member> = BTreeMap::new();
    for m in members {
        match classes.get(&m.signature) {
            Some(current) if current.gain >= m.gain => {}
            _ => {
                classes.insert(m.signature, m);
            }
        }
    }
    let useful: Vec<&Member> = classes.into_values().filter(|m| m.gain > 0).collect();

    struct Search<'a> {
        classes: &'a [&'a Member],
        best: Vec<usize>,
        best_gain: i64,
    }
    impl Search<'_> {
        fn run(&mut self, i: usize, used: u64, gain: i64, chosen: &mut Vec<usize>) {
            let bound: i64 = self.classes[i..].iter().filter(|m| m.signature & used == 0).map(|m| m.gain).sum();
            if gain + bound <= self.best_gain {
                return;
            }
            if i == self.classes.len() {
                self.best_gain = gain;
                self.best = chosen.clone();
                return;
            }
            let m = self.classes[i];
            if m.signature & used == 0 {
                chosen.push(i);
                self.run(i + 1, used | m.signature, gain + m.gain, chosen);
                chosen.pop();
            }
            self.run(i + 1, used, gain, chosen);
        }
    }
    let mut search = Search { classes: &useful, best: Vec::new(), best_gain: 0 };
    search.run(0, 0, 0, &mut Vec::new());

    let mut out: Vec<VertexId> = search.best.iter().map(|&i| useful[i].vertex).collect();
    out.extend(forced);
    out.sort_unstable();
    out
}
