use std::collections::{BTreeMap, BTreeSet};

use crate::decomposition::{verify, Decomposition};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexId, VertexSet};
use crate::scalar::Weight;

use super::{candidates, describe, ISWitness, Method};

/// Best subtree set for each bag-local choice `σ`.
type Table = BTreeMap<BTreeSet<VertexId>, VertexSet>;

/// Better = larger, then lexicographically smaller.
fn better(a: &VertexSet, b: &VertexSet) -> bool {
    a.len() > b.len() || (a.len() == b.len() && a < b)
}

/// Exact maximum independent set by dynamic programming over any valid
/// decomposition: for every node `b` and every independent `σ ⊆ χ_b` the
/// table keeps the best independent set of the subtree meeting `χ_b`
/// exactly in `σ`; children are combined on agreement over shared bag
/// vertices.
pub fn max_is_ghd_dp<W: Weight>(h: &Hypergraph, d: &Decomposition<W>, restrict_to: Option<&VertexSet>) -> Result<ISWitness> {
    let report = verify(h, d)?;
    if !report.is_valid() {
        return Err(Error::DecompositionInvalid(describe(h, &report.violations)));
    }
    let cands = candidates(h, restrict_to)?;
    let index = d.index()?;
    let n = d.nodes.len();
    let bag_cands: Vec<Vec<VertexId>> = d.nodes.iter().map(|node| node.bag.intersection(&cands).copied().collect()).collect();

    let mut tables: Vec<Table> = vec![Table::new(); n];
    for t in index.postorder() {
        let bag = &d.nodes[t].bag;
        // per child: best entry for each restriction of σ to the shared bag
        let child_best: Vec<(usize, BTreeMap<BTreeSet<VertexId>, VertexSet>)> = index.children[t]
            .iter()
            .map(|&c| {
                let mut best: BTreeMap<BTreeSet<VertexId>, VertexSet> = BTreeMap::new();
                for (sigma, set) in &tables[c] {
                    let key: BTreeSet<VertexId> = sigma.intersection(bag).copied().collect();
                    match best.get(&key) {
                        Some(current) if !better(set, current) => {}
                        _ => {
                            best.insert(key, set.clone());
                        }
                    }
                }
                (c, best)
            })
            .collect();

        let mut table = Table::new();
        for sigma in independent_subsets(h, &bag_cands[t]) {
            let mut set: VertexSet = sigma.clone();
            let mut feasible = true;
            for (c, best) in &child_best {
                let key: BTreeSet<VertexId> = sigma.intersection(&d.nodes[*c].bag).copied().collect();
                match best.get(&key) {
                    Some(part) => set.extend(part.iter().copied()),
                    None => {
                        feasible = false;
                        break;
                    }
                }
            }
            if feasible {
                table.insert(sigma, set);
            }
        }
        tables[t] = table;
        for &c in &index.children[t] {
            tables[c] = Table::new();
        }
    }

    let mut best = VertexSet::new();
    for set in tables[index.root].values() {
        if better(set, &best) {
            best = set.clone();
        }
    }
    let bagged: VertexSet = d.nodes.iter().flat_map(|node| node.bag.iter().copied()).collect();
    best.extend(cands.difference(&bagged).copied());
    ISWitness::checked(h, best, Method::GhdDp, None)
}

/// All independent subsets of `vs` (ascending ids), by backtracking.
pub(crate) fn independent_subsets(h: &Hypergraph, vs: &[VertexId]) -> Vec<BTreeSet<VertexId>> {
    let n = vs.len();
    let mut conflicts: Vec<Vec<bool>> = vec![vec![false; n]; n];
    for e in h.edges() {
        let inside: Vec<usize> = (0..n).filter(|&i| e.vertices.contains(&vs[i])).collect();
        for &i in &inside {
            for &j in &inside {
                conflicts[i][j] |= i != j;
            }
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn rec(i: usize, conflicts: &[Vec<bool>], vs: &[VertexId], chosen: &mut Vec<usize>, out: &mut Vec<BTreeSet<VertexId>>) {
        if i == vs.len() {
            out.push(chosen.iter().map(|&c| vs[c]).collect());
            return;
        }
        rec(i + 1, conflicts, vs, chosen, out);
        if chosen.iter().all(|&c| !conflicts[c][i]) {
            chosen.push(i);
            rec(i + 1, conflicts, vs, chosen, out);
            chosen.pop();
        }
    }
    rec(0, &conflicts, vs, &mut chosen, &mut out);
    out
}
