use std::collections::{BTreeSet, HashMap};

use crate::decomposition::{verify, Decomposition, DecompositionKind};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, VertexId, VertexSet};
use crate::scalar::Weight;

use super::{candidates, describe, ISWitness, Method};

/// Maximum independent set and minimum edge cover of the candidates of an
/// acyclic hypergraph, which have equal size.
///
/// Nodes are visited bottom-up. At a node that is the topmost occurrence
/// of some uncovered candidate, the lowest such candidate joins the set and
/// the node's guard edge joins the cover; the edge covers the whole bag.
pub fn acyclic_is_and_cover<W: Weight>(
    h: &Hypergraph,
    jt: &Decomposition<W>,
    restrict_to: Option<&VertexSet>,
) -> Result<(ISWitness, BTreeSet<EdgeId>)> {
    if jt.nodes.iter().any(|n| n.guard.len() > 1) {
        return Err(Error::WidthNotOne);
    }
    let report = verify(h, &jt.clone().with_kind(DecompositionKind::Ghd))?;
    if !report.is_valid() {
        return Err(Error::DecompositionInvalid(describe(h, &report.violations)));
    }
    let cands = candidates(h, restrict_to)?;
    if let Some(&v) = cands.intersection(&h.isolated_vertices()).next() {
        return Err(Error::InvalidInput(format!("candidate `{}` lies in no edge", h.name(v))));
    }

    let index = jt.index()?;
    let mut top: HashMap<VertexId, usize> = HashMap::new();
    for &i in &index.preorder {
        for &v in jt.nodes[i].bag.intersection(&cands) {
            top.entry(v).or_insert(i);
        }
    }

    let mut covered = VertexSet::new();
    let mut set = VertexSet::new();
    let mut cover = BTreeSet::new();
    for i in index.postorder() {
        let node = &jt.nodes[i];
        let pick = node.bag.iter().find(|v| top.get(v) == Some(&i) && !covered.contains(v));
        if let Some(&u) = pick {
            let &e = node.guard.iter().next().ok_or_else(|| Error::Internal("nonempty bag without guard".into()))?;
            set.insert(u);
            cover.insert(e);
            let edge = &h.edge(e).expect("verified guard").vertices;
            covered.extend(edge.intersection(&cands).copied());
        }
    }
    if !cands.is_subset(&covered) || set.len() != cover.len() {
        return Err(Error::Internal("edge cover duality failed".into()));
    }
    Ok((ISWitness::checked(h, set, Method::Acyclic, None)?, cover))
}
