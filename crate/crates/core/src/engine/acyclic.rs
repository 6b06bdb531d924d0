//! Bag materialization and evaluation over a decomposition tree.

use std::borrow::Cow;
use std::collections::{BTreeSet, HashMap};

use crate::decomposition::{verify, Decomposition, DecompositionKind, TreeIndex};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph};
use crate::query::VarId;
use crate::scalar::{Count, Weight};
use crate::starsize::describe;

use super::{CountMethod, CountResult, CountStats, QueryInstance, Relation, Row, Value};

/// One relation per decomposition node, over the node's bag.
#[derive(Clone, Debug)]
pub(crate) struct BagInstance {
    pub(crate) tree: TreeIndex,
    pub(crate) rels: Vec<Relation>,
}

/// Joins relations, each time taking the one sharing the most variables
/// with what has been joined so far (smaller first on ties).
pub(crate) fn join_all(mut rels: Vec<Relation>, peak: &mut usize) -> Relation {
    let Some(first) = (0..rels.len()).min_by_key(|&i| rels[i].len()) else {
        return Relation::unit();
    };
    let mut acc = rels.swap_remove(first);
    while !rels.is_empty() && !acc.is_empty() {
        let vars: BTreeSet<VarId> = acc.schema().iter().copied().collect();
        let next = (0..rels.len())
            .max_by_key(|&i| {
                let shared = rels[i].schema().iter().filter(|v| vars.contains(v)).count();
                (shared, std::cmp::Reverse(rels[i].len()))
            })
            .expect("nonempty");
        acc = acc.natural_join(&rels.swap_remove(next));
        *peak = (*peak).max(acc.len());
    }
    if acc.is_empty() {
        let mut schema = acc.schema().to_vec();
        for r in &rels {
            schema.extend(r.schema().iter().copied().filter(|v| !schema.contains(v)).collect::<Vec<_>>());
        }
        return Relation::empty(schema);
    }
    acc
}

fn sorted(vars: impl IntoIterator<Item = VarId>) -> Vec<VarId> {
    let set: BTreeSet<VarId> = vars.into_iter().collect();
    set.into_iter().collect()
}

impl BagInstance {
    /// `π_χ(⋈ guard atoms)`, filtered by every atom inside the guarded
    /// variables. `atoms` is indexed by edge id.
    pub(crate) fn guarded<W: Weight>(h: &Hypergraph, atoms: &HashMap<EdgeId, Relation>, d: &Decomposition<W>, peak: &mut usize) -> Result<Self> {
        let tree = d.index()?;
        let mut rels = Vec::with_capacity(d.nodes.len());
        for node in &d.nodes {
            let guards: Vec<Relation> = node.guard.iter().map(|e| atoms[e].clone()).collect();
            let mut rel = join_all(guards, peak);
            let covered: BTreeSet<VarId> = rel.schema().iter().copied().collect();
            for e in h.edges() {
                if !node.guard.contains(&e.id) && e.vertices.is_subset(&covered) {
                    rel = rel.semijoin(&atoms[&e.id]);
                }
            }
            rels.push(rel.project(&sorted(node.bag.iter().copied()))?);
        }
        Ok(BagInstance { tree, rels })
    }

    /// Solutions of the sub-instance induced by each bag: every atom meeting
    /// the bag, projected onto the bag, joined.
    pub(crate) fn induced<W: Weight>(h: &Hypergraph, atoms: &HashMap<EdgeId, Relation>, d: &Decomposition<W>, peak: &mut usize) -> Result<Self> {
        let tree = d.index()?;
        let mut rels = Vec::with_capacity(d.nodes.len());
        for node in &d.nodes {
            let parts: Vec<Relation> = h
                .edges()
                .iter()
                .filter(|e| !e.vertices.is_disjoint(&node.bag))
                .map(|e| atoms[&e.id].project_onto(&node.bag))
                .collect();
            let rel = join_all(parts, peak);
            rels.push(rel.project(&sorted(node.bag.iter().copied()))?);
        }
        Ok(BagInstance { tree, rels })
    }

    /// Bottom-up then top-down semijoins. Returns whether any solution
    /// exists.
    pub(crate) fn reduce(&mut self) -> bool {
        let mut rels: Vec<Cow<'_, Relation>> = std::mem::take(&mut self.rels).into_iter().map(Cow::Owned).collect();
        upward(&self.tree, &mut rels);
        for &t in &self.tree.preorder {
            if let Some(p) = self.tree.parent[t] {
                let reduced = rels[t].semijoin(&rels[p]);
                rels[t] = Cow::Owned(reduced);
            }
        }
        self.rels = rels.into_iter().map(Cow::into_owned).collect();
        !self.rels[self.tree.root].is_empty()
    }

    /// Number of assignments to all bag variables that agree with some row
    /// of every bag. Each row stores how many ways it extends into its
    /// subtree; children are grouped on the variables shared with the
    /// parent, so no join is ever formed.
    pub(crate) fn count<C: Count>(&self, peak: &mut usize) -> C {
        let n = self.rels.len();
        let mut counts: Vec<Vec<C>> = vec![Vec::new(); n];
        for t in self.tree.postorder() {
            let rel = &self.rels[t];
            let mut mine: Vec<C> = vec![C::one(); rel.len()];
            for &c in &self.tree.children[t] {
                let child = &self.rels[c];
                let shared: Vec<VarId> = child.schema().iter().copied().filter(|&v| rel.position(v).is_some()).collect();
                let child_pos: Vec<usize> = shared.iter().map(|&v| child.position(v).expect("shared")).collect();
                let my_pos: Vec<usize> = shared.iter().map(|&v| rel.position(v).expect("shared")).collect();
                let mut grouped: HashMap<Vec<Value>, C> = HashMap::new();
                for (row, k) in child.rows().iter().zip(std::mem::take(&mut counts[c])) {
                    let key: Vec<_> = child_pos.iter().map(|&i| row[i]).collect();
                    let slot = grouped.entry(key).or_insert_with(C::zero);
                    *slot = slot.clone() + k;
                }
                *peak = (*peak).max(grouped.len());
                for (row, m) in rel.rows().iter().zip(mine.iter_mut()) {
                    let key: Vec<_> = my_pos.iter().map(|&i| row[i]).collect();
                    *m = match grouped.get(&key) {
                        Some(k) => m.clone() * k.clone(),
                        None => C::zero(),
                    };
                }
            }
            counts[t] = mine;
        }
        counts[self.tree.root].iter().cloned().fold(C::zero(), |a, b| a + b)
    }

    pub(crate) fn sizes(&self) -> Vec<usize> {
        self.rels.iter().map(Relation::len).collect()
    }
}

/// Bottom-up semijoins; the root is nonempty iff a solution exists.
fn upward(tree: &TreeIndex, rels: &mut [Cow<'_, Relation>]) -> bool {
    for t in tree.postorder() {
        if let Some(p) = tree.parent[t] {
            let reduced = rels[p].semijoin(&rels[t]);
            rels[p] = Cow::Owned(reduced);
        }
    }
    !rels[tree.root].is_empty()
}

/// A bag instance with some variables about to be fixed: the rows of each
/// bag mentioning them are grouped by their values, so fixing an
/// assignment touches only the matching rows.
pub(crate) struct Fixing<'a> {
    base: &'a BagInstance,
    width: usize,
    groups: Vec<Option<(Vec<usize>, HashMap<Vec<Value>, Vec<Row>>)>>,
}

impl<'a> Fixing<'a> {
    pub(crate) fn new(base: &'a BagInstance, vars: &BTreeSet<VarId>) -> Self {
        let groups = base
            .rels
            .iter()
            .map(|rel| {
                let local: Vec<(usize, usize)> =
                    vars.iter().enumerate().filter_map(|(k, &v)| rel.position(v).map(|i| (k, i))).collect();
                (!local.is_empty()).then(|| {
                    let mut map: HashMap<Vec<Value>, Vec<Row>> = HashMap::new();
                    for row in rel.rows() {
                        map.entry(local.iter().map(|&(_, i)| row[i]).collect()).or_default().push(row.clone());
                    }
                    (local.iter().map(|&(k, _)| k).collect(), map)
                })
            })
            .collect();
        Fixing { base, width: vars.len(), groups }
    }

    /// Whether some solution agrees with `values`, one per fixed variable
    /// in increasing variable order.
    pub(crate) fn satisfiable(&self, values: &[Value]) -> bool {
        debug_assert_eq!(values.len(), self.width);
        let mut rels: Vec<Cow<'_, Relation>> = Vec::with_capacity(self.groups.len());
        for (rel, group) in self.base.rels.iter().zip(&self.groups) {
            match group {
                None => rels.push(Cow::Borrowed(rel)),
                Some((slots, map)) => {
                    let key: Vec<Value> = slots.iter().map(|&k| values[k]).collect();
                    match map.get(&key) {
                        Some(rows) => rels.push(Cow::Owned(Relation::new(rel.schema().to_vec(), rows.clone()))),
                        None => return false,
                    }
                }
            }
        }
        upward(&self.base.tree, &mut rels)
    }
}

pub(crate) fn atom_relations(inst: &QueryInstance) -> HashMap<EdgeId, Relation> {
    (0..inst.query.atoms.len()).map(|i| (i, inst.atom_relation(i))).collect()
}

fn check_join_tree<W: Weight>(h: &Hypergraph, jt: &Decomposition<W>) -> Result<()> {
    if jt.nodes.iter().any(|n| n.guard.len() > 1) {
        return Err(Error::WidthNotOne);
    }
    let report = verify(h, &jt.clone().with_kind(DecompositionKind::Ghd))?;
    if !report.is_valid() {
        return Err(Error::DecompositionInvalid(describe(h, &report.violations)));
    }
    Ok(())
}

/// Whether the query has an answer, by semijoin reduction along a join
/// tree.
pub fn boolean_acq<W: Weight>(inst: &QueryInstance, jt: &Decomposition<W>) -> Result<bool> {
    let h = inst.s_hypergraph().hypergraph;
    check_join_tree(&h, jt)?;
    let mut bags = BagInstance::guarded(&h, &atom_relations(inst), jt, &mut 0)?;
    Ok(bags.reduce())
}

/// Answers of a quantifier-free query along a join tree.
pub fn count_acyclic_qf<C: Count, W: Weight>(inst: &QueryInstance, jt: &Decomposition<W>) -> Result<CountResult<C>> {
    if !inst.query.is_quantifier_free() {
        return Err(Error::NotQuantifierFree);
    }
    let h = inst.s_hypergraph().hypergraph;
    check_join_tree(&h, jt)?;
    let mut peak = 0;
    let mut bags = BagInstance::guarded(&h, &atom_relations(inst), jt, &mut peak)?;
    let count = if bags.reduce() { bags.count(&mut peak) } else { C::zero() };
    let stats = CountStats { components: 0, bag_sizes: bags.sizes(), peak_intermediate: peak, ..CountStats::default() };
    Ok(CountResult { count, method: CountMethod::Acyclic, stats })
}
