//! Counting answers through a decomposition of bounded width when each
//! S-component has few independent free variables.
//!
//! Per S-component `i` the query restricted to the component's closure is
//! materialized into bag relations along the induced decomposition. An
//! edge cover of the free variables `S_i` by bags is computed on the
//! (acyclic) bag hypergraph; each consistent combination of cover tuples
//! fixes `S_i`, and a Boolean semijoin pass decides whether the fixed
//! assignment extends. The
//! surviving assignments form a new atom over `S_i`. The quantified
//! variables then disappear: every bag meeting the core of component `i`
//! trades the core for `S_i`, guards trade core-touching atoms for the new
//! atom, and the resulting quantifier-free instance is counted along the
//! rebuilt tree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::decomposition::{blocks_join_tree, induced_decomposition, verify, Decomposition, DecompositionKind, Node};
use crate::error::{Error, Result};
use crate::hypergraph::{Edge, EdgeId, Hypergraph, SComponent, VertexSet};
use crate::query::VarId;
use crate::scalar::{Count, Weight};
use crate::starsize::{acyclic_is_and_cover, describe};

use super::acyclic::{atom_relations, BagInstance, Fixing};
use super::{CountMethod, CountResult, CountStats, QueryInstance, Relation, Value};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Bags {
    Guarded,
    Induced,
}

impl Bags {
    fn build<W: Weight>(self, h: &Hypergraph, atoms: &HashMap<EdgeId, Relation>, d: &Decomposition<W>, peak: &mut usize) -> Result<BagInstance> {
        match self {
            Bags::Guarded => BagInstance::guarded(h, atoms, d, peak),
            Bags::Induced => BagInstance::induced(h, atoms, d, peak),
        }
    }
}

/// Exact number of answers, along a generalized hypertree decomposition of
/// the query hypergraph.
pub fn count_cq_via_ghd<C: Count, W: Weight>(inst: &QueryInstance, d: &Decomposition<W>) -> Result<CountResult<C>> {
    let h = inst.s_hypergraph().hypergraph;
    let report = verify(&h, &d.clone().with_kind(DecompositionKind::Ghd))?;
    if !report.is_valid() {
        return Err(Error::DecompositionInvalid(describe(&h, &report.violations)));
    }
    run(inst, d, Bags::Guarded, CountMethod::Ghd)
}

/// Exact number of answers, along a fractional hypertree decomposition.
/// Bags are materialized as the solutions of the atoms restricted to the
/// bag.
pub fn count_cq_via_fractional<C: Count, W: Weight>(inst: &QueryInstance, d: &Decomposition<W>) -> Result<CountResult<C>> {
    let h = inst.s_hypergraph().hypergraph;
    let report = verify(&h, &d.clone().with_kind(DecompositionKind::Fractional))?;
    if !report.is_valid() {
        return Err(Error::DecompositionInvalid(describe(&h, &report.violations)));
    }
    run(inst, d, Bags::Induced, CountMethod::Fractional)
}

fn run<C: Count, W: Weight>(inst: &QueryInstance, d: &Decomposition<W>, bags: Bags, method: CountMethod) -> Result<CountResult<C>> {
    let sh = inst.s_hypergraph();
    let h = &sh.hypergraph;
    let atoms = atom_relations(inst);
    let components = sh.s_components();
    let mut stats = CountStats { components: components.len(), ..CountStats::default() };

    let mut projections: Vec<Option<Relation>> = Vec::with_capacity(components.len());
    for comp in &components {
        match eliminate(h, &atoms, d, comp, bags, &mut stats)? {
            Elimination::Unsatisfiable => {
                return Ok(CountResult { count: C::zero(), method, stats });
            }
            Elimination::Satisfiable => projections.push(None),
            Elimination::Projection(rel) => projections.push(Some(rel)),
        }
    }

    // the quantifier-free instance over the free variables
    let quantified = sh.quantified();
    let offset = h.num_edges();
    let mut edges: Vec<Edge> = h.edges().iter().filter(|e| e.vertices.is_disjoint(&quantified)).cloned().collect();
    let mut final_atoms: HashMap<EdgeId, Relation> = edges.iter().map(|e| (e.id, atoms[&e.id].clone())).collect();
    for (i, (comp, rel)) in components.iter().zip(&projections).enumerate() {
        if let Some(rel) = rel {
            edges.push(Edge { id: offset + i, vertices: comp.s_vertices.clone() });
            final_atoms.insert(offset + i, rel.clone());
        }
    }
    let reduced = h.with_parts(sh.s.clone(), edges);
    let rebuilt = rebuild(h, d, &components, &projections, offset);
    let report = verify(&reduced, &rebuilt)?;
    if !report.is_valid() {
        return Err(Error::Internal(format!("rebuilt decomposition is invalid: {}", describe(&reduced, &report.violations))));
    }

    let mut peak = 0;
    let mut last = bags.build(&reduced, &final_atoms, &rebuilt, &mut peak)?;
    let count = if last.reduce() { last.count(&mut peak) } else { C::zero() };
    stats.bag_sizes = last.sizes();
    stats.peak_intermediate = stats.peak_intermediate.max(peak);
    Ok(CountResult { count, method, stats })
}

enum Elimination {
    Unsatisfiable,
    /// Satisfiable with no free variables.
    Satisfiable,
    Projection(Relation),
}

/// The projection of the component's solutions onto `S_i`.
fn eliminate<W: Weight>(
    h: &Hypergraph,
    atoms: &HashMap<EdgeId, Relation>,
    d: &Decomposition<W>,
    comp: &SComponent,
    bags: Bags,
    stats: &mut CountStats,
) -> Result<Elimination> {
    let local_atoms: HashMap<EdgeId, Relation> =
        comp.induced.edges().iter().map(|e| (e.id, atoms[&e.id].project_onto(&e.vertices))).collect();
    let local_d = induced_decomposition(h, d, &comp.closure)?;
    let mut peak = 0;
    let mut inst = bags.build(&comp.induced, &local_atoms, &local_d, &mut peak)?;
    stats.peak_intermediate = stats.peak_intermediate.max(peak);
    if !inst.reduce() {
        return Ok(Elimination::Unsatisfiable);
    }
    let s_i = &comp.s_vertices;
    if s_i.is_empty() {
        return Ok(Elimination::Satisfiable);
    }

    let (blocks, jt) = blocks_join_tree(&comp.induced, &local_d);
    let (_, cover) = acyclic_is_and_cover(&blocks, &jt, Some(s_i))?;
    stats.cover_sizes.push(cover.len());
    let lists: Vec<Relation> = cover
        .iter()
        .map(|node| inst.rels[inst.tree.position[node]].project_onto(s_i))
        .collect();

    let schema: Vec<VarId> = s_i.iter().copied().collect();
    let fixing = Fixing::new(&inst, s_i);
    let mut rows = Vec::new();
    let mut binding: BTreeMap<VarId, Value> = BTreeMap::new();
    combine(&lists, 0, &mut binding, &mut |binding| {
        stats.combinations += 1;
        let values: Vec<Value> = binding.values().copied().collect();
        if fixing.satisfiable(&values) {
            rows.push(values);
        }
    });
    Ok(Elimination::Projection(Relation::new(schema, rows)))
}

/// Visits every consistent choice of one row per list, in mixed-radix
/// lexicographic order, skipping a prefix as soon as it disagrees.
fn combine(lists: &[Relation], i: usize, binding: &mut BTreeMap<VarId, Value>, visit: &mut dyn FnMut(&BTreeMap<VarId, Value>)) {
    let Some(list) = lists.get(i) else {
        visit(binding);
        return;
    };
    for row in list.rows() {
        let mut added = Vec::new();
        let mut consistent = true;
        for (&v, &x) in list.schema().iter().zip(row) {
            match binding.get(&v) {
                Some(&y) if y != x => {
                    consistent = false;
                    break;
                }
                Some(_) => {}
                None => {
                    binding.insert(v, x);
                    added.push(v);
                }
            }
        }
        if consistent {
            combine(lists, i + 1, binding, visit);
        }
        for v in added {
            binding.remove(&v);
        }
    }
}

/// The decomposition of the quantifier-free instance: bags replace each
/// core they meet by its `S_i`; guards (and weights) replace atoms touching
/// a core by the component's new atom `offset + i`, which gets weight 1
/// wherever the bag meets the core and otherwise the weight it replaces,
/// capped at 1.
fn rebuild<W: Weight>(
    h: &Hypergraph,
    d: &Decomposition<W>,
    components: &[SComponent],
    projections: &[Option<Relation>],
    offset: usize,
) -> Decomposition<W> {
    let touching = |e: EdgeId| -> Option<usize> {
        let vs = &h.edge(e).expect("verified").vertices;
        components.iter().position(|c| !c.core.is_disjoint(vs))
    };
    let nodes = d
        .nodes
        .iter()
        .map(|node| {
            let mut bag: VertexSet = BTreeSet::new();
            let mut guard = BTreeSet::new();
            let mut weights: BTreeMap<EdgeId, W> = BTreeMap::new();
            let mut replaced: BTreeMap<usize, W> = BTreeMap::new();
            for (i, comp) in components.iter().enumerate() {
                if !node.bag.is_disjoint(&comp.core) {
                    bag.extend(comp.s_vertices.iter().copied());
                    replaced.insert(i, W::one());
                }
            }
            bag.extend(node.bag.iter().copied().filter(|v| components.iter().all(|c| !c.core.contains(v))));
            for &e in &node.guard {
                match touching(e) {
                    None => {
                        guard.insert(e);
                    }
                    Some(i) => {
                        replaced.entry(i).or_insert_with(W::zero);
                    }
                }
            }
            for (&e, w) in &node.weights {
                match touching(e) {
                    None => {
                        weights.insert(e, w.clone());
                    }
                    Some(i) => {
                        let slot = replaced.entry(i).or_insert_with(W::zero);
                        *slot = slot.clone() + w.clone();
                    }
                }
            }
            for (i, w) in replaced {
                if projections[i].is_none() {
                    continue;
                }
                guard.insert(offset + i);
                if d.kind == DecompositionKind::Fractional {
                    let capped = if w > W::one() { W::one() } else { w };
                    if capped > W::zero() {
                        weights.insert(offset + i, capped);
                    }
                }
            }
            Node { id: node.id, parent: node.parent, guard, bag, weights }
        })
        .collect();
    Decomposition::new(d.kind, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::ghd_search;
    use crate::format::{parse_facts, parse_query};
    use crate::{ExactCount, Rational};

    fn instance(q: &str, facts: &str) -> QueryInstance {
        QueryInstance::new(parse_query(q).unwrap(), parse_facts(facts).unwrap()).unwrap()
    }

    fn both(inst: &QueryInstance) -> (ExactCount, ExactCount) {
        let h = inst.s_hypergraph().hypergraph;
        let d: Decomposition<Rational> = (1..=3).find_map(|k| ghd_search(&h, k).unwrap()).unwrap();
        let g: CountResult = count_cq_via_ghd(inst, &d).unwrap();
        let f: CountResult = count_cq_via_fractional(inst, &d.to_fractional()).unwrap();
        (g.count, f.count)
    }

    #[test]
    fn shared_quantified_variable() {
        let inst = instance("ans(y1,y2) :- E1(y1,z), E2(y2,z).", "E1(a,1). E1(b,1). E2(a,1). E2(c,2).");
        assert_eq!(both(&inst), (2u32.into(), 2u32.into()));
    }

    #[test]
    fn boolean_degeneration() {
        let yes = instance("ans() :- R(x,y), R(y,x).", "R(a,b). R(b,a).");
        assert_eq!(both(&yes), (1u32.into(), 1u32.into()));
        let no = instance("ans() :- R(x,y), R(y,x).", "R(a,b). R(b,c).");
        assert_eq!(both(&no), (0u32.into(), 0u32.into()));
    }

    #[test]
    fn triangle_half_weights() {
        let inst = instance("ans(x,y,z) :- R(x,y), S(y,z), T(z,x).", "R(a,b). R(b,c). S(b,c). S(c,a). T(c,a). T(a,b).");
        let h = inst.s_hypergraph().hypergraph;
        let half = Rational::new(1.into(), 2.into());
        let mut d: Decomposition = Decomposition::single_node(&h, DecompositionKind::Fractional);
        for w in d.nodes[0].weights.values_mut() {
            *w = half.clone();
        }
        let r: CountResult = count_cq_via_fractional(&inst, &d).unwrap();
        assert_eq!(r.count, ExactCount::from(2u32));
    }

    #[test]
    fn empty_relation_gives_zero() {
        let mut s = parse_facts("R(a,b).").unwrap();
        s.declare("S", 2).unwrap();
        let inst = QueryInstance::new(parse_query("ans(x) :- R(x,y), S(y,z).").unwrap(), s).unwrap();
        assert_eq!(both(&inst), (0u32.into(), 0u32.into()));
    }

    /// Projection onto `S_i` of the assignments of the closure that satisfy
    /// the query restricted to the closure, by enumeration.
    fn naive_projection(inst: &QueryInstance, comp: &SComponent) -> BTreeSet<Vec<Value>> {
        let vars: Vec<VarId> = comp.closure.iter().copied().collect();
        let d = inst.structure.domain_size() as u64;
        let atoms: Vec<&crate::query::Atom> = inst.query.atoms.iter().filter(|a| !a.var_set().is_disjoint(&comp.closure)).collect();
        let mut out = BTreeSet::new();
        let mut value = vec![0 as Value; inst.query.vars.len()];
        for code in 0..d.pow(vars.len() as u32) {
            let mut c = code;
            for &v in &vars {
                value[v] = (c % d) as Value;
                c /= d;
            }
            let ok = atoms.iter().all(|a| {
                inst.structure.table(&a.predicate).unwrap().rows.iter().any(|row| {
                    let consistent = a.args.iter().zip(row).all(|(&v, &x)| a.args.iter().zip(row).all(|(&w, &y)| v != w || x == y));
                    consistent && a.args.iter().zip(row).all(|(&v, &x)| !comp.closure.contains(&v) || value[v] == x)
                })
            });
            if ok {
                out.insert(comp.s_vertices.iter().map(|&v| value[v]).collect());
            }
        }
        out
    }

    #[test]
    fn eliminated_components_are_solution_equivalent() {
        use crate::generators::{gen_random_instance, RandomInstanceParams};
        for seed in 0..60 {
            let params = RandomInstanceParams { vars: 6, atoms: 4, domain: 3, seed, ..RandomInstanceParams::default() };
            let inst = gen_random_instance(&params);
            let sh = inst.s_hypergraph();
            let d: Decomposition<Rational> = (1..=4).find_map(|k| ghd_search(&sh.hypergraph, k).unwrap()).unwrap();
            let atoms = atom_relations(&inst);
            for comp in sh.s_components() {
                let expected = naive_projection(&inst, &comp);
                for bags in [Bags::Guarded, Bags::Induced] {
                    let dd = if bags == Bags::Guarded { d.clone() } else { d.to_fractional() };
                    let got: BTreeSet<Vec<Value>> = match eliminate(&sh.hypergraph, &atoms, &dd, &comp, bags, &mut CountStats::default()).unwrap() {
                        Elimination::Unsatisfiable => BTreeSet::new(),
                        Elimination::Satisfiable => [Vec::new()].into(),
                        Elimination::Projection(rel) => rel.rows().iter().cloned().collect(),
                    };
                    assert_eq!(got, expected, "seed {seed}");
                }
            }
        }
    }

    #[test]
    fn example_cover_size() {
        let inst = instance("ans(x,y) :- R(x,a), A(a,b), B(b,c), C(c,a), T(c,y).", "R(1,p). A(p,q). B(q,r). C(r,p). T(r,2). T(r,3).");
        let h = inst.s_hypergraph().hypergraph;
        let d: Decomposition = ghd_search(&h, 2).unwrap().unwrap();
        let r: CountResult = count_cq_via_ghd(&inst, &d).unwrap();
        assert_eq!(r.count, ExactCount::from(2u32));
        assert_eq!(r.stats.components, 1);
        assert_eq!(r.stats.cover_sizes, [2]);
    }
}
