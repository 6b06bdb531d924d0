use std::collections::BTreeSet;

use cqstar::decomposition::{ghd_search, gyo_join_tree};
use cqstar::engine::{count_acyclic_qf, count_brute, count_cq_via_fractional, count_cq_via_ghd, enumerate_is, CountResult, Value};
use cqstar::generators::{gen_clique_star_instance, gen_random_acyclic, gen_random_instance, RandomHypergraphParams, RandomInstanceParams, SimpleGraph};
use cqstar::query::{Atom, Query};
use cqstar::{Decomposition, ExactCount, QueryInstance, Structure};
use num_traits::ToPrimitive;
use proptest::prelude::*;

/// Distinct free-variable projections of all full assignments, straight
/// from the stored tables.
fn naive_count(inst: &QueryInstance) -> usize {
    let q = &inst.query;
    let n = q.vars.len();
    let d = inst.structure.domain_size() as u64;
    let total = d.pow(n as u32);
    let mut answers: BTreeSet<Vec<Value>> = BTreeSet::new();
    let mut assignment = vec![0 as Value; n];
    for code in 0..total {
        let mut c = code;
        for slot in assignment.iter_mut() {
            *slot = (c % d) as Value;
            c /= d;
        }
        let ok = q.atoms.iter().all(|a| {
            let row: Vec<Value> = a.args.iter().map(|&v| assignment[v]).collect();
            inst.structure.table(&a.predicate).unwrap().rows.contains(&row)
        });
        if ok {
            answers.insert(q.free.iter().map(|&v| assignment[v]).collect());
        }
    }
    if n == 0 && q.atoms.iter().all(|a| inst.structure.table(&a.predicate).unwrap().rows.contains(&Vec::new())) {
        answers.insert(Vec::new());
    }
    answers.len()
}

fn some_ghd(inst: &QueryInstance) -> Decomposition {
    let h = inst.s_hypergraph().hypergraph;
    (1..=6).find_map(|k| ghd_search(&h, k).unwrap()).expect("small hypergraphs have a GHD")
}

fn small(n: u64) -> ExactCount {
    ExactCount::from(n)
}

fn instance_params() -> impl Strategy<Value = RandomInstanceParams> {
    (1usize..=8, 1usize..=6, 1usize..=3, 1usize..=4, 0.2f64..0.9, 0.0f64..1.0, any::<u64>()).prop_map(
        |(vars, atoms, max_arity, domain, density, free_probability, seed)| RandomInstanceParams {
            vars,
            atoms,
            max_arity,
            domain,
            density,
            free_probability,
            seed,
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn counting_methods_agree(p in instance_params()) {
        let inst = gen_random_instance(&p);
        let expected = small(naive_count(&inst) as u64);
        let d = some_ghd(&inst);
        let ghd: CountResult = count_cq_via_ghd(&inst, &d).unwrap();
        let frac: CountResult = count_cq_via_fractional(&inst, &d.to_fractional()).unwrap();
        let brute: CountResult = count_brute(&inst).unwrap();
        prop_assert_eq!(&ghd.count, &expected);
        prop_assert_eq!(&frac.count, &expected);
        prop_assert_eq!(&brute.count, &expected);
    }

    #[test]
    fn invariant_under_atom_permutation_and_renaming(p in instance_params(), shift in 0usize..6) {
        let inst = gen_random_instance(&p);
        let q = &inst.query;
        let mut atoms: Vec<Atom> = q.atoms.clone();
        let len = atoms.len();
        atoms.rotate_left(shift % len);
        atoms.reverse();
        let free: BTreeSet<usize> = q.free_set();
        let vars: Vec<String> = q.vars.iter().enumerate()
            .map(|(i, name)| if free.contains(&i) { name.clone() } else { format!("q_{name}") })
            .collect();
        let renamed = Query { head: q.head.clone(), vars, free: q.free.clone(), atoms };
        let other = QueryInstance::new(renamed, inst.structure.clone()).unwrap();
        let a: CountResult = count_cq_via_ghd(&inst, &some_ghd(&inst)).unwrap();
        let b: CountResult = count_cq_via_ghd(&other, &some_ghd(&other)).unwrap();
        prop_assert_eq!(a.count, b.count);
    }

    #[test]
    fn acyclic_count_is_the_join_size(p in (1usize..10, 1usize..6, 1usize..4, any::<u64>()), density in 0.3f64..1.0) {
        let (vertices, edges, max_arity, seed) = p;
        let h = gen_random_acyclic(&RandomHypergraphParams { vertices, edges, max_arity, seed });
        let mut builder = cqstar::query::QueryBuilder::new("ans");
        let names: Vec<String> = h.vertices().iter().map(|&v| h.name(v).to_string()).collect();
        for e in h.edges() {
            builder.atom(&format!("R{}", e.id), e.vertices.iter().map(|&v| h.name(v)));
        }
        builder.free(names.iter().map(String::as_str)).unwrap();
        let query = builder.finish();
        let mut structure = Structure::new();
        let values = ["a", "b", "c"];
        let mut rng_state = seed;
        for (i, atom) in query.atoms.iter().enumerate() {
            let name = format!("R{i}");
            structure.declare(&name, atom.args.len()).unwrap();
            let total = 3usize.pow(atom.args.len() as u32);
            for code in 0..total {
                rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if ((rng_state >> 33) as f64 / (1u64 << 31) as f64) < density {
                    let args: Vec<&str> = (0..atom.args.len()).map(|j| values[(code / 3usize.pow(j as u32)) % 3]).collect();
                    structure.add_fact(&name, &args).unwrap();
                }
            }
        }
        let inst = QueryInstance::new(query, structure).unwrap();
        let jt: Decomposition = gyo_join_tree(&inst.s_hypergraph().hypergraph).join_tree().unwrap();
        let r: CountResult = count_acyclic_qf(&inst, &jt).unwrap();
        prop_assert_eq!(r.count, small(naive_count(&inst) as u64));
        let largest = (0..inst.query.atoms.len()).map(|i| inst.atom_relation(i).len()).max().unwrap();
        prop_assert!(r.stats.peak_intermediate <= largest, "{} > {}", r.stats.peak_intermediate, largest);
    }
}

#[test]
fn three_hundred_seeded_instances() {
    for seed in 0..300u64 {
        let p = RandomInstanceParams {
            vars: 2 + (seed % 7) as usize,
            atoms: 1 + (seed % 6) as usize,
            max_arity: 3,
            domain: 1 + (seed % 4) as usize,
            density: 0.5,
            free_probability: 0.5,
            seed,
        };
        let inst = gen_random_instance(&p);
        let d = some_ghd(&inst);
        let ghd: CountResult = count_cq_via_ghd(&inst, &d).unwrap();
        let frac: CountResult = count_cq_via_fractional(&inst, &d.to_fractional()).unwrap();
        let brute: CountResult = count_brute(&inst).unwrap();
        assert_eq!(ghd.count, brute.count, "seed {seed}");
        assert_eq!(frac.count, brute.count, "seed {seed}");
    }
}

fn cliques(g: &SimpleGraph, k: usize) -> u64 {
    fn rec(g: &SimpleGraph, k: usize, from: usize, chosen: &mut Vec<usize>) -> u64 {
        if chosen.len() == k {
            return 1;
        }
        let mut total = 0;
        for v in from..g.n() {
            if chosen.iter().all(|&u| g.has_edge(u, v)) {
                chosen.push(v);
                total += rec(g, k, v + 1, chosen);
                chosen.pop();
            }
        }
        total
    }
    rec(g, k, 0, &mut Vec::new())
}

fn clique_identity(g: &SimpleGraph, k: usize) -> (u64, u64) {
    let inst = gen_clique_star_instance(g, k);
    let r: CountResult = count_cq_via_ghd(&inst, &some_ghd(&inst)).unwrap();
    let count = r.count.to_u64().unwrap();
    let total = (g.n() as u64).pow(k as u32);
    let factorial: u64 = (1..=k as u64).product();
    assert_eq!((total - count) % factorial, 0);
    (count, (total - count) / factorial)
}

#[test]
fn clique_identity_on_triangle() {
    let k3 = SimpleGraph::complete(3);
    assert_eq!(clique_identity(&k3, 3), (21, 1));
    let empty = SimpleGraph::empty(3);
    assert_eq!(clique_identity(&empty, 2), (9, 0));
    assert_eq!(clique_identity(&empty, 1).1, 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn clique_identity_random(n in 1usize..=6, k in 2usize..=3, p in 0.2f64..0.9, seed in any::<u64>()) {
        let g = cqstar::generators::gen_random_graph(n, p, seed);
        prop_assert_eq!(clique_identity(&g, k).1, cliques(&g, k));
    }
}

#[test]
fn enumeration_matches_independence_filter() {
    let h = cqstar::fixtures::path4();
    let listed: Vec<_> = enumerate_is(&h).collect();
    let mut all = Vec::new();
    for mask in 0u32..16 {
        let set: BTreeSet<usize> = (0..4).filter(|i| mask & (1 << i) != 0).collect();
        if h.is_independent(&set) {
            all.push(set);
        }
    }
    all.sort_by_key(|s| s.iter().copied().collect::<Vec<_>>());
    assert_eq!(listed, all);
}

#[test]
fn structure_is_not_mutated() {
    let inst = gen_random_instance(&RandomInstanceParams::default());
    let before = inst.structure.clone();
    let _: CountResult = count_cq_via_ghd(&inst, &some_ghd(&inst)).unwrap();
    assert_eq!(inst.structure, before);
}
