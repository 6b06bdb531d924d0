//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{cli_verify, Mutation};
use cqstar::decomposition::{ghd_search, gyo_join_tree, hinge_decompose};
use cqstar::engine::{count_brute, count_cq_via_fractional, count_cq_via_ghd, CountResult};
use cqstar::format::parse_query;
use cqstar::generators::{
    gen_clique_star_instance, gen_is_hardness_hypergraph, gen_random_acyclic, gen_random_graph, gen_random_hypergraph,
    gen_random_instance, RandomHypergraphParams, RandomInstanceParams, SimpleGraph,
};
use cqstar::starsize::{acyclic_is_and_cover, approx_is, max_is_brute, max_is_ghd_dp, max_is_hinge_fpt, s_star_size, Method};
use cqstar::{verify, Decomposition, Error, Hypergraph, QueryInstance, Rational, SHypergraph, Structure, VertexSet};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn secs(d: Duration) -> String {
    format!("{:.3} s", d.as_secs_f64())
}

/// Valid decompositions built along the way, rechecked under mutation.
#[derive(Default)]
struct Corpus {
    items: Vec<(Hypergraph, Decomposition)>,
}

impl Corpus {
    fn keep(&mut self, h: &Hypergraph, d: &Decomposition) {
        self.items.push((h.clone(), d.clone()));
    }
}

fn worked_example(corpus: &mut Corpus) -> Outcome {
    let start = Instant::now();
    let q = parse_query(&std::fs::read_to_string(data("example.cq")).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let sh = SHypergraph::from_query(&q).map_err(|e| e.to_string())?;
    let h = &sh.hypergraph;
    let comps = sh.s_components();
    let cores: Vec<BTreeSet<&str>> = comps.iter().map(|c| c.core.iter().map(|&v| h.name(v)).collect()).collect();
    let expected: Vec<BTreeSet<&str>> =
        vec![["u1", "u2", "u3", "u4", "u5", "u6"].into(), ["u7"].into(), ["u8"].into()];
    ensure!(cores.len() == 3, "{} components", cores.len());
    for e in &expected {
        ensure!(cores.contains(e), "missing core {e:?} in {cores:?}");
    }
    let star = s_star_size::<Rational>(&sh, Method::HingeFpt, None).map_err(|e| e.to_string())?;
    ensure!(star.size == 4, "star size {}", star.size);
    for w in &star.witnesses {
        ensure!(comps[w.component_index].induced.is_independent(&w.star), "witness {} not independent", w.component_index);
    }
    let named: VertexSet = ["v1", "v2", "v3", "v7"].iter().map(|n| h.vertex_by_name(n).unwrap()).collect();
    let first = comps.iter().find(|c| named.is_subset(&c.s_vertices)).ok_or("{v1,v2,v3,v7} in no component")?;
    ensure!(first.induced.is_independent(&named), "{{v1,v2,v3,v7}} rejected");
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {}", secs(elapsed));

    let ghd: Decomposition = ghd_search(h, 2).map_err(|e| e.to_string())?.ok_or("no width-2 GHD")?;
    corpus.keep(h, &ghd);
    corpus.keep(h, &hinge_decompose(h));
    Ok(format!("3 components, cores {{u1..u6}},{{u7}},{{u8}}; star size 4; {{v1,v2,v3,v7}} independent; {} < 1 s", secs(elapsed)))
}

fn edge_cover_duality(corpus: &mut Corpus) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for seed in 0..500u64 {
        let params = RandomHypergraphParams {
            vertices: 5 + (seed % 21) as usize,
            edges: 1 + (seed % 15) as usize,
            max_arity: 1 + (seed % 5) as usize,
            seed,
        };
        let h = gen_random_acyclic(&params);
        let jt: Decomposition = gyo_join_tree(&h).join_tree().ok_or(format!("seed {seed}: not acyclic"))?;
        let (is, cover) = acyclic_is_and_cover(&h, &jt, None).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(is.len() == cover.len(), "seed {seed}: |IS| {} != |cover| {}", is.len(), cover.len());
        ensure!(h.is_independent(&is.vertices), "seed {seed}: dependent set");
        let covered: VertexSet = cover.iter().flat_map(|&e| h.edge(e).unwrap().vertices.iter().copied()).collect();
        ensure!(&covered == h.vertices(), "seed {seed}: cover misses vertices");
        if seed % 5 == 0 {
            corpus.keep(&h, &jt);
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(30), "took {}", secs(elapsed));
    Ok(format!("{checked} acyclic hypergraphs, |maxIS| = |minCover| with valid witnesses; {} < 30 s", secs(elapsed)))
}

/// Random hypergraphs on at most 14 vertices with a GHD of width at most 3.
fn bounded_width_sample(count: usize, salt: u64) -> Vec<(u64, Hypergraph, Decomposition)> {
    let mut out = Vec::new();
    let mut seed = salt;
    while out.len() < count {
        seed += 1;
        let params = RandomHypergraphParams {
            vertices: 4 + (seed % 11) as usize,
            edges: 2 + (seed % 9) as usize,
            max_arity: 2 + (seed % 3) as usize,
            seed,
        };
        let h = gen_random_hypergraph(&params);
        if let Some(d) = (1..=3).find_map(|k| ghd_search(&h, k).ok().flatten()) {
            out.push((seed, h, d));
        }
    }
    out
}

fn exact_is_agreement(corpus: &mut Corpus) -> Outcome {
    let sample = bounded_width_sample(200, 10_000);
    let mut filtered = 0;
    for (seed, h, ghd) in &sample {
        let hinge: Decomposition = hinge_decompose(h);
        let mut rng = ChaCha8Rng::seed_from_u64(*seed);
        let all: Vec<usize> = h.vertices().iter().copied().collect();
        let picked: VertexSet = all.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        for restrict in [None, Some(&picked)] {
            let a = max_is_ghd_dp(h, ghd, restrict).map_err(|e| format!("seed {seed}: ghd {e}"))?;
            let b = max_is_hinge_fpt(h, &hinge, restrict).map_err(|e| format!("seed {seed}: hinge {e}"))?;
            let c = max_is_brute(h, restrict).map_err(|e| format!("seed {seed}: brute {e}"))?;
            ensure!(a.len() == c.len() && b.len() == c.len(), "seed {seed}: ghd {} hinge {} brute {}", a.len(), b.len(), c.len());
            for w in [&a, &b, &c] {
                ensure!(h.is_independent(&w.vertices), "seed {seed}: {} witness dependent", w.method);
                if let Some(r) = restrict {
                    ensure!(w.vertices.is_subset(r), "seed {seed}: {} witness outside filter", w.method);
                }
            }
            filtered += usize::from(restrict.is_some());
        }
        corpus.keep(h, ghd);
        corpus.keep(h, &ghd.to_fractional());
        corpus.keep(h, &hinge);
    }
    Ok(format!("{} hypergraphs ({filtered} with filters): ghd-dp = hinge = brute, exact", sample.len()))
}

fn approximation_sandwich(_: &mut Corpus) -> Outcome {
    let sample = bounded_width_sample(200, 20_000);
    let mut violations = 0;
    for (seed, h, d) in &sample {
        let k = d.guard_width().max(1);
        let exact = max_is_brute(h, None).map_err(|e| format!("seed {seed}: {e}"))?.len();
        let approx = approx_is(h, d, None).map_err(|e| format!("seed {seed}: {e}"))?;
        let ok = h.is_independent(&approx.vertices) && exact.div_ceil(k) <= approx.len() && approx.len() <= exact;
        violations += usize::from(!ok);
    }
    ensure!(violations == 0, "{violations} violations");
    Ok(format!("{} instances, ceil(l/k) <= |approx| <= l, 0 violations", sample.len()))
}

fn counting_equivalence(_: &mut Corpus) -> Outcome {
    let start = Instant::now();
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
        let h = inst.s_hypergraph().hypergraph;
        let d: Decomposition = (1..=6).find_map(|k| ghd_search(&h, k).ok().flatten()).ok_or(format!("seed {seed}: no GHD"))?;
        let ghd: CountResult = count_cq_via_ghd(&inst, &d).map_err(|e| format!("seed {seed}: {e}"))?;
        let frac: CountResult = count_cq_via_fractional(&inst, &d.to_fractional()).map_err(|e| format!("seed {seed}: {e}"))?;
        let brute: CountResult = count_brute(&inst).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure!(ghd.count == brute.count && frac.count == brute.count, "seed {seed}: {} {} {}", ghd.count, frac.count, brute.count);
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {}", secs(elapsed));
    Ok(format!("300 instances, ghd = fractional = brute, exact; {} < 60 s", secs(elapsed)))
}

fn cliques(g: &SimpleGraph, k: usize) -> u64 {
    let n = g.n();
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .filter(|m| {
            let vs: Vec<usize> = (0..n).filter(|v| m & (1 << v) != 0).collect();
            vs.iter().all(|&u| vs.iter().all(|&v| u == v || g.has_edge(u, v)))
        })
        .count() as u64
}

fn clique_count(g: &SimpleGraph, k: usize) -> Result<(u64, u64), String> {
    let inst = gen_clique_star_instance(g, k);
    let h = inst.s_hypergraph().hypergraph;
    let jt: Decomposition = gyo_join_tree(&h).join_tree().ok_or("clique query is not acyclic")?;
    let r: CountResult = count_cq_via_ghd(&inst, &jt).map_err(|e| e.to_string())?;
    let count = r.count.to_u64().ok_or("count overflows")?;
    let total = (g.n() as u64).pow(k as u32);
    let factorial: u64 = (1..=k as u64).product();
    ensure!(count <= total && (total - count) % factorial == 0, "count {count} of {total} not divisible");
    Ok((count, (total - count) / factorial))
}

fn clique_identity(_: &mut Corpus) -> Outcome {
    let fixed = clique_count(&SimpleGraph::complete(3), 3)?;
    ensure!(fixed == (21, 1), "K3, k=3 gave {fixed:?}");
    let mut graphs = 0;
    for seed in 0..54u64 {
        let n = 3 + (seed % 6) as usize;
        let g = gen_random_graph(n, 0.3 + 0.1 * (seed % 6) as f64, seed);
        for k in [2, 3, 4] {
            let (_, found) = clique_count(&g, k)?;
            let expected = cliques(&g, k);
            ensure!(found == expected, "seed {seed}, n {n}, k {k}: {found} != {expected}");
        }
        graphs += 1;
    }
    Ok(format!("{graphs} graphs, k in {{2,3,4}}, (n^k - count)/k! = #cliques; K3,k=3 -> 21, 1"))
}

fn has_independent_set(g: &SimpleGraph, k: usize) -> bool {
    let n = g.n();
    (0u32..1 << n).any(|m| {
        let vs: Vec<usize> = (0..n).filter(|v| m & (1 << v) != 0).collect();
        vs.len() == k && vs.iter().all(|&u| vs.iter().all(|&v| u == v || !g.has_edge(u, v)))
    })
}

fn is_hardness(corpus: &mut Corpus) -> Outcome {
    let mut cases = 0;
    let mut positive = 0;
    for n in 1..=7usize {
        for k in 1..=3usize {
            for seed in 0..4u64 {
                let g = gen_random_graph(n, 0.2 + 0.2 * seed as f64, seed * 31 + n as u64);
                let (h, d) = gen_is_hardness_hypergraph::<Rational>(&g, k);
                let in_h = max_is_brute(&h, None).map_err(|e| e.to_string())?.len() >= k;
                let in_g = has_independent_set(&g, k);
                ensure!(in_h == in_g, "n {n}, k {k}, seed {seed}: graph {in_g}, hypergraph {in_h}");
                let report = verify(&h, &d).map_err(|e| e.to_string())?;
                ensure!(report.width == Some(Rational::from_integer(k.into())), "n {n}, k {k}: width {:?}", report.width);
                positive += usize::from(in_g);
                cases += 1;
                if seed == 0 {
                    corpus.keep(&h, &d);
                }
            }
        }
    }
    Ok(format!("{cases} graphs with n <= 7, k <= 3 ({positive} with a k-IS): iff holds, witness width = k"))
}

fn verifier_sensitivity(corpus: &Corpus, dir: &Path) -> Outcome {
    let mut library = 0;
    let mut cli = 0;
    for (i, (h, d)) in corpus.items.iter().enumerate() {
        let report = verify(h, d).map_err(|e| e.to_string())?;
        ensure!(report.is_valid(), "corpus item {i} is invalid to begin with");
        for m in Mutation::ALL {
            let Some(bad) = m.apply(h, d) else { continue };
            let tag = m.tag(d.kind);
            let report = verify(h, &bad).map_err(|e| e.to_string())?;
            ensure!(report.has_tag(tag), "item {i} ({}): {m:?} gave {:?}", d.kind, report.violations);
            library += 1;
            if let Some((code, tags)) = cli_verify(dir, &format!("c{i}"), h, &bad) {
                ensure!(code != 0, "item {i}: {m:?} exits 0");
                ensure!(tags.iter().any(|t| t == tag), "item {i}: {m:?} cli tags {tags:?}");
                cli += 1;
            }
        }
    }
    Ok(format!("{} decompositions, {library} mutations tagged, {cli} rejected by `verify` with nonzero exit", corpus.items.len()))
}

/// `ans(x,y) :- R(x,a), A(a,b), B(b,c), C(c,a), T(c,y)` over about `size`
/// tuples. The triangle variables range over `size/4` values each, `x` and
/// `y` over 8.
fn triangle_family(size: usize, seed: u64) -> QueryInstance {
    let q = parse_query("ans(x,y) :- R(x,a), A(a,b), B(b,c), C(c,a), T(c,y).").expect("fixed query");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = (size / 4).max(1);
    let mut s = Structure::new();
    let add = |s: &mut Structure, rel: &str, a: String, b: String| {
        s.add_fact(rel, &[a.as_str(), b.as_str()]).expect("binary relation");
    };
    for (rel, p, r) in [("A", "a", "b"), ("B", "b", "c"), ("C", "c", "a")] {
        for i in 0..m {
            // planted triangles on every fourth value, random pairs elsewhere
            let j = if i % 4 == 0 { i } else { rng.gen_range(0..m) };
            add(&mut s, rel, format!("{p}{i}"), format!("{r}{j}"));
        }
    }
    let xs: Vec<usize> = (0..8).collect();
    for _ in 0..(size / 8).max(1) {
        let i = rng.gen_range(0..m);
        add(&mut s, "R", format!("x{}", xs.choose(&mut rng).unwrap()), format!("a{i}"));
        let i = rng.gen_range(0..m);
        add(&mut s, "T", format!("c{i}"), format!("y{}", xs.choose(&mut rng).unwrap()));
    }
    QueryInstance::new(q, s).expect("consistent instance")
}

fn tractability(_: &mut Corpus) -> Outcome {
    const MAX_FACTOR: f64 = 50.0;
    let mut times = Vec::new();
    let mut facts = Vec::new();
    for (i, size) in [100usize, 1_000, 10_000].into_iter().enumerate() {
        let inst = triangle_family(size, i as u64);
        let sh = inst.s_hypergraph();
        let d: Decomposition = ghd_search(&sh.hypergraph, 2).map_err(|e| e.to_string())?.ok_or("no width-2 GHD")?;
        ensure!(ghd_search::<Rational>(&sh.hypergraph, 1).map_err(|e| e.to_string())?.is_none(), "family is acyclic");
        let star = s_star_size(&sh, Method::Brute, None::<&Decomposition>).map_err(|e| e.to_string())?;
        ensure!(star.size == 2, "star size {}", star.size);
        let mut runs = Vec::new();
        let mut count = None;
        for _ in 0..3 {
            let start = Instant::now();
            let r: CountResult = count_cq_via_ghd(&inst, &d).map_err(|e| e.to_string())?;
            runs.push(start.elapsed());
            count = Some(r.count);
        }
        runs.sort();
        times.push(runs[1]);
        facts.push(inst.structure.num_facts());
        let brute = count_brute::<cqstar::ExactCount>(&inst);
        match (size, brute) {
            (100, Ok(b)) => ensure!(Some(&b.count) == count.as_ref(), "brute {} != ghd {:?} at 10^2", b.count, count),
            (100, Err(e)) => return Err(format!("brute failed at 10^2: {e}")),
            (_, Err(Error::TooLarge(_))) => {}
            (_, other) => return Err(format!("brute within budget at {size}: {:?}", other.map(|r| r.count))),
        }
    }
    let factors: Vec<f64> = times.windows(2).map(|w| w[1].as_secs_f64() / w[0].as_secs_f64().max(1e-6)).collect();
    let shown: Vec<String> = facts.iter().zip(&times).map(|(f, t)| format!("{f} facts {:.2} ms", t.as_secs_f64() * 1e3)).collect();
    ensure!(factors.iter().all(|&f| f <= MAX_FACTOR), "growth {factors:.1?} per decade ({})", shown.join(", "));
    Ok(format!(
        "width 2, star size 2; median times {}; growth {:.1?} <= {MAX_FACTOR} per decade; brute over budget from 10^3",
        shown.join(", "),
        factors
    ))
}

fn main() -> ExitCode {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut corpus = Corpus::default();
    let criteria: [(&str, fn(&mut Corpus) -> Outcome); 7] = [
        ("worked example", worked_example),
        ("edge-cover duality", edge_cover_duality),
        ("exact independent-set agreement", exact_is_agreement),
        ("approximation sandwich", approximation_sandwich),
        ("counting oracle equivalence", counting_equivalence),
        ("clique identity", clique_identity),
        ("independent-set hardness construction", is_hardness),
    ];
    let mut failed = 0;
    let mut line = |n: usize, name: &str, outcome: Outcome| match outcome {
        Ok(detail) => println!("PASS {n} {name}: {detail}"),
        Err(detail) => {
            failed += 1;
            println!("FAIL {n} {name}: {detail}");
        }
    };
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        line(i + 1, name, run(&mut corpus));
    }
    line(8, "verifier sensitivity", verifier_sensitivity(&corpus, dir.path()));
    line(9, "tractability smoke", tractability(&mut corpus));
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
