use std::fs;
use std::path::{Path, PathBuf};

use cqstar::decomposition::{ghd_search, gyo_join_tree, hinge_decompose, tree_decompose};
use cqstar::engine::{count_brute_with, count_cq_via_fractional, count_cq_via_ghd, CountResult};
use cqstar::format::{parse_facts_in, parse_graph_in, parse_query_in, read_decomposition, write_decomposition, write_facts, write_graph, write_query};
use cqstar::generators::{gen_clique_star_instance, gen_g_star, gen_is_hardness_hypergraph, gen_random_graph, gen_random_instance, RandomInstanceParams};
use cqstar::starsize::{s_star_size, Method};
use cqstar::{verify as verify_decomposition, Decomposition, DecompositionKind, Error, Hypergraph, Query, QueryInstance, Result, SHypergraph, VertexSet};

use crate::output::{self, int, ComponentDoc, CountDoc, DecompositionInfo, OracleDoc, OracleEntry, StarsizeDoc, VerifyDoc, ViolationDoc};
use crate::{AutoKind, CountArgs, CountMethodArg, DecomposeArgs, Format, GenCommand, KindArg, OracleArgs, StarMethodArg, StarsizeArgs, VerifyArgs};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn load_query(path: &Path) -> Result<Query> {
    Ok(parse_query_in(&read(path)?, Some(&path.display().to_string()))?)
}

fn load_instance(query: &Path, data: &Path) -> Result<QueryInstance> {
    let q = load_query(query)?;
    let s = parse_facts_in(&read(data)?, Some(&data.display().to_string()))?;
    QueryInstance::new(q, s)
}

fn load_decomposition(path: &Path, h: &Hypergraph) -> Result<Decomposition> {
    read_decomposition(&read(path)?, h, Some(&path.display().to_string()))
}

fn width_of(h: &Hypergraph, d: &Decomposition) -> Result<String> {
    let report = verify_decomposition(h, d)?;
    Ok(report.width.map(|w| cqstar::Weight::format_weight(&w)).unwrap_or_else(|| "invalid".into()))
}

/// Join tree when acyclic; otherwise the hinge decomposition if it is no
/// wider than `k`, then the narrowest GHD found up to `k`, and the hinge
/// decomposition as a last resort.
fn auto_decompose(h: &Hypergraph, kind: AutoKind, k: usize) -> Result<Decomposition> {
    let narrowest = |from: usize| -> Result<Option<Decomposition>> {
        for w in from..=k {
            if let Some(d) = ghd_search(h, w)? {
                return Ok(Some(d));
            }
        }
        Ok(None)
    };
    match kind {
        AutoKind::Jointree => gyo_join_tree(h).join_tree().ok_or(Error::NotAcyclic),
        AutoKind::Hinge => Ok(hinge_decompose(h)),
        AutoKind::Ghd => narrowest(1)?.ok_or_else(|| Error::MissingDecomposition(format!("no GHD of width at most {k} found"))),
        AutoKind::Auto => {
            if let Some(jt) = gyo_join_tree(h).join_tree() {
                return Ok(jt);
            }
            let hinge: Decomposition = hinge_decompose(h);
            if hinge.guard_width() <= k {
                return Ok(hinge);
            }
            Ok(narrowest(2)?.unwrap_or(hinge))
        }
    }
}

pub fn count(args: &CountArgs, format: Format) -> Result<u8> {
    let inst = load_instance(&args.query, &args.data)?;
    let h = inst.s_hypergraph().hypergraph;
    let supplied = match &args.decomp {
        Some(path) => Some(load_decomposition(path, &h)?),
        None => None,
    };
    let method = args.method.unwrap_or(match &supplied {
        Some(d) if d.kind == DecompositionKind::Fractional => CountMethodArg::Fractional,
        _ => CountMethodArg::Ghd,
    });

    let (result, info): (CountResult, Option<DecompositionInfo>) = match method {
        CountMethodArg::Brute => (count_brute_with(&inst, args.budget)?, None),
        _ => {
            let source = if supplied.is_some() { "file" } else { "auto" };
            let d = match supplied {
                Some(d) => d,
                None => auto_decompose(&h, args.auto_decomp.unwrap_or(AutoKind::Auto), args.k)?,
            };
            let result = if method == CountMethodArg::Fractional {
                let d = if d.kind == DecompositionKind::Fractional { d.clone() } else { d.to_fractional() };
                count_cq_via_fractional(&inst, &d)?
            } else {
                count_cq_via_ghd(&inst, &d)?
            };
            let info = DecompositionInfo { kind: d.kind.to_string(), width: width_of(&h, &d)?, source };
            (result, Some(info))
        }
    };

    match format {
        Format::Text => println!("{}", result.count),
        Format::Json => output::print_json(&CountDoc {
            count: int(&result.count),
            method: result.method.to_string(),
            decomposition: info,
            stats: (&result.stats).into(),
        }),
    }
    Ok(0)
}

fn star_method(m: StarMethodArg) -> Method {
    match m {
        StarMethodArg::Brute => Method::Brute,
        StarMethodArg::Acyclic => Method::Acyclic,
        StarMethodArg::Ghd => Method::GhdDp,
        StarMethodArg::Hinge => Method::HingeFpt,
        StarMethodArg::Approx => Method::Approx,
    }
}

fn names(h: &Hypergraph, vs: &VertexSet) -> Vec<String> {
    vs.iter().map(|&v| h.name(v).to_string()).collect()
}

pub fn starsize(args: &StarsizeArgs, format: Format) -> Result<u8> {
    let sh = SHypergraph::from_query(&load_query(&args.query)?)?;
    let h = &sh.hypergraph;
    let d = match &args.decomp {
        Some(path) => Some(load_decomposition(path, h)?),
        None => None,
    };
    let result = s_star_size(&sh, star_method(args.method), d.as_ref())?;
    match format {
        Format::Text => {
            println!("{}", result.size);
            if let Some(best) = result.best() {
                println!("{{{}}}", names(h, &best.star).join(","));
            }
        }
        Format::Json => output::print_json(&StarsizeDoc {
            size: int(result.size),
            method: result.method.to_string(),
            components: result
                .witnesses
                .iter()
                .map(|w| ComponentDoc {
                    index: int(w.component_index),
                    size: int(w.size),
                    star: names(h, &w.star),
                    cover: w.cover_edges.as_ref().map(|c| c.iter().map(int).collect()),
                })
                .collect(),
        }),
    }
    Ok(0)
}

pub fn decompose(args: &DecomposeArgs) -> Result<u8> {
    let h = SHypergraph::from_query(&load_query(&args.query)?)?.hypergraph;
    let d: Decomposition = match args.kind {
        KindArg::Jointree => auto_decompose(&h, AutoKind::Jointree, args.k)?,
        KindArg::Hinge => hinge_decompose(&h),
        KindArg::Ghd => auto_decompose(&h, AutoKind::Ghd, args.k)?,
        KindArg::Tree => tree_decompose(&h)?,
        KindArg::Fractional => auto_decompose(&h, AutoKind::Ghd, args.k)?.to_fractional(),
    };
    println!("{}", write_decomposition(&d, &h));
    Ok(0)
}

pub fn verify(args: &VerifyArgs, format: Format) -> Result<u8> {
    let h = SHypergraph::from_query(&load_query(&args.query)?)?.hypergraph;
    let d = load_decomposition(&args.decomp, &h)?;
    let report = verify_decomposition(&h, &d)?;
    let width = report.width.as_ref().map(cqstar::Weight::format_weight);
    match format {
        Format::Text => {
            if report.is_valid() {
                println!("valid {} decomposition of width {}", d.kind, width.as_deref().unwrap_or("?"));
            }
            for v in &report.violations {
                println!("{}", v.describe(&h));
            }
        }
        Format::Json => output::print_json(&VerifyDoc {
            valid: report.is_valid(),
            kind: d.kind.to_string(),
            width,
            violations: report.violations.iter().map(|v| ViolationDoc { tag: v.tag(), detail: v.describe(&h) }).collect(),
        }),
    }
    Ok(if report.is_valid() { 0 } else { 1 })
}

fn with_extension(prefix: &Path, ext: &str) -> PathBuf {
    let mut name = prefix.as_os_str().to_owned();
    name.push(".");
    name.push(ext);
    PathBuf::from(name)
}

/// A hypergraph as a query: one atom `E<id>` per edge, free variables `s`.
fn hypergraph_query(h: &Hypergraph, s: &VertexSet) -> Result<Query> {
    let atoms: Vec<(String, Vec<&str>)> =
        h.edges().iter().map(|e| (format!("E{}", e.id), e.vertices.iter().map(|&v| h.name(v)).collect())).collect();
    let atoms: Vec<(&str, &[&str])> = atoms.iter().map(|(p, args)| (p.as_str(), args.as_slice())).collect();
    let free: Vec<&str> = s.iter().map(|&v| h.name(v)).collect();
    Query::from_names("ans", &free, &atoms)
}

pub fn generate(cmd: &GenCommand) -> Result<u8> {
    let mut written = Vec::new();
    let mut emit = |path: PathBuf, text: String| -> Result<()> {
        write(&path, &text)?;
        written.push(path);
        Ok(())
    };
    let load_graph = |path: &Path| -> Result<_> { Ok(parse_graph_in(&read(path)?, Some(&path.display().to_string()))?) };
    match cmd {
        GenCommand::CliqueStar { graph, k, out } => {
            if *k == 0 {
                return Err(Error::InvalidInput("k must be positive".into()));
            }
            let inst = gen_clique_star_instance(&load_graph(graph)?, *k);
            emit(with_extension(out, "cq"), write_query(&inst.query))?;
            emit(with_extension(out, "facts"), write_facts(&inst.structure))?;
        }
        GenCommand::IsHard { graph, k, out } => {
            if *k == 0 {
                return Err(Error::InvalidInput("k must be positive".into()));
            }
            let (h, d) = gen_is_hardness_hypergraph::<cqstar::Rational>(&load_graph(graph)?, *k);
            let q = hypergraph_query(&h, &VertexSet::new())?;
            let qh = SHypergraph::from_query(&q)?.hypergraph;
            // vertex ids follow first appearance in the query; re-read by name
            let d = read_decomposition(&write_decomposition(&d, &h), &qh, None)?;
            emit(with_extension(out, "cq"), write_query(&q))?;
            emit(with_extension(out, "decomp.json"), write_decomposition::<cqstar::Rational>(&d, &qh))?;
        }
        GenCommand::Gstar { n, out } => {
            if *n == 0 {
                return Err(Error::InvalidInput("n must be positive".into()));
            }
            let sh = gen_g_star(*n);
            emit(with_extension(out, "cq"), write_query(&hypergraph_query(&sh.hypergraph, &sh.s)?))?;
        }
        GenCommand::Random { vars, atoms, max_arity, domain, density, free_probability, seed, out } => {
            if *vars == 0 || *atoms == 0 || *max_arity == 0 || *domain == 0 {
                return Err(Error::InvalidInput("vars, atoms, max-arity and domain must be positive".into()));
            }
            let params = RandomInstanceParams {
                vars: *vars,
                atoms: *atoms,
                max_arity: *max_arity,
                domain: *domain,
                density: *density,
                free_probability: *free_probability,
                seed: *seed,
            };
            let inst = gen_random_instance(&params);
            emit(with_extension(out, "cq"), write_query(&inst.query))?;
            emit(with_extension(out, "facts"), write_facts(&inst.structure))?;
        }
        GenCommand::Graph { n, p, seed, out } => {
            emit(with_extension(out, "edges"), write_graph(&gen_random_graph(*n, *p, *seed)))?;
        }
    }
    for path in written {
        println!("{}", path.display());
    }
    Ok(0)
}

/// Exit code 3 when two methods disagree.
pub fn oracle(args: &OracleArgs, format: Format) -> Result<u8> {
    let query = load_query(&args.query)?;
    let sh = SHypergraph::from_query(&query)?;
    let mut stars = Vec::new();
    let entry = |method: String, r: Result<String>| match r {
        Ok(v) => OracleEntry { method, value: Some(v), note: None },
        Err(e) => OracleEntry { method, value: None, note: Some(e.to_string()) },
    };
    for m in [Method::Brute, Method::Acyclic, Method::GhdDp, Method::HingeFpt] {
        stars.push(entry(m.to_string(), s_star_size::<cqstar::Rational>(&sh, m, None).map(|r| int(r.size))));
    }
    let mut agree = consistent(&stars);

    // the approximation may only undershoot
    let exact = stars.iter().find_map(|e| e.value.as_ref()).map(|v| v.parse::<usize>().expect("written as an integer"));
    let approx = s_star_size::<cqstar::Rational>(&sh, Method::Approx, None);
    if let (Some(exact), Ok(r)) = (exact, &approx) {
        agree &= r.size <= exact && (exact == 0) == (r.size == 0);
    }
    stars.push(entry(Method::Approx.to_string(), approx.map(|r| int(r.size))));

    let mut counts = Vec::new();
    if let Some(data) = &args.data {
        let inst = load_instance(&args.query, data)?;
        let h = inst.s_hypergraph().hypergraph;
        let d = auto_decompose(&h, AutoKind::Auto, 4)?;
        let ghd: Result<CountResult> = count_cq_via_ghd(&inst, &d);
        let frac: Result<CountResult> = count_cq_via_fractional(&inst, &d.to_fractional());
        let brute: Result<CountResult> = count_brute_with(&inst, args.budget);
        counts.push(entry("ghd".into(), ghd.map(|r| int(r.count))));
        counts.push(entry("fractional".into(), frac.map(|r| int(r.count))));
        counts.push(entry("brute".into(), brute.map(|r| int(r.count))));
        agree &= consistent(&counts);
    }

    match format {
        Format::Text => {
            for (what, list) in [("starsize", &stars), ("count", &counts)] {
                for e in list {
                    match (&e.value, &e.note) {
                        (Some(v), _) => println!("{what} {} {v}", e.method),
                        (None, note) => println!("{what} {} skipped: {}", e.method, note.as_deref().unwrap_or("")),
                    }
                }
            }
            println!("{}", if agree { "agree" } else { "DISAGREE" });
        }
        Format::Json => output::print_json(&OracleDoc { starsize: stars, count: counts, agree }),
    }
    Ok(if agree { 0 } else { 3 })
}

fn consistent(entries: &[OracleEntry]) -> bool {
    let mut values = entries.iter().filter_map(|e| e.value.as_ref());
    match values.next() {
        Some(first) => values.all(|v| v == first),
        None => true,
    }
}
