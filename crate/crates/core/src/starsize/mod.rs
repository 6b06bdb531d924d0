//! Maximum independent sets of hypergraphs and the S-star size.
//!
//! Every algorithm takes an optional candidate filter `restrict_to`: the
//! returned set is a maximum independent set among those vertices (all
//! vertices when absent). Results are re-checked for independence before
//! they are returned.

mod acyclic;
mod brute;
mod ghd_dp;
mod hinge_dp;

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::decomposition::{blocks_join_tree, ghd_search, hinge_decompose, gyo_join_tree, induced_decomposition, Decomposition};
use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph, SHypergraph, VertexSet};
use crate::scalar::Weight;

pub use acyclic::acyclic_is_and_cover;
pub use brute::{max_is_brute, max_is_brute_with, DEFAULT_BRUTE_CUTOFF};
pub use ghd_dp::max_is_ghd_dp;
pub use hinge_dp::max_is_hinge_fpt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Brute,
    Acyclic,
    GhdDp,
    HingeFpt,
    Approx,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Acyclic => "acyclic",
            Method::GhdDp => "ghd",
            Method::HingeFpt => "hinge",
            Method::Approx => "approx",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "acyclic" => Ok(Method::Acyclic),
            "ghd" => Ok(Method::GhdDp),
            "hinge" => Ok(Method::HingeFpt),
            "approx" => Ok(Method::Approx),
            other => Err(Error::InvalidInput(format!("unknown method `{other}`"))),
        }
    }
}

/// An independent set together with the algorithm that found it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ISWitness {
    pub vertices: VertexSet,
    pub method: Method,
    /// Guaranteed approximation ratio, for [`Method::Approx`].
    pub bound: Option<usize>,
}

impl ISWitness {
    pub(crate) fn checked(h: &Hypergraph, vertices: VertexSet, method: Method, bound: Option<usize>) -> Result<Self> {
        if !h.is_independent(&vertices) {
            return Err(Error::Internal(format!("{method} returned a dependent set {}", h.display_set(&vertices))));
        }
        Ok(ISWitness { vertices, method, bound })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

/// Independent S-vertices of one S-component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarWitness {
    pub size: usize,
    pub component_index: usize,
    pub star: VertexSet,
    /// Edge cover of the S-vertices of equal size, for [`Method::Acyclic`].
    pub cover_edges: Option<BTreeSet<EdgeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarSize {
    pub size: usize,
    pub method: Method,
    /// One entry per S-component, in component order.
    pub witnesses: Vec<StarWitness>,
}

impl StarSize {
    /// The witness of a largest component (the first one on ties).
    pub fn best(&self) -> Option<&StarWitness> {
        self.witnesses.iter().rev().max_by_key(|w| w.size)
    }
}

/// Candidate vertices: `restrict_to ∩ V`, or all of `V`.
pub(crate) fn candidates(h: &Hypergraph, restrict_to: Option<&VertexSet>) -> Result<VertexSet> {
    match restrict_to {
        None => Ok(h.vertices().clone()),
        Some(r) => match r.iter().find(|v| !h.vertices().contains(v)) {
            Some(&v) => Err(Error::UnknownVertex(v)),
            None => Ok(r.clone()),
        },
    }
}

/// Independent set from the blocks hypergraph of `d`, at least `1/k` of
/// the maximum for a decomposition of width `k`.
pub fn approx_is<W: Weight>(h: &Hypergraph, d: &Decomposition<W>, restrict_to: Option<&VertexSet>) -> Result<ISWitness> {
    let report = crate::decomposition::verify(h, d)?;
    if !report.is_valid() {
        return Err(Error::DecompositionInvalid(describe(h, &report.violations)));
    }
    let cands = candidates(h, restrict_to)?;
    let (blocks, jt) = blocks_join_tree(h, d);
    let isolated: VertexSet = blocks.isolated_vertices();
    let bagged: VertexSet = cands.difference(&isolated).copied().collect();
    let (is, _) = acyclic_is_and_cover(&blocks, &jt, Some(&bagged))?;
    let mut vertices = is.vertices;
    vertices.extend(cands.intersection(&isolated).copied());
    let k = d.guard_width().max(1);
    ISWitness::checked(h, vertices, Method::Approx, Some(k))
}

pub(crate) fn describe(h: &Hypergraph, violations: &[crate::decomposition::Violation]) -> String {
    violations.iter().map(|v| v.describe(h)).collect::<Vec<_>>().join(", ")
}

/// Largest width tried when a GHD has to be found automatically.
const AUTO_GHD_MAX_WIDTH: usize = 4;

fn auto_ghd<W: Weight>(h: &Hypergraph) -> Result<Decomposition<W>> {
    for k in 1..=AUTO_GHD_MAX_WIDTH {
        if let Some(d) = ghd_search(h, k)? {
            return Ok(d);
        }
    }
    Err(Error::MissingDecomposition(format!("no GHD of width at most {AUTO_GHD_MAX_WIDTH} found")))
}

/// The S-star size: the largest independent set of S-vertices within one
/// S-component. A supplied decomposition (of the whole hypergraph) is
/// induced onto each component; without one, a decomposition is computed
/// per component.
pub fn s_star_size<W: Weight>(sh: &SHypergraph, method: Method, decomposition: Option<&Decomposition<W>>) -> Result<StarSize> {
    let h = &sh.hypergraph;
    let mut witnesses = Vec::new();
    for (index, comp) in sh.s_components().into_iter().enumerate() {
        let s_i = &comp.s_vertices;
        let mut cover_edges = None;
        let induced_d = |vs: &VertexSet| decomposition.map(|d| induced_decomposition(h, d, vs)).transpose();
        let star = match method {
            Method::Brute => max_is_brute(&comp.s_restricted(), None)?,
            Method::Acyclic => {
                let hs = comp.s_restricted();
                let jt = match induced_d(s_i)? {
                    Some(d) => d,
                    None => gyo_join_tree::<W>(&hs).join_tree().ok_or(Error::NotAcyclic)?,
                };
                let (is, cover) = acyclic_is_and_cover(&hs, &jt, None)?;
                cover_edges = Some(cover);
                is
            }
            Method::GhdDp => {
                let d = match induced_d(&comp.closure)? {
                    Some(d) => d,
                    None => auto_ghd::<W>(&comp.induced)?,
                };
                max_is_ghd_dp(&comp.induced, &d, Some(s_i))?
            }
            Method::HingeFpt => {
                let d = match induced_d(&comp.closure)? {
                    Some(d) => d,
                    None => hinge_decompose::<W>(&comp.induced),
                };
                max_is_hinge_fpt(&comp.induced, &d, Some(s_i))?
            }
            Method::Approx => {
                let d = match induced_d(&comp.closure)? {
                    Some(d) => d,
                    None => auto_ghd::<W>(&comp.induced)?,
                };
                approx_is(&comp.induced, &d, Some(s_i))?
            }
        };
        if !star.vertices.is_subset(s_i) {
            return Err(Error::Internal("star contains a vertex outside S".into()));
        }
        witnesses.push(StarWitness { size: star.len(), component_index: index, star: star.vertices, cover_edges });
    }
    let size = witnesses.iter().map(|w| w.size).max().unwrap_or(0);
    Ok(StarSize { size, method, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{ghd_search, DecompositionKind};
    use crate::fixtures;
    use crate::generators::{gen_g_star, gen_obs_equivalent};
    use crate::Rational;

    fn names(h: &Hypergraph, vs: &VertexSet) -> Vec<String> {
        vs.iter().map(|&v| h.name(v).to_string()).collect()
    }

    #[test]
    fn example_star_size_is_four_for_every_exact_method() {
        let sh = fixtures::example_s_hypergraph();
        for method in [Method::Brute, Method::Acyclic, Method::GhdDp, Method::HingeFpt] {
            let result = s_star_size::<Rational>(&sh, method, None).unwrap();
            assert_eq!(result.size, 4, "{method}");
            let best = result.best().unwrap();
            assert_eq!(best.component_index, 0);
            assert!(sh.hypergraph.is_independent(&best.star));
        }
        let result = s_star_size::<Rational>(&sh, Method::Brute, None).unwrap();
        assert_eq!(names(&sh.hypergraph, &result.best().unwrap().star), ["v1", "v2", "v3", "v8"]);
    }

    #[test]
    fn example_with_supplied_decomposition() {
        let sh = fixtures::example_s_hypergraph();
        let d: Decomposition = ghd_search(&sh.hypergraph, 3).unwrap().unwrap();
        for method in [Method::GhdDp, Method::Approx] {
            let result = s_star_size(&sh, method, Some(&d)).unwrap();
            assert!(result.size <= 4);
            if method == Method::GhdDp {
                assert_eq!(result.size, 4);
            }
        }
        let hinge: Decomposition = hinge_decompose(&sh.hypergraph);
        assert_eq!(s_star_size(&sh, Method::HingeFpt, Some(&hinge)).unwrap().size, 4);
    }

    #[test]
    fn star_family() {
        for n in 1..6 {
            let sh = gen_g_star(n);
            let result = s_star_size::<Rational>(&sh, Method::Acyclic, None).unwrap();
            assert_eq!(result.size, n);
            assert_eq!(result.witnesses[0].cover_edges.as_ref().unwrap().len(), n);
        }
    }

    #[test]
    fn degenerate_s() {
        let tri = fixtures::triangle();
        let none = SHypergraph::new(tri.clone(), VertexSet::new()).unwrap();
        assert_eq!(s_star_size::<Rational>(&none, Method::Brute, None).unwrap().size, 0);
        let all = SHypergraph::new(tri.clone(), tri.vertices().clone()).unwrap();
        assert_eq!(s_star_size::<Rational>(&all, Method::Brute, None).unwrap().size, 0);
    }

    #[test]
    fn obs_equivalent_triangle() {
        let sh = gen_obs_equivalent(&fixtures::triangle()).unwrap();
        for method in [Method::Brute, Method::GhdDp, Method::HingeFpt] {
            assert_eq!(s_star_size::<Rational>(&sh, method, None).unwrap().size, 1);
        }
    }

    #[test]
    fn approx_on_triangle_single_node() {
        let tri = fixtures::triangle();
        let d: Decomposition = Decomposition::single_node(&tri, DecompositionKind::Ghd);
        let w = approx_is(&tri, &d, None).unwrap();
        assert_eq!((w.len(), w.bound), (1, Some(3)));
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Brute, Method::Acyclic, Method::GhdDp, Method::HingeFpt, Method::Approx] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
    }
}
