use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{ParseError, SourceSpan};
use crate::decomposition::{Decomposition, DecompositionKind, Node};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};
use crate::scalar::Weight;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    kind: DecompositionKind,
    nodes: Vec<NodeDocument>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDocument {
    id: usize,
    parent: Option<usize>,
    lambda: Vec<usize>,
    chi: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<BTreeMap<String, String>>,
}

/// Reads a decomposition document. Guards are atom ordinals (edge ids of
/// `h`), bags are variable names.
pub fn read_decomposition<W: Weight>(text: &str, h: &Hypergraph, file: Option<&str>) -> Result<Decomposition<W>> {
    let doc: Document = serde_json::from_str(text).map_err(|e| {
        let span = SourceSpan::new(file, e.line(), e.column(), e.column());
        Error::Parse(ParseError::new(span, e.to_string()))
    })?;
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    for n in doc.nodes {
        let guard: BTreeSet<usize> = n.lambda.into_iter().collect();
        if let Some(&e) = guard.iter().find(|&&e| h.edge(e).is_none()) {
            return Err(Error::IdMismatch(format!("atom ordinal {e} in node {}", n.id)));
        }
        let bag: VertexSet = n
            .chi
            .iter()
            .map(|name| h.vertex_by_name(name).ok_or_else(|| Error::UnknownVariable(name.clone())))
            .collect::<Result<_>>()?;
        let mut weights = BTreeMap::new();
        for (key, value) in n.weights.unwrap_or_default() {
            let e: usize = key
                .parse()
                .map_err(|_| Error::InvalidInput(format!("weight key `{key}` in node {} is not an atom ordinal", n.id)))?;
            if h.edge(e).is_none() {
                return Err(Error::IdMismatch(format!("atom ordinal {e} in weights of node {}", n.id)));
            }
            let w = W::parse_weight(&value)
                .ok_or_else(|| Error::InvalidInput(format!("weight `{value}` in node {} is not a number", n.id)))?;
            weights.insert(e, w);
        }
        nodes.push(Node { id: n.id, parent: n.parent, guard, bag, weights });
    }
    Ok(Decomposition::new(doc.kind, nodes))
}

/// Writes a decomposition document; weights appear only for fractional
/// decompositions.
pub fn write_decomposition<W: Weight>(d: &Decomposition<W>, h: &Hypergraph) -> String {
    let doc = Document {
        kind: d.kind,
        nodes: d
            .nodes
            .iter()
            .map(|n| NodeDocument {
                id: n.id,
                parent: n.parent,
                lambda: n.guard.iter().copied().collect(),
                chi: n.bag.iter().map(|&v| h.name(v).to_string()).collect(),
                weights: (d.kind == DecompositionKind::Fractional)
                    .then(|| n.weights.iter().map(|(e, w)| (e.to_string(), w.format_weight())).collect()),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("documents serialize") + "\n"
}
