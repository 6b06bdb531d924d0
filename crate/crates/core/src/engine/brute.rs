//! Counting by exhaustive search, used as an oracle.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::query::VarId;
use crate::scalar::{count_from_usize, Count};

use super::{CountMethod, CountResult, CountStats, QueryInstance, Relation, Value};

/// Default limit on `|free| · log2 |D|`, the bits needed to name a
/// candidate answer.
pub const DEFAULT_BRUTE_BITS: f64 = 16.0;

pub fn count_brute<C: Count>(inst: &QueryInstance) -> Result<CountResult<C>> {
    count_brute_with(inst, DEFAULT_BRUTE_BITS)
}

/// Walks the assignments of the free variables in domain order and decides
/// for each whether some assignment of the quantified variables satisfies
/// every atom.
pub fn count_brute_with<C: Count>(inst: &QueryInstance, max_bits: f64) -> Result<CountResult<C>> {
    let free = inst.free_vars();
    let domain = inst.structure.domain_size();
    let bits = free.len() as f64 * (domain.max(1) as f64).log2();
    if bits > max_bits {
        return Err(Error::TooLarge(format!("{} free variables over a domain of {domain} need {bits:.1} bits, limit {max_bits}", free.len())));
    }
    let free_set: BTreeSet<VarId> = free.iter().copied().collect();
    let order: Vec<VarId> = free.iter().copied().chain((0..inst.query.vars.len()).filter(|v| !free_set.contains(v))).collect();
    let atoms: Vec<Relation> = (0..inst.query.atoms.len()).map(|i| inst.atom_relation(i)).collect();

    let mut rank = vec![0usize; inst.query.vars.len()];
    for (i, &v) in order.iter().enumerate() {
        rank[v] = i;
    }
    // atom checked once its last variable (in search order) is assigned
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); order.len()];
    for (a, rel) in atoms.iter().enumerate() {
        if let Some(last) = rel.schema().iter().map(|&v| rank[v]).max() {
            due[last].push(a);
        }
    }
    // values a variable may take: those in every column it occupies
    let candidates: Vec<Vec<Value>> = order
        .iter()
        .map(|&v| {
            let mut values: Option<BTreeSet<Value>> = None;
            for rel in &atoms {
                if let Some(p) = rel.position(v) {
                    let column: BTreeSet<Value> = rel.rows().iter().map(|r| r[p]).collect();
                    values = Some(match values {
                        None => column,
                        Some(old) => old.intersection(&column).copied().collect(),
                    });
                }
            }
            values.unwrap_or_default().into_iter().collect()
        })
        .collect();

    let search = Search { order: &order, atoms: &atoms, due: &due, candidates: &candidates, free: free.len() };
    let mut assignment = vec![0; inst.query.vars.len()];
    let mut count = 0u64;
    search.answers(0, &mut assignment, &mut count);
    if atoms.iter().any(|r| r.schema().is_empty() && r.is_empty()) {
        count = 0;
    }
    let stats = CountStats { components: 0, ..CountStats::default() };
    Ok(CountResult { count: count_from_usize(count as usize), method: CountMethod::Brute, stats })
}

struct Search<'a> {
    order: &'a [VarId],
    atoms: &'a [Relation],
    due: &'a [Vec<usize>],
    candidates: &'a [Vec<Value>],
    free: usize,
}

impl Search<'_> {
    fn consistent(&self, depth: usize, assignment: &[Value]) -> bool {
        self.due[depth].iter().all(|&a| {
            let rel = &self.atoms[a];
            let row: Vec<Value> = rel.schema().iter().map(|&v| assignment[v]).collect();
            rel.contains(&row)
        })
    }

    fn answers(&self, depth: usize, assignment: &mut [Value], count: &mut u64) {
        if depth == self.free {
            if self.extends(depth, assignment) {
                *count += 1;
            }
            return;
        }
        let v = self.order[depth];
        for &x in &self.candidates[depth] {
            assignment[v] = x;
            if self.consistent(depth, assignment) {
                self.answers(depth + 1, assignment, count);
            }
        }
    }

    fn extends(&self, depth: usize, assignment: &mut [Value]) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        self.candidates[depth].iter().any(|&x| {
            assignment[v] = x;
            self.consistent(depth, assignment) && self.extends(depth + 1, assignment)
        })
    }
}
