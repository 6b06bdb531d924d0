//! Relational structures and query instances.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::hypergraph::SHypergraph;
use crate::query::{Atom, Query, VarId};

use super::relation::{Relation, Row, Value};

/// A stored relation: fixed arity, deduplicated rows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub arity: usize,
    pub rows: BTreeSet<Row>,
}

/// Named relations over an interned domain.
#[derive(Clone, Debug, Default)]
pub struct Structure {
    values: Vec<String>,
    index: HashMap<String, Value>,
    tables: BTreeMap<String, Table>,
}

impl Structure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, value: &str) -> Value {
        if let Some(&v) = self.index.get(value) {
            return v;
        }
        let v = Value::try_from(self.values.len()).expect("domain fits in 32 bits");
        self.values.push(value.to_string());
        self.index.insert(value.to_string(), v);
        v
    }

    pub fn value_id(&self, value: &str) -> Option<Value> {
        self.index.get(value).copied()
    }

    pub fn value(&self, v: Value) -> &str {
        &self.values[v as usize]
    }

    pub fn domain(&self) -> &[String] {
        &self.values
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }

    /// Declares `predicate` with `arity`, possibly without rows.
    pub fn declare(&mut self, predicate: &str, arity: usize) -> Result<&mut Table> {
        let table = self.tables.entry(predicate.to_string()).or_insert_with(|| Table { arity, rows: BTreeSet::new() });
        if table.arity != arity {
            return Err(Error::ArityMismatch { predicate: predicate.to_string(), used: arity, stored: table.arity });
        }
        Ok(table)
    }

    /// Adds a fact; returns whether it was new.
    pub fn add_fact(&mut self, predicate: &str, args: &[&str]) -> Result<bool> {
        let row: Row = args.iter().map(|a| self.intern(a)).collect();
        self.add_row(predicate, row)
    }

    /// Adds a row of already interned values.
    pub fn add_row(&mut self, predicate: &str, row: Row) -> Result<bool> {
        debug_assert!(row.iter().all(|&v| (v as usize) < self.values.len()));
        let table = self.declare(predicate, row.len())?;
        Ok(table.rows.insert(row))
    }

    pub fn table(&self, predicate: &str) -> Option<&Table> {
        self.tables.get(predicate)
    }

    pub fn tables(&self) -> &BTreeMap<String, Table> {
        &self.tables
    }

    pub fn num_facts(&self) -> usize {
        self.tables.values().map(|t| t.rows.len()).sum()
    }

    /// Relations as sets of named tuples, independent of interning order.
    pub fn to_named(&self) -> BTreeMap<String, BTreeSet<Vec<String>>> {
        self.tables
            .iter()
            .map(|(name, t)| {
                let rows = t.rows.iter().map(|r| r.iter().map(|&v| self.value(v).to_string()).collect()).collect();
                (name.clone(), rows)
            })
            .collect()
    }
}

impl PartialEq for Structure {
    fn eq(&self, other: &Self) -> bool {
        let arities = |s: &Structure| s.tables.iter().map(|(n, t)| (n.clone(), t.arity)).collect::<Vec<_>>();
        let domain = |s: &Structure| s.values.iter().cloned().collect::<BTreeSet<_>>();
        arities(self) == arities(other) && domain(self) == domain(other) && self.to_named() == other.to_named()
    }
}

impl Eq for Structure {}

/// A query paired with a structure; the unit of counting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryInstance {
    pub query: Query,
    pub structure: Structure,
}

impl QueryInstance {
    /// Predicates without facts are empty relations.
    pub fn new(query: Query, mut structure: Structure) -> Result<Self> {
        if let Some(&v) = query.uncovered_vars().first() {
            return Err(Error::VariableWithoutAtom(query.vars[v].clone()));
        }
        for atom in &query.atoms {
            structure.declare(&atom.predicate, atom.args.len())?;
        }
        Ok(QueryInstance { query, structure })
    }

    pub fn s_hypergraph(&self) -> SHypergraph {
        SHypergraph::from_query(&self.query).expect("validated on construction")
    }

    /// The relation of atom `i` over its distinct variables in order of
    /// first occurrence; repeated variables act as equality filters.
    pub fn atom_relation(&self, i: usize) -> Relation {
        atom_relation(&self.query.atoms[i], &self.structure)
    }

    pub fn free_vars(&self) -> &[VarId] {
        &self.query.free
    }
}

pub(crate) fn atom_relation(atom: &Atom, structure: &Structure) -> Relation {
    let mut schema: Vec<VarId> = Vec::new();
    let mut first: Vec<usize> = Vec::with_capacity(atom.args.len());
    for &v in &atom.args {
        match schema.iter().position(|&s| s == v) {
            Some(p) => first.push(p),
            None => {
                first.push(schema.len());
                schema.push(v);
            }
        }
    }
    let table = structure.table(&atom.predicate).expect("validated predicate");
    let rows = table
        .rows
        .iter()
        .filter_map(|row| {
            let mut out: Vec<Option<Value>> = vec![None; schema.len()];
            for (pos, &p) in first.iter().enumerate() {
                match out[p] {
                    None => out[p] = Some(row[pos]),
                    Some(v) if v != row[pos] => return None,
                    Some(_) => {}
                }
            }
            Some(out.into_iter().map(|v| v.expect("every schema slot is filled")).collect())
        })
        .collect();
    Relation::new(schema, rows)
}
