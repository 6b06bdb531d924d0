//! Relations over variable schemas with set semantics.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};
use crate::query::VarId;

/// Interned domain value.
pub type Value = u32;
pub type Row = Vec<Value>;

/// A set of rows over an ordered list of distinct variables. Rows are kept
/// sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    schema: Vec<VarId>,
    rows: Vec<Row>,
}

impl Relation {
    pub fn new(schema: Vec<VarId>, mut rows: Vec<Row>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == schema.len()), "row width differs from schema");
        debug_assert!(
            {
                let mut s = schema.clone();
                s.sort_unstable();
                s.windows(2).all(|w| w[0] != w[1])
            },
            "schema repeats a variable"
        );
        rows.sort_unstable();
        rows.dedup();
        Relation { schema, rows }
    }

    /// The join identity: no variables, one empty row.
    pub fn unit() -> Self {
        Relation { schema: Vec::new(), rows: vec![Vec::new()] }
    }

    pub fn empty(schema: Vec<VarId>) -> Self {
        Relation { schema, rows: Vec::new() }
    }

    pub fn schema(&self) -> &[VarId] {
        &self.schema
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn contains(&self, row: &[Value]) -> bool {
        self.rows.binary_search_by(|r| r.as_slice().cmp(row)).is_ok()
    }

    pub fn position(&self, v: VarId) -> Option<usize> {
        self.schema.iter().position(|&s| s == v)
    }

    fn positions(&self, vars: &[VarId]) -> Result<Vec<usize>> {
        vars.iter()
            .map(|&v| self.position(v).ok_or_else(|| Error::UnknownVariable(format!("#{v}"))))
            .collect()
    }

    /// Variables shared with `other`, with their positions on both sides.
    fn shared(&self, other: &Relation) -> (Vec<usize>, Vec<usize>) {
        self.schema
            .iter()
            .enumerate()
            .filter_map(|(i, v)| other.position(*v).map(|j| (i, j)))
            .unzip()
    }

    /// Natural join; the schema is this relation's followed by the other's
    /// new variables.
    pub fn natural_join(&self, other: &Relation) -> Relation {
        let (mine, theirs) = self.shared(other);
        let extra: Vec<usize> = (0..other.schema.len()).filter(|j| !theirs.contains(j)).collect();
        let mut schema = self.schema.clone();
        schema.extend(extra.iter().map(|&j| other.schema[j]));

        let mut index: HashMap<Vec<Value>, Vec<&Row>> = HashMap::new();
        for row in &other.rows {
            index.entry(theirs.iter().map(|&j| row[j]).collect()).or_default().push(row);
        }
        let mut rows = Vec::new();
        for row in &self.rows {
            let key: Vec<Value> = mine.iter().map(|&i| row[i]).collect();
            if let Some(matches) = index.get(&key) {
                for m in matches {
                    let mut out = row.clone();
                    out.extend(extra.iter().map(|&j| m[j]));
                    rows.push(out);
                }
            }
        }
        Relation::new(schema, rows)
    }

    /// Rows of this relation that agree with some row of `other`.
    pub fn semijoin(&self, other: &Relation) -> Relation {
        let (mine, theirs) = self.shared(other);
        let keys: std::collections::HashSet<Vec<Value>> =
            other.rows.iter().map(|r| theirs.iter().map(|&j| r[j]).collect()).collect();
        let rows = self
            .rows
            .iter()
            .filter(|r| keys.contains(&mine.iter().map(|&i| r[i]).collect::<Vec<_>>()))
            .cloned()
            .collect();
        Relation { schema: self.schema.clone(), rows }
    }

    pub fn project(&self, vars: &[VarId]) -> Result<Relation> {
        let pos = self.positions(vars)?;
        let rows = self.rows.iter().map(|r| pos.iter().map(|&i| r[i]).collect()).collect();
        Ok(Relation::new(vars.to_vec(), rows))
    }

    /// Projection onto the schema variables that lie in `keep`, in schema
    /// order.
    pub fn project_onto(&self, keep: &std::collections::BTreeSet<VarId>) -> Relation {
        let vars: Vec<VarId> = self.schema.iter().copied().filter(|v| keep.contains(v)).collect();
        self.project(&vars).expect("variables come from the schema")
    }

    pub fn select(&self, binding: &[(VarId, Value)]) -> Result<Relation> {
        let checks: Vec<(usize, Value)> = binding
            .iter()
            .map(|&(v, val)| self.position(v).map(|i| (i, val)).ok_or_else(|| Error::UnknownVariable(format!("#{v}"))))
            .collect::<Result<_>>()?;
        let rows = self.rows.iter().filter(|r| checks.iter().all(|&(i, val)| r[i] == val)).cloned().collect();
        Ok(Relation { schema: self.schema.clone(), rows })
    }

    /// Rows as variable-to-value maps; handy in tests.
    pub fn assignments(&self) -> Vec<BTreeMap<VarId, Value>> {
        self.rows.iter().map(|r| self.schema.iter().copied().zip(r.iter().copied()).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const X: VarId = 0;
    const Y: VarId = 1;
    const Z: VarId = 2;
    const A: Value = 0;
    const B: Value = 1;
    const C: Value = 2;
    const D: Value = 3;

    #[test]
    fn join_on_shared_variable() {
        let r = Relation::new(vec![X, Y], vec![vec![A, B], vec![A, C]]);
        let s = Relation::new(vec![Y, Z], vec![vec![B, D]]);
        let j = r.natural_join(&s);
        assert_eq!(j.schema(), &[X, Y, Z]);
        assert_eq!(j.rows(), &[vec![A, B, D]]);
    }

    #[test]
    fn join_with_empty_and_disjoint() {
        let r = Relation::new(vec![X], vec![vec![A], vec![B]]);
        assert!(r.natural_join(&Relation::empty(vec![X, Y])).is_empty());
        let s = Relation::new(vec![Y], vec![vec![A], vec![B], vec![C]]);
        assert_eq!(r.natural_join(&s).len(), 6);
        assert_eq!(r.natural_join(&Relation::unit()), r);
    }

    #[test]
    fn project_and_select() {
        let r = Relation::new(vec![X, Y], vec![vec![A, B], vec![A, C], vec![B, C]]);
        assert_eq!(r.project(&[X]).unwrap().rows(), &[vec![A], vec![B]]);
        assert_eq!(r.select(&[]).unwrap(), r);
        assert_eq!(r.select(&[(X, A)]).unwrap().rows(), &[vec![A, B], vec![A, C]]);
        assert!(matches!(r.project(&[Z]), Err(Error::UnknownVariable(_))));
        assert!(r.select(&[(Z, A)]).is_err());
    }

    #[test]
    fn semijoin_filters() {
        let r = Relation::new(vec![X, Y], vec![vec![A, B], vec![A, C]]);
        let s = Relation::new(vec![Y, Z], vec![vec![B, D]]);
        assert_eq!(r.semijoin(&s).rows(), &[vec![A, B]]);
        assert!(r.contains(&[A, C]));
    }
}
