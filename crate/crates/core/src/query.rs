//! Conjunctive queries `ans(x̄) :- A1(..), ..., An(..)`.
//!
//! Head variables are free, every other body variable is existentially
//! quantified. Variables are numbered by first appearance in the body, with
//! head-only variables (which are rejected later) numbered after them.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

pub type VarId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<VarId>,
}

impl Atom {
    /// Distinct variables of the atom, i.e. its hyperedge.
    pub fn var_set(&self) -> BTreeSet<VarId> {
        self.args.iter().copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub head: String,
    pub vars: Vec<String>,
    pub free: Vec<VarId>,
    pub atoms: Vec<Atom>,
}

impl Query {
    /// Builds a query from variable names.
    ///
    /// ```
    /// use cqstar::Query;
    /// let q = Query::from_names("ans", &["x"], &[("R", &["x", "y"])]).unwrap();
    /// assert_eq!(q.vars, vec!["x", "y"]);
    /// ```
    pub fn from_names(head: &str, free: &[&str], atoms: &[(&str, &[&str])]) -> Result<Query> {
        let mut builder = QueryBuilder::new(head);
        for (predicate, args) in atoms {
            builder.atom(predicate, args.iter().copied());
        }
        builder.free(free.iter().copied())?;
        Ok(builder.finish())
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.vars[v]
    }

    pub fn free_set(&self) -> BTreeSet<VarId> {
        self.free.iter().copied().collect()
    }

    pub fn is_quantifier_free(&self) -> bool {
        self.free.len() == self.vars.len()
    }

    pub fn is_boolean(&self) -> bool {
        self.free.is_empty()
    }

    /// Variables that occur in no atom.
    pub fn uncovered_vars(&self) -> Vec<VarId> {
        let mut seen = vec![false; self.vars.len()];
        for atom in &self.atoms {
            for &v in &atom.args {
                seen[v] = true;
            }
        }
        (0..self.vars.len()).filter(|&v| !seen[v]).collect()
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<&str> = self.free.iter().map(|&v| self.var_name(v)).collect();
        write!(f, "{}({}) :- ", self.head, head.join(","))?;
        for (i, atom) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let args: Vec<&str> = atom.args.iter().map(|&v| self.var_name(v)).collect();
            write!(f, "{}({})", atom.predicate, args.join(","))?;
        }
        write!(f, ".")
    }
}

/// Incremental construction used by the parser and the generators.
#[derive(Debug)]
pub struct QueryBuilder {
    head: String,
    vars: Vec<String>,
    free: Vec<VarId>,
    atoms: Vec<Atom>,
}

impl QueryBuilder {
    pub fn new(head: &str) -> Self {
        QueryBuilder { head: head.to_string(), vars: Vec::new(), free: Vec::new(), atoms: Vec::new() }
    }

    fn intern(&mut self, name: &str) -> VarId {
        match self.vars.iter().position(|v| v == name) {
            Some(id) => id,
            None => {
                self.vars.push(name.to_string());
                self.vars.len() - 1
            }
        }
    }

    pub fn atom<'a>(&mut self, predicate: &str, args: impl IntoIterator<Item = &'a str>) -> &mut Self {
        let args = args.into_iter().map(|a| self.intern(a)).collect();
        self.atoms.push(Atom { predicate: predicate.to_string(), args });
        self
    }

    /// Declares the head variables. Must be called after all atoms so that
    /// variable ids follow body order.
    pub fn free<'a>(&mut self, names: impl IntoIterator<Item = &'a str>) -> Result<&mut Self> {
        for name in names {
            let id = self.intern(name);
            if self.free.contains(&id) {
                return Err(Error::InvalidInput(format!("head variable `{name}` listed twice")));
            }
            self.free.push(id);
        }
        Ok(self)
    }

    pub fn finish(self) -> Query {
        Query { head: self.head, vars: self.vars, free: self.free, atoms: self.atoms }
    }
}
