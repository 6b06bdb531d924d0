use crate::hypergraph::{Hypergraph, VertexId, VertexSet};

/// Every independent set of `h`, the empty set included, in lexicographic
/// order of their sorted vertex lists.
pub fn enumerate_is(h: &Hypergraph) -> IndependentSets {
    let vertices: Vec<VertexId> = h.vertices().iter().copied().collect();
    let n = vertices.len();
    let mut conflicts = vec![vec![false; n]; n];
    for e in h.edges() {
        let inside: Vec<usize> = (0..n).filter(|&i| e.vertices.contains(&vertices[i])).collect();
        for &i in &inside {
            for &j in &inside {
                conflicts[i][j] |= i != j;
            }
        }
    }
    IndependentSets { vertices, conflicts, stack: Vec::new(), started: false }
}

/// Iterator returned by [`enumerate_is`].
#[derive(Clone, Debug)]
pub struct IndependentSets {
    vertices: Vec<VertexId>,
    conflicts: Vec<Vec<bool>>,
    /// Positions of the current set, increasing.
    stack: Vec<usize>,
    started: bool,
}

impl IndependentSets {
    fn fits(&self, i: usize) -> bool {
        self.stack.iter().all(|&s| !self.conflicts[s][i])
    }

    fn current(&self) -> VertexSet {
        self.stack.iter().map(|&i| self.vertices[i]).collect()
    }
}

impl Iterator for IndependentSets {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        // extend by the smallest fitting vertex, else advance the last one
        let mut from = self.stack.last().map_or(0, |&i| i + 1);
        loop {
            if let Some(i) = (from..self.vertices.len()).find(|&i| self.fits(i)) {
                self.stack.push(i);
                return Some(self.current());
            }
            let last = self.stack.pop()?;
            from = last + 1;
        }
    }
}
