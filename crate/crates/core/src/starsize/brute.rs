use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, VertexSet};

use super::{candidates, ISWitness, Method};

pub const DEFAULT_BRUTE_CUTOFF: usize = 24;

pub fn max_is_brute(h: &Hypergraph, restrict_to: Option<&VertexSet>) -> Result<ISWitness> {
    max_is_brute_with(h, restrict_to, DEFAULT_BRUTE_CUTOFF)
}

/// Exhaustive branch and bound over the candidates in increasing order,
/// including before excluding, so the first maximum found is the
/// lexicographically smallest.
pub fn max_is_brute_with(h: &Hypergraph, restrict_to: Option<&VertexSet>, cutoff: usize) -> Result<ISWitness> {
    let cands: Vec<usize> = candidates(h, restrict_to)?.into_iter().collect();
    if cands.len() > cutoff.min(64) {
        return Err(Error::TooLarge(format!("{} candidate vertices exceed the cutoff {cutoff}", cands.len())));
    }
    let n = cands.len();
    let mut conflicts = vec![0u64; n];
    for e in h.edges() {
        let inside: Vec<usize> = (0..n).filter(|&i| e.vertices.contains(&cands[i])).collect();
        for &i in &inside {
            for &j in &inside {
                if i != j {
                    conflicts[i] |= 1 << j;
                }
            }
        }
    }

    struct Search<'a> {
        conflicts: &'a [u64],
        best: Option<u64>,
    }

    impl Search<'_> {
        fn run(&mut self, i: usize, chosen: u64, blocked: u64) {
            let n = self.conflicts.len();
            let best_len = self.best.map(u64::count_ones);
            if i == n {
                if best_len.is_none_or(|b| chosen.count_ones() > b) {
                    self.best = Some(chosen);
                }
                return;
            }
            let open = (i..n).filter(|&j| blocked & (1 << j) == 0).count() as u32;
            if best_len.is_some_and(|b| chosen.count_ones() + open <= b) {
                return;
            }
            if blocked & (1 << i) == 0 {
                self.run(i + 1, chosen | (1 << i), blocked | self.conflicts[i]);
            }
            self.run(i + 1, chosen, blocked);
        }
    }

    let mut search = Search { conflicts: &conflicts, best: None };
    search.run(0, 0, 0);
    let best = search.best.expect("the search reaches at least one leaf");
    let vertices = (0..n).filter(|&i| best & (1 << i) != 0).map(|i| cands[i]).collect();
    ISWitness::checked(h, vertices, Method::Brute, None)
}
