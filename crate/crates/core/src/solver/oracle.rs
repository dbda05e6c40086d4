//! Brute-force ground truth: tries every subset by increasing size, each size
//! in lexicographic order, against a direct bitmask reading of the
//! definitions. Shares no code with the branch-and-bound.

use std::time::Instant;

use itertools::Itertools;

use super::{Outcome, SolveResult, SolverError};
use crate::checkers::Variant;
use crate::graph::{Graph, VertexSet};

pub const ORACLE_MAX_VERTICES: usize = 24;

struct Masks {
    n: usize,
    adj: Vec<u32>,
}

impl Masks {
    fn new(g: &Graph) -> Result<Self, SolverError> {
        let n = g.vertex_count();
        if n > ORACLE_MAX_VERTICES {
            return Err(SolverError::OracleCapExceeded {
                vertices: n,
                limit: ORACLE_MAX_VERTICES,
            });
        }
        let adj = (0..n)
            .map(|i| g.neighbor_indices(i).iter().fold(0u32, |m, &j| m | 1 << j))
            .collect();
        Ok(Masks { n, adj })
    }

    fn valid(&self, set: u32, variant: Variant, sigs: &mut Vec<u32>) -> bool {
        sigs.clear();
        for v in 0..self.n {
            let inside = set >> v & 1 == 1;
            let sig = self.adj[v] & set;
            if sig == 0 && (variant.is_total() || !inside) {
                return false;
            }
            if variant.is_locating() && !inside {
                sigs.push(sig);
            }
        }
        sigs.sort_unstable();
        sigs.windows(2).all(|w| w[0] != w[1])
    }

    /// Valid sets of exactly `k` vertices, lexicographic.
    fn of_size(&self, k: usize, variant: Variant) -> impl Iterator<Item = u32> + '_ {
        let mut sigs = Vec::with_capacity(self.n);
        (0..self.n)
            .combinations(k)
            .map(|c| c.iter().fold(0u32, |m, &i| m | 1 << i))
            .filter(move |&m| self.valid(m, variant, &mut sigs))
    }
}

fn mask_to_set(g: &Graph, mask: u32) -> VertexSet {
    (0..g.vertex_count())
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| g.label_at(i))
        .collect()
}

/// First valid subset in (size, lexicographic) order.
pub fn oracle_minimum(g: &Graph, variant: Variant) -> Result<SolveResult, SolverError> {
    let started = Instant::now();
    let masks = Masks::new(g)?;
    let mut tried = 0u64;
    for k in 0..=masks.n {
        let mut it = masks.of_size(k, variant);
        if let Some(m) = it.next() {
            return Ok(SolveResult {
                variant,
                outcome: Outcome::Optimal { value: k },
                witness_set: Some(mask_to_set(g, m)),
                lex_least: true,
                nodes_explored: tried + 1,
                elapsed: started.elapsed(),
            });
        }
        tried += 1;
    }
    Ok(SolveResult {
        variant,
        outcome: Outcome::Infeasible,
        witness_set: None,
        lex_least: false,
        nodes_explored: tried,
        elapsed: started.elapsed(),
    })
}

/// The minimum and all sets attaining it, lexicographic; `None` if infeasible.
pub fn oracle_enumerate(
    g: &Graph,
    variant: Variant,
) -> Result<Option<(usize, Vec<VertexSet>)>, SolverError> {
    let masks = Masks::new(g)?;
    for k in 0..=masks.n {
        let sets: Vec<VertexSet> = masks
            .of_size(k, variant)
            .map(|m| mask_to_set(g, m))
            .collect();
        if !sets.is_empty() {
            return Ok(Some((k, sets)));
        }
    }
    Ok(None)
}
