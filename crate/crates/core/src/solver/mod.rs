//! Exact minimum sets for the four variants.
//!
//! [`oracle_minimum`] is a plain subset enumerator used as ground truth on
//! small graphs. [`Solver`] runs iterative deepening over the set size with
//! the branch-and-bound in `search`, and can enumerate every minimum set.

mod bits;
pub mod oracle;
mod search;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use oracle::{oracle_enumerate, oracle_minimum, ORACLE_MAX_VERTICES};

use crate::checkers::Variant;
use crate::graph::{Graph, VertexSet};
use search::{Flow, Instance, Limits};

/// Largest graph handed to the branch-and-bound.
pub const SOLVER_MAX_VERTICES: usize = 1 << 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("oracle cap exceeded: {vertices} vertices (limit {limit})")]
    OracleCapExceeded { vertices: usize, limit: usize },
    #[error("graph too large for exact search: {vertices} vertices (limit {limit})")]
    TooLarge { vertices: usize, limit: usize },
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Optimal {
        value: usize,
    },
    /// No subset of the vertices satisfies the variant.
    Infeasible,
    /// The time limit ran out; the minimum lies in `lower..=upper`.
    BoundOnly {
        lower: usize,
        upper: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveResult {
    pub variant: Variant,
    pub outcome: Outcome,
    /// A minimum set when optimal, the best known set when bound-only.
    pub witness_set: Option<VertexSet>,
    /// Whether `witness_set` is the lexicographically least minimum set.
    pub lex_least: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

impl SolveResult {
    pub fn value(&self) -> Option<usize> {
        match self.outcome {
            Outcome::Optimal { value } => Some(value),
            _ => None,
        }
    }

    pub fn is_infeasible(&self) -> bool {
        self.outcome == Outcome::Infeasible
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    pub time_limit: Option<Duration>,
    pub workers: usize,
    /// Report the lexicographically least minimum set.
    pub deterministic: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            time_limit: None,
            workers: 1,
            deterministic: true,
        }
    }
}

/// All minimum sets, in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub minimum: Option<usize>,
    pub sets: Vec<VertexSet>,
    pub truncated: bool,
}

/// Smallest `k` with `2^k - 1 >= n - k`.
pub fn locating_lower_bound(n: usize) -> usize {
    (0..=n)
        .find(|&k| k >= 64 || (1u128 << k) > (n - k) as u128)
        .unwrap_or(n)
}

fn seed_lower_bound(n: usize, max_degree: usize, variant: Variant) -> usize {
    if n == 0 {
        return 0;
    }
    let reach = if variant.is_total() {
        max_degree.max(1)
    } else {
        max_degree + 1
    };
    let mut lb = n.div_ceil(reach);
    if variant.is_locating() {
        lb = lb.max(locating_lower_bound(n));
    }
    lb
}

fn to_set(g: &Graph, members: &[u32]) -> VertexSet {
    members.iter().map(|&i| g.label_at(i as usize)).collect()
}

pub struct Solver {
    config: SolverConfig,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        Solver { config }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn solve(&self, g: &Graph, variant: Variant) -> Result<SolveResult, SolverError> {
        let started = Instant::now();
        let n = g.vertex_count();
        if n > SOLVER_MAX_VERTICES {
            return Err(SolverError::TooLarge {
                vertices: n,
                limit: SOLVER_MAX_VERTICES,
            });
        }
        let pool = self.pool()?;
        let inst = Instance::new(g, variant);
        let nodes = AtomicU64::new(0);
        let timed_out = AtomicBool::new(false);
        let deadline = self.config.time_limit.map(|t| started + t);
        let finish =
            |outcome, witness: Option<Vec<u32>>, lex_least, nodes: &AtomicU64| SolveResult {
                variant,
                outcome,
                witness_set: witness.map(|w| to_set(g, &w)),
                lex_least,
                nodes_explored: nodes.load(Ordering::Relaxed),
                elapsed: started.elapsed(),
            };

        let Some(greedy) = inst.greedy() else {
            return Ok(finish(Outcome::Infeasible, None, false, &nodes));
        };
        let upper = greedy.len();
        let lower = seed_lower_bound(n, inst.max_degree(), variant);

        let mut best: Option<(usize, Vec<u32>)> = None;
        for k in lower..upper {
            if variant.is_locating() && locating_lower_bound(n) > k {
                continue;
            }
            let stop = AtomicBool::new(false);
            let limits = Limits {
                deadline,
                stop: &stop,
                timed_out: &timed_out,
                nodes: &nodes,
            };
            match inst.find(&inst.empty_state(), k, &limits, pool.as_ref()) {
                (Flow::Found, Some(set)) => {
                    best = Some((set.len(), set));
                    break;
                }
                (Flow::Aborted, _) => {
                    let outcome = Outcome::BoundOnly { lower: k, upper };
                    return Ok(finish(outcome, Some(greedy), false, &nodes));
                }
                _ => {}
            }
        }
        let (value, witness) = best.unwrap_or((upper, greedy));

        if !self.config.deterministic {
            return Ok(finish(
                Outcome::Optimal { value },
                Some(witness),
                false,
                &nodes,
            ));
        }
        let stop = AtomicBool::new(false);
        let limits = Limits {
            deadline,
            stop: &stop,
            timed_out: &timed_out,
            nodes: &nodes,
        };
        let (witness, complete) = lex_least(&inst, value, witness, &limits, pool.as_ref());
        Ok(finish(
            Outcome::Optimal { value },
            Some(witness),
            complete,
            &nodes,
        ))
    }

    /// Every minimum set, sorted, cut off after `cap` entries.
    pub fn enumerate_minimum_sets(
        &self,
        g: &Graph,
        variant: Variant,
        cap: usize,
    ) -> Result<Enumeration, SolverError> {
        let n = g.vertex_count();
        if n > ORACLE_MAX_VERTICES {
            return Err(SolverError::OracleCapExceeded {
                vertices: n,
                limit: ORACLE_MAX_VERTICES,
            });
        }
        let exact = Solver::new(SolverConfig {
            time_limit: None,
            workers: 1,
            deterministic: false,
        });
        let Some(minimum) = exact.solve(g, variant)?.value() else {
            return Ok(Enumeration {
                minimum: None,
                sets: Vec::new(),
                truncated: false,
            });
        };
        let inst = Instance::new(g, variant);
        let (stop, timed_out, nodes) = (
            AtomicBool::new(false),
            AtomicBool::new(false),
            AtomicU64::new(0),
        );
        let limits = Limits {
            deadline: None,
            stop: &stop,
            timed_out: &timed_out,
            nodes: &nodes,
        };
        let (_, found) = inst.enumerate(minimum, &limits);
        let mut sets: Vec<VertexSet> = found.iter().map(|m| to_set(g, m)).collect();
        sets.sort();
        let truncated = sets.len() > cap;
        sets.truncate(cap);
        Ok(Enumeration {
            minimum: Some(minimum),
            sets,
            truncated,
        })
    }

    fn pool(&self) -> Result<Option<rayon::ThreadPool>, SolverError> {
        if self.config.workers <= 1 {
            return Ok(None);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.config.workers)
            .build()
            .map(Some)
            .map_err(|e| SolverError::Pool(e.to_string()))
    }
}

/// Walks labels upward, keeping a vertex whenever some minimum set agrees
/// with every decision so far and contains it.
fn lex_least(
    inst: &Instance,
    k: usize,
    mut current: Vec<u32>,
    limits: &Limits,
    pool: Option<&rayon::ThreadPool>,
) -> (Vec<u32>, bool) {
    current.sort_unstable();
    let mut base = inst.empty_state();
    let mut chosen = 0;
    for v in 0..inst.n as u32 {
        if chosen == k {
            break;
        }
        if current.binary_search(&v).is_ok() {
            inst.add(&mut base, v);
            chosen += 1;
            continue;
        }
        let mut trial = base.clone();
        inst.add(&mut trial, v);
        limits.stop.store(false, Ordering::Relaxed);
        match inst.find(&trial, k, limits, pool) {
            (Flow::Found, Some(set)) => {
                current = set;
                current.sort_unstable();
                base = trial;
                chosen += 1;
            }
            (Flow::Aborted, _) => return (current, false),
            _ => inst.forbid(&mut base, v),
        }
    }
    let mut members = base.members().to_vec();
    members.sort_unstable();
    (members, true)
}

/// Exact minimum with the given time limit and default settings.
pub fn solve_minimum(
    g: &Graph,
    variant: Variant,
    time_limit: Option<Duration>,
) -> Result<SolveResult, SolverError> {
    Solver::new(SolverConfig {
        time_limit,
        ..SolverConfig::default()
    })
    .solve(g, variant)
}

/// Every minimum set (sequential search), at most `cap` of them.
pub fn enumerate_minimum_sets(
    g: &Graph,
    variant: Variant,
    cap: usize,
) -> Result<Enumeration, SolverError> {
    Solver::new(SolverConfig::default()).enumerate_minimum_sets(g, variant, cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkers::check;
    use crate::generators::{generate, Family, FamilySpec};

    fn g(family: Family, n: u32) -> Graph {
        generate(FamilySpec::new(family, n).unwrap()).unwrap()
    }

    fn path3() -> Graph {
        Graph::from_edges([1, 2, 3], [(1, 2), (2, 3)]).unwrap()
    }

    fn value(g: &Graph, v: Variant) -> usize {
        solve_minimum(g, v, None).unwrap().value().unwrap()
    }

    #[test]
    fn locating_bound() {
        assert_eq!(locating_lower_bound(0), 0);
        assert_eq!(locating_lower_bound(1), 1);
        assert_eq!(locating_lower_bound(3), 2);
        assert_eq!(locating_lower_bound(15), 4);
        assert_eq!(locating_lower_bound(16), 4);
        assert_eq!(locating_lower_bound(31), 5);
    }

    #[test]
    fn small_values() {
        assert_eq!(
            value(
                &g(Family::RootFaultHypertree, 2),
                Variant::LocatingDominating
            ),
            3
        );
        assert_eq!(
            value(&g(Family::SiblingTree, 2), Variant::LocatingTotalDominating),
            4
        );
        assert_eq!(value(&path3(), Variant::LocatingDominating), 2);
        assert_eq!(value(&g(Family::Hypertree, 3), Variant::Dominating), 5);
        assert_eq!(
            value(
                &g(Family::RootFaultHypertree, 3),
                Variant::LocatingDominating
            ),
            6
        );
        assert_eq!(
            value(&g(Family::SiblingTree, 3), Variant::LocatingTotalDominating),
            9
        );
    }

    #[test]
    fn infeasible_total_domination() {
        let k1 = g(Family::Hypertree, 0);
        let r = solve_minimum(&k1, Variant::TotalDominating, None).unwrap();
        assert!(r.is_infeasible());
        assert!(r.witness_set.is_none());
        let r = solve_minimum(&k1, Variant::LocatingTotalDominating, None).unwrap();
        assert!(r.is_infeasible());
        assert_eq!(value(&k1, Variant::Dominating), 1);
    }

    #[test]
    fn empty_graph_needs_nothing() {
        let empty = Graph::from_edges([], []).unwrap();
        for v in Variant::ALL {
            let r = solve_minimum(&empty, v, None).unwrap();
            assert_eq!(r.value(), Some(0));
            assert_eq!(r.witness_set, Some(VertexSet::new()));
        }
    }

    #[test]
    fn witness_is_lex_least_and_valid() {
        let ht3 = g(Family::Hypertree, 3);
        for v in Variant::ALL {
            let r = solve_minimum(&ht3, v, None).unwrap();
            let oracle = oracle_minimum(&ht3, v).unwrap();
            assert_eq!(r.witness_set, oracle.witness_set, "{v}");
            assert!(r.lex_least);
            assert!(
                check(&ht3, r.witness_set.as_ref().unwrap(), v)
                    .unwrap()
                    .valid
            );
        }
    }

    #[test]
    fn parallel_runs_match_sequential() {
        let st3 = g(Family::SiblingTree, 3);
        let seq = solve_minimum(&st3, Variant::LocatingTotalDominating, None).unwrap();
        let par = Solver::new(SolverConfig {
            workers: 4,
            ..SolverConfig::default()
        })
        .solve(&st3, Variant::LocatingTotalDominating)
        .unwrap();
        assert_eq!(seq.outcome, par.outcome);
        assert_eq!(seq.witness_set, par.witness_set);
    }

    #[test]
    fn time_limit_gives_bounds() {
        let ht5 = g(Family::Hypertree, 5);
        let r = solve_minimum(
            &ht5,
            Variant::LocatingDominating,
            Some(Duration::from_millis(1)),
        )
        .unwrap();
        match r.outcome {
            Outcome::BoundOnly { lower, upper } => {
                assert!(lower <= upper);
                let w = r.witness_set.unwrap();
                assert_eq!(w.len(), upper);
                assert!(check(&ht5, &w, Variant::LocatingDominating).unwrap().valid);
            }
            other => panic!("expected bounds, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_examples() {
        let k3 = g(Family::Hypertree, 1);
        let e = enumerate_minimum_sets(&k3, Variant::Dominating, 100).unwrap();
        assert_eq!(
            e.sets,
            vec![
                VertexSet::from([1]),
                VertexSet::from([2]),
                VertexSet::from([3])
            ]
        );
        assert!(!e.truncated);

        let ht2 = g(Family::Hypertree, 2);
        let e = enumerate_minimum_sets(&ht2, Variant::LocatingDominating, 1000).unwrap();
        assert!(e.sets.contains(&VertexSet::from([2, 3, 4])));

        let star2 = g(Family::RootFaultHypertree, 2);
        let e = enumerate_minimum_sets(&star2, Variant::Dominating, 1000).unwrap();
        assert!(e.sets.contains(&VertexSet::from([2, 3])));

        let e = enumerate_minimum_sets(&k3, Variant::Dominating, 2).unwrap();
        assert_eq!(e.sets.len(), 2);
        assert!(e.truncated);
    }

    #[test]
    fn enumeration_respects_cap() {
        let big = g(Family::Hypertree, 4);
        assert!(matches!(
            enumerate_minimum_sets(&big, Variant::Dominating, 10),
            Err(SolverError::OracleCapExceeded { .. })
        ));
    }
}
