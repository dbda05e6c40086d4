//! Branch-and-bound core.
//!
//! Every variant is an upward-closed property, so a partial set `S` can only
//! be completed by adding vertices. At each node the search collects the
//! obligations `S` still fails (an undominated vertex, an isolated member, a
//! pair of non-members sharing a signature). Each obligation is a candidate
//! set that any completion must hit. The tightest obligation is branched on;
//! branch `i` adds candidate `i` and forbids candidates `0..i`, so every
//! completion is reached exactly once. A greedy packing of pairwise disjoint
//! obligations gives the admissible lower bound.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use super::bits::Bits;
use crate::checkers::Variant;
use crate::graph::Graph;

pub(crate) struct Instance {
    pub n: usize,
    variant: Variant,
    adj: Vec<Vec<u32>>,
    /// Candidate order: descending degree, then ascending label.
    rank: Vec<u32>,
    keys: Vec<u64>,
}

#[derive(Clone)]
pub(crate) struct State {
    in_set: Bits,
    forbidden: Bits,
    cover: Vec<u32>,
    hash: Vec<u64>,
    members: Vec<u32>,
}

impl State {
    pub fn members(&self) -> &[u32] {
        &self.members
    }
}

enum Analysis {
    Infeasible,
    Satisfied,
    Branch { lower: usize, candidates: Vec<u32> },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Flow {
    Continue,
    Found,
    Aborted,
}

#[derive(Default)]
struct Scratch {
    items: Vec<u32>,
    spans: Vec<(u32, u32)>,
    keyed: Vec<(u64, u32)>,
    order: Vec<u32>,
    merged: Vec<u32>,
}

pub(crate) struct Limits<'a> {
    pub deadline: Option<Instant>,
    pub stop: &'a AtomicBool,
    pub timed_out: &'a AtomicBool,
    pub nodes: &'a AtomicU64,
}

struct Ctx<'a, 'b> {
    limits: &'b Limits<'a>,
    local_nodes: u64,
    enumerate: bool,
    found: Option<Vec<u32>>,
    all: Vec<Vec<u32>>,
    scratch: Scratch,
}

impl Ctx<'_, '_> {
    fn tick(&mut self) -> bool {
        self.local_nodes += 1;
        if self.local_nodes & 255 == 0 {
            self.limits.nodes.fetch_add(256, Ordering::Relaxed);
            if self.limits.stop.load(Ordering::Relaxed) {
                return false;
            }
            if let Some(d) = self.limits.deadline {
                if Instant::now() >= d {
                    self.limits.timed_out.store(true, Ordering::Relaxed);
                    self.limits.stop.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        true
    }

    fn flush(&mut self) {
        self.limits
            .nodes
            .fetch_add(self.local_nodes & 255, Ordering::Relaxed);
        self.local_nodes = 0;
    }
}

/// splitmix64, used only to derive fixed per-vertex signature keys.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Instance {
    pub fn new(g: &Graph, variant: Variant) -> Self {
        let n = g.vertex_count();
        let adj: Vec<Vec<u32>> = (0..n).map(|i| g.neighbor_indices(i).to_vec()).collect();
        let mut by_rank: Vec<u32> = (0..n as u32).collect();
        by_rank.sort_by_key(|&i| (std::cmp::Reverse(adj[i as usize].len()), i));
        let mut rank = vec![0u32; n];
        for (r, &i) in by_rank.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        let keys = (0..n as u64).map(|i| mix(i ^ 0x5eed_0000_0000)).collect();
        Instance {
            n,
            variant,
            adj,
            rank,
            keys,
        }
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn empty_state(&self) -> State {
        State {
            in_set: Bits::new(self.n),
            forbidden: Bits::new(self.n),
            cover: vec![0; self.n],
            hash: vec![0; self.n],
            members: Vec::new(),
        }
    }

    pub fn add(&self, st: &mut State, v: u32) {
        st.in_set.insert(v);
        st.members.push(v);
        for &w in &self.adj[v as usize] {
            st.cover[w as usize] += 1;
            st.hash[w as usize] ^= self.keys[v as usize];
        }
    }

    fn remove(&self, st: &mut State, v: u32) {
        debug_assert_eq!(st.members.last(), Some(&v));
        st.members.pop();
        st.in_set.remove(v);
        for &w in &self.adj[v as usize] {
            st.cover[w as usize] -= 1;
            st.hash[w as usize] ^= self.keys[v as usize];
        }
    }

    pub fn forbid(&self, st: &mut State, v: u32) {
        st.forbidden.insert(v);
    }

    fn cmp_signatures(&self, st: &State, a: u32, b: u32) -> std::cmp::Ordering {
        let sa = self.adj[a as usize]
            .iter()
            .filter(|&&w| st.in_set.contains(w));
        let sb = self.adj[b as usize]
            .iter()
            .filter(|&&w| st.in_set.contains(w));
        sa.cmp(sb)
    }

    /// Pushes one obligation; returns false if it has no allowed candidate.
    fn push_span(&self, st: &State, sc: &mut Scratch, from: usize) -> bool {
        let mut w = from;
        for r in from..sc.items.len() {
            let c = sc.items[r];
            if !st.forbidden.contains(c) {
                sc.items[w] = c;
                w += 1;
            }
        }
        sc.items.truncate(w);
        if w == from {
            return false;
        }
        sc.spans.push((from as u32, (w - from) as u32));
        true
    }

    fn analyze(&self, st: &State, sc: &mut Scratch) -> Analysis {
        sc.items.clear();
        sc.spans.clear();
        let total = self.variant.is_total();

        for v in 0..self.n as u32 {
            let vi = v as usize;
            if st.cover[vi] > 0 || (!total && st.in_set.contains(v)) {
                continue;
            }
            let from = sc.items.len();
            if !total {
                sc.items.push(v);
            }
            sc.items.extend_from_slice(&self.adj[vi]);
            if !self.push_span(st, sc, from) {
                return Analysis::Infeasible;
            }
        }

        if self.variant.is_locating() {
            sc.keyed.clear();
            for v in 0..self.n as u32 {
                if !st.in_set.contains(v) && st.cover[v as usize] > 0 {
                    sc.keyed.push((st.hash[v as usize], v));
                }
            }
            sc.keyed.sort_unstable();
            let mut start = 0;
            let keyed = std::mem::take(&mut sc.keyed);
            while start < keyed.len() {
                let mut end = start + 1;
                while end < keyed.len() && keyed[end].0 == keyed[start].0 {
                    end += 1;
                }
                if end - start > 1 {
                    sc.order.clear();
                    sc.order.extend(keyed[start..end].iter().map(|p| p.1));
                    let mut run = std::mem::take(&mut sc.order);
                    run.sort_by(|&a, &b| self.cmp_signatures(st, a, b).then(a.cmp(&b)));
                    for pair in run.windows(2) {
                        let (u, v) = (pair[0], pair[1]);
                        if self.cmp_signatures(st, u, v).is_ne() {
                            continue;
                        }
                        let from = sc.items.len();
                        self.push_separators(u, v, sc);
                        if !self.push_span(st, sc, from) {
                            sc.order = run;
                            sc.keyed = keyed;
                            return Analysis::Infeasible;
                        }
                    }
                    sc.order = run;
                }
                start = end;
            }
            sc.keyed = keyed;
        }

        if sc.spans.is_empty() {
            return Analysis::Satisfied;
        }

        // packing bound over pairwise disjoint obligations, smallest first
        sc.order.clear();
        sc.order.extend(0..sc.spans.len() as u32);
        let spans = &sc.spans;
        sc.order.sort_by_key(|&s| (spans[s as usize].1, s));
        let mut used = Bits::new(self.n);
        let mut lower = 0;
        for &s in &sc.order {
            let (from, len) = spans[s as usize];
            let cand = &sc.items[from as usize..(from + len) as usize];
            if cand.iter().all(|&c| !used.contains(c)) {
                lower += 1;
                cand.iter().for_each(|&c| used.insert(c));
            }
        }

        let (from, len) = spans[sc.order[0] as usize];
        let mut candidates = sc.items[from as usize..(from + len) as usize].to_vec();
        candidates.sort_by_key(|&c| self.rank[c as usize]);
        Analysis::Branch { lower, candidates }
    }

    /// `{u, v} ∪ (N(u) △ N(v))`, sorted and deduplicated, appended to items.
    fn push_separators(&self, u: u32, v: u32, sc: &mut Scratch) {
        let (a, b) = (&self.adj[u as usize], &self.adj[v as usize]);
        sc.merged.clear();
        sc.merged.push(u);
        sc.merged.push(v);
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x == y => {
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x < y => {
                    sc.merged.push(*x);
                    i += 1;
                }
                (Some(_), Some(y)) => {
                    sc.merged.push(*y);
                    j += 1;
                }
                (Some(x), None) => {
                    sc.merged.push(*x);
                    i += 1;
                }
                (None, Some(y)) => {
                    sc.merged.push(*y);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        sc.merged.sort_unstable();
        sc.merged.dedup();
        sc.items.extend_from_slice(&sc.merged);
    }

    /// A valid set built by always taking the first candidate of the tightest obligation.
    pub fn greedy(&self) -> Option<Vec<u32>> {
        let mut st = self.empty_state();
        let mut sc = Scratch::default();
        loop {
            match self.analyze(&st, &mut sc) {
                Analysis::Infeasible => return None,
                Analysis::Satisfied => return Some(st.members),
                Analysis::Branch { candidates, .. } => self.add(&mut st, candidates[0]),
            }
        }
    }

    fn dfs(&self, st: &mut State, k: usize, ctx: &mut Ctx) -> Flow {
        if !ctx.tick() {
            return Flow::Aborted;
        }
        let (lower, candidates) = match self.analyze(st, &mut ctx.scratch) {
            Analysis::Infeasible => return Flow::Continue,
            Analysis::Satisfied => {
                if ctx.enumerate {
                    ctx.all.push(st.members.clone());
                    return Flow::Continue;
                }
                ctx.found = Some(st.members.clone());
                return Flow::Found;
            }
            Analysis::Branch { lower, candidates } => (lower, candidates),
        };
        if st.members.len() + lower > k {
            return Flow::Continue;
        }
        let mut flow = Flow::Continue;
        let mut forbidden = 0;
        for &c in &candidates {
            self.add(st, c);
            flow = self.dfs(st, k, ctx);
            self.remove(st, c);
            if flow != Flow::Continue {
                break;
            }
            st.forbidden.insert(c);
            forbidden += 1;
        }
        for &c in &candidates[..forbidden] {
            st.forbidden.remove(c);
        }
        flow
    }

    /// Looks for a valid completion of `init` with at most `k` members.
    ///
    /// With `workers > 1` the top-level branches run on a rayon pool.
    pub fn find(
        &self,
        init: &State,
        k: usize,
        limits: &Limits,
        pool: Option<&rayon::ThreadPool>,
    ) -> (Flow, Option<Vec<u32>>) {
        let mut ctx = self.ctx(limits, false);
        let Some(pool) = pool else {
            let mut st = init.clone();
            let flow = self.dfs(&mut st, k, &mut ctx);
            ctx.flush();
            return (flow, ctx.found);
        };

        let (lower, candidates) = match self.analyze(init, &mut ctx.scratch) {
            Analysis::Infeasible => return (Flow::Continue, None),
            Analysis::Satisfied => return (Flow::Found, Some(init.members.clone())),
            Analysis::Branch { lower, candidates } => (lower, candidates),
        };
        limits.nodes.fetch_add(1, Ordering::Relaxed);
        if init.members.len() + lower > k {
            return (Flow::Continue, None);
        }
        let hit = pool.install(|| {
            (0..candidates.len()).into_par_iter().find_map_any(|i| {
                let mut st = init.clone();
                for &c in &candidates[..i] {
                    st.forbidden.insert(c);
                }
                self.add(&mut st, candidates[i]);
                let mut ctx = self.ctx(limits, false);
                let flow = self.dfs(&mut st, k, &mut ctx);
                ctx.flush();
                if flow == Flow::Found {
                    limits.stop.store(true, Ordering::Relaxed);
                    ctx.found
                } else {
                    None
                }
            })
        });
        match hit {
            Some(set) => (Flow::Found, Some(set)),
            None if limits.timed_out.load(Ordering::Relaxed) => (Flow::Aborted, None),
            None => (Flow::Continue, None),
        }
    }

    /// Every valid completion of the empty state of size at most `k`.
    /// Only meaningful when `k` is the minimum, in which case each minimum
    /// set appears exactly once.
    pub fn enumerate(&self, k: usize, limits: &Limits) -> (Flow, Vec<Vec<u32>>) {
        let mut ctx = self.ctx(limits, true);
        let mut st = self.empty_state();
        let flow = self.dfs(&mut st, k, &mut ctx);
        ctx.flush();
        (flow, ctx.all)
    }

    fn ctx<'a, 'b>(&self, limits: &'b Limits<'a>, enumerate: bool) -> Ctx<'a, 'b> {
        Ctx {
            limits,
            local_nodes: 0,
            enumerate,
            found: None,
            all: Vec::new(),
            scratch: Scratch::default(),
        }
    }
}
