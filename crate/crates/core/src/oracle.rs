//! Exact decision of (M)-cycle decompositions by backtracking.
//!
//! The search removes one cycle at a time from the residual multigraph. Each
//! cycle passes through the least left vertex of positive residual degree
//! (the anchor); cycles sharing an anchor are taken in non-increasing length.
//! Untouched vertices whose original rows coincide are interchangeable, so a
//! traversal only ever enters the least such vertex, and of the two directions
//! of a cycle only the one with the smaller signature is kept. Failed states
//! are memoized.

use std::collections::HashSet;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::model::{even_partitions, Cycle, EdgeMultiset, GraphSpec, LengthSeq, Side, Vertex};

const MEMO_CAP: usize = 4_000_000;

/// Limits on a single search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub time: Duration,
    pub max_nodes: u64,
}

impl Budget {
    pub fn seconds(s: f64) -> Self {
        Budget {
            time: Duration::from_secs_f64(s.max(0.0)),
            max_nodes: u64::MAX,
        }
    }

    pub fn nodes(n: u64) -> Self {
        Budget {
            time: Duration::from_secs(24 * 3600),
            max_nodes: n,
        }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::seconds(10.0)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub elapsed_ms: u64,
}

impl fmt::Display for SearchStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nodes={} memo_hits={} elapsed_ms={}",
            self.nodes, self.memo_hits, self.elapsed_ms
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Exists(Vec<Cycle>),
    NotExists(SearchStats),
    Timeout(SearchStats),
}

impl Decision {
    pub fn exists(&self) -> bool {
        matches!(self, Decision::Exists(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Decision::Exists(_) => "exists",
            Decision::NotExists(_) => "not-exists",
            Decision::Timeout(_) => "timeout",
        }
    }
}

/// Decides whether λK_{v,u} has an (M)-cycle decomposition.
pub fn oracle_decide(spec: &GraphSpec, m: &LengthSeq, budget: &Budget) -> Decision {
    decompose_residual(&EdgeMultiset::complete(spec), m.lengths(), budget)
}

/// Decides whether `residual` splits into cycles with exactly the given lengths.
pub fn decompose_residual(residual: &EdgeMultiset, lengths: &[u32], budget: &Budget) -> Decision {
    let start = Instant::now();
    let total: u64 = lengths.iter().map(|&m| m as u64).sum();
    let trivially_out = total != residual.size() as u64
        || residual.odd_vertex().is_some()
        || lengths.iter().any(|&m| m < 2 || m % 2 == 1)
        || residual.pairs().any(|(_, _, m)| m > u8::MAX as u32);
    if trivially_out {
        return Decision::NotExists(SearchStats::default());
    }
    let mut solver = Solver::new(residual, lengths, *budget, start);
    let found = solver.solve(None);
    let stats = SearchStats {
        nodes: solver.nodes,
        memo_hits: solver.memo_hits,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    if found {
        let cycles = solver
            .chosen
            .iter()
            .map(|c| {
                let raw = c
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| {
                        if i % 2 == 0 {
                            Vertex::left(x)
                        } else {
                            Vertex::right(x)
                        }
                    })
                    .collect();
                Cycle::new(raw).expect("search emits alternating cycles")
            })
            .collect();
        Decision::Exists(cycles)
    } else if solver.timed_out {
        Decision::Timeout(stats)
    } else {
        Decision::NotExists(stats)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub decomposable: Vec<LengthSeq>,
    pub timed_out: Vec<LengthSeq>,
    pub searched: usize,
}

/// All M admitting a decomposition of λK_{v,u}; the budget applies per sequence.
pub fn oracle_enumerate(spec: &GraphSpec, budget: &Budget) -> Enumeration {
    let mut out = Enumeration::default();
    let longest = 2 * spec.v.min(spec.u);
    for m in even_partitions(spec.edge_count() as u32, longest) {
        out.searched += 1;
        match oracle_decide(spec, &m, budget) {
            Decision::Exists(_) => out.decomposable.push(m),
            Decision::Timeout(_) => out.timed_out.push(m),
            Decision::NotExists(_) => {}
        }
    }
    out
}

struct Solver {
    v: usize,
    u: usize,
    res: Vec<u8>,
    init: Vec<u8>,
    deg_l: Vec<u32>,
    deg_r: Vec<u32>,
    class_l: Vec<u32>,
    class_r: Vec<u32>,
    /// Distinct lengths, descending, with remaining counts.
    len_vals: Vec<u32>,
    counts: Vec<u32>,
    chosen: Vec<Vec<u32>>,
    memo: HashSet<Vec<u8>>,
    nodes: u64,
    memo_hits: u64,
    budget: Budget,
    start: Instant,
    timed_out: bool,
}

/// Per-node data shared by the traversal of one cycle.
struct Frame {
    anchor: u32,
    len: u32,
    fresh_l: Vec<bool>,
    fresh_r: Vec<bool>,
    used_l: Vec<bool>,
    used_r: Vec<bool>,
    path: Vec<u32>,
}

impl Solver {
    fn new(residual: &EdgeMultiset, lengths: &[u32], budget: Budget, start: Instant) -> Self {
        let (v, u) = residual.dims();
        let (v, u) = (v as usize, u as usize);
        let mut res = vec![0u8; v * u];
        for l in 0..v {
            for r in 0..u {
                res[l * u + r] = residual.get(l as u32, r as u32) as u8;
            }
        }
        let mut len_vals: Vec<u32> = lengths.to_vec();
        len_vals.sort_unstable_by(|a, b| b.cmp(a));
        len_vals.dedup();
        let counts = len_vals
            .iter()
            .map(|&m| lengths.iter().filter(|&&x| x == m).count() as u32)
            .collect();
        let row = |l: usize| res[l * u..(l + 1) * u].to_vec();
        let col = |r: usize| (0..v).map(|l| res[l * u + r]).collect::<Vec<_>>();
        let class_l = classes((0..v).map(row).collect());
        let class_r = classes((0..u).map(col).collect());
        let deg_l = (0..v)
            .map(|l| (0..u).map(|r| res[l * u + r] as u32).sum())
            .collect();
        let deg_r = (0..u)
            .map(|r| (0..v).map(|l| res[l * u + r] as u32).sum())
            .collect();
        Solver {
            v,
            u,
            init: res.clone(),
            res,
            deg_l,
            deg_r,
            class_l,
            class_r,
            len_vals,
            counts,
            chosen: Vec::new(),
            memo: HashSet::new(),
            nodes: 0,
            memo_hits: 0,
            budget,
            start,
            timed_out: false,
        }
    }

    fn out_of_budget(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        if self.nodes >= self.budget.max_nodes
            || (self.nodes % 1024 == 0 && self.start.elapsed() >= self.budget.time)
        {
            self.timed_out = true;
        }
        self.timed_out
    }

    fn at(&self, l: u32, r: u32) -> u8 {
        self.res[l as usize * self.u + r as usize]
    }

    fn take(&mut self, l: u32, r: u32, k: u8) {
        self.res[l as usize * self.u + r as usize] -= k;
        self.deg_l[l as usize] -= k as u32;
        self.deg_r[r as usize] -= k as u32;
    }

    fn give(&mut self, l: u32, r: u32, k: u8) {
        self.res[l as usize * self.u + r as usize] += k;
        self.deg_l[l as usize] += k as u32;
        self.deg_r[r as usize] += k as u32;
    }

    fn solve(&mut self, last: Option<(u32, u32)>) -> bool {
        self.nodes += 1;
        if self.out_of_budget() {
            return false;
        }
        if self.counts.iter().all(|&c| c == 0) {
            return self.res.iter().all(|&x| x == 0);
        }
        let Some(anchor) = (0..self.v as u32).find(|&l| self.deg_l[l as usize] > 0) else {
            return false;
        };
        let bound = match last {
            Some((a, len)) if a == anchor => len,
            _ => u32::MAX,
        };
        let key = self.key(bound);
        if self.memo.contains(&key) {
            self.memo_hits += 1;
            return false;
        }
        let Some(cap) = self.feasible(anchor) else {
            self.remember(key);
            return false;
        };
        let fresh_l: Vec<bool> = (0..self.v).map(|l| self.untouched_left(l)).collect();
        let fresh_r: Vec<bool> = (0..self.u).map(|r| self.untouched_right(r)).collect();
        for k in 0..self.len_vals.len() {
            let len = self.len_vals[k];
            if self.counts[k] == 0 || len > bound || len > cap {
                continue;
            }
            self.counts[k] -= 1;
            let mut frame = Frame {
                anchor,
                len,
                fresh_l: fresh_l.clone(),
                fresh_r: fresh_r.clone(),
                used_l: vec![false; self.v],
                used_r: vec![false; self.u],
                path: vec![anchor],
            };
            frame.used_l[anchor as usize] = true;
            let found = if len == 2 {
                self.two_cycles(&frame)
            } else {
                self.extend(&mut frame)
            };
            if found {
                return true;
            }
            self.counts[k] += 1;
            if self.timed_out {
                return false;
            }
        }
        self.remember(key);
        false
    }

    fn key(&self, bound: u32) -> Vec<u8> {
        let mut key = self.res.clone();
        key.extend(self.counts.iter().map(|&c| c.min(255) as u8));
        key.push(bound.min(255) as u8);
        key
    }

    fn remember(&mut self, key: Vec<u8>) {
        if self.memo.len() < MEMO_CAP {
            self.memo.insert(key);
        }
    }

    fn untouched_left(&self, l: usize) -> bool {
        self.res[l * self.u..(l + 1) * self.u] == self.init[l * self.u..(l + 1) * self.u]
    }

    fn untouched_right(&self, r: usize) -> bool {
        (0..self.v).all(|l| self.res[l * self.u + r] == self.init[l * self.u + r])
    }

    /// Cheap necessary checks on the residual. Returns the largest cycle length
    /// that fits in the anchor's component.
    fn feasible(&self, anchor: u32) -> Option<u32> {
        let long_edges: u32 = self
            .len_vals
            .iter()
            .zip(&self.counts)
            .filter(|(&m, _)| m >= 4)
            .map(|(&m, &c)| m * c)
            .sum();
        let odd_pairs = self.res.iter().filter(|&&x| x % 2 == 1).count() as u32;
        if odd_pairs > long_edges {
            return None;
        }

        // Components of the support: (edges, left count, right count).
        let mut comp_l = vec![usize::MAX; self.v];
        let mut comp_r = vec![usize::MAX; self.u];
        let mut comps: Vec<(u32, u32, u32)> = Vec::new();
        for s in 0..self.v {
            if self.deg_l[s] == 0 || comp_l[s] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut info = (0u32, 0u32, 0u32);
            let mut stack = vec![(Side::Left, s)];
            comp_l[s] = id;
            while let Some((side, x)) = stack.pop() {
                match side {
                    Side::Left => {
                        info.1 += 1;
                        info.0 += self.deg_l[x];
                        for r in 0..self.u {
                            if self.res[x * self.u + r] > 0 && comp_r[r] == usize::MAX {
                                comp_r[r] = id;
                                stack.push((Side::Right, r));
                            }
                        }
                    }
                    Side::Right => {
                        info.2 += 1;
                        for l in 0..self.v {
                            if self.res[l * self.u + x] > 0 && comp_l[l] == usize::MAX {
                                comp_l[l] = id;
                                stack.push((Side::Left, l));
                            }
                        }
                    }
                }
            }
            comps.push(info);
        }
        let cap_of = |c: &(u32, u32, u32)| (2 * c.1.min(c.2)).min(c.0);
        for (&m, &c) in self.len_vals.iter().zip(&self.counts) {
            if c > 0 && !comps.iter().any(|comp| cap_of(comp) >= m) {
                return None;
            }
        }
        if comps.len() > 1 {
            let total: u32 = comps.iter().map(|c| c.0).sum();
            let mut reach = vec![false; total as usize + 1];
            reach[0] = true;
            for (&m, &c) in self.len_vals.iter().zip(&self.counts) {
                for _ in 0..c {
                    for s in (m as usize..=total as usize).rev() {
                        if reach[s - m as usize] {
                            reach[s] = true;
                        }
                    }
                }
            }
            if comps.iter().any(|c| !reach[c.0 as usize]) {
                return None;
            }
        }
        Some(cap_of(&comps[comp_l[anchor as usize]]))
    }

    /// Whether `y` on `side` may be entered next: fresh vertices only in increasing order.
    fn admissible(&self, frame: &Frame, side: Side, y: usize) -> bool {
        let (fresh, used, class) = match side {
            Side::Left => (&frame.fresh_l, &frame.used_l, &self.class_l),
            Side::Right => (&frame.fresh_r, &frame.used_r, &self.class_r),
        };
        if used[y] {
            return false;
        }
        if !fresh[y] {
            return true;
        }
        (0..y).all(|z| !(fresh[z] && !used[z] && class[z] == class[y]))
    }

    fn sig(&self, frame: &Frame, pos: usize, x: u32) -> (u32, u32) {
        let (fresh, class) = if pos % 2 == 0 {
            (&frame.fresh_l, &self.class_l)
        } else {
            (&frame.fresh_r, &self.class_r)
        };
        if fresh[x as usize] {
            (1, class[x as usize])
        } else {
            (0, x)
        }
    }

    fn two_cycles(&mut self, frame: &Frame) -> bool {
        let a = frame.anchor;
        for r in 0..self.u as u32 {
            if self.at(a, r) < 2 || !self.admissible(frame, Side::Right, r as usize) {
                continue;
            }
            self.take(a, r, 2);
            self.chosen.push(vec![a, r]);
            if self.solve(Some((a, 2))) {
                return true;
            }
            self.chosen.pop();
            self.give(a, r, 2);
            if self.timed_out {
                return false;
            }
        }
        false
    }

    fn extend(&mut self, frame: &mut Frame) -> bool {
        let d = frame.path.len();
        let x = frame.path[d - 1];
        let len = frame.len as usize;
        let a = frame.anchor;
        let next_side = if d % 2 == 0 { Side::Left } else { Side::Right };
        let size = if next_side == Side::Left { self.v } else { self.u };
        for y in 0..size as u32 {
            let (l, r) = if next_side == Side::Left { (y, x) } else { (x, y) };
            if self.at(l, r) == 0 || !self.admissible(frame, next_side, y as usize) {
                continue;
            }
            let closing = d == len - 1;
            if closing {
                if self.at(a, y) == 0 {
                    continue;
                }
                // Keep the traversal whose signature is not larger than its reverse.
                let mut fwd: Vec<(u32, u32)> =
                    (1..d).map(|i| self.sig(frame, i, frame.path[i])).collect();
                fwd.push(self.sig(frame, d, y));
                let rev: Vec<(u32, u32)> = fwd.iter().rev().copied().collect();
                if fwd > rev {
                    continue;
                }
            }
            self.take(l, r, 1);
            match next_side {
                Side::Left => frame.used_l[y as usize] = true,
                Side::Right => frame.used_r[y as usize] = true,
            }
            frame.path.push(y);
            let found = if closing {
                self.take(a, y, 1);
                self.chosen.push(frame.path.clone());
                let ok = self.solve(Some((a, frame.len)));
                if !ok {
                    self.chosen.pop();
                    self.give(a, y, 1);
                }
                ok
            } else {
                self.extend(frame)
            };
            if found {
                return true;
            }
            frame.path.pop();
            match next_side {
                Side::Left => frame.used_l[y as usize] = false,
                Side::Right => frame.used_r[y as usize] = false,
            }
            self.give(l, r, 1);
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

/// Class ids grouping identical rows.
fn classes(rows: Vec<Vec<u8>>) -> Vec<u32> {
    let mut seen: Vec<&Vec<u8>> = Vec::new();
    rows.iter()
        .map(|row| match seen.iter().position(|s| *s == row) {
            Some(i) => i as u32,
            None => {
                seen.push(row);
                (seen.len() - 1) as u32
            }
        })
        .collect()
}
