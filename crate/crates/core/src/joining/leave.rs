//! Queries on small leaves used by the surgery routines.

use crate::model::{classify_leave, Component, Cycle, EdgeMultiset, GraphSpec, Vertex};
use crate::oracle::{decompose_residual, Budget, Decision};

/// Node cap for splitting a leave into two cycles; leaves here have at most a few dozen edges.
const SPLIT_NODES: u64 = 200_000;
const MAX_PAIRS: usize = 256;

/// An m1-path `first = [x_0..x_t]` and an m2-path `second = [x_0, y_1, .., x_t]`
/// that together use every leave edge exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathPair {
    pub first: Vec<Vertex>,
    pub second: Vec<Vertex>,
}

impl PathPair {
    pub fn start(&self) -> Vertex {
        self.first[0]
    }

    pub fn end(&self) -> Vertex {
        *self.first.last().expect("non-empty path")
    }
}

/// Splits the whole leave into an m1-cycle and an m2-cycle, if possible.
pub fn two_cycle_split(leave: &EdgeMultiset, m1: u32, m2: u32) -> Option<(Cycle, Cycle)> {
    if leave.size() != m1 + m2 {
        return None;
    }
    match decompose_residual(leave, &[m1, m2], &Budget::nodes(SPLIT_NODES)) {
        Decision::Exists(mut cycles) => {
            let i = cycles.iter().position(|c| c.len() as u32 == m1)?;
            let first = cycles.swap_remove(i);
            let second = cycles.pop()?;
            Some((first, second))
        }
        _ => None,
    }
}

/// Every path pair with path lengths (m1, m2), in deterministic order.
pub fn path_pairs(leave: &EdgeMultiset, m1: u32, m2: u32) -> Vec<PathPair> {
    let mut out = Vec::new();
    if m1 == 0 || m2 == 0 || leave.size() != m1 + m2 {
        return out;
    }
    for x0 in leave.support() {
        if leave.degree(x0) != 2 {
            continue;
        }
        let mut path = vec![x0];
        let mut rest = leave.clone();
        extend_paths(&mut rest, &mut path, m1 as usize, m2 as usize, &mut out);
        if out.len() >= MAX_PAIRS {
            break;
        }
    }
    out
}

fn extend_paths(
    rest: &mut EdgeMultiset,
    path: &mut Vec<Vertex>,
    m1: usize,
    m2: usize,
    out: &mut Vec<PathPair>,
) {
    if out.len() >= MAX_PAIRS {
        return;
    }
    let x = *path.last().expect("non-empty");
    if path.len() == m1 + 1 {
        if rest.degree(x) == 1 {
            if let Some(second) = as_path(rest, path[0], x) {
                if second.len() == m2 + 1 {
                    out.push(PathPair {
                        first: path.clone(),
                        second,
                    });
                }
            }
        }
        return;
    }
    for (y, _) in rest.neighbors(x) {
        if path.contains(&y) {
            continue;
        }
        rest.remove(x, y, 1);
        path.push(y);
        extend_paths(rest, path, m1, m2, out);
        path.pop();
        rest.add(x, y, 1);
    }
}

/// If `edges` is exactly a simple path from `from` to `to`, its vertex list.
pub fn as_path(edges: &EdgeMultiset, from: Vertex, to: Vertex) -> Option<Vec<Vertex>> {
    if from == to || !edges.is_simple() {
        return None;
    }
    let mut seq = vec![from];
    let mut prev: Option<Vertex> = None;
    let mut cur = from;
    let total = edges.size() as usize;
    while cur != to {
        let next: Vec<Vertex> = edges
            .neighbors(cur)
            .into_iter()
            .map(|(y, _)| y)
            .filter(|&y| Some(y) != prev)
            .collect();
        let expected = if cur == from { 1 } else { 2 };
        if edges.degree(cur) != expected || next.len() != 1 {
            return None;
        }
        prev = Some(cur);
        cur = next[0];
        if seq.contains(&cur) {
            return None;
        }
        seq.push(cur);
    }
    (seq.len() == total + 1 && edges.degree(to) == 1).then_some(seq)
}

/// Least vertex in `x`'s part with leave degree zero.
pub fn isolated_twin(spec: &GraphSpec, leave: &EdgeMultiset, x: Vertex) -> Option<Vertex> {
    spec.part(x.side)
        .find(|&y| y != x && leave.degree(y) == 0)
}

/// d(P): half the degree surplus above 2 over leave vertices of degree at least 4.
pub fn degree_surplus(leave: &EdgeMultiset) -> u32 {
    leave
        .vertices()
        .map(|x| leave.degree(x))
        .filter(|&d| d >= 4)
        .map(|d| (d - 2) / 2)
        .sum()
}

pub fn component_count(leave: &EdgeMultiset) -> usize {
    classify_leave(leave).map(|s| s.nontrivial()).unwrap_or(usize::MAX)
}

/// The single non-trivial component, if there is exactly one.
pub fn sole_component(leave: &EdgeMultiset) -> Option<Component> {
    let mut s = classify_leave(leave).ok()?;
    (s.components.len() == 1).then(|| s.components.pop().expect("one component"))
}

/// Vertices of degree at least 4, highest degree first.
pub fn high_degree(leave: &EdgeMultiset) -> Vec<(Vertex, u32)> {
    let mut v: Vec<(Vertex, u32)> = leave
        .vertices()
        .map(|x| (x, leave.degree(x)))
        .filter(|&(_, d)| d >= 4)
        .collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    v
}
