use std::fmt;

use serde::{Deserialize, Serialize};

use super::vertex::{pair_of, Side, Vertex};
use crate::error::{Error, Result};

/// The triple (λ, v, u) naming λK_{v,u}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GraphSpec {
    pub lambda: u32,
    pub v: u32,
    pub u: u32,
}

impl GraphSpec {
    pub fn new(lambda: u32, v: u32, u: u32) -> Result<Self> {
        if lambda == 0 || v == 0 || u == 0 {
            return Err(Error::Input(format!(
                "lambda, v, u must be positive (got {lambda}, {v}, {u})"
            )));
        }
        Ok(GraphSpec { lambda, v, u })
    }

    pub fn edge_count(&self) -> u64 {
        self.lambda as u64 * self.v as u64 * self.u as u64
    }

    pub fn part_size(&self, side: Side) -> u32 {
        match side {
            Side::Left => self.v,
            Side::Right => self.u,
        }
    }

    pub fn contains(&self, x: Vertex) -> bool {
        x.index < self.part_size(x.side)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.v)
            .map(Vertex::left)
            .chain((0..self.u).map(Vertex::right))
    }

    pub fn part(&self, side: Side) -> impl Iterator<Item = Vertex> {
        (0..self.part_size(side)).map(move |index| Vertex { side, index })
    }

    pub fn mirrored(&self) -> Self {
        GraphSpec {
            lambda: self.lambda,
            v: self.u,
            u: self.v,
        }
    }

    /// Leave-size bound shared by the joining lemmas: 2·min+2 for unequal parts, 2·min otherwise.
    pub fn join_bound(&self) -> u32 {
        let small = self.v.min(self.u);
        if self.v == self.u {
            2 * small
        } else {
            2 * small + 2
        }
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}K_{{{},{}}}", self.lambda, self.v, self.u)
    }
}

/// Per-pair multiplicities on the cross pairs of a v×u bipartition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeMultiset {
    v: u32,
    u: u32,
    counts: Vec<u32>,
}

impl EdgeMultiset {
    pub fn empty(v: u32, u: u32) -> Self {
        EdgeMultiset {
            v,
            u,
            counts: vec![0; (v * u) as usize],
        }
    }

    pub fn complete(spec: &GraphSpec) -> Self {
        EdgeMultiset {
            v: spec.v,
            u: spec.u,
            counts: vec![spec.lambda; (spec.v * spec.u) as usize],
        }
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.v, self.u)
    }

    fn slot(&self, l: u32, r: u32) -> usize {
        debug_assert!(l < self.v && r < self.u);
        (l * self.u + r) as usize
    }

    pub fn get(&self, l: u32, r: u32) -> u32 {
        self.counts[self.slot(l, r)]
    }

    /// Multiplicity between two vertices; zero for same-part pairs.
    pub fn mult(&self, a: Vertex, b: Vertex) -> u32 {
        match pair_of(a, b) {
            Some((l, r)) => self.get(l, r),
            None => 0,
        }
    }

    pub fn set(&mut self, l: u32, r: u32, value: u32) {
        let s = self.slot(l, r);
        self.counts[s] = value;
    }

    pub fn add(&mut self, a: Vertex, b: Vertex, k: u32) {
        let (l, r) = pair_of(a, b).expect("cross-part pair");
        let s = self.slot(l, r);
        self.counts[s] += k;
    }

    /// Removes `k` copies; returns false (leaving the multiset untouched) if fewer are present.
    pub fn remove(&mut self, a: Vertex, b: Vertex, k: u32) -> bool {
        let (l, r) = pair_of(a, b).expect("cross-part pair");
        let s = self.slot(l, r);
        if self.counts[s] < k {
            return false;
        }
        self.counts[s] -= k;
        true
    }

    pub fn size(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn is_simple(&self) -> bool {
        self.counts.iter().all(|&c| c <= 1)
    }

    pub fn degree(&self, x: Vertex) -> u32 {
        match x.side {
            Side::Left => (0..self.u).map(|r| self.get(x.index, r)).sum(),
            Side::Right => (0..self.v).map(|l| self.get(l, x.index)).sum(),
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        (0..self.v)
            .map(Vertex::left)
            .chain((0..self.u).map(Vertex::right))
    }

    pub fn part(&self, side: Side) -> impl Iterator<Item = Vertex> {
        let n = match side {
            Side::Left => self.v,
            Side::Right => self.u,
        };
        (0..n).map(move |index| Vertex { side, index })
    }

    /// Vertices of positive degree, in canonical order.
    pub fn support(&self) -> Vec<Vertex> {
        self.vertices().filter(|&x| self.degree(x) > 0).collect()
    }

    /// Neighbours of `x` with their multiplicities, in canonical order.
    pub fn neighbors(&self, x: Vertex) -> Vec<(Vertex, u32)> {
        let other = x.side.other();
        self.part(other)
            .filter_map(|y| {
                let m = self.mult(x, y);
                (m > 0).then_some((y, m))
            })
            .collect()
    }

    /// Non-zero pairs as (left, right, multiplicity).
    pub fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex, u32)> + '_ {
        (0..self.v).flat_map(move |l| {
            (0..self.u).filter_map(move |r| {
                let m = self.get(l, r);
                (m > 0).then_some((Vertex::left(l), Vertex::right(r), m))
            })
        })
    }

    pub fn max_degree(&self) -> u32 {
        self.vertices().map(|x| self.degree(x)).max().unwrap_or(0)
    }

    pub fn odd_vertex(&self) -> Option<(Vertex, u32)> {
        self.vertices()
            .map(|x| (x, self.degree(x)))
            .find(|&(_, d)| d % 2 == 1)
    }

    /// Relabels vertices within each part: `left[i]` and `right[j]` are the new indices.
    pub fn permuted(&self, left: &[u32], right: &[u32]) -> Self {
        let mut out = EdgeMultiset::empty(self.v, self.u);
        for (a, b, m) in self.pairs() {
            out.set(left[a.index as usize], right[b.index as usize], m);
        }
        out
    }
}

impl fmt::Display for EdgeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (a, b, m)) in self.pairs().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if m == 1 {
                write!(f, "{a}{b}")?;
            } else {
                write!(f, "{a}{b}x{m}")?;
            }
        }
        write!(f, "}}")
    }
}
