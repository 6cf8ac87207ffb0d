use std::collections::BTreeMap;

use super::cycle::Cycle;
use super::edges::EdgeMultiset;
use super::vertex::Vertex;
use crate::error::{Error, Result};

/// One non-trivial component of a leave.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Component {
    Cycle(Cycle),
    /// `links[i]` is the vertex shared by `cycles[i]` and `cycles[i + 1]`.
    Chain { cycles: Vec<Cycle>, links: Vec<Vertex> },
    /// Cyclic analogue of a chain; for two cycles `links` holds both shared vertices.
    Ring { cycles: Vec<Cycle>, links: Vec<Vertex> },
    Other(EdgeMultiset),
}

impl Component {
    pub fn kind(&self) -> &'static str {
        match self {
            Component::Cycle(_) => "cycle",
            Component::Chain { .. } => "chain",
            Component::Ring { .. } => "ring",
            Component::Other(_) => "other",
        }
    }

    pub fn cycles(&self) -> &[Cycle] {
        match self {
            Component::Cycle(c) => std::slice::from_ref(c),
            Component::Chain { cycles, .. } | Component::Ring { cycles, .. } => cycles,
            Component::Other(_) => &[],
        }
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = match self {
            Component::Other(e) => e.support(),
            _ => self.cycles().iter().flat_map(|c| c.iter().copied()).collect(),
        };
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.vertices().contains(&x)
    }

    pub fn size(&self) -> usize {
        match self {
            Component::Other(e) => e.size() as usize,
            _ => self.cycles().iter().map(|c| c.len()).sum(),
        }
    }

    pub fn is_two_cycle(&self) -> bool {
        matches!(self, Component::Cycle(c) if c.len() == 2)
    }
}

/// Leave components plus the per-vertex degree table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeaveStructure {
    pub components: Vec<Component>,
    pub degrees: BTreeMap<Vertex, u32>,
}

impl LeaveStructure {
    pub fn nontrivial(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self, x: Vertex) -> u32 {
        self.degrees.get(&x).copied().unwrap_or(0)
    }

    /// Component tags, sorted, for relabeling-invariance checks.
    pub fn signature(&self) -> Vec<(String, Vec<usize>)> {
        let mut sig: Vec<(String, Vec<usize>)> = self
            .components
            .iter()
            .map(|c| {
                let mut lens: Vec<usize> = c.cycles().iter().map(|x| x.len()).collect();
                if let Component::Other(e) = c {
                    lens.push(e.size() as usize);
                }
                lens.sort_unstable();
                (c.kind().to_string(), lens)
            })
            .collect();
        sig.sort();
        sig
    }

    pub fn component_of(&self, x: Vertex) -> Option<usize> {
        self.components.iter().position(|c| c.contains(x))
    }
}

pub fn classify_leave(leave: &EdgeMultiset) -> Result<LeaveStructure> {
    if let Some((x, d)) = leave.odd_vertex() {
        return Err(Error::NotEven(x, d));
    }
    let degrees: BTreeMap<Vertex, u32> = leave
        .vertices()
        .map(|x| (x, leave.degree(x)))
        .filter(|&(_, d)| d > 0)
        .collect();
    let mut seen: BTreeMap<Vertex, bool> = degrees.keys().map(|&x| (x, false)).collect();
    let mut components = Vec::new();
    for &start in degrees.keys() {
        if seen[&start] {
            continue;
        }
        let mut part = EdgeMultiset::empty(leave.dims().0, leave.dims().1);
        let mut stack = vec![start];
        seen.insert(start, true);
        while let Some(x) = stack.pop() {
            for (y, m) in leave.neighbors(x) {
                if x.is_left() {
                    part.add(x, y, m);
                }
                if !seen[&y] {
                    seen.insert(y, true);
                    stack.push(y);
                }
            }
        }
        components.push(classify_component(part));
    }
    Ok(LeaveStructure {
        components,
        degrees,
    })
}

struct Arcs {
    ends: Vec<(Vertex, Vertex)>,
    paths: Vec<Vec<Vertex>>,
}

fn classify_component(part: EdgeMultiset) -> Component {
    let support = part.support();
    let deg: BTreeMap<Vertex, u32> = support.iter().map(|&x| (x, part.degree(x))).collect();
    if deg.values().any(|&d| d != 2 && d != 4) {
        return Component::Other(part);
    }
    let links: Vec<Vertex> = support.iter().copied().filter(|x| deg[x] == 4).collect();
    let arcs = trace_arcs(&part, &deg, &support, &links);
    if links.is_empty() {
        return match arcs.paths.first().map(|p| Cycle::new(p[..p.len() - 1].to_vec())) {
            Some(Ok(c)) if arcs.paths.len() == 1 => Component::Cycle(c),
            _ => Component::Other(part),
        };
    }
    chain_from_arcs(&arcs, &links)
        .or_else(|| ring_from_arcs(&arcs, &links))
        .unwrap_or(Component::Other(part))
}

/// Splits the component into maximal paths whose interior vertices have degree 2.
fn trace_arcs(
    part: &EdgeMultiset,
    deg: &BTreeMap<Vertex, u32>,
    support: &[Vertex],
    links: &[Vertex],
) -> Arcs {
    let mut copies: Vec<(Vertex, Vertex)> = Vec::new();
    let mut incident: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (a, b, m) in part.pairs() {
        for _ in 0..m {
            incident.entry(a).or_default().push(copies.len());
            incident.entry(b).or_default().push(copies.len());
            copies.push((a, b));
        }
    }
    let mut used = vec![false; copies.len()];
    let mut arcs = Arcs {
        ends: Vec::new(),
        paths: Vec::new(),
    };
    let starts: Vec<Vertex> = if links.is_empty() {
        support.iter().take(1).copied().collect()
    } else {
        links.to_vec()
    };
    for &s in &starts {
        for &e0 in &incident[&s] {
            if used[e0] {
                continue;
            }
            let mut path = vec![s];
            let mut cur = s;
            let mut e = e0;
            loop {
                used[e] = true;
                let (a, b) = copies[e];
                let next = if a == cur { b } else { a };
                path.push(next);
                if next == s || deg[&next] == 4 {
                    break;
                }
                match incident[&next].iter().find(|&&f| !used[f]) {
                    Some(&f) => {
                        cur = next;
                        e = f;
                    }
                    None => break,
                }
            }
            arcs.ends.push((s, *path.last().unwrap()));
            arcs.paths.push(path);
        }
    }
    if used.iter().any(|u| !u) {
        // Disconnected cycles among degree-2 vertices only arise from malformed input.
        arcs.paths.push(Vec::new());
    }
    arcs
}

fn loop_cycle(path: &[Vertex]) -> Option<Cycle> {
    Cycle::new(path[..path.len() - 1].to_vec()).ok()
}

/// Joins two arcs with the same end points into one cycle.
fn arc_pair_cycle(first: &[Vertex], second: &[Vertex]) -> Option<Cycle> {
    let mut second = second.to_vec();
    if second.first() != first.first() {
        second.reverse();
    }
    let mut seq = first.to_vec();
    seq.extend(second[1..second.len() - 1].iter().rev());
    Cycle::new(seq).ok()
}

fn arcs_between(arcs: &Arcs, a: Vertex, b: Vertex) -> Vec<usize> {
    (0..arcs.ends.len())
        .filter(|&i| {
            let (x, y) = arcs.ends[i];
            (x == a && y == b) || (x == b && y == a)
        })
        .collect()
}

fn chain_from_arcs(arcs: &Arcs, links: &[Vertex]) -> Option<Component> {
    if arcs.paths.iter().any(|p| p.is_empty()) {
        return None;
    }
    let loops_at = |c: Vertex| arcs_between(arcs, c, c);
    if links.len() == 1 {
        let l = loops_at(links[0]);
        if l.len() != 2 || arcs.paths.len() != 2 {
            return None;
        }
        let cycles = vec![loop_cycle(&arcs.paths[l[0]])?, loop_cycle(&arcs.paths[l[1]])?];
        return Some(Component::Chain {
            cycles,
            links: links.to_vec(),
        });
    }
    let ends: Vec<Vertex> = links.iter().copied().filter(|&c| loops_at(c).len() == 1).collect();
    if ends.len() != 2 {
        return None;
    }
    let mut order = vec![ends[0]];
    let mut cycles = vec![loop_cycle(&arcs.paths[loops_at(ends[0])[0]])?];
    let mut used_arcs = 1;
    while order.len() < links.len() {
        let cur = *order.last().unwrap();
        let next = links
            .iter()
            .copied()
            .find(|&c| !order.contains(&c) && arcs_between(arcs, cur, c).len() == 2)?;
        let pair = arcs_between(arcs, cur, next);
        cycles.push(arc_pair_cycle(&arcs.paths[pair[0]], &arcs.paths[pair[1]])?);
        used_arcs += 2;
        order.push(next);
    }
    let last = *order.last().unwrap();
    if last != ends[1] {
        return None;
    }
    cycles.push(loop_cycle(&arcs.paths[loops_at(last)[0]])?);
    used_arcs += 1;
    if used_arcs != arcs.paths.len() {
        return None;
    }
    Some(Component::Chain {
        cycles,
        links: order,
    })
}

fn ring_from_arcs(arcs: &Arcs, links: &[Vertex]) -> Option<Component> {
    if arcs.paths.iter().any(|p| p.is_empty()) || arcs.ends.iter().any(|(a, b)| a == b) {
        return None;
    }
    if links.len() == 2 {
        let between = arcs_between(arcs, links[0], links[1]);
        if between.len() != 4 || arcs.paths.len() != 4 {
            return None;
        }
        let p = |i: usize| &arcs.paths[between[i]];
        let cycles = vec![arc_pair_cycle(p(0), p(1))?, arc_pair_cycle(p(2), p(3))?];
        return Some(Component::Ring {
            cycles,
            links: links.to_vec(),
        });
    }
    if links.len() < 3 || arcs.paths.len() != 2 * links.len() {
        return None;
    }
    let mut order = vec![links[0]];
    let mut cycles = Vec::new();
    loop {
        let cur = *order.last().unwrap();
        let next = if order.len() == links.len() {
            links[0]
        } else {
            links
                .iter()
                .copied()
                .find(|&c| !order.contains(&c) && arcs_between(arcs, cur, c).len() == 2)?
        };
        let pair = arcs_between(arcs, cur, next);
        if pair.len() != 2 {
            return None;
        }
        let mut first = arcs.paths[pair[0]].clone();
        if first[0] != cur {
            first.reverse();
        }
        cycles.push(arc_pair_cycle(&first, &arcs.paths[pair[1]])?);
        if next == links[0] {
            break;
        }
        order.push(next);
    }
    Some(Component::Ring {
        cycles,
        links: order,
    })
}
