//! Best-first search over switch sequences.
//!
//! Children are scored on their leave alone, which is cheap to simulate; the
//! repair of the packed cycles is only attempted when a child is popped.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::error::Result;
use crate::model::{EdgeMultiset, Packing, Vertex};
use crate::switching::{switch_with_terminus, termini, toggled_leave, SwitchRecord};

pub(crate) struct Goal<'a> {
    pub done: &'a dyn Fn(&EdgeMultiset) -> bool,
    pub score: &'a dyn Fn(&EdgeMultiset) -> i64,
}

struct Node {
    packing: Packing,
    parent: Option<usize>,
    record: Option<SwitchRecord>,
}

type Entry = Reverse<(i64, u64, usize, Vertex, Vertex, Vertex, Vertex)>;

/// Searches for a packing whose leave satisfies `goal.done`, expanding at most
/// `limit` packings. Returns the packing and the switches leading to it.
pub(crate) fn best_first(
    start: &Packing,
    goal: &Goal<'_>,
    limit: usize,
) -> Result<Option<(Packing, Vec<SwitchRecord>)>> {
    if (goal.done)(&start.leave) {
        return Ok(Some((start.clone(), Vec::new())));
    }
    let mut nodes = vec![Node {
        packing: start.clone(),
        parent: None,
        record: None,
    }];
    let mut seen: HashSet<EdgeMultiset> = HashSet::from([start.leave.clone()]);
    let mut heap: BinaryHeap<Entry> = BinaryHeap::new();
    let mut seq = 0u64;
    expand(&nodes[0].packing, 0, goal, &seen, &mut heap, &mut seq)?;
    let mut expanded = 1;
    let mut attempts = 0usize;
    while let Some(Reverse((_, _, parent, alpha, beta, origin, terminus))) = heap.pop() {
        attempts += 1;
        if expanded >= limit || attempts > 40 * limit {
            break;
        }
        let base = &nodes[parent].packing;
        let (child_leave, _) = toggled_leave(&base.leave, alpha, beta, origin, terminus);
        if seen.contains(&child_leave) {
            continue;
        }
        let Some((child, record)) = switch_with_terminus(base, alpha, beta, origin, terminus)? else {
            continue;
        };
        seen.insert(child.leave.clone());
        let done = (goal.done)(&child.leave);
        nodes.push(Node {
            packing: child,
            parent: Some(parent),
            record: Some(record),
        });
        let idx = nodes.len() - 1;
        if done {
            let mut records = Vec::new();
            let mut cur = Some(idx);
            while let Some(i) = cur {
                if let Some(r) = &nodes[i].record {
                    records.push(r.clone());
                }
                cur = nodes[i].parent;
            }
            records.reverse();
            return Ok(Some((nodes.swap_remove(idx).packing, records)));
        }
        expand(&nodes[idx].packing, idx, goal, &seen, &mut heap, &mut seq)?;
        expanded += 1;
    }
    Ok(None)
}

fn expand(
    p: &Packing,
    idx: usize,
    goal: &Goal<'_>,
    seen: &HashSet<EdgeMultiset>,
    heap: &mut BinaryHeap<Entry>,
    seq: &mut u64,
) -> Result<()> {
    for side in [crate::model::Side::Left, crate::model::Side::Right] {
        let part: Vec<Vertex> = p.spec.part(side).collect();
        for (i, &alpha) in part.iter().enumerate() {
            for &beta in &part[i + 1..] {
                if p.leave.degree(alpha) == 0 && p.leave.degree(beta) == 0 {
                    continue;
                }
                for origin in p.spec.part(side.other()) {
                    if p.leave.mult(origin, alpha) == p.leave.mult(origin, beta) {
                        continue;
                    }
                    for terminus in termini(p, alpha, beta, origin)? {
                        // (origin, terminus) and (terminus, origin) toggle the same slots.
                        if terminus < origin {
                            continue;
                        }
                        let (leave, _) = toggled_leave(&p.leave, alpha, beta, origin, terminus);
                        if seen.contains(&leave) {
                            continue;
                        }
                        let score = if (goal.done)(&leave) {
                            i64::MIN
                        } else {
                            (goal.score)(&leave)
                        };
                        *seq += 1;
                        heap.push(Reverse((score, *seq, idx, alpha, beta, origin, terminus)));
                    }
                }
            }
        }
    }
    Ok(())
}
