//! The (α, β)-switch on a packing of λK_{v,u}.
//!
//! α and β lie in the same part, so they are twins in λK_{v,u}. The switch
//! removes an origin slot and a terminus slot from the leave, adds their images
//! under σ = (α β), and repairs the packed cycles through α or β so that every
//! cycle keeps its length. The repair is found by an exhaustive search over the
//! admissible images of each affected cycle (C or σ(C) when one of α, β is on
//! C; Q ∪ Q' with Q ∈ {P, σ(P)}, Q' ∈ {P', σ(P')} when both are).

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{compute_leave, Cycle, EdgeMultiset, Packing, Vertex};

/// Node cap for the repair search; exceeding it is reported as a defect.
const REPAIR_NODE_LIMIT: u64 = 20_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwitchRecord {
    pub alpha: Vertex,
    pub beta: Vertex,
    pub origin: Vertex,
    pub terminus: Vertex,
    /// (endpoint, endpoint, ±1) adjustments applied to the leave.
    pub toggles: [(Vertex, Vertex, i32); 4],
}

impl fmt::Display for SwitchRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "alpha={} beta={} origin={} terminus={} toggles=",
            self.alpha, self.beta, self.origin, self.terminus
        )?;
        for (i, (a, b, d)) in self.toggles.iter().enumerate() {
            let (l, r) = if a.is_left() { (a, b) } else { (b, a) };
            let sign = if *d > 0 { '+' } else { '-' };
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{sign}{l}{r}")?;
        }
        Ok(())
    }
}

fn check_twins(p: &Packing, alpha: Vertex, beta: Vertex) -> Result<()> {
    if alpha == beta
        || alpha.side != beta.side
        || !p.spec.contains(alpha)
        || !p.spec.contains(beta)
    {
        return Err(Error::InvalidTwin(alpha, beta));
    }
    Ok(())
}

/// Signed excess μ_L(wα) − μ_L(wβ).
fn excess(leave: &EdgeMultiset, w: Vertex, alpha: Vertex, beta: Vertex) -> i64 {
    leave.mult(w, alpha) as i64 - leave.mult(w, beta) as i64
}

/// The slot multiset A: `(w, x)` repeated |excess| times, with x the heavier of α, β at w.
pub fn switch_edge_set(
    leave: &EdgeMultiset,
    alpha: Vertex,
    beta: Vertex,
) -> Result<Vec<(Vertex, Vertex)>> {
    if alpha == beta || alpha.side != beta.side {
        return Err(Error::InvalidTwin(alpha, beta));
    }
    let mut out = Vec::new();
    for w in leave.part(alpha.side.other()) {
        let e = excess(leave, w, alpha, beta);
        let x = if e > 0 { alpha } else { beta };
        for _ in 0..e.unsigned_abs() {
            out.push((w, x));
        }
    }
    Ok(out)
}

/// Performs the switch with the first feasible terminus in canonical vertex order.
pub fn perform_switch(
    p: &Packing,
    alpha: Vertex,
    beta: Vertex,
    origin: Vertex,
) -> Result<(Packing, SwitchRecord)> {
    let mut all = switch_outcomes(p, alpha, beta, origin)?;
    if all.is_empty() {
        return Err(Error::InfeasibleSwitch(format!(
            "no terminus admits a repair for ({alpha},{beta}) with origin {origin}"
        )));
    }
    Ok(all.swap_remove(0))
}

/// Every feasible outcome, one per terminus, in canonical terminus order.
pub fn switch_outcomes(
    p: &Packing,
    alpha: Vertex,
    beta: Vertex,
    origin: Vertex,
) -> Result<Vec<(Packing, SwitchRecord)>> {
    let termini = termini(p, alpha, beta, origin)?;
    let mut out = Vec::new();
    for t in termini {
        if let Some(found) = switch_with_terminus(p, alpha, beta, origin, t)? {
            out.push(found);
        }
    }
    Ok(out)
}

/// Candidate termini: vertices carrying a slot of A other than the origin slot.
pub fn termini(p: &Packing, alpha: Vertex, beta: Vertex, origin: Vertex) -> Result<Vec<Vertex>> {
    check_twins(p, alpha, beta)?;
    if let Some((x, d)) = p.leave.odd_vertex() {
        return Err(Error::NotEven(x, d));
    }
    if origin.side == alpha.side || excess(&p.leave, origin, alpha, beta) == 0 {
        return Err(Error::NoExcess {
            alpha,
            beta,
            origin,
        });
    }
    Ok(p.leave
        .part(alpha.side.other())
        .filter(|&w| {
            let e = excess(&p.leave, w, alpha, beta).unsigned_abs();
            if w == origin {
                e >= 2
            } else {
                e >= 1
            }
        })
        .collect())
}

/// Tries the switch whose terminus slot sits at `terminus`. `Ok(None)` means no
/// repair of the packed cycles matches that pairing.
pub fn switch_with_terminus(
    p: &Packing,
    alpha: Vertex,
    beta: Vertex,
    origin: Vertex,
    terminus: Vertex,
) -> Result<Option<(Packing, SwitchRecord)>> {
    if !termini(p, alpha, beta, origin)?.contains(&terminus) {
        return Ok(None);
    }
    let lambda = p.spec.lambda;
    let (leave, toggles) = toggled_leave(&p.leave, alpha, beta, origin, terminus);
    if leave.pairs().any(|(_, _, m)| m > lambda) {
        return Ok(None);
    }

    let others: Vec<Vertex> = p.leave.part(alpha.side.other()).collect();
    let target: Vec<i64> = others
        .iter()
        .map(|&w| lambda as i64 - leave.mult(w, alpha) as i64)
        .collect();

    let mut involved: Vec<usize> = (0..p.cycles.len())
        .filter(|&i| p.cycles[i].contains(alpha) || p.cycles[i].contains(beta))
        .collect();
    involved.sort_by(|&a, &b| p.cycles[a].cmp(&p.cycles[b]).then(a.cmp(&b)));

    let options: Vec<Vec<(Cycle, Vec<i64>)>> = involved
        .iter()
        .map(|&i| {
            repair_options(&p.cycles[i], alpha, beta)
                .into_iter()
                .map(|c| {
                    let counts = alpha_counts(&c, alpha, others.len());
                    (c, counts)
                })
                .collect()
        })
        .collect();
    let same_as_prev: Vec<bool> = (0..involved.len())
        .map(|k| k > 0 && p.cycles[involved[k]] == p.cycles[involved[k - 1]])
        .collect();

    let n = others.len();
    let mut min_rest = vec![vec![0i64; n]; options.len() + 1];
    let mut max_rest = vec![vec![0i64; n]; options.len() + 1];
    for k in (0..options.len()).rev() {
        for w in 0..n {
            let lo = options[k].iter().map(|o| o.1[w]).min().unwrap_or(0);
            let hi = options[k].iter().map(|o| o.1[w]).max().unwrap_or(0);
            min_rest[k][w] = min_rest[k + 1][w] + lo;
            max_rest[k][w] = max_rest[k + 1][w] + hi;
        }
    }

    let mut search = RepairSearch {
        options: &options,
        same_as_prev: &same_as_prev,
        min_rest: &min_rest,
        max_rest: &max_rest,
        target: &target,
        current: vec![0; n],
        choice: vec![0; options.len()],
        nodes: 0,
    };
    if !search.run(0) {
        if search.nodes > REPAIR_NODE_LIMIT {
            return Err(Error::InfeasibleSwitch(format!(
                "repair search exceeded {REPAIR_NODE_LIMIT} nodes"
            )));
        }
        return Ok(None);
    }

    let mut cycles = p.cycles.clone();
    for (k, &i) in involved.iter().enumerate() {
        cycles[i] = options[k][search.choice[k]].0.clone();
    }
    debug_assert_eq!(compute_leave(&p.spec, &cycles).as_ref(), Ok(&leave));
    let record = SwitchRecord {
        alpha,
        beta,
        origin,
        terminus,
        toggles,
    };
    Ok(Some((
        Packing {
            spec: p.spec,
            cycles,
            leave,
        },
        record,
    )))
}

/// The leave after moving the origin and terminus slots to the lighter twin.
/// Feasibility of the accompanying repair is not checked.
pub fn toggled_leave(
    leave: &EdgeMultiset,
    alpha: Vertex,
    beta: Vertex,
    origin: Vertex,
    terminus: Vertex,
) -> (EdgeMultiset, [(Vertex, Vertex, i32); 4]) {
    let mut out = leave.clone();
    let mut toggles = [(origin, alpha, 0); 4];
    for (k, w) in [origin, terminus].into_iter().enumerate() {
        let x = if excess(leave, w, alpha, beta) > 0 {
            alpha
        } else {
            beta
        };
        let y = x.swapped(alpha, beta);
        let removed = out.remove(w, x, 1);
        debug_assert!(removed);
        out.add(w, y, 1);
        toggles[2 * k] = (w, x, -1);
        toggles[2 * k + 1] = (w, y, 1);
    }
    (out, toggles)
}

struct RepairSearch<'a> {
    options: &'a [Vec<(Cycle, Vec<i64>)>],
    same_as_prev: &'a [bool],
    min_rest: &'a [Vec<i64>],
    max_rest: &'a [Vec<i64>],
    target: &'a [i64],
    current: Vec<i64>,
    choice: Vec<usize>,
    nodes: u64,
}

impl RepairSearch<'_> {
    fn feasible(&self, k: usize) -> bool {
        (0..self.target.len()).all(|w| {
            let c = self.current[w];
            c + self.min_rest[k][w] <= self.target[w] && self.target[w] <= c + self.max_rest[k][w]
        })
    }

    fn run(&mut self, k: usize) -> bool {
        self.nodes += 1;
        if self.nodes > REPAIR_NODE_LIMIT || !self.feasible(k) {
            return false;
        }
        if k == self.options.len() {
            return true;
        }
        // Identical cycles are interchangeable: choose their options in non-decreasing order.
        let first = if self.same_as_prev[k] {
            self.choice[k - 1]
        } else {
            0
        };
        for o in first..self.options[k].len() {
            self.choice[k] = o;
            for (w, &d) in self.options[k][o].1.iter().enumerate() {
                self.current[w] += d;
            }
            if self.run(k + 1) {
                return true;
            }
            for (w, &d) in self.options[k][o].1.iter().enumerate() {
                self.current[w] -= d;
            }
        }
        false
    }
}

/// Number of copies of w·α used by `c`, indexed by w.
fn alpha_counts(c: &Cycle, alpha: Vertex, n: usize) -> Vec<i64> {
    let mut out = vec![0; n];
    if let Some((a, b)) = c.neighbors_of(alpha) {
        out[a.index as usize] += 1;
        out[b.index as usize] += 1;
    }
    out
}

/// Admissible images of one cycle, deduplicated, identity first.
fn repair_options(c: &Cycle, alpha: Vertex, beta: Vertex) -> Vec<Cycle> {
    let has_a = c.contains(alpha);
    let has_b = c.contains(beta);
    let mut out = vec![c.clone()];
    if has_a != has_b {
        out.push(c.swapped(alpha, beta));
        return out;
    }
    let n = c.len();
    let start = c.iter().position(|&x| x == alpha).expect("alpha on cycle");
    let seq: Vec<Vertex> = (0..n).map(|i| c[(start + i) % n]).collect();
    let j = seq.iter().position(|&x| x == beta).expect("beta on cycle");
    let inner_p = &seq[1..j];
    // Interior of P' listed from the α end.
    let inner_q: Vec<Vertex> = seq[j + 1..].iter().rev().copied().collect();
    for swap_p in [false, true] {
        for swap_q in [false, true] {
            let (e1, e2) = if swap_p { (beta, alpha) } else { (alpha, beta) };
            let mut raw = vec![e1];
            raw.extend_from_slice(inner_p);
            raw.push(e2);
            // After e2 we need the interior vertex adjacent to e2 under Q'.
            let from_alpha_end = (e2 == alpha) != swap_q;
            if from_alpha_end {
                raw.extend(inner_q.iter().copied());
            } else {
                raw.extend(inner_q.iter().rev().copied());
            }
            if let Ok(cand) = Cycle::new(raw) {
                if !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
    }
    out
}
