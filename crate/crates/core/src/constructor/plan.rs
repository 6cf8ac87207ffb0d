use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::LengthSeq;

/// Base cycles absorbed, in order, into one target cycle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergeGroup {
    pub target: u32,
    pub pieces: Vec<u32>,
}

impl MergeGroup {
    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MergePlan {
    /// Length of the protected cycle.
    pub h: u32,
    pub groups: Vec<MergeGroup>,
}

impl MergePlan {
    pub fn joins(&self) -> usize {
        self.groups.iter().map(|g| g.pieces.len() - 1).sum()
    }
}

impl fmt::Display for MergePlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h={}", self.h)?;
        for g in self.groups.iter().filter(|g| !g.is_identity()) {
            let parts: Vec<String> = g.pieces.iter().map(u32::to_string).collect();
            write!(f, " {}={}", g.target, parts.join("+"))?;
        }
        Ok(())
    }
}

fn infeasible(msg: impl Into<String>) -> Error {
    Error::PlanInfeasible(msg.into())
}

/// Allocates base cycles to the targets of `m` so that growing each target one
/// piece at a time keeps every join within `s + b ≤ h` and `h + s + b ≤ bound`.
///
/// One cycle of length `h` is protected and matched to itself, and targets
/// longer than 4 that occur in the base are matched identically before the
/// remaining targets are filled from 4-cycles and 2-cycles.
pub fn plan_merges(base: &[u32], m: &LengthSeq, h: u32, bound: u32) -> Result<MergePlan> {
    let base_sum: u64 = base.iter().map(|&b| b as u64).sum();
    if base_sum != m.sum() {
        return Err(Error::Input(format!(
            "base sums to {base_sum} but M sums to {}",
            m.sum()
        )));
    }
    let mut pool = base.to_vec();
    pool.sort_unstable();
    let mut targets: Vec<u32> = m.lengths().to_vec();
    targets.sort_unstable_by(|a, b| b.cmp(a));

    let mut groups = Vec::new();
    let take = |pool: &mut Vec<u32>, k: u32| -> bool {
        match pool.iter().position(|&b| b == k) {
            Some(i) => {
                pool.remove(i);
                true
            }
            None => false,
        }
    };
    if !take(&mut pool, h) {
        return Err(infeasible(format!("base has no {h}-cycle to protect")));
    }
    match targets.iter().position(|&t| t == h) {
        Some(i) => {
            targets.remove(i);
        }
        None => return Err(infeasible(format!("M has no {h}-cycle to protect"))),
    }
    groups.push(MergeGroup {
        target: h,
        pieces: vec![h],
    });
    let mut open = Vec::new();
    for t in targets {
        if t > 4 && take(&mut pool, t) {
            groups.push(MergeGroup {
                target: t,
                pieces: vec![t],
            });
        } else {
            open.push(t);
        }
    }
    let mut bigs: Vec<u32> = pool.iter().copied().filter(|&b| b > 4).collect();
    pool.retain(|&b| b <= 4);
    bigs.sort_unstable_by(|a, b| b.cmp(a));
    let mut seeds = vec![0u32; open.len()];
    for b in bigs {
        let slot = (0..open.len())
            .filter(|&i| seeds[i] == 0 && open[i] >= b + 2)
            .min_by_key(|&i| open[i]);
        match slot {
            Some(i) => seeds[i] = b,
            None => return Err(infeasible(format!("base {b}-cycle fits no target"))),
        }
    }
    let fours = pool.iter().filter(|&&b| b == 4).count() as u32;

    let mut fours_of = vec![0u32; open.len()];
    if !allocate(&open, &seeds, 0, fours, h, bound, &mut fours_of) {
        return Err(infeasible(format!(
            "no allocation of {fours} 4-cycles and {} 2-cycles to targets {open:?} respects h = {h}, bound = {bound}",
            pool.len() as u32 - fours
        )));
    }
    for i in 0..open.len() {
        let (t, seed, a) = (open[i], seeds[i], fours_of[i]);
        let mut pieces = if seed > 0 { vec![seed] } else { Vec::new() };
        pieces.extend(std::iter::repeat_n(4, a as usize));
        pieces.extend(std::iter::repeat_n(2, ((t - seed - 4 * a) / 2) as usize));
        groups.push(MergeGroup { target: t, pieces });
    }
    Ok(MergePlan { h, groups })
}

/// Chooses the number of 4-cycles for each open target, most first, with backtracking.
fn allocate(
    open: &[u32],
    seeds: &[u32],
    i: usize,
    fours: u32,
    h: u32,
    bound: u32,
    out: &mut [u32],
) -> bool {
    if i == open.len() {
        return fours == 0;
    }
    let capacity: u32 = (i..open.len()).map(|j| (open[j] - seeds[j]) / 4).sum();
    if fours > capacity {
        return false;
    }
    let (t, rest) = (open[i], open[i] - seeds[i]);
    for a in (0..=(rest / 4).min(fours)).rev() {
        let pieces = u32::from(seeds[i] > 0) + a + (rest - 4 * a) / 2;
        if pieces > 1 && (t > h || h + t > bound) {
            continue;
        }
        out[i] = a;
        if allocate(open, seeds, i + 1, fours - a, h, bound, out) {
            return true;
        }
    }
    false
}
