//! Base decompositions and the driver that grows them into an (M)-cycle decomposition.

mod base;
mod plan;

pub use base::{base_dissected, base_even, base_layered, base_mixed, base_odd, simple_base};
pub use plan::{plan_merges, MergeGroup, MergePlan};

use std::collections::HashSet;

use crate::certify::{verify_decomposition, Verdict};
use crate::conditions::{check_construction_gate, Coverage};
use crate::error::{Error, Result};
use crate::joining::Surgeon;
use crate::model::{GraphSpec, LengthSeq, Packing};
use crate::oracle::Budget;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Free,
    Fixed,
    Protected,
    Growing,
}

/// Builds decompositions and keeps an audit log of every step.
#[derive(Debug, Clone)]
pub struct Constructor {
    /// Budget for each search-backed simple-layer packing.
    pub budget: Budget,
    surgeon: Surgeon,
    journal: Vec<String>,
}

impl Default for Constructor {
    fn default() -> Self {
        Constructor::new(Budget::seconds(30.0))
    }
}

fn gap(context: &str, e: Error) -> Error {
    match e {
        Error::ConstructiveGap(_) | Error::NotCovered(_) => e,
        other => Error::ConstructiveGap(format!("{context}: {other}")),
    }
}

fn find(slots: &[Slot], want: Slot) -> usize {
    slots.iter().position(|&s| s == want).expect("slot present")
}

impl Constructor {
    pub fn new(budget: Budget) -> Self {
        Constructor {
            budget,
            surgeon: Surgeon::new(),
            journal: Vec::new(),
        }
    }

    pub fn journal(&self) -> &[String] {
        &self.journal
    }

    pub fn take_journal(&mut self) -> Vec<String> {
        std::mem::take(&mut self.journal)
    }

    /// An (M)-cycle decomposition of λK_{v,u}, certified before it is returned.
    pub fn decompose(&mut self, spec: &GraphSpec, m: &LengthSeq) -> Result<Packing> {
        if spec.v > spec.u {
            self.journal.push("mirror parts".into());
            return Ok(self.decompose(&spec.mirrored(), m)?.mirrored());
        }
        if let Coverage::NotCovered(reason) = check_construction_gate(spec, m) {
            return Err(Error::NotCovered(reason));
        }
        let (m_t, m_prev) = match (m.last(), m.second_last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::NotCovered("M needs at least two cycles".into())),
        };
        let GraphSpec { lambda, v, .. } = *spec;
        let packing = if lambda == 1 {
            self.journal.push(format!("base simple M={m}"));
            let layer = simple_base(v, spec.u, m, false, &self.budget).map_err(|e| gap("base", e))?;
            Packing::from_cycles(*spec, layer.cycles)?
        } else if lambda % 2 == 0 {
            self.journal.push(format!("base even m_t={m_t}"));
            let base = base_even(spec, m_t).map_err(|e| gap("base", e))?;
            match self.merge(base, m, m_t) {
                Err(Error::PlanInfeasible(reason)) => {
                    let polygons = dissection(m, m_t);
                    self.journal.push(format!("plan infeasible ({reason}); base dissected {polygons:?}"));
                    let base = base_dissected(spec, m_t, &polygons).map_err(|e| gap("base", e))?;
                    self.merge(base, m, m_t).map_err(|e| gap("merge", e))?
                }
                other => other.map_err(|e| gap("merge", e))?,
            }
        } else if m_t > v {
            let base = if let Some((layer, polygons)) = mixed_pieces(m, v * spec.u, v) {
                self.journal.push(format!("base mixed layer={layer} m_t={m_t} polygons={polygons:?}"));
                base_mixed(spec, &layer, m_t, &polygons, &self.budget)
            } else if let Some(layer) = layer_pieces(m, v * spec.u) {
                self.journal.push(format!("base layered {layer}"));
                base_layered(spec, &layer, &self.budget)
            } else {
                Err(Error::BaseUnavailable(format!(
                    "m_t = {m_t} > min(v,u) = {v} and no simple layer fits M"
                )))
            };
            let base = base.map_err(|e| gap("base", e))?;
            self.merge(base, m, m_t).map_err(|e| gap("merge", e))?
        } else {
            self.journal.push(format!("base odd m_t={m_t} m_prev={m_prev}"));
            let first = base_odd(spec, m_t, m_prev, &self.budget)
                .and_then(|base| self.merge(base, m, m_t));
            match first {
                Err(e @ (Error::PlanInfeasible(_) | Error::BaseUnavailable(_))) => {
                    let layer = layer_pieces(m, spec.v * spec.u).ok_or_else(|| gap("base", e.clone()))?;
                    self.journal.push(format!("{e}; base layered {layer}"));
                    let base = base_layered(spec, &layer, &self.budget).map_err(|e| gap("base", e))?;
                    self.merge(base, m, m_t).map_err(|e| gap("merge", e))?
                }
                other => other.map_err(|e| gap("merge", e))?,
            }
        };
        match verify_decomposition(spec, &packing.cycles, m) {
            Verdict::Valid => Ok(packing),
            Verdict::Invalid(reason) => Err(Error::ConstructiveGap(format!(
                "certifier rejected the construction: {reason}"
            ))),
        }
    }

    /// Joins base 2- and 4-cycles into the targets of `m`, protecting one h-cycle.
    fn merge(&mut self, base: Packing, m: &LengthSeq, h: u32) -> Result<Packing> {
        let lengths: Vec<u32> = base.cycles.iter().map(|c| c.len() as u32).collect();
        let plan = plan_merges(&lengths, m, h, base.spec.join_bound())?;
        self.journal.push(format!("plan {plan}"));
        let len_of = |p: &Packing, i: usize| p.cycles[i].len() as u32;
        let free_of = |p: &Packing, slots: &[Slot], k: u32| {
            (0..slots.len())
                .find(|&i| slots[i] == Slot::Free && len_of(p, i) == k)
                .ok_or_else(|| Error::PlanInfeasible(format!("no free {k}-cycle left")))
        };

        let mut cur = base;
        let mut slots = vec![Slot::Free; cur.cycles.len()];
        let hi = free_of(&cur, &slots, h)?;
        slots[hi] = Slot::Protected;
        for g in plan.groups.iter().skip(1).filter(|g| g.is_identity()) {
            let i = free_of(&cur, &slots, g.target)?;
            slots[i] = Slot::Fixed;
        }
        for g in plan.groups.iter().filter(|g| !g.is_identity()) {
            let first = free_of(&cur, &slots, g.pieces[0])?;
            slots[first] = Slot::Growing;
            let mut size = g.pieces[0];
            for &piece in &g.pieces[1..] {
                let hi = find(&slots, Slot::Protected);
                let gi = find(&slots, Slot::Growing);
                let pi = free_of(&cur, &slots, piece)?;
                self.journal.push(format!("join target={} {size}+{piece} h={h}", g.target));
                let joined = self.surgeon.join_two_cycles(&cur, hi, gi, pi);
                self.journal.extend(self.surgeon.take_journal());
                cur = joined?;
                let mut gone = [hi, gi, pi];
                gone.sort_unstable();
                for &i in gone.iter().rev() {
                    slots.remove(i);
                }
                slots.extend([Slot::Protected, Slot::Growing]);
                size += piece;
            }
            let gi = find(&slots, Slot::Growing);
            slots[gi] = Slot::Fixed;
        }
        Ok(cur)
    }
}

/// Polygon sizes for a dissected base: whole targets while their excess fits,
/// then one partial piece, so that the excesses sum to (m_t − 2)/2.
fn dissection(m: &LengthSeq, m_t: u32) -> Vec<u32> {
    let mut left = (m_t - 2) / 2;
    let mut targets = m.lengths().to_vec();
    targets.pop();
    let mut out = Vec::new();
    for &t in targets.iter().rev() {
        if left == 0 {
            break;
        }
        let e = ((t - 2) / 2).min(left);
        if e > 0 {
            out.push(2 + 2 * e);
            left -= e;
        }
    }
    out
}

/// Simple-layer lengths summing to `vu`: m_{t−1} and m_t, then at most one
/// piece of each remaining target, whole targets preferred.
fn layer_pieces(m: &LengthSeq, vu: u32) -> Option<LengthSeq> {
    let ls = m.lengths();
    let n = ls.len();
    let left = vu.checked_sub(ls[n - 2] + ls[n - 1])?;
    let rest: Vec<u32> = ls[..n - 2].iter().rev().copied().collect();
    let picked = pick_pieces(&rest, left, u32::MAX)?;
    let mut layer = vec![ls[n - 2], ls[n - 1]];
    layer.extend(picked.iter().map(|&(_, p)| p));
    LengthSeq::new(layer).ok()
}

/// Layer and polygons for a mixed base: the layer takes pieces of at most `cap`
/// from the targets other than m_t, the polygons dissect m_t using the rest.
fn mixed_pieces(m: &LengthSeq, vu: u32, cap: u32) -> Option<(LengthSeq, Vec<u32>)> {
    let ls = m.lengths();
    let m_t = *ls.last()?;
    let rest: Vec<u32> = ls[..ls.len() - 1].iter().rev().copied().collect();
    let picked = pick_pieces(&rest, vu, cap)?;
    let layer = LengthSeq::new(picked.iter().map(|&(_, p)| p).collect()).ok()?;
    let unused: Vec<u32> = (0..rest.len())
        .filter(|i| picked.iter().all(|&(j, _)| j != *i))
        .map(|i| rest[i])
        .collect();
    let mut left = (m_t - 2) / 2;
    let mut polygons = Vec::new();
    for t in unused {
        let e = ((t - 2) / 2).min(left);
        if e > 0 {
            polygons.push(2 + 2 * e);
            left -= e;
        }
    }
    (left == 0).then_some((layer, polygons))
}

/// At most one piece in [4, min(t, cap)] from each target, summing to `total`.
fn pick_pieces(targets: &[u32], total: u32, cap: u32) -> Option<Vec<(usize, u32)>> {
    fn go(
        targets: &[u32],
        i: usize,
        left: u32,
        cap: u32,
        chosen: &mut Vec<(usize, u32)>,
        dead: &mut HashSet<(usize, u32)>,
    ) -> bool {
        if left == 0 {
            return true;
        }
        if i == targets.len() || left < 4 || dead.contains(&(i, left)) {
            return false;
        }
        let top = targets[i].min(left).min(cap);
        for p in (4..=top).rev().step_by(2).chain([0]) {
            if p > 0 {
                chosen.push((i, p));
            }
            if go(targets, i + 1, left - p, cap, chosen, dead) {
                return true;
            }
            if p > 0 {
                chosen.pop();
            }
        }
        dead.insert((i, left));
        false
    }
    let mut chosen = Vec::new();
    go(targets, 0, total, cap, &mut chosen, &mut HashSet::new()).then_some(chosen)
}

/// Runs [`Constructor::decompose`] with the default budget.
pub fn decompose(spec: &GraphSpec, m: &LengthSeq) -> Result<Packing> {
    Constructor::default().decompose(spec, m)
}
