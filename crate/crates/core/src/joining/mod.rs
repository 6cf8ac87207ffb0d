//! Leave surgery: split, gather, normalize and join cycles through sequences of switches.
//!
//! Every routine works on a [`Packing`] and returns a new one. Where a proof step
//! leaves the terminus of a switch open, all feasible termini are examined and
//! the branch that makes progress is taken. Steps whose proofs defer to the
//! simple-graph results are carried out by a bounded best-first switch search.

mod leave;
mod search;

use std::collections::HashSet;

pub use leave::{
    as_path, component_count, degree_surplus, high_degree, isolated_twin, path_pairs,
    sole_component, two_cycle_split, PathPair,
};

use crate::error::{Error, Result};
use crate::model::{classify_leave, Component, EdgeMultiset, Packing, Vertex};
use crate::switching::{switch_outcomes, SwitchRecord};
use search::{best_first, Goal};

/// Result of a path-splitting switch.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub packing: Packing,
    /// The switch ended at x_{t-1}, so the leave did not split.
    pub terminus_was_prev: bool,
}

/// Runs lemma routines and records every switch they perform.
#[derive(Debug, Clone)]
pub struct Surgeon {
    journal: Vec<String>,
    /// Packings expanded by a fallback search before giving up.
    pub search_limit: usize,
}

impl Default for Surgeon {
    fn default() -> Self {
        Surgeon {
            journal: Vec::new(),
            search_limit: 3000,
        }
    }
}

type Outcomes = Vec<(Packing, SwitchRecord)>;

fn precondition(msg: impl Into<String>) -> Error {
    Error::LemmaPrecondition(msg.into())
}

/// Ordering measure for chains and rings: a ring sits between chains of s and s+1 cycles.
fn measure(c: &Component) -> usize {
    match c {
        Component::Cycle(_) => 2,
        Component::Chain { cycles, .. } => 2 * cycles.len(),
        Component::Ring { cycles, .. } => 2 * cycles.len() + 1,
        Component::Other(_) => usize::MAX,
    }
}

fn sole_measure(leave: &EdgeMultiset) -> usize {
    sole_component(leave).map(|c| measure(&c)).unwrap_or(usize::MAX)
}

fn check_size(p: &Packing) -> Result<()> {
    let ell = p.leave.size();
    let bound = p.spec.join_bound();
    if ell > bound {
        return Err(precondition(format!("leave size {ell} exceeds {bound}")));
    }
    Ok(())
}

/// Score for the fallback search aiming at a leave that splits into an m1- and an m2-cycle.
fn split_score(m1: u32, m2: u32) -> impl Fn(&EdgeMultiset) -> i64 {
    move |leave: &EdgeMultiset| {
        let comps = component_count(leave) as i64;
        let surplus = degree_surplus(leave) as i64;
        let pairs = if path_pairs(leave, m1, m2).is_empty() { 4 } else { 0 };
        20 * (comps - 1).abs() + 6 * (surplus - 1).abs() + pairs
    }
}

impl Surgeon {
    pub fn new() -> Self {
        Surgeon::default()
    }

    pub fn journal(&self) -> &[String] {
        &self.journal
    }

    pub fn take_journal(&mut self) -> Vec<String> {
        std::mem::take(&mut self.journal)
    }

    fn log(&mut self, tag: &str, rec: &SwitchRecord) {
        self.journal.push(format!("switch lemma={tag} {rec}"));
    }

    fn log_all(&mut self, tag: &str, recs: &[SwitchRecord]) {
        for r in recs {
            self.log(tag, r);
        }
    }

    /// Takes an m1-cycle and an m2-cycle out of the leave if it splits that way.
    fn absorb_split(&self, p: &Packing, m1: u32, m2: u32) -> Option<Packing> {
        let (a, b) = two_cycle_split(&p.leave, m1, m2)?;
        let mut q = p.clone();
        q.absorb(a).ok()?;
        q.absorb(b).ok()?;
        Some(q)
    }

    fn search_split(&mut self, p: &Packing, m1: u32, m2: u32, tag: &str) -> Result<Packing> {
        let done = |l: &EdgeMultiset| two_cycle_split(l, m1, m2).is_some();
        let score = split_score(m1, m2);
        let goal = Goal {
            done: &done,
            score: &score,
        };
        match best_first(p, &goal, self.search_limit)? {
            Some((q, recs)) => {
                self.log_all(tag, &recs);
                self.absorb_split(&q, m1, m2)
                    .ok_or_else(|| Error::InfeasibleSwitch("split vanished".into()))
            }
            None => Err(Error::InfeasibleSwitch(format!(
                "no switch sequence within {} packings splits the leave into ({m1}, {m2})",
                self.search_limit
            ))),
        }
    }

    /// Moves two units of leave degree from `a` to its twin `b`.
    pub fn shift_degree(&mut self, p: &Packing, a: Vertex, b: Vertex) -> Result<Packing> {
        if a == b || a.side != b.side || !p.spec.contains(a) || !p.spec.contains(b) {
            return Err(Error::InvalidTwin(a, b));
        }
        let (da, db) = (p.leave.degree(a), p.leave.degree(b));
        if da <= db {
            return Err(precondition(format!(
                "deg({a}) = {da} is not greater than deg({b}) = {db}"
            )));
        }
        let mut best: Option<(usize, Packing, SwitchRecord)> = None;
        for (w, _) in p.leave.neighbors(a) {
            if p.leave.mult(w, a) <= p.leave.mult(w, b) {
                continue;
            }
            for (q, rec) in switch_outcomes(p, a, b, w)? {
                if q.leave.degree(a) + 2 != da {
                    continue;
                }
                let k = component_count(&q.leave);
                if best.as_ref().is_none_or(|(bk, _, _)| k < *bk) {
                    best = Some((k, q, rec));
                }
            }
        }
        let (_, q, rec) = best.ok_or_else(|| {
            Error::InfeasibleSwitch(format!("no ({a},{b})-switch moves degree off {a}"))
        })?;
        self.log("shift", &rec);
        Ok(q)
    }

    /// Shifts degree until exactly one leave vertex has degree 4 and the rest 0 or 2.
    pub fn concentrate_degree(&mut self, p: &Packing) -> Result<Packing> {
        check_size(p)?;
        if p.leave.max_degree() < 4 {
            return Err(precondition("no leave vertex of degree at least 4"));
        }
        let k0 = component_count(&p.leave);
        let d0 = degree_surplus(&p.leave) as usize;
        let ell = p.leave.size() as usize;
        let mut cur = p.clone();
        loop {
            let high = high_degree(&cur.leave);
            if high.len() == 1 && high[0].1 == 4 {
                break;
            }
            let pick = high
                .iter()
                .find_map(|&(a, _)| isolated_twin(&cur.spec, &cur.leave, a).map(|b| (a, b)));
            let Some((a, b)) = pick else {
                return Err(Error::InfeasibleSwitch(
                    "no isolated twin next to a high-degree vertex".into(),
                ));
            };
            cur = self.shift_degree(&cur, a, b)?;
        }
        let k = component_count(&cur.leave);
        assert!(
            k <= (k0 + d0 - 1).min(ell / 2 - 1),
            "component bound violated: {k} > min({k0}+{d0}-1, {ell}/2-1)"
        );
        Ok(cur)
    }

    /// Validates the path preconditions and returns all outcomes of the
    /// (x_0, x_t)-switch with origin x_1.
    fn split_outcomes(&self, p: &Packing, path: &[Vertex]) -> Result<Outcomes> {
        if path.len() < 2 {
            return Err(precondition("path too short"));
        }
        let t = path.len() - 1;
        if t < 4 || t % 2 == 1 {
            return Err(precondition(format!("path length {t} is not even and at least 4")));
        }
        let st = classify_leave(&p.leave)?;
        if st.nontrivial() != 1 {
            return Err(precondition(format!(
                "leave has {} non-trivial components, expected one",
                st.nontrivial()
            )));
        }
        let mut rest = p.leave.clone();
        for w in path.windows(2) {
            if !rest.remove(w[0], w[1], 1) {
                return Err(precondition(format!("{}{} is not a leave edge", w[0], w[1])));
            }
        }
        let mut distinct = path.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() != path.len() {
            return Err(precondition("path repeats a vertex"));
        }
        let (x0, x1, xt) = (path[0], path[1], path[t]);
        if as_path(&rest, xt, x0).is_none() {
            return Err(precondition("remaining leave edges do not form a path"));
        }
        if p.leave.mult(x1, xt) > 0 {
            return Err(precondition(format!("{x1}{xt} is a leave edge")));
        }
        switch_outcomes(p, x0, xt, x1)
    }

    /// The (x_0, x_t)-switch with origin x_1 on path `path` of the leave.
    pub fn split_component(&mut self, p: &Packing, path: &[Vertex]) -> Result<SplitOutcome> {
        let outs = self.split_outcomes(p, path)?;
        let prev = path[path.len() - 2];
        let t = (path.len() - 1) as u32;
        let rest = p.leave.size() - t;
        let pick = outs
            .iter()
            .position(|(q, r)| r.terminus != prev && two_cycle_split(&q.leave, t, rest).is_some())
            .or_else(|| outs.iter().position(|(_, r)| r.terminus != prev))
            .unwrap_or(0);
        let (q, rec) = outs
            .into_iter()
            .nth(pick)
            .ok_or_else(|| Error::InfeasibleSwitch("split switch has no outcome".into()))?;
        self.log("split", &rec);
        Ok(SplitOutcome {
            terminus_was_prev: rec.terminus == prev,
            packing: q,
        })
    }

    /// Turns a leave that is a single 2-chain into an m1-cycle and an m2-cycle.
    pub fn chain_split(&mut self, p: &Packing, m1: u32, m2: u32) -> Result<Packing> {
        let Some(Component::Chain { cycles, links }) = sole_component(&p.leave) else {
            return Err(precondition("leave is not a single chain"));
        };
        if cycles.len() != 2 {
            return Err(precondition(format!("chain has {} cycles, expected 2", cycles.len())));
        }
        let (a, b) = (cycles[0].len() as u32, cycles[1].len() as u32);
        if m1 < 2 || m2 < 2 || m1 % 2 == 1 || m2 % 2 == 1 || m1 + m2 != a + b {
            return Err(precondition(format!(
                "targets ({m1}, {m2}) do not match a ({a}, {b})-chain"
            )));
        }
        if (m1, m2) == (a, b) || (m1, m2) == (b, a) {
            let mut q = p.clone();
            let (first, second) = if a == m1 {
                (cycles[0].clone(), cycles[1].clone())
            } else {
                (cycles[1].clone(), cycles[0].clone())
            };
            q.absorb(first)?;
            q.absorb(second)?;
            return Ok(q);
        }
        let small = m1.min(m2);
        let large = m1.max(m2);
        if a == 2 || b == 2 {
            let (two, big) = if a == 2 {
                (&cycles[0], &cycles[1])
            } else {
                (&cycles[1], &cycles[0])
            };
            let c = links[0];
            let x0 = if two[0] == c { two[1] } else { two[0] };
            let q = big.len();
            let i = big.iter().position(|&y| y == c).expect("link on cycle");
            for dir in [1, q - 1] {
                let y = big[(i + dir * (large as usize - 1)) % q];
                for (out, rec) in switch_outcomes(p, x0, y, c)? {
                    if let Some(done) = self.absorb_split(&out, m1, m2) {
                        self.log("chain-split", &rec);
                        return Ok(done);
                    }
                }
            }
        } else if small >= 4 {
            for (t, rest) in [(m1, m2), (m2, m1)] {
                for pair in path_pairs(&p.leave, t, rest) {
                    let Ok(outs) = self.split_outcomes(p, &pair.first) else {
                        continue;
                    };
                    for (out, rec) in outs {
                        if let Some(done) = self.absorb_split(&out, m1, m2) {
                            self.log("chain-split", &rec);
                            return Ok(done);
                        }
                    }
                }
            }
        }
        self.search_split(p, m1, m2, "chain-split")
    }

    /// Consumes a single chain or ring component with an (m1, m2) path pair.
    pub fn close_component(&mut self, p: &Packing, m1: u32, m2: u32) -> Result<Packing> {
        check_size(p)?;
        let ell = p.leave.size();
        if m1 < 2 || m2 < 2 || m1 % 2 == 1 || m2 % 2 == 1 || m1 + m2 != ell {
            return Err(precondition(format!("targets ({m1}, {m2}) do not sum to leave size {ell}")));
        }
        match sole_component(&p.leave) {
            Some(Component::Chain { .. } | Component::Ring { .. } | Component::Cycle(_)) => {}
            _ => return Err(precondition("leave is not a single chain or ring")),
        }
        if path_pairs(&p.leave, m1, m2).is_empty() {
            return Err(precondition(format!(
                "leave has no decomposition into a {m1}-path and a {m2}-path"
            )));
        }
        let mut cur = p.clone();
        for _ in 0..4 * ell {
            if let Some(done) = self.absorb_split(&cur, m1, m2) {
                return Ok(done);
            }
            let Some(comp) = sole_component(&cur.leave) else {
                break;
            };
            if let Component::Chain { cycles, .. } = &comp {
                if cycles.len() == 2 {
                    match self.chain_split(&cur, m1, m2) {
                        Ok(q) => return Ok(q),
                        Err(Error::LemmaPrecondition(_)) => break,
                        Err(e) => return Err(e),
                    }
                }
            }
            let here = measure(&comp);
            let outs = match &comp {
                Component::Ring { .. } => self.ring_outcomes(&cur, &comp)?,
                _ => self.chain_outcomes(&cur, m1, m2)?,
            };
            let mut next = None;
            for (q, rec, tag) in outs {
                if let Some(done) = self.absorb_split(&q, m1, m2) {
                    self.log(tag, &rec);
                    return Ok(done);
                }
                if next.is_none()
                    && sole_measure(&q.leave) < here
                    && !path_pairs(&q.leave, m1, m2).is_empty()
                {
                    next = Some((q, rec, tag));
                }
            }
            let Some((q, rec, tag)) = next else {
                break;
            };
            self.log(tag, &rec);
            cur = q;
        }
        self.search_split(&cur, m1, m2, "close")
    }

    /// Path-splitting switches on every (m1, m2) path pair of a chain.
    fn chain_outcomes(
        &self,
        p: &Packing,
        m1: u32,
        m2: u32,
    ) -> Result<Vec<(Packing, SwitchRecord, &'static str)>> {
        let mut out = Vec::new();
        for (t, rest) in [(m1, m2), (m2, m1)] {
            for pair in path_pairs(&p.leave, t, rest) {
                if let Ok(outs) = self.split_outcomes(p, &pair.first) {
                    out.extend(outs.into_iter().map(|(q, r)| (q, r, "close-chain")));
                }
            }
            if m1 == m2 {
                break;
            }
        }
        Ok(out)
    }

    /// Switches that shrink a ring: at a link vertex towards an isolated twin,
    /// or at the link between a 2-cycle and a longer ring cycle.
    fn ring_outcomes(
        &self,
        p: &Packing,
        comp: &Component,
    ) -> Result<Vec<(Packing, SwitchRecord, &'static str)>> {
        let Component::Ring { cycles, links } = comp else {
            return Ok(Vec::new());
        };
        let mut moves: Vec<(Vertex, Vertex, Vertex)> = Vec::new();
        let has_two = cycles.iter().any(|c| c.len() == 2);
        let all_two = cycles.iter().all(|c| c.len() == 2);
        if cycles.len() == 2 || all_two || !has_two {
            // Larger part first: it always has an isolated twin.
            let mut ordered = links.clone();
            ordered.sort_by_key(|x| (std::cmp::Reverse(p.spec.part_size(x.side)), *x));
            for &alpha in &ordered {
                if let Some(beta) = isolated_twin(&p.spec, &p.leave, alpha) {
                    for (w, _) in p.leave.neighbors(alpha) {
                        moves.push((alpha, beta, w));
                    }
                }
            }
        }
        if has_two && !all_two {
            for (i, d) in cycles.iter().enumerate() {
                if d.len() != 2 {
                    continue;
                }
                let n = cycles.len();
                for j in [(i + 1) % n, (i + n - 1) % n] {
                    if cycles[j].len() == 2 {
                        continue;
                    }
                    let Some(&c) = d.iter().find(|x| cycles[j].contains(**x)) else {
                        continue;
                    };
                    let alpha = if d[0] == c { d[1] } else { d[0] };
                    if let Some(beta) = isolated_twin(&p.spec, &p.leave, c) {
                        moves.push((c, beta, alpha));
                    }
                }
            }
        }
        let mut out = Vec::new();
        for (a, b, origin) in moves {
            if p.leave.mult(origin, a) <= p.leave.mult(origin, b) {
                continue;
            }
            for (q, r) in switch_outcomes(p, a, b, origin)? {
                out.push((q, r, "close-ring"));
            }
        }
        Ok(out)
    }

    /// Merges leave components into one chain with an (m1, m2) path pair.
    pub fn gather_to_chain(&mut self, p: &Packing, m1: u32, m2: u32) -> Result<Packing> {
        let high = high_degree(&p.leave);
        if high.len() != 1 || high[0].1 != 4 {
            return Err(precondition(
                "leave must have exactly one vertex of degree 4 and all others of degree 0 or 2",
            ));
        }
        let k = component_count(&p.leave) as u32;
        if m1 < k + 1 || m2 < k + 1 {
            return Err(precondition(format!(
                "targets ({m1}, {m2}) must be at least k+1 = {}",
                k + 1
            )));
        }
        if m1 + m2 != p.leave.size() {
            return Err(precondition(format!(
                "targets ({m1}, {m2}) do not sum to leave size {}",
                p.leave.size()
            )));
        }
        if is_gathered(&p.leave, m1, m2) {
            return Ok(p.clone());
        }
        let mut seen = HashSet::new();
        let mut trail = Vec::new();
        let mut nodes = 0usize;
        if let Some(q) = self.gather_dfs(p, m1, m2, &mut seen, &mut trail, &mut nodes)? {
            for r in &trail {
                self.log("gather", r);
            }
            return Ok(q);
        }
        let done = |l: &EdgeMultiset| is_gathered(l, m1, m2);
        let score = |l: &EdgeMultiset| {
            let comps = component_count(l) as i64;
            let pairs = if path_pairs(l, m1, m2).is_empty() { 3 } else { 0 };
            10 * (comps - 1) + pairs
        };
        let goal = Goal {
            done: &done,
            score: &score,
        };
        match best_first(p, &goal, self.search_limit)? {
            Some((q, recs)) => {
                self.log_all("gather", &recs);
                Ok(q)
            }
            None => Err(Error::InfeasibleSwitch(format!(
                "could not gather the leave into one chain with a ({m1}, {m2}) path pair"
            ))),
        }
    }

    /// Depth-first merging: each step joins a component into the chain holding
    /// the degree-4 vertex, choosing among termini; dead ends backtrack.
    fn gather_dfs(
        &self,
        p: &Packing,
        m1: u32,
        m2: u32,
        seen: &mut HashSet<EdgeMultiset>,
        trail: &mut Vec<SwitchRecord>,
        nodes: &mut usize,
    ) -> Result<Option<Packing>> {
        const NODE_CAP: usize = 400;
        if is_gathered(&p.leave, m1, m2) {
            return Ok(Some(p.clone()));
        }
        if !seen.insert(p.leave.clone()) || *nodes >= NODE_CAP {
            return Ok(None);
        }
        *nodes += 1;
        let st = classify_leave(&p.leave)?;
        let k = st.nontrivial();
        let Some(hub) = high_degree(&p.leave).first().map(|h| h.0) else {
            return Ok(None);
        };
        let Some(hi) = st.component_of(hub) else {
            return Ok(None);
        };
        let chain_vertices: Vec<Vertex> = st.components[hi]
            .vertices()
            .into_iter()
            .filter(|&x| p.leave.degree(x) == 2)
            .collect();
        // Longer cycles are merged before 2-cycles.
        let mut others: Vec<usize> = (0..k).filter(|&i| i != hi).collect();
        others.sort_by_key(|&i| (st.components[i].is_two_cycle(), i));
        for ci in others {
            let targets = st.components[ci].vertices();
            for &x in &chain_vertices {
                for &z in targets.iter().filter(|z| z.side == x.side) {
                    for (y, _) in p.leave.neighbors(x) {
                        let mut outs = switch_outcomes(p, x, z, y)?;
                        outs.retain(|(q, _)| chain_shaped(&q.leave) && component_count(&q.leave) < k);
                        for (q, rec) in outs {
                            trail.push(rec);
                            if let Some(done) = self.gather_dfs(&q, m1, m2, seen, trail, nodes)? {
                                return Ok(Some(done));
                            }
                            trail.pop();
                        }
                    }
                }
            }
        }
        if k == 1 {
            // Re-link: move a degree-4 vertex's attachment to an isolated twin.
            for (alpha, _) in high_degree(&p.leave) {
                let Some(beta) = isolated_twin(&p.spec, &p.leave, alpha) else {
                    continue;
                };
                for (w, _) in p.leave.neighbors(alpha) {
                    for (q, rec) in switch_outcomes(p, alpha, beta, w)? {
                        if !chain_shaped(&q.leave) {
                            continue;
                        }
                        trail.push(rec);
                        if let Some(done) = self.gather_dfs(&q, m1, m2, seen, trail, nodes)? {
                            return Ok(Some(done));
                        }
                        trail.pop();
                    }
                }
            }
        }
        Ok(None)
    }

    /// Gathers, then closes: the leave becomes an m1-cycle and an m2-cycle.
    pub fn extract_two_cycles(&mut self, p: &Packing, m1: u32, m2: u32) -> Result<Packing> {
        let ell = p.leave.size();
        if m1 + m2 != ell {
            return Err(precondition(format!("targets ({m1}, {m2}) do not sum to leave size {ell}")));
        }
        if m1 % 2 == 1 || m2 % 2 == 1 || m1 < 2 || m2 < 2 {
            return Err(precondition("targets must be even and at least 2"));
        }
        check_size(p)?;
        let chain = self.gather_to_chain(p, m1, m2)?;
        self.close_component(&chain, m1, m2)
    }

    /// Replaces the m- and m'-cycles by one (m+m')-cycle, keeping the h-cycle's length.
    ///
    /// The other cycles keep their order; the h-cycle and then the joined cycle
    /// are appended at the end.
    pub fn join_two_cycles(
        &mut self,
        d: &Packing,
        h_idx: usize,
        m_idx: usize,
        m2_idx: usize,
    ) -> Result<Packing> {
        if !d.leave.is_empty() {
            return Err(precondition("join requires an empty leave"));
        }
        let n = d.cycles.len();
        if h_idx >= n || m_idx >= n || m2_idx >= n || h_idx == m_idx || h_idx == m2_idx || m_idx == m2_idx
        {
            return Err(precondition("cycle indices must be distinct and in range"));
        }
        let h = d.cycles[h_idx].len() as u32;
        let m = d.cycles[m_idx].len() as u32;
        let m2 = d.cycles[m2_idx].len() as u32;
        if m + m2 > h {
            return Err(precondition(format!("m+m' = {} > h = {h}", m + m2)));
        }
        let bound = d.spec.join_bound();
        if h + m + m2 > bound {
            return Err(precondition(format!("h+m+m' = {} > {bound}", h + m + m2)));
        }
        let released = d.release(&[h_idx, m_idx, m2_idx]);
        let joined = m + m2;
        let out = match self.join_released(&released, h, joined, m, m2) {
            Ok(q) => q,
            Err(Error::InvalidTwin(..)) => unreachable!("twins are always same-part"),
            Err(_) => self.search_split(&released, h, joined, "join")?,
        };
        debug_assert_eq!(out.cycles.len(), n - 1);
        Ok(out)
    }

    fn join_released(&mut self, q: &Packing, h: u32, joined: u32, m: u32, m2: u32) -> Result<Packing> {
        if let Some(done) = self.absorb_split(q, h, joined) {
            return Ok(done);
        }
        let mut cur = q.clone();
        if cur.leave.max_degree() < 4 {
            cur = self.merge_disjoint(&cur, h, joined, m, m2)?;
            if let Some(done) = self.absorb_split(&cur, h, joined) {
                return Ok(done);
            }
        }
        let high = high_degree(&cur.leave);
        if !(high.len() == 1 && high[0].1 == 4) {
            cur = self.concentrate_degree(&cur)?;
        }
        self.extract_two_cycles(&cur, h, joined)
    }

    /// With all leave degrees at most 2, crosses the m- and m'-cycles by one switch.
    fn merge_disjoint(&mut self, q: &Packing, h: u32, joined: u32, m: u32, m2: u32) -> Result<Packing> {
        let st = classify_leave(&q.leave)?;
        let cycles: Vec<_> = st
            .components
            .iter()
            .filter_map(|c| match c {
                Component::Cycle(c) => Some(c.clone()),
                _ => None,
            })
            .collect();
        let first = cycles.iter().position(|c| c.len() as u32 == m);
        let second = cycles
            .iter()
            .enumerate()
            .position(|(i, c)| Some(i) != first && c.len() as u32 == m2);
        let (Some(a), Some(b)) = (first, second) else {
            return Err(precondition("released cycles are not disjoint cycles of lengths m, m'"));
        };
        let mut fallback = None;
        for &x in cycles[a].iter() {
            for &z in cycles[b].iter().filter(|z| z.side == x.side) {
                for (y, _) in q.leave.neighbors(x) {
                    for (out, rec) in switch_outcomes(q, x, z, y)? {
                        if two_cycle_split(&out.leave, h, joined).is_some() {
                            self.log("join", &rec);
                            return Ok(out);
                        }
                        let high = high_degree(&out.leave);
                        if fallback.is_none() && high.len() == 1 && high[0].1 == 4 {
                            fallback = Some((out, rec));
                        }
                    }
                }
            }
        }
        let (out, rec) = fallback
            .ok_or_else(|| Error::InfeasibleSwitch("no merging switch between m- and m'-cycles".into()))?;
        self.log("join", &rec);
        Ok(out)
    }
}

/// A single chain (or cycle) component with an (m1, m2) path pair.
fn is_gathered(leave: &EdgeMultiset, m1: u32, m2: u32) -> bool {
    matches!(
        sole_component(leave),
        Some(Component::Chain { .. } | Component::Cycle(_))
    ) && !path_pairs(leave, m1, m2).is_empty()
}

/// Every component is a cycle or a chain.
fn chain_shaped(leave: &EdgeMultiset) -> bool {
    classify_leave(leave).is_ok_and(|s| {
        s.components
            .iter()
            .all(|c| matches!(c, Component::Cycle(_) | Component::Chain { .. }))
    })
}

pub fn shift_degree(p: &Packing, a: Vertex, b: Vertex) -> Result<Packing> {
    Surgeon::new().shift_degree(p, a, b)
}

pub fn concentrate_degree(p: &Packing) -> Result<Packing> {
    Surgeon::new().concentrate_degree(p)
}

pub fn split_component(p: &Packing, path: &[Vertex]) -> Result<SplitOutcome> {
    Surgeon::new().split_component(p, path)
}

pub fn chain_split(p: &Packing, m1: u32, m2: u32) -> Result<Packing> {
    Surgeon::new().chain_split(p, m1, m2)
}

pub fn close_component(p: &Packing, m1: u32, m2: u32) -> Result<Packing> {
    Surgeon::new().close_component(p, m1, m2)
}

pub fn gather_to_chain(p: &Packing, m1: u32, m2: u32) -> Result<Packing> {
    Surgeon::new().gather_to_chain(p, m1, m2)
}

pub fn extract_two_cycles(p: &Packing, m1: u32, m2: u32) -> Result<Packing> {
    Surgeon::new().extract_two_cycles(p, m1, m2)
}

pub fn join_two_cycles(d: &Packing, h_idx: usize, m_idx: usize, m2_idx: usize) -> Result<Packing> {
    Surgeon::new().join_two_cycles(d, h_idx, m_idx, m2_idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certify::{verify_decomposition, verify_packing};
    use crate::constructor::base_even;
    use crate::model::{Cycle, GraphSpec, LengthSeq};

    fn spec(l: u32, v: u32, u: u32) -> GraphSpec {
        GraphSpec::new(l, v, u).unwrap()
    }

    fn vx(s: &str) -> Vertex {
        let i: u32 = s[1..].parse().unwrap();
        if s.starts_with('L') {
            Vertex::left(i)
        } else {
            Vertex::right(i)
        }
    }

    fn cyc(s: &str) -> Cycle {
        Cycle::new(s.split_whitespace().map(vx).collect()).unwrap()
    }

    /// Releases the listed cycles of a base decomposition into the leave.
    fn leave_of(base: &Packing, cycles: &[&str]) -> Packing {
        let mut taken = Vec::new();
        for c in cycles {
            let c = cyc(c);
            let i = (0..base.cycles.len())
                .find(|i| base.cycles[*i] == c && !taken.contains(i))
                .unwrap_or_else(|| panic!("{c} not in base"));
            taken.push(i);
        }
        base.release(&taken)
    }

    fn long_lengths(p: &Packing) -> Vec<u32> {
        p.lengths().into_iter().filter(|&k| k > 2).collect()
    }

    fn assert_gained(before: &Packing, after: &Packing, m1: u32, m2: u32) {
        assert!(after.is_decomposition());
        assert!(verify_packing(after).is_valid());
        let mut expected = before.lengths();
        expected.extend([m1, m2]);
        expected.sort_unstable();
        assert_eq!(after.lengths(), expected);
    }

    #[test]
    fn split_six_cycle_into_four_and_two() {
        let base = base_even(&spec(2, 3, 3), 6).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1 L2 R2"]);
        let path: Vec<_> = ["L0", "R0", "L1", "R1", "L2"].map(vx).to_vec();
        let out = split_component(&p, &path).unwrap();
        assert!(verify_packing(&out.packing).is_valid());
        assert_eq!(out.packing.lengths(), p.lengths());
        if !out.terminus_was_prev {
            assert!(two_cycle_split(&out.packing.leave, 4, 2).is_some());
        }
    }

    #[test]
    fn split_rejects_odd_paths_and_non_paths() {
        let base = base_even(&spec(2, 3, 3), 6).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1 L2 R2"]);
        let odd: Vec<_> = ["L0", "R0", "L1", "R1"].map(vx).to_vec();
        assert!(matches!(split_component(&p, &odd), Err(Error::LemmaPrecondition(_))));
        let base = base_even(&spec(2, 4, 4), 6).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1 L2 R2", "L0 R3"]);
        let path: Vec<_> = ["L0", "R0", "L1", "R1", "L2"].map(vx).to_vec();
        assert!(matches!(split_component(&p, &path), Err(Error::LemmaPrecondition(_))));
    }

    #[test]
    fn chain_split_trivial_cases() {
        let base = base_even(&spec(2, 3, 3), 6).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1", "L1 R2"]);
        let q = chain_split(&p, 2, 4).unwrap();
        assert_gained(&p, &q, 2, 4);
        let base = base_even(&spec(2, 4, 4), 2).unwrap();
        let p = leave_of(&base, &["L0 R0", "L0 R1"]);
        let q = chain_split(&p, 2, 2).unwrap();
        assert_gained(&p, &q, 2, 2);
    }

    #[test]
    fn chain_split_two_six_into_fours() {
        let base = base_even(&spec(2, 4, 4), 6).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1 L2 R2", "L0 R3"]);
        let mut s = Surgeon::new();
        let q = s.chain_split(&p, 4, 4).unwrap();
        assert_gained(&p, &q, 4, 4);
        assert!(s.journal().iter().all(|l| l.starts_with("switch lemma=")));
        let err = chain_split(&p, 4, 6).unwrap_err();
        assert!(matches!(err, Error::LemmaPrecondition(_)));
    }

    #[test]
    fn close_chain_of_two_four_cycles() {
        let base = base_even(&spec(2, 5, 5), 8).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1", "L0 R2 L3 R3"]);
        assert!(matches!(sole_component(&p.leave), Some(Component::Chain { .. })));
        let q = close_component(&p, 4, 4).unwrap();
        assert_gained(&p, &q, 4, 4);
    }

    #[test]
    fn close_ring_of_two_four_cycles() {
        let base = base_even(&spec(2, 5, 5), 8).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1", "L0 R1 L2 R2"]);
        assert!(matches!(sole_component(&p.leave), Some(Component::Ring { .. })));
        let q = close_component(&p, 4, 4).unwrap();
        assert_gained(&p, &q, 4, 4);
    }

    #[test]
    fn close_rejects_oversized_leave() {
        let base = base_even(&spec(2, 5, 5), 8).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1 L2 R2 L3 R3", "L0 R0 L1 R1"]);
        let err = close_component(&p, 4, 8).unwrap_err();
        assert_eq!(err, Error::LemmaPrecondition("leave size 12 exceeds 10".into()));
    }

    #[test]
    fn gather_chain_and_cycle() {
        let base = base_even(&spec(2, 5, 5), 8).unwrap();
        let p = leave_of(&base, &["L4 R4", "L4 R3", "L0 R0 L1 R1"]);
        let q = gather_to_chain(&p, 4, 4).unwrap();
        assert_eq!(q.lengths(), p.lengths());
        assert!(verify_packing(&q).is_valid());
        assert!(matches!(
            sole_component(&q.leave),
            Some(Component::Chain { .. } | Component::Cycle(_))
        ));
        assert!(!path_pairs(&q.leave, 4, 4).is_empty());
    }

    #[test]
    fn gather_requires_targets_above_component_count() {
        let base = base_even(&spec(2, 5, 5), 8).unwrap();
        let p = leave_of(&base, &["L4 R4", "L4 R3", "L0 R0 L1 R1"]);
        assert!(matches!(gather_to_chain(&p, 2, 6), Err(Error::LemmaPrecondition(_))));
    }

    #[test]
    fn shift_moves_two_units_of_degree() {
        let base = base_even(&spec(2, 5, 5), 8).unwrap();
        let p = leave_of(&base, &["L4 R4", "L4 R3"]);
        let (a, b) = (vx("L4"), vx("L0"));
        let q = shift_degree(&p, a, b).unwrap();
        assert_eq!(q.leave.degree(a), 2);
        assert_eq!(q.leave.degree(b), 2);
        for x in p.spec.vertices().filter(|&x| x != a && x != b) {
            assert_eq!(q.leave.degree(x), p.leave.degree(x), "{x}");
        }
        assert_eq!(q.lengths(), p.lengths());
        assert!(matches!(shift_degree(&p, vx("L0"), vx("L1")), Err(Error::LemmaPrecondition(_))));
        assert!(matches!(shift_degree(&p, a, vx("R0")), Err(Error::InvalidTwin(..))));
    }

    #[test]
    fn concentrate_single_degree_six_vertex() {
        let base = base_even(&spec(2, 7, 7), 8).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1 L2 R2 L3 R3", "L0 R4", "L0 R5"]);
        assert_eq!(p.leave.degree(vx("L0")), 6);
        let mut s = Surgeon::new();
        let q = s.concentrate_degree(&p).unwrap();
        assert_eq!(high_degree(&q.leave).len(), 1);
        assert_eq!(high_degree(&q.leave)[0].1, 4);
        assert_eq!(s.journal().len(), 1);
        assert_eq!(degree_surplus(&q.leave), degree_surplus(&p.leave) - 1);
        assert_eq!(q.lengths(), p.lengths());
    }

    #[test]
    fn concentrate_two_degree_four_vertices() {
        let base = base_even(&spec(2, 7, 7), 8).unwrap();
        let p = leave_of(&base, &["L4 R4", "L4 R5", "L0 R6", "L0 R0 L1 R1"]);
        assert_eq!(high_degree(&p.leave).len(), 2);
        let q = concentrate_degree(&p).unwrap();
        let high = high_degree(&q.leave);
        assert_eq!(high.len(), 1);
        assert_eq!(high[0].1, 4);
        assert!(q.leave.vertices().all(|x| [0, 2, 4].contains(&q.leave.degree(x))));
        let flat = leave_of(&base, &["L0 R0 L1 R1"]);
        assert!(matches!(concentrate_degree(&flat), Err(Error::LemmaPrecondition(_))));
    }

    #[test]
    fn extract_four_and_eight() {
        let base = base_even(&spec(2, 7, 7), 8).unwrap();
        let p = leave_of(&base, &["L0 R0 L1 R1 L2 R2 L3 R3", "L0 R4", "L5 R5"]);
        let q = extract_two_cycles(&p, 4, 8).unwrap();
        assert_gained(&p, &q, 4, 8);
        assert!(matches!(extract_two_cycles(&p, 4, 6), Err(Error::LemmaPrecondition(_))));
    }

    #[test]
    fn join_four_and_two_under_an_eight() {
        let s = spec(2, 7, 7);
        let d = base_even(&s, 8).unwrap();
        assert_eq!(d.cycles[0].len(), 8);
        assert_eq!(d.cycles[1].len(), 4);
        let two = d.cycles.iter().position(|c| c.len() == 2).unwrap();
        let out = join_two_cycles(&d, 0, 1, two).unwrap();
        let mut expected: Vec<u32> = d.lengths();
        expected.remove(expected.iter().position(|&k| k == 4).unwrap());
        expected.remove(expected.iter().position(|&k| k == 2).unwrap());
        expected.push(6);
        let m = LengthSeq::new(expected).unwrap();
        assert!(verify_decomposition(&s, &out.cycles, &m).is_valid());
        assert_eq!(out.cycles[out.cycles.len() - 2].len(), 8);
        assert_eq!(out.cycles[out.cycles.len() - 1].len(), 6);
        assert_eq!(long_lengths(&out), vec![4, 4, 6, 8]);
    }

    #[test]
    fn join_rejects_bound_violations() {
        let d = base_even(&spec(2, 7, 7), 8).unwrap();
        let err = join_two_cycles(&d, 1, 2, 10).unwrap_err();
        assert_eq!(err, Error::LemmaPrecondition("m+m' = 6 > h = 4".into()));
        let d = base_even(&spec(2, 5, 5), 8).unwrap();
        let twos: Vec<usize> = (0..d.cycles.len()).filter(|&i| d.cycles[i].len() == 2).collect();
        let err = join_two_cycles(&d, 0, twos[0], twos[1]).unwrap_err();
        assert_eq!(err, Error::LemmaPrecondition("h+m+m' = 12 > 10".into()));
    }
}
