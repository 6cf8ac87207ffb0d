//! Reference implementations kept independent of the library.

#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use bipartite_cycles::certify::verify_packing;
use bipartite_cycles::{Cycle, GraphSpec, Packing, Side, Vertex};

/// Pair multiplicities indexed `[l][r]`.
pub type Mult = Vec<Vec<u32>>;

pub fn complete(lambda: u32, v: u32, u: u32) -> Mult {
    vec![vec![lambda; u as usize]; v as usize]
}

/// Edge counts a list of cycles uses, with a 2-cycle using its pair twice.
pub fn usage(v: u32, u: u32, cycles: &[Cycle]) -> Mult {
    let mut m = vec![vec![0; u as usize]; v as usize];
    for c in cycles {
        let xs = c.vertices();
        for i in 0..xs.len() {
            let (a, b) = (xs[i], xs[(i + 1) % xs.len()]);
            let (l, r) = if a.side == Side::Left { (a, b) } else { (b, a) };
            m[l.index as usize][r.index as usize] += 1;
        }
    }
    m
}

/// Leave recomputed from scratch: λ minus usage.
pub fn leave_of(p: &Packing) -> Option<Mult> {
    let used = usage(p.spec.v, p.spec.u, &p.cycles);
    let mut out = complete(p.spec.lambda, p.spec.v, p.spec.u);
    for l in 0..p.spec.v as usize {
        for r in 0..p.spec.u as usize {
            out[l][r] = out[l][r].checked_sub(used[l][r])?;
        }
    }
    Some(out)
}

pub fn degree(m: &Mult, x: Vertex) -> u32 {
    match x.side {
        Side::Left => m[x.index as usize].iter().sum(),
        Side::Right => m.iter().map(|row| row[x.index as usize]).sum(),
    }
}

/// Plain exhaustive search: does `mult` split into cycles with exactly these length counts?
pub fn naive_decomposable(mult: &mut Mult, lengths: &mut BTreeMap<u32, u32>) -> bool {
    let first = mult
        .iter()
        .enumerate()
        .find_map(|(l, row)| row.iter().position(|&k| k > 0).map(|r| (l, r)));
    let Some((l, r)) = first else {
        return lengths.values().all(|&c| c == 0);
    };
    let ks: Vec<u32> = lengths.iter().filter(|(_, &c)| c > 0).map(|(&k, _)| k).collect();
    for k in ks {
        *lengths.get_mut(&k).unwrap() -= 1;
        let mut found = false;
        if k == 2 {
            if mult[l][r] >= 2 {
                mult[l][r] -= 2;
                found = naive_decomposable(mult, lengths);
                mult[l][r] += 2;
            }
        } else {
            mult[l][r] -= 1;
            let mut ls = vec![l];
            let mut rs = vec![r];
            found = extend(mult, lengths, k as usize, &mut ls, &mut rs);
            mult[l][r] += 1;
        }
        *lengths.get_mut(&k).unwrap() += 1;
        if found {
            return true;
        }
    }
    false
}

/// Grows an alternating path L ls[0], R rs[0], L ls[1], ... and closes it at length k.
fn extend(mult: &mut Mult, lengths: &mut BTreeMap<u32, u32>, k: usize, ls: &mut Vec<usize>, rs: &mut Vec<usize>) -> bool {
    let used = ls.len() + rs.len();
    let last_r = *rs.last().unwrap();
    if used == k {
        let l0 = ls[0];
        if mult[l0][last_r] == 0 {
            return false;
        }
        mult[l0][last_r] -= 1;
        let ok = naive_decomposable(mult, lengths);
        mult[l0][last_r] += 1;
        return ok;
    }
    if ls.len() == rs.len() {
        for nl in 0..mult.len() {
            if ls.contains(&nl) || mult[nl][last_r] == 0 {
                continue;
            }
            mult[nl][last_r] -= 1;
            ls.push(nl);
            let ok = extend_right(mult, lengths, k, ls, rs);
            ls.pop();
            mult[nl][last_r] += 1;
            if ok {
                return true;
            }
        }
    }
    false
}

fn extend_right(mult: &mut Mult, lengths: &mut BTreeMap<u32, u32>, k: usize, ls: &mut Vec<usize>, rs: &mut Vec<usize>) -> bool {
    let last_l = *ls.last().unwrap();
    for nr in 0..mult[0].len() {
        if rs.contains(&nr) || mult[last_l][nr] == 0 {
            continue;
        }
        mult[last_l][nr] -= 1;
        rs.push(nr);
        let ok = extend(mult, lengths, k, ls, rs);
        rs.pop();
        mult[last_l][nr] += 1;
        if ok {
            return true;
        }
    }
    false
}

pub fn naive_decide(spec: &GraphSpec, m: &[u32]) -> bool {
    let total: u64 = m.iter().map(|&k| k as u64).sum();
    if total != spec.edge_count() {
        return false;
    }
    let mut counts = BTreeMap::new();
    for &k in m {
        *counts.entry(k).or_insert(0) += 1;
    }
    naive_decomposable(&mut complete(spec.lambda, spec.v, spec.u), &mut counts)
}

/// Even partitions of `total` with parts at most `max`, built without the library.
pub fn partitions(total: u32, max: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            let mut v = cur.clone();
            v.reverse();
            out.push(v);
            return;
        }
        let mut k = max.min(rest);
        k -= k % 2;
        while k >= 2 {
            cur.push(k);
            go(rest - k, k, cur, out);
            cur.pop();
            k -= 2;
        }
    }
    let mut out = Vec::new();
    go(total, max, &mut Vec::new(), &mut out);
    out
}

pub fn random_packing(rng: &mut impl Rng, s: GraphSpec) -> Packing {
    let mut p = Packing::empty(s);
    let longest = 2 * s.v.min(s.u);
    for _ in 0..rng.gen_range(0..12) {
        let k = 2 * rng.gen_range(1..=longest / 2);
        let mut ls: Vec<u32> = (0..s.v).collect();
        let mut rs: Vec<u32> = (0..s.u).collect();
        ls.shuffle(rng);
        rs.shuffle(rng);
        let mut xs = Vec::new();
        for i in 0..(k / 2) as usize {
            xs.push(Vertex::left(ls[i]));
            xs.push(Vertex::right(rs[i]));
        }
        let _ = p.absorb(Cycle::new(xs).unwrap());
    }
    p
}

pub fn sorted_lengths(p: &Packing) -> Vec<u32> {
    let mut v = p.lengths();
    v.sort_unstable();
    v
}

pub fn untouched(p: &Packing, a: Vertex, b: Vertex) -> Vec<Cycle> {
    let mut v: Vec<Cycle> = p
        .cycles
        .iter()
        .filter(|c| !c.contains(a) && !c.contains(b))
        .cloned()
        .collect();
    v.sort();
    v
}

pub fn check_switch(p: &Packing, q: &Packing, alpha: Vertex, beta: Vertex, origin: Vertex, terminus: Vertex) -> Result<(), String> {
    if sorted_lengths(p) != sorted_lengths(q) {
        return Err("length multiset changed".into());
    }
    let before = leave_of(p).unwrap();
    let after = leave_of(q).ok_or("output overfills a pair")?;
    let size = |m: &Mult| m.iter().flatten().sum::<u32>();
    if size(&before) != size(&after) {
        return Err("leave size changed".into());
    }
    for x in p.spec.vertices() {
        if x != alpha && x != beta && degree(&before, x) != degree(&after, x) {
            return Err(format!("degree of {x} changed"));
        }
    }
    if degree(&before, alpha) + degree(&before, beta) != degree(&after, alpha) + degree(&after, beta) {
        return Err("alpha+beta degree changed".into());
    }
    if untouched(p, alpha, beta) != untouched(q, alpha, beta) {
        return Err("a cycle avoiding alpha and beta changed".into());
    }
    if !verify_packing(q).is_valid() {
        return Err(format!("verify_packing: {}", verify_packing(q)));
    }
    let simple = before.iter().flatten().all(|&k| k <= 1);
    if simple {
        let slot = |x: Vertex, w: Vertex| -> (usize, usize) {
            if x.side == Side::Left {
                (x.index as usize, w.index as usize)
            } else {
                (w.index as usize, x.index as usize)
            }
        };
        let toggled = [
            slot(alpha, origin),
            slot(alpha, terminus),
            slot(beta, origin),
            slot(beta, terminus),
        ];
        for l in 0..before.len() {
            for r in 0..before[0].len() {
                let flip = toggled.contains(&(l, r));
                let changed = before[l][r] != after[l][r];
                if flip != changed || after[l][r] > 1 {
                    return Err(format!("toggle rule broken at (L{l},R{r})"));
                }
            }
        }
    }
    Ok(())
}

