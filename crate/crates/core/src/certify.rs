//! Independent certificate verification.
//!
//! Nothing here reuses the packing bookkeeping in `model`: edge counts are
//! accumulated from the raw vertex lists into a separate map.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{Cycle, GraphSpec, LengthSeq, Packing, Side, Vertex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(String),
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid => write!(f, "valid"),
            Verdict::Invalid(r) => write!(f, "invalid: {r}"),
        }
    }
}

/// Serialized decomposition claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub lambda: u32,
    pub v: u32,
    pub u: u32,
    #[serde(rename = "M")]
    pub m: Vec<u32>,
    pub cycles: Vec<Vec<Vertex>>,
}

impl Certificate {
    pub fn from_cycles(spec: &GraphSpec, cycles: &[Cycle]) -> Self {
        let mut m: Vec<u32> = cycles.iter().map(|c| c.len() as u32).collect();
        m.sort_unstable();
        Certificate {
            lambda: spec.lambda,
            v: spec.v,
            u: spec.u,
            m,
            cycles: cycles.iter().map(|c| c.vertices().to_vec()).collect(),
        }
    }

    pub fn from_packing(p: &Packing) -> Self {
        Certificate::from_cycles(&p.spec, &p.cycles)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed certificate: {e}"))
    }

    /// One cycle per line.
    pub fn to_text(&self) -> String {
        let mut s = String::from("{\n");
        s += &format!("  \"lambda\": {},\n", self.lambda);
        s += &format!("  \"v\": {},\n", self.v);
        s += &format!("  \"u\": {},\n", self.u);
        s += &format!("  \"M\": {},\n", json(&self.m));
        s += "  \"cycles\": [";
        for (i, c) in self.cycles.iter().enumerate() {
            s += if i == 0 { "\n    " } else { ",\n    " };
            s += &json(c);
        }
        s += if self.cycles.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" };
        s
    }

    /// Checks the certificate against its own header.
    pub fn verify(&self) -> Verdict {
        let spec = match GraphSpec::new(self.lambda, self.v, self.u) {
            Ok(s) => s,
            Err(e) => return Verdict::Invalid(e.to_string()),
        };
        let m = match LengthSeq::new(self.m.clone()) {
            Ok(m) => m,
            Err(e) => return Verdict::Invalid(e.to_string()),
        };
        verify_raw(&spec, &self.cycles, &m)
    }
}

fn json<T: Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("serializable")
}

fn label(side: Side, i: u32) -> String {
    format!("{}{i}", side.tag())
}

fn pair_label(l: u32, r: u32) -> String {
    format!("({},{})", label(Side::Left, l), label(Side::Right, r))
}

/// Accumulates pair counts for raw cycles, rejecting the first malformed one.
fn accumulate(spec: &GraphSpec, cycles: &[Vec<Vertex>]) -> Result<BTreeMap<(u32, u32), u64>, String> {
    let mut counts = BTreeMap::new();
    for (k, c) in cycles.iter().enumerate() {
        let n = c.len();
        if n < 2 || n % 2 == 1 {
            return Err(format!("cycle {k} has length {n}, not even and >= 2"));
        }
        let mut seen = BTreeSet::new();
        for &x in c {
            let size = if x.side == Side::Left { spec.v } else { spec.u };
            if x.index >= size {
                return Err(format!("vertex {x} out of range in cycle {k}"));
            }
            if !seen.insert(x) {
                return Err(format!("repeated vertex {x} in cycle {k}"));
            }
        }
        for i in 0..n {
            let (a, b) = (c[i], c[(i + 1) % n]);
            let (l, r) = match (a.side, b.side) {
                (Side::Left, Side::Right) => (a.index, b.index),
                (Side::Right, Side::Left) => (b.index, a.index),
                _ => return Err(format!("cycle {k} does not alternate at {a},{b}")),
            };
            *counts.entry((l, r)).or_insert(0) += 1;
        }
    }
    Ok(counts)
}

/// Is `cycles` an exact partition of λK_{v,u} with lengths `m`?
pub fn verify_raw(spec: &GraphSpec, cycles: &[Vec<Vertex>], m: &LengthSeq) -> Verdict {
    let counts = match accumulate(spec, cycles) {
        Ok(c) => c,
        Err(r) => return Verdict::Invalid(r),
    };
    let lambda = spec.lambda as u64;
    for l in 0..spec.v {
        for r in 0..spec.u {
            let got = counts.get(&(l, r)).copied().unwrap_or(0);
            if got != lambda {
                return Verdict::Invalid(format!(
                    "pair {} covered {got} of {lambda}",
                    pair_label(l, r)
                ));
            }
        }
    }
    let mut lengths: Vec<u32> = cycles.iter().map(|c| c.len() as u32).collect();
    lengths.sort_unstable();
    if lengths != m.lengths() {
        return Verdict::Invalid(format!(
            "lengths {lengths:?} differ from M {:?}",
            m.lengths()
        ));
    }
    assert_eq!(m.sum(), spec.edge_count(), "valid certificate with sum(M) != λvu");
    Verdict::Valid
}

pub fn verify_decomposition(spec: &GraphSpec, cycles: &[Cycle], m: &LengthSeq) -> Verdict {
    let raw: Vec<Vec<Vertex>> = cycles.iter().map(|c| c.vertices().to_vec()).collect();
    verify_raw(spec, &raw, m)
}

/// Checks well-formedness and that cycles plus leave give λ copies of every pair.
pub fn verify_packing(p: &Packing) -> Verdict {
    let spec = &p.spec;
    if p.leave.dims() != (spec.v, spec.u) {
        return Verdict::Invalid(format!(
            "leave dimensions {:?} differ from ({}, {})",
            p.leave.dims(),
            spec.v,
            spec.u
        ));
    }
    let raw: Vec<Vec<Vertex>> = p.cycles.iter().map(|c| c.vertices().to_vec()).collect();
    let counts = match accumulate(spec, &raw) {
        Ok(c) => c,
        Err(r) => return Verdict::Invalid(r),
    };
    let lambda = spec.lambda as u64;
    for l in 0..spec.v {
        for r in 0..spec.u {
            let used = counts.get(&(l, r)).copied().unwrap_or(0);
            let left_over = p.leave.get(l, r) as u64;
            if used > lambda {
                return Verdict::Invalid(format!(
                    "pair {} used {used} times, leave would be negative",
                    pair_label(l, r)
                ));
            }
            if used + left_over != lambda {
                return Verdict::Invalid(format!(
                    "pair {}: cycles {used} + leave {left_over} != {lambda}",
                    pair_label(l, r)
                ));
            }
        }
    }
    Verdict::Valid
}
