use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A non-decreasing sequence of even cycle lengths m_1 ≤ … ≤ m_t.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct LengthSeq(Vec<u32>);

impl LengthSeq {
    /// Sorts the input; rejects odd entries and entries below 2.
    pub fn new(mut lengths: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = lengths.iter().find(|&&m| m < 2 || m % 2 == 1) {
            return Err(Error::Input(format!("cycle length {bad} is not even and >= 2")));
        }
        lengths.sort_unstable();
        Ok(LengthSeq(lengths))
    }

    pub fn lengths(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&m| m as u64).sum()
    }

    /// ν_k: how many times `k` occurs.
    pub fn nu(&self, k: u32) -> usize {
        self.0.iter().filter(|&&m| m == k).count()
    }

    /// Largest entry m_t.
    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// Second largest entry m_{t-1}.
    pub fn second_last(&self) -> Option<u32> {
        self.0.len().checked_sub(2).map(|i| self.0[i])
    }
}

impl TryFrom<Vec<u32>> for LengthSeq {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        LengthSeq::new(v)
    }
}

impl From<LengthSeq> for Vec<u32> {
    fn from(s: LengthSeq) -> Self {
        s.0
    }
}

impl FromStr for LengthSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lengths = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u32>()
                    .map_err(|_| Error::Input(format!("bad cycle length {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        LengthSeq::new(lengths)
    }
}

impl fmt::Display for LengthSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Every non-decreasing sequence of even parts ≥ 2 summing to `total`, parts capped at `max_part`.
pub fn even_partitions(total: u32, max_part: u32) -> Vec<LengthSeq> {
    fn go(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<LengthSeq>) {
        if rest == 0 {
            let mut v = cur.clone();
            v.reverse();
            out.push(LengthSeq(v));
            return;
        }
        let mut m = cap.min(rest);
        if m % 2 == 1 {
            m -= 1;
        }
        while m >= 2 {
            cur.push(m);
            go(rest - m, m, cur, out);
            cur.pop();
            m -= 2;
        }
    }
    let mut out = Vec::new();
    if total % 2 == 1 {
        return out;
    }
    go(total, max_part, &mut Vec::new(), &mut out);
    out.sort();
    out
}
