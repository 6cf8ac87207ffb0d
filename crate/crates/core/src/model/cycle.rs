use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::vertex::{pair_of, Vertex};
use crate::error::{Error, Result};

/// A closed alternating vertex sequence in canonical form.
///
/// A 2-cycle `(x, y)` stands for two parallel copies of the pair `xy`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Cycle(Vec<Vertex>);

impl Cycle {
    /// Validates `raw` and returns its least rotation/reflection starting at a left vertex.
    pub fn new(raw: Vec<Vertex>) -> Result<Self> {
        validate(&raw)?;
        Ok(Cycle(canonical_form(&raw)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn contains(&self, x: Vertex) -> bool {
        self.0.contains(&x)
    }

    /// Edge slots as (left index, right index); a 2-cycle yields its pair twice.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let n = self.0.len();
        (0..n).map(move |i| pair_of(self.0[i], self.0[(i + 1) % n]).expect("alternating"))
    }

    /// The two neighbours of `x` on the cycle (equal for a 2-cycle).
    pub fn neighbors_of(&self, x: Vertex) -> Option<(Vertex, Vertex)> {
        let n = self.0.len();
        let i = self.0.iter().position(|&y| y == x)?;
        Some((self.0[(i + n - 1) % n], self.0[(i + 1) % n]))
    }

    /// Image under the transposition (a b).
    pub fn swapped(&self, a: Vertex, b: Vertex) -> Cycle {
        let raw = self.0.iter().map(|x| x.swapped(a, b)).collect::<Vec<_>>();
        Cycle(canonical_form(&raw))
    }

    pub fn mirrored(&self) -> Cycle {
        let raw = self.0.iter().map(|x| x.mirrored()).collect::<Vec<_>>();
        Cycle(canonical_form(&raw))
    }
}

impl Deref for Cycle {
    type Target = [Vertex];

    fn deref(&self) -> &[Vertex] {
        &self.0
    }
}

impl TryFrom<Vec<Vertex>> for Cycle {
    type Error = Error;

    fn try_from(raw: Vec<Vertex>) -> Result<Self> {
        Cycle::new(raw)
    }
}

impl From<Cycle> for Vec<Vertex> {
    fn from(c: Cycle) -> Self {
        c.0
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn validate(raw: &[Vertex]) -> Result<()> {
    let n = raw.len();
    if n < 2 || n % 2 == 1 {
        return Err(Error::MalformedCycle(format!("length {n} is not even and >= 2")));
    }
    for i in 0..n {
        if raw[i].side == raw[(i + 1) % n].side {
            return Err(Error::MalformedCycle(format!(
                "{} and {} are in the same part",
                raw[i],
                raw[(i + 1) % n]
            )));
        }
        if raw[..i].contains(&raw[i]) {
            return Err(Error::MalformedCycle(format!("repeated vertex {}", raw[i])));
        }
    }
    Ok(())
}

fn canonical_form(raw: &[Vertex]) -> Vec<Vertex> {
    let n = raw.len();
    let reversed: Vec<Vertex> = raw.iter().rev().copied().collect();
    let mut best: Option<Vec<Vertex>> = None;
    for seq in [raw, &reversed[..]] {
        for start in 0..n {
            if !seq[start].is_left() {
                continue;
            }
            let cand: Vec<Vertex> = (0..n).map(|i| seq[(start + i) % n]).collect();
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.expect("alternating cycle has a left vertex")
}
